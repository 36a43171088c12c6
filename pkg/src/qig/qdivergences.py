"""Quantum distance and divergence catalogue with the inequality audit."""

from __future__ import annotations

import math

import numpy as np

from .classical import (
    AUDIT_ALPHA_GRID,
    AuditReport,
    ChernoffResult,
    FGenerator,
    _as_generator,
    _check,
    _minimise_coefficient,
)
from .errors import AlphaOutOfRange, DimensionMismatch, LengthMismatch
from .numerics import (
    clip_psd_eigenvalues,
    eigh,
    matrix_sqrt,
    support_mask,
    tensor_power,
    trace_norm,
)
from .states import DensityMatrix

REGULARISATION_EPS = 1e-10
CROSS_MASS_TOL = 1e-12


def _check_dims(rho: DensityMatrix, sigma: DensityMatrix):
    if rho.dim != sigma.dim:
        raise DimensionMismatch(f"dimension mismatch: {rho.dim} vs {sigma.dim}")


def _eigdata(rho: DensityMatrix):
    es = eigh(rho.matrix)
    return clip_psd_eigenvalues(es.eigenvalues), es.eigenvectors


def _overlaps(v1: np.ndarray, v2: np.ndarray) -> np.ndarray:
    """O[i, j] = |<i-th eigenvector of first | j-th of second>|^2."""
    return np.abs(v1.conj().T @ v2) ** 2


def trace_distance(rho: DensityMatrix, sigma: DensityMatrix) -> float:
    """Half the trace norm of the state difference."""
    _check_dims(rho, sigma)
    return 0.5 * trace_norm(rho.matrix - sigma.matrix)


def fidelity(rho: DensityMatrix, sigma: DensityMatrix) -> float:
    """Trace norm of sqrt(rho) sqrt(sigma), via singular values of the product."""
    _check_dims(rho, sigma)
    prod = matrix_sqrt(rho.matrix) @ matrix_sqrt(sigma.matrix)
    return float(min(np.linalg.svd(prod, compute_uv=False).sum(), 1.0))


def fidelity_nested(rho: DensityMatrix, sigma: DensityMatrix) -> float:
    """Equivalent nested-root form Tr sqrt(sqrt(sigma) rho sqrt(sigma))."""
    _check_dims(rho, sigma)
    s = matrix_sqrt(sigma.matrix)
    w = np.linalg.eigvalsh(s @ rho.matrix @ s)
    return float(np.sqrt(np.clip(w, 0.0, None)).sum())


def affinity(rho: DensityMatrix, sigma: DensityMatrix) -> float:
    """Tr sqrt(rho) sqrt(sigma); bounded above by the fidelity."""
    _check_dims(rho, sigma)
    val = np.trace(matrix_sqrt(rho.matrix) @ matrix_sqrt(sigma.matrix)).real
    return float(min(val, 1.0))


def bures_distance(rho: DensityMatrix, sigma: DensityMatrix) -> float:
    return 2.0 * (1.0 - fidelity(rho, sigma))


def bures_angle(rho: DensityMatrix, sigma: DensityMatrix) -> float:
    return float(np.arccos(np.clip(fidelity(rho, sigma), -1.0, 1.0)))


def q_chernoff_coefficient(rho: DensityMatrix, sigma: DensityMatrix, alpha: float) -> float:
    """Tr(rho^alpha sigma^(1-alpha)) with powers restricted to the supports."""
    _check_dims(rho, sigma)
    if not 0.0 <= alpha <= 1.0:
        raise AlphaOutOfRange("chernoff coefficient needs alpha in [0,1]")
    return _xi_general(rho, sigma, alpha)


def _xi_general(rho: DensityMatrix, sigma: DensityMatrix, alpha: float) -> float:
    """Tr(rho^alpha sigma^(1-alpha)) for alpha in [0,2]; +inf on support escape."""
    p, u = _eigdata(rho)
    q, w = _eigdata(sigma)
    ov = _overlaps(u, w)
    sp, sq = support_mask(p), support_mask(q)
    if alpha > 1.0:
        escaped = float(p[sp] @ ov[np.ix_(sp, ~sq)].sum(axis=1)) if np.any(~sq) else 0.0
        if escaped > CROSS_MASS_TOL:
            return math.inf
    pa = np.zeros_like(p)
    pa[sp] = 1.0 if alpha == 0.0 else p[sp] ** alpha
    qa = np.zeros_like(q)
    qa[sq] = 1.0 if alpha == 1.0 else q[sq] ** (1.0 - alpha)
    return float(pa @ ov @ qa)


def q_chernoff(rho: DensityMatrix, sigma: DensityMatrix, alpha: float | None = None) -> ChernoffResult:
    """Quantum Chernoff bound, its argmin and the information."""
    _check_dims(rho, sigma)
    p, u = _eigdata(rho)
    q, w = _eigdata(sigma)
    ov = _overlaps(u, w)
    sp, sq = support_mask(p), support_mask(q)

    def coefficient(a: float) -> float:
        pa = np.zeros_like(p)
        pa[sp] = 1.0 if a == 0.0 else p[sp] ** a
        qa = np.zeros_like(q)
        qa[sq] = 1.0 if a == 1.0 else q[sq] ** (1.0 - a)
        return float(pa @ ov @ qa)

    return _minimise_coefficient(coefficient, alpha)


def q_chernoff_information(rho: DensityMatrix, sigma: DensityMatrix) -> float:
    return q_chernoff(rho, sigma).information


def q_relative_entropy(rho: DensityMatrix, sigma: DensityMatrix) -> float:
    """Tr rho (ln rho - ln sigma); +inf when rho has weight outside supp(sigma)."""
    _check_dims(rho, sigma)
    p, u = _eigdata(rho)
    q, w = _eigdata(sigma)
    ov = _overlaps(u, w)
    sp, sq = support_mask(p), support_mask(q)
    if np.any(~sq):
        escaped = float(p[sp] @ ov[np.ix_(sp, ~sq)].sum(axis=1))
        if escaped > CROSS_MASS_TOL:
            return math.inf
    ent = float(np.sum(p[sp] * np.log(p[sp])))
    cross = float(p[sp] @ ov[np.ix_(sp, sq)] @ np.log(q[sq]))
    return ent - cross


def tsallis(rho: DensityMatrix, sigma: DensityMatrix, alpha: float) -> float:
    """(1 - Tr rho^alpha sigma^(1-alpha)) / (1 - alpha) for alpha in (0,1) u (1,2]."""
    _check_alpha_window(alpha)
    xi = _xi_general(rho, sigma, alpha)
    if not math.isfinite(xi):
        return math.inf
    return (1.0 - xi) / (1.0 - alpha)


def q_renyi(rho: DensityMatrix, sigma: DensityMatrix, alpha: float) -> float:
    """ln Tr(rho^alpha sigma^(1-alpha)) / (alpha - 1) for alpha in (0,1) u (1,2]."""
    _check_alpha_window(alpha)
    xi = _xi_general(rho, sigma, alpha)
    if not math.isfinite(xi):
        return math.inf
    if xi <= 0.0:
        return math.inf
    return math.log(xi) / (alpha - 1.0)


def _check_alpha_window(alpha: float):
    if not (0.0 < alpha < 1.0 or 1.0 < alpha <= 2.0):
        raise AlphaOutOfRange("alpha must lie in (0,1) or (1,2]")


def quantum_f_divergence(rho: DensityMatrix, sigma: DensityMatrix, f) -> float:
    """Two-eigenbasis double sum of p_i f(q_j/p_i) |<phi_i|psi_j>|^2.

    The support conventions mirror the classical ones. When the direct sum is
    ill-defined (an infinite boundary value of f meets nonzero cross-support
    overlap) the full-rank regularisation rho + eps*I, sigma + eps*I is
    evaluated at eps and eps/10; failure of that pair to agree within 1e-5
    relative signals a genuine divergence and +inf is returned.
    """
    _check_dims(rho, sigma)
    gen = _as_generator(f)
    p, u = _eigdata(rho)
    q, w = _eigdata(sigma)
    ov = _overlaps(u, w)
    sp, sq = support_mask(p), support_mask(q)

    mass_zero_q = float(p[sp] @ ov[np.ix_(sp, ~sq)].sum(axis=1)) if np.any(~sq) else 0.0
    mass_zero_p = float(q[sq] @ ov[np.ix_(~sp, sq)].sum(axis=0)) if np.any(~sp) else 0.0
    ill = (mass_zero_q > CROSS_MASS_TOL and not math.isfinite(gen.value_at_zero)) or (
        mass_zero_p > CROSS_MASS_TOL and not math.isfinite(gen.slope_at_infinity)
    )
    if ill:
        d = rho.dim
        eye = np.eye(d)
        vals = []
        for eps in (REGULARISATION_EPS, REGULARISATION_EPS / 10.0):
            w1, v1 = np.linalg.eigh(rho.matrix + eps * eye)
            w2, v2 = np.linalg.eigh(sigma.matrix + eps * eye)
            vals.append(_f_double_sum(w1, v1, w2, v2, gen))
        if abs(vals[1] - vals[0]) <= 1e-5 * max(1.0, abs(vals[1])):
            return vals[1]
        return math.inf

    total = 0.0
    pi = p[sp]
    if np.any(sq):
        ratios = q[sq][None, :] / pi[:, None]
        with np.errstate(all="ignore"):
            vals = pi[:, None] * np.asarray(gen.fn(ratios), dtype=float)
        total += float(np.sum(vals * ov[np.ix_(sp, sq)]))
    if mass_zero_q > 0.0:
        total += gen.value_at_zero * mass_zero_q
    if mass_zero_p > 0.0:
        total += gen.slope_at_infinity * mass_zero_p
    return total


def _f_double_sum(w1, v1, w2, v2, gen: FGenerator) -> float:
    ov = _overlaps(v1, v2)
    ratios = w2[None, :] / w1[:, None]
    vals = w1[:, None] * np.asarray(gen.fn(ratios), dtype=float)
    return float(np.sum(vals * ov))


def q_min_error(
    rho: DensityMatrix,
    sigma: DensityMatrix,
    prior_rho: float,
    prior_sigma: float,
    n: int = 1,
) -> float:
    """Minimal average discrimination error over collective measurements on n copies."""
    _check_dims(rho, sigma)
    if prior_rho < 0 or prior_sigma < 0 or abs(prior_rho + prior_sigma - 1.0) > 1e-12:
        raise LengthMismatch("priors must be non-negative and sum to 1")
    rn = tensor_power(rho.matrix, n)
    sn = tensor_power(sigma.matrix, n)
    return 0.5 * (1.0 - trace_norm(prior_rho * rn - prior_sigma * sn))


def audit_quantum(rho: DensityMatrix, sigma: DensityMatrix) -> AuditReport:
    """Evaluate the quantum distance/divergence inequality suite with slacks."""
    _check_dims(rho, sigma)
    t = trace_distance(rho, sigma)
    fid = fidelity(rho, sigma)
    aff = affinity(rho, sigma)
    res = q_chernoff(rho, sigma)
    xi_grid = [q_chernoff_coefficient(rho, sigma, a) for a in AUDIT_ALPHA_GRID]
    d = q_relative_entropy(rho, sigma)
    half_d = math.sqrt(d / 2.0) if math.isfinite(d) else math.inf
    checks = (
        _check("fuchs_lower", 1.0 - min(xi_grid), t),
        _check("fidelity_lower", 1.0 - fid, t),
        _check("fuchs_upper", t, math.sqrt(max(0.0, 1.0 - fid**2))),
        _check(
            "affinity_chain",
            math.sqrt(max(0.0, 1.0 - fid**2)),
            math.sqrt(max(0.0, 1.0 - aff**2)),
        ),
        _check("affinity_below_fidelity", aff, fid),
        _check("fidelity_below_sqrt_xi", fid, math.sqrt(max(res.xi, 0.0))),
        _check("chernoff_lower", 1.0 - t, res.xi),
        _check("chernoff_below_fidelity", res.xi, fid),
        _check("fidelity_upper", fid, math.sqrt(max(0.0, 1.0 - t**2))),
        _check("pinsker", t, half_d),
        _check("relative_chernoff", math.exp(-d) if math.isfinite(d) else 0.0, res.xi),
        _check("bound_below_coefficients", res.xi, min(xi_grid)),
    )
    return AuditReport(checks=checks)
