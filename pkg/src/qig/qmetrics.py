"""Monotone quantum metrics: kernel functions, metric evaluation and translations."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import (
    AlphaOutOfRange,
    NonMonotoneResult,
    NonSmoothDivergence,
    SupportViolation,
)
from .classical import _as_generator
from .numerics import (
    as_parameter_vector,
    check_hermitian,
    clip_psd_eigenvalues,
    eigh,
    richardson_hessian,
    sld_solve,
    support_mask,
)
from .states import DensityMatrix, StateFamily

DEGENERACY_ATOL = 1e-10
COUPLING_RTOL = 1e-7


@dataclass(frozen=True)
class GFunction:
    """Kernel of a monotone metric: g(1) = 1, g(t) = t g(1/t), sandwiched
    between 2t/(t+1) and (1+t)/2. g0 stores the (finite) limit at t -> 0+."""

    tag: str
    fn: Callable[[np.ndarray], np.ndarray]
    g0: float

    def __call__(self, t):
        return self.fn(np.asarray(t, dtype=float))


def qfi_g() -> GFunction:
    return GFunction("qfi", lambda t: (1.0 + t) / 2.0, 0.5)


def rld_g() -> GFunction:
    return GFunction("rld", lambda t: 2.0 * t / (t + 1.0), 0.0)


def km_g() -> GFunction:
    def fn(t):
        t = np.asarray(t, dtype=float)
        dt = t - 1.0
        with np.errstate(all="ignore"):
            out = dt / np.log1p(dt)
        return np.where(dt == 0.0, 1.0, np.where(t == 0.0, 0.0, out))

    return GFunction("km", fn, 0.0)


def wyd_g(alpha: float) -> GFunction:
    """Interpolating kernel family; reduces to rld at alpha in {-1, 2}."""
    if not -1.0 <= alpha <= 2.0 or alpha in (0.0, 1.0):
        raise AlphaOutOfRange("wyd kernel needs alpha in [-1,2] excluding {0,1}")
    coeff = alpha * (1.0 - alpha)

    def fn(t):
        t = np.asarray(t, dtype=float)
        dt = t - 1.0
        with np.errstate(all="ignore"):
            lt = np.log1p(dt)
            den = np.expm1(alpha * lt) * np.expm1((1.0 - alpha) * lt)
            out = coeff * dt * dt / den
        out = np.where(dt == 0.0, 1.0, out)
        if np.any(t == 0.0):
            out = np.where(t == 0.0, coeff if 0.0 < alpha < 1.0 else 0.0, out)
        return out

    g0 = coeff if 0.0 < alpha < 1.0 else 0.0
    return GFunction(f"wyd:{alpha:g}", fn, g0)


def parse_g_tag(tag: str) -> GFunction:
    """Resolve the CLI/config kernel names qfi, rld, km, wyd:<alpha>."""
    if tag == "qfi":
        return qfi_g()
    if tag == "rld":
        return rld_g()
    if tag == "km":
        return km_g()
    if tag.startswith("wyd:"):
        return wyd_g(float(tag[4:]))
    raise AlphaOutOfRange(f"unknown metric kernel {tag!r}")


VALIDATION_GRID = np.logspace(-6.0, 6.0, 200)


def validate_gfunction(g: GFunction, rtol: float = 1e-10) -> None:
    """Check normalisation, the t <-> 1/t symmetry and the monotone sandwich.

    Grid-based and therefore necessary, not sufficient, for operator
    monotonicity; raises NonMonotoneResult on any failure.
    """
    one = float(g(np.array([1.0]))[0])
    if abs(one - 1.0) > 1e-12:
        raise NonMonotoneResult(f"g(1) = {one!r}, expected 1")
    t = VALIDATION_GRID
    gt = np.asarray(g(t), dtype=float)
    grev = t * np.asarray(g(1.0 / t), dtype=float)
    scale = np.maximum(1.0, np.abs(gt))
    if np.max(np.abs(gt - grev) / scale) > rtol:
        raise NonMonotoneResult("kernel violates g(t) = t g(1/t)")
    lower = 2.0 * t / (t + 1.0)
    upper = (1.0 + t) / 2.0
    if np.any(gt < lower - rtol * np.maximum(1.0, lower)) or np.any(
        gt > upper + rtol * np.maximum(1.0, upper)
    ):
        raise NonMonotoneResult("kernel leaves the monotone sandwich")


def f_to_g(f) -> GFunction:
    """Translate a convex divergence generator into its metric kernel.

    The generator is rescaled to unit curvature at t = 1 (curvature estimated
    by halved central differences); the kernel is 1/g(t) = (f(t) + t f(1/t)) /
    (t-1)^2 with the removable singularity at t = 1 filled by g(1) = 1.
    """
    gen = _as_generator(f)
    h = 1e-3
    curvs = []
    for step in (h, h / 2, h / 4):
        curvs.append(
            (float(gen.fn(1.0 + step)) - 2.0 * float(gen.fn(1.0)) + float(gen.fn(1.0 - step)))
            / step**2
        )
    d1, d2 = abs(curvs[0] - curvs[1]), abs(curvs[1] - curvs[2])
    if d2 <= 1e-9 * max(1.0, abs(curvs[2])):
        curv = curvs[2]
    elif 3.5 <= d1 / d2 <= 4.5:
        curv = curvs[2] + (curvs[2] - curvs[1]) / 3.0
    else:
        raise NonSmoothDivergence("generator has no stable second derivative at t = 1")
    if curv <= 0.0:
        raise NonMonotoneResult("generator curvature at t = 1 must be positive")

    if math.isfinite(gen.value_at_zero) and math.isfinite(gen.slope_at_infinity):
        inv_g0 = (gen.value_at_zero + gen.slope_at_infinity) / curv
        g0 = 1.0 / inv_g0 if inv_g0 > 0 else 0.0
    else:
        g0 = 0.0

    def fn(t):
        t = np.asarray(t, dtype=float)
        dt = t - 1.0
        with np.errstate(all="ignore"):
            sym = (np.asarray(gen.fn(t), dtype=float)
                   + t * np.asarray(gen.fn(np.where(t > 0, 1.0 / t, 1.0)), dtype=float)) / curv
            out = dt * dt / sym
        # near the removable singularity every standard kernel has slope 1/2
        out = np.where(np.abs(dt) < 1e-5, 1.0 + dt / 2.0, out)
        if np.any(t == 0.0):
            out = np.where(t == 0.0, g0, out)
        return out

    g = GFunction(tag=f"from-f:{gen.name}", fn=fn, g0=g0)
    # curvature is known only to ~1e-10 relative, so kernels sitting exactly on
    # the sandwich boundary need the validation tolerance widened accordingly
    validate_gfunction(g, rtol=3e-8)
    return g


# ---------------------------------------------------------------------------
# Metric evaluation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MetricResult:
    """Metric matrix split into eigenvalue (classical) and coherence parts.

    divergent marks semantically infinite components (kernel with g(0) = 0 on
    a rank-deficient state with cross-support derivatives); the matrices then
    carry +inf entries.
    """

    matrix: np.ndarray
    classical_part: np.ndarray
    quantum_part: np.ndarray
    divergent: bool = False

    @property
    def scalar(self) -> float:
        return float(self.matrix[0, 0])


def _kernel_matrix(w: np.ndarray, g: GFunction, sup: np.ndarray) -> np.ndarray:
    """Pairwise weights K[n,m] = 1/(p_m g(p_n/p_m)) with boundary handling.

    Degenerate pairs take the continuous limit 2/(p_n + p_m); pairs straddling
    the support boundary use g(0); pairs with both eigenvalues outside the
    support contribute nothing (their couplings have been vetted upstream).
    """
    wn = w[:, None]
    wm = w[None, :]
    big = np.maximum(wn, wm)
    small = np.minimum(wn, wm)
    onn = sup[:, None]
    onm = sup[None, :]
    both = onn & onm
    cross = onn ^ onm
    k = np.zeros((w.size, w.size))
    with np.errstate(all="ignore"):
        ratio = np.where(big > 0, small / big, 1.0)
        vals = 1.0 / (big * np.asarray(g(ratio), dtype=float))
    k[both] = vals[both]
    if g.g0 > 0.0:
        k[cross] = 1.0 / (big[cross] * g.g0)
    deg = both & (np.abs(wn - wm) <= DEGENERACY_ATOL * max(1.0, float(np.max(w))))
    k[deg] = 2.0 / (wn + wm)[deg]
    np.fill_diagonal(k, 0.0)
    return k


def _eigenframe(family: StateFamily, phi):
    rho = family.state(phi)
    ders = family.derivatives(phi)
    es = eigh(rho.matrix)
    w = clip_psd_eigenvalues(es.eigenvalues)
    v = es.eigenvectors
    dmats = [v.conj().T @ d @ v for d in ders]
    return w, dmats


def g_metric(family: StateFamily, phi, g: GFunction) -> MetricResult:
    """Monotone metric with kernel g at the family point phi.

    The eigenvalue-gradient sum forms the classical part; coherence terms are
    assembled from first-order perturbation theory, which turns the
    eigenvector-derivative overlaps into derivative matrix elements divided by
    eigenvalue gaps and cancels those gaps against the kernel.
    """
    w, dmats = _eigenframe(family, phi)
    sup = support_mask(w)
    npar = len(dmats)
    scale = max(1.0, max(float(np.max(np.abs(d))) for d in dmats))
    ctol = COUPLING_RTOL * scale

    off = ~sup
    if np.any(off):
        for d in dmats:
            if np.max(np.abs(d[np.ix_(off, off)])) > ctol:
                raise SupportViolation("derivative changes the rank at this point")
        if g.g0 == 0.0:
            coupled = any(
                np.max(np.abs(d[np.ix_(sup, off)])) > ctol for d in dmats
            )
            if coupled:
                inf = np.full((npar, npar), math.inf)
                cl = _classical_block(w, dmats, sup)
                return MetricResult(matrix=inf, classical_part=cl, quantum_part=inf, divergent=True)

    cl = _classical_block(w, dmats, sup)
    k = _kernel_matrix(w, g, sup)
    qu = np.empty((npar, npar))
    for i in range(npar):
        for j in range(i, npar):
            qu[i, j] = qu[j, i] = float(np.sum((dmats[i] * dmats[j].T).real * k))
    return MetricResult(matrix=cl + qu, classical_part=cl, quantum_part=qu)


def _classical_block(w, dmats, sup):
    npar = len(dmats)
    cl = np.empty((npar, npar))
    diags = [d.diagonal().real for d in dmats]
    for i in range(npar):
        for j in range(i, npar):
            cl[i, j] = cl[j, i] = float(np.sum(diags[i][sup] * diags[j][sup] / w[sup]))
    return cl


def qfi_metric(family: StateFamily, phi) -> MetricResult:
    return g_metric(family, phi, qfi_g())


def rld_metric(family: StateFamily, phi) -> MetricResult:
    return g_metric(family, phi, rld_g())


def km_metric(family: StateFamily, phi) -> MetricResult:
    return g_metric(family, phi, km_g())


def wyd_metric(family: StateFamily, phi, alpha: float) -> MetricResult:
    return g_metric(family, phi, wyd_g(alpha))


def qfi_metric_sld(family: StateFamily, phi) -> MetricResult:
    """Quantum Fisher information from symmetric logarithmic derivatives.

    Independent route: builds the SLD operators and takes the symmetrised
    product trace, rather than summing the eigenbasis kernel.
    """
    rho = family.state(phi)
    ders = family.derivatives(phi)
    slds = [sld_solve(rho.matrix, d) for d in ders]
    npar = len(slds)
    out = np.empty((npar, npar))
    m = rho.matrix
    for i in range(npar):
        for j in range(i, npar):
            anti = slds[i] @ slds[j] + slds[j] @ slds[i]
            out[i, j] = out[j, i] = 0.5 * float(np.trace(m @ anti).real)
    w, dmats = _eigenframe(family, phi)
    cl = _classical_block(w, dmats, support_mask(w))
    return MetricResult(matrix=out, classical_part=cl, quantum_part=out - cl)


def unitary_g_information(rho: DensityMatrix, hamiltonian: np.ndarray, g: GFunction) -> float:
    """Scalar metric of the orbit exp(-i theta H) rho exp(+i theta H).

    Returns +inf for kernels with g(0) = 0 whenever the generator couples the
    support to the kernel of a rank-deficient state (the pure-state divergence
    of the rld and km informations).
    """
    h = check_hermitian(hamiltonian)
    es = eigh(rho.matrix)
    w = clip_psd_eigenvalues(es.eigenvalues)
    v = es.eigenvectors
    hm = v.conj().T @ h @ v
    sup = support_mask(w)
    if g.g0 == 0.0 and np.any(~sup):
        ctol = 1e-10 * max(1.0, float(np.max(np.abs(hm))))
        coupled = (sup[:, None] & ~sup[None, :]) & (np.abs(hm) > ctol)
        if np.any(coupled):
            return math.inf
    k = _kernel_matrix(w, g, sup)
    dw2 = (w[:, None] - w[None, :]) ** 2
    return float(np.sum(dw2 * k * np.abs(hm) ** 2))


def pure_state_information(g: GFunction, variance: float) -> float:
    """Closed pure-state form 2 Var/g(0); +inf when g vanishes at 0."""
    if g.g0 == 0.0:
        return math.inf
    return 2.0 * variance / g.g0


def wyd_information(rho: DensityMatrix, hamiltonian: np.ndarray, alpha: float) -> float:
    """Skew-information family: alpha(1-alpha)/2 times the wyd:alpha information."""
    if not -1.0 <= alpha <= 2.0 or alpha in (0.0, 1.0):
        raise AlphaOutOfRange("alpha must lie in [-1,2] excluding {0,1}")
    coeff = alpha * (1.0 - alpha) / 2.0
    info = unitary_g_information(rho, hamiltonian, wyd_g(alpha))
    if math.isinf(info):
        return math.inf if coeff > 0 else -math.inf
    return coeff * info


def induced_metric_numerical_q(
    divergence: Callable[[DensityMatrix, DensityMatrix], float],
    family: StateFamily,
    phi,
    step: float | None = None,
) -> np.ndarray:
    """Hessian (in the second argument) of a quantum divergence at coincidence.

    Raises NonSmoothDivergence when step halving fails the factor-4 error
    contraction, as for the trace distance.
    """
    phi = as_parameter_vector(phi)
    anchor = family.state(phi)
    h = step if step is not None else 1e-3 * max(1.0, float(np.max(np.abs(phi))))

    def fn(theta):
        return float(divergence(anchor, family.state(theta)))

    hess, smooth = richardson_hessian(fn, phi, h)
    if not smooth:
        raise NonSmoothDivergence("second differences fail the step-halving check")
    return 0.5 * (hess + hess.T)
