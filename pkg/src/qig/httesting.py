"""Optimal discrimination measurements, exact n-copy error curves and simulation."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np
from scipy import stats

from .classical import ProbDist, bhattacharyya
from .errors import DimensionCap, LengthMismatch, RegularisationFailure
from .numerics import (
    dim_cap,
    eigh,
    fractional_power,
    hermitian_part,
    matrix_sqrt,
    trace_norm,
)
from .qdivergences import q_chernoff
from .states import DensityMatrix, Povm, born

WILSON_Z_99 = 2.5758293035489004


def _check_priors(prior_rho: float, prior_sigma: float):
    if prior_rho < 0 or prior_sigma < 0 or abs(prior_rho + prior_sigma - 1.0) > 1e-12:
        raise LengthMismatch("priors must be non-negative and sum to 1")


def helstrom_povm(
    rho: DensityMatrix, sigma: DensityMatrix, prior_rho: float = 0.5, prior_sigma: float = 0.5
) -> Povm:
    """Two-outcome projective measurement onto the sign subspaces of the
    weighted difference. Zero eigenvalues are assigned to the first projector."""
    _check_priors(prior_rho, prior_sigma)
    delta = prior_rho * rho.matrix - prior_sigma * sigma.matrix
    es = eigh(delta)
    keep = es.eigenvalues >= 0.0
    v = es.eigenvectors[:, keep]
    plus = hermitian_part(v @ v.conj().T)
    minus = np.eye(rho.dim) - plus
    return Povm((plus, minus))


def m_matrix(rho_m: np.ndarray, sigma_m: np.ndarray) -> np.ndarray:
    """rho^(-1/2) sqrt(sqrt(rho) sigma sqrt(rho)) rho^(-1/2) for invertible rho."""
    r_half = matrix_sqrt(rho_m)
    r_inv_half = fractional_power(rho_m, -0.5)
    inner = matrix_sqrt(r_half @ sigma_m @ r_half)
    return hermitian_part(r_inv_half @ inner @ r_inv_half)


def _rank_one_povm(vectors: np.ndarray) -> Povm:
    els = tuple(np.outer(vectors[:, i], vectors[:, i].conj()) for i in range(vectors.shape[1]))
    return Povm(els)


def fidelity_optimal_povm(
    rho: DensityMatrix, sigma: DensityMatrix, eps: float = 1e-10
) -> Povm:
    """Rank-one measurement whose outcome statistics saturate the fidelity.

    Built from the eigenbasis of the M matrix; rank-deficient rho is lifted to
    full rank with rho + eps*1 (normalised), and the measured overlap must
    agree between eps and eps/10 or RegularisationFailure is raised.
    """
    w = rho.eigenvalues()
    if w[0] > 1e-8:
        return _rank_one_povm(eigh(m_matrix(rho.matrix, sigma.matrix)).eigenvectors)
    eye = np.eye(rho.dim)
    candidates = []
    measured = []
    for e in (eps, eps / 10.0):
        lifted = (rho.matrix + e * eye) / (1.0 + e * rho.dim)
        povm = _rank_one_povm(eigh(m_matrix(lifted, sigma.matrix)).eigenvectors)
        candidates.append(povm)
        measured.append(bhattacharyya(born(rho, povm), born(sigma, povm)))
    if abs(measured[1] - measured[0]) > 1e-5 * max(1.0, abs(measured[1])):
        raise RegularisationFailure("measured overlap does not converge in eps")
    return candidates[1]


def product_povm(povm: Povm, n: int) -> Povm:
    """n-fold tensor product measurement acting locally on each copy."""
    if povm.dim**n > dim_cap():
        raise DimensionCap(f"product dimension {povm.dim}^{n} exceeds cap {dim_cap()}")
    els = []
    for combo in itertools.product(range(len(povm)), repeat=n):
        block = povm.elements[combo[0]]
        for k in combo[1:]:
            block = np.kron(block, povm.elements[k])
        els.append(block)
    return Povm(tuple(els))


@dataclass(frozen=True)
class NcopyResult:
    """Exact collective errors per copy count with the exponent fit."""

    ns: tuple
    errors: tuple
    rates: tuple
    chernoff_xi: float
    chernoff_information: float
    fitted_exponent: float
    bound_satisfied: bool

    def to_dict(self) -> dict:
        return {
            "ns": list(self.ns),
            "errors": list(self.errors),
            "rates": list(self.rates),
            "chernoff_xi": self.chernoff_xi,
            "chernoff_information": self.chernoff_information,
            "fitted_exponent": self.fitted_exponent,
            "bound_satisfied": self.bound_satisfied,
        }


def ncopy_discrimination(
    rho: DensityMatrix,
    sigma: DensityMatrix,
    prior_rho: float = 0.5,
    prior_sigma: float = 0.5,
    n_max: int = 8,
) -> NcopyResult:
    """Exact minimal collective errors for n = 1..n_max plus an exponent fit.

    The fit is an unweighted least-squares slope of -ln(error) against n over
    the upper half of the range, where sublinear contamination is smallest.
    """
    _check_priors(prior_rho, prior_sigma)
    if rho.dim**n_max > dim_cap():
        raise DimensionCap(f"dimension {rho.dim}^{n_max} exceeds cap {dim_cap()}")
    res = q_chernoff(rho, sigma)
    ns, errors, rates = [], [], []
    rn = rho.matrix.copy()
    sn = sigma.matrix.copy()
    for n in range(1, n_max + 1):
        err = 0.5 * (1.0 - trace_norm(prior_rho * rn - prior_sigma * sn))
        ns.append(n)
        errors.append(err)
        rates.append(-math.log(err) / n if err > 0.0 else math.inf)
        if n < n_max:
            rn = np.kron(rn, rho.matrix)
            sn = np.kron(sn, sigma.matrix)
    bound_ok = all(e <= res.xi**n + 1e-12 for n, e in zip(ns, errors))
    half = [k for k in range(len(ns)) if ns[k] >= (n_max + 1) / 2 and errors[k] > 0.0]
    if len(half) >= 2:
        xs = np.array([ns[k] for k in half], dtype=float)
        ys = np.array([-math.log(errors[k]) for k in half])
        slope = float(np.polyfit(xs, ys, 1)[0])
    else:
        slope = math.inf if any(e == 0.0 for e in errors) else 0.0
    return NcopyResult(
        ns=tuple(ns),
        errors=tuple(errors),
        rates=tuple(rates),
        chernoff_xi=res.xi,
        chernoff_information=res.information,
        fitted_exponent=slope,
        bound_satisfied=bound_ok,
    )


def wilson_interval(successes: int, trials: int, z: float = WILSON_Z_99) -> tuple[float, float]:
    """Wilson score interval (99% by default)."""
    if trials < 1:
        raise LengthMismatch("trials must be >= 1")
    phat = successes / trials
    denom = 1.0 + z**2 / trials
    centre = (phat + z**2 / (2 * trials)) / denom
    half = z * math.sqrt(phat * (1 - phat) / trials + z**2 / (4 * trials**2)) / denom
    return (max(0.0, centre - half), min(1.0, centre + half))


@dataclass(frozen=True)
class SimulationResult:
    trials: int
    type1: float
    type1_interval: tuple[float, float]
    type2: float
    type2_interval: tuple[float, float]
    average_error: float
    average_interval: tuple[float, float]
    analytic_error: float

    def to_dict(self) -> dict:
        return {
            "trials": self.trials,
            "type1": self.type1,
            "type1_interval": list(self.type1_interval),
            "type2": self.type2,
            "type2_interval": list(self.type2_interval),
            "average_error": self.average_error,
            "average_interval": list(self.average_interval),
            "analytic_error": self.analytic_error,
        }


def simulate_ht(
    rho: DensityMatrix,
    sigma: DensityMatrix,
    povm: Povm,
    prior_rho: float = 0.5,
    prior_sigma: float = 0.5,
    trials: int = 10_000,
    seed: int = 0,
) -> SimulationResult:
    """Monte Carlo discrimination with the weighted likelihood decision rule.

    Each trial samples the hypothesis from the priors, an outcome from the
    Born distribution, and decides via prior_rho*p_i vs prior_sigma*q_i with
    ties resolved toward the null (rho).
    """
    _check_priors(prior_rho, prior_sigma)
    if trials < 1:
        raise LengthMismatch("trials must be >= 1")
    p = born(rho, povm).weights
    q = born(sigma, povm).weights
    decide_rho = prior_rho * p >= prior_sigma * q
    analytic = float(np.minimum(prior_rho * p, prior_sigma * q).sum())

    rng = np.random.default_rng(seed)
    truth_is_rho = rng.random(trials) < prior_rho
    n_rho = int(truth_is_rho.sum())
    outcomes = np.empty(trials, dtype=np.int64)
    outcomes[truth_is_rho] = rng.choice(len(p), size=n_rho, p=p)
    outcomes[~truth_is_rho] = rng.choice(len(q), size=trials - n_rho, p=q)
    said_rho = decide_rho[outcomes]

    err1 = int(np.sum(truth_is_rho & ~said_rho))
    err2 = int(np.sum(~truth_is_rho & said_rho))
    type1 = err1 / max(n_rho, 1)
    type2 = err2 / max(trials - n_rho, 1)
    avg_err = (err1 + err2) / trials
    return SimulationResult(
        trials=trials,
        type1=type1,
        type1_interval=wilson_interval(err1, max(n_rho, 1)),
        type2=type2,
        type2_interval=wilson_interval(err2, max(trials - n_rho, 1)),
        average_error=avg_err,
        average_interval=wilson_interval(err1 + err2, trials),
        analytic_error=analytic,
    )


def neyman_pearson_type2(p: ProbDist, q: ProbDist, n: int, level: float) -> float:
    """Exact optimal type-II error for n i.i.d. draws of a binary distribution.

    Randomised likelihood-ratio test holding the type-I error (rejecting the
    null p when p is true) at exactly `level`; computed from binomial tails.
    """
    if len(p) != 2 or len(q) != 2:
        raise LengthMismatch("exact product test implemented for binary outcomes")
    p0, q0 = float(p.weights[0]), float(q.weights[0])
    if min(p0, q0) <= 0.0 or max(p0, q0) >= 1.0:
        raise LengthMismatch("outcome probabilities must be interior")
    if p0 < q0:
        p0, q0 = 1.0 - p0, 1.0 - q0
    # log-likelihood ratio increases with the count k of outcome 0
    pk = stats.binom.pmf(np.arange(n + 1), n, p0)
    qk = stats.binom.pmf(np.arange(n + 1), n, q0)
    cum_p = np.cumsum(pk)  # P_p(K <= k)
    below = np.concatenate(([0.0], cum_p[:-1]))  # P_p(K < k)
    kstar = int(np.searchsorted(below + pk, level, side="left"))
    kstar = min(kstar, n)
    gamma = (level - below[kstar]) / pk[kstar] if pk[kstar] > 0 else 0.0
    gamma = min(max(gamma, 0.0), 1.0)
    beta = float(qk[kstar + 1 :].sum()) + (1.0 - gamma) * float(qk[kstar])
    return min(max(beta, 0.0), 1.0)


def stein_rate_fit(p: ProbDist, q: ProbDist, ns, level: float) -> float:
    """Least-squares slope of -ln(type-II error) against n at fixed type-I level."""
    xs, ys = [], []
    for n in ns:
        beta = neyman_pearson_type2(p, q, int(n), level)
        if beta > 0.0:
            xs.append(float(n))
            ys.append(-math.log(beta))
    if len(xs) < 2:
        return math.inf
    return float(np.polyfit(np.array(xs), np.array(ys), 1)[0])
