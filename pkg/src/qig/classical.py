"""Discrete probability distributions, divergences, the Fisher metric and audits."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import (
    AlphaOutOfRange,
    DimensionCap,
    GeneratorNotNormalised,
    LengthMismatch,
    NonSmoothDivergence,
    SupportViolation,
)
from .numerics import as_parameter_vector, dim_cap, richardson_hessian

WEIGHT_SUM_ATOL = 1e-12
SUPPORT_CUTOFF = 1e-300  # weights at or below this count as exact zeros


@dataclass(frozen=True)
class ProbDist:
    """Finite discrete probability vector."""

    weights: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        if w.ndim != 1 or w.size < 1:
            raise LengthMismatch("probability vector must be 1-d and non-empty")
        if np.min(w) < 0.0:
            raise LengthMismatch("probabilities must be non-negative")
        if abs(w.sum() - 1.0) > WEIGHT_SUM_ATOL:
            raise LengthMismatch(f"probabilities sum to {w.sum()!r}, not 1")
        object.__setattr__(self, "weights", w)

    def __len__(self) -> int:
        return self.weights.size

    @staticmethod
    def normalised(values: Sequence[float] | np.ndarray) -> "ProbDist":
        """Clip tiny negatives and renormalise exactly (load/Born-rule path)."""
        w = np.asarray(values, dtype=float)
        if np.min(w) < -1e-9:
            raise LengthMismatch("negative weight beyond tolerance")
        w = np.clip(w, 0.0, None)
        s = w.sum()
        if abs(s - 1.0) > 1e-9:
            raise LengthMismatch(f"weights sum to {s!r}, outside 1e-9 of 1")
        return ProbDist(w / s)


@dataclass(frozen=True)
class StochasticMap:
    """Left-stochastic transition matrix (columns are conditional distributions)."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=float)
        if m.ndim != 2:
            raise LengthMismatch("stochastic map must be a matrix")
        if np.min(m) < 0.0:
            raise LengthMismatch("stochastic map entries must be non-negative")
        if np.max(np.abs(m.sum(axis=0) - 1.0)) > WEIGHT_SUM_ATOL:
            raise LengthMismatch("columns of a stochastic map must sum to 1")
        object.__setattr__(self, "matrix", m)


def apply_stochastic(s: StochasticMap, p: ProbDist) -> ProbDist:
    """Transform p by the transition matrix."""
    if s.matrix.shape[1] != len(p):
        raise LengthMismatch("map expects input of length %d" % s.matrix.shape[1])
    return ProbDist.normalised(s.matrix @ p.weights)


# ---------------------------------------------------------------------------
# Convex generators for f-divergences
# ---------------------------------------------------------------------------


def _probe_limit(fn: Callable[[float], float], points: tuple[float, ...]) -> float:
    """Numerical limit of fn along a monotone probe sequence; inf if diverging."""
    vals = []
    for t in points:
        try:
            v = float(fn(t))
        except (OverflowError, ValueError, ZeroDivisionError):
            return math.inf
        if not math.isfinite(v):
            return math.inf
        vals.append(v)
    if abs(vals[2] - vals[1]) <= 1e-9 * max(1.0, abs(vals[2])):
        return vals[2]
    return math.inf


@dataclass(frozen=True)
class FGenerator:
    """Convex f with f(1) = 0, plus its numerically probed boundary behaviour.

    value_at_zero is lim f(t) as t -> 0+ and slope_at_infinity is lim f(t)/t;
    both may be +inf and feed the outside-support conventions of f-divergences.
    """

    fn: Callable[[float], float]
    name: str = "custom"
    value_at_zero: float = field(init=False)
    slope_at_infinity: float = field(init=False)

    def __post_init__(self):
        if abs(float(self.fn(1.0))) > 1e-12:
            raise GeneratorNotNormalised(f"f(1) = {self.fn(1.0)!r} != 0")
        object.__setattr__(
            self, "value_at_zero", _probe_limit(self.fn, (1e-60, 1e-120, 1e-240))
        )
        object.__setattr__(
            self,
            "slope_at_infinity",
            _probe_limit(lambda t: self.fn(t) / t, (1e60, 1e120, 1e240)),
        )

    def __call__(self, t):
        return self.fn(t)


def _as_generator(f) -> FGenerator:
    return f if isinstance(f, FGenerator) else FGenerator(f)


def kl_generator() -> FGenerator:
    return FGenerator(lambda t: -np.log(t), name="kl")


def tv_generator() -> FGenerator:
    return FGenerator(lambda t: 0.5 * np.abs(1.0 - t), name="tv")


def hellinger_generator(alpha: float) -> FGenerator:
    """Generator reproducing the order-alpha Hellinger divergence exactly."""
    if alpha <= 0.0 or alpha == 1.0:
        raise AlphaOutOfRange("hellinger generator needs alpha in (0,1) or (1,inf)")
    return FGenerator(
        lambda t: (1.0 - t ** (1.0 - alpha)) / (1.0 - alpha), name=f"hellinger:{alpha}"
    )


def tsallis_generator(alpha: float) -> FGenerator:
    """Hellinger generator rescaled to unit curvature at t = 1."""
    if alpha <= 0.0 or alpha == 1.0:
        raise AlphaOutOfRange("tsallis generator needs alpha in (0,1) or (1,inf)")
    return FGenerator(
        lambda t: (1.0 - t ** (1.0 - alpha)) / (alpha * (1.0 - alpha)),
        name=f"tsallis:{alpha}",
    )


def generator_from_name(spec: str) -> FGenerator:
    """Parse registry names: kl, tv, hellinger:<a>, tsallis:<a>, chi2."""
    if spec == "kl":
        return kl_generator()
    if spec == "tv":
        return tv_generator()
    if spec == "chi2":
        return hellinger_generator(2.0)
    for prefix, maker in (("hellinger:", hellinger_generator), ("tsallis:", tsallis_generator)):
        if spec.startswith(prefix):
            return maker(float(spec[len(prefix):]))
    raise AlphaOutOfRange(f"unknown generator {spec!r}")


# ---------------------------------------------------------------------------
# Divergences
# ---------------------------------------------------------------------------


def _check_lengths(p: ProbDist, q: ProbDist):
    if len(p) != len(q):
        raise LengthMismatch(f"length mismatch: {len(p)} vs {len(q)}")


def f_divergence(p: ProbDist, q: ProbDist, f) -> float:
    """Sum of p_i f(q_i/p_i) with the standard outside-support conventions.

    Outcomes with p_i = q_i = 0 contribute nothing; q-mass outside the support
    of p contributes lim f(t)/t per unit mass (+inf when that limit diverges);
    p-mass where q vanishes contributes f(0+) (+inf when f diverges at 0).
    """
    _check_lengths(p, q)
    gen = _as_generator(f)
    pw, qw = p.weights, q.weights
    on_p = pw > SUPPORT_CUTOFF
    total = 0.0
    both = on_p & (qw > SUPPORT_CUTOFF)
    if np.any(both):
        with np.errstate(all="ignore"):
            vals = pw[both] * np.asarray(gen.fn(qw[both] / pw[both]), dtype=float)
        if not np.all(np.isfinite(vals)):
            return math.inf
        total += float(vals.sum())
    p_only = float(pw[on_p & (qw <= SUPPORT_CUTOFF)].sum())
    if p_only > 0.0:
        if not math.isfinite(gen.value_at_zero):
            return math.inf
        total += p_only * gen.value_at_zero
    q_only = float(qw[~on_p].sum())
    if q_only > 0.0:
        if not math.isfinite(gen.slope_at_infinity):
            return math.inf
        total += q_only * gen.slope_at_infinity
    return total


def tv_distance(p: ProbDist, q: ProbDist) -> float:
    """Total variation distance."""
    _check_lengths(p, q)
    return 0.5 * float(np.abs(p.weights - q.weights).sum())


def chernoff_coefficient(p: ProbDist, q: ProbDist, alpha: float) -> float:
    """Sum of p^alpha q^(1-alpha) over the common support."""
    _check_lengths(p, q)
    if not 0.0 <= alpha <= 1.0:
        raise AlphaOutOfRange("chernoff coefficient needs alpha in [0,1]")
    mask = (p.weights > SUPPORT_CUTOFF) & (q.weights > SUPPORT_CUTOFF)
    if not np.any(mask):
        return 0.0
    pw, qw = p.weights[mask], q.weights[mask]
    return float(np.sum(pw**alpha * qw ** (1.0 - alpha)))


def _golden_minimise(fn: Callable[[float], float], lo: float, hi: float, xtol: float) -> float:
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = fn(c), fn(d)
    while b - a > xtol:
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = fn(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = fn(d)
    return 0.5 * (a + b)


@dataclass(frozen=True)
class ChernoffResult:
    """Minimised coefficient, its argmin, the information, and any requested order."""

    xi: float
    alpha_star: float
    information: float
    alpha: float | None = None
    xi_alpha: float | None = None


def _minimise_coefficient(coefficient: Callable[[float], float], alpha=None) -> ChernoffResult:
    grid = np.linspace(0.0, 1.0, 33)
    vals = np.array([coefficient(a) for a in grid])
    k = int(np.argmin(vals))
    if vals[k] <= 0.0:
        star, xi = float(grid[k]), 0.0
    else:
        lo = grid[max(k - 1, 0)]
        hi = grid[min(k + 1, len(grid) - 1)]
        star = _golden_minimise(lambda a: math.log(coefficient(a)), lo, hi, 1e-8)
        xi = coefficient(star)
        if xi > vals[k]:
            xi, star = float(vals[k]), float(grid[k])
    info = math.inf if xi <= 0.0 else -math.log(xi)
    req = None if alpha is None else coefficient(alpha)
    return ChernoffResult(xi=xi, alpha_star=star, information=info, alpha=alpha, xi_alpha=req)


def chernoff(p: ProbDist, q: ProbDist, alpha: float | None = None) -> ChernoffResult:
    """Chernoff bound min over [0,1] of the coefficients, and its information."""
    _check_lengths(p, q)
    return _minimise_coefficient(lambda a: chernoff_coefficient(p, q, a), alpha)


def bhattacharyya(p: ProbDist, q: ProbDist) -> float:
    return chernoff_coefficient(p, q, 0.5)


def hellinger_divergence(p: ProbDist, q: ProbDist, alpha: float) -> float:
    if alpha <= 0.0 or alpha == 1.0:
        raise AlphaOutOfRange("hellinger divergence needs alpha in (0,1) or (1,inf)")
    if 0.0 < alpha < 1.0:
        return (1.0 - chernoff_coefficient(p, q, alpha)) / (1.0 - alpha)
    return f_divergence(p, q, hellinger_generator(alpha))


def renyi_divergence(p: ProbDist, q: ProbDist, alpha: float) -> float:
    if alpha <= 0.0 or alpha == 1.0:
        raise AlphaOutOfRange("renyi divergence needs alpha in (0,1) or (1,inf)")
    h = hellinger_divergence(p, q, alpha)
    if not math.isfinite(h):
        return math.inf
    arg = 1.0 + (alpha - 1.0) * h
    if arg <= 0.0:
        return math.inf
    return math.log(arg) / (alpha - 1.0)


def kl_divergence(p: ProbDist, q: ProbDist) -> float:
    """Relative entropy of p with respect to q; +inf outside support containment."""
    _check_lengths(p, q)
    pw, qw = p.weights, q.weights
    on_p = pw > SUPPORT_CUTOFF
    if np.any(on_p & (qw <= SUPPORT_CUTOFF)):
        return math.inf
    return float(np.sum(pw[on_p] * np.log(pw[on_p] / qw[on_p])))


def chernoff_information(p: ProbDist, q: ProbDist) -> float:
    return chernoff(p, q).information


# ---------------------------------------------------------------------------
# Hypothesis-testing error probabilities
# ---------------------------------------------------------------------------


def product_distribution(p: ProbDist, n: int) -> ProbDist:
    """n-fold i.i.d. product over the full outcome lattice."""
    if n < 1:
        raise DimensionCap("n must be >= 1")
    if len(p) ** n > dim_cap():
        raise DimensionCap(f"product lattice {len(p)}^{n} exceeds cap {dim_cap()}")
    w = p.weights
    for _ in range(n - 1):
        w = np.kron(w, p.weights)
    return ProbDist.normalised(w)


def min_error_probability(
    p: ProbDist, q: ProbDist, prior_p: float, prior_q: float, n: int = 1
) -> float:
    """Minimal average error for discriminating n i.i.d. draws of p vs q."""
    _check_lengths(p, q)
    if prior_p < 0 or prior_q < 0 or abs(prior_p + prior_q - 1.0) > 1e-12:
        raise LengthMismatch("priors must be non-negative and sum to 1")
    pn = product_distribution(p, n).weights
    qn = product_distribution(q, n).weights
    return 0.5 * (1.0 - float(np.abs(prior_p * pn - prior_q * qn).sum()))


# ---------------------------------------------------------------------------
# Parametric families and metrics
# ---------------------------------------------------------------------------


@dataclass
class ClassicalFamily:
    """Differentiable map from a parameter vector to a probability vector."""

    evaluator: Callable[[np.ndarray], ProbDist]
    nparams: int = 1
    derivative: Callable[[np.ndarray], list[np.ndarray]] | None = None
    step: float = 1e-5

    def probabilities(self, phi) -> ProbDist:
        return self.evaluator(as_parameter_vector(phi))

    def derivatives(self, phi) -> list[np.ndarray]:
        """Weight derivatives, analytically if available, else central differences.

        Finite-difference output is projected back onto the zero-sum subspace.
        """
        phi = as_parameter_vector(phi)
        if self.derivative is not None:
            return [np.asarray(d, dtype=float) for d in self.derivative(phi)]
        out = []
        for i in range(self.nparams):
            h = self.step * max(1.0, abs(phi[i]))
            e = np.zeros_like(phi)
            e[i] = h
            d = (self.evaluator(phi + e).weights - self.evaluator(phi - e).weights) / (2 * h)
            out.append(d - d.sum() / d.size)
        return out


def bernoulli_family() -> ClassicalFamily:
    """Two-outcome family (theta, 1-theta)."""

    def ev(phi):
        t = float(phi[0])
        return ProbDist(np.array([t, 1.0 - t]))

    return ClassicalFamily(ev, nparams=1, derivative=lambda phi: [np.array([1.0, -1.0])])


def softmax_family(base: np.ndarray, loadings: np.ndarray) -> ClassicalFamily:
    """Exponential family p(phi) = softmax(base + loadings @ phi); always smooth."""
    base = np.asarray(base, dtype=float)
    loadings = np.atleast_2d(np.asarray(loadings, dtype=float))
    if loadings.shape[0] != base.size:
        loadings = loadings.T
    nparams = loadings.shape[1]

    def ev(phi):
        z = base + loadings @ phi
        z -= z.max()
        w = np.exp(z)
        return ProbDist(w / w.sum())

    def der(phi):
        w = ev(phi).weights
        return [w * (loadings[:, i] - float(w @ loadings[:, i])) for i in range(nparams)]

    return ClassicalFamily(ev, nparams=nparams, derivative=der)


def fisher_metric(family: ClassicalFamily, phi) -> np.ndarray:
    """Fisher information matrix sum_x (d_i p)(d_j p)/p over the support."""
    p = family.probabilities(phi).weights
    ders = family.derivatives(phi)
    scale = max(1.0, max(float(np.max(np.abs(d))) for d in ders))
    off = p <= 1e-12 * max(float(p.max()), 1e-300)
    for d in ders:
        if np.any(off & (np.abs(d) > 1e-8 * scale)):
            raise SupportViolation("derivative is nonzero at a zero-weight outcome")
    k = len(ders)
    out = np.empty((k, k))
    on = ~off
    for i in range(k):
        for j in range(i, k):
            out[i, j] = out[j, i] = float(np.sum(ders[i][on] * ders[j][on] / p[on]))
    return out


def fisher_information(family: ClassicalFamily, phi) -> float:
    return float(fisher_metric(family, phi)[0, 0])


def induced_metric_numerical(
    divergence: Callable[[ProbDist, ProbDist], float],
    family: ClassicalFamily,
    phi,
    step: float | None = None,
) -> np.ndarray:
    """Hessian (in the second argument) of the divergence at coincidence.

    Raises NonSmoothDivergence when the step-halving consistency check fails,
    which is how |.|-kinked divergences such as total variation present.
    """
    phi = as_parameter_vector(phi)
    anchor = family.probabilities(phi)
    h = step if step is not None else 1e-3 * max(1.0, float(np.max(np.abs(phi))))

    def fn(theta):
        return float(divergence(anchor, family.probabilities(theta)))

    hess, smooth = richardson_hessian(fn, phi, h)
    if not smooth:
        raise NonSmoothDivergence("second differences fail the step-halving check")
    return 0.5 * (hess + hess.T)


# ---------------------------------------------------------------------------
# Inequality audit
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class InequalityCheck:
    name: str
    lhs: float
    rhs: float
    slack: float
    passed: bool

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "slack": self.slack,
            "pass": self.passed,
        }


@dataclass(frozen=True)
class AuditReport:
    checks: tuple[InequalityCheck, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_dict(self) -> dict:
        return {"pass": self.passed, "checks": [c.to_dict() for c in self.checks]}

    def __getitem__(self, name: str) -> InequalityCheck:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)


def _check(name: str, lhs: float, rhs: float, tol: float = 1e-10) -> InequalityCheck:
    # lhs <= rhs expected; inf on the rhs passes trivially
    if math.isinf(rhs) and rhs > 0:
        slack = math.inf
    elif math.isinf(lhs):
        slack = -math.inf if lhs > 0 else math.inf
    else:
        slack = rhs - lhs
    return InequalityCheck(name=name, lhs=lhs, rhs=rhs, slack=slack, passed=slack >= -tol)


AUDIT_ALPHA_GRID = np.linspace(0.0, 1.0, 21)


def audit_classical(p: ProbDist, q: ProbDist) -> AuditReport:
    """Evaluate the distance/divergence inequality suite with slack values."""
    _check_lengths(p, q)
    t = tv_distance(p, q)
    xi_grid = [chernoff_coefficient(p, q, a) for a in AUDIT_ALPHA_GRID]
    fb = bhattacharyya(p, q)
    res = chernoff(p, q)
    d = kl_divergence(p, q)
    half_d = math.sqrt(d / 2.0) if math.isfinite(d) else math.inf
    checks = (
        _check("fuchs_lower", 1.0 - min(xi_grid), t),
        _check("fuchs_upper", t, math.sqrt(max(0.0, 1.0 - fb**2))),
        _check("chernoff_lower", 1.0 - t, res.xi),
        _check("chernoff_upper", res.xi, math.sqrt(max(0.0, 1.0 - t**2))),
        _check("pinsker", t, half_d),
        _check("pinsker_chernoff", 1.0 - half_d, res.xi),
        _check("relative_chernoff", math.exp(-d) if math.isfinite(d) else 0.0, res.xi),
        _check("bound_below_coefficients", res.xi, min(xi_grid)),
    )
    return AuditReport(checks=checks)


# ---------------------------------------------------------------------------
# Random ensembles
# ---------------------------------------------------------------------------


def random_probdist(dim: int, seed: int = 0) -> ProbDist:
    rng = np.random.default_rng(seed)
    return ProbDist(rng.dirichlet(np.ones(dim)))


def random_stochastic(out_dim: int, in_dim: int, seed: int = 0) -> StochasticMap:
    rng = np.random.default_rng(seed)
    cols = rng.dirichlet(np.ones(out_dim), size=in_dim).T
    return StochasticMap(cols)
