"""Quantum states, measurements, channels and differentiable state families."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .classical import ProbDist
from .errors import DimensionMismatch, ValidationError
from .numerics import (
    as_parameter_vector,
    check_hermitian,
    eigh,
    hermitian_part,
)

TRACE_ATOL = 1e-10
PSD_ATOL = 1e-12
COMPLETENESS_ATOL = 1e-9


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Hermitian, positive-semidefinite, unit-trace matrix."""

    matrix: np.ndarray

    def __post_init__(self):
        m = check_hermitian(self.matrix)
        if abs(np.trace(m).real - 1.0) > TRACE_ATOL:
            raise ValidationError(f"trace is {np.trace(m).real!r}, not 1")
        w = np.linalg.eigvalsh(m)
        if w[0] < -PSD_ATOL:
            raise ValidationError(f"negative eigenvalue {w[0]:.3e} beyond tolerance")
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @staticmethod
    def from_pure(vector: np.ndarray) -> "DensityMatrix":
        v = np.asarray(vector, dtype=complex).ravel()
        v = v / np.linalg.norm(v)
        return DensityMatrix(np.outer(v, v.conj()))

    def purity(self) -> float:
        return float(np.trace(self.matrix @ self.matrix).real)

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.matrix)


@dataclass(frozen=True, eq=False)
class Povm:
    """Sequence of PSD operators resolving the identity."""

    elements: tuple

    def __post_init__(self):
        els = tuple(check_hermitian(e) for e in self.elements)
        if not els:
            raise ValidationError("a POVM needs at least one element")
        dim = els[0].shape[0]
        if any(e.shape[0] != dim for e in els):
            raise DimensionMismatch("POVM elements must share one dimension")
        for e in els:
            w = np.linalg.eigvalsh(e)
            if w[0] < -PSD_ATOL * max(1.0, abs(w[-1])):
                raise ValidationError("POVM element is not positive semidefinite")
        total = sum(els)
        if np.max(np.abs(total - np.eye(dim))) > COMPLETENESS_ATOL:
            raise ValidationError("POVM elements do not sum to the identity")
        object.__setattr__(self, "elements", els)

    @property
    def dim(self) -> int:
        return self.elements[0].shape[0]

    def __len__(self) -> int:
        return len(self.elements)


@dataclass(frozen=True, eq=False)
class KrausChannel:
    """Completely positive trace-preserving map given by Kraus operators."""

    kraus: tuple

    def __post_init__(self):
        ops = tuple(np.asarray(k, dtype=complex) for k in self.kraus)
        if not ops:
            raise ValidationError("a channel needs at least one Kraus operator")
        din = ops[0].shape[1]
        if any(k.shape[1] != din for k in ops):
            raise DimensionMismatch("Kraus operators must share the input dimension")
        total = sum(k.conj().T @ k for k in ops)
        if np.max(np.abs(total - np.eye(din))) > COMPLETENESS_ATOL:
            raise ValidationError("channel is not trace preserving")
        object.__setattr__(self, "kraus", ops)

    @property
    def input_dim(self) -> int:
        return self.kraus[0].shape[1]


def born(rho: DensityMatrix, povm: Povm) -> ProbDist:
    """Outcome distribution p_i = Tr(rho Pi_i)."""
    if rho.dim != povm.dim:
        raise DimensionMismatch("state and POVM dimensions differ")
    probs = np.array([np.trace(rho.matrix @ e).real for e in povm.elements])
    return ProbDist.normalised(probs)


def apply_channel(ch: KrausChannel, rho: DensityMatrix) -> DensityMatrix:
    """Sum of K rho K† over the Kraus operators."""
    if ch.input_dim != rho.dim:
        raise DimensionMismatch("channel and state dimensions differ")
    out = sum(k @ rho.matrix @ k.conj().T for k in ch.kraus)
    return DensityMatrix(hermitian_part(out))


def gibbs(hamiltonian: np.ndarray, beta: float) -> DensityMatrix:
    """Thermal state exp(-beta H)/Z, stabilised by shifting the exponent maximum."""
    es = eigh(check_hermitian(hamiltonian))
    a = -beta * es.eigenvalues
    a -= a.max()
    w = np.exp(a)
    w /= w.sum()
    v = es.eigenvectors
    return DensityMatrix(hermitian_part((v * w) @ v.conj().T))


# ---------------------------------------------------------------------------
# Differentiable state families
# ---------------------------------------------------------------------------


@dataclass
class StateFamily:
    """Differentiable map from a parameter vector to a density matrix.

    kind is one of "unitary", "linear", "thermal" or "custom"; the first three
    carry analytic derivatives, custom families fall back to symmetrised
    central differences with step 1e-5 * max(1, |phi_i|).
    """

    evaluator: Callable[[np.ndarray], DensityMatrix]
    kind: str = "custom"
    nparams: int = 1
    derivative: Callable[[np.ndarray], list[np.ndarray]] | None = None
    step: float = 1e-5

    def state(self, phi) -> DensityMatrix:
        return self.evaluator(as_parameter_vector(phi))

    def derivatives(self, phi) -> list[np.ndarray]:
        phi = as_parameter_vector(phi)
        if self.derivative is not None:
            return [check_hermitian(d) for d in self.derivative(phi)]
        dim = self.state(phi).dim
        out = []
        for i in range(self.nparams):
            h = self.step * max(1.0, abs(phi[i]))
            e = np.zeros_like(phi)
            e[i] = h
            d = (self.state(phi + e).matrix - self.state(phi - e).matrix) / (2 * h)
            d = hermitian_part(d)
            d -= np.trace(d).real / dim * np.eye(dim)
            out.append(d)
        return out


def family_derivatives(family: StateFamily, phi) -> list[np.ndarray]:
    return family.derivatives(phi)


def unitary_family(rho0: DensityMatrix, hamiltonian: np.ndarray) -> StateFamily:
    """rho(theta) = exp(-i theta H) rho0 exp(+i theta H)."""
    h = check_hermitian(hamiltonian)
    es = eigh(h)

    def propagator(theta: float) -> np.ndarray:
        phase = np.exp(-1j * theta * es.eigenvalues)
        return (es.eigenvectors * phase) @ es.eigenvectors.conj().T

    def ev(phi):
        u = propagator(float(phi[0]))
        return DensityMatrix(hermitian_part(u @ rho0.matrix @ u.conj().T))

    def der(phi):
        rho = ev(phi).matrix
        return [hermitian_part(-1j * (h @ rho - rho @ h))]

    return StateFamily(ev, kind="unitary", nparams=1, derivative=der)


def linear_family(rho0: DensityMatrix, direction: np.ndarray) -> StateFamily:
    """rho(theta) = rho0 + theta * direction; valid only near theta = 0."""
    d = check_hermitian(direction)
    if abs(np.trace(d).real) > 1e-10:
        raise ValidationError("direction must be traceless")

    def ev(phi):
        return DensityMatrix(rho0.matrix + float(phi[0]) * d)

    return StateFamily(ev, kind="linear", nparams=1, derivative=lambda phi: [d])


def thermal_family(hamiltonian: np.ndarray) -> StateFamily:
    """Gibbs curve beta -> exp(-beta H)/Z with the analytic eigenbasis derivative."""
    h = check_hermitian(hamiltonian)
    es = eigh(h)

    def ev(phi):
        return gibbs(h, float(phi[0]))

    def der(phi):
        a = -float(phi[0]) * es.eigenvalues
        a -= a.max()
        p = np.exp(a)
        p /= p.sum()
        mean = float(p @ es.eigenvalues)
        dp = -(es.eigenvalues - mean) * p
        v = es.eigenvectors
        return [hermitian_part((v * dp) @ v.conj().T)]

    return StateFamily(ev, kind="thermal", nparams=1, derivative=der)


def custom_family(
    evaluator: Callable[[np.ndarray], DensityMatrix],
    nparams: int = 1,
    derivative: Callable[[np.ndarray], list[np.ndarray]] | None = None,
    step: float = 1e-5,
) -> StateFamily:
    return StateFamily(evaluator, kind="custom", nparams=nparams, derivative=derivative, step=step)


def channel_composed_family(family: StateFamily, ch: KrausChannel) -> StateFamily:
    """Apply a fixed (parameter-independent) channel pointwise along a family."""

    def ev(phi):
        return apply_channel(ch, family.evaluator(phi))

    def der(phi):
        return [
            hermitian_part(sum(k @ d @ k.conj().T for k in ch.kraus))
            for d in family.derivatives(phi)
        ]

    return StateFamily(ev, kind="custom", nparams=family.nparams, derivative=der)


def validate_unitary_spectrum(family: StateFamily, points=(0.3, 1.1), atol=1e-9) -> bool:
    """Check that eigenvalues are parameter-independent at two sample points."""
    w0 = family.state(points[0]).eigenvalues()
    w1 = family.state(points[1]).eigenvalues()
    return bool(np.max(np.abs(w0 - w1)) <= atol)


# ---------------------------------------------------------------------------
# Seeded test ensembles
# ---------------------------------------------------------------------------


def random_state(dim: int, rank: int | None = None, seed: int = 0) -> DensityMatrix:
    from .numerics import random_density

    return DensityMatrix(random_density(dim, rank, seed))


def random_channel(dim: int, kraus_count: int, seed: int = 0) -> KrausChannel:
    from .numerics import random_kraus

    return KrausChannel(tuple(random_kraus(dim, kraus_count, seed)))


def random_povm(dim: int, outcomes: int, seed: int = 0) -> Povm:
    """Random POVM from Gaussian PSD blocks whitened by their sum."""
    rng = np.random.default_rng(seed)
    blocks = []
    for _ in range(outcomes):
        g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
        blocks.append(g @ g.conj().T)
    total = sum(blocks)
    w, v = np.linalg.eigh(total)
    whiten = (v * (1.0 / np.sqrt(w))) @ v.conj().T
    return Povm(tuple(hermitian_part(whiten @ b @ whiten) for b in blocks))
