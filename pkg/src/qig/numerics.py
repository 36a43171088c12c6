"""Dense Hermitian linear algebra and seeded random ensembles."""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import DimensionCap, DomainError, NonHermitianInput, SupportViolation

# Absolute tolerance for Hermitian symmetry of inputs.
HERMITICITY_ATOL = 1e-10
# Eigenvalues in [-EIG_CLIP, 0) are treated as floating-point drift and clipped to 0.
EIG_CLIP = 1e-12
# An eigenvalue counts as outside the support when below SUPPORT_RTOL * max(eigenvalues).
SUPPORT_RTOL = 1e-12

_DEFAULT_DIM_CAP = 4096


def dim_cap() -> int:
    """Largest admissible matrix dimension for tensor powers (QIG_DIM_CAP overrides)."""
    return int(os.environ.get("QIG_DIM_CAP", _DEFAULT_DIM_CAP))


def hermitian_part(a: np.ndarray) -> np.ndarray:
    """Return (A + A†)/2."""
    return (a + a.conj().T) / 2


def check_hermitian(a: np.ndarray, atol: float = HERMITICITY_ATOL) -> np.ndarray:
    """Validate Hermitian symmetry and return the exactly symmetrised matrix."""
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise NonHermitianInput(f"expected a square matrix, got shape {a.shape}")
    if np.max(np.abs(a - a.conj().T)) > atol:
        raise NonHermitianInput("matrix is not Hermitian within tolerance")
    return hermitian_part(a)


@dataclass(frozen=True)
class EigenSystem:
    """Ascending eigenvalues and the unitary of column eigenvectors."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def eigh(a: np.ndarray) -> EigenSystem:
    """Eigendecomposition of a Hermitian matrix with symmetry validation."""
    a = check_hermitian(a)
    w, v = np.linalg.eigh(a)
    return EigenSystem(eigenvalues=w, eigenvectors=v)


def clip_psd_eigenvalues(w: np.ndarray, clip: float = EIG_CLIP) -> np.ndarray:
    """Zero eigenvalues in [-clip, 0); reject anything more negative."""
    scale = max(1.0, float(np.max(np.abs(w))) if w.size else 1.0)
    if np.min(w) < -clip * scale:
        raise DomainError(
            f"matrix is not positive semidefinite (min eigenvalue {np.min(w):.3e})"
        )
    return np.where(w < 0.0, 0.0, w)


def support_mask(w: np.ndarray, rtol: float = SUPPORT_RTOL) -> np.ndarray:
    """Boolean mask of eigenvalues counted as inside the support."""
    cutoff = rtol * max(float(np.max(np.abs(w))), 1e-300)
    return w > cutoff


def matrix_function(a: np.ndarray, f: Callable[[np.ndarray], np.ndarray]) -> np.ndarray:
    """Apply a scalar function to a PSD Hermitian matrix through its eigenbasis."""
    es = eigh(a)
    w = clip_psd_eigenvalues(es.eigenvalues)
    with np.errstate(all="ignore"):
        fw = np.asarray(f(w), dtype=float)
    if not np.all(np.isfinite(fw)):
        raise DomainError("scalar function undefined at an eigenvalue after clipping")
    v = es.eigenvectors
    return hermitian_part((v * fw) @ v.conj().T)


def fractional_power(a: np.ndarray, alpha: float) -> np.ndarray:
    """A^alpha acting as 0 on the kernel (support projector for alpha = 0)."""
    es = eigh(a)
    w = clip_psd_eigenvalues(es.eigenvalues)
    mask = support_mask(w)
    fw = np.zeros_like(w)
    if alpha == 0.0:
        fw[mask] = 1.0
    else:
        fw[mask] = w[mask] ** alpha
    v = es.eigenvectors
    return hermitian_part((v * fw) @ v.conj().T)


def matrix_sqrt(a: np.ndarray) -> np.ndarray:
    return fractional_power(a, 0.5)


def trace_norm(a: np.ndarray) -> float:
    """Sum of absolute eigenvalues of a Hermitian matrix."""
    a = check_hermitian(a)
    return float(np.sum(np.abs(np.linalg.eigvalsh(a))))


def sld_solve(rho: np.ndarray, drho: np.ndarray) -> np.ndarray:
    """Symmetric logarithmic derivative L solving drho = (rho L + L rho)/2.

    Computed entrywise in the eigenbasis of rho as L_nm = 2 drho_nm / (p_n + p_m).
    Pairs with p_n + p_m below the support cutoff are zeroed when the matching
    derivative entry also vanishes; otherwise the derivative leaves the support
    and SupportViolation is raised.
    """
    rho = check_hermitian(rho)
    drho = check_hermitian(drho)
    es = eigh(rho)
    w = clip_psd_eigenvalues(es.eigenvalues)
    v = es.eigenvectors
    d = v.conj().T @ drho @ v
    cutoff = SUPPORT_RTOL * max(float(np.max(w)), 1e-300)
    dcut = 1e-10 * max(1.0, float(np.max(np.abs(d))))
    denom = w[:, None] + w[None, :]
    small = denom < cutoff
    if np.any(small & (np.abs(d) > dcut)):
        raise SupportViolation("derivative has weight outside the state support")
    l = np.zeros_like(d)
    np.divide(2.0 * d, denom, out=l, where=~small)
    return hermitian_part(v @ l @ v.conj().T)


def tensor_power(a: np.ndarray, n: int) -> np.ndarray:
    """n-fold Kronecker power, guarded by the dimension cap."""
    if n < 1:
        raise ValueError("tensor power requires n >= 1")
    a = np.asarray(a)
    if a.shape[0] ** n > dim_cap():
        raise DimensionCap(
            f"dimension {a.shape[0]}^{n} exceeds cap {dim_cap()} (set QIG_DIM_CAP to raise)"
        )
    out = a
    for _ in range(n - 1):
        out = np.kron(out, a)
    return out


def random_hermitian(dim: int, seed: int, scale: float = 1.0) -> np.ndarray:
    rng = np.random.default_rng(seed)
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return hermitian_part(g) * scale


def random_density(dim: int, rank: int | None = None, seed: int = 0) -> np.ndarray:
    """Random density matrix GG†/Tr from a dim x rank complex Gaussian G."""
    rank = dim if rank is None else rank
    if not 1 <= rank <= dim:
        raise ValueError("rank must satisfy 1 <= rank <= dim")
    rng = np.random.default_rng(seed)
    g = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    rho = g @ g.conj().T
    return hermitian_part(rho / np.trace(rho).real)


def random_unitary(dim: int, seed: int = 0) -> np.ndarray:
    """Haar-random unitary via QR with phase fixing."""
    rng = np.random.default_rng(seed)
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(g)
    phases = np.diag(r).copy()
    phases /= np.abs(phases)
    return q * phases


def random_isometry(rows: int, cols: int, seed: int = 0) -> np.ndarray:
    rng = np.random.default_rng(seed)
    g = rng.normal(size=(rows, cols)) + 1j * rng.normal(size=(rows, cols))
    q, r = np.linalg.qr(g)
    phases = np.diag(r).copy()
    phases /= np.abs(phases)
    return q * phases


def random_kraus(dim: int, kraus_count: int, seed: int = 0) -> list[np.ndarray]:
    """Kraus operators of a random channel, from a Haar-random isometry."""
    if kraus_count < 1:
        raise ValueError("kraus_count must be >= 1")
    v = random_isometry(dim * kraus_count, dim, seed)
    return [v[k * dim : (k + 1) * dim, :] for k in range(kraus_count)]


def hessian(fn: Callable[[np.ndarray], float], x: np.ndarray, h: float) -> np.ndarray:
    """Central-difference Hessian of a scalar function at x."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    d = x.size
    out = np.empty((d, d))
    f0 = fn(x)
    for i in range(d):
        ei = np.zeros(d)
        ei[i] = h
        out[i, i] = (fn(x + ei) - 2.0 * f0 + fn(x - ei)) / h**2
    for i in range(d):
        for j in range(i + 1, d):
            ei = np.zeros(d)
            ej = np.zeros(d)
            ei[i] = h
            ej[j] = h
            out[i, j] = (
                fn(x + ei + ej) - fn(x + ei - ej) - fn(x - ei + ej) + fn(x - ei - ej)
            ) / (4.0 * h**2)
            out[j, i] = out[i, j]
    return out


def richardson_hessian(
    fn: Callable[[np.ndarray], float], x: np.ndarray, h: float
) -> tuple[np.ndarray, bool]:
    """Hessian with a step-halving consistency check.

    Returns (hessian, smooth). For an O(h^2)-accurate scheme the difference
    between successive halvings must shrink by a factor near 4; a ratio far
    from that window flags a non-smooth integrand (e.g. an |.|-type kink).
    """
    h1 = hessian(fn, x, h)
    h2 = hessian(fn, x, h / 2)
    h4 = hessian(fn, x, h / 4)
    d1 = float(np.max(np.abs(h1 - h2)))
    d2 = float(np.max(np.abs(h2 - h4)))
    scale = max(1.0, float(np.max(np.abs(h4))))
    if d2 <= 2e-7 * scale:
        return h4, True
    ratio = d1 / d2
    if 3.5 <= ratio <= 4.5:
        return h4 + (h4 - h2) / 3.0, True
    return h4, False


def as_parameter_vector(phi: float | Sequence[float] | np.ndarray) -> np.ndarray:
    v = np.atleast_1d(np.asarray(phi, dtype=float))
    if v.ndim != 1:
        raise ValueError("parameter must be a scalar or 1-d vector")
    return v
