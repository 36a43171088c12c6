import math

import numpy as np
import pytest

import qig

PAULI_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
PAULI_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
PAULI_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)

KET0 = np.array([1.0, 0.0], dtype=complex)
KET1 = np.array([0.0, 1.0], dtype=complex)
KETP = np.array([1.0, 1.0], dtype=complex) / math.sqrt(2.0)
KETM = np.array([1.0, -1.0], dtype=complex) / math.sqrt(2.0)


@pytest.fixture
def state_zero():
    return qig.DensityMatrix.from_pure(KET0)


@pytest.fixture
def state_plus():
    return qig.DensityMatrix.from_pure(KETP)


@pytest.fixture
def mixed_unitary_qubit():
    """Eigenvalues (1/4, 3/4) rotated by half the x Pauli."""
    rho = qig.DensityMatrix(np.diag([0.25, 0.75]).astype(complex))
    return qig.unitary_family(rho, PAULI_X / 2.0)


def random_unitary_family(dim: int, seed: int, rank: int | None = None) -> qig.StateFamily:
    rho = qig.random_state(dim, rank=rank, seed=seed)
    h = qig.numerics.random_hermitian(dim, seed=seed + 10_000)
    return qig.unitary_family(rho, h)


def product_family(f1: qig.StateFamily, f2: qig.StateFamily) -> qig.StateFamily:
    """Tensor product of two single-parameter families, with the product rule."""

    def ev(phi):
        a = f1.state(phi).matrix
        b = f2.state(phi).matrix
        return qig.DensityMatrix(np.kron(a, b))

    def der(phi):
        a, b = f1.state(phi).matrix, f2.state(phi).matrix
        da, db = f1.derivatives(phi)[0], f2.derivatives(phi)[0]
        return [np.kron(da, b) + np.kron(a, db)]

    return qig.custom_family(ev, nparams=1, derivative=der)


def mixture_family(f1: qig.StateFamily, f2: qig.StateFamily, lam: float) -> qig.StateFamily:
    def ev(phi):
        return qig.DensityMatrix(lam * f1.state(phi).matrix + (1 - lam) * f2.state(phi).matrix)

    def der(phi):
        return [lam * f1.derivatives(phi)[0] + (1 - lam) * f2.derivatives(phi)[0]]

    return qig.custom_family(ev, nparams=1, derivative=der)
