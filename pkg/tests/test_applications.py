import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import qig
from qig.numerics import random_hermitian

from conftest import PAULI_Z, random_unitary_family


def random_thermal_spec(seed: int) -> qig.ThermalSpec:
    rng = np.random.default_rng(seed)
    return qig.ThermalSpec(
        hamiltonian=random_hermitian(2, seed),
        beta=float(rng.uniform(0.3, 2.0)),
        perturbation=random_hermitian(2, seed + 1),
    )


class TestCramerRao:
    def test_bernoulli(self):
        res = qig.cramer_rao(qig.bernoulli_family(), 0.5, nu=1)
        assert res.bound == pytest.approx(0.25)
        assert res.information == pytest.approx(4.0)
        assert not res.quantum

    def test_pure_qubit_repetitions(self, state_plus):
        fam = qig.unitary_family(state_plus, PAULI_Z / 2.0)
        res = qig.cramer_rao(fam, 0.0, nu=100)
        assert res.information == pytest.approx(1.0, abs=1e-10)
        assert res.bound == pytest.approx(0.01, abs=1e-10)
        assert res.quantum

    def test_quantum_dominates_measured(self):
        for seed in range(100):
            fam = random_unitary_family(2, seed)
            qfi = qig.cramer_rao(fam, 0.1).information
            for k in range(20):
                povm = qig.random_povm(2, 3, seed=1_000_000 + 20 * seed + k)

                def ev(phi, fam=fam, povm=povm):
                    return qig.born(fam.state(phi), povm)

                cfam = qig.ClassicalFamily(ev, nparams=1)
                assert qig.fisher_information(cfam, 0.1) <= qfi + 1e-8

    def test_validation(self):
        with pytest.raises(qig.ValidationError):
            qig.cramer_rao(qig.bernoulli_family(), 0.5, nu=0)


class TestSpeedLimit:
    def test_static_trajectory(self):
        rho = qig.random_state(2, seed=5)
        fam = qig.custom_family(lambda phi: rho, derivative=lambda phi: [np.zeros((2, 2))])
        res = qig.speed_limit(fam, tau=1.0, g="qfi", steps=20)
        assert res.path_length == pytest.approx(0.0, abs=1e-12)
        assert res.geodesic_length == pytest.approx(0.0, abs=1e-7)
        assert res.tau_min == 0.0 and res.satisfied

    def test_pure_rotation_saturates(self, state_plus):
        fam = qig.unitary_family(state_plus, PAULI_Z / 2.0)
        res = qig.speed_limit(fam, tau=math.pi / 2.0, g="qfi", steps=64)
        assert res.path_length == pytest.approx(res.geodesic_length, rel=1e-6)
        assert res.tau_min == pytest.approx(res.tau, rel=1e-6)
        assert res.satisfied

    def test_wyd_variant_valid(self, state_plus):
        fam = qig.unitary_family(state_plus, PAULI_Z / 2.0)
        res = qig.speed_limit(fam, tau=0.8, g="wyd:0.5", steps=64)
        assert res.satisfied
        assert res.tau_min <= res.tau + 1e-8

    def test_dephasing_interrupted_path_exceeds_geodesic(self, state_plus):
        h = PAULI_Z / 2.0

        def ev(phi):
            t = float(phi[0])
            phase = np.exp(-1j * t * np.diag(h).real)
            u = np.diag(phase)
            rho = u @ state_plus.matrix @ u.conj().T
            # starts slightly dephased so the state stays valid for t just below 0,
            # where the central-difference probe lands
            damp = math.exp(-0.5 * (t + 0.1))
            out = rho.copy()
            out[0, 1] *= damp
            out[1, 0] *= damp
            return qig.DensityMatrix(out)

        fam = qig.custom_family(ev, nparams=1)
        res = qig.speed_limit(fam, tau=1.2, g="qfi", steps=150)
        assert res.path_length > res.geodesic_length + 1e-3
        assert res.tau_min < res.tau
        assert res.satisfied

    def test_unsupported_kernel(self, state_plus):
        fam = qig.unitary_family(state_plus, PAULI_Z / 2.0)
        with pytest.raises(qig.AlphaOutOfRange):
            qig.speed_limit(fam, tau=1.0, g="rld")


class TestThermalState:
    def test_zero_hamiltonian(self):
        spec = qig.ThermalSpec(np.zeros((3, 3)), beta=1.0, perturbation=np.zeros((3, 3)))
        np.testing.assert_allclose(qig.thermal_state(spec).matrix, np.eye(3) / 3.0, atol=1e-12)

    def test_low_temperature_limit(self):
        spec = qig.ThermalSpec(np.diag([0.0, 1.0]), beta=50.0, perturbation=np.zeros((2, 2)))
        pops = np.linalg.eigvalsh(qig.thermal_state(spec).matrix)
        assert pops[0] < 1e-20

    def test_qubit_gibbs_oracle(self):
        spec = qig.ThermalSpec(np.diag([0.0, 1.0]), beta=1.0, perturbation=np.zeros((2, 2)))
        z = 1.0 + math.exp(-1.0)
        np.testing.assert_allclose(
            np.diag(qig.thermal_state(spec).matrix).real,
            [1.0 / z, math.exp(-1.0) / z],
            atol=1e-12,
        )

    def test_beta_validation(self):
        with pytest.raises(qig.ValidationError):
            qig.ThermalSpec(np.eye(2), beta=0.0, perturbation=np.eye(2))


class TestClausius:
    def test_no_change(self):
        spec = random_thermal_spec(3)
        rep = qig.clausius_report(spec, qig.thermal_state(spec))
        assert rep.relative_entropy == pytest.approx(0.0, abs=1e-10)
        assert rep.beta_delta_energy == pytest.approx(0.0, abs=1e-10)
        assert rep.delta_entropy == pytest.approx(0.0, abs=1e-10)

    def test_commuting_temperature_change_oracle(self):
        h = np.diag([0.0, 1.0]).astype(complex)
        spec = qig.ThermalSpec(h, beta=1.0, perturbation=np.zeros((2, 2)))
        final = qig.gibbs(h, 1.7)
        rep = qig.clausius_report(spec, final)

        def scalar_gibbs(beta):
            z = 1.0 + math.exp(-beta)
            return np.array([1.0 / z, math.exp(-beta) / z])

        p0, p1 = scalar_gibbs(1.0), scalar_gibbs(1.7)
        d_oracle = float(np.sum(p1 * np.log(p1 / p0)))
        de_oracle = float(p1[1] - p0[1])
        ds_oracle = float(-(p1 * np.log(p1)).sum() + (p0 * np.log(p0)).sum())
        assert rep.relative_entropy == pytest.approx(d_oracle, abs=1e-12)
        assert rep.beta_delta_energy == pytest.approx(de_oracle, abs=1e-12)
        assert rep.delta_entropy == pytest.approx(ds_oracle, abs=1e-12)
        assert rep.identity_residual < 1e-9

    @given(st.integers(0, 10_000))
    @settings(max_examples=50, deadline=None)
    def test_channel_evolution_slack_nonnegative(self, seed):
        spec = random_thermal_spec(seed)
        ch = qig.random_channel(2, 2, seed=seed + 77)
        final = qig.apply_channel(ch, qig.thermal_state(spec))
        rep = qig.clausius_report(spec, final)
        assert rep.clausius_slack >= -1e-10
        assert rep.identity_residual < 1e-9


class TestKmPerturbation:
    def test_zero_perturbation(self):
        spec = qig.ThermalSpec(np.diag([0.0, 1.0]), beta=1.0, perturbation=np.zeros((2, 2)))
        res = qig.km_perturbation(spec, 0.05)
        assert res.km_information == pytest.approx(0.0, abs=1e-12)
        assert res.exact_deviation == pytest.approx(0.0, abs=1e-12)

    def test_hamiltonian_perturbation_is_variance(self):
        h = np.diag([0.0, 1.0, 2.5]).astype(complex)
        spec = qig.ThermalSpec(h, beta=0.9, perturbation=h)
        e = np.array([0.0, 1.0, 2.5])
        p = np.exp(-0.9 * e)
        p /= p.sum()
        variance = float(p @ e**2 - (p @ e) ** 2)
        assert qig.km_information_thermal(spec) == pytest.approx(variance, abs=1e-9)

    def test_matches_km_metric_scalar(self):
        spec = random_thermal_spec(11)
        kmi = qig.km_information_thermal(spec)

        def ev(phi):
            return qig.gibbs(
                spec.beta * spec.hamiltonian - float(phi[0]) * spec.perturbation, 1.0
            )

        fam = qig.custom_family(ev, nparams=1)
        assert kmi == pytest.approx(qig.km_metric(fam, 0.0).scalar, abs=1e-7)

    def test_relative_entropy_equals_deviation(self):
        spec = random_thermal_spec(23)
        res = qig.km_perturbation(spec, 0.08)
        assert res.exact_relative_entropy == pytest.approx(res.exact_deviation, abs=1e-10)

    @pytest.mark.parametrize("seed", range(20))
    def test_residual_ratio_cubic(self, seed):
        # lam small enough that the cubic remainder dominates the quartic one
        spec = random_thermal_spec(seed)
        res = qig.km_perturbation(spec, 0.02)
        assert 6.5 <= res.residual_ratio <= 9.5

    def test_lambda_cap(self):
        with pytest.raises(qig.ValidationError):
            qig.km_perturbation(random_thermal_spec(1), 0.2)
