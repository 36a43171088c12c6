import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import qig
from qig.numerics import random_hermitian

from conftest import PAULI_X, PAULI_Z, KETP, mixture_family, product_family, random_unitary_family

SUPPORT_TOL = 1e-12


def unitary_information_oracle(rho_matrix, h, pair_kernel) -> float:
    """Independent eigenbasis sum: pair_kernel(p_n, p_m) times |H_nm|^2."""
    w, v = np.linalg.eigh(rho_matrix)
    hm = v.conj().T @ h @ v
    total = 0.0
    for n in range(len(w)):
        for m in range(len(w)):
            if n == m or (w[n] < SUPPORT_TOL and w[m] < SUPPORT_TOL):
                continue
            total += pair_kernel(max(w[n], 0.0), max(w[m], 0.0)) * abs(hm[n, m]) ** 2
    return total


# hand-simplified pair kernels (p_n - p_m)^2 / (p_m g(p_n/p_m)) for the named metrics
def kernel_qfi(pn, pm):
    return 2.0 * (pn - pm) ** 2 / (pn + pm)


def kernel_rld(pn, pm):
    return (pn - pm) ** 2 * (pn + pm) / (2.0 * pn * pm)


def kernel_km(pn, pm):
    return (pn - pm) * (math.log(pn) - math.log(pm)) if pn != pm else 0.0


def make_kernel_wyd(alpha):
    def kernel(pn, pm):
        return (pn**alpha - pm**alpha) * (pn ** (1 - alpha) - pm ** (1 - alpha)) / (
            alpha * (1 - alpha)
        )

    return kernel


class TestGFunctions:
    @pytest.mark.parametrize(
        "g",
        [
            qig.qfi_g(),
            qig.rld_g(),
            qig.km_g(),
            qig.wyd_g(-1.0),
            qig.wyd_g(-0.5),
            qig.wyd_g(0.25),
            qig.wyd_g(0.5),
            qig.wyd_g(0.75),
            qig.wyd_g(1.5),
            qig.wyd_g(2.0),
        ],
    )
    def test_named_kernels_are_standard(self, g):
        qig.validate_gfunction(g)

    def test_wyd_edge_orders_equal_rld(self):
        t = np.logspace(-4, 4, 50)
        np.testing.assert_allclose(qig.wyd_g(2.0)(t), qig.rld_g()(t), atol=1e-10)
        np.testing.assert_allclose(qig.wyd_g(-1.0)(t), qig.rld_g()(t), atol=1e-10)

    def test_wyd_half_closed_form(self):
        t = np.logspace(-6, 6, 100)
        np.testing.assert_allclose(
            qig.wyd_g(0.5)(t), 0.25 * (1.0 + np.sqrt(t)) ** 2, rtol=1e-12
        )

    def test_alpha_range(self):
        for bad in (0.0, 1.0, 2.5, -1.5):
            with pytest.raises(qig.AlphaOutOfRange):
                qig.wyd_g(bad)

    def test_non_monotone_rejected(self):
        bad = qig.GFunction("bad", lambda t: np.asarray(t, dtype=float), 0.0)
        with pytest.raises(qig.NonMonotoneResult):
            qig.validate_gfunction(bad)

    def test_parse_tags(self):
        assert qig.parse_g_tag("qfi").tag == "qfi"
        assert qig.parse_g_tag("wyd:0.5").tag == "wyd:0.5"
        with pytest.raises(qig.AlphaOutOfRange):
            qig.parse_g_tag("nope")


class TestFToG:
    def test_log_generator_gives_km(self):
        g = qig.f_to_g(qig.kl_generator())
        t = np.logspace(-5, 5, 80)
        np.testing.assert_allclose(g(t), qig.km_g()(t), rtol=1e-7)
        assert g.g0 == pytest.approx(0.0, abs=1e-12)

    def test_sqrt_generator_gives_wyd_half(self):
        gen = qig.FGenerator(lambda t: (1.0 - np.sqrt(t)) / 0.25, name="hell-half-rescaled")
        g = qig.f_to_g(gen)
        t = np.logspace(-5, 5, 80)
        np.testing.assert_allclose(g(t), 0.25 * (1.0 + np.sqrt(t)) ** 2, rtol=1e-7)
        assert g.g0 == pytest.approx(0.25, rel=1e-6)

    def test_chi2_generator_gives_rld(self):
        g = qig.f_to_g(qig.generator_from_name("chi2"))
        t = np.logspace(-5, 5, 80)
        np.testing.assert_allclose(g(t), qig.rld_g()(t), rtol=1e-7)

    def test_tv_generator_not_smooth(self):
        with pytest.raises(qig.NonSmoothDivergence):
            qig.f_to_g(qig.tv_generator())

    def test_non_monotone_generator_rejected(self):
        gen = qig.FGenerator(lambda t: (t - 1.0) ** 2 + (t - 1.0) ** 4, name="quartic")
        with pytest.raises(qig.NonMonotoneResult):
            qig.f_to_g(gen)


class TestDeskValues:
    """Eigenvalues (1/4, 3/4) driven by half the x Pauli."""

    def test_values_match_oracle_and_order(self, mixed_unitary_qubit):
        rho = mixed_unitary_qubit.state(0.0).matrix
        h = PAULI_X / 2.0
        cases = [
            ("qfi", qig.qfi_metric, kernel_qfi, 0.25),
            ("wyd", lambda f, t: qig.wyd_metric(f, t, 0.5), make_kernel_wyd(0.5), 0.26795),
            ("km", qig.km_metric, kernel_km, 0.27465),
            ("rld", qig.rld_metric, kernel_rld, 1.0 / 3.0),
        ]
        values = []
        for _, route, kernel, approx_val in cases:
            got = route(mixed_unitary_qubit, 0.0).scalar
            oracle = unitary_information_oracle(rho, h, kernel)
            assert got == pytest.approx(oracle, abs=1e-6)
            assert got == pytest.approx(approx_val, abs=1e-5)
            values.append(got)
        assert values == sorted(values)

    def test_unitary_information_route(self, mixed_unitary_qubit):
        rho = mixed_unitary_qubit.state(0.0)
        h = PAULI_X / 2.0
        assert qig.unitary_g_information(rho, h, qig.qfi_g()) == pytest.approx(0.25, abs=1e-12)
        assert qig.unitary_g_information(rho, h, qig.rld_g()) == pytest.approx(1 / 3, abs=1e-12)

    def test_km_explicit_form(self):
        # asymmetric printed form 2 sum (p_n - p_m) ln p_n <n|dm><dm|n>
        fam = random_unitary_family(3, seed=5)
        w, v = np.linalg.eigh(fam.state(0.2).matrix)
        d = v.conj().T @ fam.derivatives(0.2)[0] @ v
        total = 0.0
        for n in range(3):
            for m in range(3):
                if n == m:
                    continue
                overlap = d[n, m] / (w[m] - w[n])
                total += 2.0 * (w[n] - w[m]) * math.log(w[n]) * abs(overlap) ** 2
        assert qig.km_metric(fam, 0.2).scalar == pytest.approx(total, abs=1e-8)


class TestGMetric:
    def test_diagonal_family_reduces_to_fisher(self):
        def ev(phi):
            t = float(phi[0])
            return qig.DensityMatrix(np.diag([0.3 + t, 0.7 - t]).astype(complex))

        fam = qig.custom_family(ev, derivative=lambda phi: [np.diag([1.0, -1.0]).astype(complex)])
        classical = qig.bernoulli_family()
        for g in (qig.qfi_g(), qig.rld_g(), qig.km_g(), qig.wyd_g(0.5)):
            res = qig.g_metric(fam, 0.1, g)
            assert np.max(np.abs(res.quantum_part)) < 1e-12
            assert res.scalar == pytest.approx(
                1.0 / 0.4 + 1.0 / 0.6, rel=1e-10
            )
        assert qig.qfi_metric(fam, 0.1).scalar == pytest.approx(
            qig.fisher_information(classical, 0.4), rel=1e-10
        )

    def test_split_adds_up(self):
        fam = random_unitary_family(3, seed=8)
        res = qig.km_metric(fam, 0.3)
        np.testing.assert_allclose(res.matrix, res.classical_part + res.quantum_part, atol=1e-12)

    @given(st.integers(0, 5_000))
    @settings(max_examples=25, deadline=None)
    def test_route_equivalence_sld_vs_kernel(self, seed):
        dim = 2 + seed % 2
        fam = random_unitary_family(dim, seed)
        a = qig.qfi_metric_sld(fam, 0.1).scalar
        b = qig.qfi_metric(fam, 0.1).scalar
        assert a == pytest.approx(b, abs=1e-8 * max(1.0, abs(b)))

    def test_degenerate_spectrum_linear_family(self):
        # eigenvalue crossing at the evaluation point: metric must follow the
        # classical information of the split eigenvalues, matching the SLD route
        fam = qig.linear_family(qig.DensityMatrix(np.eye(2) / 2.0), PAULI_X / 2.0)
        res = qig.qfi_metric(fam, 0.0)
        assert res.scalar == pytest.approx(1.0, abs=1e-10)
        assert qig.qfi_metric_sld(fam, 0.0).scalar == pytest.approx(1.0, abs=1e-10)
        hess = qig.induced_metric_numerical_q(
            lambda a, b: qig.bures_distance(a, b), fam, 0.0
        )[0, 0]
        assert hess == pytest.approx(0.5 * res.scalar, rel=1e-4)

    def test_support_violation_on_rank_change(self):
        rho = qig.DensityMatrix(np.diag([1.0, 0.0]).astype(complex))
        fam = qig.linear_family(rho, np.diag([-1.0, 1.0]).astype(complex))
        with pytest.raises(qig.SupportViolation):
            qig.qfi_metric(fam, 0.0)

    def test_rld_divergent_on_rank_deficient(self):
        rho = qig.DensityMatrix.from_pure(KETP)
        fam = qig.unitary_family(rho, PAULI_Z / 2.0)
        res = qig.rld_metric(fam, 0.0)
        assert res.divergent
        assert math.isinf(res.scalar)
        qfi = qig.qfi_metric(fam, 0.0)
        assert not qfi.divergent
        assert qfi.scalar == pytest.approx(1.0, abs=1e-10)

    def test_multiparameter_metric(self):
        rho0 = qig.random_state(2, seed=21)

        def ev(phi):
            fam_x = qig.unitary_family(rho0, PAULI_X / 2.0)
            inner = fam_x.state(phi[0])
            fam_z = qig.unitary_family(inner, PAULI_Z / 2.0)
            return fam_z.state(phi[1])

        fam = qig.custom_family(ev, nparams=2)
        res = qig.qfi_metric(fam, np.array([0.2, 0.4]))
        assert res.matrix.shape == (2, 2)
        w = np.linalg.eigvalsh(res.matrix)
        assert w[0] > -1e-9
        np.testing.assert_allclose(res.matrix, res.matrix.T, atol=1e-10)


class TestInformations:
    def test_commuting_gives_zero(self):
        rho = qig.DensityMatrix(np.diag([0.25, 0.75]).astype(complex))
        assert qig.unitary_g_information(rho, PAULI_Z, qig.qfi_g()) == pytest.approx(
            0.0, abs=1e-12
        )
        assert qig.wyd_information(rho, PAULI_Z, 0.5) == pytest.approx(0.0, abs=1e-12)

    def test_pure_state_variance_forms(self, state_plus):
        h = PAULI_Z / 2.0
        var = 0.25  # <H^2> - <H>^2 for |+> and Z/2
        assert qig.unitary_g_information(state_plus, h, qig.qfi_g()) == pytest.approx(
            4.0 * var, abs=1e-10
        )
        assert qig.pure_state_information(qig.qfi_g(), var) == pytest.approx(1.0)
        assert qig.unitary_g_information(state_plus, h, qig.km_g()) == math.inf
        assert qig.unitary_g_information(state_plus, h, qig.rld_g()) == math.inf
        assert qig.wyd_information(state_plus, h, 0.5) == pytest.approx(var, abs=1e-10)

    def test_wyd_desk_value(self, mixed_unitary_qubit):
        rho = mixed_unitary_qubit.state(0.0)
        val = qig.wyd_information(rho, PAULI_X / 2.0, 0.5)
        assert val == pytest.approx(0.033494, abs=1e-6)
        assert val == pytest.approx((2.0 - math.sqrt(3.0)) / 8.0, abs=1e-12)

    @given(st.integers(0, 10_000))
    @settings(max_examples=25, deadline=None)
    def test_commutator_form_cross_check(self, seed):
        # the skew information equals minus one half of the commutator trace
        rho = qig.random_state(3, seed=seed)
        h = random_hermitian(3, seed + 5)
        for alpha in (0.3, 0.5, 0.8):
            ra = qig.fractional_power(rho.matrix, alpha)
            rb = qig.fractional_power(rho.matrix, 1.0 - alpha)
            ca = ra @ h - h @ ra
            cb = rb @ h - h @ rb
            commutator_form = -0.5 * np.trace(ca @ cb).real
            assert qig.wyd_information(rho, h, alpha) == pytest.approx(
                commutator_form, abs=1e-9
            )

    def test_wyd_metric_minimal_at_half(self):
        fam = random_unitary_family(2, seed=13)
        base = qig.wyd_metric(fam, 0.0, 0.5).scalar
        for alpha in (-0.8, -0.25, 0.2, 0.35, 0.65, 0.9, 1.4, 1.9):
            assert base <= qig.wyd_metric(fam, 0.0, alpha).scalar + 1e-10

    def test_alpha_range(self):
        rho = qig.random_state(2, seed=2)
        with pytest.raises(qig.AlphaOutOfRange):
            qig.wyd_information(rho, PAULI_X, 2.3)


class TestMetricProperties:
    @given(st.integers(0, 10_000))
    @settings(max_examples=25, deadline=None)
    def test_hierarchy(self, seed):
        fam = random_unitary_family(2, seed)
        qfi = qig.qfi_metric(fam, 0.0).scalar
        rld = qig.rld_metric(fam, 0.0).scalar
        for g in (qig.wyd_g(-0.5), qig.wyd_g(0.25), qig.wyd_g(0.5), qig.km_g()):
            val = qig.g_metric(fam, 0.0, g).scalar
            assert val >= qfi - 1e-9
            assert val <= rld + 1e-9

    def test_g_ordering_reverses(self):
        fam = random_unitary_family(3, seed=31)
        # qfi kernel dominates the others pointwise, so its metric is smallest
        pairs = [(qig.qfi_g(), qig.wyd_g(0.5)), (qig.wyd_g(0.5), qig.km_g()), (qig.km_g(), qig.rld_g())]
        t = np.logspace(-6, 6, 100)
        for g_big, g_small in pairs:
            assert np.all(g_big(t) >= g_small(t) - 1e-12)
            assert qig.g_metric(fam, 0.0, g_big).scalar <= qig.g_metric(fam, 0.0, g_small).scalar + 1e-9

    @given(st.integers(0, 10_000))
    @settings(max_examples=15, deadline=None)
    def test_additivity(self, seed):
        f1 = random_unitary_family(2, seed)
        f2 = random_unitary_family(2, seed + 999)
        prod = product_family(f1, f2)
        for g in (qig.qfi_g(), qig.km_g()):
            total = qig.g_metric(prod, 0.1, g).scalar
            parts = qig.g_metric(f1, 0.1, g).scalar + qig.g_metric(f2, 0.1, g).scalar
            assert total == pytest.approx(parts, abs=1e-8 * max(1.0, parts))

    @given(st.integers(0, 10_000))
    @settings(max_examples=15, deadline=None)
    def test_convexity(self, seed):
        f1 = random_unitary_family(2, seed)
        f2 = random_unitary_family(2, seed + 999)
        lam = 0.3
        mix = mixture_family(f1, f2, lam)
        for g in (qig.qfi_g(), qig.wyd_g(0.5)):
            mixed = qig.g_metric(mix, 0.1, g).scalar
            bound = lam * qig.g_metric(f1, 0.1, g).scalar + (1 - lam) * qig.g_metric(f2, 0.1, g).scalar
            assert mixed <= bound + 1e-9

    @given(st.integers(0, 10_000))
    @settings(max_examples=15, deadline=None)
    def test_channel_monotonicity(self, seed):
        fam = random_unitary_family(2, seed)
        ch = qig.random_channel(2, 2, seed=seed + 17)
        evolved = qig.channel_composed_family(fam, ch)
        for g in (qig.qfi_g(), qig.km_g(), qig.rld_g(), qig.wyd_g(0.5)):
            assert (
                qig.g_metric(evolved, 0.1, g).scalar
                <= qig.g_metric(fam, 0.1, g).scalar + 1e-9
            )

    @given(st.integers(0, 10_000))
    @settings(max_examples=25, deadline=None)
    def test_wyd_qfi_sandwich_unitary(self, seed):
        fam = random_unitary_family(2, seed)
        qfi = qig.qfi_metric(fam, 0.0).scalar
        info = 0.125 * qig.wyd_metric(fam, 0.0, 0.5).scalar  # alpha(1-alpha)/2 at 1/2
        assert 4.0 * info <= qfi + 1e-9
        assert qfi <= 8.0 * info + 1e-9

    @given(st.integers(0, 10_000))
    @settings(max_examples=25, deadline=None)
    def test_derivative_trace_norm_bound(self, seed):
        fam = random_unitary_family(2 + seed % 2, seed)
        d = fam.derivatives(0.2)[0]
        qfi = qig.qfi_metric(fam, 0.2).scalar
        assert qig.trace_norm(d) ** 2 <= qfi + 1e-9


class TestInducedQuantumMetric:
    def test_bures_gives_half_qfi(self, mixed_unitary_qubit):
        hess = qig.induced_metric_numerical_q(qig.bures_distance, mixed_unitary_qubit, 0.0)
        assert hess[0, 0] == pytest.approx(0.125, rel=1e-4)

    def test_relative_entropy_gives_km(self, mixed_unitary_qubit):
        hess = qig.induced_metric_numerical_q(qig.q_relative_entropy, mixed_unitary_qubit, 0.0)
        assert hess[0, 0] == pytest.approx(qig.km_metric(mixed_unitary_qubit, 0.0).scalar, rel=1e-4)

    def test_trace_distance_not_smooth(self, mixed_unitary_qubit):
        with pytest.raises(qig.NonSmoothDivergence):
            qig.induced_metric_numerical_q(qig.trace_distance, mixed_unitary_qubit, 0.0)

    def test_chernoff_information_quarter_wyd(self, mixed_unitary_qubit):
        # second-order expansion of the bound pins the Hessian at a quarter of wyd:0.5
        div = lambda a, b: qig.q_chernoff(a, b).information
        hess = qig.induced_metric_numerical_q(div, mixed_unitary_qubit, 0.0)
        expected = 0.25 * qig.wyd_metric(mixed_unitary_qubit, 0.0, 0.5).scalar
        assert hess[0, 0] == pytest.approx(expected, rel=1e-3)
