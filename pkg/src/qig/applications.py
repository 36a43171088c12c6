"""Estimation bounds, evolution speed limits and thermodynamic identities."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .classical import ClassicalFamily, fisher_information
from .errors import AlphaOutOfRange, SupportViolation, ValidationError
from .numerics import check_hermitian, clip_psd_eigenvalues, eigh
from .qdivergences import affinity, fidelity, q_relative_entropy
from .qmetrics import GFunction, g_metric, parse_g_tag, qfi_metric_sld
from .states import DensityMatrix, StateFamily, gibbs


@dataclass(frozen=True)
class ThermalSpec:
    """Hamiltonian, inverse temperature and a Hermitian perturbation."""

    hamiltonian: np.ndarray
    beta: float
    perturbation: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "hamiltonian", check_hermitian(self.hamiltonian))
        object.__setattr__(self, "perturbation", check_hermitian(self.perturbation))
        if not self.beta > 0:
            raise ValidationError("beta must be positive")


def thermal_state(spec: ThermalSpec) -> DensityMatrix:
    return gibbs(spec.hamiltonian, spec.beta)


def von_neumann_entropy(rho: DensityMatrix) -> float:
    w = clip_psd_eigenvalues(np.linalg.eigvalsh(rho.matrix))
    w = w[w > 1e-300]
    return -float(np.sum(w * np.log(w)))


@dataclass(frozen=True)
class CramerRaoResult:
    bound: float
    information: float
    repetitions: int
    quantum: bool

    def to_dict(self) -> dict:
        return {
            "bound": self.bound,
            "information": self.information,
            "repetitions": self.repetitions,
            "quantum": self.quantum,
        }


def cramer_rao(family, phi, nu: int = 1) -> CramerRaoResult:
    """Single-parameter estimation bound 1/(nu * information)."""
    if nu < 1:
        raise ValidationError("nu must be >= 1")
    if isinstance(family, StateFamily):
        if family.nparams != 1:
            raise ValidationError("scalar-parameter families only")
        info = qfi_metric_sld(family, phi).scalar
        quantum = True
    elif isinstance(family, ClassicalFamily):
        if family.nparams != 1:
            raise ValidationError("scalar-parameter families only")
        info = fisher_information(family, phi)
        quantum = False
    else:
        raise ValidationError("family must be a ClassicalFamily or StateFamily")
    bound = math.inf if info <= 0.0 else 1.0 / (nu * info)
    return CramerRaoResult(bound=bound, information=info, repetitions=nu, quantum=quantum)


@dataclass(frozen=True)
class SpeedLimitResult:
    path_length: float
    geodesic_length: float
    tau: float
    tau_min: float
    satisfied: bool

    def to_dict(self) -> dict:
        return {
            "path_length": self.path_length,
            "geodesic_length": self.geodesic_length,
            "tau": self.tau,
            "tau_min": self.tau_min,
            "satisfied": self.satisfied,
        }


def speed_limit(
    trajectory: StateFamily, tau: float, g: GFunction | str = "qfi", steps: int = 200
) -> SpeedLimitResult:
    """Minimal-time bound tau_min = geodesic length / time-averaged metric speed.

    Supported kernels are the two with closed-form geodesics: "qfi" (spherical
    angle of the fidelity) and "wyd:0.5" (the same angle built on the
    affinity). Both geodesic lengths carry a factor 2 fixing the normalisation
    so that a pure-state unitary rotation exactly saturates the bound.
    """
    gf = parse_g_tag(g) if isinstance(g, str) else g
    if gf.tag == "qfi":
        endpoint = fidelity
    elif gf.tag == "wyd:0.5":
        endpoint = affinity
    else:
        raise AlphaOutOfRange("speed limit supports the qfi and wyd:0.5 kernels only")
    if tau < 0:
        raise ValidationError("tau must be non-negative")
    if tau == 0.0:
        return SpeedLimitResult(0.0, 0.0, 0.0, 0.0, True)
    ts = np.linspace(0.0, tau, steps + 1)
    speeds = np.array(
        [math.sqrt(max(g_metric(trajectory, t, gf).scalar, 0.0)) for t in ts]
    )
    path = float(np.trapezoid(speeds, ts))
    overlap = endpoint(trajectory.state(0.0), trajectory.state(tau))
    geodesic = 2.0 * float(np.arccos(np.clip(overlap, -1.0, 1.0)))
    average_speed = path / tau
    tau_min = 0.0 if average_speed == 0.0 else geodesic / average_speed
    return SpeedLimitResult(
        path_length=path,
        geodesic_length=geodesic,
        tau=tau,
        tau_min=tau_min,
        satisfied=tau >= tau_min - 1e-8,
    )


@dataclass(frozen=True)
class ClausiusReport:
    relative_entropy: float
    beta_delta_energy: float
    delta_entropy: float
    free_energy_difference: float
    clausius_slack: float
    identity_residual: float

    def to_dict(self) -> dict:
        return {
            "relative_entropy": self.relative_entropy,
            "beta_delta_energy": self.beta_delta_energy,
            "delta_entropy": self.delta_entropy,
            "free_energy_difference": self.free_energy_difference,
            "clausius_slack": self.clausius_slack,
            "identity_residual": self.identity_residual,
        }


def clausius_report(spec: ThermalSpec, final: DensityMatrix) -> ClausiusReport:
    """Entropy/energy balance of a process leaving the thermal state.

    Verifies that the relative entropy of the final state with respect to the
    initial thermal state equals beta * d<H> - dS (entropy and energy changes
    are final minus initial) and reports the Clausius slack.
    """
    omega0 = thermal_state(spec)
    if final.dim != omega0.dim:
        raise ValidationError("final state dimension does not match the Hamiltonian")
    d = q_relative_entropy(final, omega0)
    if not math.isfinite(d):
        raise SupportViolation("final state escapes the support of the thermal state")
    h = spec.hamiltonian
    de = float(np.trace(final.matrix @ h).real - np.trace(omega0.matrix @ h).real)
    ds = von_neumann_entropy(final) - von_neumann_entropy(omega0)
    beta_de = spec.beta * de
    slack = beta_de - ds
    return ClausiusReport(
        relative_entropy=d,
        beta_delta_energy=beta_de,
        delta_entropy=ds,
        free_energy_difference=slack / spec.beta,
        clausius_slack=slack,
        identity_residual=abs(d - slack),
    )


@dataclass(frozen=True)
class KmPerturbationResult:
    km_information: float
    leading_deviation: float
    exact_deviation: float
    exact_relative_entropy: float
    residual_ratio: float
    lam: float

    def to_dict(self) -> dict:
        return {
            "km_information": self.km_information,
            "leading_deviation": self.leading_deviation,
            "exact_deviation": self.exact_deviation,
            "exact_relative_entropy": self.exact_relative_entropy,
            "residual_ratio": self.residual_ratio,
            "lam": self.lam,
        }


def _log_mean_kernel(w: np.ndarray) -> np.ndarray:
    """Divided differences (w_n - w_m)/(ln w_n - ln w_m), diagonal w_n."""
    lw = np.log(w)
    dn = w[:, None] - w[None, :]
    dl = lw[:, None] - lw[None, :]
    with np.errstate(all="ignore"):
        c = dn / dl
    mean = (w[:, None] + w[None, :]) / 2.0
    return np.where(np.abs(dl) > 1e-12, c, mean)


def km_information_thermal(spec: ThermalSpec) -> float:
    """Susceptibility Tr(V Phi[V]) - Tr(omega V)^2 with the log-mean kernel.

    Phi is the trace-corrected linear response of exp(-beta H + lam V)/Z at
    lam = 0; for V = H it reduces to the energy variance of the thermal state.
    """
    omega = thermal_state(spec)
    es = eigh(omega.matrix)
    w = np.clip(es.eigenvalues, 1e-300, None)
    v = es.eigenvectors
    vm = v.conj().T @ spec.perturbation @ v
    c = _log_mean_kernel(w)
    mean_v = float(np.sum(w * vm.diagonal().real))
    return float(np.sum(np.abs(vm) ** 2 * c)) - mean_v**2


def _deviation(spec: ThermalSpec, lam: float) -> float:
    """beta * d<H> - dS for the state exp(-beta H + lam V)/Z."""
    final = gibbs(spec.beta * spec.hamiltonian - lam * spec.perturbation, 1.0)
    report = clausius_report(spec, final)
    return report.clausius_slack


def km_perturbation(spec: ThermalSpec, lam: float) -> KmPerturbationResult:
    """Leading Clausius deviation lam^2 * KMI / 2 against the exact value.

    residual_ratio is the factor by which (exact - leading) shrinks when lam
    is halved; a cubic remainder gives a ratio near 8.
    """
    if abs(lam) > 0.1:
        raise ValidationError("|lam| must be at most 0.1")
    kmi = km_information_thermal(spec)
    exact = _deviation(spec, lam)
    leading = lam**2 * kmi / 2.0
    resid_full = exact - leading
    exact_half = _deviation(spec, lam / 2.0)
    resid_half = exact_half - (lam / 2.0) ** 2 * kmi / 2.0
    ratio = resid_full / resid_half if resid_half != 0.0 else math.inf
    omega0 = thermal_state(spec)
    final = gibbs(spec.beta * spec.hamiltonian - lam * spec.perturbation, 1.0)
    return KmPerturbationResult(
        km_information=kmi,
        leading_deviation=leading,
        exact_deviation=exact,
        exact_relative_entropy=q_relative_entropy(final, omega0),
        residual_ratio=ratio,
        lam=lam,
    )
