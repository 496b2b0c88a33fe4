"""Heralded preparation of ``a0|0> + a1|1>`` on mode ``a``.

One photon is split over modes ``a`` and ``b``; mode ``b`` is mixed with a
coherent state ``|gamma>`` in mode ``c`` by an interferometer with internal
shift ``phi``; modes ``b`` and ``c`` go to on/off detectors of efficiency
``eta``. A click on ``b`` with no click on ``c`` ("YN") heralds a qubit in
mode ``a``. The mirrored "NY" outcome is the YN outcome at ``phi + pi/2``.

This module offers the closed-form probability, conditional state and
fidelity, plus :func:`run_numeric`, which gets the same quantities by brute
force on the truncated Fock space. The two routes are independent and are
meant to be checked against each other.

All closed forms broadcast over numpy arrays.
"""

from dataclasses import dataclass, field
import math

import numpy as np

from .detection import ZERO_PROBABILITY, Outcome, condition, povm_elements
from .exceptions import NumericalInconsistencyError, UndefinedTargetError, ZeroProbabilityError
from .fock import DensityOperator, FockState, fidelity_pure
from .optics import build_circuit_state, resolve_cutoff
from .validation import check_cutoff_spec, check_eta, check_outcome

SUPPORT_TOLERANCE = 1e-10
TARGET_TOLERANCE = 1e-15


@dataclass(frozen=True)
class SchemeParams:
    eta: float
    gamma: complex
    phi: float
    cutoff: object = "auto"

    def __post_init__(self):
        object.__setattr__(self, "eta", check_eta(self.eta))
        object.__setattr__(self, "cutoff", check_cutoff_spec(self.cutoff))

    def resolved_cutoff(self):
        return resolve_cutoff(self.gamma, self.cutoff)


@dataclass(frozen=True)
class QubitCoefficients:
    """Unnormalised entries of the heralded 2x2 state; ``d01 = <0|.|1>``."""

    d00: float
    d11: float
    d01: complex

    @property
    def probability(self):
        return self.d00 + self.d11

    def matrix(self):
        return np.array([[self.d00, self.d01], [np.conj(self.d01), self.d11]], dtype=complex)


@dataclass(frozen=True)
class TargetQubit:
    a0: complex
    a1: complex

    def as_state(self, cutoff=2):
        amps = np.zeros(cutoff, dtype=complex)
        amps[:2] = self.a0, self.a1
        return FockState(amps, cutoff)


@dataclass(frozen=True, eq=False)
class SchemeResult:
    p_yn: float
    rho: DensityOperator
    fidelity: float
    outcome: str = "yn"
    cutoff: int = 2
    truncation_loss: float = 0.0
    high_level_population: float = 0.0
    extra: dict = field(default_factory=dict)


def _exponents(eta, gamma, phi):
    s2 = np.sin(phi) ** 2
    c2 = np.cos(phi) ** 2
    g2 = np.abs(gamma) ** 2
    return s2, c2, g2, np.exp(-eta * g2 * s2), np.exp(-eta * g2 * c2)


def p_yn_analytic(eta, gamma, phi):
    """Probability of a click on ``b`` and none on ``c``."""
    s2, c2, g2, e_s, e_c = _exponents(eta, gamma, phi)
    p = e_s * (1 - e_c + eta / 2 * (e_c + c2 * (eta * g2 * s2 - 1)))
    return np.clip(p, 0.0, 1.0)


def _coefficients(eta, gamma, phi):
    s2, c2, g2, e_s, e_c = _exponents(eta, gamma, phi)
    d11 = 0.5 * e_s * (1 - e_c)
    # <0|rho|1> carries conj(gamma); identical to gamma on the real axis.
    d01 = e_s * eta * np.conj(gamma) / 2 * np.sin(phi) * np.cos(phi)
    d00 = 0.5 * e_s * (1 - (1 - eta) * e_c + eta * c2 * (eta * g2 * s2 - 1))
    return d00, d11, d01


def coefficients_analytic(eta, gamma, phi):
    d00, d11, d01 = _coefficients(check_eta(eta), gamma, phi)
    return QubitCoefficients(float(d00), float(d11), complex(d01))


def rho_yn_analytic(eta, gamma, phi, cutoff=2):
    """Heralded state of mode ``a``, embedded in a space truncated at ``cutoff``."""
    coeffs = coefficients_analytic(eta, gamma, phi)
    p = float(p_yn_analytic(eta, gamma, phi))
    if p <= ZERO_PROBABILITY:
        raise ZeroProbabilityError(f"P_YN = {p:.3e} vanishes at eta={eta}, gamma={gamma}, phi={phi}", p)
    mat = np.zeros((cutoff, cutoff), dtype=complex)
    mat[:2, :2] = coeffs.matrix() / p
    return DensityOperator(mat, 1, cutoff)


def target_state(gamma, phi):
    """Ideal heralded qubit, proportional to ``sin(phi)|0> + gamma cos(phi)|1>``."""
    u0 = math.sin(phi)
    u1 = complex(gamma) * math.cos(phi)
    norm2 = u0 ** 2 + abs(u1) ** 2
    if norm2 <= TARGET_TOLERANCE:
        raise UndefinedTargetError(f"target is undefined at gamma={gamma}, phi={phi}")
    norm = math.sqrt(norm2)
    return TargetQubit(complex(u0 / norm), u1 / norm)


def _fidelity(eta, gamma, phi):
    """Closed-form fidelity; NaN wherever the outcome or the target vanishes."""
    s2, c2, g2, e_s, e_c = _exponents(eta, gamma, phi)
    p = p_yn_analytic(eta, gamma, phi)
    norm2 = s2 + g2 * c2
    bracket = (
        g2 * c2 * (1 - e_c)
        + 2 * eta * g2 * s2 * c2
        + s2 * (1 - (1 - eta) * e_c + eta * c2 * (eta * g2 * s2 - 1))
    )
    ok = (p > ZERO_PROBABILITY) & (norm2 > TARGET_TOLERANCE)
    with np.errstate(divide="ignore", invalid="ignore"):
        f = e_s * bracket / (2 * p * norm2)
    return np.where(ok, np.clip(f, 0.0, 1.0), np.nan), p


def fidelity_analytic(eta, gamma, phi):
    """Fidelity of the YN-heralded state with :func:`target_state`."""
    f, p = _fidelity(check_eta(eta), gamma, phi)
    if np.any(p <= ZERO_PROBABILITY):
        raise ZeroProbabilityError("P_YN vanishes; fidelity is undefined", float(np.min(p)))
    if np.any(np.isnan(f)):
        raise UndefinedTargetError("target state is undefined")
    return f if np.ndim(f) else float(f)


def _effective_phi(phi, outcome):
    return phi + math.pi / 2 if outcome == "ny" else phi


def run_analytic(params, outcome="yn"):
    """Closed-form counterpart of :func:`run_numeric`."""
    outcome = check_outcome(outcome)
    phi = _effective_phi(params.phi, outcome)
    rho = rho_yn_analytic(params.eta, params.gamma, phi)
    target = target_state(params.gamma, phi)
    return SchemeResult(
        p_yn=float(p_yn_analytic(params.eta, params.gamma, phi)),
        rho=rho,
        fidelity=fidelity_analytic(params.eta, params.gamma, phi),
        outcome=outcome,
        extra={"target": target},
    )


def simulate(params):
    """Circuit output ket over modes ``(a, b, c)`` at the resolved cutoff."""
    return build_circuit_state(params.gamma, params.phi, params.resolved_cutoff())


def herald(state, params, outcome="yn"):
    """Condition a simulated circuit state on a single-click pattern."""
    outcome = check_outcome(outcome)
    det = povm_elements(params.eta, state.cutoff)
    b_click = Outcome.YES if outcome == "yn" else Outcome.NO
    c_click = Outcome.NO if outcome == "yn" else Outcome.YES
    res = condition(state, {1: (det, b_click), 2: (det, c_click)})

    rho_a = res.state
    high = float(np.sum(rho_a.populations()[2:]))
    if high >= SUPPORT_TOLERANCE:
        raise NumericalInconsistencyError(
            f"heralded state populates levels above |1> with weight {high:.3e}"
        )
    rho = DensityOperator(rho_a.matrix[:2, :2], 1, 2).check()
    target = target_state(params.gamma, _effective_phi(params.phi, outcome))
    return SchemeResult(
        p_yn=res.probability,
        rho=rho,
        fidelity=fidelity_pure(target.as_state(), rho),
        outcome=outcome,
        cutoff=state.cutoff,
        truncation_loss=state.truncation_loss,
        high_level_population=high,
        extra={"target": target},
    )


def run_numeric(params, outcome="yn"):
    """Simulate the circuit on the truncated Fock space and condition on ``outcome``."""
    return herald(simulate(params), params, outcome)
