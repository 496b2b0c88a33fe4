"""On/off (avalanche) photodetection with finite quantum efficiency.

A detector of efficiency ``eta`` has the two-element POVM

    no-click: sum_p (1 - eta)^p |p><p|        click: I - no-click

Both elements are diagonal in the Fock basis, so conditioning a pure state
only needs the diagonal weights: the reduced, unnormalised state is
``sum_x w(x) psi[u, x] psi*[u', x]`` over the measured indices ``x``.
"""

from dataclasses import dataclass
import enum
import itertools

import numpy as np

from .exceptions import InvalidArgumentError, OutOfRangeError, ZeroProbabilityError
from .fock import DensityOperator
from .validation import check_cutoff, check_eta

ZERO_PROBABILITY = 1e-12


class Outcome(enum.Enum):
    NO = "N"
    YES = "Y"


@dataclass(frozen=True, eq=False)
class DetectorModel:
    eta: float
    cutoff: int

    def __post_init__(self):
        object.__setattr__(self, "eta", check_eta(self.eta))
        check_cutoff(self.cutoff)

    @property
    def no_weights(self):
        return (1.0 - self.eta) ** np.arange(self.cutoff)

    @property
    def yes_weights(self):
        return 1.0 - self.no_weights

    @property
    def pi_no(self):
        return np.diag(self.no_weights)

    @property
    def pi_yes(self):
        return np.diag(self.yes_weights)

    def weights(self, outcome):
        return self.yes_weights if Outcome(outcome) is Outcome.YES else self.no_weights


def povm_elements(eta, cutoff):
    return DetectorModel(eta, cutoff)


@dataclass(frozen=True, eq=False)
class ConditionalResult:
    probability: float
    state: DensityOperator


def _outcome_weights(state, measured):
    """Joint diagonal weight over the measured axes, in ascending mode order."""
    modes = sorted(measured)
    if len(set(modes)) != len(modes):
        raise InvalidArgumentError("measured modes must be distinct")
    for m in modes:
        if not 0 <= m < state.num_modes:
            raise OutOfRangeError(f"mode index {m} outside 0..{state.num_modes - 1}")
        if measured[m][0].cutoff != state.cutoff:
            raise InvalidArgumentError(
                f"detector on mode {m} built for cutoff {measured[m][0].cutoff}, "
                f"state has cutoff {state.cutoff}"
            )
    w = np.ones(())
    for m in modes:
        det, outcome = measured[m]
        w = np.multiply.outer(w, det.weights(outcome))
    return modes, w


def _split(state, modes):
    kept = [i for i in range(state.num_modes) if i not in modes]
    psi = np.moveaxis(state.amplitudes, kept + modes, range(state.num_modes))
    return kept, psi.reshape(state.cutoff ** len(kept), -1)


def outcome_probability(state, measured):
    """Probability of a joint outcome; also allowed when no mode is left unmeasured."""
    modes, w = _outcome_weights(state, measured)
    probs = np.abs(np.moveaxis(state.amplitudes, modes, range(len(modes)))) ** 2
    probs = probs.reshape(w.size, -1).sum(axis=1)
    return float(probs @ w.reshape(-1))


def condition(state, measured, zero_tol=ZERO_PROBABILITY):
    """Condition ``state`` on detector outcomes.

    ``measured`` maps mode index -> ``(DetectorModel, Outcome)``. Returns the
    outcome probability and the normalised density operator of the remaining
    modes (in ascending mode order).
    """
    modes, w = _outcome_weights(state, measured)
    if len(modes) >= state.num_modes:
        raise InvalidArgumentError("at least one mode must remain unmeasured")
    kept, psi = _split(state, modes)
    unnorm = (psi * w.reshape(-1)) @ psi.conj().T
    p = float(np.trace(unnorm).real)
    if p < zero_tol:
        raise ZeroProbabilityError(f"outcome probability {p:.3e} is below {zero_tol:.0e}", p)
    rho = DensityOperator(unnorm / p, len(kept), state.cutoff)
    return ConditionalResult(p, rho)


def outcome_distribution(state, detectors):
    """Probabilities of all click patterns on the detected modes.

    Keys are tuples of :class:`Outcome`, ordered by ascending mode index.
    """
    modes = sorted(detectors)
    out = {}
    for pattern in itertools.product((Outcome.YES, Outcome.NO), repeat=len(modes)):
        measured = {m: (detectors[m], o) for m, o in zip(modes, pattern)}
        out[pattern] = outcome_probability(state, measured)
    return out
