"""Dense linear algebra over truncated multimode Fock spaces.

Every mode shares one local dimension ``cutoff`` (levels ``0..cutoff-1``).
Multimode amplitudes are stored as a tensor of shape ``(cutoff,) * num_modes``;
flattening is row-major, so mode 0 is the slowest index.
"""

from dataclasses import dataclass
import math

import numpy as np
from scipy.special import gammaln
from scipy.stats import poisson

from .exceptions import (
    IncompatibleStatesError,
    InvalidArgumentError,
    NumericalInconsistencyError,
    OutOfRangeError,
    TruncationError,
)
from .validation import check_cutoff

TAIL_TOLERANCE = 1e-12
MIN_AUTO_CUTOFF = 4


def _frozen(array):
    array = np.array(array, dtype=complex)
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class FockState:
    """Pure state of ``num_modes`` bosonic modes in a truncated number basis.

    ``truncation_loss`` records probability mass discarded while building the
    state (coherent-state tails, leakage out of the cutoff). It is a
    diagnostic only: amplitudes are not silently rescaled to hide it.
    """

    amplitudes: np.ndarray
    cutoff: int
    truncation_loss: float = 0.0

    def __post_init__(self):
        check_cutoff(self.cutoff)
        amps = _frozen(self.amplitudes)
        if amps.ndim == 0 or any(n != self.cutoff for n in amps.shape):
            raise IncompatibleStatesError(
                f"amplitude tensor of shape {amps.shape} does not match cutoff {self.cutoff}"
            )
        object.__setattr__(self, "amplitudes", amps)

    @property
    def num_modes(self):
        return self.amplitudes.ndim

    @property
    def dim(self):
        return self.amplitudes.size

    @property
    def vector(self):
        """Flattened amplitudes (row-major, mode 0 slowest)."""
        return self.amplitudes.reshape(-1)

    def norm(self):
        return float(np.linalg.norm(self.vector))

    def photon_distribution(self, modes=None):
        """Probability of each total photon number over ``modes`` (default: all)."""
        modes = list(range(self.num_modes)) if modes is None else list(modes)
        probs = np.abs(self.amplitudes) ** 2
        total = np.zeros(self.amplitudes.shape, dtype=int)
        for m in modes:
            shape = [1] * self.num_modes
            shape[m] = self.cutoff
            total = total + np.arange(self.cutoff).reshape(shape)
        return np.bincount(total.reshape(-1), weights=probs.reshape(-1),
                           minlength=len(modes) * (self.cutoff - 1) + 1)

    def mean_photon_number(self, mode=0):
        probs = np.abs(self.amplitudes) ** 2
        axes = tuple(i for i in range(self.num_modes) if i != mode)
        marginal = probs.sum(axis=axes) if axes else probs
        return float(np.arange(self.cutoff) @ marginal)


@dataclass(frozen=True, eq=False)
class DensityOperator:
    """Density matrix over ``num_modes`` modes, each truncated at ``cutoff``."""

    matrix: np.ndarray
    num_modes: int
    cutoff: int

    def __post_init__(self):
        check_cutoff(self.cutoff)
        mat = _frozen(self.matrix)
        side = self.cutoff ** self.num_modes
        if mat.shape != (side, side):
            raise IncompatibleStatesError(
                f"matrix of shape {mat.shape} does not match {self.num_modes} "
                f"modes at cutoff {self.cutoff}"
            )
        object.__setattr__(self, "matrix", mat)

    @property
    def dim(self):
        return self.matrix.shape[0]

    def trace(self):
        return float(np.trace(self.matrix).real)

    def purity(self):
        return float(np.einsum("ij,ji->", self.matrix, self.matrix).real)

    def hermiticity_error(self):
        return float(np.max(np.abs(self.matrix - self.matrix.conj().T)))

    def min_eigenvalue(self):
        herm = (self.matrix + self.matrix.conj().T) / 2
        return float(np.linalg.eigvalsh(herm)[0])

    def check(self, normalized=True, herm_atol=1e-10, trace_atol=1e-9, eig_floor=-1e-8):
        """Raise ``NumericalInconsistencyError`` unless the operator is a valid state."""
        herm = self.hermiticity_error()
        if herm > herm_atol:
            raise NumericalInconsistencyError(f"operator is not Hermitian (deviation {herm:.3e})")
        if normalized and abs(self.trace() - 1.0) > trace_atol:
            raise NumericalInconsistencyError(f"trace {self.trace()!r} differs from 1")
        lam = self.min_eigenvalue()
        if lam < eig_floor:
            raise NumericalInconsistencyError(f"negative eigenvalue {lam:.3e}")
        return self

    def populations(self):
        return np.diag(self.matrix).real.copy()


def coherent_tail_mass(gamma, cutoff):
    """Poisson mass ``sum_{n >= cutoff} e^{-|g|^2} |g|^{2n} / n!`` lost by truncation."""
    return float(poisson.sf(cutoff - 1, abs(gamma) ** 2))


def auto_cutoff(gamma_abs, tol=TAIL_TOLERANCE, minimum=MIN_AUTO_CUTOFF):
    """Smallest cutoff (at least ``minimum``) whose coherent tail mass is below ``tol``."""
    d = minimum
    while coherent_tail_mass(gamma_abs, d) >= tol:
        d += 1
    return d


def vacuum(num_modes, cutoff):
    check_cutoff(cutoff)
    if num_modes < 1:
        raise InvalidArgumentError(f"num_modes must be positive, got {num_modes}")
    amps = np.zeros((cutoff,) * num_modes, dtype=complex)
    amps[(0,) * num_modes] = 1.0
    return FockState(amps, cutoff)


def number_state(n, cutoff):
    check_cutoff(cutoff)
    if not 0 <= n < cutoff:
        raise OutOfRangeError(f"Fock level {n} outside 0..{cutoff - 1}")
    amps = np.zeros(cutoff, dtype=complex)
    amps[n] = 1.0
    return FockState(amps, cutoff)


def coherent_amplitudes(gamma, cutoff):
    """Untruncated-formula amplitudes ``e^{-|g|^2/2} g^n / sqrt(n!)`` for ``n < cutoff``."""
    n = np.arange(cutoff)
    gamma = complex(gamma)
    if gamma == 0:
        out = np.zeros(cutoff, dtype=complex)
        out[0] = 1.0
        return out
    log_mag = n * math.log(abs(gamma)) - 0.5 * gammaln(n + 1) - 0.5 * abs(gamma) ** 2
    return np.exp(log_mag) * np.exp(1j * n * np.angle(gamma))


def coherent_state(gamma, cutoff, tail_tol=TAIL_TOLERANCE):
    """Truncated coherent state, renormalised after truncation.

    Raises ``TruncationError`` when the discarded Poisson tail is not below
    ``tail_tol``; the discarded mass is kept on ``truncation_loss``.
    """
    check_cutoff(cutoff)
    tail = coherent_tail_mass(gamma, cutoff)
    if tail >= tail_tol:
        raise TruncationError(
            f"cutoff {cutoff} discards {tail:.3e} of |{gamma}> "
            f"(need < {tail_tol:.0e}; try cutoff={auto_cutoff(abs(gamma), tail_tol)})",
            mass=tail,
        )
    amps = coherent_amplitudes(gamma, cutoff)
    kept = float(np.vdot(amps, amps).real)
    return FockState(amps / math.sqrt(kept), cutoff, truncation_loss=max(0.0, 1.0 - kept))


def tensor(s1, s2):
    """Product state; modes of ``s1`` come first."""
    if s1.cutoff != s2.cutoff:
        raise IncompatibleStatesError(f"cutoff mismatch: {s1.cutoff} vs {s2.cutoff}")
    amps = np.multiply.outer(s1.amplitudes, s2.amplitudes)
    loss = 1.0 - (1.0 - s1.truncation_loss) * (1.0 - s2.truncation_loss)
    return FockState(amps, s1.cutoff, truncation_loss=loss)


def to_density(s):
    vec = s.vector
    return DensityOperator(np.outer(vec, vec.conj()), s.num_modes, s.cutoff)


def _check_modes(keep, num_modes):
    keep = sorted(set(int(k) for k in keep))
    if not keep:
        raise InvalidArgumentError("at least one mode must be kept")
    for k in keep:
        if not 0 <= k < num_modes:
            raise OutOfRangeError(f"mode index {k} outside 0..{num_modes - 1}")
    return keep


def partial_trace(rho, keep):
    """Reduce ``rho`` onto the modes in ``keep`` (kept in ascending order)."""
    keep = _check_modes(keep, rho.num_modes)
    m, d = rho.num_modes, rho.cutoff
    traced = [i for i in range(m) if i not in keep]
    tensor_form = rho.matrix.reshape((d,) * (2 * m))
    row = list(range(m))
    col = [m + i for i in range(m)]
    for i in traced:
        col[i] = row[i]
    out = [row[i] for i in keep] + [col[i] for i in keep]
    reduced = np.einsum(tensor_form, row + col, out)
    side = d ** len(keep)
    return DensityOperator(reduced.reshape(side, side), len(keep), d)


def fidelity_pure(target, rho, imag_atol=1e-10):
    """Overlap ``<target|rho|target>`` of a pure target with a density operator."""
    if target.dim != rho.dim or target.cutoff != rho.cutoff:
        raise IncompatibleStatesError(
            f"target of dimension {target.dim} vs operator of dimension {rho.dim}"
        )
    vec = target.vector
    value = complex(vec.conj() @ rho.matrix @ vec)
    if abs(value.imag) > imag_atol:
        raise NumericalInconsistencyError(f"fidelity has imaginary part {value.imag:.3e}")
    f = value.real
    if not -imag_atol <= f <= 1.0 + imag_atol:
        raise NumericalInconsistencyError(f"fidelity {f!r} outside [0, 1]")
    return min(max(f, 0.0), 1.0)
