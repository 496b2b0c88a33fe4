"""Passive two-mode linear optics on the truncated Fock basis.

A :class:`ModeTransform` holds a 2x2 unitary ``S`` acting on the creation
operators of a mode pair ``(x, y)``::

    x^dag -> S[0,0] x^dag + S[0,1] y^dag
    y^dag -> S[1,0] x^dag + S[1,1] y^dag

The induced Fock-space unitary conserves total photon number, so it is built
block by block. The block for ``n`` photons is obtained from the block for
``n - 1`` by applying one transformed creation operator to each column; every
column is a normalised state, which keeps the recursion free of the large
cancelling binomial sums of the closed-form matrix elements.
"""

from dataclasses import dataclass
from functools import lru_cache
import math

import numpy as np

from .exceptions import InvalidArgumentError, OutOfRangeError, TruncationError
from .fock import FockState, auto_cutoff, coherent_state, tensor
from .validation import check_cutoff, check_cutoff_spec

LEAKAGE_TOLERANCE = 1e-9


@dataclass(frozen=True, eq=False)
class ModeTransform:
    matrix: np.ndarray

    def __post_init__(self):
        mat = np.array(self.matrix, dtype=complex)
        if mat.shape != (2, 2):
            raise InvalidArgumentError(f"mode transform must be 2x2, got {mat.shape}")
        err = np.max(np.abs(mat.conj().T @ mat - np.eye(2)))
        if err > 1e-12:
            raise InvalidArgumentError(f"mode transform is not unitary (deviation {err:.3e})")
        mat.setflags(write=False)
        object.__setattr__(self, "matrix", mat)

    def then(self, other):
        """Transform equivalent to applying ``self`` first and ``other`` second."""
        return ModeTransform(self.matrix @ other.matrix)

    def single_photon_block(self):
        """Matrix on ``(|1,0>, |0,1>)``; the transpose of ``matrix`` in this convention."""
        return self.matrix.T.copy()


def mz_transform(phi):
    """Mach-Zehnder transform with internal shift ``phi``.

    ``S = [[sin phi, -cos phi], [cos phi, sin phi]]``: a photon in the first
    mode exits as ``sin phi |1,0> - cos phi |0,1>`` and a coherent state
    ``|g>`` in the second mode exits as ``|g cos phi>|g sin phi>``.
    """
    s, c = math.sin(phi), math.cos(phi)
    return ModeTransform(np.array([[s, -c], [c, s]]))


def beam_splitter(theta, phase=0.0):
    """General lossless beam splitter, mostly useful for composition tests."""
    c, s = math.cos(theta), math.sin(theta)
    e = complex(math.cos(phase), math.sin(phase))
    return ModeTransform(np.array([[c, e * s], [-s / e, c]]))


def _raise(vectors, row, n):
    """Apply ``row[0] x^dag + row[1] y^dag`` to columns living in the (n-1)-photon block."""
    j = np.arange(n)[:, None]
    out = np.zeros((n + 1, vectors.shape[1]), dtype=complex)
    out[1:] += row[0] * np.sqrt(j + 1) * vectors
    out[:-1] += row[1] * np.sqrt(n - j) * vectors
    return out


@lru_cache(maxsize=32)
def _blocks(entries, n_max):
    S = np.array(entries, dtype=complex).reshape(2, 2)
    blocks = [np.ones((1, 1), dtype=complex)]
    for n in range(1, n_max + 1):
        prev = blocks[-1]
        block = np.empty((n + 1, n + 1), dtype=complex)
        block[:, 1:] = _raise(prev, S[0], n) / np.sqrt(np.arange(1, n + 1))
        block[:, :1] = _raise(prev[:, :1], S[1], n) / math.sqrt(n)
        block.setflags(write=False)
        blocks.append(block)
    return tuple(blocks)


def photon_blocks(t, n_max):
    """Induced unitaries on the ``n``-photon sectors, ``n = 0..n_max``.

    Block ``n`` has entries ``<j, n-j| U |k, n-k>`` indexed ``[j, k]``.
    """
    return _blocks(tuple(complex(x) for x in t.matrix.reshape(-1)), int(n_max))


def apply_transform(state, t, modes, leakage_tol=LEAKAGE_TOLERANCE):
    """Apply the Fock-space unitary induced by ``t`` to the mode pair ``modes``.

    Amplitude pushed above the cutoff is dropped; if the dropped probability
    exceeds ``leakage_tol`` a ``TruncationError`` is raised. Otherwise the
    result carries the leakage in ``truncation_loss``.
    """
    i, j = (int(m) for m in modes)
    m = state.num_modes
    if i == j:
        raise InvalidArgumentError("transform needs two distinct modes")
    for k in (i, j):
        if not 0 <= k < m:
            raise OutOfRangeError(f"mode index {k} outside 0..{m - 1}")
    d = state.cutoff
    amps = np.moveaxis(state.amplitudes, (i, j), (m - 2, m - 1))
    lead = amps.shape[:-2]
    flat = amps.reshape(-1, d, d)
    out = np.zeros_like(flat)
    blocks = photon_blocks(t, 2 * d - 2)
    for n, block in enumerate(blocks):
        k = np.arange(max(0, n - d + 1), min(n, d - 1) + 1)
        x = flat[:, k, n - k]
        y = x @ block[:, k].T
        out[:, k, n - k] = y[:, k]
    norm_in = float(np.vdot(flat, flat).real)
    norm_out = float(np.vdot(out, out).real)
    leakage = max(0.0, norm_in - norm_out)
    if leakage > leakage_tol:
        raise TruncationError(
            f"transform pushes {leakage:.3e} probability above cutoff {d}", mass=leakage
        )
    result = np.moveaxis(out.reshape(lead + (d, d)), (m - 2, m - 1), (i, j))
    loss = 1.0 - (1.0 - state.truncation_loss) * (1.0 - leakage)
    return FockState(result, d, truncation_loss=loss)


def prepare_entangled(cutoff):
    """``(|0>|1> + |1>|0>)/sqrt(2)``: one photon shared by two modes."""
    d = check_cutoff(cutoff)
    amps = np.zeros((d, d), dtype=complex)
    amps[0, 1] = amps[1, 0] = 1 / math.sqrt(2)
    return FockState(amps, d)


def resolve_cutoff(gamma, cutoff="auto"):
    cutoff = check_cutoff_spec(cutoff)
    return auto_cutoff(abs(gamma)) if cutoff == "auto" else cutoff


def build_circuit_state(gamma, phi, cutoff="auto"):
    """Output ket over modes ``(a, b, c)``: the entangled pair on ``(a, b)``, a
    coherent state on ``c``, and the interferometer applied to ``(b, c)``."""
    d = resolve_cutoff(gamma, cutoff)
    state = tensor(prepare_entangled(d), coherent_state(gamma, d))
    return apply_transform(state, mz_transform(phi), (1, 2))
