import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from heraldqubit.exceptions import InvalidArgumentError, OutOfRangeError, TruncationError
from heraldqubit.fock import (
    FockState,
    auto_cutoff,
    coherent_state,
    number_state,
    partial_trace,
    tensor,
    to_density,
    vacuum,
)
from heraldqubit.optics import (
    ModeTransform,
    apply_transform,
    beam_splitter,
    build_circuit_state,
    mz_transform,
    photon_blocks,
    prepare_entangled,
)

from oracles import hand_built_ket, two_mode_unitary


def test_mz_identity_at_half_pi():
    np.testing.assert_allclose(mz_transform(math.pi / 2).matrix, np.eye(2), atol=1e-16)


def test_mz_swap_at_zero():
    np.testing.assert_allclose(mz_transform(0.0).matrix, [[0, -1], [1, 0]], atol=1e-16)


def test_mz_orthogonal():
    S = mz_transform(0.7).matrix
    np.testing.assert_allclose(S.T @ S, np.eye(2), atol=1e-15)
    assert np.all(S.imag == 0)


def test_mode_transform_rejects_non_unitary():
    with pytest.raises(InvalidArgumentError):
        ModeTransform([[1, 1], [0, 1]])
    with pytest.raises(InvalidArgumentError):
        ModeTransform(np.eye(3))


def test_vacuum_is_fixed():
    out = apply_transform(vacuum(2, 5), mz_transform(0.3), (0, 1))
    np.testing.assert_allclose(out.amplitudes, vacuum(2, 5).amplitudes, atol=1e-15)


@pytest.mark.parametrize("phi", [0.0, 0.4, 1.3, 2.9])
def test_single_photon_follows_first_row(phi):
    # b† -> sin(phi) b† - cos(phi) c†: the sign on |0,1> is fixed by the
    # interferometer output formula.
    state = tensor(number_state(1, 3), vacuum(1, 3))
    out = apply_transform(state, mz_transform(phi), (0, 1)).amplitudes
    assert out[1, 0] == pytest.approx(math.sin(phi), abs=1e-15)
    assert out[0, 1] == pytest.approx(-math.cos(phi), abs=1e-15)
    assert np.sum(np.abs(out) ** 2) == pytest.approx(1.0, abs=1e-15)


@pytest.mark.parametrize("gamma,phi", [(1.0, 0.6), (0.5 - 0.4j, 2.2), (2.0, 1.2)])
def test_coherent_state_splits_into_cos_and_sin(gamma, phi):
    d = auto_cutoff(abs(gamma))
    state = tensor(vacuum(1, d), coherent_state(gamma, d))
    out = apply_transform(state, mz_transform(phi), (0, 1))
    expected = tensor(
        coherent_state(gamma * math.cos(phi), d), coherent_state(gamma * math.sin(phi), d)
    )
    overlap = abs(np.vdot(expected.vector, out.vector)) ** 2
    assert 1 - overlap < 1e-8


def test_single_photon_block_is_transpose():
    t = beam_splitter(0.37, 0.8)
    blocks = photon_blocks(t, 1)
    np.testing.assert_allclose(blocks[1][::-1, ::-1], t.single_photon_block(), atol=1e-15)


@pytest.mark.parametrize(
    "t",
    [mz_transform(0.6), mz_transform(2.5), beam_splitter(0.3, 1.1), beam_splitter(1.2, -0.4)],
    ids=["mz0.6", "mz2.5", "bs-a", "bs-b"],
)
def test_matches_generator_exponential(t):
    d = 6
    U = two_mode_unitary(t.matrix, d)
    rng = np.random.default_rng(7)
    # amplitudes confined to total photon number < d so no leakage occurs
    amps = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    amps[np.add.outer(np.arange(d), np.arange(d)) >= d] = 0
    amps /= np.linalg.norm(amps)
    out = apply_transform(FockState(amps, d), t, (0, 1))
    np.testing.assert_allclose(out.vector, U @ amps.reshape(-1), atol=1e-12)


def test_composition_order():
    d = 6
    amps = np.zeros((d, d), dtype=complex)
    amps[1, 2] = 0.6
    amps[2, 0] = 0.8j
    s = FockState(amps, d)
    s1, s2 = beam_splitter(0.4, 0.3), mz_transform(1.1)
    twice = apply_transform(apply_transform(s, s1, (0, 1)), s2, (0, 1))
    once = apply_transform(s, s1.then(s2), (0, 1))
    np.testing.assert_allclose(twice.amplitudes, once.amplitudes, atol=1e-9)


def test_mode_order_and_spectator_modes():
    d = auto_cutoff(0.7)
    s = tensor(tensor(coherent_state(0.7, d), number_state(1, d)), vacuum(1, d))
    forward = apply_transform(s, mz_transform(0.9), (2, 0))
    # spectator mode 1 keeps its single photon
    probs = np.abs(forward.amplitudes) ** 2
    assert probs.sum(axis=(0, 2))[1] == pytest.approx(1.0, abs=1e-9)


def test_invalid_mode_pairs():
    s = vacuum(2, 3)
    with pytest.raises(InvalidArgumentError):
        apply_transform(s, mz_transform(0.1), (0, 0))
    with pytest.raises(OutOfRangeError):
        apply_transform(s, mz_transform(0.1), (0, 2))


def test_leakage_is_reported():
    # |2,2> through a balanced splitter populates |4,0> and |0,4>, beyond cutoff 3
    amps = np.zeros((3, 3), dtype=complex)
    amps[2, 2] = 1
    with pytest.raises(TruncationError) as info:
        apply_transform(FockState(amps, 3), beam_splitter(math.pi / 4), (0, 1))
    assert info.value.mass > 1e-9


@settings(max_examples=25, deadline=None)
@given(
    seed=st.integers(0, 2**32 - 1),
    theta=st.floats(0, math.pi),
    phase=st.floats(-math.pi, math.pi),
)
def test_norm_and_photon_number_conserved(seed, theta, phase):
    d = 5
    rng = np.random.default_rng(seed)
    amps = rng.normal(size=(2, d, d)) + 1j * rng.normal(size=(2, d, d))
    amps[:, np.add.outer(np.arange(d), np.arange(d)) >= d] = 0
    amps /= np.linalg.norm(amps)
    full = np.zeros((d, d, d), dtype=complex)
    full[:2] = amps
    s = FockState(full, d)
    out = apply_transform(s, beam_splitter(theta, phase), (1, 2))
    assert out.norm() == pytest.approx(s.norm(), abs=1e-9)
    np.testing.assert_allclose(
        out.photon_distribution([1, 2]), s.photon_distribution([1, 2]), atol=1e-9
    )
    # mode 0 is untouched
    np.testing.assert_allclose(
        partial_trace(to_density(out), {0}).matrix,
        partial_trace(to_density(s), {0}).matrix,
        atol=1e-12,
    )


def test_prepare_entangled():
    s = prepare_entangled(4)
    assert s.norm() == pytest.approx(1.0, abs=1e-15)
    assert s.amplitudes[1, 1] == 0
    reduced = partial_trace(to_density(s), {0})
    np.testing.assert_allclose(reduced.matrix, np.diag([0.5, 0.5, 0, 0]), atol=1e-15)


@pytest.mark.parametrize("phi", [0.0, 0.5, math.pi / 3, 2.0])
def test_circuit_state_without_coherent_light(phi):
    s = build_circuit_state(0.0, phi)
    expected = np.zeros_like(s.amplitudes)
    expected[1, 0, 0] = 1 / math.sqrt(2)
    expected[0, 1, 0] = math.sin(phi) / math.sqrt(2)
    expected[0, 0, 1] = -math.cos(phi) / math.sqrt(2)
    assert abs(np.vdot(expected.reshape(-1), s.vector)) ** 2 == pytest.approx(1.0, abs=1e-10)


def test_circuit_state_identity_interferometer():
    g = 0.9
    d = auto_cutoff(g)
    s = build_circuit_state(g, math.pi / 2)
    expected = tensor(prepare_entangled(d), coherent_state(g, d))
    np.testing.assert_allclose(s.amplitudes, expected.amplitudes, atol=1e-12)


def test_circuit_state_norm():
    assert build_circuit_state(1.0, 0.6).norm() == pytest.approx(1.0, abs=1e-9)


@pytest.mark.parametrize("gamma,phi", [(0.5, 0.3), (1.0, 0.6), (2.0, 1.2), (0.8j, 2.4)])
def test_circuit_state_matches_hand_assembled_output(gamma, phi):
    s = build_circuit_state(gamma, phi)
    ket = hand_built_ket(gamma, phi, s.cutoff)
    overlap = abs(np.vdot(ket.reshape(-1), s.vector)) ** 2
    assert overlap >= 1 - 1e-8


def test_circuit_state_small_cutoff_rejected():
    with pytest.raises(TruncationError):
        build_circuit_state(2.0, 0.5, cutoff=6)
