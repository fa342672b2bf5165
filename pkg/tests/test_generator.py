from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lindblad_spectra.basis import sun_basis
from lindblad_spectra.boundary import BoundaryCurve
from lindblad_spectra.ensembles import RngStream, gue
from lindblad_spectra.generator import (
    build_rmt_surrogate,
    build_superop,
    build_superop_direct,
    build_superop_kron,
    channel_superop,
    dissipator_blocks,
    real_representation,
    surrogate_ellipse_params,
    translation_matrix,
)
from lindblad_spectra.kossakowski import JumpSet, KossakowskiMatrix, SamplerSpec, jump_decomposition, sample_kossakowski

from oracles import amplitude_damping_superop, dissipator_apply, spectral_mismatch

SPECS = ["wishart", "bures", "composite:2,0", "composite:1,3", "svd"]


def _amplitude_damping_jumps():
    return JumpSet(np.array([1.0]), np.array([[[0.0, 1.0], [0.0, 0.0]]], dtype=complex))


def _amplitude_damping_k():
    # V = |0><1| = (S12 + i J12) / sqrt(2); K = conj(c) c^T for V = sum c_n F_n
    c = np.array([1, 1j, 0]) / np.sqrt(2)
    return KossakowskiMatrix(2, np.outer(c.conj(), c))


def test_amplitude_damping_all_builders():
    ref = amplitude_damping_superop()
    np.testing.assert_allclose(build_superop_kron(_amplitude_damping_jumps()).matrix, ref, atol=1e-15)
    b = sun_basis(2)
    np.testing.assert_allclose(build_superop_direct(_amplitude_damping_k(), b).matrix, ref, atol=1e-15)
    np.testing.assert_allclose(build_superop(_amplitude_damping_k(), b).matrix, ref, atol=1e-15)
    ev = np.sort(np.linalg.eigvals(ref).real)
    np.testing.assert_allclose(ev, [-1, -0.5, -0.5, 0], atol=1e-12)


def _random_case(n, spec, alpha, seed):
    k = sample_kossakowski(n, SamplerSpec.parse(spec), RngStream(seed, n).child(0))
    h = gue(n, 1.0 / n, RngStream(seed, n).child(1)) if alpha > 0 else None
    return k, h


@settings(max_examples=25, deadline=None)
@given(
    n=st.integers(2, 8),
    spec=st.sampled_from(SPECS),
    alpha=st.sampled_from([0.0, 0.5, 1.0]),
    seed=st.integers(0, 2**31),
)
def test_dual_builder_equivalence(n, spec, alpha, seed):
    k, h = _random_case(n, spec, alpha, seed)
    b = sun_basis(n)
    kron = build_superop_kron(jump_decomposition(k, b), alpha, h).matrix
    fast = build_superop(k, b, alpha, h).matrix
    assert np.max(np.abs(fast - kron)) <= 1e-10
    if n <= 4:
        direct = build_superop_direct(k, b, alpha, h).matrix
        assert np.max(np.abs(direct - kron)) <= 1e-10


def test_direct_builder_applies_the_double_sum():
    n = 3
    k, _ = _random_case(n, "wishart", 0.0, 1)
    b = sun_basis(n)
    sup = build_superop_direct(k, b).matrix
    rho = np.diag([0.5, 0.3, 0.2]).astype(complex)
    rho[0, 1] = rho[1, 0] = 0.1
    np.testing.assert_allclose((sup @ rho.reshape(-1)).reshape(n, n), dissipator_apply(k.matrix, b.matrices, rho), atol=1e-13)


def test_spectra_of_direct_and_kron_coincide():
    k, h = _random_case(3, "bures", 0.5, 2)
    b = sun_basis(3)
    a = np.linalg.eigvals(build_superop_direct(k, b, 0.5, h).matrix)
    c = np.linalg.eigvals(build_superop_kron(jump_decomposition(k, b), 0.5, h).matrix)
    assert spectral_mismatch(a, c) <= 1e-8


def test_rank_one_k_matches_single_jump():
    b = sun_basis(2)
    k = np.zeros((3, 3), dtype=complex)
    k[0, 0] = 1.0
    direct = build_superop_direct(KossakowskiMatrix(2, k), b).matrix
    kron = build_superop_kron(JumpSet(np.array([1.0]), b.matrices[:1].copy())).matrix
    np.testing.assert_allclose(direct, kron, atol=1e-15)


def test_pure_commutator_has_imaginary_spectrum():
    h = np.diag([1.0, -1.0]) / 2  # Tr H^2 = 1/2
    sup = build_superop_kron(JumpSet(np.zeros(0), np.zeros((0, 2, 2), dtype=complex)), 1.0, h, n=2).matrix
    ev = np.linalg.eigvals(sup)
    assert np.max(np.abs(ev.real)) < 1e-15
    np.testing.assert_allclose(np.sort(ev.imag), [-1, 0, 0, 1], atol=1e-15)


@settings(max_examples=15, deadline=None)
@given(n=st.integers(2, 7), spec=st.sampled_from(SPECS), alpha=st.sampled_from([0.0, 0.5, 1.0]), seed=st.integers(0, 2**31))
def test_generator_invariants(n, spec, alpha, seed):
    k, h = _random_case(n, spec, alpha, seed)
    sup = build_superop(k, sun_basis(n), alpha, h).check_invariants()
    ev = np.linalg.eigvals(real_representation(sup))
    assert np.count_nonzero(np.abs(ev) <= 1e-9) == 1
    assert np.max(ev.real) <= 1e-9
    assert spectral_mismatch(ev, ev.conj()) <= 1e-8
    assert spectral_mismatch(np.linalg.eigvals(sup.matrix), ev) <= 1e-8


def test_translation_matrix_is_traceless_and_hermitian():
    k, _ = _random_case(30, "wishart", 0.0, 3)
    x = translation_matrix(jump_decomposition(k, sun_basis(30)), 30)
    assert abs(np.trace(x)) <= 1e-9
    assert np.array_equal(x, x.conj().T)


def test_translation_matrix_vanishes_for_scaled_unitary_jump():
    n = 3
    u = np.diag(np.exp(2j * np.pi * np.arange(n) / n))  # traceless unitary
    x = translation_matrix(JumpSet(np.array([float(n)]), (u / np.sqrt(n))[None]), n)
    np.testing.assert_allclose(x, 0, atol=1e-14)


def test_dissipator_blocks_match_jump_route():
    n = 5
    k, _ = _random_case(n, "bures", 0.0, 4)
    j = jump_decomposition(k, sun_basis(n))
    phi, x = dissipator_blocks(k)
    np.testing.assert_allclose(phi, channel_superop(j), atol=1e-13)
    np.testing.assert_allclose(x, translation_matrix(j), atol=1e-13)


def test_hamiltonian_contract():
    k, _ = _random_case(3, "wishart", 0.0, 5)
    with pytest.raises(ValueError):
        build_superop(k, alpha=0.5)
    with pytest.raises(ValueError):
        build_superop(k, alpha=0.5, h=np.eye(2))
    with pytest.raises(ValueError):
        build_superop(k, alpha=-1.0)


@pytest.mark.parametrize(
    "alpha, expected",
    [(0.5, (1 / np.sqrt(2), 1 / np.sqrt(2))), (0.0, (1.0, 0.0)), (1.0, (1 / np.sqrt(5), 4 / np.sqrt(5)))],
)
def test_surrogate_ellipse_params(alpha, expected):
    np.testing.assert_allclose(surrogate_ellipse_params(alpha), expected, atol=1e-15)


def test_surrogate_is_deterministic_and_real_for_scaled_model():
    a = build_rmt_surrogate(2, 0.7, RngStream(6))
    b = build_rmt_surrogate(2, 0.7, RngStream(6))
    assert a.matrix.shape == (4, 4)
    assert np.array_equal(a.matrix, b.matrix)
    s = build_rmt_surrogate(4, 1.0, RngStream(6), model="scaled")
    assert np.isrealobj(s.matrix)
    with pytest.raises(ValueError):
        build_rmt_surrogate(4, 1.0, RngStream(6), model="other")


@pytest.mark.slow
@pytest.mark.parametrize("alpha", [0.5, 1.0])
def test_w_spectrum_inside_ellipse(alpha):
    # W = C + i alpha H' with Tr H'^2 = N, built from the same ensembles the surrogate uses
    from lindblad_spectra.ensembles import goe

    a, b = surrogate_ellipse_params(alpha)
    t = np.linspace(0, 2 * np.pi, 721)
    ellipse = BoundaryCurve(a * np.cos(t) + 1j * b * np.sin(t), "ellipse", alpha)
    n = 100
    inside = []
    for i in range(10):
        w = goe(n, 1.0, RngStream(7, i).child(0)) + 1j * alpha * gue(n, float(n), RngStream(7, i).child(1))
        inside.append(ellipse.contains_fraction(np.linalg.eigvals(w), inflation=0.15))
    assert min(inside) == 1.0
