import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import seeds
from partner_overlap.circuits import apply, ho_state, rotation, single_mode_squeezer, squeezer, tmsv
from partner_overlap.errors import DimensionError, IndependenceError, PhysicalityError
from partner_overlap.gaussian import (
    GaussianState,
    complex_structure,
    is_pure,
    is_uncorrelated,
    min_symplectic_eigenvalues,
    random_covariances,
    random_state,
    reduce,
    symplectic_spectrum,
    two_mode_blocks,
    two_mode_invariants,
    williamson_spectrum,
)
from partner_overlap.symplectic import (
    ModeSubspace,
    complement_project,
    mode,
    omega,
    orthonormalize,
    symplectic_product,
)

R_VALUES = (0.1, 0.5, 1.0, 2.0)


def tmsv_sigma(r):
    # Two-mode squeezer applied to the vacuum, written out by hand.
    c, s = math.cosh(r), math.sinh(r)
    S = np.array([[c, 0, s, 0], [0, c, 0, -s], [s, 0, c, 0], [0, -s, 0, c]])
    return S @ S.T


def test_vacuum_complex_structure():
    for n in (1, 3):
        J = complex_structure(GaussianState.vacuum(n))
        assert np.allclose(J.J @ J.J, -np.eye(2 * n))
        assert np.allclose(np.linalg.eigvals(J.J).imag ** 2, 1)
        assert np.allclose(symplectic_spectrum(J), 1)


def test_thermal_spectrum():
    J = complex_structure(GaussianState.thermal([2.0]))
    assert symplectic_spectrum(J) == pytest.approx([2.0])
    assert not is_pure(J)


def test_example_state_is_pure():
    J = complex_structure(ho_state(0.5, 0.7))
    assert is_pure(J)
    assert np.max(np.abs(J.J @ J.J + np.eye(6))) < 1e-12


def test_example_sigma_entrywise():
    r, th = 0.5, 0.7
    c, s = math.cosh(r), math.sinh(r)
    S = np.eye(6)
    S[:4, :4] = [[c, 0, s, 0], [0, c, 0, -s], [s, 0, c, 0], [0, -s, 0, c]]
    M = np.eye(6)
    ct, st_ = math.cos(th), math.sin(th)
    M[2:, 2:] = [[ct, 0, st_, 0], [0, ct, 0, st_], [-st_, 0, ct, 0], [0, -st_, 0, ct]]
    assert np.allclose(ho_state(r, th).sigma, M @ S @ S.T @ M.T, atol=1e-14)


@pytest.mark.parametrize("r", R_VALUES)
def test_tmsv_spectra_and_reduction(r):
    state = tmsv(r)
    assert np.allclose(state.sigma, tmsv_sigma(r), atol=1e-13)
    J = complex_structure(state)
    assert np.allclose(symplectic_spectrum(J), [1, 1], atol=1e-9)
    red = reduce(state, mode(0, 2))
    assert np.allclose(red.sigma, math.cosh(2 * r) * np.eye(2), rtol=1e-13)
    assert symplectic_spectrum(complex_structure(red)) == pytest.approx([math.cosh(2 * r)], rel=1e-13)


@pytest.mark.parametrize("r", R_VALUES)
def test_tmsv_blocks(r):
    J = complex_structure(tmsv(r))
    b = two_mode_blocks(J, mode(0, 2), mode(1, 2))
    assert b.det_JA == pytest.approx(math.cosh(2 * r) ** 2, rel=1e-12)
    assert b.det_JB == pytest.approx(math.cosh(2 * r) ** 2, rel=1e-12)
    assert b.det_JC == pytest.approx(-math.sinh(2 * r) ** 2, rel=1e-12)
    assert b.det_JAB == pytest.approx(1.0, rel=1e-9)
    for m in (b.J_A, b.J_B, b.J_C):
        assert abs(np.linalg.det(m).imag) < 1e-10 * max(1, np.max(np.abs(m)) ** 2)


def test_vacuum_blocks():
    J = complex_structure(GaussianState.vacuum(3))
    b = two_mode_blocks(J, mode(0, 3), mode(2, 3))
    assert (b.det_JA, b.det_JB, b.det_JAB) == pytest.approx((1, 1, 1))
    assert b.det_JC == pytest.approx(0, abs=1e-15)


def test_example_state_decouples_at_quarter_turn():
    J = complex_structure(ho_state(0.5, math.pi / 2))
    b = two_mode_blocks(J, mode(0, 3), mode(1, 3))
    assert abs(b.det_JC) < 1e-12


def test_overlapping_modes_rejected():
    J = complex_structure(GaussianState.vacuum(2))
    with pytest.raises(IndependenceError):
        two_mode_blocks(J, mode(0, 2), mode(0, 2))


def test_uncorrelated_checks():
    assert is_uncorrelated(complex_structure(GaussianState.vacuum(2)), mode(0, 2))
    assert not is_uncorrelated(complex_structure(tmsv(0.3)), mode(0, 2))


def test_eigenvector_pair_is_uncorrelated():
    J = complex_structure(ho_state(0.5, 0.7))
    w, v = np.linalg.eig(J.J)
    g = v[:, np.argmin(np.abs(w - 1j))]
    norm = symplectic_product(g, g).real
    if norm < 0:
        g = g.conj()
        norm = -norm
    S = ModeSubspace((g / math.sqrt(norm))[None, :])
    assert is_uncorrelated(J, S)


def test_reduce_vacuum_and_full_space(rng):
    assert np.allclose(reduce(GaussianState.vacuum(3), mode(1, 3)).sigma, np.eye(2))
    state = random_state(3, "mixed", seed=5)
    full = orthonormalize([mode(i, 3).basis[0] for i in range(3)])
    red = reduce(state, full)
    assert np.allclose(williamson_spectrum(red.sigma), williamson_spectrum(state.sigma), rtol=1e-10)


def test_physicality_errors():
    with pytest.raises(PhysicalityError) as exc:
        GaussianState(0.5 * np.eye(2))
    assert exc.value.nu is not None
    with pytest.raises(ValueError):
        GaussianState(np.array([[1.0, 0.1], [0.0, 1.0]]))
    with pytest.raises(DimensionError):
        GaussianState(np.eye(3))


def test_state_json_roundtrip():
    s = random_state(2, "mixed", seed=3)
    back = GaussianState.from_json(s.to_json())
    assert np.array_equal(back.sigma, s.sigma)


def test_random_state_contract():
    pure = random_state(4, "pure", seed=11)
    assert is_pure(complex_structure(pure))
    mixed = random_state(3, "mixed", nu_range=(1.5, 3.0), seed=11)
    nu = williamson_spectrum(mixed.sigma)
    assert np.all(nu >= 1.5 - 1e-9) and np.all(nu <= 3.0 + 1e-9)
    assert np.array_equal(random_state(3, "mixed", seed=99).sigma, random_state(3, "mixed", seed=99).sigma)
    with pytest.raises(ValueError):
        random_state(2, "mixed", nu_range=(0.5, 2.0))


@given(seeds, st.integers(1, 5))
def test_spectrum_routes_agree(seed, n):
    state = random_state(n, "mixed", seed=seed)
    J = complex_structure(state)
    assert np.allclose(symplectic_spectrum(J), williamson_spectrum(state.sigma), rtol=1e-8)
    assert np.all(symplectic_spectrum(J) >= 1 - 1e-9)


@given(seeds, st.integers(2, 6))
def test_random_pure_states_are_pure(seed, n):
    J = complex_structure(random_state(n, "pure", seed=seed))
    assert np.max(np.abs(J.J @ J.J + np.eye(2 * n))) <= 1e-9


def local_gate(rng):
    g = rotation(rng.uniform(0, 2 * np.pi), 0, 2) @ single_mode_squeezer(rng.uniform(-1, 1), 0, 2)
    h = rotation(rng.uniform(0, 2 * np.pi), 1, 2) @ single_mode_squeezer(rng.uniform(-1, 1), 1, 2)
    return g @ h


@given(seeds)
def test_block_determinants_are_local_invariants(seed):
    rng = np.random.default_rng(seed)
    state = random_state(2, "mixed", seed=rng)
    A, B = mode(0, 2), mode(1, 2)
    b0 = two_mode_blocks(complex_structure(state), A, B)
    b1 = two_mode_blocks(complex_structure(apply(state, local_gate(rng))), A, B)
    for name in ("det_JA", "det_JB", "det_JC", "det_JAB"):
        x, y = getattr(b0, name), getattr(b1, name)
        assert abs(x - y) <= 1e-8 * max(1.0, abs(x))


@given(seeds)
def test_reduced_blocks_match_global(seed):
    rng = np.random.default_rng(seed)
    state = random_state(4, "pure", seed=rng)
    A = orthonormalize([rng.standard_normal(8), rng.standard_normal(8)])
    e, f = complement_project(A, rng.standard_normal(8)).real, complement_project(A, rng.standard_normal(8)).real
    B = orthonormalize([e, f])
    glob = two_mode_blocks(complex_structure(state), A, B)
    AB = ModeSubspace(np.concatenate([A.basis, B.basis]))
    red = reduce(state, AB)
    loc = two_mode_blocks(complex_structure(red), mode(0, 2), mode(1, 2))
    for name in ("det_JA", "det_JB", "det_JC"):
        x, y = getattr(glob, name), getattr(loc, name)
        assert abs(x - y) <= 1e-10 * max(1.0, abs(x)) * 100


def test_uncorrelated_reduction_factorises():
    # Squeezed spectator next to a two-mode squeezed pair: mode 2 is uncorrelated.
    state = apply(GaussianState.vacuum(3), squeezer(0.4, (0, 1), 3))
    state = apply(state, single_mode_squeezer(0.8, 2, 3))
    J = complex_structure(state)
    assert is_uncorrelated(J, mode(2, 3))
    red = reduce(state, ModeSubspace(np.concatenate([mode(0, 3).basis, mode(2, 3).basis])))
    assert np.max(np.abs(red.sigma[:2, 2:])) < 1e-9


def test_batched_generation_matches_contract():
    sig = random_covariances(500, 2, "mixed", (1.0, 3.0), seed=7)
    assert np.all(min_symplectic_eigenvalues(sig) >= 1 - 1e-9)
    pure = random_covariances(50, 3, "pure", seed=7)
    om = omega(3)
    for s in pure:
        J = -om @ s
        assert np.max(np.abs(J @ J + np.eye(6))) < 1e-9
    da, db, dc, dab = two_mode_invariants(sig[:40])
    for i in range(40):
        b = two_mode_blocks(complex_structure(GaussianState(sig[i])), mode(0, 2), mode(1, 2))
        assert (b.det_JA, b.det_JB, b.det_JC, b.det_JAB) == pytest.approx((da[i], db[i], dc[i], dab[i]), rel=1e-9, abs=1e-12)
