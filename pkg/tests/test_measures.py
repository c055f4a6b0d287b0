import json
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import seeds
from partner_overlap.circuits import SymplecticGate, apply, ho_state, tmsv
from partner_overlap.errors import DimensionError, InconsistentBlocksError
from partner_overlap.gaussian import (
    GaussianState,
    TwoModeBlocks,
    blocks_from_covariance,
    complex_structure,
    random_covariances,
    random_state,
    random_symplectic,
    two_mode_blocks,
    two_mode_invariants,
)
from partner_overlap.measures import (
    BOUNDARY,
    ENTANGLED,
    LN2,
    NOT_APPLICABLE,
    SEPARABLE,
    NotApplicable,
    criterion,
    criterion_arrays,
    d_critical,
    d_sym_determinant,
    d_sym_projection,
    log_negativity,
    overlap,
    pt_spectrum,
    w_coefficient,
)
from partner_overlap.partner import partner_subspace, single_mode_det
from partner_overlap.symplectic import ModeSubspace, from_darboux_pair, mode, random_modes


def test_overlap_of_a_mode_with_itself_and_disjoint_modes():
    A, B = mode(0, 2), mode(1, 2)
    assert overlap(A, A) == pytest.approx(1.0)
    assert overlap(A, B) == pytest.approx(0.0, abs=1e-15)
    AB = ModeSubspace(np.concatenate([A.basis, B.basis]))
    assert overlap(AB, A) == pytest.approx(1.0)
    assert overlap(AB, AB) == pytest.approx(2.0)


def test_overlap_vanishes_although_subspaces_are_not_orthogonal():
    g1, g2 = np.array([0.0, 1, 0, 0]), np.array([-1.0, 0, 0, 0])
    g3, g4 = np.array([0.0, 1, 0, 1]), np.array([0.0, -1, -1, 0])
    X, Y = from_darboux_pair(g1, g2), from_darboux_pair(g3, g4)
    assert overlap(X, Y) == pytest.approx(0.0, abs=1e-15)
    assert overlap(Y, X) == pytest.approx(0.0, abs=1e-15)
    # gamma^(2) and gamma^(3) are not symplectically orthogonal.
    assert (g2[1] * g3[0] - g2[0] * g3[1]) != 0


def test_overlap_dimension_mismatch():
    with pytest.raises(DimensionError):
        overlap(mode(0, 2), mode(0, 3))


@given(seeds, st.integers(2, 4))
def test_overlap_is_symmetric(seed, n):
    rng = np.random.default_rng(seed)
    X, Y = (ModeSubspace(np.concatenate([m.basis for m in random_modes(n, k, rng)])) for k in (1, 2))
    d = overlap(X, Y)
    assert d == pytest.approx(overlap(Y, X), abs=1e-8 * (1 + abs(d)))
    assert overlap(X, X) == pytest.approx(1.0, abs=1e-9)


@pytest.mark.parametrize("r", [0.1, 0.5, 1.0, 2.0])
def test_tmsv_values(r):
    J = complex_structure(tmsv(r))
    A, B = mode(0, 2), mode(1, 2)
    b = two_mode_blocks(J, A, B)
    assert d_sym_projection(J, A, B) == pytest.approx(2.0, abs=1e-9)
    assert d_sym_determinant(b) == pytest.approx(2.0, rel=1e-9)
    assert d_critical(b) == pytest.approx(-2.0, rel=1e-9)
    assert pt_spectrum(b)[1] == pytest.approx(math.exp(-2 * r), rel=1e-9)
    assert log_negativity(b) == pytest.approx(2 * r / LN2, rel=1e-9)
    with pytest.raises(NotApplicable):
        w_coefficient(b)
    rep = criterion(b)
    assert rep.verdict == ENTANGLED and rep.d_t == pytest.approx(4.0, rel=1e-9)


def test_half_squeezing_log_negativity():
    b = two_mode_blocks(complex_structure(tmsv(0.5)), mode(0, 2), mode(1, 2))
    assert log_negativity(b) == pytest.approx(1 / LN2, rel=1e-10)


def test_vacuum_and_thermal_pt_spectrum():
    assert pt_spectrum(blocks_from_covariance(np.eye(4)))[1] == pytest.approx(1.0)
    sig = np.diag([2.0, 2.0, 3.0, 3.0])
    b = blocks_from_covariance(sig)
    assert sorted(pt_spectrum(b)) == pytest.approx([2.0, 3.0])
    rep = criterion(b)
    assert rep.verdict == NOT_APPLICABLE and rep.log_negativity == 0.0


def test_vanishing_cross_determinant_gives_zero_symmetric_overlap():
    b = TwoModeBlocks.from_invariants(2.0, 2.0, 0.0, 4.0)
    assert d_sym_determinant(b) == 0.0


def test_position_only_correlations():
    # sigma_C = diag(c, 0): det J_C = 0 although the modes are correlated.
    a, c = 2.0, 0.5
    sig = np.array([[a, 0, c, 0], [0, a, 0, 0], [c, 0, a, 0], [0, 0, 0, a]])
    b = blocks_from_covariance(sig)
    assert abs(b.det_JC) < 1e-12 and b.jc_max > 0.1
    rep = criterion(b)
    assert rep.d_sym == pytest.approx(0.0, abs=1e-12)
    assert rep.verdict == SEPARABLE and rep.nu_tilde_minus >= 1


def test_w_coefficient_closed_form():
    b = TwoModeBlocks.from_invariants(2.0, 2.0, -0.55, 2.0)
    assert w_coefficient(b) == pytest.approx(1 / (2 * LN2), rel=1e-14)


def test_inconsistent_invariants_rejected():
    with pytest.raises(InconsistentBlocksError):
        TwoModeBlocks.from_invariants(0.5, 2.0, 0.0, 1.0)
    with pytest.raises(InconsistentBlocksError):
        TwoModeBlocks.from_invariants(2.0, 2.0, 0.0, 5.0)


def test_pure_reduced_mode_is_not_applicable():
    b = TwoModeBlocks.from_invariants(1.0, 2.0, 0.0, 2.0)
    with pytest.raises(NotApplicable):
        d_sym_determinant(b)
    assert criterion(b).verdict == NOT_APPLICABLE


def test_example_closed_form_at_quarter_angle():
    r, th = 0.5, math.pi / 4
    J = complex_structure(ho_state(r, th))
    b = two_mode_blocks(J, mode(0, 3), mode(1, 3))
    c2 = 0.5
    expected = c2 * (math.sinh(2 * r) ** 2 / (math.cosh(r) ** 4 - 1) + 1)
    assert d_sym_determinant(b) == pytest.approx(expected, rel=1e-10)
    assert d_sym_projection(J, mode(0, 3), mode(1, 3)) == pytest.approx(expected, rel=1e-9)


def test_report_json_fields():
    rep = criterion(two_mode_blocks(complex_structure(ho_state(0.5, 0.4)), mode(0, 3), mode(1, 3)))
    d = json.loads(rep.to_json())
    assert set(d) == {"d_sym", "d_c", "d_t", "log_negativity", "nu_tilde_minus", "verdict", "w_delta", "first_order_logneg"}
    assert d["verdict"] in (ENTANGLED, SEPARABLE, BOUNDARY, NOT_APPLICABLE)
    na = json.loads(criterion(blocks_from_covariance(np.eye(4))).to_json())
    assert na["d_t"] is None


def pure_state_with_modes(rng, n):
    J = complex_structure(random_state(n, "pure", seed=rng))
    A, B = random_modes(n, 2, rng)
    return J, A, B


@given(seeds, st.integers(3, 6))
def test_projection_and_determinant_routes_agree(seed, n):
    rng = np.random.default_rng(seed)
    J, A, B = pure_state_with_modes(rng, n)
    b = two_mode_blocks(J, A, B)
    if min(b.det_JA, b.det_JB) - 1 < 1e-4:
        return
    proj = d_sym_projection(J, A, B)
    det = d_sym_determinant(b)
    assert abs(proj - det) <= 1e-8 * max(1.0, abs(det))


@given(seeds)
def test_overlap_depends_only_on_reduced_state(seed):
    # Two purifications of the same two-mode state: act on the ancillas.
    rng = np.random.default_rng(seed)
    state = random_state(4, "pure", seed=rng)
    A, B = mode(0, 4), mode(1, 4)
    big = np.eye(8)
    big[4:, 4:] = random_symplectic(2, rng)
    other = apply(state, SymplecticGate(big))
    J1, J2 = complex_structure(state), complex_structure(other)
    if min(single_mode_det(J1, A), single_mode_det(J1, B)) - 1 < 1e-4:
        return
    d1 = overlap(partner_subspace(J1, A), B)
    d2 = overlap(partner_subspace(J2, A), B)
    assert d1 == pytest.approx(d2, abs=1e-8 * max(1, abs(d1)))


@given(seeds)
def test_product_states_have_zero_overlap(seed):
    rng = np.random.default_rng(seed)
    # Independent purifications of A (modes 0, 2) and B (modes 1, 3).
    big = np.eye(8)
    sa, sb = random_symplectic(2, rng), random_symplectic(2, rng)
    ia, ib = [0, 1, 4, 5], [2, 3, 6, 7]
    big[np.ix_(ia, ia)] = sa
    big[np.ix_(ib, ib)] = sb
    J = complex_structure(apply(GaussianState.vacuum(4), SymplecticGate(big)))
    A, B = mode(0, 4), mode(1, 4)
    if min(single_mode_det(J, A), single_mode_det(J, B)) - 1 < 1e-6:
        return
    assert abs(overlap(partner_subspace(J, A), B)) < 1e-9
    assert abs(overlap(partner_subspace(J, B), A)) < 1e-9


def local_gate(rng):
    big = np.zeros((4, 4))
    big[:2, :2] = random_symplectic(1, rng)
    big[2:, 2:] = random_symplectic(1, rng)
    return SymplecticGate(big)


@given(seeds)
def test_measures_are_local_invariants(seed):
    rng = np.random.default_rng(seed)
    state = random_state(2, "mixed", seed=rng)
    b0 = blocks_from_covariance(state.sigma)
    b1 = blocks_from_covariance(apply(state, local_gate(rng)).sigma)
    r0, r1 = criterion(b0), criterion(b1)
    for name in ("d_sym", "d_c", "d_t", "log_negativity"):
        x, y = getattr(r0, name), getattr(r1, name)
        assert abs(x - y) <= 1e-7 * max(1.0, abs(x))


@given(seeds)
def test_criterion_agrees_with_ppt(seed):
    state = random_state(2, "mixed", nu_range=(1.0, 2.0), seed=seed)
    rep = criterion(blocks_from_covariance(state.sigma))
    if rep.verdict == ENTANGLED:
        assert rep.nu_tilde_minus < 1
    elif rep.verdict == SEPARABLE:
        assert rep.nu_tilde_minus > 1


@given(seeds)
def test_nonpositive_symmetric_overlap_implies_separable(seed):
    state = random_state(2, "mixed", nu_range=(1.0, 2.0), seed=seed)
    rep = criterion(blocks_from_covariance(state.sigma))
    if rep.d_sym <= 0:
        assert rep.nu_tilde_minus >= 1 - 1e-9


@given(seeds)
def test_threshold_pure_state_limit(seed):
    # For a pure two-mode state D_c = -2 and D_sym = 2.
    rng = np.random.default_rng(seed)
    J = complex_structure(random_state(2, "pure", seed=rng))
    b = two_mode_blocks(J, mode(0, 2), mode(1, 2))
    if b.det_JA - 1 < 1e-6:
        return
    assert d_critical(b) == pytest.approx(-2.0, rel=1e-7)
    assert d_sym_determinant(b) == pytest.approx(2.0, rel=1e-7)


def test_vectorised_criterion_matches_scalar():
    sig = random_covariances(300, 2, "mixed", (1.0, 3.0), seed=21)
    out = criterion_arrays(*two_mode_invariants(sig))
    for i in range(300):
        rep = criterion(blocks_from_covariance(sig[i]))
        assert out["verdict"][i] == rep.verdict
        assert out["d_t"][i] == pytest.approx(rep.d_t, rel=1e-9, abs=1e-12)
        assert out["nu_tilde_minus"][i] == pytest.approx(rep.nu_tilde_minus, rel=1e-12)


def test_first_order_log_negativity_near_threshold():
    # Thermal noise t added to a two-mode squeezed state, tuned close to the threshold.
    base = tmsv(0.4).sigma
    lo, hi = 0.0, 5.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if criterion(blocks_from_covariance(base + mid * np.eye(4))).d_t > 0:
            lo = mid
        else:
            hi = mid
    rep = criterion(blocks_from_covariance(base + (lo - 1e-5) * np.eye(4)))
    assert rep.verdict == ENTANGLED
    assert rep.log_negativity == pytest.approx(rep.first_order_logneg, rel=1e-3)
