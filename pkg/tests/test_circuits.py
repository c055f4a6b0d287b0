import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from partner_overlap.circuits import (
    SymplecticGate,
    apply,
    beam_splitter,
    closed_form_d_c,
    closed_form_d_sym,
    ho_example,
    ho_state,
    near_decoupling,
    rotation,
    single_mode_squeezer,
    squeezer,
)
from partner_overlap.errors import DimensionError
from partner_overlap.gaussian import GaussianState, complex_structure, is_pure, williamson_spectrum
from partner_overlap.measures import ENTANGLED, NOT_APPLICABLE

angles = st.floats(-2 * math.pi, 2 * math.pi, allow_nan=False)


@given(st.floats(-3, 3), angles, angles)
def test_gates_are_symplectic(r, theta, phi):
    for g in (
        squeezer(r, (0, 2), 3),
        beam_splitter(theta, (2, 1), 3),
        rotation(phi, 1, 3),
        single_mode_squeezer(r, 0, 3),
    ):
        assert g.symplectic_error() < 1e-12 * max(1.0, math.cosh(r) ** 2)


def test_trivial_parameters_give_identity():
    assert np.array_equal(squeezer(0.0).matrix, np.eye(4))
    assert np.array_equal(beam_splitter(0.0).matrix, np.eye(4))


def test_gate_matrices():
    r = 0.3
    c, s = math.cosh(r), math.sinh(r)
    assert np.allclose(squeezer(r).matrix, [[c, 0, s, 0], [0, c, 0, -s], [s, 0, c, 0], [0, -s, 0, c]])
    assert np.allclose(beam_splitter(math.pi / 2).matrix, [[0, 0, 1, 0], [0, 0, 0, 1], [-1, 0, 0, 0], [0, -1, 0, 0]], atol=1e-16)


def test_gate_composition_and_validation():
    g = squeezer(0.2) @ beam_splitter(0.4)
    assert isinstance(g, SymplecticGate) and g.symplectic_error() < 1e-14
    with pytest.raises(DimensionError):
        apply(GaussianState.vacuum(3), squeezer(0.2))
    with pytest.raises(IndexError):
        squeezer(0.1, (0, 3), 3)
    with pytest.raises(ValueError):
        beam_splitter(0.1, (1, 1), 3)
    with pytest.raises(DimensionError):
        SymplecticGate(np.eye(3))


def test_gates_preserve_purity_and_spectrum():
    state = apply(GaussianState.vacuum(3), squeezer(0.8, (0, 1), 3) @ beam_splitter(0.3, (1, 2), 3))
    assert is_pure(complex_structure(state))
    thermal = GaussianState.thermal([1.5, 2.5])
    out = apply(thermal, squeezer(0.7) @ rotation(0.3, 0, 2))
    assert np.allclose(williamson_spectrum(out.sigma), williamson_spectrum(thermal.sigma), rtol=1e-10)


@pytest.mark.parametrize("r", [0.1, 0.5, 1.0])
@pytest.mark.parametrize("theta", [0.0, 0.2, 0.7, 1.3, 1.9, 2.6, 3.0])
def test_example_matches_closed_forms(r, theta):
    ex = ho_example(r, theta)
    assert ex.d_sym == pytest.approx(closed_form_d_sym(r, theta), rel=1e-10, abs=1e-12)
    assert ex.d_c == pytest.approx(closed_form_d_c(r, theta), rel=1e-10)
    assert ex.d_sym_projection == pytest.approx(ex.d_sym, rel=1e-9, abs=1e-12)
    assert ex.d_t == pytest.approx(ex.d_sym - ex.d_c)


@given(st.floats(0.05, 3.0), st.floats(0.0, math.pi).filter(lambda t: abs(math.cos(t)) > 0.05))
def test_stable_closed_form_matches_direct_expression(r, theta):
    c2 = math.cos(theta) ** 2
    x = math.cos(2 * theta) * math.sinh(r) ** 2 + math.cosh(r) ** 2
    direct = c2 * (math.sinh(2 * r) ** 2 / (x * x - 1) + 1)
    assert closed_form_d_sym(r, theta) == pytest.approx(direct, rel=1e-9)


def test_example_endpoints():
    ex = ho_example(0.5, 0.0)
    assert ex.d_sym == pytest.approx(2.0) and ex.d_c == pytest.approx(-2.0)
    assert ex.verdict == ENTANGLED
    mid = ho_example(0.5, math.pi / 2)
    assert mid.verdict == NOT_APPLICABLE and mid.log_negativity == 0.0
    assert near_decoupling(math.pi / 2 + 1e-8) and near_decoupling(-math.pi / 2)
    assert not near_decoupling(1.0)


@given(st.floats(0.05, 2.0), st.floats(0.01, math.pi - 0.01))
def test_example_partner_weights(r, theta):
    ex = ho_example(r, theta)
    wb, wc = ex.partner_weights
    assert abs(wb.imag) < 1e-9 and abs(wc.imag) < 1e-9
    # Real up to one overall sign, independent of the squeezing.
    sign = 1.0 if math.cos(theta) >= 0 else -1.0
    assert sign * wb.real == pytest.approx(math.cos(theta), abs=1e-9)
    assert sign * wc.real == pytest.approx(-math.sin(theta), abs=1e-9)


def test_example_state_builder():
    st_ = ho_state(0.4, 0.3)
    assert st_.n_modes == 3 and np.allclose(st_.mu, 0)


def test_example_entangled_away_from_decoupling():
    thetas = np.linspace(0, math.pi, 201)[1:-1]
    thetas = thetas[[not near_decoupling(t, 1e-3) for t in thetas]]
    en = np.array([ho_example(0.5, t).log_negativity for t in thetas])
    dt = np.array([ho_example(0.5, t).d_t for t in thetas])
    assert np.all(en > 0) and np.all(dt > 0)
    # E_N and D_T rise and fall together; mirror points about pi/2 tie up to rounding.
    de, dd = np.diff(en), np.diff(dt)
    moving = (np.abs(de) > 1e-12) & (np.abs(dd) > 1e-12)
    assert np.array_equal(np.sign(de[moving]), np.sign(dd[moving]))
    assert moving.sum() >= len(de) - 1
