"""Symplectic gates and the three-oscillator squeezer / beam-splitter example."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionError
from .gaussian import GaussianState, complex_structure, two_mode_blocks
from .measures import NOT_APPLICABLE, criterion, d_sym_projection
from .partner import partner_subspace, partner_weights
from .symplectic import mode, omega

THETA_GUARD = 1e-6


@dataclass(frozen=True, eq=False)
class SymplecticGate:
    matrix: np.ndarray
    label: str = "custom"

    def __post_init__(self):
        m = np.array(self.matrix, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] % 2:
            raise DimensionError(f"gate must be square with even size, got {m.shape}")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def n_modes(self) -> int:
        return self.matrix.shape[0] // 2

    def symplectic_error(self) -> float:
        om = omega(self.n_modes)
        return float(np.max(np.abs(self.matrix.T @ om @ self.matrix - om)))

    def __matmul__(self, other: "SymplecticGate") -> "SymplecticGate":
        return SymplecticGate(self.matrix @ other.matrix, f"{self.label}*{other.label}")


def _embed(block: np.ndarray, modes: tuple[int, ...], n_modes: int) -> np.ndarray:
    for m in modes:
        if not 0 <= m < n_modes:
            raise IndexError(f"mode {m} out of range for {n_modes} modes")
    if len(set(modes)) != len(modes):
        raise ValueError(f"gate modes must be distinct, got {modes}")
    idx = [2 * m + k for m in modes for k in (0, 1)]
    out = np.eye(2 * n_modes)
    out[np.ix_(idx, idx)] = block
    return out


def squeezer(r: float, modes: tuple[int, int] = (0, 1), n_modes: int = 2) -> SymplecticGate:
    """Two-mode squeezer with squeezing angle zero."""
    c, s = math.cosh(r), math.sinh(r)
    block = np.array([[c, 0, s, 0], [0, c, 0, -s], [s, 0, c, 0], [0, -s, 0, c]])
    return SymplecticGate(_embed(block, tuple(modes), n_modes), f"squeezer({r}, {tuple(modes)})")


def beam_splitter(theta: float, modes: tuple[int, int] = (0, 1), n_modes: int = 2) -> SymplecticGate:
    c, s = math.cos(theta), math.sin(theta)
    block = np.array([[c, 0, s, 0], [0, c, 0, s], [-s, 0, c, 0], [0, -s, 0, c]])
    return SymplecticGate(_embed(block, tuple(modes), n_modes), f"beam_splitter({theta}, {tuple(modes)})")


def rotation(phi: float, mode_index: int = 0, n_modes: int = 1) -> SymplecticGate:
    c, s = math.cos(phi), math.sin(phi)
    block = np.array([[c, s], [-s, c]])
    return SymplecticGate(_embed(block, (mode_index,), n_modes), f"rotation({phi}, {mode_index})")


def single_mode_squeezer(r: float, mode_index: int = 0, n_modes: int = 1) -> SymplecticGate:
    block = np.diag([math.exp(-r), math.exp(r)])
    return SymplecticGate(_embed(block, (mode_index,), n_modes), f"single_mode_squeezer({r}, {mode_index})")


def apply(state: GaussianState, gate: SymplecticGate) -> GaussianState:
    """``sigma -> S sigma S^T`` and ``mu -> S mu``."""
    if gate.n_modes != state.n_modes:
        raise DimensionError(f"{gate.n_modes}-mode gate on {state.n_modes}-mode state")
    s = gate.matrix
    sigma = s @ state.sigma @ s.T
    return GaussianState(0.5 * (sigma + sigma.T), s @ state.mu)


def tmsv(r: float) -> GaussianState:
    """Two-mode squeezed vacuum."""
    return apply(GaussianState.vacuum(2), squeezer(r, (0, 1), 2))


def ho_state(r: float, theta: float) -> GaussianState:
    """Vacuum of oscillators A, B, C after ``S_AB(r)`` then ``M_BC(theta)``."""
    state = apply(GaussianState.vacuum(3), squeezer(r, (0, 1), 3))
    return apply(state, beam_splitter(theta, (1, 2), 3))


def closed_form_d_sym(r: float, theta: float) -> float:
    """``cos^2 theta (sinh^2 2r / (x^2 - 1) + 1)`` with ``x = cos 2theta sinh^2 r + cosh^2 r``.

    Evaluated as ``2 cosh^2 r / (x + 1) + cos^2 theta``, using
    ``x - 1 = 2 cos^2 theta sinh^2 r``; the direct form cancels badly when
    ``x`` is close to one.
    """
    x = math.cos(2 * theta) * math.sinh(r) ** 2 + math.cosh(r) ** 2
    return 2 * math.cosh(r) ** 2 / (x + 1.0) + math.cos(theta) ** 2


def closed_form_d_c(r: float, theta: float) -> float:
    den = 2 * math.cos(2 * theta) * math.sinh(r) ** 2 + math.cosh(2 * r) + 3.0
    return -math.cos(theta) ** 2 - 4 * math.cosh(r) ** 2 / den


def near_decoupling(theta: float, guard: float = THETA_GUARD) -> bool:
    """True within ``guard`` of ``theta = (n + 1/2) pi``, where A and B decouple."""
    return abs(math.remainder(theta - math.pi / 2, math.pi)) < guard


@dataclass(frozen=True)
class HOExample:
    r: float
    theta: float
    partner_weights: tuple[complex, complex]
    d_sym: float
    d_sym_projection: float
    d_c: float
    d_t: float
    log_negativity: float
    verdict: str


def ho_example(r: float, theta: float) -> HOExample:
    """Pipeline values for modes A and B of the three-oscillator example.

    ``partner_weights`` are the components of the partner of A on
    ``gamma_B`` and ``gamma_C``, rephased so the B weight is real and
    non-negative (they follow ``(cos theta, -sin theta)``).
    """
    state = ho_state(r, theta)
    J = complex_structure(state)
    A, B, C = (mode(i, 3) for i in range(3))
    ap = partner_subspace(J, A)
    w = partner_weights(ap, [B, C])
    lead = w[0] if abs(w[0]) > 1e-12 else w[1]
    w = w * (abs(lead) / lead)
    if abs(w[0]) <= 1e-12:
        w[1] = -abs(w[1]) * np.sign(math.sin(theta) or 1.0)
    blocks = two_mode_blocks(J, A, B)
    rep = criterion(blocks)
    if near_decoupling(theta):
        rep_verdict = NOT_APPLICABLE
        proj = float("nan")
    else:
        rep_verdict = rep.verdict
        proj = d_sym_projection(J, A, B)
    return HOExample(
        r=r,
        theta=theta,
        partner_weights=(complex(w[0]), complex(w[1])),
        d_sym=rep.d_sym,
        d_sym_projection=proj,
        d_c=rep.d_c,
        d_t=rep.d_t,
        log_negativity=rep.log_negativity,
        verdict=rep_verdict,
    )
