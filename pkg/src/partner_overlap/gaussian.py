"""Gaussian states, their complex structures and two-mode invariants.

Covariances are vacuum-normalised (the vacuum has ``sigma = I``) and the
complex structure is ``J = -Omega sigma``. Symplectic eigenvalues are the
moduli of the purely imaginary eigenvalues ``+-i nu`` of ``J``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionError,
    InconsistentBlocksError,
    IndependenceError,
    PhysicalityError,
)
from .symplectic import (
    VALIDATION_TOL,
    ModeSubspace,
    complement_project,
    mode,
    omega,
)


def williamson_spectrum(sigma: np.ndarray) -> np.ndarray:
    """Symplectic eigenvalues of a positive-definite ``sigma``, descending.

    Uses the normal matrix ``sigma^{1/2} Omega sigma^{1/2}``, whose
    eigenvalues are ``+-i nu`` and are computed by a Hermitian solver.
    """
    sigma = np.asarray(sigma, dtype=float)
    w, v = np.linalg.eigh(0.5 * (sigma + sigma.T))
    if w[0] <= 0:
        raise PhysicalityError(f"covariance is not positive definite (min eigenvalue {w[0]:.3e})")
    root = (v * np.sqrt(w)) @ v.T
    h = 1j * root @ omega(sigma.shape[0] // 2) @ root
    ev = np.linalg.eigvalsh(0.5 * (h + h.conj().T))
    return np.sort(ev[ev.size // 2:])[::-1]


@dataclass(frozen=True, eq=False)
class GaussianState:
    """Covariance ``sigma`` (real symmetric ``2N x 2N``) and first moments ``mu``."""

    sigma: np.ndarray
    mu: np.ndarray | None = None
    validate: bool = True

    def __post_init__(self):
        s = np.array(self.sigma, dtype=float)
        if s.ndim != 2 or s.shape[0] != s.shape[1] or s.shape[0] % 2:
            raise DimensionError(f"sigma must be square with even size, got {s.shape}")
        scale = max(1.0, float(np.max(np.abs(s))))
        if np.max(np.abs(s - s.T)) > 1e-12 * scale:
            raise ValueError("sigma is not symmetric")
        s = 0.5 * (s + s.T)
        mu = np.zeros(s.shape[0]) if self.mu is None else np.array(self.mu, dtype=float)
        if mu.shape != (s.shape[0],):
            raise DimensionError("mu does not match sigma")
        s.setflags(write=False)
        mu.setflags(write=False)
        object.__setattr__(self, "sigma", s)
        object.__setattr__(self, "mu", mu)
        if self.validate:
            nu = williamson_spectrum(s)
            if nu[-1] < 1.0 - VALIDATION_TOL:
                raise PhysicalityError(
                    f"unphysical covariance: smallest symplectic eigenvalue {nu[-1]:.12g} < 1", nu=nu
                )

    @property
    def n_modes(self) -> int:
        return self.sigma.shape[0] // 2

    @classmethod
    def vacuum(cls, n_modes: int) -> "GaussianState":
        return cls(np.eye(2 * n_modes))

    @classmethod
    def thermal(cls, nus) -> "GaussianState":
        nus = np.atleast_1d(np.asarray(nus, dtype=float))
        return cls(np.diag(np.repeat(nus, 2)))

    def to_json(self) -> str:
        return json.dumps(
            {"n_modes": self.n_modes, "sigma": self.sigma.tolist(), "mu": self.mu.tolist()}
        )

    @classmethod
    def from_json(cls, text: str) -> "GaussianState":
        d = json.loads(text)
        state = cls(np.array(d["sigma"], dtype=float), np.array(d.get("mu") or np.zeros(2 * d["n_modes"])))
        if state.n_modes != d["n_modes"]:
            raise DimensionError("n_modes disagrees with sigma")
        return state


@dataclass(frozen=True, eq=False)
class ComplexStructure:
    """Linear map ``J = -Omega sigma`` on phase space."""

    J: np.ndarray

    def __post_init__(self):
        j = np.array(self.J, dtype=float)
        if j.ndim != 2 or j.shape[0] != j.shape[1] or j.shape[0] % 2:
            raise DimensionError(f"J must be square with even size, got {j.shape}")
        j.setflags(write=False)
        object.__setattr__(self, "J", j)

    @property
    def n_modes(self) -> int:
        return self.J.shape[0] // 2

    @property
    def sigma(self) -> np.ndarray:
        return omega(self.n_modes) @ self.J

    def apply(self, v) -> np.ndarray:
        return self.J @ np.asarray(v, dtype=complex)


def complex_structure(state: GaussianState) -> ComplexStructure:
    """``J = -Omega sigma``; rejects unphysical covariances."""
    if not state.validate:
        nu = williamson_spectrum(state.sigma)
        if nu[-1] < 1.0 - VALIDATION_TOL:
            raise PhysicalityError(f"unphysical covariance (nu_min = {nu[-1]:.12g})", nu=nu)
    return ComplexStructure(-omega(state.n_modes) @ state.sigma)


def symplectic_spectrum(J: ComplexStructure) -> np.ndarray:
    """Symplectic eigenvalues from the spectrum of ``J``, descending."""
    ev = np.linalg.eigvals(J.J)
    nu = np.sort(np.abs(ev.imag))[::-1]
    return nu[::2].copy()


def is_pure(J: ComplexStructure, tol: float = VALIDATION_TOL) -> bool:
    """True when ``max |J^2 + I| <= tol``."""
    return float(np.max(np.abs(J.J @ J.J + np.eye(J.J.shape[0])))) <= tol


def is_uncorrelated(J: ComplexStructure, S: ModeSubspace, tol: float = VALIDATION_TOL) -> bool:
    """True when ``J`` maps ``span(S)`` into itself.

    Residuals ``Pi_S^perp(J gamma)`` are measured with the Euclidean norm of
    the Darboux coefficients, relative to ``|J gamma|`` when that exceeds one.
    """
    if S.ambient_modes != J.n_modes:
        raise DimensionError("subspace and state have different dimension")
    jg = J.J @ S.basis.T
    res = complement_project(S, jg)
    norms = np.linalg.norm(res, axis=0)
    scale = np.maximum(1.0, np.linalg.norm(jg, axis=0))
    return bool(np.all(norms <= tol * scale))


def reduce(state: GaussianState, S: ModeSubspace) -> GaussianState:
    """Reduced state on ``S`` in its real Darboux frame ``(e_1, f_1, ...)``.

    Entry ``(i, j)`` equals ``sigma(e_i, e_j) = -i <e_i*, J e_j>``.
    """
    if S.ambient_modes != state.n_modes:
        raise DimensionError("subspace and state have different dimension")
    r = S.real_frame()
    return GaussianState(r.T @ state.sigma @ r, r.T @ state.mu)


def _pair_from_invariants(delta: float, det: float, tol: float = VALIDATION_TOL):
    """Solve ``x^2 - delta x + det = 0`` for ``(nu_+, nu_-)`` with ``x = nu^2``."""
    disc = delta * delta - 4.0 * det
    if disc < -tol * max(1.0, delta * delta):
        raise InconsistentBlocksError(
            f"Delta^2 - 4 det J_AB = {disc:.3e} < 0: invariants are not those of a two-mode state"
        )
    root = np.sqrt(max(disc, 0.0))
    big = 0.5 * (delta + root)
    if big <= 0:
        raise InconsistentBlocksError("non-positive symplectic eigenvalue")
    small = det / big
    return float(np.sqrt(big)), float(np.sqrt(max(small, 0.0)))


@dataclass(frozen=True, eq=False)
class TwoModeBlocks:
    """Restricted complex structure of two single modes and its invariants.

    ``J_A``, ``J_B``, ``J_C`` are the ``2x2`` blocks in the complex basis
    ``(gamma_A, gamma_A*, gamma_B, gamma_B*)``; they are ``None`` when the
    record is built straight from invariants.
    """

    det_JA: float
    det_JB: float
    det_JC: float
    det_JAB: float
    J_A: np.ndarray | None = None
    J_B: np.ndarray | None = None
    J_C: np.ndarray | None = None
    jc_max: float = float("nan")

    @classmethod
    def from_invariants(cls, det_JA, det_JB, det_JC, det_JAB, J_A=None, J_B=None, J_C=None, jc_max=None):
        if jc_max is None:
            jc_max = float(np.max(np.abs(J_C))) if J_C is not None else float("nan")
        blocks = cls(float(det_JA), float(det_JB), float(det_JC), float(det_JAB), J_A, J_B, J_C, jc_max)
        blocks.check()
        return blocks

    @property
    def delta(self) -> float:
        return self.det_JA + self.det_JB + 2.0 * self.det_JC

    @property
    def delta_tilde(self) -> float:
        return self.det_JA + self.det_JB - 2.0 * self.det_JC

    @property
    def nu(self) -> tuple[float, float]:
        return _pair_from_invariants(self.delta, self.det_JAB)

    @property
    def nu_tilde(self) -> tuple[float, float]:
        return _pair_from_invariants(self.delta_tilde, self.det_JAB)

    @property
    def nu_tilde_minus(self) -> float:
        return self.nu_tilde[1]

    def check(self, tol: float = VALIDATION_TOL) -> None:
        scale = max(1.0, self.det_JA, self.det_JB, self.det_JAB)
        if self.det_JA < 1.0 - tol * scale or self.det_JB < 1.0 - tol * scale:
            raise InconsistentBlocksError(
                f"reduced single-mode determinants below one: {self.det_JA}, {self.det_JB}"
            )
        if self.det_JAB - self.delta + 1.0 < -tol * scale**2:
            raise InconsistentBlocksError("det J_AB - Delta + 1 < 0: two-mode state is unphysical")
        if self.delta**2 < 4.0 * self.det_JAB - tol * scale**2:
            raise InconsistentBlocksError("Delta^2 < 4 det J_AB: two-mode state is unphysical")

    def to_dict(self) -> dict:
        return {
            "det_JA": self.det_JA,
            "det_JB": self.det_JB,
            "det_JC": self.det_JC,
            "det_JAB": self.det_JAB,
            "delta": self.delta,
            "delta_tilde": self.delta_tilde,
            "nu_tilde_minus": self.nu_tilde_minus,
        }


def _complex_matrix(J: ComplexStructure, frame: np.ndarray) -> np.ndarray:
    """Matrix of ``J`` in a symplectically orthonormal complex frame ``(g, g*, ...)``."""
    om = omega(J.n_modes)
    signs = np.array([1.0, -1.0] * (frame.shape[1] // 2))
    return signs[:, None] * (1j * frame.conj().T @ om @ (J.J @ frame))


def two_mode_blocks(J: ComplexStructure, A: ModeSubspace, B: ModeSubspace) -> TwoModeBlocks:
    """Blocks ``J_A, J_B, J_C`` and the four local-symplectic invariants.

    Determinants are taken in the real Darboux frame of ``A + B`` (where they
    are accurate to relative rounding) and cross-checked against the complex
    blocks, whose determinants must be real to ``1e-10`` (relative).
    """
    if A.n_modes != 1 or B.n_modes != 1:
        raise DimensionError("two_mode_blocks needs single-mode subsystems")
    if A.ambient_modes != J.n_modes or B.ambient_modes != J.n_modes:
        raise DimensionError("subsystems and state have different dimension")
    fa = np.stack([A.basis[0], A.basis[0].conj()], axis=1)
    fb = np.stack([B.basis[0], B.basis[0].conj()], axis=1)
    om = omega(J.n_modes)
    cross = 1j * fa.conj().T @ om @ fb
    scale_ab = max(1.0, float(np.linalg.norm(fa)) * float(np.linalg.norm(fb)))
    if np.max(np.abs(cross)) > VALIDATION_TOL * scale_ab:
        raise IndependenceError(
            f"subsystems are not symplectically orthogonal (max |<gA, gB>| = {np.max(np.abs(cross)):.3e})"
        )

    jab = _complex_matrix(J, np.concatenate([fa, fb], axis=1))
    ja, jb, jc = jab[:2, :2], jab[2:, 2:], jab[:2, 2:]

    frame = np.concatenate([A.real_frame(), B.real_frame()], axis=1)
    sig = frame.T @ J.sigma @ frame
    sig = 0.5 * (sig + sig.T)
    det_a = float(np.linalg.det(sig[:2, :2]))
    det_b = float(np.linalg.det(sig[2:, 2:]))
    det_c = float(np.linalg.det(sig[:2, 2:]))
    # det sigma_AB equals prod nu^2 for two modes; LU is more accurate than the eigenvalues.
    det_ab = float(np.linalg.det(sig))

    for name, m, ref in (("J_A", ja, det_a), ("J_B", jb, det_b), ("J_C", jc, det_c)):
        d = np.linalg.det(m)
        size = max(1.0, float(np.max(np.abs(m))) ** 2)
        if abs(d.imag) > 1e-10 * size:
            raise InconsistentBlocksError(f"det {name} has imaginary part {d.imag:.3e}")
        if abs(d.real - ref) > 1e-8 * size:
            raise InconsistentBlocksError(f"det {name} differs between frames: {d.real} vs {ref}")

    return TwoModeBlocks.from_invariants(det_a, det_b, det_c, det_ab, ja, jb, jc)


def blocks_from_covariance(sigma) -> TwoModeBlocks:
    """Two-mode blocks of a ``4x4`` covariance, with A and B its Darboux modes."""
    state = GaussianState(sigma)
    if state.n_modes != 2:
        raise DimensionError("blocks_from_covariance needs a two-mode covariance")
    return two_mode_blocks(complex_structure(state), mode(0, 2), mode(1, 2))


def haar_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def passive_symplectic(u: np.ndarray) -> np.ndarray:
    """Orthogonal symplectic matrix of a unitary, in ``(x_1, p_1, ...)`` ordering."""
    n = u.shape[0]
    xxpp = np.block([[u.real, -u.imag], [u.imag, u.real]])
    perm = np.ravel(np.column_stack([np.arange(n), np.arange(n) + n]))
    return xxpp[np.ix_(perm, perm)]


def squeezing_symplectic(r) -> np.ndarray:
    r = np.atleast_1d(np.asarray(r, dtype=float))
    return np.diag(np.ravel(np.column_stack([np.exp(-r), np.exp(r)])))


def random_symplectic(n_modes: int, rng: np.random.Generator, squeeze_max: float = 1.0) -> np.ndarray:
    """Passive rotation, single-mode squeezers, passive rotation."""
    o1 = passive_symplectic(haar_unitary(n_modes, rng))
    z = squeezing_symplectic(rng.uniform(0.0, squeeze_max, size=n_modes))
    o2 = passive_symplectic(haar_unitary(n_modes, rng))
    return o1 @ z @ o2


def random_state(
    n_modes: int,
    kind: str = "pure",
    nu_range: tuple[float, float] = (1.0, 3.0),
    squeeze_max: float = 1.0,
    seed=None,
) -> GaussianState:
    """Random state ``S diag(nu_1, nu_1, ...) S^T``.

    ``kind`` is ``"pure"`` (all ``nu = 1``) or ``"mixed"`` (``nu`` uniform in
    ``nu_range``). ``seed`` may be an int, a sequence of ints, or a Generator.
    """
    if n_modes < 1:
        raise ValueError("n_modes must be positive")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    s = random_symplectic(n_modes, rng, squeeze_max)
    if kind == "pure":
        nus = np.ones(n_modes)
    elif kind == "mixed":
        lo, hi = nu_range
        if lo < 1.0 or hi < lo:
            raise ValueError(f"invalid nu range {nu_range}")
        nus = rng.uniform(lo, hi, size=n_modes)
    else:
        raise ValueError(f"unknown state kind {kind!r}")
    sigma = s @ np.diag(np.repeat(nus, 2)) @ s.T
    return GaussianState(0.5 * (sigma + sigma.T))


def random_covariances(
    n_states: int,
    n_modes: int = 2,
    kind: str = "mixed",
    nu_range: tuple[float, float] = (1.0, 3.0),
    squeeze_max: float = 1.0,
    seed=None,
) -> np.ndarray:
    """Stack of ``n_states`` random covariances, drawn as in ``random_state``."""
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    n = n_modes
    perm = np.ravel(np.column_stack([np.arange(n), np.arange(n) + n]))

    def passive():
        z = (rng.standard_normal((n_states, n, n)) + 1j * rng.standard_normal((n_states, n, n))) / np.sqrt(2.0)
        q, r = np.linalg.qr(z)
        d = np.diagonal(r, axis1=1, axis2=2)
        u = q * (d / np.abs(d))[:, None, :]
        top = np.concatenate([u.real, -u.imag], axis=2)
        bot = np.concatenate([u.imag, u.real], axis=2)
        o = np.concatenate([top, bot], axis=1)
        return o[:, perm][:, :, perm]

    o1 = passive()
    sq = rng.uniform(0.0, squeeze_max, size=(n_states, n))
    zdiag = np.stack([np.exp(-sq), np.exp(sq)], axis=2).reshape(n_states, 2 * n)
    o2 = passive()
    if kind == "pure":
        nus = np.ones((n_states, n))
    elif kind == "mixed":
        lo, hi = nu_range
        if lo < 1.0 or hi < lo:
            raise ValueError(f"invalid nu range {nu_range}")
        nus = rng.uniform(lo, hi, size=(n_states, n))
    else:
        raise ValueError(f"unknown state kind {kind!r}")
    s = (o1 * zdiag[:, None, :]) @ o2
    sigma = (s * np.repeat(nus, 2, axis=1)[:, None, :]) @ np.swapaxes(s, 1, 2)
    return 0.5 * (sigma + np.swapaxes(sigma, 1, 2))


def two_mode_invariants(sigmas: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """``(det J_A, det J_B, det J_C, det J_AB)`` for a stack of ``4x4`` covariances.

    For two modes ``det J_AB = det sigma`` since symplectic maps have unit
    determinant.
    """
    s = np.asarray(sigmas, dtype=float)
    if s.shape[-2:] != (4, 4):
        raise DimensionError(f"expected 4x4 covariances, got {s.shape}")

    def det2(b):
        return b[..., 0, 0] * b[..., 1, 1] - b[..., 0, 1] * b[..., 1, 0]

    return det2(s[..., :2, :2]), det2(s[..., 2:, 2:]), det2(s[..., :2, 2:]), np.linalg.det(s)


def min_symplectic_eigenvalues(sigmas: np.ndarray) -> np.ndarray:
    """Smallest symplectic eigenvalue of each covariance in a stack."""
    s = np.asarray(sigmas, dtype=float)
    n = s.shape[-1] // 2
    ev = np.linalg.eigvals(-omega(n) @ s)
    return np.min(np.abs(ev.imag), axis=-1)
