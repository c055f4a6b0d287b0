r"""Complexified phase space of N bosonic modes.

Vectors are stored in the Darboux ordering ``(x_1, p_1, ..., x_N, p_N)``.
The symplectic form is the block-diagonal matrix ``Omega`` with blocks
``[[0, 1], [-1, 0]]`` and the complexified product is

.. math:: \langle u, v\rangle = i\, u^\dagger \Omega v ,

which is Hermitian but indefinite. With this sign a real Darboux pair
``(e, f)`` with ``e^T Omega f = 1`` yields the unit vector
``(e - i f) / sqrt(2)`` with ``<gamma, gamma> = 1``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
from scipy.linalg import subspace_angles

from .errors import DimensionError, InvalidSubspaceError, NonSymplecticSubspaceError

ALGEBRA_TOL = 1e-12
VALIDATION_TOL = 1e-9
MAX_GRAM_CONDITION = 1e8


def omega(n_modes: int) -> np.ndarray:
    """Standard symplectic matrix for ``n_modes`` modes."""
    return np.kron(np.eye(n_modes), np.array([[0.0, 1.0], [-1.0, 0.0]]))


def _as_coeffs(v) -> np.ndarray:
    return np.asarray(v, dtype=complex)


@dataclass(frozen=True, eq=False)
class PhaseVector:
    """Complex phase-space vector in Darboux coordinates."""

    coeffs: np.ndarray

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=complex).reshape(-1)
        if c.size == 0 or c.size % 2:
            raise DimensionError(f"phase vector needs an even, nonzero length, got {c.size}")
        if not np.all(np.isfinite(c)):
            raise ValueError("phase vector has non-finite components")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @property
    def dim_modes(self) -> int:
        return self.coeffs.size // 2

    def conj(self) -> "PhaseVector":
        return PhaseVector(np.conj(self.coeffs))

    def __array__(self, dtype=None, copy=None):
        return self.coeffs if dtype is None else self.coeffs.astype(dtype)

    def __len__(self):
        return self.coeffs.size

    def to_json(self) -> list:
        return [[float(z.real), float(z.imag)] for z in self.coeffs]

    @classmethod
    def from_json(cls, data) -> "PhaseVector":
        if isinstance(data, str):
            data = json.loads(data)
        arr = np.asarray(data, dtype=float)
        return cls(arr[:, 0] + 1j * arr[:, 1])


def darboux_vector(index: int, n_modes: int) -> np.ndarray:
    """Unit real vector along Darboux coordinate ``index``."""
    e = np.zeros(2 * n_modes)
    e[index] = 1.0
    return e


def symplectic_product(u, v) -> complex:
    """Return ``<u, v> = (1/i) Omega(u*, v)``, antilinear in ``u``."""
    u, v = _as_coeffs(u), _as_coeffs(v)
    if u.shape[0] != v.shape[0]:
        raise DimensionError(f"dimension mismatch: {u.shape[0]} vs {v.shape[0]}")
    if u.shape[0] % 2:
        raise DimensionError("phase-space dimension must be even")
    n = u.shape[0] // 2
    return 1j * (u.conj() @ (omega(n) @ v))


def omega_form(u, v):
    """Bilinear symplectic form ``u^T Omega v`` (no conjugation)."""
    u, v = np.asarray(u), np.asarray(v)
    if u.shape[0] != v.shape[0]:
        raise DimensionError(f"dimension mismatch: {u.shape[0]} vs {v.shape[0]}")
    return u.T @ (omega(u.shape[0] // 2) @ v)


def _fix_phase(g: np.ndarray) -> np.ndarray:
    mags = np.abs(g)
    idx = int(np.argmax(mags >= (1.0 - 1e-9) * mags.max()))
    return g * (np.conj(g[idx]) / mags[idx])


@dataclass(frozen=True, eq=False)
class ModeSubspace:
    """Subsystem spanned by ``{gamma_I, gamma_I*}`` for an orthonormal set ``gamma_I``.

    ``basis`` has shape ``(k, 2N)``; row ``I`` holds ``gamma_I``. The
    constructor checks ``<g_I, g_J> = delta_IJ`` and ``<g_I, g_J*> = 0``.
    """

    basis: np.ndarray
    tol: float = field(default=VALIDATION_TOL, repr=False)

    def __post_init__(self):
        b = np.array(self.basis, dtype=complex)
        if b.ndim == 1:
            b = b[None, :]
        if b.ndim != 2 or b.shape[1] % 2 or b.shape[0] == 0:
            raise DimensionError(f"basis must have shape (k, 2N), got {b.shape}")
        if b.shape[0] > b.shape[1] // 2:
            raise DimensionError("more basis vectors than modes")
        b.setflags(write=False)
        object.__setattr__(self, "basis", b)
        self.check()

    @classmethod
    def from_vectors(cls, vectors: Iterable, tol: float = VALIDATION_TOL) -> "ModeSubspace":
        return cls(np.array([_as_coeffs(v) for v in vectors]), tol=tol)

    @property
    def n_modes(self) -> int:
        return self.basis.shape[0]

    @property
    def ambient_modes(self) -> int:
        return self.basis.shape[1] // 2

    @property
    def vectors(self) -> list[PhaseVector]:
        return [PhaseVector(g) for g in self.basis]

    def gram(self) -> tuple[np.ndarray, np.ndarray]:
        """Return ``(<g_I, g_J>, <g_I, g_J*>)`` as two ``k x k`` matrices."""
        om = omega(self.ambient_modes)
        b = self.basis
        return 1j * b.conj() @ om @ b.T, 1j * b.conj() @ om @ b.conj().T

    def check(self) -> None:
        g, h = self.gram()
        scale = max(1.0, float(np.max(np.sum(np.abs(self.basis) ** 2, axis=1))))
        err = max(np.max(np.abs(g - np.eye(self.n_modes))), np.max(np.abs(h)))
        if err > self.tol * scale:
            raise InvalidSubspaceError(
                f"basis is not symplectically orthonormal (max deviation {err:.3e})"
            )

    def complex_frame(self) -> np.ndarray:
        """Columns ``gamma_1..gamma_k, gamma_1*..gamma_k*`` as a ``(2N, 2k)`` array."""
        return np.concatenate([self.basis.T, self.basis.conj().T], axis=1)

    def real_frame(self) -> np.ndarray:
        """Real Darboux frame ``(e_1, f_1, ..., e_k, f_k)`` with ``gamma = (e - i f)/sqrt(2)``."""
        cols = []
        for g in self.basis:
            cols.append(np.sqrt(2.0) * g.real)
            cols.append(-np.sqrt(2.0) * g.imag)
        return np.array(cols).T

    def direct_sum(self, other: "ModeSubspace") -> "ModeSubspace":
        if other.ambient_modes != self.ambient_modes:
            raise DimensionError("subspaces live in different phase spaces")
        return ModeSubspace(np.concatenate([self.basis, other.basis]), tol=self.tol)

    def to_json(self) -> list:
        return [PhaseVector(g).to_json() for g in self.basis]

    @classmethod
    def from_json(cls, data) -> "ModeSubspace":
        if isinstance(data, str):
            data = json.loads(data)
        return cls(np.array([PhaseVector.from_json(v).coeffs for v in data]))


def mode(index: int, n_modes: int) -> ModeSubspace:
    """Subspace of the ``index``-th Darboux mode, ``gamma = (e_x - i e_p)/sqrt(2)``."""
    if not 0 <= index < n_modes:
        raise IndexError(f"mode {index} out of range for {n_modes} modes")
    g = (darboux_vector(2 * index, n_modes) - 1j * darboux_vector(2 * index + 1, n_modes)) / np.sqrt(2)
    return ModeSubspace(g[None, :])


def from_darboux_pair(e, f) -> ModeSubspace:
    """Single-mode subspace from a real pair with ``e^T Omega f = 1``."""
    e, f = np.asarray(e, dtype=float), np.asarray(f, dtype=float)
    c = omega_form(e, f)
    if abs(c - 1.0) > VALIDATION_TOL * max(1.0, np.dot(e, e), np.dot(f, f)):
        raise InvalidSubspaceError(f"pair is not canonical: Omega(e, f) = {c}")
    return ModeSubspace(((e - 1j * f) / np.sqrt(2))[None, :])


def project(S: ModeSubspace, v) -> np.ndarray:
    """Symplectic projection onto ``span{gamma_I, gamma_I*}``.

    ``v`` may be a single vector or a ``(2N, m)`` array of column vectors.
    """
    v = _as_coeffs(v)
    if v.shape[0] != 2 * S.ambient_modes:
        raise DimensionError(f"vector of length {v.shape[0]} vs {2 * S.ambient_modes}-dim space")
    om_v = omega(S.ambient_modes) @ v
    b = S.basis
    c_plus = 1j * (b.conj() @ om_v)   # <gamma_I, v>
    c_minus = 1j * (b @ om_v)         # <gamma_I*, v>
    return b.T @ c_plus - b.conj().T @ c_minus


def complement_project(S: ModeSubspace, v) -> np.ndarray:
    """Projection onto the symplectic complement, ``v - project(S, v)``."""
    return _as_coeffs(v) - project(S, v)


def _real_spanning_set(vectors: Sequence) -> list[np.ndarray]:
    out = []
    for v in vectors:
        c = _as_coeffs(v)
        for part in (c.real, c.imag):
            if np.linalg.norm(part) > 0.0:
                out.append(np.array(part, dtype=float))
    return out


def orthonormalize(vectors: Sequence, tol: float = ALGEBRA_TOL) -> ModeSubspace:
    """Symplectic Gram-Schmidt on the conjugation-closed span of ``vectors``.

    Real Darboux pairs are extracted greedily, always pivoting on the pair
    with the largest ``|Omega(u, v)|``. Each pair ``(e, f)`` becomes
    ``gamma = (e - i f)/sqrt(2)``, rephased so its largest component is real
    and positive. Degenerate spans raise :class:`NonSymplecticSubspaceError`.
    """
    real = _real_spanning_set(vectors)
    if not real:
        raise NonSymplecticSubspaceError("empty span")
    dim = real[0].shape[0]
    if any(r.shape[0] != dim for r in real) or dim % 2:
        raise DimensionError("inconsistent vector dimensions")
    n = dim // 2
    om = omega(n)

    mat = np.array(real).T
    u, s, _ = np.linalg.svd(mat, full_matrices=False)
    rank = int(np.sum(s > 1e-12 * s[0]))
    q = u[:, :rank]
    sv = np.linalg.svd(q.T @ om @ q, compute_uv=False)
    if rank % 2 or sv[-1] <= 0 or sv[0] / sv[-1] > MAX_GRAM_CONDITION:
        cond = np.inf if rank % 2 or sv[-1] <= 0 else sv[0] / sv[-1]
        raise NonSymplecticSubspaceError(
            f"restricted symplectic form is degenerate (rank {rank}, condition {cond:.3e})"
        )

    scale = max(np.linalg.norm(r) for r in real)
    work = [r.copy() for r in real]
    pairs = []
    while len(pairs) < rank // 2:
        w = np.array(work)
        form = w @ om @ w.T
        mags = np.abs(form)
        top = mags.max()
        if top <= tol * scale**2:
            raise NonSymplecticSubspaceError("no symplectic pair left in span")
        i, j = map(int, np.argwhere(mags >= (1.0 - 1e-9) * top)[0])
        c = form[i, j]
        e = work[i] / np.sqrt(abs(c))
        f = np.sign(c) * work[j] / np.sqrt(abs(c))
        pairs.append((e, f))
        rest = []
        for k, r in enumerate(work):
            if k in (i, j):
                continue
            r = r - (r @ om @ f) * e + (r @ om @ e) * f
            if np.linalg.norm(r) > 1e-10 * scale:
                rest.append(r)
        work = rest
        if not work and len(pairs) < rank // 2:
            raise NonSymplecticSubspaceError("span exhausted before all pairs were found")

    basis = np.array([_fix_phase((e - 1j * f) / np.sqrt(2)) for e, f in pairs])
    return ModeSubspace(basis)


def subspace_distance(S1: ModeSubspace, S2: ModeSubspace) -> float:
    """Sine of the largest principal angle between the two complex spans."""
    if S1.ambient_modes != S2.ambient_modes:
        raise DimensionError("subspaces live in different phase spaces")
    if S1.n_modes != S2.n_modes:
        return 1.0
    angles = subspace_angles(S1.complex_frame(), S2.complex_frame())
    return float(np.sin(np.max(angles)))


def random_modes(n_modes: int, count: int, rng: np.random.Generator) -> list[ModeSubspace]:
    """``count`` mutually independent random single modes.

    Each mode comes from a random real pair projected onto the symplectic
    complement of the modes drawn before it.
    """
    if count > n_modes:
        raise DimensionError(f"cannot fit {count} independent modes in {n_modes}")
    out: list[ModeSubspace] = []
    while len(out) < count:
        pair = [rng.standard_normal(2 * n_modes) for _ in range(2)]
        for S in out:
            pair = [complement_project(S, v).real for v in pair]
        try:
            out.append(orthonormalize(pair))
        except NonSymplecticSubspaceError:
            continue
    return out
