"""Purification partners of subsystems of a pure Gaussian state."""

from __future__ import annotations

import numpy as np

from .errors import NearPureReductionError, NoPartnerError, PurityError
from .gaussian import ComplexStructure, is_pure, is_uncorrelated
from .symplectic import (
    VALIDATION_TOL,
    ModeSubspace,
    complement_project,
    omega,
    orthonormalize,
    symplectic_product,
)


def single_mode_det(J: ComplexStructure, A: ModeSubspace) -> float:
    """``det J_A = |<g, J g>|^2 - |<g, J g*>|^2`` for a single-mode ``A``."""
    g = A.basis[0]
    jg = J.J @ g
    return float(abs(symplectic_product(g, jg)) ** 2 - abs(symplectic_product(g, jg.conj())) ** 2)


def _require_pure(J: ComplexStructure, tol: float) -> None:
    if not is_pure(J, tol):
        err = float(np.max(np.abs(J.J @ J.J + np.eye(J.J.shape[0]))))
        raise PurityError(f"global state is not pure (max |J^2 + I| = {err:.3e})")


def partner_basis_vector(J: ComplexStructure, A: ModeSubspace, tol: float = VALIDATION_TOL) -> np.ndarray:
    """Normalised partner vector ``(det J_A - 1)^{-1/2} Pi_A^perp(J gamma_A*)``."""
    if A.n_modes != 1:
        raise ValueError("partner_basis_vector needs a single-mode subsystem")
    _require_pure(J, tol)
    d = single_mode_det(J, A)
    if d - 1.0 <= tol:
        raise NearPureReductionError(
            f"det J_A - 1 = {d - 1.0:.3e}: mode is uncorrelated and has no partner"
        )
    g = A.basis[0]
    return complement_project(A, J.J @ g.conj()) / np.sqrt(d - 1.0)


def partner_subspace(J: ComplexStructure, A: ModeSubspace, tol: float = VALIDATION_TOL) -> ModeSubspace:
    """Partner subsystem ``Pi_A^perp(J Gamma_A)``.

    Single-mode ``A`` returns the normalised partner vector itself. For
    multimode ``A`` the image of the basis is orthonormalised; only its span
    is meaningful.
    """
    if A.n_modes == 1:
        return ModeSubspace(partner_basis_vector(J, A, tol)[None, :])
    _require_pure(J, tol)
    if is_uncorrelated(J, A, tol):
        raise NoPartnerError("subsystem is uncorrelated: partner is empty")
    images = complement_project(A, J.J @ A.basis.T)
    return orthonormalize(list(images.T))


def joint_subspace(A: ModeSubspace, Ap: ModeSubspace) -> ModeSubspace:
    """``A + A_p`` as one subspace (the two are symplectically orthogonal)."""
    return orthonormalize(list(A.basis) + list(Ap.basis))


def partner_weights(partner: ModeSubspace, modes: list[ModeSubspace]) -> np.ndarray:
    """Components ``<gamma_M, gamma_p>`` of the partner vector on each given mode."""
    g = partner.basis[0]
    om = omega(partner.ambient_modes)
    return np.array([1j * m.basis[0].conj() @ om @ g for m in modes])
