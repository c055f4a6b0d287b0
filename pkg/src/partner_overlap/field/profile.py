"""Radial profiles of the purification partner of the ball mode.

With ``gamma_A = (i f, f)/sqrt(2)`` and ``F_pm = w^{+-1} * f`` the partner is
``gamma_Ap = (i g_Ap, f_Ap)/sqrt(2)`` (up to a global phase) with

    f_Ap =  (F_+ - I_+^AA f) / sqrt(det J_A - 1)
    g_Ap = -(F_- - I_-^AA f) / sqrt(det J_A - 1)

``F_-`` is a position-space convolution against the radial Green's function
of ``w^{-1}``; ``F_+ = w^{-1} * ((-lap + m^2) f)``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate, stats

from ..errors import NearPureReductionError
from .pairing import pairing_integral, radial_kernel
from .windows import RadialWindow

DEFAULT_GRID = (1e-2, 50.0, 400)


def default_grid(lo: float = DEFAULT_GRID[0], hi: float = DEFAULT_GRID[1], n: int = DEFAULT_GRID[2]) -> np.ndarray:
    return np.geomspace(lo, hi, n)


def _atanh_minus_x(x):
    x = np.asarray(x, dtype=float)
    small = x < 0.1
    x2 = x * x
    series = x * x2 * sum(x2**j / (2 * j + 3) for j in range(8))
    with np.errstate(divide="ignore"):
        direct = np.arctanh(np.where(small, 0.5, x)) - np.where(small, 0.5, x)
    return np.where(small, series, direct)


def convolve_inverse_omega(w: RadialWindow, r: float, m: float, source=None, zero_dipole: bool = False, rtol: float = 1e-12) -> float:
    """``(w^{-1} * s)(r) = (1/(pi r)) int r' s(r') kern(r, r') dr'``.

    ``source`` defaults to the window. With ``zero_dipole`` the source has
    ``int r'^2 s dr' = 0``, so for ``r`` outside the support the massless
    kernel's leading term ``2 r'/r`` is dropped analytically.
    """
    s = w if source is None else source
    lo, hi = w.r0, w.outer
    if m == 0 and zero_dipole and r > hi:
        def g(t):
            return 2 * t * s(t) * _atanh_minus_x(t / r)
    else:
        def g(t):
            return t * s(t) * radial_kernel(r, t, m)
    pts = [r] if lo < r < hi else None
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        val = integrate.quad(g, lo, hi, points=pts, epsabs=0, epsrel=rtol, limit=400)[0]
    return val / (math.pi * r)


def convolve_omega_kspace(w: RadialWindow, r: float, m: float, p: int) -> float:
    """Cross-check ``(w^p * f)(r) = 1/(2 pi^2 r) int k sin(kr) w_k^p f~(k) dk``."""
    def g(k):
        if m == 0 and p == -1:
            return float(w.ft(k))
        return k * (k * k + m * m) ** (0.5 * p) * float(w.ft(k))

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        val = integrate.quad(g, 0, np.inf, weight="sin", wvar=r, limlst=200, limit=400)[0]
    return val / (2 * math.pi**2 * r)


@dataclass
class PartnerProfile:
    r_grid: np.ndarray
    f_Ap: np.ndarray
    g_Ap: np.ndarray
    det_JA: float
    mu: float = 0.0
    I_plus: float = float("nan")
    I_minus: float = float("nan")
    failures: list = field(default_factory=list)

    def valid(self) -> np.ndarray:
        return np.isfinite(self.f_Ap) & np.isfinite(self.g_Ap)


def partner_profile(
    w: RadialWindow,
    m: float = 0.0,
    r_grid=None,
    tol: float = 1e-12,
) -> PartnerProfile:
    """Sample ``f_Ap`` and ``g_Ap`` on ``r_grid`` (units of the window radius)."""
    r_grid = default_grid() if r_grid is None else np.asarray(r_grid, dtype=float)
    if np.any(r_grid <= 0) or np.any(np.diff(r_grid) <= 0):
        raise ValueError("r_grid must be positive and strictly ascending")
    i_plus = pairing_integral(w, w, 1, m)[0]
    i_minus = pairing_integral(w, w, -1, m)[0]
    det = i_plus * i_minus
    if det - 1.0 <= 1e-9:
        raise NearPureReductionError(f"det J_A - 1 = {det - 1:.3e}: no partner")
    norm = math.sqrt(det - 1.0)

    def helm(t):
        return w.helmholtz(t, m)

    f_ap = np.full(r_grid.shape, np.nan)
    g_ap = np.full(r_grid.shape, np.nan)
    failures = []
    for i, r in enumerate(r_grid):
        try:
            fp = convolve_inverse_omega(w, r, m, helm, zero_dipole=True, rtol=tol)
            fm = convolve_inverse_omega(w, r, m, rtol=tol)
        except Exception as exc:  # recorded per point, the profile continues
            failures.append({"r": float(r), "error": repr(exc)})
            continue
        fa = float(w(r))
        f_ap[i] = (fp - i_plus * fa) / norm
        g_ap[i] = -(fm - i_minus * fa) / norm
    return PartnerProfile(r_grid, f_ap, g_ap, det, m * w.length, i_plus, i_minus, failures)


@dataclass(frozen=True)
class Slope:
    slope: float
    stderr: float
    n: int


def falloff_exponent(r, values, r_window=(10.0, 50.0), min_samples: int = 10) -> Slope:
    """Least-squares slope of ``log|v|`` against ``log r`` inside ``r_window``."""
    r = np.asarray(r, dtype=float)
    v = np.asarray(values, dtype=float)
    sel = (r >= r_window[0]) & (r <= r_window[1]) & np.isfinite(v) & (v != 0)
    if sel.sum() < min_samples:
        raise ValueError(f"need at least {min_samples} nonzero samples in {r_window}, got {int(sel.sum())}")
    fit = stats.linregress(np.log(r[sel]), np.log(np.abs(v[sel])))
    return Slope(float(fit.slope), float(fit.stderr), int(sel.sum()))


def profile_slopes(profile: PartnerProfile, r_window=(10.0, 50.0)) -> dict:
    f = falloff_exponent(profile.r_grid, profile.f_Ap, r_window)
    g = falloff_exponent(profile.r_grid, profile.g_Ap, r_window)
    return {"f_ap_slope": f.slope, "f_ap_stderr": f.stderr, "g_ap_slope": g.slope, "g_ap_stderr": g.stderr}
