"""Vacuum pairing integrals of smeared field modes and the two-mode blocks.

For windows ``f_X, f_Y`` the Minkowski vacuum gives

    I_p(X, Y) = 1/(2 pi^2) int_0^inf k^2 w_k^p f~_X(k) f~_Y(k) dk,  w_k = sqrt(k^2 + m^2)

with ``p = -1`` the field-field and ``p = +1`` the momentum-momentum
correlator. The Darboux covariance of ``(phi(f_A), pi(f_A), phi(f_B), pi(f_B))``
is block diagonal in the field/momentum split, which fixes all two-mode blocks.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy import integrate, special

from ..errors import InconsistentBlocksError, PhysicalityError, QuadratureError
from ..gaussian import TwoModeBlocks, blocks_from_covariance
from ..quadrature import integrate_to_infinity
from .windows import RadialWindow

DEFAULT_TOL = 1e-10
DET_CHECK_TOL = 1e-10


def _integrand(wx: RadialWindow, wy: RadialWindow, p: int, m: float):
    def f(k):
        w = np.sqrt(k * k + m * m)
        with np.errstate(divide="ignore", invalid="ignore"):
            wp = w**p if p >= 0 else np.where(w > 0, 1.0 / np.where(w > 0, w, 1.0), 0.0)
        return k * k * wp * wx.ft(k) * wy.ft(k) / (2 * math.pi**2)

    return f


def pairing_integral(
    wx: RadialWindow,
    wy: RadialWindow,
    p: int,
    m: float = 0.0,
    tol: float = DEFAULT_TOL,
    atol: float = 0.0,
    k_scale: float = 1.0,
):
    """``I_p(X, Y)`` and its quadrature result.

    ``p = 0`` gives the Parseval overlap ``int f_X f_Y d^3x``. The
    integrand decays like ``k^(p-6)`` because both windows are C^1 with a
    jump in the second derivative. ``k_scale`` multiplies the initial
    cutoff (used for robustness checks).
    """
    if p not in (-1, 0, 1):
        raise ValueError(f"power must be -1, 0 or 1, got {p}")
    if m < 0:
        raise ValueError(f"mass must be non-negative, got {m}")
    span = max(wx.outer, wy.outer)
    width = math.pi / (2 * span)
    res = integrate_to_infinity(
        _integrand(wx, wy, p, m),
        panel_width=width,
        decay_power=6.0 - p,
        k_start=k_scale * max(64.0 / span, 20.0, 4 * m),
        rtol=tol,
        atol=atol,
    )
    return res.value, res


@dataclass
class PairingSet:
    mu: float
    I_plus_AA: float
    I_minus_AA: float
    I_plus_BB: float
    I_minus_BB: float
    I_plus_AB: float
    I_minus_AB: float
    diagnostics: dict = field(default_factory=dict)

    def covariance(self) -> np.ndarray:
        """Darboux covariance in the order ``(phi_A, pi_A, phi_B, pi_B)``."""
        return np.array([
            [self.I_minus_AA, 0, self.I_minus_AB, 0],
            [0, self.I_plus_AA, 0, self.I_plus_AB],
            [self.I_minus_AB, 0, self.I_minus_BB, 0],
            [0, self.I_plus_AB, 0, self.I_plus_BB],
        ])

    def check(self) -> None:
        if min(self.I_plus_AA, self.I_minus_AA, self.I_plus_BB, self.I_minus_BB) <= 0:
            raise PhysicalityError("diagonal pairing integrals must be positive")
        slack = 1e-12
        for p in ("plus", "minus"):
            xy = getattr(self, f"I_{p}_AB")
            xx, yy = getattr(self, f"I_{p}_AA"), getattr(self, f"I_{p}_BB")
            if xy * xy > xx * yy * (1 + slack):
                raise PhysicalityError(f"Cauchy-Schwarz violated for I_{p}")
        for x in ("AA", "BB"):
            d = getattr(self, f"I_plus_{x}") * getattr(self, f"I_minus_{x}")
            if d < 1 - 1e-9:
                raise PhysicalityError(f"det J_{x[0]} = {d} < 1")

    def to_dict(self) -> dict:
        return asdict(self)


def window_pair(rb: float, db: float, ra: float = 1.0) -> tuple[RadialWindow, RadialWindow]:
    if rb < ra:
        raise ValueError(f"shell must not overlap the ball: R_B = {rb} < R_A = {ra}")
    return RadialWindow.ball(ra), RadialWindow.shell(rb, db)


def pairings(
    wa: RadialWindow,
    wb: RadialWindow,
    m: float = 0.0,
    tol: float = DEFAULT_TOL,
    k_scale: float = 1.0,
) -> PairingSet:
    """All six pairing integrals for windows ``A`` and ``B`` at mass ``m``.

    Cross terms use the absolute tolerance ``tol * sqrt(I_XX I_YY)``, the
    Cauchy-Schwarz scale, so tiny correlations at large separation converge.
    """
    vals, diag = {}, {"k_max": 0.0, "error": {}, "tol": tol}
    for p, tag in ((1, "plus"), (-1, "minus")):
        for key, (x, y) in (("AA", (wa, wa)), ("BB", (wb, wb))):
            v, r = pairing_integral(x, y, p, m, tol, k_scale=k_scale)
            vals[f"I_{tag}_{key}"] = v
            diag["error"][f"I_{tag}_{key}"] = r.error
            diag["k_max"] = max(diag["k_max"], r.upper)
        scale = math.sqrt(vals[f"I_{tag}_AA"] * vals[f"I_{tag}_BB"])
        v, r = pairing_integral(wa, wb, p, m, tol, atol=tol * scale, k_scale=k_scale)
        vals[f"I_{tag}_AB"] = v
        diag["error"][f"I_{tag}_AB"] = r.error
        diag["k_max"] = max(diag["k_max"], r.upper)
    ps = PairingSet(mu=m * wa.length, diagnostics=diag, **vals)
    ps.check()
    return ps


def assemble_blocks(ps: PairingSet, tol: float = DET_CHECK_TOL) -> TwoModeBlocks:
    """Two-mode blocks from the pairing set, with the product identities checked."""
    try:
        blocks = blocks_from_covariance(ps.covariance())
    except (InconsistentBlocksError, PhysicalityError) as exc:
        raise QuadratureError(f"pairings give an unphysical state: {exc}", ps.to_dict()) from exc
    expect = {
        "det_JA": ps.I_plus_AA * ps.I_minus_AA,
        "det_JB": ps.I_plus_BB * ps.I_minus_BB,
        "det_JC": ps.I_plus_AB * ps.I_minus_AB,
    }
    for name, val in expect.items():
        got = getattr(blocks, name)
        if abs(got - val) > tol * max(1.0, abs(val)):
            raise InconsistentBlocksError(f"{name}: matrix {got!r} vs pairing product {val!r}")
    return blocks


def ball_shell_blocks(rb: float, db: float, mu: float, tol: float = DEFAULT_TOL, k_scale: float = 1.0):
    """Pairings and blocks for the unit ball and a shell ``[rb, rb + db]``."""
    wa, wb = window_pair(rb, db)
    ps = pairings(wa, wb, mu, tol, k_scale)
    return ps, assemble_blocks(ps)


# Position-space oracle (slow path).


def radial_kernel(r, rp, m: float):
    """``(1/(pi r)) * r' * kern`` is the radial Green's function of ``w^{-1}``.

    ``kern = K0(m|r-r'|) - K0(m(r+r'))``, or ``2 artanh(min/max)`` at ``m = 0``.
    """
    r = np.asarray(r, dtype=float)
    rp = np.asarray(rp, dtype=float)
    if m == 0:
        lo, hi = np.minimum(r, rp), np.maximum(r, rp)
        with np.errstate(divide="ignore"):
            return 2 * np.arctanh(lo / hi)
    return special.k0(m * np.abs(r - rp)) - special.k0(m * (r + rp))


def position_pairing(wx: RadialWindow, wy: RadialWindow, p: int, m: float = 0.0, rtol: float = 1e-11) -> float:
    """``I_p`` as a direct double integral over the radial supports.

    ``I_-1 = 4 int int r r' f_X f_Y kern``; ``I_+1`` replaces ``f_Y`` with
    ``(-lap + m^2) f_Y``; ``I_0 = 4 pi int r^2 f_X f_Y``.
    """
    if p == 0:
        lo, hi = max(wx.r0, wy.r0), min(wx.outer, wy.outer)
        if hi <= lo:
            return 0.0
        return 4 * math.pi * integrate.quad(lambda r: r * r * wx(r) * wy(r), lo, hi, epsabs=0, epsrel=rtol)[0]
    gy = wy if p == -1 else (lambda r: wy.helmholtz(r, m))

    def inner(r):
        pts = [r] if wy.r0 < r < wy.outer else None
        val = integrate.quad(
            lambda s: s * gy(s) * radial_kernel(r, s, m), wy.r0, wy.outer,
            points=pts, epsabs=0, epsrel=rtol, limit=200,
        )[0]
        return r * wx(r) * val

    pts = [y for y in (wy.r0, wy.outer) if wx.r0 < y < wx.outer] or None
    return 4 * integrate.quad(inner, wx.r0, wx.outer, points=pts, epsabs=0, epsrel=rtol, limit=200)[0]
