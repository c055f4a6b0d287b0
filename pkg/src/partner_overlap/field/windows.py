"""Compactly supported radial smearing windows and their 3-D Fourier transforms.

Both window families are raised cosines on an interval ``[r0, r0 + L]``::

    f(r) = K/2 * (1 + eps * cos(b (r - r0)))

The ball has ``r0 = 0, L = R, eps = +1, b = pi/R`` (which is ``K cos^2(pi r/2R)``)
and the shell has ``r0 = R_B, L = d, eps = -1, b = 2 pi/d``
(``K sin^2(pi (r - R_B)/d)``). Lengths are in units of the ball radius.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

BALL = "cos_sq_ball"
SHELL = "sin_sq_shell"

_SERIES_X = 0.05
_SMALL_KR = 1e-3
_GL_X, _GL_W = np.polynomial.legendre.leggauss(128)


def _interval_moments(q, L):
    """``int_0^L (cos qs, sin qs, s cos qs, s sin qs) ds`` with a small-``qL`` series."""
    q = np.asarray(q, dtype=float)
    x = q * L
    small = np.abs(x) < _SERIES_X
    xs = np.where(small, 1.0, q)  # safe divisor
    x2 = x * x
    c0 = np.where(small, L * (1 - x2 / 6 * (1 - x2 / 20 * (1 - x2 / 42 * (1 - x2 / 72)))), np.sin(x) / xs)
    s0 = np.where(small, L * x * (0.5 - x2 / 24 + x2 * x2 / 720 - x2**3 / 40320), (1 - np.cos(x)) / xs)
    c1 = np.where(
        small,
        L * L * (0.5 - x2 / 8 + x2 * x2 / 144 - x2**3 / 5760 + x2**4 / 403200),
        (np.cos(x) + x * np.sin(x) - 1) / xs**2,
    )
    s1 = np.where(
        small,
        L * L * x * (1 / 3 - x2 / 30 + x2 * x2 / 840 - x2**3 / 45360 + x2**4 / 3991680),
        (np.sin(x) - x * np.cos(x)) / xs**2,
    )
    return c0, s0, c1, s1


@dataclass(frozen=True)
class RadialWindow:
    """Unit-norm raised-cosine window: ``4 pi int r^2 f^2 dr = 1``."""

    kind: str
    r0: float
    length: float

    def __post_init__(self):
        if self.kind not in (BALL, SHELL):
            raise ValueError(f"unknown window kind {self.kind!r}")
        if not (self.length > 0 and math.isfinite(self.length)):
            raise ValueError(f"window length must be positive, got {self.length}")
        if self.r0 < 0 or (self.kind == BALL and self.r0 != 0):
            raise ValueError(f"invalid inner radius {self.r0}")

    @classmethod
    def ball(cls, radius: float = 1.0) -> "RadialWindow":
        return cls(BALL, 0.0, float(radius))

    @classmethod
    def shell(cls, inner: float, width: float) -> "RadialWindow":
        return cls(SHELL, float(inner), float(width))

    @property
    def outer(self) -> float:
        return self.r0 + self.length

    @property
    def eps(self) -> float:
        return 1.0 if self.kind == BALL else -1.0

    @property
    def b(self) -> float:
        return (math.pi if self.kind == BALL else 2 * math.pi) / self.length

    def _profile(self, r):
        """Unnormalised ``(1 + eps cos(b (r - r0)))/2`` on the support."""
        return 0.5 * (1.0 + self.eps * np.cos(self.b * (r - self.r0)))

    def _gl(self):
        r = self.r0 + 0.5 * self.length * (_GL_X + 1.0)
        return r, 0.5 * self.length * _GL_W

    @property
    def K(self) -> float:
        if self.kind == BALL:
            return 2.0 / self.length**1.5 * math.sqrt(math.pi / (2 * math.pi**2 - 15))
        # Closed form of 4 pi int r^2 (profile)^2 dr over the shell.
        r0, d = self.r0, self.length
        # profile^2 = 3/8 - cos(bs)/2 + cos(2bs)/8 with s = r - r0, b = 2 pi/d.
        m0 = d
        m1 = d * d / 2
        m2 = d**3 / 3
        # int_0^d s^n cos(j b s) ds for j = 1, 2 (n = 0 and 1 vanish).
        c2 = [d**3 / (2 * math.pi**2 * j * j) for j in (1, 2)]
        quad = (r0 * r0 * m0 + 2 * r0 * m1 + m2) * 3 / 8 - c2[0] / 2 + c2[1] / 8
        return 1.0 / math.sqrt(4 * math.pi * quad)

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        inside = (r >= self.r0) & (r <= self.outer)
        return np.where(inside, self.K * self._profile(r), 0.0)

    def derivative(self, r):
        r = np.asarray(r, dtype=float)
        inside = (r >= self.r0) & (r <= self.outer)
        return np.where(inside, -0.5 * self.K * self.eps * self.b * np.sin(self.b * (r - self.r0)), 0.0)

    def second_derivative(self, r):
        """One-sided inside the support; the jump at the edges is not a delta term."""
        r = np.asarray(r, dtype=float)
        inside = (r >= self.r0) & (r <= self.outer)
        return np.where(inside, -0.5 * self.K * self.eps * self.b**2 * np.cos(self.b * (r - self.r0)), 0.0)

    def helmholtz(self, r, m: float):
        """``(-lap + m^2) f`` for the radial function, ``-f'' - 2 f'/r + m^2 f``."""
        r = np.asarray(r, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            grad = np.where(r > 0, 2 * self.derivative(r) / np.where(r > 0, r, 1.0), 0.0)
        if self.kind == BALL:
            # f'(r)/r -> f''(0) at the origin.
            grad = np.where(r > 0, grad, 2 * self.second_derivative(0.0))
        return -self.second_derivative(r) - grad + m * m * self(r)

    def norm(self) -> float:
        """``4 pi int r^2 f^2 dr`` by Gauss-Legendre on the support."""
        r, w = self._gl()
        return float(4 * math.pi * np.sum(w * r * r * self(r) ** 2))

    def moments(self, n_max: int = 6) -> np.ndarray:
        """``int r^n f dr`` for ``n = 0..n_max``."""
        r, w = self._gl()
        fr = self(r)
        return np.array([np.sum(w * r**n * fr) for n in range(n_max + 1)])

    def ft(self, k):
        """``f~(k) = (4 pi/k) int r sin(kr) f(r) dr``, closed form for ``k > 0``."""
        k = np.abs(np.asarray(k, dtype=float))
        r0, L, b = self.r0, self.length, self.b
        c = k * r0
        sc, cc = np.sin(c), np.cos(c)

        def J(q):
            c0, s0, c1, s1 = _interval_moments(q, L)
            return r0 * (sc * c0 + cc * s0) + sc * c1 + cc * s1

        inner = 0.5 * self.K * (J(k) + 0.5 * self.eps * (J(k + b) + J(k - b)))
        small = k * self.outer < _SMALL_KR
        ks = np.where(small, 1.0, k)
        out = 4 * math.pi * inner / ks
        if np.any(small):
            m = self.moments(6)
            k2 = k * k
            series = 4 * math.pi * (m[2] - k2 * m[4] / 6 + k2 * k2 * m[6] / 120)
            out = np.where(small, series, out)
        return out

    def to_dict(self) -> dict:
        return {"kind": self.kind, "r0": self.r0, "length": self.length}
