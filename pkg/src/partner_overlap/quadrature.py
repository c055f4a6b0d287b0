"""Vectorised adaptive Gauss-Kronrod (G7/K15) quadrature on panels.

All panels are evaluated in one call to the integrand, which must accept a
1-D array of abscissae. Panels whose Kronrod-Gauss difference is too large
are bisected; the loop stops when the summed error estimate is below
``max(atol, rtol * |I|)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import QuadratureError

_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
W_KRONROD = np.concatenate([_WGK[:-1], _WGK[::-1]])
# Gauss nodes are the odd-indexed Kronrod nodes.
W_GAUSS = np.zeros(15)
W_GAUSS[1:7:2] = _WG[:3]
W_GAUSS[7] = _WG[3]
W_GAUSS[9:15:2] = _WG[2::-1]


@dataclass
class QuadResult:
    value: float
    error: float
    n_panels: int
    n_evals: int
    upper: float = np.inf
    tail: float = 0.0
    extra: dict = field(default_factory=dict)


def gk15_panels(f, a: np.ndarray, b: np.ndarray):
    """Kronrod value and |Kronrod - Gauss| for each panel ``[a_i, b_i]``."""
    mid = 0.5 * (a + b)
    half = 0.5 * (b - a)
    x = mid[:, None] + half[:, None] * NODES[None, :]
    y = np.asarray(f(x.ravel()), dtype=float).reshape(x.shape)
    k = half * (y @ W_KRONROD)
    g = half * (y @ W_GAUSS)
    return k, np.abs(k - g)


def integrate_panels(
    f,
    edges,
    rtol: float = 1e-10,
    atol: float = 0.0,
    max_panels: int = 200_000,
) -> QuadResult:
    """Adaptive integral of ``f`` over consecutive panels given by ``edges``."""
    edges = np.asarray(edges, dtype=float)
    a, b = edges[:-1], edges[1:]
    vals, errs = gk15_panels(f, a, b)
    n_evals = 15 * a.size
    while True:
        total = vals.sum()
        err = errs.sum()
        goal = max(atol, rtol * abs(total))
        if err <= goal:
            return QuadResult(float(total), float(err), a.size, n_evals)
        if a.size > max_panels:
            raise QuadratureError(
                "panel budget exhausted",
                {"value": float(total), "error": float(err), "panels": int(a.size)},
            )
        # Refine the panels that carry the bulk of the error.
        bad = errs > goal / max(a.size, 1)
        if not np.any(bad):
            bad = errs >= np.max(errs)
        am, bm = a[bad], b[bad]
        mid = 0.5 * (am + bm)
        na = np.concatenate([am, mid])
        nb = np.concatenate([mid, bm])
        nv, ne = gk15_panels(f, na, nb)
        n_evals += 15 * na.size
        keep = ~bad
        a = np.concatenate([a[keep], na])
        b = np.concatenate([b[keep], nb])
        vals = np.concatenate([vals[keep], nv])
        errs = np.concatenate([errs[keep], ne])


def integrate_to_infinity(
    f,
    panel_width: float,
    decay_power: float,
    k_start: float,
    rtol: float = 1e-10,
    atol: float = 0.0,
    k_limit: float = 1e7,
    breakpoints=(),
) -> QuadResult:
    """Integrate ``f`` over ``[0, inf)`` for an integrand bounded by ``C k^-p``.

    The range ``[0, K]`` is covered with panels of ``panel_width``; ``K``
    doubles until the tail bound ``C K^{1-p}/(p-1)`` drops below tolerance,
    with ``C`` estimated from ``max |f| k^p`` over the outer half of the range.
    """
    if decay_power <= 1:
        raise ValueError("integrand must decay faster than 1/k")
    K = float(k_start)
    while True:
        edges = np.arange(0.0, K + 0.5 * panel_width, panel_width)
        edges[-1] = K
        if breakpoints:
            edges = np.unique(np.concatenate([edges, [p for p in breakpoints if 0 < p < K]]))
        res = integrate_panels(f, edges, rtol=rtol, atol=atol)
        probe = np.linspace(0.5 * K, K, 4001)
        env = float(np.max(np.abs(f(probe)) * probe**decay_power))
        tail = env * K ** (1.0 - decay_power) / (decay_power - 1.0)
        goal = max(atol, rtol * abs(res.value))
        if tail <= goal:
            res.upper = K
            res.tail = tail
            res.error += tail
            return res
        if K >= k_limit:
            raise QuadratureError(
                "tail did not converge",
                {"k_max": K, "tail": tail, "value": res.value, "goal": goal},
            )
        K *= 2.0
