"""Small numeric helpers shared across modules: quadrature rules, fits, bumps."""

from __future__ import annotations

import numpy as np

__all__ = [
    "composite_gauss_legendre",
    "graded_breakpoints",
    "loglog_slope",
    "neville_zero",
    "smoothstep_quintic",
]


def composite_gauss_legendre(breakpoints, nodes_per_panel=4):
    """Composite Gauss-Legendre rule on the panels defined by `breakpoints`.

    Returns (nodes, weights, panel_slices) with nodes strictly inside each
    panel, sorted increasing.
    """
    breakpoints = np.asarray(breakpoints, dtype=float)
    x_ref, w_ref = np.polynomial.legendre.leggauss(nodes_per_panel)
    nodes, weights, slices = [], [], []
    pos = 0
    for a, b in zip(breakpoints[:-1], breakpoints[1:]):
        half = 0.5 * (b - a)
        mid = 0.5 * (a + b)
        nodes.append(mid + half * x_ref)
        weights.append(half * w_ref)
        slices.append(slice(pos, pos + nodes_per_panel))
        pos += nodes_per_panel
    return np.concatenate(nodes), np.concatenate(weights), slices


def graded_breakpoints(upper, n_panels, exponent=2.0):
    """Panel breakpoints on [0, upper], clustered at 0 for exponent > 1."""
    i = np.arange(n_panels + 1, dtype=float) / n_panels
    return upper * i**exponent


def loglog_slope(x, y):
    """Least-squares slope and intercept of log y against log x."""
    lx = np.log(np.asarray(x, dtype=float))
    ly = np.log(np.asarray(y, dtype=float))
    slope, intercept = np.polyfit(lx, ly, 1)
    return float(slope), float(intercept)


def neville_zero(xs, ys):
    """Neville polynomial extrapolation of samples (xs, ys) to x = 0."""
    xs = list(map(float, xs))
    ys = [complex(y) for y in ys]
    n = len(xs)
    tab = list(ys)
    for level in range(1, n):
        for i in range(n - level):
            tab[i] = tab[i + 1] + (tab[i + 1] - tab[i]) * xs[i + level] / (
                xs[i] - xs[i + level]
            )
    val = tab[0]
    if abs(val.imag) < 1e-300:
        return val.real
    return val


def smoothstep_quintic(x):
    """C^2 monotone ramp: 0 for x <= 0, 1 for x >= 1, quintic in between."""
    x = np.clip(np.asarray(x, dtype=float), 0.0, 1.0)
    return x**3 * (10.0 - 15.0 * x + 6.0 * x**2)
