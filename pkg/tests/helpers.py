"""Independent oracles used by several test modules."""

import math

import numpy as np


def brute_force_crossings(xy):
    """Proper intersections of non-adjacent segments, plain O(n^2) float loop."""
    n = len(xy)
    out = []
    for i in range(n):
        p, r = xy[i], xy[(i + 1) % n] - xy[i]
        for j in range(i + 2, n):
            if i == 0 and j == n - 1:
                continue
            q, s = xy[j], xy[(j + 1) % n] - xy[j]
            den = r[0] * s[1] - r[1] * s[0]
            if den == 0:
                continue
            w = q - p
            lam = (w[0] * s[1] - w[1] * s[0]) / den
            mu = (w[0] * r[1] - w[1] * r[0]) / den
            if 0 < lam < 1 and 0 < mu < 1:
                out.append((i + lam, j + mu, p + lam * r))
    return out


def analytic_turning(dfunc, t0, t1, samples=200000):
    """Unwrapped tangent angle change of a smooth curve between t0 and t1."""
    t = np.linspace(t0, t1, samples)
    dx, dy = dfunc(t)
    ang = np.unwrap(np.arctan2(dy, dx))
    return float(ang[-1] - ang[0])


def eight_derivative(t):
    return 2 * np.cos(2 * t), np.cos(t)


def polyline_param_to_t(p, n, phase=0.5):
    """Parameter along a uniform sampling (vertex k at 2 pi (k + phase) / n) -> smooth t."""
    return 2 * math.pi * (p + phase) / n
