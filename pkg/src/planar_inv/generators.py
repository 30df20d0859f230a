"""Smooth closed curves and their polyline samplings.

Every generator returns a :class:`SmoothCurve`, which can be sampled at any
density; this is what makes resampling checks meaningful.
"""

from dataclasses import dataclass, field
import math

import numpy as np

from .curve import DEFAULT_CONFIG, PlanarCurve, find_crossings, validate_stable, whitney_number
from .exceptions import PlanarInvError

TWO_PI = 2.0 * math.pi


@dataclass
class SmoothCurve:
    """A closed curve given by a vectorized map t -> (x, y), t in [0, 2 pi)."""

    func: object
    name: str = "curve"
    default_n: int = 256
    meta: dict = field(default_factory=dict)

    def __call__(self, t):
        x, y = self.func(np.asarray(t, dtype=float))
        return np.column_stack([x, y])

    def sample(self, n=None, phase=0.5):
        """Polyline through ``n`` points at t = 2 pi (k + phase) / n."""
        n = self.default_n if n is None else n
        t = TWO_PI * (np.arange(n) + phase) / n
        return PlanarCurve.from_array(self(t))

    def mirrored(self):
        f = self.func
        return SmoothCurve(lambda t: (lambda x, y: (x, -y))(*f(t)), self.name + "-mirror",
                           self.default_n, dict(self.meta))

    def reversed(self):
        f = self.func
        return SmoothCurve(lambda t: f((TWO_PI - t) % TWO_PI), self.name + "-rev",
                           self.default_n, dict(self.meta))


def circle(radius=1.0, center=(0.0, 0.0), n=64):
    cx, cy = center
    return SmoothCurve(lambda t: (cx + radius * np.cos(t), cy + radius * np.sin(t)),
                       "circle", n)


def figure_eight(n=256):
    """The lemniscate-like curve (sin 2t, sin t), Whitney number 0."""
    return SmoothCurve(lambda t: (np.sin(2 * t), np.sin(t)), "figure-eight", n)


def with_curl(curve, t0, width=0.05, depth=2.0, side=1):
    """Insert a small loop into ``curve`` around parameter ``t0``.

    The loop is a prolate-cycloid displacement over ``|t - t0| < pi * width``
    in the local tangent frame. ``side=+1`` puts it on the left of the
    direction of travel (counterclockwise loop, turning +2 pi, crossing sign
    -1); ``side=-1`` mirrors it. ``depth`` is the loop radius relative to the
    local forward speed and must exceed 1.
    """
    f = curve.func
    h = 1e-6
    p0 = np.array(f(np.array([t0]))).ravel()
    p1 = np.array(f(np.array([t0 + h]))).ravel()
    vel = (p1 - p0) / h
    speed = float(np.hypot(*vel))
    T = vel / speed
    N = np.array([-T[1], T[0]])
    b = depth * speed * width

    def g(t):
        x, y = f(t)
        tau = ((np.asarray(t) - t0 + math.pi) % TWO_PI - math.pi) / width
        inside = np.abs(tau) < math.pi
        along = np.where(inside, -b * np.sin(tau), 0.0)
        across = np.where(inside, side * b * (1.0 + np.cos(tau)), 0.0)
        return x + along * T[0] + across * N[0], y + along * T[1] + across * N[1]

    meta = dict(curve.meta)
    meta["curls"] = meta.get("curls", 0) + 1
    return SmoothCurve(g, curve.name + "+curl", max(curve.default_n, 512), meta)


def base_curve_smooth(m):
    """Smooth model of the base curve with Whitney number ``m``."""
    if m == 0:
        return figure_eight()
    c = circle(n=128)
    for k in range(abs(m) - 1):
        c = with_curl(c, TWO_PI * (k + 0.25) / (abs(m) - 1), side=1)
    c.name = f"gamma_{m}"
    if m < 0:
        c = c.mirrored()
        c.name = f"gamma_{m}"
    return c


def trig_curve(coeffs, name="trig", n=320):
    """Trigonometric polynomial curve.

    ``coeffs`` has shape (K, 4): row k-1 holds (ax, bx, ay, by) for
    x += ax cos kt + bx sin kt, y += ay cos kt + by sin kt.
    """
    C = np.asarray(coeffs, dtype=float)

    def f(t):
        t = np.asarray(t, dtype=float)
        x = np.zeros_like(t)
        y = np.zeros_like(t)
        for k, (ax, bx, ay, by) in enumerate(C, start=1):
            ck, sk = np.cos(k * t), np.sin(k * t)
            x = x + ax * ck + bx * sk
            y = y + ay * ck + by * sk
        return x, y

    return SmoothCurve(f, name, n, {"coeffs": C.tolist()})


def random_trig_curve(rng, max_degree=5, name="trig", n=320):
    K = int(rng.integers(2, max_degree + 1))
    scale = 1.0 / np.arange(1, K + 1) ** 0.6
    coeffs = rng.normal(size=(K, 4)) * scale[:, None]
    return trig_curve(coeffs, name, n)


def acceptable(curve, max_crossings=10, cfg=DEFAULT_CONFIG, min_crossings=0):
    """Stable, well-resolved sampling with a bounded number of crossings."""
    try:
        rep = validate_stable(curve, cfg)
        if not rep.stable:
            return False
        k = len(find_crossings(curve))
        whitney_number(curve, cfg)
    except PlanarInvError:
        return False
    return min_crossings <= k <= max_crossings


def random_corpus(count, seed=0, max_crossings=10, n=320, cfg=DEFAULT_CONFIG):
    """``count`` random trigonometric curves whose samplings at n and 2n are acceptable.

    Curves whose turn per vertex is large or whose double points are close
    are rejected, so downstream index rounding is reliable.
    """
    from .indices import double_index  # local import: indices depends on curve only

    rng = np.random.default_rng(seed)
    out = []
    simple = 0  # cap single-crossing curves so the corpus stays varied
    tries = 0
    while len(out) < count:
        tries += 1
        if tries > 200 * count:
            raise RuntimeError("could not generate enough acceptable curves")
        sc = random_trig_curve(rng, name=f"trig-{seed}-{len(out)}", n=n)
        try:
            pc = sc.sample(n)
            fine = sc.sample(2 * n)
        except PlanarInvError:
            continue
        if not acceptable(pc, max_crossings, cfg, min_crossings=1):
            continue
        if np.abs(pc.exterior_angles).max() > math.radians(25):
            continue
        if not acceptable(fine, max_crossings, cfg, min_crossings=1):
            continue
        k = len(find_crossings(pc))
        if len(find_crossings(fine)) != k:
            continue
        if k == 1 and simple >= count // 4:
            continue
        try:
            for c in find_crossings(pc):
                double_index(pc, c, cfg=cfg)
        except PlanarInvError:
            continue
        simple += k == 1
        out.append(sc)
    return out


def standard_corpus(n_random=45, seed=2024):
    """Base curves for Whitney numbers -4..4 followed by random curves."""
    base = [base_curve_smooth(m) for m in range(-4, 5)]
    return base + random_corpus(n_random, seed=seed)
