"""Closed planar polylines: genericity, crossings, turning and winding.

A curve parameter is a float ``p`` in ``[0, L)`` where ``L`` is the number of
segments; ``floor(p)`` is the segment index and ``p - floor(p)`` the fraction
along it. Parameters outside ``[0, L)`` are read modulo ``L``.
"""

from dataclasses import dataclass, field
from decimal import Decimal
from fractions import Fraction
import math

import numpy as np

from .exceptions import (
    BasePointOnCurve,
    DegenerateIntersection,
    MalformedCurve,
    NonIntegerTurning,
)
from .predicates import segment_intersections

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class ToleranceConfig:
    """Numerical tolerances shared by every stage of the pipeline."""

    min_angle: float = 10.0  # degrees
    min_sep_frac: float = 0.01  # fraction of curve diameter
    min_sep: float | None = None  # absolute override
    turning_residual: float = 0.05
    index_residual: float = 0.1
    eps_fraction: float = 0.25
    base_tol: float = 1e-9  # relative to diameter

    def __post_init__(self):
        for name in ("min_angle", "min_sep_frac", "turning_residual",
                     "index_residual", "eps_fraction", "base_tol"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if self.min_sep is not None and not self.min_sep > 0:
            raise ValueError("min_sep must be positive")

    def separation(self, curve):
        if self.min_sep is not None:
            return self.min_sep
        return self.min_sep_frac * curve.diameter


DEFAULT_CONFIG = ToleranceConfig()


def _to_fraction(v):
    if isinstance(v, Fraction):
        return v
    if isinstance(v, str):
        try:
            return Fraction(Decimal(v.strip()))
        except Exception as exc:
            raise MalformedCurve(f"bad coordinate {v!r}") from exc
    if isinstance(v, (int, np.integer)):
        return Fraction(int(v))
    f = float(v)
    if not math.isfinite(f):
        raise MalformedCurve(f"non-finite coordinate {v!r}")
    return Fraction(f)


class PlanarCurve:
    """A closed oriented polyline; the last point connects back to the first.

    Coordinates are kept both as exact rationals (for predicates) and as a
    float array (for angle sums).
    """

    __slots__ = ("exact", "xy", "_cache")

    def __init__(self, points):
        pts = [tuple(p) for p in points]
        if any(len(p) != 2 for p in pts):
            raise MalformedCurve("points must be pairs")
        self.exact = tuple((_to_fraction(x), _to_fraction(y)) for x, y in pts)
        self.xy = np.array([[float(x), float(y)] for x, y in self.exact], dtype=float)
        self.xy.setflags(write=False)
        self._cache = {}
        self._check()

    @classmethod
    def from_array(cls, xy):
        return cls(np.asarray(xy, dtype=float).tolist())

    def _check(self):
        n = len(self.exact)
        if n < 8:
            raise MalformedCurve(f"need at least 8 points, got {n}")
        for i in range(n):
            if self.exact[i] == self.exact[(i + 1) % n]:
                raise MalformedCurve(f"zero-length segment at {i}")
        turns = self.exterior_angles
        bad = np.nonzero(np.abs(turns) >= math.pi / 2)[0]
        if bad.size:
            raise MalformedCurve(
                f"turn of {math.degrees(turns[bad[0]]):.1f} deg at vertex {bad[0]} "
                "(consecutive segments must turn by less than 90 deg)"
            )

    def __len__(self):
        return len(self.xy)

    @property
    def n_segments(self):
        return len(self.xy)

    def __eq__(self, other):
        return isinstance(other, PlanarCurve) and self.exact == other.exact

    def __hash__(self):
        return hash(self.exact)

    def __repr__(self):
        return f"PlanarCurve(<{len(self)} points>)"

    def _cached(self, key, fn):
        if key not in self._cache:
            self._cache[key] = fn()
        return self._cache[key]

    @property
    def directions(self):
        """Unit direction of each segment, shape (L, 2)."""
        def compute():
            d = np.roll(self.xy, -1, axis=0) - self.xy
            return d / np.linalg.norm(d, axis=1)[:, None]
        return self._cached("dirs", compute)

    @property
    def exterior_angles(self):
        """Signed turn at each vertex j, from segment j-1 into segment j."""
        def compute():
            d = np.roll(self.xy, -1, axis=0) - self.xy
            prev = np.roll(d, 1, axis=0)
            cross = prev[:, 0] * d[:, 1] - prev[:, 1] * d[:, 0]
            dot = (prev * d).sum(axis=1)
            return np.arctan2(cross, dot)
        return self._cached("ext", compute)

    @property
    def diameter(self):
        def compute():
            xy = self.xy
            best = 0.0
            for start in range(0, len(xy), 512):
                diff = xy[start:start + 512, None, :] - xy[None, :, :]
                best = max(best, float(np.sqrt((diff ** 2).sum(-1)).max()))
            return best
        return self._cached("diam", compute)

    def point(self, p):
        n = len(self.xy)
        p = p % n
        i = int(math.floor(p))
        f = p - i
        if i >= n:  # p rounded up to n
            i, f = 0, 0.0
        a = self.xy[i]
        b = self.xy[(i + 1) % n]
        return a + f * (b - a)

    def tangent(self, p):
        """Unit tangent at parameter ``p`` (direction of segment floor(p))."""
        n = len(self.xy)
        return self.directions[int(math.floor(p % n)) % n]

    def reversed(self):
        return PlanarCurve(list(reversed(self.exact)))

    def transformed(self, matrix, offset=(0.0, 0.0)):
        m = np.asarray(matrix, dtype=float)
        return PlanarCurve.from_array(self.xy @ m.T + np.asarray(offset, dtype=float))

    def subdivided(self, factor):
        """Same polyline with ``factor - 1`` points inserted on every segment."""
        if factor < 1:
            raise ValueError("factor must be >= 1")
        out = []
        n = len(self.exact)
        for i in range(n):
            a = self.exact[i]
            b = self.exact[(i + 1) % n]
            for k in range(factor):
                t = Fraction(k, factor)
                out.append((a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])))
        return PlanarCurve(out)

    def to_json(self):
        return {"points": [[float(x), float(y)] for x, y in self.xy]}


@dataclass(frozen=True)
class Crossing:
    """A transverse double point.

    ``s < t`` are the two curve parameters; ``sign`` is the sign of
    det(tangent at s, tangent at t); ``frame`` is (u1, u2) with det > 0.
    """

    seg_a: int
    seg_b: int
    s: float
    t: float
    location: tuple
    sign: int
    frame: tuple = field(repr=False)

    @property
    def u1_is_first(self):
        """True when u1 is the tangent at ``s``."""
        return self.sign > 0


@dataclass
class GenericityReport:
    min_crossing_separation: float
    min_transversality_angle: float
    stable: bool
    violations: list
    n_crossings: int = 0

    def to_json(self):
        return {
            "min_crossing_separation": _finite_or_none(self.min_crossing_separation),
            "min_transversality_angle": _finite_or_none(self.min_transversality_angle),
            "stable": self.stable,
            "violations": list(self.violations),
            "n_crossings": self.n_crossings,
        }


def _finite_or_none(x):
    return x if math.isfinite(x) else None


def find_crossings(curve):
    """Transverse self-intersections of ``curve`` sorted by ``(s, t)``.

    Raises :class:`DegenerateIntersection` if two non-adjacent segments touch
    at an endpoint or overlap.
    """
    def compute():
        pairs, degenerate = segment_intersections(curve.xy, curve.exact)
        if degenerate:
            i, j = degenerate[0]
            raise DegenerateIntersection(
                f"segments {i} and {j} touch or overlap; perturb or resample the curve"
            )
        dirs = curve.directions
        out = []
        for i, j, lam, mu in pairs:
            ta, tb = dirs[i], dirs[j]
            det = ta[0] * tb[1] - ta[1] * tb[0]
            sign = 1 if det > 0 else -1
            frame = (tuple(ta), tuple(tb)) if sign > 0 else (tuple(tb), tuple(ta))
            loc = curve.xy[i] + lam * (curve.xy[(i + 1) % len(curve)] - curve.xy[i])
            out.append(Crossing(i, j, i + lam, j + mu, (float(loc[0]), float(loc[1])),
                                sign, frame))
        return tuple(out)
    return curve._cached("crossings", compute)


def crossing_angle(c):
    """Acute angle between the two strands at ``c``, in degrees."""
    (ax, ay), (bx, by) = c.frame
    ang = math.degrees(math.atan2(abs(ax * by - ay * bx), ax * bx + ay * by))
    return min(ang, 180.0 - ang)


def validate_stable(curve, cfg=DEFAULT_CONFIG):
    """Check that all self-intersections are well-separated transverse double points."""
    violations = []
    try:
        crossings = find_crossings(curve)
    except DegenerateIntersection as exc:
        return GenericityReport(0.0, 0.0, False, [str(exc)])
    min_sep = cfg.separation(curve)
    min_ang = math.inf
    for c in crossings:
        ang = crossing_angle(c)
        min_ang = min(min_ang, ang)
        if ang < cfg.min_angle:
            violations.append(
                f"crossing at s={c.s:.4f}, t={c.t:.4f} has angle {ang:.2f} deg < {cfg.min_angle}"
            )
    sep = math.inf
    if len(crossings) > 1:
        loc = np.array([c.location for c in crossings])
        diff = np.sqrt(((loc[:, None, :] - loc[None, :, :]) ** 2).sum(-1))
        np.fill_diagonal(diff, np.inf)
        sep = float(diff.min())
        close = np.argwhere(np.triu(diff < min_sep, 1))
        for a, b in close:
            violations.append(
                f"crossings {a} and {b} are {diff[a, b]:.4g} apart (< min_sep {min_sep:.4g})"
            )
    return GenericityReport(sep, min_ang, not violations, violations, len(crossings))


def whitney_number(curve, cfg=DEFAULT_CONFIG):
    """Whitney winding number: total tangent turning over 2*pi."""
    total = float(curve.exterior_angles.sum()) / TWO_PI
    w = round(total)
    if abs(total - w) >= cfg.turning_residual:
        raise NonIntegerTurning(f"total turning {total:.4f} is not near an integer")
    return int(w)


def _span(curve, start, end):
    """Unrolled (start, end) with start in [0, L) and end in (start, start + L]."""
    n = len(curve)
    start = start % n
    length = (end - start) % n
    if length == 0:
        length = n
    return start, start + length


def turning_along(curve, start, end):
    """Signed tangent turning along the oriented subarc from ``start`` to ``end``.

    ``end`` is taken cyclically after ``start``; ``end == start`` means a full lap.
    """
    n = len(curve)
    a, b = _span(curve, start, end)
    ext = curve.exterior_angles
    lo = math.floor(a) + 1
    hi = math.floor(b)
    if hi < lo:
        return 0.0
    laps, rem = divmod(hi - lo + 1, n)
    total = laps * float(ext.sum())
    if rem:
        idx = (np.arange(lo, lo + rem)) % n
        total += float(ext[idx].sum())
    return total


def arc_points(curve, start, end):
    """Polyline of the subarc: start point, interior vertices, end point."""
    n = len(curve)
    a, b = _span(curve, start, end)
    lo = math.floor(a) + 1
    hi = math.ceil(b) - 1
    verts = curve.xy[np.arange(lo, hi + 1) % n] if hi >= lo else np.empty((0, 2))
    return np.vstack([curve.point(a), verts, curve.point(b)])


def radial_winding(curve, base, start, end, tol=None):
    """Signed rotation of (curve point - base) along the subarc."""
    pts = arc_points(curve, start, end) - np.asarray(base, dtype=float)
    if tol is None:
        tol = DEFAULT_CONFIG.base_tol * curve.diameter
    p, q = pts[:-1], pts[1:]
    seg = q - p
    ll = (seg ** 2).sum(1)
    t = np.clip(-(p * seg).sum(1) / np.where(ll > 0, ll, 1.0), 0.0, 1.0)
    closest = p + t[:, None] * seg
    if np.sqrt((closest ** 2).sum(1)).min() < tol:
        raise BasePointOnCurve("subarc passes through the base point")
    cross = p[:, 0] * q[:, 1] - p[:, 1] * q[:, 0]
    dot = (p * q).sum(1)
    return float(np.arctan2(cross, dot).sum())


def in_open_interval(p, start, end, n):
    """Whether parameter ``p`` lies strictly inside the cyclic interval (start, end)."""
    off = (p - start) % n
    length = (end - start) % n
    if length == 0:
        length = n
    return 0 < off < length


def gauss_code(curve):
    """Signed Gauss word, canonical up to rotation of the basepoint.

    Used to compare crossing combinatorics between two samplings.
    """
    crossings = find_crossings(curve)
    events = []
    for k, c in enumerate(crossings):
        events.append((c.s, k, 1))
        events.append((c.t, k, -1))
    events.sort()
    m = len(events)
    if m == 0:
        return ()
    best = None
    for r in range(m):
        rot = events[r:] + events[:r]
        label = {}
        word = []
        for _, k, first in rot:
            if k not in label:
                # sign seen in this visit order
                label[k] = (len(label), crossings[k].sign * first)
            word.append(label[k])
        word = tuple(word)
        if best is None or word < best:
            best = word
    return best
