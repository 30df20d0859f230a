"""Exterior arcs of a double point and their double indices.

Around a point ``v`` we excise a disc of radius ``eps``. The strands of the
curve that pass through the disc split the rest of the curve into exterior
arcs. Each arc has a top index (signed count of its own crossings) and a
bottom index ``(phi - omega) / pi`` where ``phi`` is the rotation of the
radius vector from ``v`` and ``omega`` the rotation of the tangent, the
latter corrected so the arc leaves and enters the disc radially.
"""

from dataclasses import dataclass
import math

import numpy as np

from .curve import (
    DEFAULT_CONFIG,
    find_crossings,
    in_open_interval,
    radial_winding,
    turning_along,
)
from .exceptions import EpsilonTooLarge, NonOddBottomIndex

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class DoubleIndex:
    i1: int
    i2: int

    def __post_init__(self):
        if self.i2 % 2 == 0:
            raise NonOddBottomIndex(f"bottom index {self.i2} is even")

    def __iter__(self):
        yield self.i1
        yield self.i2

    def __lt__(self, other):
        return tuple(self) < tuple(other)

    def __str__(self):
        return f"({self.i1},{self.i2})"


@dataclass(frozen=True)
class ExteriorArc:
    """Open parameter interval ``(start, end)`` outside the excised disc.

    ``end`` is unrolled so that ``start < end <= start + L``.
    ``which_tangent`` is 1 or 2 for the frame tangent leading into the arc
    (0 for arcs of a singular point, where no frame is defined).
    """

    start: float
    end: float
    center: tuple
    eps: float
    which_tangent: int = 0


@dataclass(frozen=True)
class ArcAngles:
    theta: float
    phi: float
    omega: float


def disc_strands(curve, center, radius):
    """Parameter intervals ``(enter, exit)`` where the curve is inside the disc.

    Strands are returned in order of their entry parameter; ``exit`` is
    unrolled to be greater than ``enter``.
    """
    n = len(curve)
    a = curve.xy - np.asarray(center, dtype=float)
    d = np.roll(curve.xy, -1, axis=0) - curve.xy
    A = (d * d).sum(1)
    B = 2.0 * (a * d).sum(1)
    C = (a * a).sum(1) - radius * radius
    disc = B * B - 4 * A * C
    events = []
    for i in np.nonzero(disc > 0)[0]:
        r = math.sqrt(disc[i])
        for lam, entering in (((-B[i] - r) / (2 * A[i]), True), ((-B[i] + r) / (2 * A[i]), False)):
            if 0.0 <= lam < 1.0:
                events.append((i + lam, entering))
    if not events:
        return []
    events.sort()
    # rotate so the list starts with an entry
    k = next((j for j, e in enumerate(events) if e[1]), None)
    if k is None:
        raise EpsilonTooLarge("disc boundary events do not alternate")
    events = events[k:] + events[:k]
    strands = []
    for j in range(0, len(events), 2):
        enter, ein = events[j]
        if j + 1 >= len(events):
            raise EpsilonTooLarge("disc boundary events do not alternate")
        exit_, eout = events[j + 1]
        if not ein or eout:
            raise EpsilonTooLarge("disc boundary events do not alternate")
        if exit_ < enter:
            exit_ += n
        strands.append((enter, exit_))
    return strands


def arcs_between(curve, strands, center, eps):
    """Exterior arcs in S^1 order: arc k runs from exit of strand k to entry of strand k+1."""
    n = len(curve)
    arcs = []
    m = len(strands)
    for k in range(m):
        start = strands[k][1] % n
        nxt = strands[(k + 1) % m][0]
        end = start + ((nxt - start) % n)
        arcs.append(ExteriorArc(start, end, tuple(center), eps))
    return arcs


def default_epsilon(curve, crossing, crossings=None, cfg=DEFAULT_CONFIG):
    """``cfg.eps_fraction`` of the clearance around ``crossing``.

    Clearance is the smaller of the distance to the nearest other crossing
    and the distance to every segment other than the two that cross. The
    disc therefore holds two straight chords, so its exterior arcs leave and
    enter along the crossing segments themselves.
    """
    if crossings is None:
        crossings = find_crossings(curve)
    n = len(curve)
    v = np.asarray(crossing.location)
    clear = math.inf
    for c in crossings:
        if c is not crossing:
            clear = min(clear, math.dist(c.location, crossing.location))
    others = np.setdiff1d(np.arange(n), [crossing.seg_a, crossing.seg_b])
    p = curve.xy[others] - v
    q = curve.xy[(others + 1) % n] - v
    seg = q - p
    ll = (seg ** 2).sum(1)
    t = np.clip(-(p * seg).sum(1) / ll, 0.0, 1.0)
    clear = min(clear, float(np.sqrt(((p + t[:, None] * seg) ** 2).sum(1)).min()))
    return cfg.eps_fraction * clear


def exterior_arcs(curve, crossing, eps=None, cfg=DEFAULT_CONFIG):
    """The two exterior arcs of ``crossing``, ordered by the frame (u1 first)."""
    if eps is None:
        eps = default_epsilon(curve, crossing, cfg=cfg)
    n = len(curve)
    strands = disc_strands(curve, crossing.location, eps)
    if len(strands) != 2:
        raise EpsilonTooLarge(
            f"disc of radius {eps:.4g} at {crossing.location} meets {len(strands)} strands"
        )

    def owner(p):
        for k, (a, b) in enumerate(strands):
            if (p - a) % n < (b - a):
                return k
        raise EpsilonTooLarge("crossing parameter not inside any strand")

    ks, kt = owner(crossing.s), owner(crossing.t)
    if ks == kt:
        raise EpsilonTooLarge("both crossing parameters on one strand")
    arcs = arcs_between(curve, strands, crossing.location, eps)
    from_s, from_t = arcs[ks], arcs[kt]
    if crossing.u1_is_first:
        first, second = from_s, from_t
    else:
        first, second = from_t, from_s
    return (
        ExteriorArc(first.start, first.end, first.center, eps, 1),
        ExteriorArc(second.start, second.end, second.center, eps, 2),
    )


def top_index(arc, crossings, n):
    """Signed count of the crossings with both parameters strictly inside ``arc``.

    ``n`` is the number of segments of the owner curve. The sign of each
    crossing is taken in the order the arc visits it.
    """
    total = 0
    for c in crossings:
        if in_open_interval(c.s, arc.start, arc.end, n) and in_open_interval(
            c.t, arc.start, arc.end, n
        ):
            s_first = (c.s - arc.start) % n < (c.t - arc.start) % n
            total += c.sign if s_first else -c.sign
    return total


def _signed_angle(u, w):
    return math.atan2(u[0] * w[1] - u[1] * w[0], u[0] * w[0] + u[1] * w[1])


def arc_angles(curve, arc, cfg=DEFAULT_CONFIG):
    """theta, phi and (radially corrected) omega of an exterior arc."""
    v = np.asarray(arc.center, dtype=float)
    P = curve.point(arc.start)
    Q = curve.point(arc.end)
    rp = P - v
    rq = Q - v
    theta = (math.atan2(rq[1], rq[0]) - math.atan2(rp[1], rp[0])) % TWO_PI
    phi = radial_winding(curve, v, arc.start, arc.end, tol=cfg.base_tol * curve.diameter)
    omega = turning_along(curve, arc.start, arc.end)
    # rotate the end tangents to the radial directions (limit of perpendicular ends)
    omega += _signed_angle(rp, curve.tangent(arc.start))
    omega += _signed_angle(curve.tangent(arc.end), -rq)
    return ArcAngles(theta, phi, omega)


def bottom_index(angles, cfg=DEFAULT_CONFIG):
    raw = (angles.phi - angles.omega) / math.pi
    k = round(raw)
    if abs(raw - k) >= cfg.index_residual or k % 2 == 0:
        raise NonOddBottomIndex(
            f"(phi - omega)/pi = {raw:.4f}; refine the curve or shrink eps"
        )
    return int(k)


def lemma_omega_value(angles):
    """(2 phi - omega - theta + pi) / 2 pi, unrounded."""
    return (2 * angles.phi - angles.omega - angles.theta + math.pi) / TWO_PI


def crosscheck_lemma_omega(arc, angles, crossings, n, cfg=DEFAULT_CONFIG):
    """Compare the combinatorial top index with the angle formula.

    Returns ``(ok, diagnostic)``.
    """
    raw = lemma_omega_value(angles)
    k = round(raw)
    combinatorial = top_index(arc, crossings, n)
    ok = abs(raw - k) < cfg.index_residual and k == combinatorial
    return ok, {"formula": raw, "rounded": int(k), "combinatorial": combinatorial}


def arc_double_index(curve, arc, crossings=None, cfg=DEFAULT_CONFIG):
    if crossings is None:
        crossings = find_crossings(curve)
    angles = arc_angles(curve, arc, cfg)
    return DoubleIndex(top_index(arc, crossings, len(curve)), bottom_index(angles, cfg))


def double_index(curve, crossing, eps=None, cfg=DEFAULT_CONFIG):
    """Double indices of the two exterior arcs of ``crossing``, ordered by the frame."""
    crossings = find_crossings(curve)
    arcs = exterior_arcs(curve, crossing, eps, cfg)
    return tuple(arc_double_index(curve, a, crossings, cfg) for a in arcs)
