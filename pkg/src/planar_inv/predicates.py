"""Orientation predicates with a floating-point filter and exact fallback.

Signs are decided in double precision whenever the magnitude clears a
conservative error bound; otherwise the determinant is recomputed on the
exact rational coordinates.
"""

from fractions import Fraction

import numpy as np

# Looser than Shewchuk's ccwerrboundA because float coordinates may already be
# rounded from decimal input.
_ERRBOUND = 1e-12
_BLOCK = 256


def orient_exact(a, b, c):
    """Twice the signed area of triangle abc, as an exact rational."""
    return (a[0] - c[0]) * (b[1] - c[1]) - (a[1] - c[1]) * (b[0] - c[0])


def orient_sign(a, b, c, exact=None):
    """Sign of orient(a, b, c); ``exact`` holds rational copies of a, b, c."""
    left = (a[0] - c[0]) * (b[1] - c[1])
    right = (a[1] - c[1]) * (b[0] - c[0])
    det = left - right
    if abs(det) > _ERRBOUND * (abs(left) + abs(right)) or exact is None:
        return int(np.sign(det))
    ea, eb, ec = exact
    det = orient_exact(ea, eb, ec)
    return (det > 0) - (det < 0)


def _orient_block(ax, ay, bx, by, cx, cy):
    left = (ax - cx) * (by - cy)
    right = (ay - cy) * (bx - cx)
    det = left - right
    unsure = np.abs(det) <= _ERRBOUND * (np.abs(left) + np.abs(right))
    return det, unsure


def _exact_pair(P, i, j, n):
    """Classify segments i and j exactly: returns (kind, o1, o2, o3, o4)."""
    a, b = P[i], P[(i + 1) % n]
    c, d = P[j], P[(j + 1) % n]
    o1 = orient_exact(a, b, c)
    o2 = orient_exact(a, b, d)
    o3 = orient_exact(c, d, a)
    o4 = orient_exact(c, d, b)
    if o1 * o2 > 0 or o3 * o4 > 0:
        return "none", o1, o2, o3, o4
    if o1 == 0 and o2 == 0:
        # collinear: overlap test along the dominant axis
        ax = 0 if abs(b[0] - a[0]) >= abs(b[1] - a[1]) else 1
        lo1, hi1 = sorted((a[ax], b[ax]))
        lo2, hi2 = sorted((c[ax], d[ax]))
        if hi1 < lo2 or hi2 < lo1:
            return "none", o1, o2, o3, o4
        return "degenerate", o1, o2, o3, o4
    if 0 in (o1, o2, o3, o4):
        return "degenerate", o1, o2, o3, o4
    return "proper", o1, o2, o3, o4


def segment_intersections(xy, exact):
    """All proper intersections between non-adjacent segments of a closed polyline.

    Returns ``(pairs, degenerate)`` where ``pairs`` is a list of
    ``(i, j, lam, mu)`` with ``i < j`` and the intersection at
    ``xy[i] + lam * (xy[i+1] - xy[i]) == xy[j] + mu * (xy[j+1] - xy[j])``,
    and ``degenerate`` lists segment pairs that touch or overlap.
    """
    n = len(xy)
    A = xy
    B = np.roll(xy, -1, axis=0)
    pairs = []
    degenerate = []
    lo = np.minimum(A, B)
    hi = np.maximum(A, B)
    idx = np.arange(n)
    for start in range(0, n, _BLOCK):
        rows = idx[start:start + _BLOCK]
        # bounding-box overlap prefilter
        ov = (
            (lo[rows, None, 0] <= hi[None, :, 0])
            & (lo[None, :, 0] <= hi[rows, None, 0])
            & (lo[rows, None, 1] <= hi[None, :, 1])
            & (lo[None, :, 1] <= hi[rows, None, 1])
        )
        jj = idx[None, :]
        ii = rows[:, None]
        gap = (jj - ii) % n
        ov &= (jj > ii) & (gap != 1) & (gap != n - 1)
        ri, cj = np.nonzero(ov)
        if ri.size == 0:
            continue
        i = rows[ri]
        j = cj
        ax, ay = A[i, 0], A[i, 1]
        bx, by = B[i, 0], B[i, 1]
        cx, cy = A[j, 0], A[j, 1]
        dx, dy = B[j, 0], B[j, 1]
        o1, u1 = _orient_block(ax, ay, bx, by, cx, cy)
        o2, u2 = _orient_block(ax, ay, bx, by, dx, dy)
        o3, u3 = _orient_block(cx, cy, dx, dy, ax, ay)
        o4, u4 = _orient_block(cx, cy, dx, dy, bx, by)
        unsure = u1 | u2 | u3 | u4
        hit = (o1 * o2 < 0) & (o3 * o4 < 0) & ~unsure
        for k in np.nonzero(hit)[0]:
            lam = o3[k] / (o3[k] - o4[k])
            mu = o1[k] / (o1[k] - o2[k])
            pairs.append((int(i[k]), int(j[k]), float(lam), float(mu)))
        for k in np.nonzero(unsure)[0]:
            kind, e1, e2, e3, e4 = _exact_pair(exact, int(i[k]), int(j[k]), n)
            if kind == "proper":
                lam = float(Fraction(e3) / (e3 - e4))
                mu = float(Fraction(e1) / (e1 - e2))
                pairs.append((int(i[k]), int(j[k]), lam, mu))
            elif kind == "degenerate":
                degenerate.append((int(i[k]), int(j[k])))
    pairs.sort(key=lambda p: (p[0] + p[2], p[1] + p[3]))
    return pairs, degenerate
