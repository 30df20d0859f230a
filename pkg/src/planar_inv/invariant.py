"""The order-one invariant F, the correction G, their sum, and K = psi(F)."""

from dataclasses import dataclass

from .curve import DEFAULT_CONFIG, find_crossings, validate_stable, whitney_number
from .exceptions import GradingViolation, NotStable
from .indices import double_index, default_epsilon
from .symbols import XVector, psi, serialize, x_term


@dataclass(frozen=True)
class InvariantResult:
    f: XVector
    g: XVector
    f_hat: XVector
    k: object  # YVector
    whitney: int
    per_crossing: tuple  # ((Crossing, (DoubleIndex, DoubleIndex)), ...)

    def to_json(self):
        return {
            "whitney": self.whitney,
            "F": serialize(self.f),
            "G": serialize(self.g),
            "F_hat": serialize(self.f_hat),
            "K": serialize(self.k),
            "F_terms": self.f.to_json(),
            "F_hat_terms": self.f_hat.to_json(),
            "K_terms": self.k.to_json(),
            "crossings": [
                {
                    "s": c.s,
                    "t": c.t,
                    "location": list(c.location),
                    "sign": c.sign,
                    "a": list(a),
                    "b": list(b),
                }
                for c, (a, b) in self.per_crossing
            ],
        }


def crossing_indices(curve, cfg=DEFAULT_CONFIG, check=True, eps_scale=1.0):
    """``[(crossing, (I(c1), I(c2)))]`` for every double point."""
    if check:
        rep = validate_stable(curve, cfg)
        if not rep.stable:
            raise NotStable(rep)
    crossings = find_crossings(curve)
    out = []
    for c in crossings:
        eps = default_epsilon(curve, c, crossings, cfg) * eps_scale
        out.append((c, double_index(curve, c, eps, cfg)))
    return out


def _f_from_indices(per_crossing, whitney):
    terms = {}
    for c, (a, b) in per_crossing:
        sym = (a.i1, b.i1, a.i2, b.i2)
        if a.i1 + b.i1 - a.i2 - b.i2 != whitney:
            raise GradingViolation(
                f"crossing at {c.location}: term X[{sym[0]},{sym[1]};{sym[2]},{sym[3]}] "
                f"has grade {a.i1 + b.i1 - a.i2 - b.i2}, Whitney number is {whitney}"
            )
        terms[sym] = terms.get(sym, 0) + 1
    return XVector(terms)


def F(curve, cfg=DEFAULT_CONFIG):
    """Sum over double points of X^{a1,b1}_{a2,b2}."""
    return evaluate(curve, cfg).f


def G(curve, cfg=DEFAULT_CONFIG):
    """Order-zero correction X^{w,0}_{1,-1}, w the Whitney number."""
    return x_term(whitney_number(curve, cfg), 0, 1, -1)


def F_hat(curve, cfg=DEFAULT_CONFIG):
    return evaluate(curve, cfg).f_hat


def K(curve, cfg=DEFAULT_CONFIG):
    return psi(F(curve, cfg))


def evaluate(curve, cfg=DEFAULT_CONFIG, eps_scale=1.0):
    """Full evaluation with per-crossing diagnostics.

    ``eps_scale`` shrinks (or grows) every excision radius relative to the
    default. Raises :class:`NotStable` for non-generic input and
    :class:`GradingViolation` if a term's grade differs from the Whitney number.
    """
    w = whitney_number(curve, cfg)
    per = crossing_indices(curve, cfg, eps_scale=eps_scale)
    f = _f_from_indices(per, w)
    g = x_term(w, 0, 1, -1)
    return InvariantResult(f, g, f + g, psi(f), w, tuple(per))


def base_curve(m, n=None):
    """Deterministic polyline with Whitney number ``m``.

    Figure-eight for ``m == 0``; otherwise a circle, counterclockwise for
    ``m > 0``, carrying ``|m| - 1`` small curls.
    """
    from .generators import base_curve_smooth

    return base_curve_smooth(m).sample(n)
