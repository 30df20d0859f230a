"""Input coercion helpers, in the spirit of sklearn's check_array."""

import numpy as np

from .curve import PlanarCurve
from .exceptions import MalformedCurve


def check_curve(obj):
    """Coerce ``obj`` to a :class:`PlanarCurve`.

    Accepts a PlanarCurve, an (n, 2) array-like, or a dict with ``points``.
    """
    if isinstance(obj, PlanarCurve):
        return obj
    if isinstance(obj, dict):
        if "points" not in obj:
            raise MalformedCurve("dict input needs a 'points' entry")
        obj = obj["points"]
    if isinstance(obj, np.ndarray):
        if obj.ndim != 2 or obj.shape[1] != 2:
            raise MalformedCurve(f"expected shape (n, 2), got {obj.shape}")
        return PlanarCurve.from_array(obj)
    try:
        pts = list(obj)
    except TypeError as exc:
        raise MalformedCurve(f"cannot read a curve from {type(obj).__name__}") from exc
    return PlanarCurve(pts)


def check_curves(X):
    """List of curves from an iterable of curve-likes.

    A single (n, 2) array is rejected rather than guessed at.
    """
    if isinstance(X, (PlanarCurve, dict)):
        raise MalformedCurve("expected a collection of curves, got a single curve")
    if isinstance(X, np.ndarray) and X.ndim == 2:
        raise MalformedCurve("expected a collection of curves, got one (n, 2) array")
    out = [check_curve(c) for c in X]
    if not out:
        raise MalformedCurve("no curves given")
    return out


def check_positive(name, value):
    if not value > 0:
        raise ValueError(f"{name} must be positive, got {value!r}")
    return value
