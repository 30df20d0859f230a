"""Universal order-one invariant of stable planar curves.

Quick use::

    from planar_inv import PlanarCurve, evaluate
    res = evaluate(PlanarCurve(points))
    print(res.f_hat)
"""

from .curve import (
    DEFAULT_CONFIG,
    Crossing,
    GenericityReport,
    PlanarCurve,
    ToleranceConfig,
    find_crossings,
    gauss_code,
    validate_stable,
    whitney_number,
)
from .exceptions import PlanarInvError
from .indices import DoubleIndex, double_index, exterior_arcs
from .invariant import F, F_hat, G, K, InvariantResult, base_curve, evaluate
from .symbols import JSymbol, SSymbol, XVector, YVector, f1, g_m, parse, psi, serialize, x_term, y_term

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_CONFIG", "Crossing", "GenericityReport", "PlanarCurve", "ToleranceConfig",
    "find_crossings", "gauss_code", "validate_stable", "whitney_number", "PlanarInvError",
    "DoubleIndex", "double_index", "exterior_arcs", "F", "F_hat", "G", "K",
    "InvariantResult", "base_curve", "evaluate", "JSymbol", "SSymbol", "XVector",
    "YVector", "f1", "g_m", "parse", "psi", "serialize", "x_term", "y_term",
    "InvariantVectorizer",
]


def __getattr__(name):
    # scikit-learn is only imported when the estimator is asked for
    if name == "InvariantVectorizer":
        from .estimator import InvariantVectorizer

        return InvariantVectorizer
    raise AttributeError(f"module {__name__!r} has no attribute {name!r}")
