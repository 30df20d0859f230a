import math
from fractions import Fraction

import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError
from sklearn.pipeline import make_pipeline
from sklearn.preprocessing import StandardScaler

from planar_inv import InvariantVectorizer
from planar_inv.curve import PlanarCurve
from planar_inv.exceptions import MalformedCurve, NotStable
from planar_inv.generators import circle, figure_eight
from planar_inv.invariant import F_hat, base_curve
from planar_inv.validation import check_curve, check_curves


@pytest.fixture(scope="module")
def curves():
    return [base_curve(m) for m in (-2, 0, 1, 3)]


def _flat():
    t = 2 * math.pi * (np.arange(256) + 0.5) / 256
    return PlanarCurve.from_array(np.column_stack([np.sin(2 * t), 0.05 * np.sin(t)]))


def test_params_and_clone():
    est = InvariantVectorizer(space="k", min_angle=5.0)
    assert est.get_params()["space"] == "k"
    twin = clone(est)
    assert twin.get_params() == est.get_params() and twin is not est


def test_fit_transform_reconstructs_f_hat(curves):
    est = InvariantVectorizer(exact=True)
    X = est.fit_transform(curves)
    names = est.get_feature_names_out()
    assert X.shape == (4, len(names)) == (4, est.n_features_out_)
    for row, pc in zip(X, curves):
        rebuilt = {n: c for n, c in zip(names, row) if c != 0}
        want = {str(s): c for s, c in F_hat(pc).items()}
        assert rebuilt == want
        assert all(isinstance(c, (Fraction, int)) for c in row)


def test_unseen_symbols_dropped(curves):
    est = InvariantVectorizer().fit(curves[:1])
    X = est.transform(curves)
    assert X.shape == (4, est.n_features_out_) and X.dtype == float
    # the vocabulary of gamma_-2 shares no symbol with the other base curves
    assert est.n_features_out_ == 2
    assert np.all(X[0] != 0) and np.all(X[1:, :] == 0)


def test_k_space_circle_is_zero():
    est = InvariantVectorizer(space="k").fit([figure_eight().sample(), circle().sample()])
    X = est.transform([circle().sample()])
    assert np.all(X == 0)


def test_pipeline(curves):
    pipe = make_pipeline(InvariantVectorizer(), StandardScaler())
    Z = pipe.fit_transform(curves)
    assert Z.shape[0] == 4 and np.isfinite(Z).all()


def test_on_error_nan(curves):
    est = InvariantVectorizer(on_error="nan").fit(curves)
    X = est.transform([_flat(), curves[1]])
    assert np.isnan(X[0]).all() and not np.isnan(X[1]).any()
    with pytest.raises(NotStable):
        InvariantVectorizer().fit([_flat()])


def test_not_fitted():
    with pytest.raises(NotFittedError):
        InvariantVectorizer().transform([circle().sample()])


@pytest.mark.parametrize("kw", [{"space": "g"}, {"on_error": "warn"}, {"min_angle": 0}])
def test_bad_params(kw, curves):
    with pytest.raises(ValueError):
        InvariantVectorizer(**kw).fit(curves)


def test_input_coercion():
    pts = circle(n=16).sample().xy
    assert len(check_curve(pts)) == 16
    assert len(check_curve({"points": pts.tolist()})) == 16
    assert len(check_curves([pts, pts.tolist()])) == 2
    with pytest.raises(MalformedCurve):
        check_curves(pts)
    with pytest.raises(MalformedCurve):
        check_curves([])
    with pytest.raises(MalformedCurve):
        check_curve({"pts": []})
    with pytest.raises(MalformedCurve):
        check_curve(np.zeros((4, 3)))
