"""A scikit-learn transformer that turns curves into invariant coordinates.

``fit`` learns the symbols that occur in a training set; ``transform`` gives
each curve's coefficients on those symbols. Symbols unseen during ``fit`` are
dropped, so the feature width is fixed.
"""

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .curve import ToleranceConfig
from .exceptions import PlanarInvError
from .invariant import evaluate
from .validation import check_curves, check_positive

SPACES = ("f_hat", "f", "k")


class InvariantVectorizer(TransformerMixin, BaseEstimator):
    """Curves -> coefficient matrix of F-hat, F or K = psi(F).

    Parameters
    ----------
    space : {"f_hat", "f", "k"}
    min_angle, min_sep_frac, eps_fraction : tolerances, see ToleranceConfig.
    exact : if True, ``transform`` returns an object array of Fractions.
    on_error : "raise" or "nan"; what to do with a curve that fails evaluation.
    """

    def __init__(self, space="f_hat", min_angle=10.0, min_sep_frac=0.01, eps_fraction=0.25,
                 exact=False, on_error="raise"):
        self.space = space
        self.min_angle = min_angle
        self.min_sep_frac = min_sep_frac
        self.eps_fraction = eps_fraction
        self.exact = exact
        self.on_error = on_error

    def _config(self):
        if self.space not in SPACES:
            raise ValueError(f"space must be one of {SPACES}, got {self.space!r}")
        if self.on_error not in ("raise", "nan"):
            raise ValueError("on_error must be 'raise' or 'nan'")
        for name in ("min_angle", "min_sep_frac", "eps_fraction"):
            check_positive(name, getattr(self, name))
        return ToleranceConfig(min_angle=self.min_angle, min_sep_frac=self.min_sep_frac,
                               eps_fraction=self.eps_fraction)

    def _vectors(self, curves, cfg):
        out = []
        for c in curves:
            try:
                res = evaluate(c, cfg)
            except PlanarInvError:
                if self.on_error == "raise":
                    raise
                out.append(None)
                continue
            out.append({"f_hat": res.f_hat, "f": res.f, "k": res.k}[self.space])
        return out

    def fit(self, X, y=None):
        cfg = self._config()
        vecs = self._vectors(check_curves(X), cfg)
        vocab = sorted({s for v in vecs if v is not None for s in v})
        self.vocabulary_ = {s: j for j, s in enumerate(vocab)}
        self.feature_names_ = [str(s) for s in vocab]
        self.n_features_out_ = len(vocab)
        return self

    def transform(self, X):
        check_is_fitted(self, "vocabulary_")
        cfg = self._config()
        vecs = self._vectors(check_curves(X), cfg)
        dtype = object if self.exact else float
        out = np.zeros((len(vecs), self.n_features_out_), dtype=dtype)
        for i, v in enumerate(vecs):
            if v is None:
                out[i, :] = np.nan
                continue
            for s, c in v.items():
                j = self.vocabulary_.get(s)
                if j is not None:
                    out[i, j] = c if self.exact else float(c)
        return out

    def get_feature_names_out(self, input_features=None):
        check_is_fitted(self, "vocabulary_")
        return np.asarray(self.feature_names_, dtype=object)
