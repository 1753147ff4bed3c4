"""scikit-learn style wrappers.

Rows of ``X`` are intensity vectors ``(a1, ..., aN)``.  None of the
estimators learns anything from data; ``fit`` only validates input and
records its width, which lets them sit inside ``Pipeline`` objects and
parameter grids.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .classify import DEFAULT_TOL, LimitKind, classify
from .paths import LimitOrder, SqueezePath
from .resonance import ResonanceSetId, residual
from .transfer import RegularizedSystem, stack_matrix


def _intensity_array(X, n_features=None):
    X = check_array(X, dtype=float, ensure_all_finite=True)
    if n_features is not None and X.shape[1] != n_features:
        raise ValueError(f"X has {X.shape[1]} features, expected {n_features}")
    if np.any(X == 0):
        raise ValueError("intensity must be nonzero")
    return X


class PointInteractionClassifier(ClassifierMixin, BaseEstimator):
    """Predict the limit interaction kind of each intensity vector.

    Parameters
    ----------
    mu, tau : float
        Path exponents (``inf`` allowed).
    tol : float
        Membership tolerance on the cleared residuals.
    limit_order : str
        ``"joint"``, ``"mu-first"`` or ``"tau-first"``.
    """

    def __init__(self, mu=4.0, tau=1.0, tol=DEFAULT_TOL, limit_order="joint"):
        self.mu = mu
        self.tau = tau
        self.tol = tol
        self.limit_order = limit_order

    def _path(self):
        return SqueezePath(self.mu, self.tau, LimitOrder(self.limit_order))

    def fit(self, X, y=None):
        X = _intensity_array(X)
        self.path_ = self._path()
        self.n_features_in_ = X.shape[1]
        self.classes_ = np.array([k.value for k in LimitKind])
        return self

    def predict_interactions(self, X):
        check_is_fitted(self, "path_")
        X = _intensity_array(X, self.n_features_in_)
        return [classify(row, self.path_, self.tol) for row in X]

    def predict(self, X):
        return np.array([li.kind.value for li in self.predict_interactions(X)])


class LimitMatrixTransformer(TransformerMixin, BaseEstimator):
    """Map intensity vectors to transfer-matrix entries ``(m11, m12, m21, m22)``.

    With ``eps=None`` the closed-form limit matrix is returned (``nan`` rows
    for separated limits); otherwise the exact stack at ``eps`` along the path.
    """

    def __init__(self, mu=4.0, tau=1.0, eps=None, k=1.0, tol=DEFAULT_TOL):
        self.mu = mu
        self.tau = tau
        self.eps = eps
        self.k = k
        self.tol = tol

    def fit(self, X, y=None):
        X = _intensity_array(X)
        self.path_ = SqueezePath(self.mu, self.tau)
        self.n_features_in_ = X.shape[1]
        return self

    def transform(self, X):
        check_is_fitted(self, "path_")
        X = _intensity_array(X, self.n_features_in_)
        out = np.full((X.shape[0], 4), np.nan)
        for i, row in enumerate(X):
            if self.eps is None:
                m = classify(row, self.path_, self.tol).matrix
            else:
                l, r = self.path_.lengths(float(self.eps))
                m = stack_matrix(RegularizedSystem(tuple(row), float(self.eps), l, r, float(self.k)))
            if m is not None:
                out[i] = m.entries
        return out

    def get_feature_names_out(self, input_features=None):
        return np.array(["m11", "m12", "m21", "m22"], dtype=object)


class ResonanceResidualTransformer(TransformerMixin, BaseEstimator):
    """Cleared residuals of each row with respect to a list of resonance sets.

    ``sets=None`` selects every set whose arity matches the data.
    """

    def __init__(self, sets=None):
        self.sets = sets

    def fit(self, X, y=None):
        X = _intensity_array(X)
        self.n_features_in_ = X.shape[1]
        if self.sets is None:
            ids = [s for s in ResonanceSetId if s.arity == X.shape[1]]
        else:
            ids = [ResonanceSetId.parse(s) for s in self.sets]
        if any(s.arity != X.shape[1] for s in ids):
            raise ValueError("set arity does not match the number of features")
        self.sets_ = ids
        return self

    def transform(self, X):
        check_is_fitted(self, "sets_")
        X = _intensity_array(X, self.n_features_in_)
        return np.array([[residual(s, row) for s in self.sets_] for row in X], dtype=float)

    def get_feature_names_out(self, input_features=None):
        check_is_fitted(self, "sets_")
        return np.array([s.value for s in self.sets_], dtype=object)
