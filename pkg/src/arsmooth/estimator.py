"""scikit-learn compatible wrapper around the auto-regressive smoother."""

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from ._validation import MIN_LENGTH, check_half_width, check_mass
from .core import Theta, make_uniform_offcenter, make_uniform_window
from .design import DesignConfig, default_max_half_width, design_search, evaluate_J
from .io import theta_from_dict
from .smoother import ar_smooth
from .spectral import build_ar_kernel_theta


class ARSmoother(TransformerMixin, BaseEstimator):
    """Circular auto-regressive moving-mean smoother.

    Each column of ``X`` is an independent time series of length
    ``n_samples`` (a 1-D ``X`` is a single series). ``transform`` returns
    the exact minimizer of the generalized smoothing objective for every
    column.

    Parameters
    ----------
    p_half_width : int, default=1
        Half-width of the uniform data window ``p``.
    q_half_width : int, default=1
        Half-width of the uniform off-center smoothness window ``q``.
    a_mass : float, default=1/3
        Data-fidelity mass ``A``; the smoothness mass is ``1 - A``.
    weights : Theta or dict, optional
        Explicit weights. Overrides the three parameters above.
    design : {"joint", "tied", "cascade"}, optional
        If set, ``fit`` searches the uniform-window vertices for the weights
        minimizing the optimal smoothing cost, summed over columns.
    max_half_width : int, optional
        Largest vertex half-width for ``design``. Defaults to
        ``max(1, floor(log2(n_samples)))``.
    n_jobs : int, optional
        Threads used by the vertex search.

    Attributes
    ----------
    theta_ : Theta
    kernel_ : ARKernel
    design_report_ : DesignReport or None
    n_features_in_ : int
    """

    def __init__(
        self,
        p_half_width=1,
        q_half_width=1,
        a_mass=1.0 / 3.0,
        weights=None,
        design=None,
        max_half_width=None,
        n_jobs=None,
    ):
        self.p_half_width = p_half_width
        self.q_half_width = q_half_width
        self.a_mass = a_mass
        self.weights = weights
        self.design = design
        self.max_half_width = max_half_width
        self.n_jobs = n_jobs

    def _validate(self, X):
        X = check_array(X, ensure_2d=False, ensure_min_samples=MIN_LENGTH, dtype=np.float64)
        if X.ndim != 1 and X.ndim != 2:
            raise ValueError(f"expected 1-D or 2-D input, got {X.ndim}-D")
        return X

    def _fixed_theta(self, n):
        if self.weights is not None:
            if isinstance(self.weights, Theta):
                return self.weights
            return theta_from_dict(self.weights)
        a = check_mass(self.a_mass)
        p = make_uniform_window(check_half_width(self.p_half_width, n), n)
        if a == 1.0:
            return Theta(p.weights)
        q = make_uniform_offcenter(check_half_width(self.q_half_width, n, minimum=1), n)
        return Theta.from_shapes(p.weights, q.weights, a)

    def fit(self, X, y=None):
        X = self._validate(X)
        n = X.shape[0]
        self.n_features_in_ = 1 if X.ndim == 1 else X.shape[1]
        self.design_report_ = None
        if self.design is None:
            self.theta_ = self._fixed_theta(n)
        else:
            L = self.max_half_width or default_max_half_width(n)
            cfg = DesignConfig(max_half_width=L, a_mass=self.a_mass, mode=self.design)
            self.design_report_ = design_search(X, cfg, n_jobs=self.n_jobs)
            self.theta_ = self.design_report_.best_theta
        self.kernel_ = build_ar_kernel_theta(self.theta_)
        return self

    def transform(self, X):
        check_is_fitted(self, "theta_")
        X = self._validate(X)
        n_features = 1 if X.ndim == 1 else X.shape[1]
        if n_features != self.n_features_in_:
            raise ValueError(
                f"X has {n_features} series, but ARSmoother was fitted with {self.n_features_in_}"
            )
        if X.ndim == 1:
            return ar_smooth(X, self.theta_).values.copy()
        return np.column_stack([ar_smooth(X[:, j], self.theta_).values for j in range(n_features)])

    def score(self, X, y=None):
        """Negative optimal smoothing cost under the fitted weights."""
        check_is_fitted(self, "theta_")
        return -evaluate_J(self._validate(X), self.theta_)

    def __sklearn_tags__(self):
        tags = super().__sklearn_tags__()
        tags.input_tags.one_d_array = True
        tags.requires_fit = True
        return tags
