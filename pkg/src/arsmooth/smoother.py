"""Smoothing objectives and the closed-form auto-regressive smoother.

All objectives are raw sums over the circular signal (no ``1/N``
normalization), so values for signals of different lengths are not
directly comparable.
"""

from dataclasses import dataclass

import numpy as np

from ._validation import check_half_width, check_same_length
from .core import Signal, TaperedWindow, as_signal
from .exceptions import ZeroDataMassError
from .spectral import build_ar_kernel_theta, circular_convolve, deconvolve


def _pair(x, y):
    x = np.asarray(as_signal(x))
    y = np.asarray(as_signal(y))
    check_same_length(x, y)
    return x, y


def _as_window(w):
    return w if isinstance(w, TaperedWindow) else TaperedWindow(w)


def _smoothness(x, beta_half):
    # sum_{n,k} beta_k (x_{n+k} - x_n)^2, with k and -k contributing equally
    total = 0.0
    for k in range(1, beta_half.size):
        if beta_half[k]:
            total += 2.0 * beta_half[k] * np.sum((np.roll(x, -k) - x) ** 2)
    return float(total)


def _cross(x, y, alpha_half):
    # sum_{n,k} alpha_k (y_{n+k} - x_n)^2
    total = alpha_half[0] * np.sum((y - x) ** 2)
    for k in range(1, alpha_half.size):
        if alpha_half[k]:
            total += alpha_half[k] * (
                np.sum((np.roll(y, -k) - x) ** 2) + np.sum((np.roll(y, k) - x) ** 2)
            )
    return float(total)


def objective_cross(x, y, w):
    """Weighted cumulative cross error ``sum_{n,k} w_k (y[n+k] - x[n])**2``.

    Minimized over ``x`` by the moving mean ``circular_convolve(y, w)``.
    """
    x, y = _pair(x, y)
    w = _as_window(w)
    check_half_width(w.half_width, x.size)
    return _cross(x, y, w.half)


def objective_F(x, y, w):
    """Mixed data/self objective.

    ``F = sum_n [w_0 (y[n] - x[n])**2 + sum_{k != 0} w_k (x[n+k] - x[n])**2]``
    """
    x, y = _pair(x, y)
    w = _as_window(w)
    check_half_width(w.half_width, x.size)
    return float(w.center * np.sum((y - x) ** 2)) + _smoothness(x, w.half)


def objective_G(x, y, theta):
    """Generalized objective: alpha-weighted cross error plus beta-weighted
    self differences. Linear in ``theta``."""
    x, y = _pair(x, y)
    check_half_width(theta.half_width, x.size)
    return _cross(x, y, theta.alpha_half) + _smoothness(x, theta.beta_half)


def objective_H(x, y_bar, theta):
    """``sum_n A (y_bar[n] - x[n])**2 + sum_{n,k} beta_k (x[n+k] - x[n])**2``."""
    x, y_bar = _pair(x, y_bar)
    check_half_width(theta.half_width, x.size)
    return float(theta.A * np.sum((y_bar - x) ** 2)) + _smoothness(x, theta.beta_half)


@dataclass(frozen=True)
class Decomposition:
    """Local mean ``y_bar`` and the x-independent scatter ``h0`` of a signal.

    For any ``x``: ``objective_G(x, y, theta) == h0 + objective_H(x, y_bar, theta)``.
    """

    y_bar: Signal
    h0: float
    A: float

    def H(self, x, theta):
        return objective_H(x, self.y_bar, theta)


def local_mean(y, theta):
    """``y_bar[n] = sum_k alpha_k y[n+k] / A``."""
    if theta.A <= 0:
        raise ZeroDataMassError("data-fidelity mass A must be positive")
    return circular_convolve(y, theta.p)


def scatter_h0(y, theta, y_bar=None):
    """Data scatter ``sum_{n,k} alpha_k (y[n+k] - y_bar[n])**2``."""
    y = np.asarray(as_signal(y))
    if y_bar is None:
        y_bar = local_mean(y, theta)
    return _cross(np.asarray(y_bar), y, theta.alpha_half)


def decompose(y, theta):
    """Split the generalized objective into local mean and data scatter."""
    y = as_signal(y)
    check_half_width(theta.half_width, len(y))
    y_bar = local_mean(y, theta)
    h0 = scatter_h0(y, theta, y_bar)
    return Decomposition(y_bar=y_bar, h0=max(h0, 0.0), A=theta.A)


def moving_mean(y, w):
    """Weighted circular moving mean of ``y`` with window ``w``."""
    return circular_convolve(y, _as_window(w))


def ar_smooth(y, theta):
    """Exact minimizer of the generalized objective over ``x``.

    Averages ``y`` with ``p = alpha / A`` and then deconvolves with the
    auto-regressive kernel ``v`` of ``theta``; ``O(N log N)`` overall.

    Parameters
    ----------
    y : array-like or Signal, shape (N,)
    theta : Theta
        Weights with ``A > 0``; both windows must fit in ``N``.

    Returns
    -------
    Signal
        The smoothed series ``x*``. Its mean equals the mean of ``y``.
    """
    y = as_signal(y)
    if theta.A <= 0:
        raise ZeroDataMassError("data-fidelity mass A must be positive")
    check_half_width(theta.half_width, len(y))
    kernel = build_ar_kernel_theta(theta)
    y_bar = local_mean(y, theta)
    if not kernel.has_smoothing:
        return y_bar
    return deconvolve(y_bar, kernel)


def stationarity_residual(x, y_bar, w):
    """Max violation of the zero-gradient condition of ``objective_F``.

    ``max_n |(2 - w_0) x[n] - w_0 y_bar[n] - sum_{k != 0} w_k (x[n+k] + x[n-k])|``
    """
    x, y_bar = _pair(x, y_bar)
    w = _as_window(w)
    check_half_width(w.half_width, x.size)
    half = w.half
    lhs = (2.0 - half[0]) * x - half[0] * y_bar
    for k in range(1, half.size):
        # k and -k both appear in the sum over k != 0
        lhs = lhs - 2.0 * half[k] * (np.roll(x, -k) + np.roll(x, k))
    return float(np.max(np.abs(lhs)))


def smoothness_energy(x, q):
    """``sum_{n,k} q_k (x[n+k] - x[n])**2`` for an off-center window ``q``."""
    x = np.asarray(as_signal(x))
    return _smoothness(x, np.asarray(q.half))


__all__ = [
    "Decomposition",
    "ar_smooth",
    "decompose",
    "local_mean",
    "moving_mean",
    "objective_F",
    "objective_G",
    "objective_H",
    "objective_cross",
    "scatter_h0",
    "smoothness_energy",
    "stationarity_residual",
]
