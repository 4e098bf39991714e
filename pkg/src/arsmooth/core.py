"""Domain types: circular signals, symmetric tapered windows and weight pairs.

All objects here are immutable. Arrays exposed through properties are
read-only views, so instances can be shared freely between threads.
"""

import numpy as np

from ._validation import check_half_width, check_series
from .exceptions import AllZeroThetaError, InvalidWeightsError, ZeroWidthError

#: raw weight sums further than this from 1 are rejected, closer ones renormalized
NORMALIZATION_REJECT = 1e-6
_SYMMETRY_TOL = 1e-12
_TAPER_TOL = 1e-12


def _frozen(arr):
    arr = np.array(arr, dtype=np.float64, copy=True)
    arr.setflags(write=False)
    return arr


class Signal:
    """A finite real series of length N >= 3 with circular indexing.

    Integer indexing wraps around: ``s[n]`` is ``s.values[n % N]``, so
    ``s[-1]`` is the last sample and ``s[N]`` the first. Integer arrays are
    wrapped elementwise. Slices act on the stored values without wrapping.
    """

    __slots__ = ("_values",)

    def __init__(self, values):
        if isinstance(values, Signal):
            self._values = values._values
            return
        self._values = _frozen(check_series(values))

    @property
    def values(self):
        return self._values

    def __len__(self):
        return self._values.size

    def __getitem__(self, n):
        if isinstance(n, slice):
            return self._values[n]
        idx = np.asarray(n)
        if idx.dtype.kind not in "iu":
            raise TypeError("Signal indices must be integers")
        out = self._values[np.mod(idx, self._values.size)]
        return float(out) if out.ndim == 0 else out

    def __iter__(self):
        return iter(self._values.tolist())

    def __array__(self, dtype=None, copy=None):
        if dtype is None:
            return self._values.copy() if copy else self._values
        return self._values.astype(dtype)

    def __eq__(self, other):
        if not isinstance(other, Signal):
            return NotImplemented
        return np.array_equal(self._values, other._values)

    __hash__ = None

    def __repr__(self):
        return f"Signal(N={len(self)}, values={np.array2string(self._values, threshold=8)})"

    def shift(self, s):
        """Cyclic shift: ``out[n] == self[n + s]``."""
        return Signal(np.roll(self._values, -int(s)))


def make_signal(values):
    """Validate ``values`` and wrap them as a :class:`Signal`."""
    return Signal(values)


def as_signal(values):
    return values if isinstance(values, Signal) else Signal(values)


class _SymmetricWeights:
    """Nonnegative symmetric probability weights on offsets -K..K.

    Only the half ``w_0 .. w_K`` is stored; the negative offsets are mirrored,
    so symmetry holds exactly.
    """

    __slots__ = ("_half",)

    def __init__(self, weights):
        w = np.asarray(weights, dtype=np.float64)
        if w.ndim != 1 or w.size % 2 != 1:
            raise InvalidWeightsError(
                f"weights must be a 1-D array of odd length centred at k=0, got shape {w.shape}"
            )
        if not np.all(np.isfinite(w)):
            raise InvalidWeightsError("weights contain NaN or Inf")
        if np.any(w < 0):
            raise InvalidWeightsError("weights must be nonnegative")
        k = w.size // 2
        scale = max(1.0, float(np.max(w)))
        if np.any(np.abs(w - w[::-1]) > _SYMMETRY_TOL * scale):
            raise InvalidWeightsError("weights must be symmetric: w_k == w_-k")
        half = 0.5 * (w[k:] + w[k::-1])
        total = half[0] + 2.0 * half[1:].sum()
        if abs(total - 1.0) > NORMALIZATION_REJECT:
            raise InvalidWeightsError(f"weights must sum to 1, got {total!r}")
        half = half / total
        self._check_shape(half)
        self._half = _frozen(half)

    @classmethod
    def from_half(cls, half):
        """Build from ``(w_0, w_1, ..., w_K)``."""
        half = np.asarray(half, dtype=np.float64)
        return cls(np.concatenate([half[:0:-1], half]))

    def _check_shape(self, half):
        raise NotImplementedError

    @property
    def half_width(self):
        return self._half.size - 1

    @property
    def half(self):
        return self._half

    @property
    def weights(self):
        """Full weight vector ordered by offset ``-K..K``."""
        return np.concatenate([self._half[:0:-1], self._half])

    @property
    def offsets(self):
        return np.arange(-self.half_width, self.half_width + 1)

    def __getitem__(self, k):
        k = abs(int(k))
        return float(self._half[k]) if k <= self.half_width else 0.0

    def __len__(self):
        return self._half.size * 2 - 1

    def __array__(self, dtype=None, copy=None):
        w = self.weights
        return w if dtype is None else w.astype(dtype)

    def __eq__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        return np.array_equal(self._half, other._half)

    __hash__ = None

    def circular(self, n):
        """Length-``n`` array holding ``w_k`` at index ``k mod n``."""
        check_half_width(self.half_width, n)
        return circular_layout(self._half, n)

    def __repr__(self):
        return f"{type(self).__name__}({np.array2string(self.weights, precision=6)})"


def circular_layout(half, n):
    """Place a symmetric half-vector ``(c_0..c_K)`` cyclically in length ``n``."""
    out = np.zeros(n)
    k = half.size - 1
    out[: k + 1] = half
    if k:
        out[n - k :] = half[:0:-1]
    return out


def _is_tapering(seq):
    seq = np.asarray(seq)
    if seq.size < 2:
        return True
    return bool(np.all(np.diff(seq) <= _TAPER_TOL * max(1.0, float(seq.max()))))


class TaperedWindow(_SymmetricWeights):
    """Symmetric probability window, non-increasing in ``|k|``.

    Sums within 1e-6 of one are silently renormalized; larger deviations,
    negative entries, asymmetry or a rising profile raise
    :class:`InvalidWeightsError`.

    >>> TaperedWindow([0.25, 0.5, 0.25]).half
    array([0.5 , 0.25])
    """

    __slots__ = ()

    def _check_shape(self, half):
        if not _is_tapering(half):
            raise InvalidWeightsError("window must taper: |k1| < |k2| implies w_k1 >= w_k2")

    @property
    def center(self):
        return float(self._half[0])


class OffCenterWindow(_SymmetricWeights):
    """Symmetric probability weights with ``q_0 == 0``, tapering over ``k != 0``."""

    __slots__ = ()

    def _check_shape(self, half):
        if half[0] != 0:
            raise InvalidWeightsError("off-center window must have zero weight at k=0")
        if half.size < 2:
            raise ZeroWidthError("off-center window needs half-width >= 1")
        if not _is_tapering(half[1:]):
            raise InvalidWeightsError("window must taper over k != 0")


def make_uniform_window(m, n):
    """Uniform window ``1/(2m+1)`` on offsets ``-m..m``.

    ``n`` is the signal length the window must fit in (``2m + 1 <= n``);
    pass ``None`` to skip that check.
    """
    m = check_half_width(m, n)
    return TaperedWindow.from_half(np.full(m + 1, 1.0 / (2 * m + 1)))


def make_uniform_offcenter(m, n):
    """Uniform ``1/(2m)`` on ``k in {-m..-1, 1..m}`` and zero at the center."""
    if m == 0:
        raise ZeroWidthError("off-center window needs half-width >= 1")
    m = check_half_width(m, n, minimum=1)
    half = np.full(m + 1, 1.0 / (2 * m))
    half[0] = 0.0
    return OffCenterWindow.from_half(half)


class Theta:
    """Weight pair of the generalized objective.

    ``alpha`` weights the data-fidelity term and ``beta`` the smoothness
    term. Neither is normalized; their masses are ``A = sum(alpha)`` and
    ``B = sum(beta)``. ``beta_0`` must be zero since the ``k = 0``
    smoothness term vanishes identically.

    Parameters
    ----------
    alpha, beta : array-like of odd length
        Weights on offsets ``-K..K`` (each with its own K), centred at
        ``k = 0``. Both must be nonnegative and symmetric; alpha must taper
        in ``|k|`` and beta must taper over ``k != 0``.
    """

    __slots__ = ("_alpha", "_beta")

    def __init__(self, alpha, beta=(0.0,)):
        self._alpha = _frozen(self._check(alpha, "alpha", center_free=False))
        self._beta = _frozen(self._check(beta, "beta", center_free=True))

    @staticmethod
    def _check(w, name, center_free):
        w = np.atleast_1d(np.asarray(w, dtype=np.float64))
        if w.ndim != 1 or w.size % 2 != 1:
            raise InvalidWeightsError(f"{name} must be a 1-D array of odd length")
        if not np.all(np.isfinite(w)) or np.any(w < 0):
            raise InvalidWeightsError(f"{name} must be finite and nonnegative")
        k = w.size // 2
        scale = max(1.0, float(np.max(w)))
        if np.any(np.abs(w - w[::-1]) > _SYMMETRY_TOL * scale):
            raise InvalidWeightsError(f"{name} must be symmetric")
        half = 0.5 * (w[k:] + w[k::-1])
        if center_free:
            if half[0] != 0:
                raise InvalidWeightsError("beta_0 must be zero")
            profile = half[1:]
        else:
            profile = half
        if not _is_tapering(profile):
            raise InvalidWeightsError(f"{name} must taper in |k|")
        return half

    @classmethod
    def from_shapes(cls, p, q, a_mass, b_mass=None):
        """``alpha = A * p`` and ``beta = B * q`` with ``B = 1 - A`` by default."""
        a_mass = float(a_mass)
        b_mass = 1.0 - a_mass if b_mass is None else float(b_mass)
        alpha = a_mass * np.asarray(p, dtype=np.float64)
        beta = b_mass * np.asarray(q, dtype=np.float64) if b_mass > 0 else (0.0,)
        return cls(alpha, beta)

    @property
    def alpha(self):
        return np.concatenate([self._alpha[:0:-1], self._alpha])

    @property
    def beta(self):
        return np.concatenate([self._beta[:0:-1], self._beta])

    @property
    def alpha_half(self):
        return self._alpha

    @property
    def beta_half(self):
        return self._beta

    @property
    def A(self):
        return float(self._alpha[0] + 2.0 * self._alpha[1:].sum())

    @property
    def B(self):
        return float(2.0 * self._beta[1:].sum())

    @property
    def half_width(self):
        return max(self._alpha.size, self._beta.size) - 1

    @property
    def p(self):
        """Data window ``alpha / A`` as a :class:`TaperedWindow`."""
        if self.A <= 0:
            raise AllZeroThetaError("alpha has zero mass")
        return TaperedWindow.from_half(self._alpha / self.A)

    @property
    def q(self):
        """Smoothness window ``beta / B`` as an :class:`OffCenterWindow`."""
        if self.B <= 0:
            raise AllZeroThetaError("beta has zero mass")
        return OffCenterWindow.from_half(self._beta / self.B)

    def scaled(self, sigma):
        return Theta(sigma * self.alpha, sigma * self.beta)

    def mix(self, other, lam):
        """Convex combination ``lam * self + (1 - lam) * other``."""
        k = max(self.half_width, other.half_width)

        def pad(h):
            return np.pad(h, (0, k + 1 - h.size))

        alpha = lam * pad(self._alpha) + (1 - lam) * pad(other._alpha)
        beta = lam * pad(self._beta) + (1 - lam) * pad(other._beta)
        return Theta(np.concatenate([alpha[:0:-1], alpha]), np.concatenate([beta[:0:-1], beta]))

    def to_dict(self):
        return {"alpha": self.alpha.tolist(), "beta": self.beta.tolist()}

    def __eq__(self, other):
        if not isinstance(other, Theta):
            return NotImplemented
        return np.array_equal(self._alpha, other._alpha) and np.array_equal(
            self._beta, other._beta
        )

    __hash__ = None

    def __repr__(self):
        return f"Theta(A={self.A:.6g}, B={self.B:.6g}, alpha={self.alpha}, beta={self.beta})"


def weights_from_theta(theta):
    """Equivalent single window: ``w_0 = A/(A+B)``, ``w_k = beta_k/(A+B)``.

    Raises :class:`InvalidWeightsError` when the result does not taper,
    which happens when some ``beta_k`` exceeds ``A``.
    """
    total = theta.A + theta.B
    if total <= 0:
        raise AllZeroThetaError("theta has zero total mass")
    k = theta.half_width
    half = np.zeros(k + 1)
    half[: theta.beta_half.size] = theta.beta_half
    half[0] = theta.A
    return TaperedWindow.from_half(half / total)


def theta_from_weights(w):
    """Inverse of :func:`weights_from_theta` with ``A + B = 1``."""
    w = w if isinstance(w, TaperedWindow) else TaperedWindow(w)
    beta = w.half.copy()
    beta[0] = 0.0
    return Theta([w.center], np.concatenate([beta[:0:-1], beta]))
