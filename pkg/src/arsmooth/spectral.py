"""Circular convolution, the auto-regressive kernel and FFT deconvolution.

The smoother's stationarity condition is a circular convolution
``v * x = y_bar`` with a symmetric kernel ``v`` whose off-center taps are
non-positive and whose taps sum to one. Its DFT is real and bounded below
by one, so the system is always solved by a single spectral division.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from ._validation import check_half_width
from .core import NORMALIZATION_REJECT, Signal, TaperedWindow, Theta, as_signal, circular_layout
from .exceptions import (
    DegenerateCenterWeightError,
    InvalidWeightsError,
    LengthMismatchError,
    NoSmoothingTermError,
    ZeroDataMassError,
)

#: windows up to this half-width are applied by direct shifted sums
DIRECT_MAX_HALF_WIDTH = 32
#: kernels up to this half-width use the closed-form cosine spectrum
CLOSED_FORM_MAX_HALF_WIDTH = 64
IMAG_RESIDUE_TOL = 1e-9
ROOT_EPS = 1e-12
ROOT_MAX_ITER = 200


def _window_half(window):
    """Return the ``k >= 0`` half of a symmetric window-like object."""
    if hasattr(window, "half"):
        return np.asarray(window.half, dtype=np.float64)
    w = np.asarray(window, dtype=np.float64)
    if w.ndim != 1 or w.size % 2 != 1:
        raise InvalidWeightsError("window must be 1-D of odd length, centred at k=0")
    k = w.size // 2
    if not np.allclose(w, w[::-1], rtol=0, atol=1e-12 * max(1.0, np.abs(w).max())):
        raise InvalidWeightsError("only symmetric windows are supported")
    return 0.5 * (w[k:] + w[k::-1])


def circular_convolve(signal, window):
    """Cyclic weighted sum ``out[n] = sum_k w_k * signal[n + k]``.

    ``window`` is a :class:`TaperedWindow`, an :class:`ARKernel` or any
    symmetric odd-length array centred at ``k = 0``. Small windows are
    applied by direct summation, wider ones through the FFT.
    """
    y = np.asarray(as_signal(signal))
    half = _window_half(window)
    n = y.size
    k_max = check_half_width(half.size - 1, n)
    if k_max <= DIRECT_MAX_HALF_WIDTH:
        out = half[0] * y
        for k in range(1, k_max + 1):
            out = out + half[k] * (np.roll(y, -k) + np.roll(y, k))
    else:
        spectrum = np.fft.rfft(circular_layout(half, n))
        out = np.fft.irfft(np.fft.rfft(y) * spectrum.real, n=n)
    return Signal(out)


@dataclass(frozen=True, eq=False)
class ARKernel:
    """Symmetric deconvolution kernel ``v`` on offsets ``-K..K``.

    ``half`` holds ``(v_0, v_1, ..., v_K)``. Construction checks
    ``v_0 > 0``, ``v_k <= 0`` off center and ``sum(v) == 1``.
    """

    half: np.ndarray

    def __post_init__(self):
        half = np.array(self.half, dtype=np.float64)
        half.setflags(write=False)
        if half.ndim != 1 or half.size == 0:
            raise InvalidWeightsError("kernel half must be a non-empty 1-D array")
        if not half[0] > 0:
            raise InvalidWeightsError("kernel center v_0 must be positive")
        if np.any(half[1:] > 0):
            raise InvalidWeightsError("off-center kernel taps must be <= 0")
        total = half[0] + 2.0 * half[1:].sum()
        if abs(total - 1.0) > 1e-12 * max(1.0, half[0]):
            raise InvalidWeightsError(f"kernel taps must sum to 1, got {total!r}")
        object.__setattr__(self, "half", half)

    @property
    def half_width(self):
        return self.half.size - 1

    @property
    def v(self):
        """Full coefficient vector ordered by offset ``-K..K``."""
        return np.concatenate([self.half[:0:-1], self.half])

    @property
    def has_smoothing(self):
        return bool(np.any(self.half[1:] < 0))

    def circular(self, n):
        check_half_width(self.half_width, n)
        return circular_layout(self.half, n)

    def __eq__(self, other):
        if not isinstance(other, ARKernel):
            return NotImplemented
        return np.array_equal(self.half, other.half)

    __hash__ = None


def build_ar_kernel(w):
    """Kernel for a single window: ``v_0 = 2/w_0 - 1``, ``v_k = -2 w_k / w_0``.

    ``w`` is a :class:`TaperedWindow` or any nonnegative symmetric
    probability vector; tapering is not needed here.
    """
    if isinstance(w, TaperedWindow):
        w_half = w.half
    else:
        w_half = _window_half(w)
        total = w_half[0] + 2.0 * w_half[1:].sum()
        if np.any(w_half < 0) or abs(total - 1.0) > NORMALIZATION_REJECT:
            raise InvalidWeightsError("window must be nonnegative and sum to 1")
        w_half = w_half / total
    w0 = w_half[0]
    if w0 <= 0:
        raise DegenerateCenterWeightError(
            "w_0 = 0: any constant signal is a minimizer, the solution is not unique"
        )
    half = -2.0 * w_half / w0
    # v_0 = 1 - 2 sum_{k>=1} v_k keeps the taps summing to one exactly
    half[0] = 1.0 - 2.0 * half[1:].sum()
    return ARKernel(half)


def build_ar_kernel_theta(theta):
    """Kernel for a weight pair: ``v_0 = (A + 2B)/A``, ``v_k = -2 beta_k / A``."""
    a = theta.A
    if a <= 0:
        raise ZeroDataMassError("data-fidelity mass A must be positive")
    half = -2.0 * np.asarray(theta.beta_half) / a
    half[0] = 1.0 - 2.0 * half[1:].sum()
    return ARKernel(half)


def _as_kernel(kernel):
    if isinstance(kernel, ARKernel):
        return kernel
    if isinstance(kernel, Theta):
        return build_ar_kernel_theta(kernel)
    if isinstance(kernel, TaperedWindow):
        return build_ar_kernel(kernel)
    return ARKernel(_window_half(kernel))


def spectrum_V(kernel, n):
    """Real DFT of the kernel laid out cyclically in length ``n``.

    Uses ``V_n = v_0 + 2 sum_k v_k cos(2 pi k n / N)`` for narrow kernels and
    a real FFT otherwise. Every entry is >= 1 and ``V_0 == 1``.
    """
    kernel = _as_kernel(kernel)
    n = int(n)
    check_half_width(kernel.half_width, n)
    half = kernel.half
    k = kernel.half_width
    if k <= CLOSED_FORM_MAX_HALF_WIDTH:
        freqs = np.arange(n)
        spec = np.full(n, half[0])
        for j in range(1, k + 1):
            spec += 2.0 * half[j] * np.cos(2.0 * np.pi * ((j * freqs) % n) / n)
    else:
        full = np.fft.fft(kernel.circular(n))
        spec = full.real
    # V_0 is the tap sum, one by construction
    spec[0] = 1.0
    return spec


def spectrum_V_dft(kernel, n):
    """Reference path: plain complex FFT of the cyclic kernel layout."""
    kernel = _as_kernel(kernel)
    full = np.fft.fft(kernel.circular(int(n)))
    scale = max(1.0, float(np.abs(full).max()))
    if np.abs(full.imag).max() > IMAG_RESIDUE_TOL * scale:
        raise ArithmeticError("spectrum of a symmetric kernel must be real")
    return full.real


def _real_ifft(spec, what):
    out = np.fft.ifft(spec)
    norm = max(1.0, float(np.abs(out.real).max()))
    residue = float(np.abs(out.imag).max())
    if residue > IMAG_RESIDUE_TOL * norm:
        raise ArithmeticError(f"{what}: imaginary residue {residue:.3e} too large")
    return out.real


def deconvolve(y_bar, kernel):
    """Solve ``v * x = y_bar`` by spectral division ``x = IDFT(DFT(y_bar) / V)``."""
    y_bar = as_signal(y_bar)
    kernel = _as_kernel(kernel)
    n = len(y_bar)
    if 2 * kernel.half_width + 1 > n:
        raise LengthMismatchError(
            f"kernel of length {2 * kernel.half_width + 1} does not fit signal of length {n}"
        )
    spec = spectrum_V(kernel, n)
    x = _real_ifft(np.fft.fft(y_bar.values) / spec, "deconvolve")
    return Signal(x)


def lambda_poly(kernel, r):
    """Characteristic function ``v_0 + sum_{k>=1} v_k (r**k + r**-k)``."""
    kernel = _as_kernel(kernel)
    r = np.asarray(r, dtype=np.float64)
    half = kernel.half
    out = np.full(r.shape, half[0])
    # r**-k may overflow near 0; every such term is <= 0, so -inf is the right limit
    with np.errstate(over="ignore"):
        for k in range(1, half.size):
            out = out + half[k] * (r**k + r ** (-k))
    return out if out.ndim else float(out)


def characteristic_root(kernel):
    """Unique root in (0, 1) of the characteristic function, by bisection.

    The function tends to -inf as r -> 0+, equals 1 at r = 1 and is strictly
    increasing in between, so the bracket ``[1e-12, 1 - 1e-12]`` always works.
    """
    kernel = _as_kernel(kernel)
    if not kernel.has_smoothing:
        raise NoSmoothingTermError("kernel has no off-center taps; no root exists")
    lo, hi = ROOT_EPS, 1.0 - ROOT_EPS
    f_lo = lambda_poly(kernel, lo)
    f_hi = lambda_poly(kernel, hi)
    if not (f_lo < 0 < f_hi):
        raise ArithmeticError("characteristic function does not change sign on (0, 1)")
    for _ in range(ROOT_MAX_ITER):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        f_mid = lambda_poly(kernel, mid)
        if f_mid == 0:
            return mid
        if f_mid < 0:
            lo, f_lo = mid, f_mid
        else:
            hi, f_hi = mid, f_mid
    return lo if abs(f_lo) <= abs(f_hi) else hi


@dataclass(frozen=True, eq=False)
class SpectrumReport:
    """Spectrum ``V``, effective window ``u`` and characteristic root of a kernel.

    ``u`` is stored cyclically: ``u[k % N]`` is the weight at offset ``k``.
    ``r_star`` is ``None`` for the identity kernel.
    """

    V: np.ndarray
    u: np.ndarray
    r_star: Optional[float]
    kernel: Optional[ARKernel] = None

    @property
    def centered_u(self):
        """``u`` reordered to offsets ``-(N//2) .. N - 1 - N//2``."""
        return np.fft.fftshift(self.u)

    def tail_ratios(self, start, stop):
        """``u[k+1] / u[k]`` for ``k`` in ``[start, stop]``."""
        k = np.arange(start, stop + 1)
        return self.u[k + 1] / self.u[k]

    def to_dict(self):
        return {
            "V": self.V.tolist(),
            "u": self.u.tolist(),
            "r_star": self.r_star,
        }


#: residue expansion is attempted for kernels up to this half-width
RESIDUE_MAX_HALF_WIDTH = 16
_RESIDUE_MIN_ROOT_GAP = 1e-6
_RESIDUE_AGREEMENT = 1e-10


def _residue_window(kernel, n):
    """``IDFT(1 / V)`` summed by residues at the roots inside the unit disk.

    With ``c = 1 / (rho * Lambda'(rho))`` for each such root ``rho``,
    ``u[k] = sum_rho c (rho**k + rho**(N - k)) / (1 - rho**N)``. Unlike the
    FFT, this keeps relative accuracy far into the exponentially small
    tails. Returns ``None`` when the roots are too close to separate.
    """
    half = np.trim_zeros(kernel.half, "b")
    k = half.size - 1
    if k == 0 or k > RESIDUE_MAX_HALF_WIDTH:
        return None
    full = np.concatenate([half[:0:-1], half])
    roots = np.roots(full)
    inside = roots[np.abs(roots) < 1.0]
    if inside.size != k:
        return None
    if k > 1:
        gaps = np.abs(inside[:, None] - inside[None, :]) + np.eye(k)
        if gaps.min() < _RESIDUE_MIN_ROOT_GAP:
            return None
    offsets = np.arange(-k, k + 1)
    d_lambda = np.array([np.sum(offsets * full * rho ** (offsets - 1.0)) for rho in inside])
    coef = 1.0 / (inside * d_lambda)
    idx = np.arange(n)
    u = np.zeros(n, dtype=complex)
    for rho, c in zip(inside, coef):
        u += c * (rho**idx + rho ** (n - idx)) / (1.0 - rho**n)
    if np.abs(u.imag).max() > IMAG_RESIDUE_TOL * max(1.0, np.abs(u.real).max()):
        return None
    return u.real


def effective_window(kernel, n):
    """Equivalent moving-mean window of the deconvolution, ``u = IDFT(1 / V)``.

    The FFT result is only accurate to about ``1e-17`` in absolute terms,
    which swamps the exponentially small tails. For narrow kernels the same
    inverse transform is therefore evaluated by residues and used whenever
    it agrees with the FFT to ``1e-10``.
    """
    kernel = _as_kernel(kernel)
    spec = spectrum_V(kernel, n)
    u = _real_ifft(1.0 / spec, "effective_window")
    u_res = _residue_window(kernel, n)
    if u_res is not None and np.max(np.abs(u_res - u)) <= _RESIDUE_AGREEMENT * np.abs(u).max():
        u = u_res
    r_star = characteristic_root(kernel) if kernel.has_smoothing else None
    return SpectrumReport(V=spec, u=u, r_star=r_star, kernel=kernel)


def is_unimodal(u, slack=1e-12):
    """True if cyclic ``u`` is nonnegative and non-increasing away from index 0."""
    u = np.asarray(u)
    n = u.size
    if np.any(u < -slack):
        return False
    right = u[: n // 2 + 1]
    left = np.concatenate([[u[0]], u[:0:-1]])[: n // 2 + 1]
    return bool(np.all(np.diff(right) <= slack) and np.all(np.diff(left) <= slack))


__all__ = [
    "ARKernel",
    "SpectrumReport",
    "build_ar_kernel",
    "build_ar_kernel_theta",
    "characteristic_root",
    "circular_convolve",
    "deconvolve",
    "effective_window",
    "is_unimodal",
    "lambda_poly",
    "spectrum_V",
    "spectrum_V_dft",
]
