"""Brute-force reference implementations used to verify the fast paths.

Nothing here is fast and nothing here calls into the FFT code: the local
mean, objectives and the linear system are all built with explicit loops
so they can serve as an independent check.
"""

from dataclasses import dataclass

import numpy as np

from .core import Signal, as_signal
from .exceptions import LengthMismatchError, SingularSystemError, TooLargeForOracleError

MAX_ORACLE_N = 512


@dataclass(frozen=True)
class CirculantSystem:
    """Dense ``matrix @ x = rhs`` form of a circular convolution system."""

    matrix: np.ndarray
    rhs: np.ndarray

    def is_circulant(self):
        row0 = self.matrix[0]
        return all(
            np.array_equal(self.matrix[i], np.roll(row0, i)) for i in range(len(row0))
        )

    def eigenvalues(self):
        """Eigenvalues of a symmetric circulant: the DFT of its first row."""
        return np.fft.fft(self.matrix[0]).real


def _guard(n):
    if n > MAX_ORACLE_N:
        raise TooLargeForOracleError(f"dense oracle limited to N <= {MAX_ORACLE_N}, got {n}")


def _kernel_taps(kernel):
    """(offset, value) pairs from an ARKernel or an odd-length coefficient array."""
    v = np.asarray(getattr(kernel, "v", kernel), dtype=np.float64)
    k = v.size // 2
    return [(j - k, float(v[j])) for j in range(v.size)]


def circulant_system(y_bar, kernel):
    """Row ``n`` holds ``v_k`` in column ``(n + k) mod N``."""
    y_bar = np.asarray(as_signal(y_bar))
    n = y_bar.size
    _guard(n)
    taps = _kernel_taps(kernel)
    if len(taps) > n:
        raise LengthMismatchError("kernel longer than the signal")
    matrix = np.zeros((n, n))
    for row in range(n):
        for k, val in taps:
            matrix[row, (row + k) % n] += val
    return CirculantSystem(matrix=matrix, rhs=y_bar.copy())


def _solve(matrix, rhs):
    # LAPACK gesv: LU with partial pivoting
    try:
        x = np.linalg.solve(matrix, rhs)
    except np.linalg.LinAlgError as exc:
        raise SingularSystemError(str(exc)) from exc
    if not np.all(np.isfinite(x)):
        raise SingularSystemError("solution is not finite")
    return x


def solve_dense(y_bar, kernel):
    """Solve ``v * x = y_bar`` by Gaussian elimination on the dense circulant matrix."""
    system = circulant_system(y_bar, kernel)
    return Signal(_solve(system.matrix, system.rhs))


def naive_local_mean(y, alpha):
    """``y_bar[n] = sum_k alpha_k y[(n + k) mod N] / sum(alpha)`` by explicit loops."""
    y = np.asarray(as_signal(y))
    alpha = np.asarray(alpha, dtype=np.float64)
    n, k = y.size, alpha.size // 2
    mass = float(alpha.sum())
    out = np.zeros(n)
    for i in range(n):
        acc = 0.0
        for j, a in enumerate(alpha):
            acc += a * y[(i + j - k) % n]
        out[i] = acc / mass
    return out


def smooth_dense(y, theta):
    """Minimize the generalized objective by solving its normal equations densely.

    Setting the gradient to zero gives
    ``A x[n] + 2 sum_k beta_k (x[n] - x[n+k]) = A y_bar[n]`` (sum over all
    ``k``); this assembles that matrix directly from ``beta`` without going
    through the AR kernel.
    """
    y = np.asarray(as_signal(y))
    n = y.size
    _guard(n)
    alpha, beta = theta.alpha, theta.beta
    a_mass = float(alpha.sum())
    y_bar = naive_local_mean(y, alpha)
    kb = beta.size // 2
    matrix = a_mass * np.eye(n)
    for row in range(n):
        for j, b in enumerate(beta):
            if b == 0:
                continue
            matrix[row, row] += 2.0 * b
            matrix[row, (row + j - kb) % n] -= 2.0 * b
    return Signal(_solve(matrix, a_mass * y_bar))


def naive_objectives(x, y, theta):
    """``(G, H0, H)`` by direct double loops over samples and offsets."""
    x = np.asarray(as_signal(x))
    y = np.asarray(as_signal(y))
    if x.size != y.size:
        raise LengthMismatchError(f"length mismatch: {x.size} vs {y.size}")
    n = x.size
    alpha, beta = theta.alpha, theta.beta
    ka, kb = alpha.size // 2, beta.size // 2
    a_mass = float(alpha.sum())
    y_bar = naive_local_mean(y, alpha)
    g = h0 = h = 0.0
    for i in range(n):
        for j, a in enumerate(alpha):
            yk = y[(i + j - ka) % n]
            g += a * (yk - x[i]) ** 2
            h0 += a * (yk - y_bar[i]) ** 2
        h += a_mass * (y_bar[i] - x[i]) ** 2
        for j, b in enumerate(beta):
            d = b * (x[(i + j - kb) % n] - x[i]) ** 2
            g += d
            h += d
    return g, h0, h


def finite_diff_gradient(f, x, h=1e-6):
    """Central-difference gradient of scalar ``f`` at ``x``.

    The step for coordinate ``i`` is ``h * max(1, |x[i]|)``.
    """
    x = np.array(np.asarray(x), dtype=np.float64)
    grad = np.empty_like(x)
    for i in range(x.size):
        step = h * max(1.0, abs(x[i]))
        orig = x[i]
        x[i] = orig + step
        f_plus = f(x)
        x[i] = orig - step
        f_minus = f(x)
        x[i] = orig
        grad[i] = (f_plus - f_minus) / (2.0 * step)
    return grad


def max_relative_error(a, b):
    """``max|a - b| / max|b|``; the absolute error when ``b`` is all zeros."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    err = float(np.max(np.abs(a - b)))
    scale = float(np.max(np.abs(b)))
    return err / scale if scale > 0 else err
