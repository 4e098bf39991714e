import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from arsmooth import (
    ARKernel,
    DegenerateCenterWeightError,
    LengthMismatchError,
    NoSmoothingTermError,
    Theta,
    WindowTooWideError,
    ZeroDataMassError,
    build_ar_kernel,
    build_ar_kernel_theta,
    characteristic_root,
    circular_convolve,
    deconvolve,
    effective_window,
    spectrum_V,
    weights_from_theta,
)
from arsmooth import spectral
from arsmooth.spectral import is_unimodal, lambda_poly, spectrum_V_dft

from conftest import random_tapered, random_theta

GOLDEN_SMALL = (3 - math.sqrt(5)) / 2


def brute_convolve(y, w):
    """out[n] = sum_k w_k y[(n + k) mod N] with explicit loops."""
    y = np.asarray(y, dtype=float)
    w = np.asarray(w, dtype=float)
    n, k = y.size, w.size // 2
    return np.array([sum(w[j] * y[(i + j - k) % n] for j in range(w.size)) for i in range(n)])


def brute_dft(v, n):
    """Direct complex DFT of a centred kernel laid out cyclically."""
    v = np.asarray(v, dtype=float)
    k = v.size // 2
    return np.array(
        [sum(v[j] * np.exp(-2j * np.pi * (j - k) * m / n) for j in range(v.size)) for m in range(n)]
    )


class TestCircularConvolve:
    def test_spike(self):
        out = circular_convolve([4, 0, 0, 0], [1 / 3] * 3)
        np.testing.assert_allclose(out.values, brute_convolve([4, 0, 0, 0], [1 / 3] * 3))
        np.testing.assert_allclose(out.values, [4 / 3, 4 / 3, 0, 4 / 3], atol=1e-15)

    def test_delta_identity(self, rng):
        y = rng.normal(size=9)
        np.testing.assert_array_equal(circular_convolve(y, [1.0]).values, y)

    def test_constant_preserved(self, rng):
        w = random_tapered(rng, 15)
        np.testing.assert_allclose(circular_convolve(np.full(15, 2.5), w).values, 2.5, atol=1e-14)

    def test_too_wide(self):
        with pytest.raises(WindowTooWideError):
            circular_convolve([1, 2, 3, 4], [0.2] * 5)

    def test_matches_brute_force(self, rng):
        for n in (3, 7, 20, 41):
            w = random_tapered(rng, n)
            y = rng.normal(size=n)
            np.testing.assert_allclose(
                circular_convolve(y, w).values, brute_convolve(y, w.weights), atol=1e-13
            )

    def test_fft_path_agrees_with_direct(self, rng):
        n = 301
        k = spectral.DIRECT_MAX_HALF_WIDTH + 20
        w = random_tapered(rng, n, k=k)
        y = rng.normal(size=n)
        fast = circular_convolve(y, w).values
        ref = brute_convolve(y, w.weights)
        assert np.max(np.abs(fast - ref)) <= 1e-10 * np.max(np.abs(ref))


class TestKernel:
    def test_uniform_three(self):
        np.testing.assert_allclose(build_ar_kernel([1 / 3] * 3).v, [-2, 5, -2], atol=1e-14)

    def test_quarter_half(self):
        np.testing.assert_allclose(build_ar_kernel([0.25, 0.5, 0.25]).v, [-1, 3, -1], atol=1e-14)

    def test_degenerate_center(self):
        with pytest.raises(DegenerateCenterWeightError):
            build_ar_kernel([0.5, 0.0, 0.5])

    def test_theta_natural_choice(self):
        th = Theta([1 / 3], [1 / 3, 0, 1 / 3])
        kt = build_ar_kernel_theta(th)
        kw = build_ar_kernel(weights_from_theta(th))
        np.testing.assert_allclose(kt.v, [-2, 5, -2], atol=1e-14)
        np.testing.assert_allclose(kt.v, kw.v, rtol=0, atol=1e-14)

    def test_theta_identity(self):
        np.testing.assert_array_equal(build_ar_kernel_theta(Theta([1.0])).v, [1.0])

    def test_theta_zero_mass(self):
        with pytest.raises(ZeroDataMassError):
            build_ar_kernel_theta(Theta([0.0], [0.5, 0, 0.5]))

    @settings(max_examples=100)
    @given(st.integers(3, 50), st.integers(0, 2**32 - 1))
    def test_theta_and_window_agree(self, n, seed):
        rng = np.random.default_rng(seed)
        w = random_tapered(rng, n)
        th = Theta([w.center], np.concatenate([w.half[:0:-1], [0.0], w.half[1:]]))
        kt, kw = build_ar_kernel_theta(th), build_ar_kernel(w)
        np.testing.assert_allclose(kt.v, kw.v, rtol=0, atol=1e-14 * max(1, kw.half[0]))

    @settings(max_examples=100)
    @given(st.integers(3, 50), st.integers(0, 2**32 - 1))
    def test_kernel_mass(self, n, seed):
        k = build_ar_kernel(random_tapered(np.random.default_rng(seed), n))
        assert abs(k.v.sum() - 1.0) <= 1e-12 * max(1.0, k.half[0])
        assert k.half[0] > 0 and np.all(k.half[1:] <= 0)
        np.testing.assert_array_equal(k.v, k.v[::-1])

    def test_invalid_kernel_rejected(self):
        with pytest.raises(ValueError):
            ARKernel(np.array([2.0, -1.0]))  # sums to 0
        with pytest.raises(ValueError):
            ARKernel(np.array([0.5, 0.25]))  # positive off-center tap


class TestSpectrum:
    def test_three_point(self):
        V = spectrum_V(ARKernel(np.array([5.0, -2.0])), 3)
        np.testing.assert_allclose(V, [1, 7, 7], atol=1e-13)
        np.testing.assert_allclose(V, brute_dft([-2, 5, -2], 3).real, atol=1e-13)

    def test_identity(self):
        np.testing.assert_array_equal(spectrum_V(ARKernel(np.array([1.0])), 8), np.ones(8))

    def test_too_wide(self):
        with pytest.raises(WindowTooWideError):
            spectrum_V(ARKernel(np.array([5.0, -1.0, -1.0])), 4)

    @settings(max_examples=150)
    @given(st.integers(3, 64), st.integers(0, 2**32 - 1))
    def test_bound_and_dc(self, n, seed):
        w = random_tapered(np.random.default_rng(seed), n)
        if w.center <= 0:
            return
        V = spectrum_V(build_ar_kernel(w), n)
        assert np.all(V >= 1.0)
        assert V[0] == 1.0

    def test_closed_form_matches_dft_paths(self, rng):
        for n in (3, 10, 33, 64):
            k = build_ar_kernel(random_tapered(rng, n))
            closed = spectrum_V(k, n)
            np.testing.assert_allclose(closed, spectrum_V_dft(k, n), rtol=0, atol=1e-10)
            np.testing.assert_allclose(closed, brute_dft(k.v, n).real, rtol=0, atol=1e-10)

    def test_wide_kernel_uses_fft(self, rng):
        n = 401
        k = build_ar_kernel(random_tapered(rng, n, k=spectral.CLOSED_FORM_MAX_HALF_WIDTH + 30))
        V = spectrum_V(k, n)
        np.testing.assert_allclose(V, brute_dft(k.v, n).real, rtol=0, atol=1e-10 * V.max())


class TestDeconvolve:
    def test_three_point(self):
        x = deconvolve([3.0, 0.0, 0.0], ARKernel(np.array([5.0, -2.0])))
        np.testing.assert_allclose(x.values, [9 / 7, 6 / 7, 6 / 7], rtol=0, atol=1e-14)
        # hand stationarity check at n = 0: 5 * 9/7 - 2 * (6/7 + 6/7) = 3
        assert 5 * x[0] - 2 * (x[1] + x[-1]) == pytest.approx(3.0, abs=1e-14)

    def test_constant(self, rng):
        k = build_ar_kernel(random_tapered(rng, 11))
        np.testing.assert_allclose(deconvolve(np.full(11, -4.0), k).values, -4.0, atol=1e-13)

    def test_identity(self, rng):
        y = rng.normal(size=6)
        np.testing.assert_allclose(deconvolve(y, ARKernel(np.array([1.0]))).values, y, atol=1e-15)

    def test_length_mismatch(self):
        with pytest.raises(LengthMismatchError):
            deconvolve([1.0, 2.0, 3.0], ARKernel(np.array([5.0, -1.0, -1.0])))

    @settings(max_examples=100)
    @given(st.integers(3, 64), st.integers(0, 2**32 - 1))
    def test_round_trip(self, n, seed):
        rng = np.random.default_rng(seed)
        k = build_ar_kernel(random_tapered(rng, n))
        y = rng.normal(size=n)
        back = circular_convolve(deconvolve(y, k), k).values
        assert np.max(np.abs(back - y)) <= 1e-9 * np.max(np.abs(y))

    @settings(max_examples=50)
    @given(st.integers(3, 40), st.integers(0, 2**32 - 1), st.integers(-50, 50))
    def test_shift_equivariance(self, n, seed, s):
        rng = np.random.default_rng(seed)
        k = build_ar_kernel(random_tapered(rng, n))
        y = rng.normal(size=n)
        lhs = deconvolve(np.roll(y, -s), k).values
        rhs = np.roll(deconvolve(y, k).values, -s)
        np.testing.assert_allclose(lhs, rhs, rtol=0, atol=1e-12)

    @settings(max_examples=50)
    @given(st.integers(3, 40), st.integers(0, 2**32 - 1))
    def test_linearity(self, n, seed):
        rng = np.random.default_rng(seed)
        k = build_ar_kernel(random_tapered(rng, n))
        y1, y2 = rng.normal(size=(2, n))
        a, b = rng.normal(size=2)
        lhs = deconvolve(a * y1 + b * y2, k).values
        rhs = a * deconvolve(y1, k).values + b * deconvolve(y2, k).values
        np.testing.assert_allclose(lhs, rhs, rtol=0, atol=1e-10)


class TestCharacteristicRoot:
    def test_quadratic_half(self):
        # 2 r^2 - 5 r + 2 = 0
        assert characteristic_root(ARKernel(np.array([5.0, -2.0]))) == pytest.approx(0.5, abs=1e-12)

    def test_quadratic_golden(self):
        # r^2 - 3 r + 1 = 0
        r = characteristic_root(ARKernel(np.array([3.0, -1.0])))
        assert r == pytest.approx(GOLDEN_SMALL, abs=1e-12)

    def test_identity_has_no_root(self):
        with pytest.raises(NoSmoothingTermError):
            characteristic_root(ARKernel(np.array([1.0])))

    @settings(max_examples=100)
    @given(st.integers(5, 64), st.integers(0, 2**32 - 1))
    def test_root_residual_and_monotone(self, n, seed):
        rng = np.random.default_rng(seed)
        k = build_ar_kernel_theta(random_theta(rng, n))
        r = characteristic_root(k)
        assert 0 < r < 1
        # a one-ulp bracket around the root straddles zero
        assert lambda_poly(k, np.nextafter(r, 0)) <= 0 <= lambda_poly(k, np.nextafter(r, 1)) or (
            abs(lambda_poly(k, r)) <= 1e-12 * k.half[0]
        )
        grid = np.sort(rng.uniform(0.01, 0.99, size=20))
        vals = lambda_poly(k, grid)
        assert np.all(np.diff(vals) > 0)


class TestEffectiveWindow:
    def test_identity(self):
        rep = effective_window(ARKernel(np.array([1.0])), 7)
        np.testing.assert_allclose(rep.u, np.eye(7)[0], atol=1e-15)
        assert rep.r_star is None

    @pytest.mark.parametrize(
        "half, ratio", [((5.0, -2.0), 0.5), ((3.0, -1.0), GOLDEN_SMALL)]
    )
    def test_tail_ratio(self, half, ratio):
        n = 256
        rep = effective_window(ARKernel(np.array(half)), n)
        ratios = rep.tail_ratios(5, n // 4)
        assert np.max(np.abs(ratios - ratio)) <= 1e-3
        assert rep.r_star == pytest.approx(ratio, abs=1e-10)

    @settings(max_examples=60)
    @given(st.integers(3, 80), st.integers(0, 2**32 - 1))
    def test_inverse_of_kernel(self, n, seed):
        rng = np.random.default_rng(seed)
        k = build_ar_kernel(random_tapered(rng, n))
        rep = effective_window(k, n)
        delta = circular_convolve(rep.u, k).values
        np.testing.assert_allclose(delta, np.eye(n)[0], rtol=0, atol=1e-9)
        assert abs(rep.u.sum() - 1.0) <= 1e-9
        assert np.all(rep.V >= 1.0)
        assert is_unimodal(rep.u)

    def test_residue_and_fft_agree(self, rng):
        for n in (9, 64, 255):
            k = build_ar_kernel_theta(random_theta(rng, min(n, 21)))
            u_res = spectral._residue_window(k, n)
            u_fft = np.fft.ifft(1.0 / spectrum_V(k, n)).real
            if u_res is not None:
                np.testing.assert_allclose(u_res, u_fft, rtol=0, atol=1e-12)

    def test_serialization(self):
        rep = effective_window(ARKernel(np.array([5.0, -2.0])), 5)
        d = rep.to_dict()
        assert set(d) == {"V", "u", "r_star"}
        assert len(d["V"]) == len(d["u"]) == 5
        assert d["r_star"] == pytest.approx(0.5)
