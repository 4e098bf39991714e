"""Auto-regressive moving-mean smoothing of circular time series.

The smoother minimizes a weighted data-fidelity plus self-smoothness
objective exactly, in ``O(N log N)``, by an FFT deconvolution. The
resulting filter behaves like a moving mean whose window tapers
exponentially.
"""

__version__ = "0.1.0"

from .core import (
    OffCenterWindow,
    Signal,
    TaperedWindow,
    Theta,
    make_signal,
    make_uniform_offcenter,
    make_uniform_window,
    theta_from_weights,
    weights_from_theta,
)
from .design import (
    Candidate,
    DesignConfig,
    DesignReport,
    cascade_design,
    design_search,
    enumerate_vertices,
    evaluate_J,
)
from .estimator import ARSmoother
from .exceptions import *  # noqa: F401,F403
from .smoother import (
    Decomposition,
    ar_smooth,
    decompose,
    moving_mean,
    objective_cross,
    objective_F,
    objective_G,
    objective_H,
    stationarity_residual,
)
from .spectral import (
    ARKernel,
    SpectrumReport,
    build_ar_kernel,
    build_ar_kernel_theta,
    characteristic_root,
    circular_convolve,
    deconvolve,
    effective_window,
    spectrum_V,
)
