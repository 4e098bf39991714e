"""Window design over the vertices of the tapered-window polytope.

The optimal smoothing cost ``J(y, theta) = min_x G(x, y, theta)`` is
concave in ``theta``, so over a polytope of tapered windows its minimum is
attained at a vertex. Vertices are uniform windows: ``p`` uniform on
``-m_p..m_p`` and ``q`` uniform on ``{-m_q..-1, 1..m_q}``. The masses
``A`` and ``B = 1 - A`` stay fixed during the search; letting them float
collapses the optimum onto a trivial all-data or all-smoothness solution.
"""

import logging
import math
import time
from dataclasses import dataclass, field
from typing import List, NamedTuple, Optional

import numpy as np
from joblib import Parallel, delayed

from ._validation import check_half_width, check_mass, check_series, max_half_width
from .core import OffCenterWindow, TaperedWindow, Theta, make_uniform_offcenter, make_uniform_window
from .smoother import ar_smooth, local_mean, objective_G, scatter_h0
from .spectral import build_ar_kernel_theta, deconvolve

logger = logging.getLogger(__name__)

MODES = ("joint", "tied", "cascade")
DEFAULT_A = 1.0 / 3.0
#: candidates within this relative distance of the best are treated as ties
TIE_RTOL = 1e-12


class Vertex(NamedTuple):
    m_p: int
    m_q: int
    p: TaperedWindow
    q: OffCenterWindow


class Candidate(NamedTuple):
    m_p: int
    m_q: int
    J: float


@dataclass(frozen=True)
class DesignConfig:
    max_half_width: int = 1
    a_mass: float = DEFAULT_A
    mode: str = "joint"

    def __post_init__(self):
        check_half_width(self.max_half_width, minimum=1, name="max_half_width")
        check_mass(self.a_mass)
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")

    @property
    def b_mass(self):
        return 1.0 - self.a_mass


@dataclass(frozen=True)
class DesignReport:
    """Outcome of a vertex search.

    ``candidates`` keeps every evaluated vertex in enumeration order.
    ``elapsed`` is excluded from equality so reports from repeated runs
    compare equal when the search itself is reproducible.
    """

    best_theta: Theta
    best_J: float
    best_m_p: int
    best_m_q: int
    candidates: List[Candidate]
    mode: str
    a_mass: float
    objective: str = "J"
    stage2_kernel: Optional[List[float]] = None
    elapsed: float = field(default=0.0, compare=False)

    def to_dict(self):
        out = {
            "mode": self.mode,
            "objective": self.objective,
            "A": self.a_mass,
            "B": 1.0 - self.a_mass,
            "best": {
                "m_p": self.best_m_p,
                "m_q": self.best_m_q,
                "J": self.best_J,
                "theta": self.best_theta.to_dict(),
            },
            "candidates": [c._asdict() for c in self.candidates],
            "elapsed": self.elapsed,
        }
        if self.stage2_kernel is not None:
            out["stage2_kernel"] = list(self.stage2_kernel)
        return out


def default_max_half_width(n):
    """``max(1, floor(log2 N))`` capped so the window fits in ``N``.

    A poly-logarithmic bound keeps the whole search quasilinear; the exact
    choice is a heuristic.
    """
    return max(1, min(int(math.floor(math.log2(n))), max_half_width(n)))


def enumerate_vertices(L, n, mode="joint"):
    """Uniform-window vertex pairs with half-widths in ``1..L``.

    ``joint`` gives all ``L**2`` pairs ``(m_p, m_q)``, ``tied`` the ``L``
    pairs with ``m_p == m_q``. Pairs are ordered by ``m_p`` then ``m_q``.
    """
    L = check_half_width(L, n, minimum=1, name="max_half_width")
    if mode == "joint":
        pairs = [(mp, mq) for mp in range(1, L + 1) for mq in range(1, L + 1)]
    elif mode == "tied":
        pairs = [(m, m) for m in range(1, L + 1)]
    else:
        raise ValueError(f"vertex enumeration needs mode 'joint' or 'tied', got {mode!r}")
    return [
        Vertex(mp, mq, make_uniform_window(mp, n), make_uniform_offcenter(mq, n))
        for mp, mq in pairs
    ]


def _as_columns(y):
    """Coerce a single series or a (N, n_series) array into a list of 1-D arrays."""
    arr = np.asarray(y, dtype=np.float64)
    if arr.ndim == 2 and arr.shape[1] > 1:
        return [check_series(arr[:, j]) for j in range(arr.shape[1])]
    return [check_series(arr)]


def evaluate_J(y, theta):
    """Optimal smoothing cost ``min_x G(x, y, theta)``, attained at ``ar_smooth``.

    A 2-D ``y`` is treated as independent columns and their costs are summed.
    """
    return float(sum(objective_G(ar_smooth(col, theta), col, theta) for col in _as_columns(y)))


def _argmin(candidates, scale):
    # deterministic: fully collected list, ties broken by narrower total bandwidth
    best_J = min(c.J for c in candidates)
    tol = TIE_RTOL * max(abs(best_J), scale)
    tied = [c for c in candidates if c.J - best_J <= tol]
    return min(tied, key=lambda c: (c.m_p + c.m_q, c.m_p, c.J))


def _scale(columns):
    return float(sum(np.dot(c, c) for c in columns)) or 1.0


def design_search(y, cfg, n_jobs=None):
    """Evaluate ``J`` at every vertex and return the minimizing weights.

    Parameters
    ----------
    y : array-like, shape (N,) or (N, n_series)
        Series to design for. Columns of a 2-D input share one design; their
        costs are summed.
    cfg : DesignConfig
        ``mode`` must be ``"joint"`` or ``"tied"``; ``"cascade"`` is
        delegated to :func:`cascade_design`.
    n_jobs : int, optional
        Thread count for vertex evaluation. The result does not depend on it.

    Returns
    -------
    DesignReport
    """
    if cfg.mode == "cascade":
        return cascade_design(y, cfg.max_half_width)[2]
    start = time.perf_counter()
    columns = _as_columns(y)
    n = columns[0].size
    vertices = enumerate_vertices(cfg.max_half_width, n, cfg.mode)

    def score(vx):
        theta = Theta.from_shapes(vx.p.weights, vx.q.weights, cfg.a_mass)
        return Candidate(vx.m_p, vx.m_q, evaluate_J(np.column_stack(columns), theta))

    if n_jobs in (None, 1):
        candidates = [score(vx) for vx in vertices]
    else:
        candidates = Parallel(n_jobs=n_jobs, prefer="threads")(
            delayed(score)(vx) for vx in vertices
        )
    best = _argmin(candidates, _scale(columns))
    theta = Theta.from_shapes(
        make_uniform_window(best.m_p, n).weights,
        make_uniform_offcenter(best.m_q, n).weights,
        cfg.a_mass,
    )
    elapsed = time.perf_counter() - start
    logger.info("design %s: %d candidates, best (m_p=%d, m_q=%d) J=%.6g in %.3fs",
                cfg.mode, len(candidates), best.m_p, best.m_q, best.J, elapsed)
    return DesignReport(
        best_theta=theta,
        best_J=best.J,
        best_m_p=best.m_p,
        best_m_q=best.m_q,
        candidates=list(candidates),
        mode=cfg.mode,
        a_mass=cfg.a_mass,
        elapsed=elapsed,
    )


#: narrowest AR stage: w = (1/3, 1/3, 1/3), i.e. A = 1/3 and q uniform on {-1, 1}
CASCADE_A = 1.0 / 3.0
CASCADE_M_Q = 1


def cascade_design(y, L):
    """Two-stage heuristic design.

    Stage one picks the uniform ``p`` (half-width ``1..L``) with the smallest
    data scatter ``H0``. Stage two smooths the resulting local mean with the
    fixed length-3 AR filter ``w = (1/3, 1/3, 1/3)``, whose kernel is
    ``v = (-2, 5, -2)``.

    Returns
    -------
    p : TaperedWindow
    x : Signal
        Smoothed series (first column only when ``y`` is 2-D).
    report : DesignReport
        ``candidates`` hold ``(m_p, 1, H0)``; ``objective`` is ``"H0"``.
    """
    start = time.perf_counter()
    columns = _as_columns(y)
    n = columns[0].size
    L = check_half_width(L, n, minimum=1, name="max_half_width")
    candidates = []
    for m in range(1, L + 1):
        p = make_uniform_window(m, n)
        unit = Theta(p.weights)
        h0 = sum(scatter_h0(col, unit) for col in columns)
        candidates.append(Candidate(m, CASCADE_M_Q, float(h0)))
    best = _argmin(candidates, _scale(columns))
    p = make_uniform_window(best.m_p, n)
    theta = Theta.from_shapes(
        p.weights, make_uniform_offcenter(CASCADE_M_Q, n).weights, CASCADE_A
    )
    kernel = build_ar_kernel_theta(theta)
    x = deconvolve(local_mean(columns[0], theta), kernel)
    report = DesignReport(
        best_theta=theta,
        best_J=best.J,
        best_m_p=best.m_p,
        best_m_q=CASCADE_M_Q,
        candidates=candidates,
        mode="cascade",
        a_mass=CASCADE_A,
        objective="H0",
        stage2_kernel=kernel.v.tolist(),
        elapsed=time.perf_counter() - start,
    )
    return p, x, report
