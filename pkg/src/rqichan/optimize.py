"""Parameter sweeps, capacity optimization over the wedge weight and input
bias, adaptive Fock truncation, and the phase-payload decay fit."""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import product
from typing import Callable, Sequence

import numpy as np

from .numerics import ConvergenceError

__all__ = [
    "SweepRow",
    "SweepTable",
    "FitResult",
    "NotConvergedError",
    "adaptive_truncation",
    "cutoff_guess",
    "parameter_sweep",
    "optimize_capacity_2d",
    "fit_noon_decay",
]


class NotConvergedError(RuntimeError):
    """Adaptive truncation exhausted its cutoff budget; carries the best value."""

    def __init__(self, message: str, value: float, cutoff: int):
        super().__init__(message)
        self.value = value
        self.cutoff = cutoff


def adaptive_truncation(
    evaluator: Callable[[int], float],
    k0: int,
    eps: float = 1e-6,
    k_max: int | None = None,
    floor: float = 1e-12,
) -> tuple[float, int]:
    """Smallest cutoff k >= k0 at which the evaluator agrees with k+1 to a
    relative ``eps``; returns (value at k+1, k+1).

    The comparison is between consecutive cutoffs, so the starting guess
    should already be in the convergent regime for slowly decaying tails.
    """
    if k_max is None:
        k_max = k0 + 64
    prev = evaluator(k0)
    k = k0
    while k < k_max:
        cur = evaluator(k + 1)
        if abs(cur - prev) / max(abs(cur), floor) < eps:
            return cur, k + 1
        prev = cur
        k += 1
    raise NotConvergedError(f"no stable cutoff found in [{k0}, {k_max}]", prev, k_max)


def cutoff_guess(r: float, tail: float = 1e-8, minimum: int = 12) -> int:
    """Per-mode cutoff at which thermal weights tanh^{2k}(r) drop below ``tail``."""
    if r <= 0.0:
        return minimum
    t = math.tanh(r)
    k = int(math.ceil(math.log(1.0 / tail) / (2.0 * abs(math.log(t))))) + 8
    return max(minimum, k)


@dataclass(frozen=True)
class SweepRow:
    params: tuple[float, ...]
    quantity: str
    value: float
    cutoff_used: int | None
    converged: bool = True
    error: str | None = None


@dataclass(frozen=True)
class SweepTable:
    axes: tuple[tuple[str, tuple[float, ...]], ...]
    rows: tuple[SweepRow, ...]

    @property
    def axis_names(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.axes)

    def all_converged(self) -> bool:
        return all(row.converged for row in self.rows)


def _workers() -> int:
    env = os.environ.get("RQICHAN_THREADS", "")
    try:
        return max(1, int(env))
    except ValueError:
        return 1


def parameter_sweep(
    quantity: str,
    evaluator: Callable[..., float | tuple[float, int]],
    grids: Sequence[tuple[str, Sequence[float]]],
    n_workers: int | None = None,
) -> SweepTable:
    """Evaluate ``quantity`` on the cartesian product of the axis grids.

    Rows come out in lexicographic order of the axes regardless of worker
    count.  Evaluator failures are recorded per row (with the best available
    estimate for convergence failures) and the sweep continues.
    """
    axes = tuple((name, tuple(float(v) for v in values)) for name, values in grids)
    points = list(product(*(values for _, values in axes)))
    names = [name for name, _ in axes]

    def run(point: tuple[float, ...]) -> SweepRow:
        kwargs = dict(zip(names, point))
        try:
            out = evaluator(**kwargs)
        except ConvergenceError as err:
            return SweepRow(point, quantity, err.result.value, None, False, str(err))
        except NotConvergedError as err:
            return SweepRow(point, quantity, err.value, err.cutoff, False, str(err))
        except Exception as err:  # noqa: BLE001 - reported per row
            return SweepRow(point, quantity, math.nan, None, False, str(err))
        if isinstance(out, tuple):
            value, cutoff = out
            return SweepRow(point, quantity, float(value), int(cutoff))
        return SweepRow(point, quantity, float(out), None)

    workers = n_workers if n_workers is not None else _workers()
    if workers > 1 and len(points) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = tuple(pool.map(run, points))
    else:
        rows = tuple(run(p) for p in points)
    return SweepTable(axes=axes, rows=rows)


def _grid(step: float, lo: float = 0.0, hi: float = 1.0) -> np.ndarray:
    n = int(round((hi - lo) / step))
    return np.round(lo + step * np.arange(n + 1), 10)


# Truncation ceiling for the optimizer.  Beyond it (squeezing r >~ 3.2) the
# truncated Holevo surface carries a smooth positive bias, but the bias is
# flat enough in (alpha^2, q_R) that the argmax is unaffected (checked against
# substantially larger cutoffs), and only the argmax is meaningful there.
OPTIMIZER_CUTOFF_CAP = 2600


def optimize_capacity_2d(
    r: float,
    rail: str = "single",
    quantity: str = "holevo",
    coarse_step: float = 0.05,
    refine_step: float = 0.005,
    cutoff: int | None = None,
) -> tuple[float, float, float]:
    """Maximize the classical-channel information over the input bias
    alpha^2 and the wedge weight q_R at fixed squeezing.

    A coarse grid scan is followed by one local refinement around the best
    cell; ties break toward larger q_R, then larger alpha^2.  The truncation
    is fixed for the whole grid (capped at OPTIMIZER_CUTOFF_CAP) so values
    are comparable across grid points.
    """
    if rail != "single" or quantity != "holevo":
        raise ValueError("optimization is implemented for the single-rail Holevo information")
    from .infotheory import wedge_holevo_column

    if cutoff is None:
        cutoff = min(cutoff_guess(r, tail=1e-8), OPTIMIZER_CUTOFF_CAP)

    def best_on(alphas: np.ndarray, qrs: np.ndarray) -> tuple[float, float, float]:
        top: tuple[float, float, float] | None = None
        for qr in qrs:
            column = wedge_holevo_column(r, alphas, float(qr), cutoff)
            for a2, val in zip(alphas, column):
                key = (float(val), float(qr), float(a2))
                if top is None or key > top:
                    top = key
        assert top is not None
        return top

    val, qr_best, a2_best = best_on(_grid(coarse_step), _grid(coarse_step))
    lo_a, hi_a = max(0.0, a2_best - coarse_step), min(1.0, a2_best + coarse_step)
    lo_q, hi_q = max(0.0, qr_best - coarse_step), min(1.0, qr_best + coarse_step)
    val, qr_best, a2_best = best_on(
        _grid(refine_step, lo_a, hi_a), _grid(refine_step, lo_q, hi_q)
    )
    return a2_best, qr_best, val


@dataclass(frozen=True)
class FitResult:
    """Exponential-decay fit F = N^2 exp(-a N + b) at one squeezing value."""

    a_r: float
    b_r: float
    residual: float
    window: tuple[float, float]


def fit_noon_decay(samples: Sequence[tuple[int, float]], r: float) -> FitResult:
    """Least-squares fit of ln(F / N^2) = -a N + b over (N, F) samples."""
    if len(samples) < 3:
        raise ValueError("need at least 3 samples to fit the decay model")
    n = np.array([float(s[0]) for s in samples])
    f = np.array([float(s[1]) for s in samples])
    if np.any(f <= 0.0):
        raise ValueError("Fisher information samples must be positive")
    y = np.log(f / n**2)
    design = np.column_stack([-n, np.ones_like(n)])
    coef, *_ = np.linalg.lstsq(design, y, rcond=None)
    a_r, b_r = float(coef[0]), float(coef[1])
    resid = y - design @ coef
    rms = float(np.sqrt(np.mean(resid**2)))
    return FitResult(a_r=a_r, b_r=b_r, residual=rms, window=(r, r))
