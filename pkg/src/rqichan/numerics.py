"""Convergence-tested evaluation of infinite series and the special functions
built on top of it.

The series summation follows a two-stage stopping rule.  At step i the ratio
rho = u_i / u_{i-1} of consecutive terms is formed; only while 0 < rho < 1 is
the remainder modelled by the geometric tail T_i = u_i * rho / (1 - rho).
Convergence is declared once both the tail is negligible against the partial
sum (|T_i / S_i| < eps_tail) and the tail-corrected sum has stopped moving
(|S_Ti - S_T(i-1)| / |S_Ti| < eps_pc).  Absolute values make the same rule
usable for series whose terms are eventually of constant negative sign.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

__all__ = [
    "ConvergenceConfig",
    "SeriesResult",
    "ConvergenceError",
    "DEFAULT_CONFIG",
    "sum_series",
    "polylog",
    "lerch_phi",
    "hypergeometric_pfq",
    "squeezing_from_acceleration",
    "acceleration_from_schwarzschild",
]

# Consecutive exact-zero terms after which a series is treated as terminated
# (terminating hypergeometric series, zero-argument polylogarithms).
_ZERO_RUN_STOP = 3


@dataclass(frozen=True)
class ConvergenceConfig:
    """Tolerances and budget for the series summation.

    eps_tail   relative bound on the geometric tail estimate
    eps_pc     relative bound on the step change of the tail-corrected sum
    max_terms  term budget; exceeding it yields a non-converged result
    """

    eps_tail: float = 1e-10
    eps_pc: float = 1e-10
    max_terms: int = 100_000

    def __post_init__(self) -> None:
        if not (self.eps_tail > 0 and self.eps_pc > 0):
            raise ValueError("tolerances must be positive")
        if self.max_terms < 2:
            raise ValueError("max_terms must be at least 2")


DEFAULT_CONFIG = ConvergenceConfig()


@dataclass(frozen=True)
class SeriesResult:
    """Outcome of a summation: partial sum, effort, and tail diagnostics."""

    value: float
    terms_used: int
    tail_estimate: float
    converged: bool


class ConvergenceError(RuntimeError):
    """A series failed to satisfy the stopping rule within the term budget.

    The best available estimate is attached as ``result``.
    """

    def __init__(self, message: str, result: SeriesResult):
        super().__init__(message)
        self.result = result


def sum_series(term: Callable[[int], float], config: ConvergenceConfig = DEFAULT_CONFIG) -> SeriesResult:
    """Sum ``term(0) + term(1) + ...`` with geometric-tail convergence testing.

    The generator is called once per index in increasing order.  Terms must be
    eventually of one sign with eventually decreasing magnitude; leading zero
    terms are skipped before ratio testing starts, and a run of
    ``_ZERO_RUN_STOP`` exact zeros terminates the series with zero tail.
    """
    partial = 0.0
    prev_term: float | None = None
    prev_tail_sum: float | None = None
    zero_run = 0

    for i in range(config.max_terms):
        u = float(term(i))
        partial += u

        if u == 0.0:
            zero_run += 1
            if zero_run >= _ZERO_RUN_STOP:
                return SeriesResult(partial, i + 1, 0.0, True)
            continue
        zero_run = 0

        if prev_term is None:
            prev_term = u
            continue

        rho = u / prev_term
        prev_term = u
        if not (0.0 < rho < 1.0):
            # ratio test failed at this step; keep going
            prev_tail_sum = None
            continue

        tail = u * rho / (1.0 - rho)
        tail_sum = partial + tail
        if prev_tail_sum is not None and partial != 0.0 and tail_sum != 0.0:
            tail_ok = abs(tail) < config.eps_tail * abs(partial)
            step_ok = abs(tail_sum - prev_tail_sum) < config.eps_pc * abs(tail_sum)
            if tail_ok and step_ok:
                return SeriesResult(partial, i + 1, abs(tail), True)
        prev_tail_sum = tail_sum

    # budget exhausted: report the best estimate, flagged
    if prev_tail_sum is not None:
        tail_estimate = abs(prev_tail_sum - partial)
    else:
        tail_estimate = abs(prev_term) if prev_term is not None else 0.0
    return SeriesResult(partial, config.max_terms, tail_estimate, False)


def _summed(term: Callable[[int], float], config: ConvergenceConfig, what: str) -> float:
    result = sum_series(term, config)
    if not result.converged:
        raise ConvergenceError(f"{what} did not converge within {config.max_terms} terms", result)
    return result.value


def polylog(s: float, z: float, config: ConvergenceConfig = DEFAULT_CONFIG) -> float:
    """Polylogarithm Li_s(z) = sum_{k>=1} z^k / k^s for 0 <= z < 1.

    Orders may be negative (the channel fidelities use s = -1/2).
    """
    if not 0.0 <= z < 1.0:
        raise ValueError(f"polylog requires 0 <= z < 1, got z={z}")

    def term(i: int) -> float:
        k = i + 1
        return z**k / float(k) ** s

    return _summed(term, config, f"Li_{s}({z})")


def lerch_phi(z: float, s: float, a: float, config: ConvergenceConfig = DEFAULT_CONFIG) -> float:
    """Lerch transcendent Phi(z, s, a) = sum_{k>=0} z^k / (a + k)^s.

    Requires 0 <= z < 1 and a > 0 (a at zero or a negative integer makes a
    denominator vanish).
    """
    if not 0.0 <= z < 1.0:
        raise ValueError(f"lerch_phi requires 0 <= z < 1, got z={z}")
    if a <= 0.0:
        raise ValueError(f"lerch_phi requires a > 0, got a={a}")

    def term(k: int) -> float:
        return z**k / (a + k) ** s

    return _summed(term, config, f"Phi({z},{s},{a})")


def hypergeometric_pfq(
    a: list[float],
    b: list[float],
    x: float,
    config: ConvergenceConfig = DEFAULT_CONFIG,
) -> float:
    """Generalized hypergeometric pFq(a; b; x) for |x| < 1.

    Terms are built from the previous one through the Pochhammer ratio
    prod(a_i + k) / prod(b_j + k) * x / (k + 1), which keeps the running
    term finite even when the individual Pochhammer products overflow.
    A non-positive-integer upper parameter terminates the series.
    """
    if abs(x) >= 1.0:
        raise ValueError(f"hypergeometric_pfq requires |x| < 1, got x={x}")
    for bj in b:
        if bj <= 0.0 and float(bj).is_integer():
            raise ValueError(f"lower parameter {bj} is a non-positive integer")

    state = {"k": -1, "term": 1.0}

    def term(k: int) -> float:
        if k != state["k"] + 1:
            raise RuntimeError("hypergeometric term generator must be called sequentially")
        state["k"] = k
        if k > 0:
            ratio = x / k
            for ai in a:
                ratio *= ai + (k - 1)
            for bj in b:
                ratio /= bj + (k - 1)
            state["term"] *= ratio
        return state["term"]

    return _summed(term, config, f"{len(a)}F{len(b)}(...; {x})")


def squeezing_from_acceleration(omega: float, a: float) -> float:
    """Squeezing parameter of the channel for a receiver with proper
    acceleration ``a`` using modes of frequency ``omega``: r = artanh(e^{-omega pi / a})."""
    if omega <= 0.0 or a <= 0.0:
        raise ValueError("omega and a must be positive")
    return math.atanh(math.exp(-omega * math.pi / a))


def acceleration_from_schwarzschild(
    r_s: float, r0: float, validity_threshold: float = 0.1
) -> tuple[float, bool]:
    """Proper acceleration assigned to an observer hovering at radius ``r0``
    outside a horizon of radius ``r_s``, with a validity flag for the
    flat-space approximation.

    Evaluates a = 2 r_s sqrt(1 - r_s / r0).  Note this expression vanishes at
    the horizon even though the hovering observer's noise diverges there; it
    is kept in this form deliberately (see the project decision log) rather
    than silently inverted.  ``valid`` is True when (r0 - r_s) <
    validity_threshold * 2 r_s, i.e. when hovering close enough to the
    horizon for the approximation to hold.
    """
    if r_s <= 0.0:
        raise ValueError("r_s must be positive")
    if r0 < r_s:
        raise ValueError("r0 must not be inside the horizon (r0 >= r_s)")
    a = 2.0 * r_s * math.sqrt(1.0 - r_s / r0)
    valid = (r0 - r_s) < validity_threshold * (2.0 * r_s)
    return a, valid
