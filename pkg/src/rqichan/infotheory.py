"""Entropic measures, fidelities, and the closed-form series for the
single-wedge channel quantities.

All entropies are in bits (base-2 logarithms).  Spectrum entries below
``EIG_FLOOR`` contribute nothing (the p log p -> 0 limit); eigenvalues more
negative than the truncation noise floor are rejected rather than clamped.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import channel
from .fock import DensityMatrix, PureState, hermitian_eigendecomposition, partial_trace
from .numerics import DEFAULT_CONFIG, ConvergenceConfig, polylog, sum_series

__all__ = [
    "EntropyReport",
    "shannon_entropy",
    "von_neumann_entropy",
    "entropy_report",
    "fidelity",
    "closed_form",
    "CLOSED_FORM_QUANTITIES",
    "numeric_channel_quantity",
    "subadditivity_check",
    "wedge_holevo_single_classical",
    "wedge_holevo_column",
    "wedge_quantum_report",
]

EIG_FLOOR = 1e-15
NEGATIVE_TOL = 1e-10

CLOSED_FORM_QUANTITIES = (
    "holevo_single_classical",
    "holevo_dual_classical",
    "cond_entropy_single_quantum",
    "cond_entropy_dual_quantum",
    "fidelity_single",
    "fidelity_dual",
)


def _lb(x: np.ndarray | float):
    return np.log2(x)


def entropy_bits(spectrum: np.ndarray | Sequence[float]) -> float:
    """Shannon entropy of a spectrum, clamping truncation-noise negatives."""
    lam = np.asarray(spectrum, dtype=float).reshape(-1)
    if lam.size and lam.min() < -NEGATIVE_TOL:
        raise ValueError(f"spectrum entry {lam.min():.3e} below -{NEGATIVE_TOL}")
    lam = lam[lam > EIG_FLOOR]
    if lam.size == 0:
        return 0.0
    return float(-(lam * np.log2(lam)).sum())


def shannon_entropy(p: Sequence[float]) -> float:
    """Entropy of a probability distribution in bits, with 0 lb 0 = 0."""
    arr = np.asarray(p, dtype=float).reshape(-1)
    if arr.min(initial=0.0) < -NEGATIVE_TOL:
        raise ValueError("probabilities must be non-negative")
    if abs(arr.sum() - 1.0) > 1e-10:
        raise ValueError(f"probabilities sum to {arr.sum()}, not 1")
    return entropy_bits(arr)


def von_neumann_entropy(rho: DensityMatrix) -> float:
    """Entropy of the (clamped) eigenvalue spectrum, in bits."""
    eigs, _ = hermitian_eigendecomposition(rho)
    return entropy_bits(eigs)


@dataclass(frozen=True)
class EntropyReport:
    """The six entropic quantities of a bipartition, in bits."""

    s_a: float
    s_b: float
    s_ab: float
    mutual: float
    conditional_a_given_b: float
    coherent_a_to_b: float


def entropy_report(rho_ab: DensityMatrix, partition: tuple[Iterable[str], Iterable[str]]) -> EntropyReport:
    """Entropies of ``rho_ab`` for the (A modes, B modes) bipartition.

    For classical-quantum states the mutual information equals the Holevo
    information of the underlying ensemble.
    """
    side_a = [m if isinstance(m, str) else m.name for m in partition[0]]
    side_b = [m if isinstance(m, str) else m.name for m in partition[1]]
    names = [m.name for m in rho_ab.modes]
    if sorted(side_a + side_b) != sorted(names):
        raise ValueError(f"partition {side_a} | {side_b} does not cover modes {names}")
    s_ab = von_neumann_entropy(rho_ab)
    s_a = von_neumann_entropy(partial_trace(rho_ab, side_b))
    s_b = von_neumann_entropy(partial_trace(rho_ab, side_a))
    conditional = s_ab - s_b
    return EntropyReport(
        s_a=s_a,
        s_b=s_b,
        s_ab=s_ab,
        mutual=s_a + s_b - s_ab,
        conditional_a_given_b=conditional,
        coherent_a_to_b=-conditional,
    )


def _clamped_eigs(mat: np.ndarray) -> np.ndarray:
    w = np.linalg.eigvalsh(mat)
    if w.min(initial=0.0) < -NEGATIVE_TOL:
        raise ValueError(f"matrix has eigenvalue {w.min():.3e} below the noise floor")
    return np.clip(w, 0.0, None)


def fidelity(rho1: DensityMatrix, rho2: DensityMatrix) -> float:
    """Uhlmann fidelity (Tr sqrt(sqrt(rho1) rho2 sqrt(rho1)))^2 in [0, 1].

    When the inputs commute (max-norm of the commutator below 1e-12) the
    simpler (Tr sqrt(rho1 rho2))^2 is used.
    """
    if tuple((m.name, m.cutoff) for m in rho1.modes) != tuple((m.name, m.cutoff) for m in rho2.modes):
        raise ValueError("fidelity requires matching mode layouts")
    m1, m2 = rho1.entries, rho2.entries

    d1, d2 = np.diag(m1), np.diag(m2)
    if (
        np.abs(m1 - np.diag(d1)).max(initial=0.0) < 1e-12
        and np.abs(m2 - np.diag(d2)).max(initial=0.0) < 1e-12
    ):
        val = float(np.sqrt(np.clip(d1.real, 0, None) * np.clip(d2.real, 0, None)).sum() ** 2)
        return min(val, 1.0)

    prod = m1 @ m2
    if np.abs(prod - m2 @ m1).max(initial=0.0) < 1e-12:
        # commuting: rho1 rho2 is hermitian PSD
        val = float(np.sqrt(_clamped_eigs(0.5 * (prod + prod.conj().T))).sum() ** 2)
        return min(val, 1.0)

    w, v = np.linalg.eigh(m1)
    w = np.clip(w, 0.0, None)
    sqrt1 = (v * np.sqrt(w)) @ v.conj().T
    inner = sqrt1 @ m2 @ sqrt1
    val = float(np.sqrt(_clamped_eigs(0.5 * (inner + inner.conj().T))).sum() ** 2)
    return min(val, 1.0)


# ---------------------------------------------------------------------------
# closed-form series for the single-wedge channel
# ---------------------------------------------------------------------------


def _binary_entropy(a2: float) -> float:
    return entropy_bits(np.array([a2, 1.0 - a2]))


def _holevo_single_classical(r: float, a2: float, config: ConvergenceConfig) -> float:
    if r == 0.0:
        return _binary_entropy(a2)
    b2 = 1.0 - a2
    if a2 == 0.0 or b2 == 0.0:
        return 0.0
    t2 = math.tanh(r) ** 2
    c2 = math.cosh(r) ** 2
    s2 = math.sinh(r) ** 2

    def term(n: int) -> float:
        tp = t2**n
        first = (a2 / c2) * tp * _lb(1.0 + n * b2 / (a2 * s2))
        if n == 0:
            return first  # the n lb(1 + const/n) piece has limit 0
        second = (n * b2 / (c2 * s2)) * tp * _lb(1.0 + a2 * s2 / (n * b2))
        return first + second

    series = sum_series(term, config)
    _require(series, "holevo_single_classical")
    return _binary_entropy(a2) - series.value


def _holevo_dual_classical(r: float, config: ConvergenceConfig) -> float:
    # symmetric optimum alpha^2 = 1/2 built in
    if r == 0.0:
        return 1.0
    t2 = math.tanh(r) ** 2
    c6 = math.cosh(r) ** 6
    state = {"p": -1, "w": 0.0}  # running sum of (q+1) lb(q+1)

    def term(p: int) -> float:
        if p != state["p"] + 1:
            raise RuntimeError("series terms must be requested sequentially")
        state["p"] = p
        state["w"] += (p + 1) * _lb(p + 1)
        # sum_{q<=p} (q+1) lb(1 + (p-q)/(q+1)) = [sum (q+1)] lb(p+1) - sum (q+1) lb(q+1)
        tri = 0.5 * (p + 1) * (p + 2)
        inner = tri * _lb(p + 1) - state["w"]
        return t2**p / c6 * inner

    series = sum_series(term, config)
    _require(series, "holevo_dual_classical")
    return 1.0 - series.value


def _cond_entropy_single_quantum(r: float, a2: float, config: ConvergenceConfig) -> float:
    if r == 0.0:
        return -_binary_entropy(a2)
    b2 = 1.0 - a2
    t = math.tanh(r)
    t2 = t * t
    c2 = math.cosh(r) ** 2
    s2 = math.sinh(r) ** 2
    lbt = _lb(t)

    def term(n: int) -> float:
        tp = t2**n
        t1 = (a2 / c2) * tp * _lb(t2 * (a2 * c2 + b2 * (n + 1)) / (a2 * s2 + b2 * n)) if (a2 * s2 + b2 * n) > 0 else 0.0
        t2_ = 2 * n * tp * (b2 / c2) * ((n + 1) / c2 - n / s2) * lbt
        t3 = (b2 / c2) * tp * ((n + 1) / c2) * _lb(a2 / c2 + b2 * (n + 1) / c2**2)
        t4 = -(b2 * n / (s2 * c2)) * tp * _lb(a2 / c2 + b2 * n / (s2 * c2)) if n else 0.0
        return t1 + t2_ + t3 + t4

    series = sum_series(term, config)
    _require(series, "cond_entropy_single_quantum")
    return -series.value


def _cond_entropy_dual_quantum(r: float, config: ConvergenceConfig) -> float:
    if r == 0.0:
        return -1.0
    t2 = math.tanh(r) ** 2
    c6 = math.cosh(r) ** 6

    def term(p: int) -> float:
        return t2**p / c6 * _lb((p + 2.0) / (p + 1.0)) * 0.5 * (p + 1) * (p + 2)

    series = sum_series(term, config)
    _require(series, "cond_entropy_dual_quantum")
    return -series.value


def _fidelity_single(r: float, config: ConvergenceConfig) -> float:
    if r == 0.0:
        return 0.0
    t2 = math.tanh(r) ** 2
    li = polylog(-0.5, t2, config)
    return (li / (math.sinh(r) * math.cosh(r) ** 2)) ** 2


def _require(series, what: str) -> None:
    if not series.converged:
        from .numerics import ConvergenceError

        raise ConvergenceError(f"{what} series did not converge", series)


def closed_form(quantity: str, r: float, alpha2: float = 0.5, config: ConvergenceConfig = DEFAULT_CONFIG) -> float:
    """Closed-form series value of a single-wedge channel quantity.

    ``alpha2`` is the logical-0 weight; the dual-rail quantities fix it to
    the symmetric optimum 1/2 and ignore the argument.
    """
    if r < 0.0:
        raise ValueError("r must be >= 0")
    if not 0.0 <= alpha2 <= 1.0:
        raise ValueError("alpha2 must be a probability")
    if quantity == "holevo_single_classical":
        return _holevo_single_classical(r, alpha2, config)
    if quantity == "holevo_dual_classical":
        return _holevo_dual_classical(r, config)
    if quantity == "cond_entropy_single_quantum":
        return _cond_entropy_single_quantum(r, alpha2, config)
    if quantity == "cond_entropy_dual_quantum":
        return _cond_entropy_dual_quantum(r, config)
    if quantity == "fidelity_single":
        return _fidelity_single(r, config)
    if quantity == "fidelity_dual":
        return _fidelity_single(r, config) ** 2
    raise ValueError(f"unknown quantity {quantity!r}; expected one of {CLOSED_FORM_QUANTITIES}")


def numeric_channel_quantity(quantity: str, r: float, alpha2: float = 0.5, cutoff: int = 30) -> float:
    """Truncated-numeric ground truth for the same quantities as `closed_form`,
    computed from the constructed states' spectra (no series involved)."""
    if quantity == "holevo_single_classical":
        sp = channel.swm_spectra("single", "classical", r, alpha2, cutoff)
        return entropy_bits(sp["a"]) + entropy_bits(sp["r"]) - entropy_bits(sp["ar"])
    if quantity == "holevo_dual_classical":
        sp = channel.swm_spectra("dual", "classical", r, 0.5, cutoff)
        return entropy_bits(sp["a"]) + entropy_bits(sp["r"]) - entropy_bits(sp["ar"])
    if quantity == "cond_entropy_single_quantum":
        sp = channel.swm_spectra("single", "quantum", r, alpha2, cutoff)
        return entropy_bits(sp["ar"]) - entropy_bits(sp["r"])
    if quantity == "cond_entropy_dual_quantum":
        sp = channel.swm_spectra("dual", "quantum", r, 0.5, cutoff)
        return entropy_bits(sp["ar"]) - entropy_bits(sp["r"])
    if quantity in ("fidelity_single", "fidelity_dual"):
        rail = "single" if quantity == "fidelity_single" else "dual"
        d0 = channel.received_logical_diag(rail, 0, r, cutoff)
        d1 = channel.received_logical_diag(rail, 1, r, cutoff)
        return float(np.sqrt(d0 * d1).sum() ** 2)
    raise ValueError(f"unknown quantity {quantity!r}")


# ---------------------------------------------------------------------------
# tripartite checks and general-wedge evaluators
# ---------------------------------------------------------------------------


def _group_modes(rho: DensityMatrix) -> tuple[list[str], list[str], list[str]]:
    alice, rob, antirob = [], [], []
    for m in rho.modes:
        if m.name.startswith("Rbar"):
            antirob.append(m.name)
        elif m.name.startswith("R"):
            rob.append(m.name)
        else:
            alice.append(m.name)
    if not (alice and rob and antirob):
        raise ValueError("state must contain Alice, Rob and AntiRob mode groups")
    return alice, rob, antirob


def subadditivity_check(rho_tripartite: DensityMatrix, tolerance: float = 1e-9) -> tuple[float, bool]:
    """Sum of the conditional entropies toward both receivers,
    [S(A,Rbar) - S(Rbar)] + [S(A,R) - S(R)], which strong subadditivity
    forces to be non-negative.  Pure transported states saturate it."""
    alice, rob, antirob = _group_modes(rho_tripartite)
    s_ar = von_neumann_entropy(partial_trace(rho_tripartite, antirob))
    s_r = von_neumann_entropy(partial_trace(rho_tripartite, antirob + alice))
    s_arbar = von_neumann_entropy(partial_trace(rho_tripartite, rob))
    s_rbar = von_neumann_entropy(partial_trace(rho_tripartite, rob + alice))
    total = (s_arbar - s_rbar) + (s_ar - s_r)
    return total, total >= -tolerance


def wedge_holevo_single_classical(
    r: float, alpha2: float, q_r: complex, cutoff: int, receiver: str = "rob"
) -> float:
    """Holevo information of the classical single-rail channel at general
    wedge weights toward Rob or AntiRob (q_l fixed by normalization)."""
    q_l = math.sqrt(max(0.0, 1.0 - abs(q_r) ** 2))
    sp = channel.wedge_single_classical_spectra(r, alpha2, q_r, q_l, cutoff)
    if receiver == "rob":
        return entropy_bits(sp["a"]) + entropy_bits(sp["r"]) - entropy_bits(sp["ar"])
    if receiver == "antirob":
        return entropy_bits(sp["a"]) + entropy_bits(sp["rbar"]) - entropy_bits(sp["arbar"])
    raise ValueError("receiver must be 'rob' or 'antirob'")


def wedge_holevo_column(
    r: float, alpha2_values: Sequence[float], q_r: complex, cutoff: int, receiver: str = "rob"
) -> np.ndarray:
    """Holevo information at many logical weights for one wedge weight.

    The excited-branch spectrum is independent of alpha^2 and is
    diagonalized once; only the receiver's marginal needs a solve per
    weight.  Used by the grid optimizer.
    """
    q_l = math.sqrt(max(0.0, 1.0 - abs(q_r) ** 2))
    ing = channel.wedge_single_classical_ingredients(r, q_r, q_l, cutoff)
    e2 = ing["e2"]
    diag, off = (ing["diag_rob"], ing["off_rob"]) if receiver == "rob" else (ing["diag_anti"], ing["off_anti"])
    spec_exc = channel.banded_step2_spectrum(diag, off)
    s_exc = entropy_bits(spec_exc)
    s_vac = entropy_bits(e2)
    w_exc = float(spec_exc.sum())
    w_vac = float(e2.sum())

    out = np.empty(len(alpha2_values))
    for i, a2 in enumerate(alpha2_values):
        b2 = 1.0 - a2
        # S(AR) block entropies: scaling a spectrum by w adds -w log w per unit mass
        s_ar = a2 * s_vac + b2 * s_exc
        if 0.0 < a2 < 1.0:
            s_ar += -(a2 * w_vac) * _lb(a2) - (b2 * w_exc) * _lb(b2)
        elif a2 == 0.0:
            s_ar = s_exc
        else:
            s_ar = s_vac
        s_r = entropy_bits(channel.banded_step2_spectrum(a2 * e2 + b2 * diag, b2 * off))
        out[i] = _binary_entropy(a2) + s_r - s_ar
    return out


def wedge_quantum_report(rail: str, r: float, alpha2: float, q_r: complex, cutoff: int) -> dict[str, float]:
    """Entropic quantities of the transported qubit state at general wedge
    weights, computed from the pure tripartite amplitudes.

    Returns mutual/conditional/coherent toward both receivers plus the
    strong-subadditivity sum (which the pure output saturates up to
    truncation error).
    """
    q_l = math.sqrt(max(0.0, 1.0 - abs(q_r) ** 2))
    alpha = math.sqrt(alpha2)
    beta = math.sqrt(1.0 - alpha2)
    psi, phi = channel.tripartite_components(rail, r, q_r, q_l, cutoff)
    state = PureState(psi.modes, alpha * psi.amplitudes + beta * phi.amplitudes)

    rob = [m.name for m in state.modes if m.name.startswith("R") and not m.name.startswith("Rbar")]
    antirob = [m.name for m in state.modes if m.name.startswith("Rbar")]

    s_ar = von_neumann_entropy(state.reduced_density(["A"] + rob))
    s_r = von_neumann_entropy(state.reduced_density(rob))
    s_arbar = von_neumann_entropy(state.reduced_density(["A"] + antirob))
    s_rbar = von_neumann_entropy(state.reduced_density(antirob))
    s_a = von_neumann_entropy(state.reduced_density(["A"]))

    cond_rob = s_ar - s_r
    cond_anti = s_arbar - s_rbar
    return {
        "s_a": s_a,
        "s_r": s_r,
        "s_rbar": s_rbar,
        "s_ar": s_ar,
        "s_arbar": s_arbar,
        "mutual_rob": s_a + s_r - s_ar,
        "mutual_antirob": s_a + s_rbar - s_arbar,
        "conditional_rob": cond_rob,
        "conditional_antirob": cond_anti,
        "coherent_rob": -cond_rob,
        "coherent_antirob": -cond_anti,
        "subadditivity_sum": cond_rob + cond_anti,
    }
