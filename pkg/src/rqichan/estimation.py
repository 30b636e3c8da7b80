"""Quantum Fisher information of the transported states and the Cramer-Rao
bound.

The general evaluation path follows the standard recipe: eigendecompose rho,
rotate rho' into that basis, apply the lowering superoperator
L(B)_{jk} = 2 B_{jk} / (lambda_j + lambda_k) with support projection, and
take Tr[rho' L(rho')].  When both rho and rho' are diagonal this collapses to
sum (rho'_jj)^2 / rho_jj.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .channel import (
    ChannelParams,
    ClassicalBit,
    AmplitudeParam,
    Encoding,
    build_channel_state,
    received_logical_diag,
    squeeze_amplitudes,
    swm_bipartite_weighted,
)
from .fock import DensityMatrix, partial_trace
from .numerics import DEFAULT_CONFIG, ConvergenceConfig, hypergeometric_pfq, lerch_phi, sum_series

__all__ = [
    "EstimationConfig",
    "ParametrizedState",
    "FisherResult",
    "lowering_superoperator",
    "qfi_from_matrices",
    "qfi",
    "qfi_closed_form_amplitude",
    "amplitude_parametrized_state",
    "amplitude_setup_qfi_numeric",
    "AMPLITUDE_SETUPS",
    "noon_qfi",
    "noon_phase_qfi_at_cutoff",
    "cramer_rao_bound",
]

AMPLITUDE_SETUPS = ("single_rob", "dual_rob", "single_joint", "dual_joint", "classical_joint")


@dataclass(frozen=True)
class EstimationConfig:
    fd_step: float = 1e-5          # central finite-difference step in theta
    support_floor: float = 1e-12   # eigenvalue-pair sums below this are projected out
    offdiag_tol: float = 1e-12     # off-diagonal mass below this takes the diagonal path
    truncation_eps: float = 1e-6   # relative agreement required between cutoffs k and k+1
    max_cutoff_steps: int = 12     # +1 steps tried before restarting with a larger guess


DEFAULT_ESTIMATION = EstimationConfig()


@dataclass(frozen=True)
class ParametrizedState:
    """A theta-parametrized state with an optional analytic derivative."""

    builder: Callable[[float], DensityMatrix]
    theta: float
    derivative: Callable[[float], DensityMatrix] | None = None


@dataclass(frozen=True)
class FisherResult:
    value: float
    path: str            # 'diagonal' or 'general'
    cutoff_used: int


def lowering_superoperator(eigs: np.ndarray, b: np.ndarray, floor: float = 1e-12) -> np.ndarray:
    """Apply L(B)_{jk} = 2 B_{jk} / (lambda_j + lambda_k) in the eigenbasis.

    Pairs whose eigenvalue sum falls below ``floor`` lie outside the state's
    support and are set to zero.
    """
    lam = np.asarray(eigs, dtype=float)
    if lam.min(initial=0.0) < -1e-10:
        raise ValueError("eigenvalues must be non-negative")
    lam = np.clip(lam, 0.0, None)
    denom = lam[:, None] + lam[None, :]
    out = np.zeros_like(np.asarray(b, dtype=complex))
    mask = denom >= floor
    out[mask] = 2.0 * np.asarray(b, dtype=complex)[mask] / denom[mask]
    return out


def qfi_from_matrices(
    rho: np.ndarray, drho: np.ndarray, config: EstimationConfig = DEFAULT_ESTIMATION
) -> tuple[float, str]:
    """Fisher information Tr[rho' L_rho(rho')] for explicit matrices.

    Returns (value, path) where path records whether the diagonal shortcut
    was taken.
    """
    rho = np.asarray(rho, dtype=complex)
    drho = np.asarray(drho, dtype=complex)
    if np.abs(drho - drho.conj().T).max(initial=0.0) > 1e-10:
        raise ValueError("state derivative is not hermitian")

    diag_rho = np.abs(rho - np.diag(np.diag(rho))).max(initial=0.0)
    diag_drho = np.abs(drho - np.diag(np.diag(drho))).max(initial=0.0)
    if diag_rho < config.offdiag_tol and diag_drho < config.offdiag_tol:
        p = np.diag(rho).real
        dp = np.diag(drho).real
        mask = p >= config.support_floor
        value = float((dp[mask] ** 2 / p[mask]).sum())
        return value, "diagonal"

    w, v = np.linalg.eigh(rho)
    b = v.conj().T @ drho @ v
    lowered = lowering_superoperator(np.clip(w, 0.0, None), b, config.support_floor)
    value = float(np.einsum("jk,kj->", b, lowered).real)
    return value, "general"


def qfi(state: ParametrizedState, config: EstimationConfig = DEFAULT_ESTIMATION) -> FisherResult:
    """Fisher information of a parametrized density matrix.

    Uses the analytic derivative when provided, otherwise a central finite
    difference with step ``config.fd_step``.
    """
    rho = state.builder(state.theta)
    if state.derivative is not None:
        drho_dm = state.derivative(state.theta)
        if tuple(m.cutoff for m in drho_dm.modes) != tuple(m.cutoff for m in rho.modes):
            raise ValueError("derivative layout does not match the state")
        drho = drho_dm.entries
        if abs(np.trace(drho)) > 1e-10:
            raise ValueError("analytic derivative must be traceless")
    else:
        h = config.fd_step
        plus = state.builder(state.theta + h).entries
        minus = state.builder(state.theta - h).entries
        drho = (plus - minus) / (2.0 * h)
    value, path = qfi_from_matrices(rho.entries, drho, config)
    cutoff_used = max(m.cutoff for m in rho.modes)
    return FisherResult(value=value, path=path, cutoff_used=cutoff_used)


# ---------------------------------------------------------------------------
# closed-form amplitude estimation
# ---------------------------------------------------------------------------


def _check_angle(theta: float) -> None:
    if abs(math.sin(2.0 * theta)) < 1e-12:
        raise ValueError(
            "closed form is singular at multiples of pi/2; evaluate the truncated state instead"
        )


def qfi_closed_form_amplitude(
    setup: str, r: float, theta: float, config: ConvergenceConfig = DEFAULT_CONFIG
) -> float:
    """Fisher information for amplitude estimation, evaluated in closed form.

    Joint measurements (sender assists) give exactly 4 for every encoding,
    independent of r and theta.  The receiver-alone values use the
    hypergeometric/Lerch expressions; at r = 0 the channel is the identity
    and they reduce to 4.
    """
    if setup not in AMPLITUDE_SETUPS:
        raise ValueError(f"unknown setup {setup!r}; expected one of {AMPLITUDE_SETUPS}")
    if r < 0.0:
        raise ValueError("r must be >= 0")
    if setup.endswith("_joint"):
        return 4.0
    if r == 0.0:
        return 4.0
    _check_angle(theta)

    sin2, cos2 = math.sin(theta) ** 2, math.cos(theta) ** 2
    t2 = math.tanh(r) ** 2
    sech2 = 1.0 / math.cosh(r) ** 2
    csch2 = 1.0 / math.sinh(r) ** 2

    if setup == "single_rob":
        a = math.sinh(r) ** 2 * cos2 / sin2  # cot^2(theta) sinh^2(r)
        prefactor = 4.0 * cos2 / (csch2 * sin2 + cos2)
        hyp = sech2**2 * sin2 * (
            csch2 * hypergeometric_pfq([2.0, 2.0, a + 1.0], [1.0, a + 2.0], t2, config)
            - 2.0 * hypergeometric_pfq([2.0, a + 1.0], [a + 2.0], t2, config)
        )
        ler = lerch_phi(t2, 1.0, a, config) * (t2 * cos2 + sech2 * sin2)
        return prefactor * (hyp + ler)

    # dual_rob: the partner-mode sum has a closed form per outer index; the
    # outer sum is evaluated with the convergence-tested summation.
    sin2x2 = math.sin(2.0 * theta) ** 2
    tan2 = sin2 / cos2

    def term(n: int) -> float:
        ntan2 = n * tan2
        pre = -(sech2**2) * t2**n / (cos2 + n * sin2)
        bracket = -hypergeometric_pfq([2.0, 2.0, 1.0 + ntan2], [1.0, 2.0 + ntan2], t2, config) * sech2 * sin2x2
        if n:
            bracket += 2.0 * n * (
                -2.0 * hypergeometric_pfq([1.0, ntan2], [1.0 + ntan2], t2, config) * cos2 * csch2 * (cos2 + n * sin2)
                + hypergeometric_pfq([2.0, 1.0 + ntan2], [2.0 + ntan2], t2, config) * sech2 * sin2x2
            )
        return pre * bracket

    series = sum_series(term, config)
    if not series.converged:
        from .numerics import ConvergenceError

        raise ConvergenceError("dual receiver-alone Fisher series did not converge", series)
    return series.value


def amplitude_parametrized_state(
    rail: str, r: float, cutoff: int, theta: float, joint: bool = True, classical: bool = False
) -> ParametrizedState:
    """Parametrized transported state for amplitude estimation with an
    analytic derivative (single-wedge mapping).

    ``joint`` keeps the sender's qubit; otherwise it is traced out, which
    leaves the same receiver state for classical and quantum payloads.
    """

    def builder(theta_val: float) -> DensityMatrix:
        params = ChannelParams(r=r, cutoff=cutoff)
        payload = ClassicalBit(math.cos(theta_val) ** 2) if classical else AmplitudeParam(theta_val)
        rho = build_channel_state(params, Encoding(rail, payload))
        if not joint:
            rho = partial_trace(rho, ["A"])
        return rho

    def derivative(theta_val: float) -> DensityMatrix:
        s2t, c2t = math.sin(2.0 * theta_val), math.cos(2.0 * theta_val)
        weights = {(0, 0): -s2t, (1, 1): s2t}
        if not classical:
            weights[(0, 1)] = weights[(1, 0)] = c2t
        drho = swm_bipartite_weighted(rail, weights, r, cutoff)
        if not joint:
            drho = partial_trace(drho, ["A"])
        return drho

    return ParametrizedState(builder=builder, theta=theta, derivative=derivative)


def _qfi_blocks_batched(rhos: np.ndarray, drhos: np.ndarray, floor: float) -> float:
    """Fisher information summed over a stack of invariant blocks."""
    w, v = np.linalg.eigh(rhos)
    w = np.clip(w, 0.0, None)
    b = np.einsum("mji,mjk,mkl->mil", v.conj(), drhos, v)
    denom = w[:, :, None] + w[:, None, :]
    mask = denom >= floor
    contrib = np.zeros_like(denom)
    contrib[mask] = 2.0 * (np.abs(b[mask]) ** 2) / denom[mask]
    return float(contrib.sum())


def _diag_qfi(lam: np.ndarray, dlam: np.ndarray, floor: float) -> float:
    mask = lam >= floor
    return float((dlam[mask] ** 2 / lam[mask]).sum())


def amplitude_setup_qfi_numeric(
    setup: str, r: float, theta: float, cutoff: int, config: EstimationConfig = DEFAULT_ESTIMATION
) -> float:
    """Truncated-matrix Fisher information for the amplitude-estimation
    setups, exploiting the states' invariant block structure so large
    cutoffs stay cheap.

    The receiver-alone states are diagonal; the joint quantum states pair
    the sender's logical components into 2x2 blocks per noise index.
    """
    if setup not in AMPLITUDE_SETUPS:
        raise ValueError(f"unknown setup {setup!r}")
    k = cutoff
    floor = config.support_floor
    cth2, sth2 = math.cos(theta) ** 2, math.sin(theta) ** 2
    s2t = math.sin(2.0 * theta)
    vac = received_logical_diag("single", 0, r, k)
    exc = received_logical_diag("single", 1, r, k)

    if setup == "single_rob":
        lam = cth2 * vac + sth2 * exc
        dlam = s2t * (exc - vac)
        return _diag_qfi(lam, dlam, floor)

    if setup == "dual_rob":
        d0 = received_logical_diag("dual", 0, r, k)
        d1 = received_logical_diag("dual", 1, r, k)
        lam = cth2 * d0 + sth2 * d1
        dlam = s2t * (d1 - d0)
        return _diag_qfi(lam, dlam, floor)

    if setup == "classical_joint":
        lam = np.concatenate([cth2 * vac, sth2 * exc])
        dlam = np.concatenate([-s2t * vac, s2t * exc])
        return _diag_qfi(lam, dlam, floor)

    t2 = math.tanh(r) ** 2
    if setup == "single_joint":
        # blocks over n: {|0, n>, |1, n+1>}; cross element sqrt(n+1) t^{2n}/cosh^3
        n = np.arange(k - 1)
        cross = np.sqrt(n + 1.0) * t2**n / math.cosh(r) ** 3
        rhos = np.zeros((k - 1, 2, 2))
        drhos = np.zeros((k - 1, 2, 2))
        rhos[:, 0, 0] = cth2 * vac[:-1]
        rhos[:, 1, 1] = sth2 * exc[1:]
        rhos[:, 0, 1] = rhos[:, 1, 0] = math.cos(theta) * math.sin(theta) * cross
        drhos[:, 0, 0] = -s2t * vac[:-1]
        drhos[:, 1, 1] = s2t * exc[1:]
        drhos[:, 0, 1] = drhos[:, 1, 0] = math.cos(2.0 * theta) * cross
        value = _qfi_blocks_batched(rhos, drhos, floor)
        # unpaired top level |0, k-1>
        value += _diag_qfi(np.array([cth2 * vac[-1]]), np.array([-s2t * vac[-1]]), floor)
        return value

    # dual_joint: blocks over (n, m): {|0, n+1, m>, |1, n, m+1>}
    c6 = math.cosh(r) ** 6
    n = np.arange(k - 1)
    w = t2**n
    base = np.multiply.outer(w, w) / c6
    nn = (n + 1.0)[:, None]
    mm = (n + 1.0)[None, :]
    cross = np.sqrt(nn * mm) * base
    rhos = np.zeros((k - 1, k - 1, 2, 2))
    drhos = np.zeros((k - 1, k - 1, 2, 2))
    rhos[..., 0, 0] = cth2 * nn * base
    rhos[..., 1, 1] = sth2 * mm * base
    rhos[..., 0, 1] = rhos[..., 1, 0] = math.cos(theta) * math.sin(theta) * cross
    drhos[..., 0, 0] = -s2t * nn * base
    drhos[..., 1, 1] = s2t * mm * base
    drhos[..., 0, 1] = drhos[..., 1, 0] = math.cos(2.0 * theta) * cross
    value = _qfi_blocks_batched(rhos.reshape(-1, 2, 2), drhos.reshape(-1, 2, 2), floor)
    # truncation edges carry a single logical component each
    d0 = np.outer(exc, vac)
    d1 = np.outer(vac, exc)
    edge0 = d0[1:, k - 1]
    edge1 = d1[k - 1, 1:]
    value += _diag_qfi(cth2 * edge0, -s2t * edge0, floor)
    value += _diag_qfi(sth2 * edge1, s2t * edge1, floor)
    return value


# ---------------------------------------------------------------------------
# phase estimation with N-excitation payloads
# ---------------------------------------------------------------------------


def _noon_single_blocks(n_exc: int, r: float, theta: float, k: int) -> list[tuple[np.ndarray, np.ndarray]]:
    """(rho, drho) blocks of the received single-rail phase state at cutoff k.

    The state couples Fock levels N apart only, so it decomposes into ladders
    by residue class mod N; each ladder is tridiagonal.
    """
    if k <= n_exc:
        raise ValueError(f"cutoff {k} must exceed the excitation count {n_exc}")
    a = squeeze_amplitudes(0, r, k - 1)
    b = squeeze_amplitudes(n_exc, r, k - 1 - n_exc)
    diag = 0.5 * a * a
    diag[n_exc:] += 0.5 * b * b
    cross = 0.5 * a[: b.size] * b
    phase = np.exp(1j * n_exc * theta)
    dphase = 1j * n_exc * phase

    blocks = []
    for residue in range(min(n_exc, k)):
        idx = np.arange(residue, k, n_exc)
        m = idx.size
        rho = np.zeros((m, m), dtype=complex)
        drho = np.zeros((m, m), dtype=complex)
        rho[np.arange(m), np.arange(m)] = diag[idx]
        lower = idx[:-1]
        valid = lower < cross.size
        cc = np.where(valid, cross[np.minimum(lower, cross.size - 1)], 0.0)
        rows = np.arange(1, m)
        rho[rows, rows - 1] = phase * cc
        rho[rows - 1, rows] = np.conj(phase) * cc
        drho[rows, rows - 1] = dphase * cc
        drho[rows - 1, rows] = np.conj(dphase) * cc
        blocks.append((rho, drho))
    return blocks


def _noon_dual_blocks(n_exc: int, r: float, theta: float, k: int) -> list[tuple[np.ndarray, np.ndarray]]:
    """(rho, drho) blocks of the received dual-rail phase state at cutoff k.

    Total excitation number j0 + j1 is conserved and the coherences step j0
    by N, so blocks are indexed by (total, j0 mod N) and are tridiagonal.
    """
    if k <= n_exc:
        raise ValueError(f"cutoff {k} must exceed the excitation count {n_exc}")
    a = squeeze_amplitudes(0, r, k - 1)
    b = squeeze_amplitudes(n_exc, r, k - 1 - n_exc)
    occ_vac = a * a
    occ_exc = np.zeros(k)
    occ_exc[n_exc:] = b * b
    g = a[: b.size] * b  # cross amplitude per ladder step
    phase = np.exp(1j * n_exc * theta)
    dphase = 1j * n_exc * phase

    blocks = []
    for total in range(2 * k - 1):
        j0_lo = max(0, total - (k - 1))
        j0_hi = min(total, k - 1)
        for offset in range(min(n_exc, j0_hi - j0_lo + 1)):
            idx = np.arange(j0_lo + offset, j0_hi + 1, n_exc)
            j1 = total - idx
            m = idx.size
            diag = 0.5 * (occ_exc[idx] * occ_vac[j1] + occ_vac[idx] * occ_exc[j1])
            if m == 1 and diag[0] == 0.0:
                continue
            rho = np.zeros((m, m), dtype=complex)
            drho = np.zeros((m, m), dtype=complex)
            rho[np.arange(m), np.arange(m)] = diag
            # coupling between j0 = x+N (row) and x (col): 0.5 g[x] g[total-x-N]
            p = idx[:-1]
            q = total - p - n_exc
            valid = (p < g.size) & (q >= 0) & (q < g.size)
            cc = np.zeros(m - 1)
            cc[valid] = 0.5 * g[p[valid]] * g[q[valid]]
            rows = np.arange(1, m)
            rho[rows, rows - 1] = phase * cc
            rho[rows - 1, rows] = np.conj(phase) * cc
            drho[rows, rows - 1] = dphase * cc
            drho[rows - 1, rows] = np.conj(dphase) * cc
            blocks.append((rho, drho))
    return blocks


def noon_phase_qfi_at_cutoff(
    n_exc: int, rail: str, r: float, theta: float, cutoff: int,
    config: EstimationConfig = DEFAULT_ESTIMATION,
) -> float:
    """Fisher information of the received phase state at a fixed cutoff,
    summed over its invariant ladder blocks."""
    if rail == "single":
        blocks = _noon_single_blocks(n_exc, r, theta, cutoff)
    elif rail == "dual":
        blocks = _noon_dual_blocks(n_exc, r, theta, cutoff)
    else:
        raise ValueError("rail must be 'single' or 'dual'")
    total = 0.0
    for rho, drho in blocks:
        if rho.shape[0] == 1:
            continue  # no coherence, no theta dependence
        total += qfi_from_matrices(rho, drho, config)[0]
    return total


def _noon_start_cutoff(n_exc: int, r: float) -> int:
    """Initial truncation guess: the squeezed weight of the N-excitation
    branch peaks near (N+1) sinh^2 r with a spread of order sqrt(N+1) cosh^2 r."""
    s2 = math.sinh(r) ** 2
    spread = math.sqrt(n_exc + 1.0) * math.tanh(r) * math.cosh(r) ** 2
    return n_exc + 1 + int(math.ceil((n_exc + 1) * s2 + 6.0 * spread)) + 4


class TruncationError(RuntimeError):
    """Adaptive truncation ran out of budget; carries the best estimate."""

    def __init__(self, message: str, value: float, cutoff: int):
        super().__init__(message)
        self.value = value
        self.cutoff = cutoff


def noon_qfi(
    n_exc: int,
    rail: str,
    r: float,
    theta: float = 0.65,
    config: EstimationConfig = DEFAULT_ESTIMATION,
    k0: int | None = None,
) -> FisherResult:
    """Fisher information for phase estimation with an N-excitation payload,
    with the truncation chosen adaptively (cutoffs k and k+1 must agree to
    ``config.truncation_eps`` relative)."""
    if n_exc < 1:
        raise ValueError("excitation count must be >= 1")
    from .optimize import NotConvergedError, adaptive_truncation

    guess = k0 if k0 is not None else _noon_start_cutoff(n_exc, r)
    attempts = 3
    for attempt in range(attempts):
        try:
            value, cutoff_used = adaptive_truncation(
                lambda k: noon_phase_qfi_at_cutoff(n_exc, rail, r, theta, k, config),
                k0=guess,
                eps=config.truncation_eps,
                k_max=guess + config.max_cutoff_steps,
            )
            return FisherResult(value=value, path="general", cutoff_used=cutoff_used)
        except NotConvergedError as err:
            if attempt == attempts - 1:
                raise TruncationError(
                    f"phase-state Fisher information did not stabilize by cutoff {guess}",
                    err.value,
                    guess,
                ) from err
            guess = int(math.ceil(1.5 * guess)) + n_exc
    raise AssertionError("unreachable")


def cramer_rao_bound(fisher: float, n_measurements: int) -> float:
    """Variance lower bound 1 / (n F); infinite when no information flows."""
    if n_measurements < 1:
        raise ValueError("n_measurements must be >= 1")
    if fisher <= 0.0:
        return math.inf
    return 1.0 / (n_measurements * fisher)
