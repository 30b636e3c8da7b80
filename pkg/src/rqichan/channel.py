"""Construction of the field states produced when an inertial sender excites
Unruh modes that an accelerated receiver (Rob) and his counter-accelerated
partner (AntiRob) describe through two-mode squeezing.

Conventions
-----------
* The squeezing parameter ``r`` is real and non-negative; the per-excitation
  phase factors (powers of -i) that accompany the squeezed amplitudes are
  dropped throughout, since every constructed density matrix pairs them with
  their conjugates.
* Wedge weights ``q_r`` / ``q_l`` obey |q_r|^2 + |q_l|^2 = 1.  The choice
  q_r = 1 maps the sender's excitation entirely into the receiver's wedge
  (the single-wedge mapping); bipartite states then have closed-form matrix
  elements which `build_channel_state` uses as a fast path.
* Logical bases: Alice's qubit index is (0, 1); Fock indices ascend.  Single
  rail encodes logical x as x excitations of one mode, dual rail as one
  excitation in rail x of two modes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .fock import DensityMatrix, ModeLabel, PureState

__all__ = [
    "ChannelParams",
    "ClassicalBit",
    "QuantumQubit",
    "AmplitudeParam",
    "Noon",
    "Encoding",
    "squeeze_amplitudes",
    "squeeze_fock",
    "transform_matrix_element",
    "build_channel_state",
    "tripartite_components",
    "noon_received_state",
    "received_logical_diag",
    "swm_bipartite_weighted",
    "swm_spectra",
    "banded_step2_spectrum",
    "wedge_single_classical_ingredients",
    "wedge_single_classical_spectra",
    "bogoliubov_vacuum_coefficients",
]

# Dense construction guard: refuse to materialize matrices beyond this
# dimension (the spectra helpers below cover the large-cutoff regimes).
MAX_DENSE_DIM = 4096

_WEIGHT_NORM_TOL = 1e-12


@dataclass(frozen=True)
class ChannelParams:
    """Channel configuration: squeezing, wedge weights and Fock cutoff."""

    r: float
    q_r: complex = 1.0
    q_l: complex = 0.0
    cutoff: int = 30

    def __post_init__(self) -> None:
        if self.r < 0.0:
            raise ValueError("squeezing parameter r must be >= 0")
        if self.cutoff < 2:
            raise ValueError("cutoff must be >= 2")
        norm = abs(self.q_r) ** 2 + abs(self.q_l) ** 2
        if abs(norm - 1.0) > _WEIGHT_NORM_TOL:
            raise ValueError(f"|q_r|^2 + |q_l|^2 = {norm} is not 1")

    @property
    def single_wedge(self) -> bool:
        return self.q_r == 1.0 and self.q_l == 0.0


@dataclass(frozen=True)
class ClassicalBit:
    """Classical payload: logical 0 with probability p0, logical 1 otherwise."""

    p0: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.p0 <= 1.0:
            raise ValueError("p0 must be a probability")


@dataclass(frozen=True)
class QuantumQubit:
    """Quantum payload alpha|0> + beta|1>."""

    alpha: complex
    beta: complex

    def __post_init__(self) -> None:
        norm = abs(self.alpha) ** 2 + abs(self.beta) ** 2
        if abs(norm - 1.0) > 1e-10:
            raise ValueError(f"|alpha|^2 + |beta|^2 = {norm} is not 1")


@dataclass(frozen=True)
class AmplitudeParam:
    """Quantum payload cos(theta)|0> + sin(theta)|1> used for amplitude estimation."""

    theta: float


@dataclass(frozen=True)
class Noon:
    """Phase payload (|N excitations> + e^{iN theta} |swapped>)/sqrt(2)."""

    n: int
    theta: float

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("excitation count must be >= 1")


Payload = ClassicalBit | QuantumQubit | AmplitudeParam | Noon


@dataclass(frozen=True)
class Encoding:
    """Rail choice plus payload."""

    rail: str
    payload: Payload

    def __post_init__(self) -> None:
        if self.rail not in ("single", "dual"):
            raise ValueError("rail must be 'single' or 'dual'")


def _logical_amplitudes(payload: Payload) -> tuple[complex, complex, bool]:
    """(alpha, beta, classical?) for the bit-like payloads."""
    if isinstance(payload, ClassicalBit):
        return math.sqrt(payload.p0), math.sqrt(1.0 - payload.p0), True
    if isinstance(payload, QuantumQubit):
        return payload.alpha, payload.beta, False
    if isinstance(payload, AmplitudeParam):
        return math.cos(payload.theta), math.sin(payload.theta), False
    raise ValueError(f"payload {payload!r} has no logical amplitudes")


def squeeze_amplitudes(n_excitations: int, r: float, p_max: int) -> np.ndarray:
    """Coefficients c_p of the two-mode squeezed |N>-excitation state.

    c_p = tanh^p(r) / cosh^{N+1}(r) * sqrt(binom(p+N, p)), attached to
    |N+p> on the receiver mode and |p> on the partner mode.  Computed in log
    space so large N and p stay finite.
    """
    if n_excitations < 0:
        raise ValueError("excitation count must be >= 0")
    if r < 0.0:
        raise ValueError("r must be >= 0")
    p = np.arange(p_max + 1)
    if r == 0.0:
        out = np.zeros(p_max + 1)
        out[0] = 1.0
        return out
    ln_t, ln_c = math.log(math.tanh(r)), math.log(math.cosh(r))
    from scipy.special import gammaln

    ln_binom = gammaln(p + n_excitations + 1) - gammaln(p + 1) - gammaln(n_excitations + 1)
    return np.exp(0.5 * ln_binom + p * ln_t - (n_excitations + 1) * ln_c)


def squeeze_fock(n_excitations: int, r: float, cutoff: int) -> PureState:
    """Field state over (R, Rbar) after squeezing an N-excitation input."""
    if cutoff <= n_excitations:
        raise ValueError(f"cutoff {cutoff} must exceed the excitation count {n_excitations}")
    coeff = squeeze_amplitudes(n_excitations, r, cutoff - 1 - n_excitations)
    amps = np.zeros((cutoff, cutoff), dtype=complex)
    amps[n_excitations + np.arange(coeff.size), np.arange(coeff.size)] = coeff
    modes = (ModeLabel("R", cutoff), ModeLabel("Rbar", cutoff))
    return PureState(modes, amps.reshape(-1))


def transform_matrix_element(ket: int, bra: int, r: float, cutoff: int) -> np.ndarray:
    """Receiver-side image of |ket><bra| (ket, bra in {0, 1}) once the
    partner wedge is traced out.

    Only these four images occur for single-excitation payloads:
      |0><0| -> sum tanh^{2n}/cosh^2 |n><n|
      |0><1| -> sum sqrt(n+1) tanh^{2n}/cosh^3 |n><n+1|
      |1><0| -> adjoint of the above
      |1><1| -> sum (n+1) tanh^{2n}/cosh^4 |n+1><n+1|
    """
    if ket not in (0, 1) or bra not in (0, 1):
        raise ValueError("ket and bra must be 0 or 1")
    if cutoff < 2:
        raise ValueError("cutoff must be >= 2")
    t2 = math.tanh(r) ** 2
    c = math.cosh(r)
    n = np.arange(cutoff)
    tpow = t2**n
    out = np.zeros((cutoff, cutoff), dtype=complex)
    if ket == 0 and bra == 0:
        out[n, n] = tpow / c**2
    elif ket == 1 and bra == 1:
        m = n[:-1]
        out[m + 1, m + 1] = (m + 1) * tpow[:-1] / c**4
    else:
        m = n[:-1]
        vals = np.sqrt(m + 1) * tpow[:-1] / c**3
        if ket == 0:  # |0><1|
            out[m, m + 1] = vals
        else:  # |1><0|
            out[m + 1, m] = vals
    return out


def received_logical_diag(rail: str, x: int, r: float, cutoff: int) -> np.ndarray:
    """Diagonal of the state Rob receives for a pure logical ``x`` under the
    single-wedge mapping (these states are diagonal in the Fock basis).

    Single rail returns a length-``cutoff`` vector; dual rail the flattened
    (cutoff x cutoff) grid over (rail0, rail1).
    """
    if x not in (0, 1):
        raise ValueError("logical value must be 0 or 1")
    vac = np.real(np.diag(transform_matrix_element(0, 0, r, cutoff)))
    exc = np.real(np.diag(transform_matrix_element(1, 1, r, cutoff)))
    if rail == "single":
        return exc if x else vac
    if rail == "dual":
        first, second = (exc, vac) if x == 0 else (vac, exc)
        return np.outer(first, second).reshape(-1)
    raise ValueError("rail must be 'single' or 'dual'")


# ---------------------------------------------------------------------------
# tripartite construction (general wedge weights)
# ---------------------------------------------------------------------------


def _single_components(r: float, q_r: complex, q_l: complex, cutoff: int) -> tuple[PureState, PureState]:
    """Transported logical states over (A, R, Rbar), single rail.

    psi (logical 0):  sum_n tanh^n/cosh |0, n, n>
    phi (logical 1):  sum_n sqrt(n+1) tanh^n/cosh^2
                        (q_l |1, n, n+1> + q_r |1, n+1, n>)
    """
    k = cutoff
    t, c = math.tanh(r), math.cosh(r)
    n = np.arange(k)
    e = t**n / c
    d = np.sqrt(n[:-1] + 1) * t ** n[:-1] / c**2

    psi = np.zeros((2, k, k), dtype=complex)
    psi[0, n, n] = e

    phi = np.zeros((2, k, k), dtype=complex)
    m = n[:-1]
    phi[1, m, m + 1] += q_l * d
    phi[1, m + 1, m] += q_r * d

    modes = (ModeLabel("A", 2), ModeLabel("R", k), ModeLabel("Rbar", k))
    return PureState(modes, psi.reshape(-1)), PureState(modes, phi.reshape(-1))


def _dual_components(r: float, q_r: complex, q_l: complex, cutoff: int) -> tuple[PureState, PureState]:
    """Transported logical states over (A, R0, R1, Rbar0, Rbar1), dual rail.

    The excited rail carries the sqrt(n+1)/cosh^2 single-excitation
    amplitudes split across the wedges; the idle rail carries the squeezed
    vacuum, so each component has overall 1/cosh^3 normalization.
    """
    k = cutoff
    if k**4 > 8_000_000:
        raise ValueError(f"dual-rail tripartite amplitudes at cutoff {k} are too large")
    t, c = math.tanh(r), math.cosh(r)
    n = np.arange(k)
    e = t**n / c
    d = np.sqrt(n[:-1] + 1) * t ** n[:-1] / c**2
    m = n[:-1]

    # rail-local amplitude matrices over (mode, partner)
    vac = np.zeros((k, k), dtype=complex)
    vac[n, n] = e
    exc = np.zeros((k, k), dtype=complex)
    exc[m, m + 1] += q_l * d
    exc[m + 1, m] += q_r * d

    psi = np.zeros((2, k, k, k, k), dtype=complex)
    phi = np.zeros((2, k, k, k, k), dtype=complex)
    # indices: (A, R0, R1, Rbar0, Rbar1); rail 0 pairs with Rbar0, rail 1 with Rbar1
    psi[0] = np.einsum("ab,cd->acbd", exc, vac)
    phi[1] = np.einsum("ab,cd->acbd", vac, exc)

    modes = (
        ModeLabel("A", 2),
        ModeLabel("R0", k),
        ModeLabel("R1", k),
        ModeLabel("Rbar0", k),
        ModeLabel("Rbar1", k),
    )
    return PureState(modes, psi.reshape(-1)), PureState(modes, phi.reshape(-1))


def tripartite_components(rail: str, r: float, q_r: complex, q_l: complex, cutoff: int) -> tuple[PureState, PureState]:
    """Transported logical-0 and logical-1 field states including AntiRob."""
    if rail == "single":
        return _single_components(r, q_r, q_l, cutoff)
    if rail == "dual":
        return _dual_components(r, q_r, q_l, cutoff)
    raise ValueError("rail must be 'single' or 'dual'")


def _mixture_density(
    components: Iterable[tuple[float, PureState]], modes: tuple[ModeLabel, ...]
) -> DensityMatrix:
    dim = int(np.prod([m.cutoff for m in modes]))
    if dim > MAX_DENSE_DIM:
        raise ValueError(f"dense state of dimension {dim} exceeds the limit {MAX_DENSE_DIM}")
    out = np.zeros((dim, dim), dtype=complex)
    for weight, state in components:
        if weight:
            out += weight * np.outer(state.amplitudes, state.amplitudes.conj())
    return DensityMatrix(modes, out)


def _mixture_reduced(
    components: Iterable[tuple[float, PureState]], keep: list[str]
) -> DensityMatrix:
    parts = [(w, s.reduced_density(keep)) for w, s in components if w]
    modes = parts[0][1].modes
    total = sum(w * dm.entries for w, dm in parts)
    return DensityMatrix(modes, total)


# ---------------------------------------------------------------------------
# bipartite single-wedge fast path (closed-form matrix elements)
# ---------------------------------------------------------------------------


def swm_bipartite_weighted(
    rail: str, weights: dict[tuple[int, int], complex], r: float, cutoff: int
) -> DensityMatrix:
    """Assemble sum_{p,q} weights[p,q] |p><q|_A (x) image(|p><q|) directly
    from the closed-form matrix elements (single-wedge mapping).

    The assembly is linear in the logical weights, so it also serves to build
    analytic theta-derivatives of parametrized states.
    """
    k = cutoff
    images = {(p, q): transform_matrix_element(p, q, r, k) for p in (0, 1) for q in (0, 1)}
    if rail == "single":
        out = np.zeros((2 * k, 2 * k), dtype=complex)
        for (p, q), w in weights.items():
            if w:
                out[p * k : (p + 1) * k, q * k : (q + 1) * k] = w * images[(p, q)]
        return DensityMatrix((ModeLabel("A", 2), ModeLabel("R", k)), out)
    if rail == "dual":
        dim = 2 * k * k
        if dim > MAX_DENSE_DIM:
            raise ValueError(f"dual-rail state of dimension {dim} exceeds the dense limit")
        out = np.zeros((dim, dim), dtype=complex)
        kk = k * k
        for (p, q), w in weights.items():
            if w:
                # logical x excites rail x, so rail 0 sees |1-p><1-q| and rail 1 |p><q|
                block = np.kron(images[(1 - p, 1 - q)], images[(p, q)])
                out[p * kk : (p + 1) * kk, q * kk : (q + 1) * kk] = w * block
        return DensityMatrix((ModeLabel("A", 2), ModeLabel("R0", k), ModeLabel("R1", k)), out)
    raise ValueError("rail must be 'single' or 'dual'")


def _swm_bipartite(rail: str, alpha: complex, beta: complex, classical: bool, r: float, cutoff: int) -> DensityMatrix:
    weights = {
        (0, 0): abs(alpha) ** 2,
        (1, 1): abs(beta) ** 2,
        (0, 1): 0.0 if classical else alpha * np.conj(beta),
        (1, 0): 0.0 if classical else np.conj(alpha) * beta,
    }
    return swm_bipartite_weighted(rail, weights, r, cutoff)


def build_channel_state(params: ChannelParams, enc: Encoding, keep_antirob: bool = False, renormalize: bool = False) -> DensityMatrix:
    """Field state shared by the communicating parties after transport.

    With ``keep_antirob`` the counter-accelerated partner's modes stay in the
    output; otherwise they are traced out.  For phase payloads (`Noon`) the
    sender keeps no subsystem, so the output covers the receiver rails only.
    The single-wedge fast path (q_r = 1, AntiRob traced out) assembles the
    closed-form matrix elements directly.
    """
    if isinstance(enc.payload, Noon):
        if not params.single_wedge:
            raise ValueError("phase payloads are only defined under the single-wedge mapping")
        rho = noon_received_state(enc.payload.n, enc.rail, params.r, enc.payload.theta, params.cutoff, keep_antirob)
        return rho.renormalized() if renormalize else rho

    alpha, beta, classical = _logical_amplitudes(enc.payload)

    if params.single_wedge and not keep_antirob:
        rho = _swm_bipartite(enc.rail, alpha, beta, classical, params.r, params.cutoff)
        return rho.renormalized() if renormalize else rho

    psi, phi = tripartite_components(enc.rail, params.r, params.q_r, params.q_l, params.cutoff)
    if classical:
        components = [(abs(alpha) ** 2, psi), (abs(beta) ** 2, phi)]
    else:
        mixed = PureState(psi.modes, alpha * psi.amplitudes + beta * phi.amplitudes)
        components = [(1.0, mixed)]

    if keep_antirob:
        rho = _mixture_density(components, psi.modes)
    else:
        keep = [m.name for m in psi.modes if not m.name.startswith("Rbar")]
        rho = _mixture_reduced(components, keep)
    return rho.renormalized() if renormalize else rho


# ---------------------------------------------------------------------------
# phase (NOON) payloads
# ---------------------------------------------------------------------------


def noon_received_state(n_excitations: int, rail: str, r: float, theta: float, cutoff: int, keep_antirob: bool = False) -> DensityMatrix:
    """Receiver state for the phase payload, single-wedge mapping.

    Each Fock component is squeezed independently and the partner modes are
    traced out (kept when ``keep_antirob``).
    """
    n = n_excitations
    if cutoff <= n:
        raise ValueError(f"cutoff {cutoff} must exceed the excitation count {n}")
    k = cutoff
    phase = np.exp(1j * n * theta)
    a = squeeze_amplitudes(0, r, k - 1)
    b = squeeze_amplitudes(n, r, k - 1 - n)

    if rail == "single":
        # branch amplitudes over (R, Rbar)
        up = np.zeros((k, k), dtype=complex)
        up[np.arange(a.size), np.arange(a.size)] = a
        dn = np.zeros((k, k), dtype=complex)
        dn[n + np.arange(b.size), np.arange(b.size)] = b
        vec = (up + phase * dn).reshape(-1) / math.sqrt(2.0)
        modes = (ModeLabel("R", k), ModeLabel("Rbar", k))
        state = PureState(modes, vec)
        if keep_antirob:
            return state.density_matrix()
        return state.reduced_density(["R"])

    if rail == "dual":
        if k**4 > 8_000_000:
            raise ValueError(f"dual-rail phase state at cutoff {k} is too large")
        up_r = np.zeros((k, k), dtype=complex)
        up_r[n + np.arange(b.size), np.arange(b.size)] = b
        vac_r = np.zeros((k, k), dtype=complex)
        vac_r[np.arange(a.size), np.arange(a.size)] = a
        # (R0, R1, Rbar0, Rbar1): branch 1 = |N> on rail0, branch 2 = |N> on rail1
        branch1 = np.einsum("ab,cd->acbd", up_r, vac_r)
        branch2 = np.einsum("ab,cd->acbd", vac_r, up_r)
        vec = (branch1 + phase * branch2).reshape(-1) / math.sqrt(2.0)
        modes = (
            ModeLabel("R0", k),
            ModeLabel("R1", k),
            ModeLabel("Rbar0", k),
            ModeLabel("Rbar1", k),
        )
        state = PureState(modes, vec)
        if keep_antirob:
            return state.density_matrix()
        return state.reduced_density(["R0", "R1"])

    raise ValueError("rail must be 'single' or 'dual'")


# ---------------------------------------------------------------------------
# spectra helpers (numeric eigenvalues at cutoffs where dense assembly of the
# full matrix is out of reach; the states are block diagonal by construction)
# ---------------------------------------------------------------------------


def swm_spectra(rail: str, payload: str, r: float, alpha2: float, cutoff: int) -> dict[str, np.ndarray]:
    """Eigenvalue spectra of the single-wedge bipartite state and its
    reductions: keys 'ar', 'r', 'a'.

    The joint state is block diagonal over the receiver's noise indices with
    2x2 blocks tying Alice's logical components together; quantum payloads
    diagonalize the blocks numerically (batched), classical payloads are
    already diagonal.
    """
    if payload not in ("classical", "quantum"):
        raise ValueError("payload must be 'classical' or 'quantum'")
    if not 0.0 <= alpha2 <= 1.0:
        raise ValueError("alpha2 must be a probability")
    k = cutoff
    a2, b2 = alpha2, 1.0 - alpha2
    ab = math.sqrt(a2 * b2)
    vac = received_logical_diag("single", 0, r, k)  # tanh^{2n}/cosh^2
    exc = received_logical_diag("single", 1, r, k)  # (n)tanh^{2(n-1)}/cosh^4 at |n>

    spec_a = np.array([a2, b2])

    if rail == "single":
        spec_r = a2 * vac + b2 * exc
        if payload == "classical":
            spec_ar = np.concatenate([a2 * vac, b2 * exc])
        else:
            # blocks over n: {|0, n>, |1, n+1>}, plus the unpaired |0, k-1>
            blocks = np.zeros((k - 1, 2, 2))
            cross = np.sqrt((np.arange(k - 1) + 1.0)) * (math.tanh(r) ** 2) ** np.arange(k - 1) / math.cosh(r) ** 3
            blocks[:, 0, 0] = a2 * vac[:-1]
            blocks[:, 1, 1] = b2 * exc[1:]
            blocks[:, 0, 1] = blocks[:, 1, 0] = ab * cross
            spec_ar = np.concatenate([np.linalg.eigvalsh(blocks).reshape(-1), [a2 * vac[-1]]])
        return {"ar": spec_ar, "r": spec_r, "a": spec_a}

    if rail == "dual":
        # receiver grid over (rail0, rail1)
        d0 = np.outer(exc, vac)  # logical 0 weights
        d1 = np.outer(vac, exc)  # logical 1 weights
        spec_r = (a2 * d0 + b2 * d1).reshape(-1)
        if payload == "classical":
            spec_ar = np.concatenate([a2 * d0.reshape(-1), b2 * d1.reshape(-1)])
        else:
            # blocks over (n, m): {|0, n+1, m>, |1, n, m+1>}
            t2 = math.tanh(r) ** 2
            c6 = math.cosh(r) ** 6
            n = np.arange(k - 1)
            w = t2**n
            base = np.multiply.outer(w, w) / c6
            nn = (n + 1.0)[:, None]
            mm = (n + 1.0)[None, :]
            blocks = np.zeros((k - 1, k - 1, 2, 2))
            blocks[..., 0, 0] = a2 * nn * base
            blocks[..., 1, 1] = b2 * mm * base
            blocks[..., 0, 1] = blocks[..., 1, 0] = ab * np.sqrt(nn * mm) * base
            paired = np.linalg.eigvalsh(blocks).reshape(-1)
            # truncation edges carry only one logical component
            edge0 = a2 * d0[1:, k - 1]
            edge1 = b2 * d1[k - 1, 1:]
            spec_ar = np.concatenate([paired, edge0, edge1])
        return {"ar": spec_ar, "r": spec_r, "a": spec_a}

    raise ValueError("rail must be 'single' or 'dual'")


def banded_step2_spectrum(diag: np.ndarray, off2: np.ndarray) -> np.ndarray:
    """Eigenvalues of a hermitian matrix with entries on the diagonal and at
    offsets +-2 only (the phases of the off-diagonals do not affect them):
    the even and odd index chains are independent tridiagonal problems."""
    from scipy.linalg import eigh_tridiagonal

    spectra = []
    for parity in (0, 1):
        dsub = diag[parity::2]
        osub = off2[parity::2][: dsub.size - 1] if off2.size else np.zeros(0)
        if dsub.size == 1:
            spectra.append(dsub)
        else:
            spectra.append(eigh_tridiagonal(dsub, osub, eigvals_only=True, lapack_driver="stev"))
    return np.concatenate(spectra)


def wedge_single_classical_ingredients(
    r: float, q_r: complex, q_l: complex, cutoff: int
) -> dict[str, np.ndarray]:
    """Building blocks of the classical single-rail reductions at general
    wedge weights, without the logical weights applied.

    'e2' is the diagonal of the transported vacuum image; 'diag_rob'/'off_rob'
    describe the banded (step-2 coupling) image of the transported excitation
    on Rob's side once AntiRob is traced out, and '*_anti' the mirror image.
    """
    k = cutoff
    t, c = math.tanh(r), math.cosh(r)
    n = np.arange(k)
    e2 = (t**n / c) ** 2
    d = np.sqrt(n[:-1] + 1) * t ** n[:-1] / c**2
    d2 = d * d
    coupling = float(np.abs(np.conj(q_l) * q_r))
    off = coupling * d[:-1] * d[1:] if k > 2 else np.zeros(0)
    qr2, ql2 = abs(q_r) ** 2, abs(q_l) ** 2

    def excited_image(w_keep: float, w_other: float) -> np.ndarray:
        diag = np.zeros(k)
        diag[:-1] += w_other * d2
        diag[1:] += w_keep * d2
        return diag

    return {
        "e2": e2,
        "diag_rob": excited_image(qr2, ql2),
        "off_rob": off,
        "diag_anti": excited_image(ql2, qr2),
        "off_anti": off,
    }


def wedge_single_classical_spectra(
    r: float, alpha2: float, q_r: complex, q_l: complex, cutoff: int
) -> dict[str, np.ndarray]:
    """Spectra for the classical single-rail state at general wedge weights,
    for both receivers: keys 'ar', 'r', 'arbar', 'rbar', 'a'.

    Tracing the partner wedge from the transported logical-1 state leaves a
    matrix coupling Fock indices two apart, so each reduction splits into two
    real symmetric tridiagonal problems (even/odd indices) solved numerically.
    """
    a2, b2 = alpha2, 1.0 - alpha2
    ing = wedge_single_classical_ingredients(r, q_r, q_l, cutoff)
    e2 = ing["e2"]

    out: dict[str, np.ndarray] = {"a": np.array([a2, b2])}
    # joint with Rob: Alice-0 block diagonal, Alice-1 block banded
    out["ar"] = np.concatenate(
        [a2 * e2, b2 * banded_step2_spectrum(ing["diag_rob"], ing["off_rob"])]
    )
    out["r"] = banded_step2_spectrum(a2 * e2 + b2 * ing["diag_rob"], b2 * ing["off_rob"])
    out["arbar"] = np.concatenate(
        [a2 * e2, b2 * banded_step2_spectrum(ing["diag_anti"], ing["off_anti"])]
    )
    out["rbar"] = banded_step2_spectrum(a2 * e2 + b2 * ing["diag_anti"], b2 * ing["off_anti"])
    return out


# ---------------------------------------------------------------------------
# general Bogoliubov vacuum
# ---------------------------------------------------------------------------


def bogoliubov_vacuum_coefficients(alpha: complex, beta: complex, p_max: int) -> np.ndarray:
    """Fock coefficients of the transformed vacuum for a mode mixing
    b = alpha* a + beta* a^dag.

    Annihilating the transformed vacuum forces v_1 = 0 and the recursion
    v_{p+2} = -(beta*/alpha*) sqrt(p+1)/sqrt(p+2) v_p, so only even
    occupation numbers appear; v_0 is fixed by unit norm over the returned
    range.  beta = 0 returns the unchanged vacuum.
    """
    if alpha == 0:
        raise ValueError("alpha must be nonzero")
    if p_max < 0:
        raise ValueError("p_max must be >= 0")
    v = np.zeros(p_max + 1, dtype=complex)
    v[0] = 1.0
    ratio = -np.conj(beta) / np.conj(alpha)
    for p in range(0, p_max - 1, 2):
        v[p + 2] = ratio * math.sqrt(p + 1) / math.sqrt(p + 2) * v[p]
    return v / np.linalg.norm(v)
