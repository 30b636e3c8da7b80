"""Fast self-check suites for the `verify` CLI command.

Each suite re-derives a handful of identities the library is supposed to
satisfy and reports pass/fail; the CLI exits nonzero if anything fails.
"""

from __future__ import annotations

import math
from typing import Callable

import numpy as np

from . import channel, estimation, infotheory, numerics, optimize
from .fock import DensityMatrix, ModeLabel, partial_trace, tensor_product

Suite = tuple[str, Callable[[], None]]


def _series_identities() -> None:
    res = numerics.sum_series(lambda k: 0.5**k)
    assert res.converged and abs(res.value - 2.0) < 1e-9
    assert abs(numerics.polylog(1.0, 0.5) - math.log(2.0)) < 1e-9
    z, s, a = 0.4, 1.5, 1.0
    assert abs(numerics.lerch_phi(z, s, a) - numerics.polylog(s, z) / z) < 1e-9
    assert abs(numerics.hypergeometric_pfq([1.0, 1.0], [2.0], 0.5) - 2.0 * math.log(2.0)) < 1e-9
    r = numerics.squeezing_from_acceleration(1.0, math.pi)
    assert abs(math.tanh(r) - math.exp(-1.0)) < 1e-12


def _fock_algebra() -> None:
    rng = np.random.default_rng(7)
    m = rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6))
    rho = m @ m.conj().T
    rho /= np.trace(rho).real
    dm = DensityMatrix((ModeLabel("A", 2), ModeLabel("R", 3)), rho)
    left = partial_trace(partial_trace(dm, ["A"]), ["R"]).entries[0, 0].real
    assert abs(left - 1.0) < 1e-12
    a = DensityMatrix((ModeLabel("A", 2),), np.diag([0.25, 0.75]))
    b = DensityMatrix((ModeLabel("R", 2),), np.diag([0.5, 0.5]))
    ab = tensor_product(a, b)
    assert abs(ab.trace() - a.trace() * b.trace()) < 1e-12
    back = partial_trace(ab, ["R"])
    assert np.abs(back.entries - a.entries).max() < 1e-12


def _channel_consistency() -> None:
    params = channel.ChannelParams(r=0.8, cutoff=20)
    enc = channel.Encoding("single", channel.QuantumQubit(0.6, 0.8))
    fast = channel.build_channel_state(params, enc)
    trip = channel.build_channel_state(params, enc, keep_antirob=True)
    diff = np.abs(fast.entries - partial_trace(trip, ["Rbar"]).entries).max()
    assert diff < 1e-10
    state = channel.squeeze_fock(0, 1.0, 60)
    assert abs(state.norm() - 1.0) < 1e-10
    v = channel.bogoliubov_vacuum_coefficients(math.cosh(0.9), math.sinh(0.9), 14)
    assert np.abs(v[1::2]).max() == 0.0


def _entropy_identities() -> None:
    report = infotheory.entropy_report(
        channel.build_channel_state(
            channel.ChannelParams(r=0.9, cutoff=30),
            channel.Encoding("single", channel.ClassicalBit(0.5)),
        ),
        (["A"], ["R"]),
    )
    assert abs(report.mutual - (report.s_a + report.s_b - report.s_ab)) < 1e-12
    assert abs(report.coherent_a_to_b + report.conditional_a_given_b) < 1e-12
    assert report.conditional_a_given_b >= -1e-10  # classical payload
    # Holevo equals the ensemble form S(rho_R) - sum p_x S(rho_{R,x});
    # both logical images are diagonal in the Fock basis
    s0 = channel.received_logical_diag("single", 0, 0.9, 30)
    s1 = channel.received_logical_diag("single", 1, 0.9, 30)
    mix = 0.5 * (s0 + s1)
    holevo = infotheory.entropy_bits(mix) - 0.5 * infotheory.entropy_bits(s0) - 0.5 * infotheory.entropy_bits(s1)
    assert abs(holevo - report.mutual) < 1e-6


def _closed_vs_numeric() -> None:
    for quantity in infotheory.CLOSED_FORM_QUANTITIES:
        cf = infotheory.closed_form(quantity, 1.0, 0.5)
        nm = infotheory.numeric_channel_quantity(quantity, 1.0, 0.5, cutoff=45)
        assert abs(cf - nm) < 1e-3, f"{quantity}: {cf} vs {nm}"
    fd = infotheory.closed_form("fidelity_dual", 1.1)
    fs = infotheory.closed_form("fidelity_single", 1.1)
    assert abs(fd - fs**2) < 1e-12


def _fisher_joint() -> None:
    closed = estimation.qfi_closed_form_amplitude("single_joint", 1.2, 0.7)
    assert closed == 4.0
    k = optimize.cutoff_guess(1.2, tail=1e-9)
    numeric = estimation.amplitude_setup_qfi_numeric("single_joint", 1.2, 0.7, k)
    assert abs(numeric - 4.0) < 1e-3
    numeric = estimation.amplitude_setup_qfi_numeric("classical_joint", 1.2, 0.7, k)
    assert abs(numeric - 4.0) < 1e-3


def _phase_baseline() -> None:
    for n in (1, 2, 3):
        res = estimation.noon_qfi(n, "single", 1e-6)
        assert abs(res.value - n * n) < 1e-4
    dense = channel.noon_received_state(2, "single", 0.5, 0.65, 25)
    h = 1e-6
    dp = channel.noon_received_state(2, "single", 0.5, 0.65 + h, 25).entries
    dm = channel.noon_received_state(2, "single", 0.5, 0.65 - h, 25).entries
    ref, _ = estimation.qfi_from_matrices(dense.entries, (dp - dm) / (2 * h))
    blk = estimation.noon_phase_qfi_at_cutoff(2, "single", 0.5, 0.65, 25)
    assert abs(ref - blk) < 1e-6


def _wedge_symmetry() -> None:
    q_r = 0.6
    q_l = math.sqrt(1.0 - q_r**2)
    h_rob = infotheory.wedge_holevo_single_classical(1.0, 0.5, q_r, 60, "rob")
    h_anti = infotheory.wedge_holevo_single_classical(1.0, 0.5, q_l, 60, "antirob")
    assert abs(h_rob - h_anti) < 1e-10
    rep = infotheory.wedge_quantum_report("single", 1.0, 0.5, 0.8, 60)
    assert abs(rep["subadditivity_sum"]) < 1e-6
    assert min(rep["coherent_rob"], rep["coherent_antirob"]) <= 1e-6


SUITES: tuple[Suite, ...] = (
    ("series-identities", _series_identities),
    ("fock-algebra", _fock_algebra),
    ("channel-consistency", _channel_consistency),
    ("entropy-identities", _entropy_identities),
    ("closed-vs-numeric", _closed_vs_numeric),
    ("fisher-joint", _fisher_joint),
    ("phase-baseline", _phase_baseline),
    ("wedge-symmetry", _wedge_symmetry),
)


def run_suites() -> list[tuple[str, bool, str]]:
    """Run every suite; returns (name, passed, detail) triples."""
    results = []
    for name, fn in SUITES:
        try:
            fn()
            results.append((name, True, ""))
        except Exception as err:  # noqa: BLE001 - reported to the caller
            results.append((name, False, f"{type(err).__name__}: {err}"))
    return results
