"""Figure rendering for the standard reproduction sweeps.

Each figure has a data builder (producing the table that also lands next to
the image as CSV) and a plot function.  `render` writes `<name>.csv` and
`<name>.png` into the output directory.  The fast grids keep a full render
under a few minutes; `--full` uses finer axes.
"""

from __future__ import annotations

import math
import os

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402 - backend must be fixed first
import numpy as np  # noqa: E402

from . import estimation, infotheory, optimize  # noqa: E402

plt.rcParams.update({
    "figure.figsize": (6.4, 4.2),
    "figure.dpi": 130,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "font.size": 10,
    "lines.linewidth": 1.4,
})


def _grid(start: float, stop: float, step: float) -> list[float]:
    n = int(round((stop - start) / step))
    return [round(start + i * step, 10) for i in range(n + 1)]


def _fmt(v) -> str:
    if isinstance(v, float):
        return f"{v:.12g}"
    return str(v)


def _write_csv(path: str, figure: str, columns: list[str], rows: list[list]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"# figure: {figure}\n")
        fh.write(",".join(columns) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")


# ---------------------------------------------------------------------------
# figure builders: each returns (columns, rows, plotter)
# ---------------------------------------------------------------------------


def _fig_fidelity(fast: bool):
    rs = _grid(0.05, 3.0, 0.05 if fast else 0.02)
    rows = [
        [r, infotheory.closed_form("fidelity_single", r), infotheory.closed_form("fidelity_dual", r)]
        for r in rs
    ]

    def plot(ax):
        data = np.array(rows)
        ax.plot(data[:, 0], data[:, 1], label="single rail")
        ax.plot(data[:, 0], data[:, 2], label="dual rail")
        ax.set_xlabel("squeezing r")
        ax.set_ylabel("fidelity of received 0 vs 1")
        ax.legend()

    return ["r", "fidelity_single", "fidelity_dual"], rows, plot


def _fig_holevo(fast: bool):
    rs = _grid(0.0, 3.0, 0.05 if fast else 0.02)
    rows = [
        [r,
         infotheory.closed_form("holevo_single_classical", r, 0.5),
         infotheory.closed_form("holevo_dual_classical", r)]
        for r in rs
    ]

    def plot(ax):
        data = np.array(rows)
        ax.plot(data[:, 0], data[:, 1], label="single rail")
        ax.plot(data[:, 0], data[:, 2], label="dual rail")
        ax.set_xlabel("squeezing r")
        ax.set_ylabel("Holevo information [bits]")
        ax.legend()

    return ["r", "holevo_single_bits", "holevo_dual_bits"], rows, plot


def _fig_conditional(fast: bool):
    rs = _grid(0.0, 3.0, 0.05 if fast else 0.02)
    rows = [
        [r,
         infotheory.closed_form("cond_entropy_single_quantum", r, 0.5),
         infotheory.closed_form("cond_entropy_dual_quantum", r)]
        for r in rs
    ]

    def plot(ax):
        data = np.array(rows)
        ax.plot(data[:, 0], data[:, 1], label="single rail")
        ax.plot(data[:, 0], data[:, 2], label="dual rail")
        ax.set_xlabel("squeezing r")
        ax.set_ylabel("conditional entropy [bits]")
        ax.legend()

    return ["r", "cond_entropy_single_bits", "cond_entropy_dual_bits"], rows, plot


def _fig_capacities(fast: bool):
    rs = _grid(0.0, 3.0, 0.05 if fast else 0.02)
    rows = []
    for r in rs:
        rows.append([
            r,
            infotheory.closed_form("holevo_single_classical", r, 0.5),
            infotheory.closed_form("holevo_dual_classical", r),
            max(0.0, -infotheory.closed_form("cond_entropy_single_quantum", r, 0.5)),
            max(0.0, -infotheory.closed_form("cond_entropy_dual_quantum", r)),
        ])

    def plot(ax):
        data = np.array(rows)
        labels = ["classical single", "classical dual", "quantum single", "quantum dual"]
        for i, lab in enumerate(labels, start=1):
            ax.plot(data[:, 0], data[:, i], label=lab)
        ax.set_xlabel("squeezing r")
        ax.set_ylabel("restricted capacity [bits]")
        ax.legend()

    return ["r", "classical_single", "classical_dual", "quantum_single", "quantum_dual"], rows, plot


def _fig_fisher_theta(fast: bool):
    thetas = _grid(0.06, math.pi - 0.06, 0.04 if fast else 0.02)
    r_values = [0.001, 0.5, 0.8, 1.2, 1.9, 2.8]
    rows = []
    for theta in thetas:
        row = [theta]
        for r in r_values:
            k = optimize.cutoff_guess(r, tail=1e-9)
            row.append(estimation.amplitude_setup_qfi_numeric("single_rob", r, theta, k))
        rows.append(row)

    def plot(ax):
        data = np.array(rows)
        for i, r in enumerate(r_values, start=1):
            ax.plot(data[:, 0], data[:, i], label=f"r={r}")
        ax.set_xlabel("theta")
        ax.set_ylabel("Fisher information")
        ax.legend(ncol=2)

    return ["theta"] + [f"fisher_r{r}" for r in r_values], rows, plot


def _fig_fisher_r(fast: bool):
    rs = _grid(0.05, 2.5, 0.05 if fast else 0.02)
    rows = []
    for r in rs:
        k = optimize.cutoff_guess(r, tail=1e-9)
        rows.append([
            r,
            estimation.amplitude_setup_qfi_numeric("single_rob", r, math.pi / 4, k),
            estimation.amplitude_setup_qfi_numeric("dual_rob", r, 0.65, k),
        ])

    def plot(ax):
        data = np.array(rows)
        ax.plot(data[:, 0], data[:, 1], label="single rail (theta=pi/4)")
        ax.plot(data[:, 0], data[:, 2], label="dual rail (theta=0.65)")
        ax.set_xlabel("squeezing r")
        ax.set_ylabel("Fisher information")
        ax.legend()

    return ["r", "fisher_single_rob", "fisher_dual_rob"], rows, plot


def _fig_noon_n(fast: bool):
    ns = list(range(1, 16 if fast else 22))
    r_values = [0.3, 0.6, 1.0]
    rows = []
    for n in ns:
        row = [n]
        for r in r_values:
            row.append(estimation.noon_qfi(n, "single", r).value)
        rows.append(row)

    def plot(ax):
        data = np.array(rows)
        for i, r in enumerate(r_values, start=1):
            ax.plot(data[:, 0], data[:, i], marker="o", ms=3, label=f"r={r}")
        ax.set_xlabel("excitation count N")
        ax.set_ylabel("Fisher information")
        ax.legend()

    return ["n"] + [f"fisher_r{r}" for r in r_values], rows, plot


def _fig_noon_r(fast: bool):
    rs = _grid(0.05, 1.5, 0.1 if fast else 0.05)
    n_values = [1, 2, 3, 5]
    rows = []
    for r in rs:
        row = [r]
        for n in n_values:
            row.append(estimation.noon_qfi(n, "single", r).value)
        rows.append(row)

    def plot(ax):
        data = np.array(rows)
        for i, n in enumerate(n_values, start=1):
            ax.plot(data[:, 0], data[:, i], label=f"N={n}")
        ax.set_xlabel("squeezing r")
        ax.set_ylabel("Fisher information")
        ax.legend()

    return ["r"] + [f"fisher_n{n}" for n in n_values], rows, plot


def _fig_wedge_holevo(fast: bool):
    rs = _grid(0.0, 2.0, 0.1 if fast else 0.05)
    q_values = [1.0, 0.9, 1.0 / math.sqrt(2.0), 0.4, 0.0]
    rows = []
    for r in rs:
        k = optimize.cutoff_guess(r, tail=1e-8)
        row = [r]
        for q in q_values:
            row.append(infotheory.wedge_holevo_single_classical(r, 0.5, q, k, "rob"))
        rows.append(row)

    def plot(ax):
        data = np.array(rows)
        for i, q in enumerate(q_values, start=1):
            ax.plot(data[:, 0], data[:, i], label=f"q_R={q:.3g}")
        ax.set_xlabel("squeezing r")
        ax.set_ylabel("Holevo information to Rob [bits]")
        ax.legend(ncol=2)

    return ["r"] + [f"holevo_qr{q:.3g}" for q in q_values], rows, plot


def _fig_wedge_coherent(fast: bool):
    qs = _grid(0.0, 1.0, 0.05 if fast else 0.02)
    r_values = [0.5, 1.0, 1.5]
    rows = []
    for q in qs:
        row = [q]
        for r in r_values:
            k = optimize.cutoff_guess(r, tail=1e-8)
            rep = infotheory.wedge_quantum_report("single", r, 0.5, q, k)
            row.extend([rep["coherent_rob"], rep["coherent_antirob"]])
        rows.append(row)

    def plot(ax):
        data = np.array(rows)
        for i, r in enumerate(r_values):
            ax.plot(data[:, 0], data[:, 1 + 2 * i], label=f"to Rob, r={r}")
            ax.plot(data[:, 0], data[:, 2 + 2 * i], "--", label=f"to AntiRob, r={r}")
        ax.set_xlabel("wedge weight q_R")
        ax.set_ylabel("coherent information [bits]")
        ax.legend(fontsize=7, ncol=2)

    columns = ["q_r"]
    for r in r_values:
        columns += [f"coherent_rob_r{r}", f"coherent_antirob_r{r}"]
    return columns, rows, plot


def _fig_optimal_capacity(fast: bool):
    rs = _grid(0.25, 2.0 if fast else 3.0, 0.25)
    rows = []
    for r in rs:
        a2, qr, val = optimize.optimize_capacity_2d(r)
        rows.append([r, a2, qr, val])

    def plot(ax):
        data = np.array(rows)
        ax.plot(data[:, 0], data[:, 3], marker="o", ms=3, label="optimal Holevo [bits]")
        ax.plot(data[:, 0], data[:, 1], ":", label="alpha^2 at optimum")
        ax.plot(data[:, 0], data[:, 2], "--", label="q_R at optimum")
        ax.set_xlabel("squeezing r")
        ax.legend()

    return ["r", "alpha2_opt", "q_r_opt", "holevo_bits"], rows, plot


FIGURES = {
    "fidelity-vs-r": _fig_fidelity,
    "holevo-vs-r-classical": _fig_holevo,
    "conditional-entropy-vs-r-quantum": _fig_conditional,
    "capacities-vs-r": _fig_capacities,
    "fisher-amplitude-vs-theta-single": _fig_fisher_theta,
    "fisher-amplitude-vs-r": _fig_fisher_r,
    "noon-fisher-vs-n-single": _fig_noon_n,
    "noon-fisher-vs-r-single": _fig_noon_r,
    "wedge-holevo-vs-r-single": _fig_wedge_holevo,
    "wedge-coherent-vs-qr-single": _fig_wedge_coherent,
    "optimal-capacity-vs-r": _fig_optimal_capacity,
}


def render(name: str, out_dir: str, fast: bool = True) -> tuple[str, str]:
    """Build one figure's data, write CSV and PNG, return their paths."""
    builder = FIGURES[name]
    columns, rows, plot = builder(fast)
    os.makedirs(out_dir, exist_ok=True)
    csv_path = os.path.join(out_dir, f"{name}.csv")
    png_path = os.path.join(out_dir, f"{name}.png")
    _write_csv(csv_path, name, columns, rows)
    fig, ax = plt.subplots()
    plot(ax)
    ax.set_title(name)
    fig.tight_layout()
    fig.savefig(png_path)
    plt.close(fig)
    return csv_path, png_path
