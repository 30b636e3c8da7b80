"""Batch command-line front end.

Subcommands compute channel quantities over parameter grids and emit CSV or
JSON tables; `verify` runs the self-check suites and `report` renders the
standard figures next to their data files.

Exit codes: 0 success, 1 usage error, 2 numeric non-convergence (partial
output is still written, with a converged=false column), 3 self-check
failure.  Output is byte-deterministic for a fixed configuration; the
RQICHAN_THREADS environment variable only parallelizes row evaluation.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from typing import Any, Callable, Sequence

import numpy as np

from . import estimation, infotheory, optimize
from .numerics import ConvergenceConfig, ConvergenceError
from .optimize import NotConvergedError, adaptive_truncation, cutoff_guess

USAGE_ERROR, NONCONVERGENCE, INVARIANT_FAILURE = 1, 2, 3

TRUNCATION_EPS = 1e-6
TAIL_TARGET = 1e-8


class CliError(Exception):
    """Usage-level error (maps to exit code 1)."""


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # noqa: D102 - argparse hook
        raise CliError(message)


def parse_grid(spec: str, integer: bool = False) -> list[float]:
    """Parse 'start:stop:step' (inclusive within half a step) or a single value."""
    try:
        if ":" in spec:
            start_s, stop_s, step_s = spec.split(":")
            start, stop, step = float(start_s), float(stop_s), float(step_s)
            if step <= 0:
                raise ValueError("step must be positive")
            count = int(math.floor((stop - start) / step + 0.5))
            values = [start + i * step for i in range(count + 1)]
            values = [v for v in values if v <= stop + 0.5 * step]
        else:
            values = [float(spec)]
    except ValueError as err:
        raise CliError(f"bad grid spec {spec!r}: {err}") from err
    values = [round(v, 12) for v in values]
    if integer:
        out = []
        for v in values:
            if abs(v - round(v)) > 1e-9:
                raise CliError(f"grid {spec!r} must contain integers")
            out.append(int(round(v)))
        return out
    return values


def _fmt(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if value is None:
        return ""
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        return f"{value:.12g}"
    return str(value)


def _json_value(value: Any) -> Any:
    if isinstance(value, float) and not math.isnan(value):
        return float(f"{value:.12g}")
    if isinstance(value, float):
        return None
    if isinstance(value, (int, np.integer)):
        return int(value)
    return value


def write_table(
    stream,
    fmt: str,
    figure: str,
    config: dict[str, Any],
    columns: Sequence[str],
    rows: Sequence[Sequence[Any]],
) -> None:
    if fmt == "csv":
        stream.write(f"# figure: {figure}\n")
        cfg = " ".join(f"{k}={_fmt(v)}" for k, v in sorted(config.items()))
        stream.write(f"# config: {cfg}\n")
        stream.write(",".join(columns) + "\n")
        for row in rows:
            stream.write(",".join(_fmt(v) for v in row) + "\n")
    elif fmt == "json":
        payload = {
            "figure": figure,
            "config": {k: _fmt(v) for k, v in sorted(config.items())},
            "columns": list(columns),
            "rows": [[_json_value(v) for v in row] for row in rows],
        }
        stream.write(json.dumps(payload, sort_keys=True, separators=(",", ":")) + "\n")
        return
    else:
        raise CliError(f"unknown format {fmt!r}")


def _convergence_config(args: dict[str, Any]) -> ConvergenceConfig:
    return ConvergenceConfig(
        eps_tail=args.get("eps_tail") or 1e-10,
        eps_pc=args.get("eps_pc") or 1e-10,
        max_terms=int(args.get("max_terms") or 100_000),
    )


# ---------------------------------------------------------------------------
# command handlers, each returning (figure, columns, rows, all_converged)
# ---------------------------------------------------------------------------


def _assemble(points_rows, point_names, value_name, with_cutoff):
    columns = list(point_names) + [value_name] + (["cutoff_used"] if with_cutoff else [])
    all_ok = all(r[3] for r in points_rows)
    if not all_ok:
        columns.append("converged")
    rows = []
    for point, value, cutoff, converged in points_rows:
        row = list(point) + [value]
        if with_cutoff:
            row.append(cutoff)
        if not all_ok:
            row.append(converged)
        rows.append(row)
    return columns, rows, all_ok


def cmd_capacity(a: dict[str, Any]) -> tuple[str, list, list, bool]:
    rail, payload = a["rail"], a["payload"]
    alpha2, q_r = a["alpha2"], a["q_r"]
    receiver = a["receiver"]
    value_name = "holevo_bits" if payload == "classical" else "coherent_info_bits"

    def evaluate(r: float) -> tuple[float, int]:
        k0 = a["cutoff"] or cutoff_guess(r, tail=TAIL_TARGET)
        if q_r == 1.0 and receiver == "rob":
            quantity = (
                f"holevo_{rail}_classical" if payload == "classical" else f"cond_entropy_{rail}_quantum"
            )
            value, k = adaptive_truncation(
                lambda k: infotheory.numeric_channel_quantity(quantity, r, alpha2, k),
                k0=k0,
                eps=TRUNCATION_EPS,
            )
            return (value if payload == "classical" else -value), k
        if payload == "classical":
            if rail != "single":
                raise CliError("general wedge weights support the single rail for classical payloads")
            value, k = adaptive_truncation(
                lambda k: infotheory.wedge_holevo_single_classical(r, alpha2, q_r, k, receiver),
                k0=k0,
                eps=TRUNCATION_EPS,
            )
            return value, k
        key = "coherent_rob" if receiver == "rob" else "coherent_antirob"
        value, k = adaptive_truncation(
            lambda k: infotheory.wedge_quantum_report(rail, r, alpha2, q_r, k)[key],
            k0=k0,
            eps=TRUNCATION_EPS,
        )
        return value, k

    points_rows, ok = _run_points([(r,) for r in a["r"]], evaluate)
    figure = f"capacity-vs-r-{rail}-{payload}"
    columns, rows, ok = _assemble(points_rows, ["r"], value_name, True)
    return figure, columns, rows, ok


def cmd_fidelity(a: dict[str, Any]) -> tuple[str, list, list, bool]:
    rail = a["rail"]
    quantity = f"fidelity_{rail}"
    config = _convergence_config(a)

    if a["numeric"]:
        def evaluate(r: float) -> tuple[float, int]:
            k0 = a["cutoff"] or cutoff_guess(r, tail=TAIL_TARGET)
            return adaptive_truncation(
                lambda k: infotheory.numeric_channel_quantity(quantity, r, cutoff=k),
                k0=k0,
                eps=TRUNCATION_EPS,
            )

        points_rows, ok = _run_points([(r,) for r in a["r"]], evaluate)
        columns, rows, ok = _assemble(points_rows, ["r"], "fidelity", True)
    else:
        def evaluate(r: float) -> tuple[float]:
            return (infotheory.closed_form(quantity, r, config=config),)

        points_rows, ok = _run_points([(r,) for r in a["r"]], evaluate)
        columns, rows, ok = _assemble(points_rows, ["r"], "fidelity", False)
    return f"fidelity-vs-r-{rail}", columns, rows, ok


def cmd_fisher(a: dict[str, Any]) -> tuple[str, list, list, bool]:
    setup = a["setup"]
    config = _convergence_config(a)
    points = [(r, th) for r in a["r"] for th in a["theta"]]

    if a["numeric"]:
        def evaluate(r: float, theta: float) -> tuple[float, int]:
            k0 = a["cutoff"] or cutoff_guess(r, tail=TAIL_TARGET)
            return adaptive_truncation(
                lambda k: estimation.amplitude_setup_qfi_numeric(setup, r, theta, k),
                k0=k0,
                eps=TRUNCATION_EPS,
            )

        points_rows, ok = _run_points(points, evaluate)
        columns, rows, ok = _assemble(points_rows, ["r", "theta"], "fisher_information", True)
    else:
        def evaluate(r: float, theta: float) -> tuple[float]:
            return (estimation.qfi_closed_form_amplitude(setup, r, theta, config),)

        points_rows, ok = _run_points(points, evaluate)
        columns, rows, ok = _assemble(points_rows, ["r", "theta"], "fisher_information", False)
    return f"fisher-amplitude-{setup}", columns, rows, ok


def cmd_noon(a: dict[str, Any]) -> tuple[str, list, list, bool]:
    rail = a["rail"]
    theta = a["theta"]
    points = [(float(n), r) for n in a["n"] for r in a["r"]]

    def evaluate(n: float, r: float) -> tuple[float, int]:
        res = estimation.noon_qfi(int(n), rail, r, theta=theta, k0=a["cutoff"])
        return res.value, res.cutoff_used

    points_rows, ok = _run_points(points, evaluate)
    columns, rows, ok = _assemble(points_rows, ["n", "r"], "fisher_information", True)
    return f"noon-fisher-{rail}", columns, rows, ok


def cmd_optimize(a: dict[str, Any]) -> tuple[str, list, list, bool]:
    def evaluate(r: float) -> tuple[float, float, float]:
        a2, qr, val = optimize.optimize_capacity_2d(r, cutoff=a["cutoff"])
        return a2, qr, val

    rows = []
    ok = True
    for r in a["r"]:
        try:
            a2, qr, val = evaluate(r)
            rows.append(([r], (a2, qr, val), None, True))
        except NotConvergedError as err:
            rows.append(([r], (math.nan, math.nan, err.value), None, False))
            ok = False
    columns = ["r", "alpha2_opt", "q_r_opt", "holevo_bits"]
    if not ok:
        columns.append("converged")
    out = []
    for point, vals, _c, converged in rows:
        row = list(point) + list(vals)
        if not ok:
            row.append(converged)
        out.append(row)
    return "optimal-capacity-vs-r-single-classical", columns, out, ok


SWEEP_QUANTITIES: dict[str, tuple[tuple[str, ...], str]] = {
    # closed-form single-wedge series (axes: r, alpha2)
    **{name: (("r", "alpha2"), "closed") for name in infotheory.CLOSED_FORM_QUANTITIES},
    # truncated-numeric twins (axes: r, alpha2)
    **{f"numeric_{name}": (("r", "alpha2"), "numeric") for name in infotheory.CLOSED_FORM_QUANTITIES},
    # general wedge weights, single rail (axes: r, alpha2, q_r)
    "wedge_holevo_rob": (("r", "alpha2", "q_r"), "wedge_classical"),
    "wedge_holevo_antirob": (("r", "alpha2", "q_r"), "wedge_classical"),
    "wedge_coherent_rob": (("r", "alpha2", "q_r"), "wedge_quantum"),
    "wedge_coherent_antirob": (("r", "alpha2", "q_r"), "wedge_quantum"),
    "wedge_subadditivity_sum": (("r", "alpha2", "q_r"), "wedge_quantum"),
}


def cmd_sweep(a: dict[str, Any]) -> tuple[str, list, list, bool]:
    name = a["quantity"]
    if name not in SWEEP_QUANTITIES:
        raise CliError(f"unknown quantity {name!r}; known: {', '.join(sorted(SWEEP_QUANTITIES))}")
    axis_names, kind = SWEEP_QUANTITIES[name]
    config = _convergence_config(a)

    grids: dict[str, list[float]] = {}
    for spec in a["grid"] or []:
        if "=" not in spec:
            raise CliError(f"grid spec {spec!r} must look like axis=start:stop:step")
        axis, grid = spec.split("=", 1)
        if axis not in axis_names:
            raise CliError(f"quantity {name!r} has axes {axis_names}, not {axis!r}")
        grids[axis] = parse_grid(grid)
    fixed = {"alpha2": 0.5, "q_r": 1.0}
    for spec in a["fix"] or []:
        if "=" not in spec:
            raise CliError(f"fix spec {spec!r} must look like name=value")
        key, val = spec.split("=", 1)
        if key not in axis_names:
            raise CliError(f"quantity {name!r} has axes {axis_names}, not {key!r}")
        fixed[key] = float(val)
    if "r" not in grids and "r" not in fixed:
        raise CliError("an r grid (or --fix r=...) is required")

    swept = [(ax, grids[ax]) for ax in axis_names if ax in grids]

    def evaluate(**kwargs: float):
        args = {ax: fixed.get(ax) for ax in axis_names}
        args.update(kwargs)
        r, alpha2 = args["r"], args.get("alpha2", 0.5)
        if kind == "closed":
            return infotheory.closed_form(name, r, alpha2, config)
        if kind == "numeric":
            quantity = name.removeprefix("numeric_")
            k0 = a["cutoff"] or cutoff_guess(r, tail=TAIL_TARGET)
            return adaptive_truncation(
                lambda k: infotheory.numeric_channel_quantity(quantity, r, alpha2, k),
                k0=k0,
                eps=TRUNCATION_EPS,
            )
        q_r = args["q_r"]
        k0 = a["cutoff"] or cutoff_guess(r, tail=TAIL_TARGET)
        if kind == "wedge_classical":
            receiver = "rob" if name.endswith("_rob") else "antirob"
            return adaptive_truncation(
                lambda k: infotheory.wedge_holevo_single_classical(r, alpha2, q_r, k, receiver),
                k0=k0,
                eps=TRUNCATION_EPS,
            )
        key = {
            "wedge_coherent_rob": "coherent_rob",
            "wedge_coherent_antirob": "coherent_antirob",
            "wedge_subadditivity_sum": "subadditivity_sum",
        }[name]
        value, k = adaptive_truncation(
            lambda k: infotheory.wedge_quantum_report("single", r, alpha2, q_r, k)[key],
            k0=k0,
            eps=TRUNCATION_EPS,
        )
        return value, k

    table = optimize.parameter_sweep(name, evaluate, swept)
    with_cutoff = any(row.cutoff_used is not None for row in table.rows)
    all_ok = table.all_converged()
    columns = [ax for ax, _ in swept] + [name] + (["cutoff_used"] if with_cutoff else [])
    if not all_ok:
        columns.append("converged")
    rows = []
    for row in table.rows:
        out = list(row.params) + [row.value]
        if with_cutoff:
            out.append(row.cutoff_used)
        if not all_ok:
            out.append(row.converged)
        rows.append(out)
    return f"sweep-{name.replace('_', '-')}", columns, rows, all_ok


def _run_points(points: Sequence[tuple], evaluate: Callable[..., tuple]):
    """Evaluate rows (optionally threaded), recording failures per row."""
    import os
    from concurrent.futures import ThreadPoolExecutor

    def run(point):
        try:
            out = evaluate(*point)
            value, cutoff = (out if len(out) == 2 else (out[0], None))
            return (list(point), value, cutoff, True)
        except ConvergenceError as err:
            return (list(point), err.result.value, None, False)
        except NotConvergedError as err:
            return (list(point), err.value, err.cutoff, False)
        except estimation.TruncationError as err:
            return (list(point), err.value, err.cutoff, False)

    try:
        workers = max(1, int(os.environ.get("RQICHAN_THREADS", "1")))
    except ValueError:
        workers = 1
    if workers > 1 and len(points) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(run, points))
    else:
        rows = [run(p) for p in points]
    return rows, all(r[3] for r in rows)


def cmd_verify(_a: dict[str, Any]) -> int:
    from .verify import run_suites

    failed = 0
    for name, passed, detail in run_suites():
        if passed:
            print(f"PASS {name}")
        else:
            failed += 1
            print(f"FAIL {name}: {detail}")
    if failed:
        print(f"{failed} suite(s) failed", file=sys.stderr)
        return INVARIANT_FAILURE
    print("all suites passed")
    return 0


def cmd_report(a: dict[str, Any]) -> int:
    from . import report

    names = report.FIGURES.keys() if a["figure"] in (None, "all") else [a["figure"]]
    for name in names:
        if name not in report.FIGURES:
            raise CliError(f"unknown figure {name!r}; known: {', '.join(sorted(report.FIGURES))}")
        csv_path, png_path = report.render(name, a["out_dir"], fast=not a["full"])
        print(f"{name}: {csv_path} {png_path}")
    return 0


# ---------------------------------------------------------------------------
# argument plumbing
# ---------------------------------------------------------------------------


def _build_parser() -> _Parser:
    parser = _Parser(prog="rqichan", description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: _Parser) -> None:
        p.add_argument("--output", "-o", default=None, help="output file (default stdout)")
        p.add_argument("--format", choices=("csv", "json"), default=None)
        p.add_argument("--config", default=None, help="key=value config file; flags override")
        p.add_argument("--cutoff", type=int, default=None, help="fixed Fock cutoff override")
        p.add_argument("--eps-tail", type=float, default=None)
        p.add_argument("--eps-pc", type=float, default=None)
        p.add_argument("--max-terms", type=int, default=None)

    p = sub.add_parser("capacity", help="Holevo / coherent information over a squeezing grid")
    p.add_argument("--rail", choices=("single", "dual"), default=None)
    p.add_argument("--payload", choices=("classical", "quantum"), default=None)
    p.add_argument("--alpha2", type=float, default=None)
    p.add_argument("--q-r", type=float, default=None)
    p.add_argument("--receiver", choices=("rob", "antirob"), default=None)
    p.add_argument("--r", dest="r", default=None, help="grid start:stop:step or single value")
    add_common(p)

    p = sub.add_parser("fidelity", help="distinguishability of the received logical states")
    p.add_argument("--rail", choices=("single", "dual"), default=None)
    p.add_argument("--r", dest="r", default=None)
    p.add_argument("--numeric", action="store_true")
    add_common(p)

    p = sub.add_parser("fisher", help="amplitude-estimation Fisher information")
    p.add_argument("--setup", choices=estimation.AMPLITUDE_SETUPS, default=None)
    p.add_argument("--r", dest="r", default=None)
    p.add_argument("--theta", default=None)
    p.add_argument("--numeric", action="store_true")
    add_common(p)

    p = sub.add_parser("noon", help="phase-estimation Fisher information for N-excitation payloads")
    p.add_argument("--n", dest="n", default=None, help="integer grid")
    p.add_argument("--rail", choices=("single", "dual"), default=None)
    p.add_argument("--r", dest="r", default=None)
    p.add_argument("--theta", type=float, default=None)
    add_common(p)

    p = sub.add_parser("sweep", help="generic parameter sweep over a named quantity")
    p.add_argument("--quantity", default=None)
    p.add_argument("--grid", action="append", default=None, help="axis=start:stop:step (repeatable)")
    p.add_argument("--fix", action="append", default=None, help="axis=value (repeatable)")
    add_common(p)

    p = sub.add_parser("optimize", help="optimize Holevo information over (alpha2, q_R)")
    p.add_argument("--r", dest="r", default=None)
    add_common(p)

    p = sub.add_parser("verify", help="run the self-check suites")

    p = sub.add_parser("report", help="render the standard figures with their data tables")
    p.add_argument("--out-dir", default=None)
    p.add_argument("--figure", default=None, help="figure name or 'all'")
    p.add_argument("--full", action="store_true", help="use the slow, fine grids")

    return parser


_DEFAULTS: dict[str, dict[str, Any]] = {
    "capacity": {"rail": "single", "payload": "classical", "alpha2": 0.5, "q_r": 1.0,
                 "receiver": "rob", "r": "0:2:0.25", "format": "csv"},
    "fidelity": {"rail": "single", "r": "0.2:3:0.2", "format": "csv"},
    "fisher": {"setup": "single_joint", "r": "1.0", "theta": "0.65", "format": "csv"},
    "noon": {"n": "1:5:1", "rail": "single", "r": "0.5", "theta": 0.65, "format": "csv"},
    "sweep": {"format": "csv"},
    "optimize": {"r": "0.5", "format": "csv"},
    "report": {"out_dir": "reports", "figure": "all"},
    "verify": {},
}

_CONFIG_TYPES: dict[str, Callable[[str], Any]] = {
    "alpha2": float, "q_r": float, "theta": float, "cutoff": int,
    "eps_tail": float, "eps_pc": float, "max_terms": int,
    "numeric": lambda s: s.lower() in ("1", "true", "yes"),
    "full": lambda s: s.lower() in ("1", "true", "yes"),
}


def _load_config_file(path: str) -> dict[str, str]:
    out: dict[str, str] = {}
    try:
        with open(path, "r", encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                if "=" not in line:
                    raise CliError(f"config line {line!r} is not key=value")
                key, value = (part.strip() for part in line.split("=", 1))
                out[key.replace("-", "_")] = value
    except OSError as err:
        raise CliError(f"cannot read config file {path}: {err}") from err
    return out


def _resolve_args(ns: argparse.Namespace) -> dict[str, Any]:
    args = vars(ns).copy()
    command = args.pop("command")
    defaults = _DEFAULTS.get(command, {})
    if args.get("config"):
        file_values = _load_config_file(args["config"])
        unknown = set(file_values) - set(args)
        if unknown:
            raise CliError(f"unknown config keys: {', '.join(sorted(unknown))}")
        for key, raw in file_values.items():
            if args.get(key) in (None, False):
                convert = _CONFIG_TYPES.get(key, str)
                args[key] = convert(raw)
    for key, value in defaults.items():
        if args.get(key) is None:
            args[key] = value
    args["command"] = command
    return args


_HANDLERS = {
    "capacity": cmd_capacity,
    "fidelity": cmd_fidelity,
    "fisher": cmd_fisher,
    "noon": cmd_noon,
    "optimize": cmd_optimize,
    "sweep": cmd_sweep,
}


def run(argv: Sequence[str] | None = None) -> int:
    parser = _build_parser()
    try:
        ns = parser.parse_args(argv)
        args = _resolve_args(ns)
        command = args["command"]
        if command == "verify":
            return cmd_verify(args)
        if command == "report":
            return cmd_report(args)

        grid_specs = {k: args[k] for k in ("r", "theta", "n") if isinstance(args.get(k), str)}
        for key in ("r", "theta"):
            if key in args and isinstance(args[key], str):
                args[key] = parse_grid(args[key])
        if isinstance(args.get("n"), str):
            args["n"] = parse_grid(args["n"], integer=True)

        figure, columns, rows, converged = _HANDLERS[command](args)
        config = {
            k: v for k, v in args.items()
            if k not in ("command", "output", "config") and v is not None and not isinstance(v, list)
        }
        config.update(grid_specs)
        if args.get("output"):
            with open(args["output"], "w", encoding="utf-8", newline="\n") as fh:
                write_table(fh, args["format"], figure, config, columns, rows)
        else:
            write_table(sys.stdout, args["format"], figure, config, columns, rows)
        return 0 if converged else NONCONVERGENCE
    except CliError as err:
        print(f"error: {err}", file=sys.stderr)
        return USAGE_ERROR
    except (ValueError,) as err:
        print(f"error: {err}", file=sys.stderr)
        return USAGE_ERROR


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
