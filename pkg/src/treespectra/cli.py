"""Command-line interface.

Six subcommands: ``spectrum`` (all n eigenvalues with parameters),
``basis`` (all n eigenvectors), ``verify`` (analytic results vs. the dense
Jacobi oracle; exit 1 on any failed check), ``gap`` (spectral gaps of the
walk and the interchange process), ``wilson`` (the mixing-time lower-bound
report), and ``simulate`` (seeded Monte Carlo trajectories).

Every report embeds d, h, n, the tool version, and the tolerance
constants it was judged against.  Output is deterministic: the same
invocation produces byte-identical bytes (floats are rendered with
shortest round-trip ``repr``).  ``--format json`` (the default) produces
one flat object — scalar values for single-row reports, per-column arrays
otherwise; ``--format csv`` produces ``# key=value`` metadata lines, a
header row, and data rows.

Exit codes: 0 success, 1 verification failure, 2 usage or argument error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass

import numpy as np

from . import __version__
from . import tolerances as tol
from .chains import single_card_matrix, walk_matrix
from .eigenbasis import build_full_basis, verify_eigenpair
from .mixing import (
    interchange_gap,
    lambda_prime_from_lambda,
    wilson_lower_bound,
    wilson_witness,
)
from .oracle import dense_eigensolve_symmetric, spectrum_compare
from .simulator import SimulationConfig, run_trajectories
from .spectrum import full_spectrum, spectral_gap
from .tree import build_tree


@dataclass
class _Report:
    """Renderer-neutral output: flat metadata plus one table."""

    meta: dict
    columns: list[str]
    rows: list[list]
    exit_code: int = 0


def _scalar(value):
    """Coerce numpy scalars to plain Python for stable rendering."""
    if isinstance(value, (np.floating,)):
        return float(value)
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.bool_,)):
        return bool(value)
    return value


def _csv_cell(value) -> str:
    value = _scalar(value)
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _render_csv(report: _Report) -> str:
    lines = [f"# {key}={_csv_cell(val)}" for key, val in report.meta.items()]
    lines.append(",".join(report.columns))
    for row in report.rows:
        lines.append(",".join(_csv_cell(cell) for cell in row))
    return "\n".join(lines) + "\n"


def _render_json(report: _Report) -> str:
    flat: dict = {k: _scalar(v) for k, v in report.meta.items()}
    if len(report.rows) == 1:
        for key, val in zip(report.columns, report.rows[0]):
            flat[key] = _scalar(val)
    else:
        for j, key in enumerate(report.columns):
            flat[key] = [_scalar(row[j]) for row in report.rows]
    return json.dumps(flat, indent=2) + "\n"


def _emit(report: _Report, args: argparse.Namespace) -> None:
    text = (_render_csv(report) if args.format == "csv"
            else _render_json(report))
    if args.output is not None:
        with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _context(g, **extra) -> dict:
    meta = {"d": g.d, "h": g.h, "n": g.n, "version": __version__}
    meta.update(extra)
    return meta


# ---------------------------------------------------------------------------
# subcommand handlers
# ---------------------------------------------------------------------------

def _cmd_spectrum(args: argparse.Namespace) -> _Report:
    g = build_tree(args.d, args.h)
    table = full_spectrum(args.d, args.h)
    if table.n > 1_000_000:
        raise ValueError(
            f"spectrum table for n={table.n} has too many rows to expand; "
            "use the library API for the per-line form")
    meta = _context(
        g,
        tolerance_bisection_width=tol.BISECTION_WIDTH,
        tolerance_x_residual=tol.X_EQUATION_RESIDUAL,
    )
    rows = []
    for line in table.lines:
        row = [line.family, line.index, line.lam,
               line.x.real, line.x.imag, line.multiplicity]
        rows.extend([list(row)] * line.multiplicity)
    return _Report(meta=meta,
                   columns=["family", "index", "lambda", "x_re", "x_im",
                            "multiplicity"],
                   rows=rows)


def _cmd_basis(args: argparse.Namespace) -> _Report:
    g = build_tree(args.d, args.h)
    basis = build_full_basis(g)
    meta = _context(
        g,
        tolerance_eigen_residual=tol.EIGEN_RESIDUAL,
        tolerance_rank_pivot=tol.RANK_PIVOT,
        normalization="max-abs",
    )
    columns = ["family", "index", "anchor", "child", "lambda"]
    columns += [f"v{i}" for i in range(g.n)]
    rows = []
    for rec in basis.records:
        peak = float(np.max(np.abs(rec.values)))
        rows.append([rec.family, rec.index, rec.anchor, rec.child, rec.lam]
                    + [float(v) / peak for v in rec.values])
    return _Report(meta=meta, columns=columns, rows=rows)


def _cmd_verify(args: argparse.Namespace) -> _Report:
    g = build_tree(args.d, args.h)
    table = full_spectrum(args.d, args.h)
    walk = walk_matrix(g)
    oracle = dense_eigensolve_symmetric(walk.entries)
    comparison = spectrum_compare(table, oracle.eigenvalues)

    basis = build_full_basis(g)
    rank = basis.rank()
    worst_pair = max(verify_eigenpair(g, rec) for rec in basis.records)

    card = single_card_matrix(g).entries
    n = g.n
    affine = ((2 * n - g.d - 3) * np.eye(n) + (g.d + 1) * walk.entries) \
        / (2 * (n - 1))
    affine_defect = float(np.max(np.abs(card - affine)))

    balance = walk.detailed_balance_defect()

    checks = [
        ("max_spectrum_deviation", comparison.max_abs_diff,
         tol.ORACLE_MATCH, comparison.max_abs_diff <= tol.ORACLE_MATCH),
        ("cluster_counts_ok", comparison.ok, None, comparison.ok),
        ("basis_rank", rank, None, rank == g.n),
        ("max_eigenpair_residual", worst_pair,
         tol.EIGEN_RESIDUAL, worst_pair <= tol.EIGEN_RESIDUAL),
        ("affine_identity_defect", affine_defect,
         tol.AFFINE_IDENTITY, affine_defect <= tol.AFFINE_IDENTITY),
        ("detailed_balance_defect", balance,
         tol.DETAILED_BALANCE, balance <= tol.DETAILED_BALANCE),
    ]
    all_ok = all(ok for _, _, _, ok in checks)
    meta = _context(g, oracle_sweeps=oracle.sweeps,
                    oracle_residual=oracle.residual)
    rows = [[name, value, threshold, ok]
            for name, value, threshold, ok in checks]
    rows.append(["ok", all_ok, None, all_ok])
    return _Report(meta=meta,
                   columns=["check", "value", "threshold", "ok"],
                   rows=rows,
                   exit_code=0 if all_ok else 1)


def _cmd_gap(args: argparse.Namespace) -> _Report:
    g = build_tree(args.d, args.h)
    sg = spectral_gap(args.d, args.h)
    ig = interchange_gap(args.d, args.h)
    meta = _context(g, tolerance_bisection_width=tol.BISECTION_WIDTH)
    columns = ["lambda2", "gap", "asymptotic", "deviation", "family",
               "index", "interchange_gap", "interchange_asymptotic",
               "interchange_ratio"]
    rows = [[sg.lambda2, sg.gap, sg.asymptotic, sg.deviation, sg.family,
             sg.index, ig.gap_exact, ig.gap_asymptotic, ig.ratio]]
    return _Report(meta=meta, columns=columns, rows=rows)


def _cmd_wilson(args: argparse.Namespace) -> _Report:
    report = wilson_lower_bound(args.d, args.h, args.epsilon)
    payload = report.as_dict()
    meta = {"version": __version__}
    columns = list(payload.keys())
    rows = [[payload[k] for k in columns]]
    return _Report(meta=meta, columns=columns, rows=rows)


def _cmd_simulate(args: argparse.Namespace) -> _Report:
    config = SimulationConfig(d=args.d, h=args.h, steps=args.steps,
                              trials=args.trials, seed=args.seed,
                              observers=frozenset({"F_trace"}))
    g = build_tree(args.d, args.h)
    witness = wilson_witness(g)
    stats = run_trajectories(config, witness.f)
    lam_prime = lambda_prime_from_lambda(g.d, g.n, witness.lam)
    meta = _context(g, steps=args.steps, trials=args.trials, seed=args.seed,
                    F_id=stats.F_id, lambda_prime=lam_prime)
    rows = []
    for t in range(args.steps + 1):
        rows.append([t,
                     float(stats.F_mean_per_step[t]),
                     float(stats.F_var_per_step[t]),
                     lam_prime ** t * stats.F_id])
    return _Report(meta=meta,
                   columns=["t", "F_mean", "F_var", "F_predicted"],
                   rows=rows)


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--d", type=int, required=True,
                     help="branching factor (>= 2)")
    sub.add_argument("--h", type=int, required=True, help="tree height (>= 1)")
    sub.add_argument("--format", choices=("csv", "json"), default="json",
                     help="output format (default json)")
    sub.add_argument("--output", default=None,
                     help="write to this file instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="treespectra",
        description="Spectra of lazy walks on complete d-ary trees and "
                    "mixing lower bounds for the interchange process.",
        allow_abbrev=False)
    parser.add_argument("--version", action="version",
                        version=f"%(prog)s {__version__}")
    subs = parser.add_subparsers(dest="command", required=True)

    sp = subs.add_parser("spectrum", allow_abbrev=False,
                         help="all n eigenvalues, one row per copy")
    _add_common(sp)
    sp.set_defaults(handler=_cmd_spectrum)

    sp = subs.add_parser("basis", allow_abbrev=False,
                         help="all n eigenvectors (max-abs normalised)")
    _add_common(sp)
    sp.set_defaults(handler=_cmd_basis)

    sp = subs.add_parser("verify", allow_abbrev=False,
                         help="check analytic results against the dense "
                              "oracle; exit 1 on failure")
    _add_common(sp)
    sp.set_defaults(handler=_cmd_verify)

    sp = subs.add_parser("gap", allow_abbrev=False,
                         help="walk and interchange spectral gaps")
    _add_common(sp)
    sp.set_defaults(handler=_cmd_gap)

    sp = subs.add_parser("wilson", allow_abbrev=False,
                         help="mixing-time lower-bound report")
    _add_common(sp)
    sp.add_argument("--epsilon", type=float, required=True,
                    help="target total-variation slack, in (0, 1)")
    sp.set_defaults(handler=_cmd_wilson)

    sp = subs.add_parser("simulate", allow_abbrev=False,
                         help="seeded Monte Carlo interchange trajectories")
    _add_common(sp)
    sp.add_argument("--steps", type=int, required=True,
                    help="steps per trajectory (>= 0)")
    sp.add_argument("--trials", type=int, default=1000,
                    help="number of trajectories (default 1000)")
    sp.add_argument("--seed", type=int, default=0,
                    help="base seed (default 0)")
    sp.set_defaults(handler=_cmd_simulate)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        report = args.handler(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    _emit(report, args)
    return report.exit_code


def script() -> None:
    sys.exit(main())


if __name__ == "__main__":
    script()
