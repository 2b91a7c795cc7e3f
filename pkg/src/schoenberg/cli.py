"""Command-line interface: verify | oracle | sweep | search | report.

Exit codes follow one contract everywhere: 0 all checks passed, 1 a
mathematical violation or verified counterexample was recorded, 2 usage
or numeric-infrastructure error.  All randomness flows from ``--seed``
(a fixed constant when omitted, never wall-clock entropy), JSONL is the
machine archive and CSV the human summary, and both are written
atomically (temp file + rename).

JSONL record fields: ``{kind, seed, n, zeros: [[re, im], ...], a?,
reports: [{id, lhs, rhs, slack, holds, equality}], objective?,
objective_value?}``.  Non-finite numbers are serialized as null.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

from .config import DEFAULT_SEED, TOL_EQ, TOL_ROOT
from .errors import (
    ConvergenceError,
    InvalidInputError,
    NumericConsistencyError,
    RejectedStartError,
)
from .inequalities import (
    evaluate_ensemble,
    full_report,
    make_report,
    order6_bounds,
    reports_from_table,
    star_trace_oracle,
    starstar_trace_oracle,
)
from .matrices import is_normal, sds_matrix, verify_spectrum
from .poly import centroid_residual, is_collinear, recenter
from .rootfind import RootSolverSettings, cluster_sizes
from .search import (
    COUNTEREXAMPLE_MARGIN,
    ENSEMBLE_KINDS,
    Ensemble,
    SearchSettings,
    maximize,
    sample_one,
    sample_seed,
    verify_candidate,
)
from .sendov import SendovInstance, check_special_case, probe_m_minus2_batch

TRACE_ORACLE_TOL = 1e-10
SPECTRUM_TOL = 1e-7

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_USAGE = 2


# ---------------------------------------------------------------------------
# small I/O helpers

def _num(x) -> float | None:
    x = float(x)
    return x if math.isfinite(x) else None


def _pairs(zeros) -> list[list[float]]:
    return [[float(z.real), float(z.imag)] for z in np.asarray(zeros, dtype=complex)]


def _report_dict(rep) -> dict:
    return {
        "id": rep.inequality_id,
        "lhs": _num(rep.lhs),
        "rhs": _num(rep.rhs),
        "slack": _num(rep.slack),
        "holds": bool(rep.holds),
        "equality": bool(rep.equality),
    }


def _record(kind, seed, zeros, reports, a=None, objective=None, objective_value=None) -> dict:
    rec = {"kind": kind, "seed": int(seed), "n": int(len(zeros)), "zeros": _pairs(zeros)}
    if a is not None:
        rec["a"] = float(a)
    rec["reports"] = [_report_dict(r) for r in reports]
    if objective is not None:
        rec["objective"] = objective
        rec["objective_value"] = _num(objective_value)
    return rec


def _atomic_write(path: Path, text: str) -> None:
    path = Path(path)
    tmp = path.with_name(path.name + f".tmp{os.getpid()}")
    tmp.write_text(text)
    os.replace(tmp, path)


def _write_jsonl(path: Path, records: list[dict]) -> None:
    _atomic_write(path, "".join(json.dumps(r, separators=(",", ":")) + "\n" for r in records))


SUMMARY_COLUMNS = ("inequality_id", "n", "samples", "violations", "min_slack", "equality_count")


def _summary_rows(records: list[dict]) -> list[dict]:
    """Aggregate JSONL records into the CSV summary rows, keyed by (id, n)."""
    acc: dict[tuple, dict] = {}
    for rec in records:
        for rep in rec.get("reports", []):
            key = (rep["id"], rec["n"])
            row = acc.setdefault(
                key,
                {
                    "inequality_id": rep["id"],
                    "n": rec["n"],
                    "samples": 0,
                    "violations": 0,
                    "min_slack": math.inf,
                    "equality_count": 0,
                },
            )
            row["samples"] += 1
            slack = rep["slack"] if rep["slack"] is not None else math.inf
            row["min_slack"] = min(row["min_slack"], slack)
            row["violations"] += 0 if rep["holds"] else 1
            row["equality_count"] += 1 if rep["equality"] else 0
    return [acc[k] for k in sorted(acc, key=lambda t: (t[1], t[0]))]


def _summary_csv(rows: list[dict]) -> str:
    lines = [",".join(SUMMARY_COLUMNS)]
    for row in rows:
        lines.append(
            f"{row['inequality_id']},{row['n']},{row['samples']},{row['violations']},"
            f"{row['min_slack']:.12g},{row['equality_count']}"
        )
    return "\n".join(lines) + "\n"


def _print_summary(rows: list[dict]) -> None:
    print(f"{'inequality':>12} {'n':>3} {'samples':>8} {'violations':>10} {'min_slack':>14} {'equality':>9}")
    for row in rows:
        print(
            f"{row['inequality_id']:>12} {row['n']:>3} {row['samples']:>8} "
            f"{row['violations']:>10} {row['min_slack']:>14.6e} {row['equality_count']:>9}"
        )


def _out_paths(base: str) -> tuple[Path, Path]:
    p = Path(base)
    if p.suffix in {".jsonl", ".csv"}:
        p = p.with_suffix("")
    return p.with_suffix(".jsonl"), p.with_suffix(".csv")


# ---------------------------------------------------------------------------
# argument parsing

def _parse_zeros(text: str) -> np.ndarray:
    out = []
    for token in text.replace(";", " ").split():
        parts = token.split(",")
        if len(parts) != 2:
            raise InvalidInputError(f"zero token {token!r} is not 're,im'")
        out.append(complex(float(parts[0]), float(parts[1])))
    if not out:
        raise InvalidInputError("no zeros given")
    return np.array(out, dtype=complex)


def _load_config_file(path: str) -> dict:
    with open(path) as handle:
        data = json.load(handle)
    if not isinstance(data, dict):
        raise InvalidInputError("configuration file must hold a JSON object")
    return data


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="schoenberg",
        description="Verify and stress-test the zero/critical-point inequality suite.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--seed", type=int, default=DEFAULT_SEED, help="RNG seed (fixed default)")
        p.add_argument("--tol-root", type=float, default=TOL_ROOT)
        p.add_argument("--tol-eq", type=float, default=TOL_EQ)
        p.add_argument("--out", type=str, default=None, help="output path (basename for sweep/search)")
        p.add_argument("--format", choices=("table", "csv", "jsonl"), default="table")

    p = sub.add_parser("verify", help="evaluate every inequality on one configuration")
    p.add_argument("--zeros", type=str, default=None, help="space-separated re,im pairs")
    p.add_argument("--config", type=str, default=None, help="JSON file with {zeros, a?, seed?, tolerances?}")
    p.add_argument("--a", type=float, default=None, help="distinguished Sendov zero; --zeros then hold the others")
    p.add_argument("--recenter", action="store_true", help="evaluate centered-only forms after recentering")
    common(p)

    p = sub.add_parser("oracle", help="closed forms vs brute-force traces and spectra")
    p.add_argument("--n", type=int, required=True, help="degree, 2..10")
    p.add_argument("--samples", type=int, default=1000)
    common(p)

    p = sub.add_parser("sweep", help="evaluate an ensemble and archive per-sample records")
    p.add_argument("--ensemble", choices=ENSEMBLE_KINDS, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--count", type=int, default=500)
    p.add_argument("--recenter", action="store_true", help="recenter sampled configurations")
    p.add_argument("--scale", type=float, default=0.1, help="perturbation scale for roots-of-unity-perturbed")
    p.add_argument("--hypothesis-filter", action="store_true",
                   help="sendov-boundary: keep only instances satisfying the centroid hypothesis")
    common(p)

    p = sub.add_parser("search", help="derivative-free ascent of a slack ratio or M_-2")
    p.add_argument("--objective", type=str, required=True,
                   help="inequality id (ratio objective) or M_MINUS2")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--starts", type=int, default=20)
    p.add_argument("--ensemble", choices=ENSEMBLE_KINDS, default=None,
                   help="start sampler (default: by objective)")
    p.add_argument("--max-iterations", type=int, default=200)
    p.add_argument("--raw-starts", action="store_true",
                   help="use sampled starts as-is; centered-form objectives then fail with exit 2")
    common(p)

    p = sub.add_parser("report", help="summarize a JSONL archive as the CSV table")
    p.add_argument("--input", type=str, required=True, nargs="+")
    common(p)

    return parser


# ---------------------------------------------------------------------------
# commands

def _verify_reports_output(args, zeros, reports, extra_lines):
    for line in extra_lines:
        print(line)
    print(f"{'inequality':>12} {'lhs':>14} {'rhs':>14} {'slack':>14}  holds equality applicable")
    for rep in reports:
        print(
            f"{rep.inequality_id:>12} {rep.lhs:>14.6e} {rep.rhs:>14.6e} {rep.slack:>14.6e}  "
            f"{str(rep.holds):>5} {str(rep.equality):>8} {str(rep.applicable):>10}"
        )
    if args.out:
        if args.format == "jsonl":
            _write_jsonl(Path(args.out), [_record("verify", args.seed, zeros, reports)])
        elif args.format == "csv":
            rows = _summary_rows([_record("verify", args.seed, zeros, reports)])
            _atomic_write(Path(args.out), _summary_csv(rows))
        else:
            _atomic_write(Path(args.out), "\n".join(
                f"{r.inequality_id},{r.lhs!r},{r.rhs!r},{r.slack!r},{r.holds},{r.equality}" for r in reports
            ) + "\n")


def cmd_verify(args) -> int:
    if (args.zeros is None) == (args.config is None):
        raise InvalidInputError("give exactly one of --zeros or --config")
    a = args.a
    if args.config is not None:
        data = _load_config_file(args.config)
        zeros = np.array([complex(re, im) for re, im in data["zeros"]], dtype=complex)
        a = data.get("a", a)
    else:
        zeros = _parse_zeros(args.zeros)

    extra = []
    sendov_reports = []
    if a is not None:
        inst = SendovInstance(a=float(a), other_zeros=zeros)
        zeros = inst.zeros()
        pm = check_special_case(inst, RootSolverSettings(tol_root=args.tol_root))
        sendov_reports = [
            make_report("C1", float(inst.n - 1), pm.c1_value, args.tol_eq),
            make_report("C2", pm.c2_value, float(inst.n - 1), args.tol_eq),
        ]
        extra.append(
            f"sendov: condition_holds={pm.condition_holds} min|w-a|={pm.min_distance:.6f} "
            f"M2={pm.values[2]:.6f} M-2={pm.values[1]:.6f}"
        )

    settings = RootSolverSettings(tol_root=args.tol_root, rng_seed=args.seed)
    reports = full_report(
        zeros, settings, recenter_centered=args.recenter, tol_eq=args.tol_eq
    )
    if a is not None:
        # C1/C2 are theorems only under the centroid hypothesis.
        if sendov_reports and check_special_case(SendovInstance(float(a), zeros[1:]), settings).condition_holds:
            reports = reports + sendov_reports

    spectrum = verify_spectrum(zeros, settings)
    scale = max(1.0, float(np.max(np.abs(zeros))))
    worst_cluster = int(np.max(cluster_sizes(spectrum.expected, 1e-6 * scale)))
    spectrum_tol = max(SPECTRUM_TOL, args.tol_root ** (1.0 / worst_cluster)) * scale
    extra.append(
        f"spectrum check: max pairing distance {spectrum.max_pair_distance:.3e} "
        f"(tolerance {spectrum_tol:.1e})"
    )
    extra.append(
        f"centroid residual {centroid_residual(zeros):.3e}; "
        f"collinear={is_collinear(zeros)}; normal(SDS)={is_normal(sds_matrix(zeros))}"
    )
    _verify_reports_output(args, zeros, reports, extra)
    if spectrum.max_pair_distance > spectrum_tol:
        print("numeric-consistency failure: companion spectrum mismatch", file=sys.stderr)
        return EXIT_USAGE
    applicable = [r for r in reports if r.applicable]
    return EXIT_OK if all(r.holds for r in applicable) else EXIT_VIOLATION


def _normalized_centered_batch(n, count, seed):
    ens = Ensemble(kind="uniform-disk", n=n, count=count, seed=seed, recenter=True)
    zs = np.array([sample_one(ens, i) for i in range(count)])
    scale = np.abs(zs).max(axis=1)
    scale[scale == 0] = 1.0
    return zs / scale[:, np.newaxis]


def cmd_oracle(args) -> int:
    if not 2 <= args.n <= 10:
        print(f"oracle supports n in 2..10, got {args.n}", file=sys.stderr)
        return EXIT_USAGE
    zs = _normalized_centered_batch(args.n, args.samples, args.seed)
    star_closed, starstar_closed = order6_bounds(zs)
    settings = RootSolverSettings(tol_root=args.tol_root, rng_seed=args.seed)

    worst_trace, worst_trace_cfg = 0.0, None
    worst_spec, worst_spec_cfg = 0.0, None
    for i in range(zs.shape[0]):
        dev = abs(star_trace_oracle(zs[i]) - star_closed[i])
        dev = max(dev, abs(starstar_trace_oracle(zs[i]) - starstar_closed[i]))
        if dev > worst_trace:
            worst_trace, worst_trace_cfg = dev, zs[i]
        spec = verify_spectrum(zs[i], settings).max_pair_distance
        if spec > worst_spec:
            worst_spec, worst_spec_cfg = spec, zs[i]

    print(f"trace oracle: {zs.shape[0]} samples, n={args.n}, max |closed - trace| = {worst_trace:.3e}")
    print(f"spectrum check: max pairing distance = {worst_spec:.3e}")
    ok = worst_trace <= TRACE_ORACLE_TOL and worst_spec <= SPECTRUM_TOL
    if not ok:
        if worst_trace > TRACE_ORACLE_TOL:
            print(f"worst trace config: {_pairs(worst_trace_cfg)}", file=sys.stderr)
        if worst_spec > SPECTRUM_TOL:
            print(f"worst spectrum config: {_pairs(worst_spec_cfg)}", file=sys.stderr)
        return EXIT_VIOLATION
    return EXIT_OK


def _sweep_root_records(args) -> list[dict]:
    ens = Ensemble(
        kind=args.ensemble, n=args.n, count=args.count, seed=args.seed,
        recenter=args.recenter, scale=args.scale,
    )
    zs = np.array([sample_one(ens, i) for i in range(args.count)])
    settings = RootSolverSettings(tol_root=args.tol_root, rng_seed=args.seed)
    table, mask = evaluate_ensemble(zs, settings, recenter_centered=True)
    records = []
    for i in range(args.count):
        reports = reports_from_table(table, mask, i, recentered=True, tol_eq=args.tol_eq)
        records.append(_record("sample", sample_seed(args.seed, i), zs[i], reports))
    return records


def _sweep_sendov_records(args) -> list[dict]:
    ens = Ensemble(kind="sendov-boundary", n=args.n, count=args.count, seed=args.seed)
    instances, seeds = [], []
    index = 0
    # Rejection keeps the per-sample seeds aligned with their sample index.
    while len(instances) < args.count and index < 1000 * args.count:
        inst = sample_one(ens, index)
        if not args.hypothesis_filter or inst.hypothesis_margin() >= 0:
            instances.append(inst)
            seeds.append(sample_seed(args.seed, index))
        index += 1
    if len(instances) < args.count:
        raise InvalidInputError("hypothesis filter rejected too many samples")
    a = np.array([inst.a for inst in instances])
    others = np.array([inst.other_zeros for inst in instances])
    settings = RootSolverSettings(tol_root=args.tol_root, rng_seed=args.seed)
    m2vals, _hits = probe_m_minus2_batch(a, others, settings)
    records = []
    for i, inst in enumerate(instances):
        pm = check_special_case(inst, settings)
        reports = []
        if pm.condition_holds:
            reports = [
                make_report("C1", float(inst.n - 1), pm.c1_value, args.tol_eq),
                make_report("C2", pm.c2_value, float(inst.n - 1), args.tol_eq),
            ]
        records.append(
            _record(
                "sample", seeds[i], inst.zeros(), reports, a=inst.a,
                objective="M_MINUS2", objective_value=m2vals[i],
            )
        )
    return records


def cmd_sweep(args) -> int:
    if args.ensemble == "sendov-boundary":
        records = _sweep_sendov_records(args)
    else:
        records = _sweep_root_records(args)
    rows = _summary_rows(records)
    jsonl_path, csv_path = _out_paths(args.out or "sweep")
    _write_jsonl(jsonl_path, records)
    _atomic_write(csv_path, _summary_csv(rows))
    _print_summary(rows)
    violations = sum(row["violations"] for row in rows)
    m2_bad = sum(
        1 for rec in records
        if rec.get("objective") == "M_MINUS2"
        and rec.get("objective_value") is not None
        and rec["objective_value"] > 1.0 + COUNTEREXAMPLE_MARGIN
    )
    if m2_bad:
        print(f"M_MINUS2 candidates above 1: {m2_bad}", file=sys.stderr)
    print(f"records: {len(records)} -> {jsonl_path} / {csv_path}")
    return EXIT_OK if violations == 0 and m2_bad == 0 else EXIT_VIOLATION


def cmd_search(args) -> int:
    objective = args.objective
    settings = SearchSettings(
        max_iterations=args.max_iterations,
        solver=RootSolverSettings(tol_root=args.tol_root, rng_seed=args.seed),
    )
    if objective == "M_MINUS2":
        kind = args.ensemble or "sendov-boundary"
        if kind != "sendov-boundary":
            raise InvalidInputError("M_MINUS2 starts come from the sendov-boundary ensemble")
    else:
        kind = args.ensemble or "uniform-disk"
        if kind == "sendov-boundary":
            raise InvalidInputError(f"objective {objective} needs a root-configuration ensemble")
    from .inequalities import CENTERED_IDS  # local import to avoid cycles in __init__

    needs_center = objective in CENTERED_IDS and not args.raw_starts
    ens = Ensemble(kind=kind, n=args.n, count=args.starts, seed=args.seed, recenter=needs_center)
    records, verified_counterexample = [], False
    for i in range(args.starts):
        start = sample_one(ens, i)
        seed_i = sample_seed(args.seed, i)
        try:
            rec = maximize(objective, start, settings, sample_seed=seed_i)
        except RejectedStartError:
            continue
        kind_tag = "search"
        if rec.objective_value > 1.0 + COUNTEREXAMPLE_MARGIN:
            refined = verify_candidate(rec, settings)
            if refined > 1.0 + COUNTEREXAMPLE_MARGIN:
                kind_tag = "counterexample"
                verified_counterexample = True
                print(
                    f"counterexample candidate verified: {objective} = {refined:.9f} "
                    f"zeros {_pairs(rec.zeros)}",
                    file=sys.stderr,
                )
        records.append(
            _record(
                kind_tag, seed_i, rec.zeros, rec.reports, a=rec.a,
                objective=objective, objective_value=rec.objective_value,
            )
        )
    jsonl_path, _csv = _out_paths(args.out or "search")
    _write_jsonl(jsonl_path, records)
    best = max((r["objective_value"] for r in records if r["objective_value"] is not None), default=None)
    print(f"{len(records)} ascents, best {objective} = {best}")
    print(f"records -> {jsonl_path}")
    return EXIT_VIOLATION if verified_counterexample else EXIT_OK


def cmd_report(args) -> int:
    records = []
    for path in args.input:
        with open(path) as handle:
            for line in handle:
                line = line.strip()
                if line:
                    records.append(json.loads(line))
    rows = _summary_rows(records)
    if args.format == "csv" or args.out:
        text = _summary_csv(rows)
        if args.out:
            _atomic_write(Path(args.out), text)
        else:
            sys.stdout.write(text)
    if args.format != "csv":
        _print_summary(rows)
    violations = sum(row["violations"] for row in rows)
    return EXIT_OK if violations == 0 else EXIT_VIOLATION


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "verify": cmd_verify,
        "oracle": cmd_oracle,
        "sweep": cmd_sweep,
        "search": cmd_search,
        "report": cmd_report,
    }
    try:
        return handlers[args.command](args)
    except (InvalidInputError, RejectedStartError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ConvergenceError, NumericConsistencyError) as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
