"""Command-line harness: formulate, estimate, solve, verify.

Every command is deterministic given its arguments and seed, writes CSV plus
a small JSON manifest (argument echo, content hash, seed), and uses exit
codes 0 = success, 1 = validation failure, 2 = golden-value mismatch,
3 = budget or cap exceeded.  The master seed falls back to the GASCAP_SEED
environment variable when --seed is not given.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .cap import (
    CapInstance,
    CoeffTable,
    coeff_table,
    interference_coeff,
    load_instance,
    reference_instance,
    synthetic_instance,
)
from .circuits import (
    closed_form_qubits,
    closed_form_resources,
    formulation_resources,
    formulation_width,
)
from .formulation import (
    build_formulation,
    decode,
    default_quadratization_scale,
    dumps_formulation,
    formulation_from_table,
    quadratize,
    variable_counts,
)
from .gas import (
    BudgetExceededError,
    GasConfig,
    brute_force_cap,
    log2_expected_queries,
    run_gas,
    run_seed,
)

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_MISMATCH = 2
EXIT_BUDGET = 3

FORMULATION_KINDS = ("qubo", "hubo-asc", "hubo-desc", "quadratized")


def _master_seed(args) -> int:
    if args.seed is not None:
        return args.seed
    return int(os.environ.get("GASCAP_SEED", "0"))


def _load_instance(args) -> CapInstance:
    if args.instance:
        return load_instance(args.instance)
    if args.synthetic:
        n_ap, n_ch = (int(v) for v in args.synthetic.split(","))
        return synthetic_instance(n_ap, n_ch, seed=_master_seed(args))
    return reference_instance()


def _write_manifest(out_dir: Path, command: str, args_echo: dict, files: dict[str, str]):
    manifest = {
        "command": command,
        "version": __version__,
        "args": args_echo,
        "outputs": files,  # file name -> sha256 of contents
    }
    (out_dir / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True))


def _write_text(out_dir: Path, name: str, text: str, hashes: dict[str, str]):
    (out_dir / name).write_text(text)
    hashes[name] = hashlib.sha256(text.encode()).hexdigest()


def _csv_text(header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _fmt(x) -> str:
    if isinstance(x, float):
        return f"{x:.12g}"
    return str(x)


# -- formulate ------------------------------------------------------------


def cmd_formulate(args) -> int:
    inst = _load_instance(args)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    table = coeff_table(inst)
    hashes: dict[str, str] = {}
    summary: dict[str, dict] = {}

    counts = variable_counts(inst.n_ap, inst.n_ch)
    for kind in args.formulation:
        if kind == "quadratized":
            base = build_formulation(inst, "hubo-asc", args.penalty, table)
            quad = quadratize(base.objective, default_quadratization_scale(base.objective))
            poly = quad.poly
            name = "quadratized"
            header = (
                f'# {{"encoding": "quadratized(binary_ascending)", '
                f'"n_vars": {poly.n_vars}, "penalty": {args.penalty}}}'
            )
            text = header + "\n" + poly.dumps()
        else:
            form = build_formulation(inst, kind, args.penalty, table)
            poly = form.objective
            name = kind
            text = dumps_formulation(form)
        _write_text(out_dir, f"{name}.poly", text + "\n", hashes)
        st = poly.stats()
        summary[name] = {
            "n_vars": poly.n_vars,
            "terms": st.term_count,
            "degree": st.degree,
        }
    summary["counts"] = {
        "n": counts.n,
        "n_prime": counts.n_prime,
        "n_double_prime": counts.n_double_prime,
        "log2_search_space": counts.log2_search_space,
    }
    _write_text(out_dir, "summary.json", json.dumps(summary, indent=2, sort_keys=True) + "\n", hashes)
    _write_manifest(out_dir, "formulate", _echo(args), hashes)
    print(json.dumps(summary, indent=2, sort_keys=True))
    return EXIT_OK


# -- estimate -------------------------------------------------------------


def cmd_estimate(args) -> int:
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    lo, hi, step = (int(v) for v in args.sweep.split(":"))
    sizes = list(range(lo, hi + 1, step))
    header = [
        "formulation", "encoding", "n_ap", "n_ch",
        "n", "n_prime", "n_double_prime", "m",
        "qubits_total", "qubits_closed_form",
        "h", "r",
    ]
    max_arity = 0
    rows_raw = []
    for n_ap in sizes:
        n_ch = n_ap // 2
        if n_ch < 2:
            continue
        counts = variable_counts(n_ap, n_ch)
        table = CoeffTable.uniform(n_ap, 1.0)
        d_sum = table.d_sum
        for kind in ("qubo", "hubo-asc", "hubo-desc"):
            closed_total = closed_form_qubits(n_ap, n_ch, d_sum, 1.0, kind)
            closed = closed_form_resources(n_ap, n_ch, "qubo" if kind == "qubo" else "hubo")
            row = {
                "formulation": kind,
                "encoding": kind if kind == "qubo" else kind.replace("hubo-", "binary_"),
                "n_ap": n_ap, "n_ch": n_ch,
                "n": counts.n, "n_prime": counts.n_prime,
                "n_double_prime": counts.n_double_prime,
                "qubits_closed_form": closed_total,
                "cnot_closed_form": closed.cnot_count,
                "log2_grover_queries": log2_expected_queries(
                    counts.n if kind == "qubo" else counts.n_prime).grover,
                "log2_exhaustive_queries": log2_expected_queries(
                    counts.n if kind == "qubo" else counts.n_prime).exhaustive,
            }
            if n_ap <= args.enum_cap:
                form = formulation_from_table(table, n_ch, kind, 1.0)
                report = formulation_resources(form, d_sum=d_sum, with_closed_form=False)
                row.update({
                    "m": report.m_val,
                    "qubits_total": report.n_key + report.m_val,
                    "h": report.h_count,
                    "r": report.r_count,
                    "cnot_enumerated": report.cnot_count,
                })
                for k, v in report.cr_counts.items():
                    row[f"cr_{k}"] = v
                    max_arity = max(max_arity, k)
            rows_raw.append(row)
    header += [f"cr_{k}" for k in range(1, max_arity + 1)]
    header += ["cnot_enumerated", "cnot_closed_form",
               "log2_grover_queries", "log2_exhaustive_queries"]
    rows = [[_fmt(row.get(col, "")) for col in header] for row in rows_raw]
    hashes: dict[str, str] = {}
    _write_text(out_dir, "resources.csv", _csv_text(header, rows), hashes)
    _write_manifest(out_dir, "estimate", _echo(args), hashes)
    print(f"wrote {len(rows)} rows to {out_dir / 'resources.csv'}")
    return EXIT_OK


# -- solve ----------------------------------------------------------------


def cmd_solve(args) -> int:
    inst = _load_instance(args)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    table = coeff_table(inst)
    master = _master_seed(args)
    oracle = brute_force_cap(inst, table)

    hashes: dict[str, str] = {}
    summary: dict[str, dict] = {"oracle": {
        "best_value": oracle.best_value,
        "best_assignment": list(oracle.best_assignment),
        "evaluations": oracle.evaluations,
    }}
    header = ["run_seed", "formulation", "encoding", "iter", "y_i", "L_i",
              "cum_classical", "cum_quantum", "best_y_normalized"]

    backend = "statevector" if args.backend == "sv" else args.backend
    for kind in args.formulation:
        width = None
        if kind == "quadratized":
            base = build_formulation(inst, "hubo-asc", args.penalty, table)
            quad = quadratize(base.objective, default_quadratization_scale(base.objective))
            poly = quad.poly
            encoding = "quadratized(binary_ascending)"
        else:
            form = build_formulation(inst, kind, args.penalty, table)
            poly = form.objective
            encoding = form.encoding.value
            if backend == "statevector":
                width = formulation_width(form, d_sum=table.d_sum)
        lo = poly.exhaustive_min()[1]
        hi = poly.exhaustive_max()[1]
        span = hi - lo if hi > lo else 1.0
        cfg = GasConfig(
            backend=backend,
            max_classical_iters=args.budget_classical,
            max_quantum_queries=args.budget_quantum,
            stop_at_known_optimum=lo,
            master_seed=master,
            value_width=width,
        )
        rows = []
        hits = 0
        classical = []
        quantum = []
        for run in range(args.runs):
            trace = run_gas(poly, cfg, rng=run_seed(run, master))
            cum_c, cum_q = 1, 0
            best = trace.iterations[0].y_i if trace.iterations else trace.best_y
            for it in trace.iterations:
                cum_c += 1
                cum_q += it.l_i
                best = min(best, it.sampled_y)
                rows.append([
                    run, kind, encoding, it.i, _fmt(it.y_i), it.l_i,
                    cum_c, cum_q, _fmt(100.0 * (best - lo) / span),
                ])
            classical.append(trace.classical_queries)
            quantum.append(trace.quantum_queries)
            if trace.best_y <= lo + 1e-9:
                hits += 1
        mean_c = float(np.mean(classical))
        ci = 1.96 * float(np.std(classical)) / math.sqrt(len(classical))
        summary[kind] = {
            "runs": args.runs,
            "reached_optimum": hits,
            "mean_classical_queries": mean_c,
            "classical_queries_ci95": ci,
            "mean_quantum_queries": float(np.mean(quantum)),
            "oracle_matched": hits == args.runs,
        }
        _write_text(out_dir, f"trace_{kind}.csv", _csv_text(header, rows), hashes)

    _write_text(out_dir, "summary.json", json.dumps(summary, indent=2, sort_keys=True) + "\n", hashes)
    _write_manifest(out_dir, "solve", _echo(args), hashes)
    print(json.dumps(summary, indent=2, sort_keys=True))
    return EXIT_OK


# -- verify ---------------------------------------------------------------

GOLDEN_C = {(0, 1): -4.319, (0, 2): -4.938, (0, 3): -6.145,
            (1, 2): -4.392, (1, 3): -3.822, (2, 3): -4.784}
GOLDEN_D = {(0, 1): 1.835, (0, 2): 1.216, (0, 3): 0.010,
            (1, 2): 1.762, (1, 3): 2.333, (2, 3): 1.371}
GOLDEN_PARTITION = frozenset({frozenset({0, 3}), frozenset({1}), frozenset({2})})


def cmd_verify(args) -> int:
    inst = load_instance(args.instance) if args.instance else reference_instance()
    checks: list[tuple[str, bool, str]] = []

    def check(name: str, ok: bool, detail: str = ""):
        checks.append((name, ok, detail))

    table = coeff_table(inst)
    for (i, k), want in GOLDEN_C.items():
        got = interference_coeff(inst, i, k)
        check(f"C[{i + 1}{k + 1}] = {want}", abs(got - want) <= 1e-3, f"got {got:.4f}")
    for (i, k), want in GOLDEN_D.items():
        check(f"D[{i + 1}{k + 1}] = {want}", abs(table.d[i, k] - want) <= 1e-3,
              f"got {table.d[i, k]:.4f}")

    try:
        oracle = brute_force_cap(inst, table)
    except BudgetExceededError as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    check("optimum value 0.010", abs(oracle.best_value - 0.010) <= 1e-3,
          f"got {oracle.best_value:.4f}")
    check("co-channel partition {{1,4},{2},{3}}",
          oracle.co_channel_partition() == GOLDEN_PARTITION,
          str(oracle.co_channel_partition()))

    expectations = {"qubo": None, "hubo-asc": 67, "hubo-desc": 55}
    for kind, want_terms in expectations.items():
        form = build_formulation(inst, kind, 1.0, table)
        if want_terms is not None:
            got_terms = form.objective.stats().term_count
            check(f"{kind} expands to {want_terms} terms", got_terms == want_terms,
                  f"got {got_terms}")
        x, v = form.objective.exhaustive_min()
        dec = decode(form, x)
        check(f"{kind} optimum value matches", abs(v - oracle.best_value) <= 1e-3,
              f"got {v:.4f}")
        ok = dec.valid and _partition(dec.assignment) == GOLDEN_PARTITION
        check(f"{kind} optimum decodes to the golden partition", ok, str(dec))

    qubo = build_formulation(inst, "qubo", 1.0, table)
    spot = {
        ((0, 1), (1, 1)): 1.835, ((0, 1), (2, 1)): 1.216, ((0, 1), (3, 1)): 0.010,
        ((1, 1), (2, 1)): 1.762, ((1, 1), (3, 1)): 2.333, ((2, 1), (3, 1)): 1.371,
    }
    for (a, b), want in spot.items():
        got = qubo.objective.coefficient(
            [qubo.var_layout[a], qubo.var_layout[b]]
        )
        check(f"objective coefficient {want}", abs(got - want) <= 1e-3, f"got {got:.4f}")

    failed = [c for c in checks if not c[1]]
    for name, ok, detail in checks:
        mark = "PASS" if ok else "FAIL"
        suffix = f"  ({detail})" if (detail and not ok) else ""
        print(f"[{mark}] {name}{suffix}")
    print(f"{len(checks) - len(failed)}/{len(checks)} checks passed")
    return EXIT_OK if not failed else EXIT_MISMATCH


def _partition(assignment) -> frozenset[frozenset[int]]:
    groups: dict[int, set[int]] = {}
    for ap, ch in enumerate(assignment):
        groups.setdefault(ch, set()).add(ap)
    return frozenset(frozenset(g) for g in groups.values())


def _echo(args) -> dict:
    return {k: v for k, v in vars(args).items() if k != "func"}


# -- entry ----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gascap",
        description="Channel assignment via Grover adaptive search: "
                    "formulate objectives, estimate circuit resources, run "
                    "seeded searches, verify golden values.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, with_instance=True):
        if with_instance:
            p.add_argument("--instance", help="instance JSON file")
            p.add_argument("--synthetic", metavar="NAP,NCH",
                           help="generate a random instance of this size")
        p.add_argument("--seed", type=int, default=None,
                       help="master seed (default: $GASCAP_SEED or 0)")
        p.add_argument("--out", default="out", help="output directory")

    p = sub.add_parser("formulate", help="expand objectives and report sizes")
    common(p)
    p.add_argument("--formulation", action="append", choices=FORMULATION_KINDS,
                   default=None)
    p.add_argument("--penalty", type=float, default=1.0)
    p.set_defaults(func=cmd_formulate)

    p = sub.add_parser("estimate", help="qubit and gate resource sweep")
    common(p, with_instance=False)
    p.add_argument("--sweep", default="4:12:2", metavar="MIN:MAX:STEP")
    p.add_argument("--enum-cap", type=int, default=12,
                   help="enumerate circuits up to this many APs")
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("solve", help="seeded adaptive-search runs")
    common(p)
    p.add_argument("--formulation", action="append", choices=FORMULATION_KINDS,
                   default=None)
    p.add_argument("--penalty", type=float, default=1.0)
    p.add_argument("--backend", choices=("sv", "statevector", "ideal"), default="ideal")
    p.add_argument("--budget-classical", type=int, default=500)
    p.add_argument("--budget-quantum", type=int, default=None)
    p.add_argument("--runs", type=int, default=100)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", help="golden-value checks on the bundled instance")
    p.add_argument("--instance", help="alternate instance JSON (expects the bundled one)")
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "formulation", None) is None and hasattr(args, "formulation"):
        args.formulation = ["qubo", "hubo-asc", "hubo-desc"]
    try:
        return args.func(args)
    except BudgetExceededError as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (ValueError, IndexError, OSError, KeyError) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
