"""Command-line front end: generate | index | sweep | collapse | predict | verify.

Every randomized command requires an explicit ``--seed``; reruns with
identical flags (including ``--workers``) produce byte-identical output.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

from . import dense, ensemble, inequalities, models
from .graph import read_edge_list_path, write_edge_list_path
from .indices import (
    ADDITIVE_NAMES,
    EXCLUDE,
    EdgeFunction,
    EvaluationError,
    LOGZERO,
    MULTIPLICATIVE_NAMES,
    VertexFunction,
    additive_index,
    ln_multiplicative_index,
)


def _int_list(text: str) -> list[int]:
    return [int(x) for x in text.split(",") if x]


def _float_list(text: str) -> list[float]:
    return [float(x) for x in text.split(",") if x]


def _fmt(x: float) -> str:
    return repr(float(x))


def _build_grid(args) -> list[models.ModelSpec]:
    """Grid in deterministic order: sizes outer, parameter values inner."""
    if args.model == "br":
        if not args.n1 or not args.n2:
            raise SystemExit("error: br requires --n1 and --n2")
        if len(args.n1) != len(args.n2):
            raise SystemExit("error: --n1 and --n2 lists must have equal length")
        if not args.p:
            raise SystemExit("error: br requires --p")
        return [
            models.bipartite(n1, n2, p)
            for n1, n2 in zip(args.n1, args.n2)
            for p in args.p
        ]
    if not args.n:
        raise SystemExit(f"error: {args.model} requires --n")
    if args.model == "er":
        if not args.p:
            raise SystemExit("error: er requires --p")
        return [models.erdos_renyi(n, p) for n in args.n for p in args.p]
    if not args.r:
        raise SystemExit("error: rg requires --r")
    return [models.random_geometric(n, r) for n in args.n for r in args.r]


def _point_tag(spec: models.ModelSpec) -> str:
    if spec.model == "br":
        size = f"n1-{spec.n1}_n2-{spec.n2}"
    else:
        size = f"n{spec.n}"
    return f"{spec.model}_{size}_{spec.param_name}{_fmt(spec.param_value)}"


def cmd_generate(args) -> int:
    grid = _build_grid(args)
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    for point_id, spec in enumerate(grid):
        for replica in range(args.replicas):
            seed = models.SeedDerivation(args.seed, point_id, replica)
            g = models.generate(spec, seed)
            name = f"{_point_tag(spec)}_s{args.seed}_pt{point_id}_r{replica}.edges"
            write_edge_list_path(g, outdir / name)
            print(outdir / name)
    return 0


def cmd_index(args) -> int:
    lines = ["file,index,value_type,value,log_zero,excluded,policy"]
    for path in args.paths:
        g = read_edge_list_path(path)
        for name in args.index:
            if name in MULTIPLICATIVE_NAMES:
                res = ln_multiplicative_index(g, name, args.policy)
                lines.append(
                    f"{path},{name},ln_product,{_fmt(res.value)},"
                    f"{res.is_log_zero},{res.excluded},{args.policy}"
                )
            elif name in ADDITIVE_NAMES:
                val = additive_index(g, name, args.policy)
                lines.append(f"{path},{name},sum,{_fmt(val)},False,0,{args.policy}")
            else:
                raise SystemExit(f"error: unknown index {name!r}")
    _emit(lines, args.out)
    return 0


def cmd_sweep(args) -> int:
    grid = _build_grid(args)
    max_n = max(spec.n for spec in grid)
    if args.budget < max_n:
        raise SystemExit(f"error: budget {args.budget} must be >= max n {max_n}")
    for name in args.index:
        if name not in MULTIPLICATIVE_NAMES:
            raise SystemExit(f"error: unknown multiplicative index {name!r}")
    spec = ensemble.EnsembleSpec(
        grid=tuple(grid),
        indices=tuple(args.index),
        master_seed=args.seed,
        budget=args.budget,
        isolated_policy=args.policy,
        workers=args.workers,
    )
    rows = ensemble.sweep(spec)
    if args.out:
        ensemble.write_results_csv_path(rows, args.out)
    else:
        ensemble.write_results_csv(rows, sys.stdout)
    return 0


def cmd_collapse(args) -> int:
    tables = []
    for path in args.csvs:
        rows = ensemble.read_results_csv_path(path)
        for label, group in ensemble.split_curves(rows):
            tables.append((f"{Path(path).name}:{label}", group))
    try:
        report = ensemble.collapse_check(tables, args.index)
    except ValueError as exc:
        raise SystemExit(f"error: {exc}")

    lines = [
        "index,curve_a,curve_b,max_abs_deviation,k_at_max,pooled_sem,tolerance,within"
    ]
    for pair in report.pairs:
        lines.append(
            f"{report.index},{pair.label_a},{pair.label_b},{_fmt(pair.max_abs_deviation)},"
            f"{_fmt(pair.k_at_max)},{_fmt(pair.pooled_sem)},"
            f"{_fmt(pair.tolerance(args.tolerance))},{pair.within(args.tolerance)}"
        )
    _emit(lines, args.out)

    ok = report.passed(args.tolerance)
    print(
        f"collapse[{report.index}]: max deviation {report.max_deviation:.6g} "
        f"at <k>={report.k_at_max:.6g} over {len(report.curves)} curves -> "
        f"{'PASS' if ok else 'FAIL'} (tolerance floor {args.tolerance})"
    )
    if report.dense_deviation is not None:
        print(
            f"collapse[{report.index}]: dense-regime (<k> >= {report.dense_threshold:g}) "
            f"max |curve - prediction| = {report.dense_deviation:.6g}"
        )
    return 0 if ok else 1


def cmd_predict(args) -> int:
    try:
        if args.model == "br":
            if args.d1 is None or args.d2 is None:
                raise SystemExit("error: br prediction requires --d1 and --d2")
            if args.per_vertex:
                value = dense.predict_br_per_vertex(args.index, args.d1, args.d2)
            else:
                value = dense.predict_br(args.index, args.d1, args.d2)
        else:
            if args.k is None:
                raise SystemExit("error: er/rg prediction requires --k")
            value = dense.predict(args.model, args.index, args.k)
    except (ValueError, KeyError) as exc:
        raise SystemExit(f"error: {exc}")
    print(_fmt(value))
    return 0


def _parse_custom(defs: list[str], arity: str):
    out = []
    safe = {"sqrt": math.sqrt, "log": math.log, "exp": math.exp, "pi": math.pi, "e": math.e}
    for item in defs:
        if "=" not in item:
            raise SystemExit(f"error: custom function must be NAME=EXPR, got {item!r}")
        name, expr = item.split("=", 1)
        code = compile(expr, f"<{name}>", "eval")
        if arity == "vertex":
            fn = lambda d, _c=code: float(eval(_c, {"__builtins__": {}}, {**safe, "d": d}))
            out.append(VertexFunction(name, fn))
        else:
            fn = lambda a, b, _c=code: float(
                eval(_c, {"__builtins__": {}}, {**safe, "a": a, "b": b, "du": a, "dv": b})
            )
            out.append(EdgeFunction(name, fn))
    return out


def cmd_verify(args) -> int:
    functions = list(MULTIPLICATIVE_NAMES)
    functions += _parse_custom(args.custom_vertex, "vertex")
    functions += _parse_custom(args.custom_edge, "edge")
    try:
        rows = inequalities.verify_corpus(
            args.seed,
            sizes=tuple(args.sizes),
            graphs_per_size=args.graphs,
            functions=functions,
        )
    except (EvaluationError, ValueError) as exc:
        print(f"verification aborted: {exc}", file=sys.stderr)
        return 2

    if args.out:
        with open(args.out, "w", newline="\n") as fh:
            inequalities.write_report_csv(rows, fh)

    flagged = [r for r in rows if not r.check.hypothesis_ok]
    failures = [r for r in rows if r.check.hypothesis_ok and not r.check.holds]
    print(
        f"verify: {len(rows)} checks, {len(failures)} failures, "
        f"{len(flagged)} flagged (hypothesis not met, not asserted)"
    )
    for r in failures[:20]:
        c = r.check
        print(
            f"  FAIL {c.inequality} on {r.model} n={r.n} param={r.param} "
            f"function={c.function}: lhs={c.lhs} rhs={c.rhs} slack={c.slack}"
        )
    return 0 if not failures else 1


def _emit(lines: list[str], out: str | None) -> None:
    text = "\n".join(lines) + "\n"
    if out:
        with open(out, "w", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mtindex",
        description="Multiplicative topological indices on random networks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_model_flags(p, budgeted: bool):
        p.add_argument("--model", choices=("er", "rg", "br"), required=True)
        p.add_argument("--n", type=_int_list, default=[], help="comma list of sizes")
        p.add_argument("--n1", type=_int_list, default=[], help="br part-1 sizes")
        p.add_argument("--n2", type=_int_list, default=[], help="br part-2 sizes")
        p.add_argument("--p", type=_float_list, default=[], help="comma list of probabilities")
        p.add_argument("--r", type=_float_list, default=[], help="comma list of radii")
        p.add_argument("--seed", type=int, required=True, help="master seed (required)")
        if budgeted:
            p.add_argument("--index", type=lambda s: s.split(","), required=True)
            p.add_argument("--budget", type=float, default=ensemble.DEFAULT_BUDGET)
            p.add_argument("--workers", type=int, default=1)

    p = sub.add_parser("generate", help="write edge-list files for sampled instances")
    add_model_flags(p, budgeted=False)
    p.add_argument("--replicas", type=int, default=1)
    p.add_argument("--out", default=".", help="output directory")
    p.set_defaults(fn=cmd_generate)

    p = sub.add_parser("index", help="compute index values for edge-list files")
    p.add_argument("paths", nargs="+")
    p.add_argument("--index", type=lambda s: s.split(","), required=True)
    p.add_argument("--policy", choices=(EXCLUDE, LOGZERO), default=EXCLUDE)
    p.add_argument("--out", default=None)
    p.set_defaults(fn=cmd_index)

    p = sub.add_parser("sweep", help="run a replica ensemble over a parameter grid")
    add_model_flags(p, budgeted=True)
    p.add_argument("--policy", choices=(EXCLUDE, LOGZERO), default=EXCLUDE)
    p.add_argument("--out", default=None, help="results CSV path (default stdout)")
    p.set_defaults(fn=cmd_sweep)

    p = sub.add_parser("collapse", help="scaling-collapse check over result CSVs")
    p.add_argument("csvs", nargs="+")
    p.add_argument("--index", required=True)
    p.add_argument(
        "--tolerance",
        type=float,
        default=0.05,
        help="deviation floor; the effective bound is max(floor, 5*pooled sem)",
    )
    p.add_argument("--out", default=None, help="pairwise report CSV path")
    p.set_defaults(fn=cmd_collapse)

    p = sub.add_parser("predict", help="dense-limit prediction of mean ln X per vertex")
    p.add_argument("--model", choices=("er", "rg", "br"), required=True)
    p.add_argument("--index", required=True)
    p.add_argument("--k", type=float, default=None, help="mean degree (er/rg)")
    p.add_argument("--d1", type=float, default=None, help="br part-1 mean degree")
    p.add_argument("--d2", type=float, default=None, help="br part-2 mean degree")
    p.add_argument(
        "--per-vertex",
        action="store_true",
        help="normalize br prediction per total vertex count instead of per part",
    )
    p.set_defaults(fn=cmd_predict)

    p = sub.add_parser("verify", help="numeric inequality verification over a graph corpus")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--sizes", type=_int_list, default=list(inequalities.DEFAULT_SIZES))
    p.add_argument("--graphs", type=int, default=inequalities.DEFAULT_GRAPHS_PER_SIZE)
    p.add_argument("--custom-vertex", action="append", default=[], metavar="NAME=EXPR")
    p.add_argument("--custom-edge", action="append", default=[], metavar="NAME=EXPR")
    p.add_argument("--out", default=None, help="report CSV path")
    p.set_defaults(fn=cmd_verify)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.fn(args)


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
