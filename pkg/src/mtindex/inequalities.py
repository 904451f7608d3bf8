"""Numeric verification of sum-vs-product index inequalities.

Each check compares the additive and multiplicative invariants of one graph
under one positive degree function F.  All comparisons run in 192-bit
mpmath arithmetic because the raw product appears un-logged in several of the
bounds and overflows doubles already on mid-sized graphs; reported lhs/rhs
are rounded to floats afterwards (possibly to inf) while ``holds`` is decided
at full precision.

Conventions: every inequality is oriented ``lhs <= rhs``; ``slack = rhs -
lhs``; ``holds`` tolerates slack down to ``-1e-9 * max(1, |lhs|, |rhs|)``.
A check whose side conditions fail is still evaluated but flagged with
``hypothesis_ok=False`` so callers can report it without asserting it.

The converse-Jensen window is consumed as a bound on ln F (the exponential
convexity argument behind the bound applies to the log-factors), with the
window endpoints exponentiated in the conclusion exactly as stated.  The
Petrovic-style sum bound carries an implicit sign-coherence hypothesis: all
log-factors >= 0 or all <= 0; :func:`petrovic_counterexample` builds a
mixed-sign instance that genuinely violates the bare inequality.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence, TextIO, Union

from mpmath import mp

from .graph import Graph, build_graph
from .indices import (
    EXCLUDE,
    EdgeFunction,
    MULTIPLICATIVE_INDICES,
    VertexFunction,
    _checked,
)
from .models import ModelSpec, SeedDerivation, bipartite, erdos_renyi, generate, random_geometric

_PREC = 192          # bits; well above the 128-bit floor the bounds need
RELATIVE_TOL = 1e-9

FunctionKind = Union[str, VertexFunction, EdgeFunction]

INEQUALITIES = (
    "jensen",
    "jensen_converse",
    "kober_lower",
    "kober_upper",
    "petrovic_sum",
    "exp_linear",
)

REPORT_COLUMNS = "inequality,model,n,param,function,lhs,rhs,slack,holds,hypothesis_ok"


@dataclass(frozen=True)
class BoundsWindow:
    """Envelope [a, b] of ln F over a graph's realized degrees."""

    a: float
    b: float

    def __post_init__(self):
        if self.a > self.b:
            raise ValueError(f"window requires a <= b, got ({self.a}, {self.b})")


@dataclass(frozen=True)
class InequalityCheck:
    inequality: str
    function: str
    lhs: float
    rhs: float
    slack: float
    holds: bool
    hypothesis_ok: bool
    note: str = ""


def _function_values(g: Graph, f: FunctionKind) -> tuple[str, str, list[float]]:
    """(arity, name, realized F values in canonical order).

    Vertex functions are evaluated over non-isolated vertices only (exclude
    policy with effective n); edge endpoints always have degree >= 1.
    """
    if isinstance(f, str):
        b = MULTIPLICATIVE_INDICES.get(f)
        if b is None:
            raise KeyError(f"unknown built-in function {f!r}")
        arity, fn, name = b.arity, b.factor, b.name
    elif isinstance(f, VertexFunction):
        arity, fn, name = "vertex", _checked(f.fn, f.name), f.name
    elif isinstance(f, EdgeFunction):
        arity, fn, name = "edge", _checked(f.fn, f.name), f.name
    else:
        raise TypeError(f"not a degree function: {f!r}")

    if arity == "vertex":
        values = [fn(d) for d in g.degrees if d > 0]
    else:
        values = [fn(du, dv) for du, dv in g.edge_degree_pairs()]
    for v in values:
        if not math.isfinite(v) or v <= 0.0:
            raise ValueError(f"function {name!r} produced nonpositive value {v}")
    return arity, name, values


def _finish(inequality, name, lhs, rhs, hypothesis_ok=True, note=""):
    slack = rhs - lhs
    tol = RELATIVE_TOL * max(mp.one, abs(lhs), abs(rhs))
    return InequalityCheck(
        inequality=inequality,
        function=name,
        lhs=float(lhs),
        rhs=float(rhs),
        slack=float(slack),
        holds=bool(slack >= -tol),
        hypothesis_ok=hypothesis_ok,
        note=note,
    )


def _vacuous(inequality, name):
    return InequalityCheck(inequality, name, 0.0, 0.0, 0.0, True, True, "vacuous: no realized values")


class _Prepared:
    """Shared per-(graph, function) quantities, all in working precision."""

    def __init__(self, g: Graph, f: FunctionKind):
        self.arity, self.name, raw = _function_values(g, f)
        self.k = len(raw)
        with mp.workprec(_PREC):
            self.values = [mp.mpf(v) for v in raw]
            self.logs = [mp.log(v) for v in self.values]
            self.sum = mp.fsum(self.values)
            self.sum_sq = mp.fsum(v * v for v in self.values)
            self.log_sum = mp.fsum(self.logs)


def check_jensen(g: Graph, f: FunctionKind) -> InequalityCheck:
    """Geometric mean of the factors <= arithmetic mean: X_prod^(1/k) <= X_sum/k."""
    p = _Prepared(g, f)
    if p.k == 0:
        return _vacuous("jensen", p.name)
    with mp.workprec(_PREC):
        lhs = mp.exp(p.log_sum / p.k)
        rhs = p.sum / p.k
        return _finish("jensen", p.name, lhs, rhs)


def check_jensen_converse(
    g: Graph, f: FunctionKind, window: BoundsWindow | None = None
) -> InequalityCheck:
    """Converse bound X_sum/k <= e^a + e^b - e^(a+b)/X_prod^(1/k).

    ``window`` must bound ln F over the realized degrees; by default it is the
    realized min/max envelope.  A violated window flags the check instead of
    asserting it.
    """
    p = _Prepared(g, f)
    if p.k == 0:
        return _vacuous("jensen_converse", p.name)
    with mp.workprec(_PREC):
        lo, hi = min(p.logs), max(p.logs)
        if window is None:
            a, b = lo, hi
            hypothesis_ok, note = True, ""
        else:
            a, b = mp.mpf(window.a), mp.mpf(window.b)
            eps = mp.mpf("1e-12") * max(mp.one, abs(a), abs(b))
            hypothesis_ok = bool(a <= lo + eps and hi <= b + eps)
            note = "" if hypothesis_ok else (
                f"window [{float(a)}, {float(b)}] does not bound realized ln F "
                f"range [{float(lo)}, {float(hi)}]"
            )
        lhs = p.sum / p.k
        rhs = mp.exp(a) + mp.exp(b) - mp.exp(a + b) * mp.exp(-p.log_sum / p.k)
        return _finish("jensen_converse", p.name, lhs, rhs, hypothesis_ok, note)


def check_kober(g: Graph, f: FunctionKind) -> tuple[InequalityCheck, InequalityCheck]:
    """Two-sided bound linking X_sum over F^2, (X_sum over F)^2, and X_prod^(2/k)."""
    p = _Prepared(g, f)
    if p.k == 0:
        return _vacuous("kober_lower", p.name), _vacuous("kober_upper", p.name)
    with mp.workprec(_PREC):
        gm_sq = mp.exp(2 * p.log_sum / p.k)
        square = p.sum * p.sum
        lower = _finish("kober_lower", p.name, p.sum_sq + p.k * (p.k - 1) * gm_sq, square)
        upper = _finish("kober_upper", p.name, square, (p.k - 1) * p.sum_sq + p.k * gm_sq)
        return lower, upper


def check_petrovic_sum(g: Graph, f: FunctionKind) -> InequalityCheck:
    """Sum bound X_sum <= X_prod + (k - 1), valid when log-factors share a sign."""
    p = _Prepared(g, f)
    with mp.workprec(_PREC):
        eps = mp.mpf("1e-12")
        if p.k == 0:
            coherent, note = True, ""
        else:
            coherent = bool(min(p.logs) >= -eps) or bool(max(p.logs) <= eps)
            note = "" if coherent else "mixed-sign log-factors: hypothesis violated"
        lhs = p.sum
        rhs = mp.exp(p.log_sum) + (p.k - 1)
        return _finish("petrovic_sum", p.name, lhs, rhs, coherent, note)


def check_exp_linear(g: Graph, f: FunctionKind) -> InequalityCheck:
    """Tangent-line bound X_prod >= (sum of log-factors) + 1; unconditional."""
    p = _Prepared(g, f)
    with mp.workprec(_PREC):
        lhs = p.log_sum + 1
        rhs = mp.exp(p.log_sum)
        return _finish("exp_linear", p.name, lhs, rhs)


def run_all_checks(
    g: Graph, f: FunctionKind, window: BoundsWindow | None = None
) -> list[InequalityCheck]:
    lower, upper = check_kober(g, f)
    return [
        check_jensen(g, f),
        check_jensen_converse(g, f, window),
        lower,
        upper,
        check_petrovic_sum(g, f),
        check_exp_linear(g, f),
    ]


def petrovic_counterexample() -> tuple[Graph, VertexFunction]:
    """Mixed-sign instance violating the bare sum bound.

    A 3-vertex path with F(1)=e^-3, F(2)=e^3 gives X_sum ~ 20.19 while
    X_prod + n - 1 ~ 2.05.  (With symmetric degree rules on simple graphs a
    two-factor mixed-sign instance does not exist, so this is the minimal
    graph realization.)
    """
    g = build_graph(3, [(0, 1), (1, 2)])
    f = VertexFunction("mixed_sign_demo", lambda d: math.exp(3.0) if d == 2 else math.exp(-3.0))
    return g, f


@dataclass(frozen=True)
class CorpusCheck:
    model: str
    n: int
    param: float
    check: InequalityCheck


DEFAULT_SIZES = (8, 16, 32)
DEFAULT_GRAPHS_PER_SIZE = 100


def corpus_model_points(
    sizes: Sequence[int] = DEFAULT_SIZES,
    graphs_per_size: int = DEFAULT_GRAPHS_PER_SIZE,
) -> list[tuple[ModelSpec, int]]:
    """(model point, replica count) cells of the default verification corpus.

    Per model and size: a 10-value parameter grid, graphs split evenly over
    the grid.
    """
    params = [(i + 1) / 10.0 for i in range(10)]
    reps = max(1, graphs_per_size // len(params))
    cells = []
    for n in sizes:
        for p in params:
            cells.append((erdos_renyi(n, p), reps))
    for n in sizes:
        for p in params:
            cells.append((random_geometric(n, p * math.sqrt(2.0)), reps))
    for n in sizes:
        n1 = n // 2
        for p in params:
            cells.append((bipartite(n1, n - n1, p), reps))
    return cells


def verify_corpus(
    master_seed: int,
    sizes: Sequence[int] = DEFAULT_SIZES,
    graphs_per_size: int = DEFAULT_GRAPHS_PER_SIZE,
    functions: Sequence[FunctionKind] | None = None,
    include_counterexample: bool = True,
) -> list[CorpusCheck]:
    """Run every check over the sampled corpus; deterministic in master_seed."""
    if functions is None:
        functions = list(MULTIPLICATIVE_INDICES)
    rows: list[CorpusCheck] = []
    for point_id, (spec, reps) in enumerate(corpus_model_points(sizes, graphs_per_size)):
        for replica in range(reps):
            g = generate(spec, SeedDerivation(master_seed, point_id, replica))
            for f in functions:
                for check in run_all_checks(g, f):
                    rows.append(CorpusCheck(spec.model, spec.n, spec.param_value, check))
    if include_counterexample:
        g, f = petrovic_counterexample()
        rows.append(CorpusCheck("counterexample", g.n, 0.0, check_petrovic_sum(g, f)))
    return rows


def all_asserted_hold(rows: Sequence[CorpusCheck]) -> bool:
    """True when every check whose hypotheses held also holds numerically."""
    return all(row.check.holds for row in rows if row.check.hypothesis_ok)


def write_report_csv(rows: Sequence[CorpusCheck], out: TextIO) -> None:
    out.write(REPORT_COLUMNS + "\n")
    for row in rows:
        c = row.check
        out.write(
            f"{c.inequality},{row.model},{row.n},{repr(float(row.param))},{c.function},"
            f"{repr(c.lhs)},{repr(c.rhs)},{repr(c.slack)},{c.holds},{c.hypothesis_ok}\n"
        )
