"""Degree-based topological indices in log-space.

Two families of graph invariants over a degree function F:

* additive:        ``X_sum  = sum of F over vertices (or edges)``
* multiplicative:  ``X_prod = product of F over vertices (or edges)``

Multiplicative values explode far beyond double range (the second
multiplicative Zagreb index of a 1000-vertex network with mean degree 10 is
around e^23000), so this module never forms the raw product: it returns
``ln X_prod`` accumulated as a plain sequential sum of log-factors in
canonical vertex/edge order.  :func:`exact_ln_oracle` recomputes the product
itself in >=128-bit precision for small graphs and is the independent check
on that accumulation.

Vertex-based products are zero on graphs with isolated vertices.  The
``isolated_policy`` argument picks between excluding those vertices from the
product (reporting how many were skipped) and returning an explicit log-zero
sentinel; edge-based indices are unaffected since edge endpoints always have
degree >= 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, Union

import numpy as np
from mpmath import mp

from .graph import Graph

EXCLUDE = "exclude"
LOGZERO = "logzero"
POLICIES = (EXCLUDE, LOGZERO)

# Oracle precision: 240-bit significand, comfortably above the 128-bit floor.
_ORACLE_PREC = 240


class EvaluationError(ValueError):
    """A degree function produced a nonpositive or non-finite factor."""


@dataclass(frozen=True)
class VertexFunction:
    """Custom vertex rule d -> F(d), required positive and finite for d >= 1."""

    name: str
    fn: Callable[[int], float]


@dataclass(frozen=True)
class EdgeFunction:
    """Custom symmetric edge rule (d_u, d_v) -> F, positive and finite for d >= 1."""

    name: str
    fn: Callable[[int, int], float]


IndexKind = Union[str, VertexFunction, EdgeFunction]


@dataclass(frozen=True)
class LogIndexValue:
    """ln of a multiplicative index; ``-inf`` encodes a zero product.

    ``excluded`` counts isolated vertices skipped under the exclude policy.
    """

    value: float
    excluded: int = 0

    @property
    def is_log_zero(self) -> bool:
        return math.isinf(self.value) and self.value < 0

    @classmethod
    def log_zero(cls) -> "LogIndexValue":
        return cls(value=-math.inf)


def _checked(fn: Callable, name: str):
    def wrapped(*degrees: int) -> float:
        val = fn(*degrees)
        if not math.isfinite(val) or val <= 0.0:
            raise EvaluationError(
                f"function {name!r} returned {val!r} at degree{'s' if len(degrees) > 1 else ''} "
                f"{degrees if len(degrees) > 1 else degrees[0]}"
            )
        return val

    return wrapped


@dataclass(frozen=True)
class _Builtin:
    name: str
    arity: str                      # "vertex" | "edge"
    factor: Callable                # F itself
    ln_factor: Callable             # scalar ln F
    ln_factor_np: Callable          # vectorized ln F over int arrays
    mp_factor: Callable             # high-precision F (mpmath)


def _mpf(x) -> mp.mpf:
    return mp.mpf(int(x))


MULTIPLICATIVE_INDICES: dict[str, _Builtin] = {
    b.name: b
    for b in (
        _Builtin(
            "nk", "vertex",
            factor=lambda d: float(d),
            ln_factor=lambda d: math.log(d),
            ln_factor_np=lambda d: np.log(d),
            mp_factor=lambda d: _mpf(d),
        ),
        _Builtin(
            "pi1", "vertex",
            factor=lambda d: float(d * d),
            ln_factor=lambda d: 2.0 * math.log(d),
            ln_factor_np=lambda d: 2.0 * np.log(d),
            mp_factor=lambda d: _mpf(d) ** 2,
        ),
        _Builtin(
            "pi2", "edge",
            factor=lambda a, b: float(a * b),
            ln_factor=lambda a, b: math.log(a * b),
            ln_factor_np=lambda a, b: np.log(a * b),
            mp_factor=lambda a, b: _mpf(a) * b,
        ),
        _Builtin(
            "pi1s", "edge",
            factor=lambda a, b: float(a + b),
            ln_factor=lambda a, b: math.log(a + b),
            ln_factor_np=lambda a, b: np.log(a + b),
            mp_factor=lambda a, b: _mpf(a + b),
        ),
        _Builtin(
            "rpi", "edge",
            factor=lambda a, b: (a * b) ** -0.5,
            ln_factor=lambda a, b: -0.5 * math.log(a * b),
            ln_factor_np=lambda a, b: -0.5 * np.log(a * b),
            mp_factor=lambda a, b: 1 / mp.sqrt(_mpf(a) * b),
        ),
        _Builtin(
            "hpi", "edge",
            factor=lambda a, b: 2.0 / (a + b),
            ln_factor=lambda a, b: math.log(2.0 / (a + b)),
            ln_factor_np=lambda a, b: np.log(2.0 / (a + b)),
            mp_factor=lambda a, b: mp.mpf(2) / (a + b),
        ),
        _Builtin(
            "chipi", "edge",
            factor=lambda a, b: (a + b) ** -0.5,
            ln_factor=lambda a, b: -0.5 * math.log(a + b),
            ln_factor_np=lambda a, b: -0.5 * np.log(a + b),
            mp_factor=lambda a, b: 1 / mp.sqrt(_mpf(a + b)),
        ),
        _Builtin(
            "idpi", "edge",
            factor=lambda a, b: 1.0 / (a * a) + 1.0 / (b * b),
            ln_factor=lambda a, b: math.log(1.0 / (a * a) + 1.0 / (b * b)),
            ln_factor_np=lambda a, b: np.log(1.0 / (a * a) + 1.0 / (b * b)),
            mp_factor=lambda a, b: 1 / _mpf(a) ** 2 + 1 / _mpf(b) ** 2,
        ),
        _Builtin(
            # Geometric-arithmetic edge rule 2*sqrt(ab)/(a+b); exploratory,
            # no dense-limit counterpart.
            "gapi", "edge",
            factor=lambda a, b: 2.0 * math.sqrt(a * b) / (a + b),
            ln_factor=lambda a, b: math.log(2.0 * math.sqrt(a * b) / (a + b)),
            ln_factor_np=lambda a, b: np.log(2.0 * np.sqrt(a * b) / (a + b)),
            mp_factor=lambda a, b: 2 * mp.sqrt(_mpf(a) * b) / (a + b),
        ),
    )
}

# Additive built-ins: (arity, term rule, value of an isolated-vertex term or
# None when the term is undefined at d=0 and the policy must decide).
_ADDITIVE: dict[str, tuple[str, Callable, float | None]] = {
    "m1": ("vertex", lambda d: float(d * d), 0.0),
    "m2": ("edge", lambda a, b: float(a * b), None),
    "r": ("edge", lambda a, b: (a * b) ** -0.5, None),
    "h": ("edge", lambda a, b: 2.0 / (a + b), None),
    "chi": ("edge", lambda a, b: (a + b) ** -0.5, None),
    "id": ("vertex", lambda d: 1.0 / d, None),
}

MULTIPLICATIVE_NAMES = tuple(MULTIPLICATIVE_INDICES)
ADDITIVE_NAMES = tuple(_ADDITIVE)


def _resolve(kind: IndexKind) -> tuple[str, Callable, str]:
    """Return (arity, scalar ln-factor, display name) for any index kind."""
    if isinstance(kind, str):
        try:
            b = MULTIPLICATIVE_INDICES[kind]
        except KeyError:
            raise KeyError(f"unknown multiplicative index {kind!r}") from None
        return b.arity, b.ln_factor, b.name
    if isinstance(kind, VertexFunction):
        f = _checked(kind.fn, kind.name)
        return "vertex", (lambda d: math.log(f(d))), kind.name
    if isinstance(kind, EdgeFunction):
        f = _checked(kind.fn, kind.name)
        return "edge", (lambda a, b: math.log(f(a, b))), kind.name
    raise TypeError(f"not an index kind: {kind!r}")


def _check_policy(policy: str) -> None:
    if policy not in POLICIES:
        raise ValueError(f"unknown isolated policy {policy!r}")


def ln_multiplicative_index(
    g: Graph, kind: IndexKind, isolated_policy: str = EXCLUDE, compensated: bool = False
) -> LogIndexValue:
    """ln of the multiplicative index of ``g``.

    Factors are accumulated by plain sequential summation in canonical
    vertex/edge order; ``compensated=True`` switches the reduction to
    ``math.fsum``.  An empty product yields ``Finite(0)``.
    """
    _check_policy(isolated_policy)
    arity, ln_factor, _ = _resolve(kind)
    terms = []
    if arity == "vertex":
        excluded = 0
        for d in g.degrees:
            if d == 0:
                if isolated_policy == LOGZERO:
                    return LogIndexValue.log_zero()
                excluded += 1
                continue
            terms.append(ln_factor(d))
        return LogIndexValue(_reduce(terms, compensated), excluded)
    for du, dv in g.edge_degree_pairs():
        terms.append(ln_factor(du, dv))
    return LogIndexValue(_reduce(terms, compensated))


def _reduce(terms: list[float], compensated: bool) -> float:
    if compensated:
        return math.fsum(terms)
    total = 0.0
    for t in terms:
        total += t
    return total


def additive_index(
    g: Graph, kind: IndexKind, isolated_policy: str = EXCLUDE, compensated: bool = False
) -> float:
    """Additive index of ``g`` (sequential sum in canonical order).

    Isolated vertices: terms that are defined at d=0 (e.g. the first Zagreb
    index) are included; undefined terms (inverse degree, custom functions)
    are skipped under ``exclude`` and make the sum +inf under ``logzero``,
    matching the divergence of 1/d at d=0.
    """
    _check_policy(isolated_policy)
    if isinstance(kind, str):
        try:
            arity, term, zero_term = _ADDITIVE[kind]
        except KeyError:
            raise KeyError(f"unknown additive index {kind!r}") from None
    elif isinstance(kind, VertexFunction):
        arity, term, zero_term = "vertex", _checked(kind.fn, kind.name), None
    elif isinstance(kind, EdgeFunction):
        arity, term, zero_term = "edge", _checked(kind.fn, kind.name), None
    else:
        raise TypeError(f"not an index kind: {kind!r}")

    terms = []
    if arity == "vertex":
        for d in g.degrees:
            if d == 0:
                if zero_term is not None:
                    terms.append(zero_term)
                elif isolated_policy == LOGZERO:
                    return math.inf
                continue
            terms.append(term(d))
        return _reduce(terms, compensated)
    for du, dv in g.edge_degree_pairs():
        terms.append(term(du, dv))
    return _reduce(terms, compensated)


def exact_ln_oracle(g: Graph, kind: IndexKind, isolated_policy: str = EXCLUDE) -> LogIndexValue:
    """Independent oracle: form the product itself in 240-bit arithmetic, log once.

    Restricted to n <= 64; used to bound the log-space accumulation error of
    :func:`ln_multiplicative_index`.
    """
    _check_policy(isolated_policy)
    if g.n > 64:
        raise ValueError(f"oracle restricted to n <= 64 graphs, got n={g.n}")
    if isinstance(kind, str):
        b = MULTIPLICATIVE_INDICES.get(kind)
        if b is None:
            raise KeyError(f"unknown multiplicative index {kind!r}")
        arity, mp_factor = b.arity, b.mp_factor
    elif isinstance(kind, VertexFunction):
        f = _checked(kind.fn, kind.name)
        arity, mp_factor = "vertex", (lambda d: mp.mpf(f(d)))
    elif isinstance(kind, EdgeFunction):
        f = _checked(kind.fn, kind.name)
        arity, mp_factor = "edge", (lambda a, b: mp.mpf(f(a, b)))
    else:
        raise TypeError(f"not an index kind: {kind!r}")

    with mp.workprec(_ORACLE_PREC):
        product = mp.one
        excluded = 0
        if arity == "vertex":
            for d in g.degrees:
                if d == 0:
                    if isolated_policy == LOGZERO:
                        return LogIndexValue.log_zero()
                    excluded += 1
                    continue
                product *= mp_factor(d)
        else:
            for du, dv in g.edge_degree_pairs():
                product *= mp_factor(du, dv)
        return LogIndexValue(float(mp.log(product)), excluded)


def ln_indices_from_arrays(
    deg: np.ndarray,
    du: np.ndarray,
    dv: np.ndarray,
    kinds: Iterable[str],
    isolated_policy: str = EXCLUDE,
) -> list[LogIndexValue]:
    """Vectorized bulk evaluation of built-in indices from degree arrays.

    ``deg`` is the full degree sequence; ``du``/``dv`` are edge endpoint
    degrees in canonical edge order.  This is the ensemble fast path; its
    agreement with :func:`ln_multiplicative_index` is pinned by tests.
    """
    _check_policy(isolated_policy)
    nonzero = deg[deg > 0]
    excluded = int(deg.shape[0] - nonzero.shape[0])
    out = []
    for kind in kinds:
        b = MULTIPLICATIVE_INDICES.get(kind)
        if b is None:
            raise KeyError(f"unknown multiplicative index {kind!r} (bulk path is built-ins only)")
        if b.arity == "vertex":
            if excluded and isolated_policy == LOGZERO:
                out.append(LogIndexValue.log_zero())
                continue
            total = float(np.sum(b.ln_factor_np(nonzero))) if nonzero.size else 0.0
            out.append(LogIndexValue(total, excluded))
        else:
            total = float(np.sum(b.ln_factor_np(du, dv))) if du.size else 0.0
            out.append(LogIndexValue(total))
    return out
