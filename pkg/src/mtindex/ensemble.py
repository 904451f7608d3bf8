"""Seeded replica ensembles over model grids, aggregation, and collapse checks.

Replicas are the unit of parallel work: replica ``i`` of grid point ``j`` is a
pure function of (master_seed, j, i), so any partition of the replica range
across workers reproduces the same per-replica values, and the ordered
reduction below yields bitwise-identical statistics for any worker count.

Results are written as a flat CSV, one row per (grid point, index), with
floats serialized via ``repr`` so reruns are byte-identical.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Sequence, TextIO

import numpy as np

from .dense import DENSE_REGIME_MEAN_DEGREE, UnsupportedIndexError, scaling_curve
from .indices import EXCLUDE, LOGZERO, MULTIPLICATIVE_INDICES, ln_indices_from_arrays
from .models import ModelSpec, SeedDerivation, mean_degree, sample_degree_arrays

DEFAULT_BUDGET = 1e5

RESULTS_COLUMNS = (
    "model,n,n1,n2,param_name,param_value,index,policy,replicas,degenerate,"
    "mean_k_theory,mean_k_empirical,mean_ln,sem,mean_ln_over_n,master_seed"
)


@dataclass(frozen=True)
class EnsembleSpec:
    """A sweep: grid of model points sharing one model kind, plus run settings.

    The replica count at a point with n vertices is ceil(budget / n), never
    below 1.
    """

    grid: tuple[ModelSpec, ...]
    indices: tuple[str, ...]
    master_seed: int
    budget: float = DEFAULT_BUDGET
    isolated_policy: str = EXCLUDE
    workers: int = 1

    def __post_init__(self):
        if not self.grid:
            raise ValueError("grid must be nonempty")
        if not self.indices:
            raise ValueError("index set must be nonempty")
        for name in self.indices:
            if name not in MULTIPLICATIVE_INDICES:
                raise ValueError(f"unknown multiplicative index {name!r}")
        kinds = {spec.model for spec in self.grid}
        if len(kinds) > 1:
            raise ValueError(f"grid mixes model kinds {sorted(kinds)}")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")


def replicas_for(n: int, budget: float = DEFAULT_BUDGET) -> int:
    return max(1, math.ceil(budget / n))


@dataclass(frozen=True)
class EnsembleStats:
    """Aggregate of ln X_prod over the non-degenerate replicas of one point.

    ``degenerate`` counts log-zero replicas under the logzero policy, and the
    total number of excluded isolated vertices under the exclude policy.
    """

    spec: ModelSpec
    index: str
    policy: str
    replicas: int
    degenerate: int
    mean_k_theory: float
    mean_k_empirical: float
    mean_k_sem: float
    mean_ln: float
    sem: float
    master_seed: int

    @property
    def mean_ln_over_n(self) -> float:
        return self.mean_ln / self.spec.n


def _replica_block(
    point: ModelSpec,
    indices: tuple[str, ...],
    policy: str,
    master_seed: int,
    point_id: int,
    start: int,
    stop: int,
):
    """Evaluate replicas [start, stop); one generated instance serves all indices."""
    count = stop - start
    values = np.empty((len(indices), count))
    excluded = np.zeros((len(indices), count), dtype=np.int64)
    k_emp = np.empty(count)
    for j in range(count):
        replica = start + j
        try:
            rng = SeedDerivation(master_seed, point_id, replica).generator()
            deg, du, dv = sample_degree_arrays(point, rng)
            results = ln_indices_from_arrays(deg, du, dv, indices, policy)
        except Exception as exc:
            raise RuntimeError(
                f"replica failed at seed triple (master_seed={master_seed}, "
                f"point_id={point_id}, replica_index={replica}): {exc}"
            ) from exc
        k_emp[j] = 2.0 * du.shape[0] / point.n
        for i, res in enumerate(results):
            values[i, j] = res.value
            excluded[i, j] = res.excluded
    return values, excluded, k_emp


def _mean_sem(xs: Sequence[float]) -> tuple[float, float]:
    # fsum keeps the reduction exact, hence independent of chunking.
    n = len(xs)
    if n == 0:
        return math.nan, 0.0
    mean = math.fsum(xs) / n
    if n == 1:
        return mean, 0.0
    var = math.fsum((x - mean) ** 2 for x in xs) / (n - 1)
    return mean, math.sqrt(var / n)


def run_point(
    point: ModelSpec,
    indices: Sequence[str],
    replicas: int,
    master_seed: int,
    *,
    point_id: int = 0,
    isolated_policy: str = EXCLUDE,
    workers: int = 1,
    _executor: ProcessPoolExecutor | None = None,
) -> list[EnsembleStats]:
    """Run one grid point; returns one :class:`EnsembleStats` per index."""
    indices = tuple(indices)
    if replicas < 1:
        raise ValueError("replica count must be >= 1")
    args = (point, indices, isolated_policy, master_seed, point_id)

    if workers == 1 and _executor is None:
        blocks = [_replica_block(*args, 0, replicas)]
    else:
        n_blocks = min(workers, replicas)
        bounds = [round(b * replicas / n_blocks) for b in range(n_blocks + 1)]
        if _executor is not None:
            futures = [
                _executor.submit(_replica_block, *args, lo, hi)
                for lo, hi in zip(bounds, bounds[1:])
            ]
            blocks = [f.result() for f in futures]
        else:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                futures = [
                    pool.submit(_replica_block, *args, lo, hi)
                    for lo, hi in zip(bounds, bounds[1:])
                ]
                blocks = [f.result() for f in futures]

    # Reassemble in ascending replica order regardless of how blocks ran.
    values = np.concatenate([b[0] for b in blocks], axis=1)
    excluded = np.concatenate([b[1] for b in blocks], axis=1)
    k_emp = np.concatenate([b[2] for b in blocks])

    k_mean, k_sem = _mean_sem(k_emp.tolist())
    k_theory = mean_degree(point)

    out = []
    for i, index in enumerate(indices):
        vals = values[i]
        finite = vals[np.isfinite(vals)]
        if isolated_policy == LOGZERO:
            degenerate = int(vals.shape[0] - finite.shape[0])
        else:
            degenerate = int(excluded[i].sum())
        mean_ln, sem = _mean_sem(finite.tolist())
        out.append(
            EnsembleStats(
                spec=point,
                index=index,
                policy=isolated_policy,
                replicas=replicas,
                degenerate=degenerate,
                mean_k_theory=k_theory,
                mean_k_empirical=k_mean,
                mean_k_sem=k_sem,
                mean_ln=mean_ln,
                sem=sem,
                master_seed=master_seed,
            )
        )
    return out


def sweep(spec: EnsembleSpec) -> list[EnsembleStats]:
    """Run every grid point in order; rows are (point, index) in grid order."""
    rows: list[EnsembleStats] = []
    executor = None
    try:
        if spec.workers > 1:
            executor = ProcessPoolExecutor(max_workers=spec.workers)
        for point_id, point in enumerate(spec.grid):
            rows.extend(
                run_point(
                    point,
                    spec.indices,
                    replicas_for(point.n, spec.budget),
                    spec.master_seed,
                    point_id=point_id,
                    isolated_policy=spec.isolated_policy,
                    workers=spec.workers,
                    _executor=executor,
                )
            )
    finally:
        if executor is not None:
            executor.shutdown()
    return rows


def _fmt(x: float) -> str:
    return repr(float(x))


def write_results_csv(rows: Iterable[EnsembleStats], out: TextIO) -> None:
    out.write(RESULTS_COLUMNS + "\n")
    for row in rows:
        spec = row.spec
        n1 = "" if spec.n1 is None else str(spec.n1)
        n2 = "" if spec.n2 is None else str(spec.n2)
        out.write(
            ",".join(
                (
                    spec.model,
                    str(spec.n),
                    n1,
                    n2,
                    spec.param_name,
                    _fmt(spec.param_value),
                    row.index,
                    row.policy,
                    str(row.replicas),
                    str(row.degenerate),
                    _fmt(row.mean_k_theory),
                    _fmt(row.mean_k_empirical),
                    _fmt(row.mean_ln),
                    _fmt(row.sem),
                    _fmt(row.mean_ln_over_n),
                    str(row.master_seed),
                )
            )
            + "\n"
        )


def write_results_csv_path(rows: Iterable[EnsembleStats], path) -> None:
    with open(path, "w", newline="\n") as fh:
        write_results_csv(rows, fh)


def read_results_csv(src: TextIO) -> list[EnsembleStats]:
    header = src.readline().strip()
    if header != RESULTS_COLUMNS:
        raise ValueError(f"unexpected results header: {header!r}")
    rows = []
    for line in src:
        line = line.strip()
        if not line:
            continue
        f = line.split(",")
        model, n = f[0], int(f[1])
        if model == "br":
            spec = ModelSpec(model, n, p=float(f[5]), n1=int(f[2]), n2=int(f[3]))
        elif model == "rg":
            spec = ModelSpec(model, n, r=float(f[5]))
        else:
            spec = ModelSpec(model, n, p=float(f[5]))
        rows.append(
            EnsembleStats(
                spec=spec,
                index=f[6],
                policy=f[7],
                replicas=int(f[8]),
                degenerate=int(f[9]),
                mean_k_theory=float(f[10]),
                mean_k_empirical=float(f[11]),
                mean_ln=float(f[12]),
                sem=float(f[13]),
                master_seed=int(f[15]),
                mean_k_sem=math.nan,
            )
        )
    return rows


def read_results_csv_path(path) -> list[EnsembleStats]:
    with open(path) as fh:
        return read_results_csv(fh)


def split_curves(rows: Iterable[EnsembleStats]) -> list[tuple[str, list[EnsembleStats]]]:
    """Group result rows into curves by (model, n, n1, n2), preserving order."""
    groups: dict[tuple, list[EnsembleStats]] = {}
    for row in rows:
        key = (row.spec.model, row.spec.n, row.spec.n1, row.spec.n2)
        groups.setdefault(key, []).append(row)
    out = []
    for (model, n, n1, n2), grp in groups.items():
        label = f"{model} n={n}" if n1 is None else f"{model} n1={n1} n2={n2}"
        out.append((label, grp))
    return out


@dataclass(frozen=True)
class PairDeviation:
    """Max interpolated gap between two curves, with the 5-sigma noise guard."""

    label_a: str
    label_b: str
    max_abs_deviation: float
    k_at_max: float
    pooled_sem: float

    def tolerance(self, floor: float) -> float:
        return max(floor, 5.0 * self.pooled_sem)

    def within(self, floor: float) -> bool:
        return self.max_abs_deviation <= self.tolerance(floor)


@dataclass
class CollapseReport:
    """Scaling-collapse comparison of >= 2 curves of mean_ln/n against <k>."""

    index: str
    k_grid: tuple[float, ...]
    curves: dict[str, tuple[float, ...]]
    curve_sems: dict[str, tuple[float, ...]]
    pairs: tuple[PairDeviation, ...]
    max_deviation: float
    k_at_max: float
    dense_threshold: float = DENSE_REGIME_MEAN_DEGREE
    dense_deviation: float | None = None  # vs the closed form, over k >= threshold

    def passed(self, floor: float) -> bool:
        return all(pair.within(floor) for pair in self.pairs)


def collapse_check(
    tables: Sequence[tuple[str, Sequence[EnsembleStats]]],
    index: str,
    dense_threshold: float = DENSE_REGIME_MEAN_DEGREE,
) -> CollapseReport:
    """Interpolate curves onto a shared <k> grid and measure pairwise gaps.

    Each table becomes one curve of mean_ln/n against mean_k_theory (linear
    interpolation, no smoothing).  Requires >= 2 tables, >= 5 points each,
    and a nonempty overlap of the <k> ranges.
    """
    if len(tables) < 2:
        raise ValueError("collapse check needs at least two curves")
    curves = []
    for label, rows in tables:
        pts = [r for r in rows if r.index == index]
        if not pts:
            raise ValueError(f"index {index!r} not present in table {label!r}")
        if len(pts) < 5:
            raise ValueError(f"table {label!r} has {len(pts)} points for {index!r}, needs >= 5")
        k = np.array([r.mean_k_theory for r in pts])
        y = np.array([r.mean_ln_over_n for r in pts])
        s = np.array([r.sem / r.spec.n for r in pts])
        order = np.argsort(k, kind="stable")
        curves.append((label, k[order], y[order], s[order]))

    lo = max(c[1][0] for c in curves)
    hi = min(c[1][-1] for c in curves)
    if lo > hi:
        raise ValueError(
            f"insufficient overlap in <k> ranges: max of minima {lo} > min of maxima {hi}"
        )
    grid = np.unique(np.concatenate([c[1] for c in curves]))
    grid = grid[(grid >= lo) & (grid <= hi)]
    if grid.size == 0:
        raise ValueError("insufficient overlap in <k> ranges: no shared grid points")

    interp_y = {}
    interp_s = {}
    for label, k, y, s in curves:
        interp_y[label] = np.interp(grid, k, y)
        interp_s[label] = np.interp(grid, k, s)

    labels = [c[0] for c in curves]
    pairs = []
    overall_dev, overall_k = 0.0, float(grid[0])
    for a in range(len(labels)):
        for b in range(a + 1, len(labels)):
            la, lb = labels[a], labels[b]
            diff = np.abs(interp_y[la] - interp_y[lb])
            at = int(np.argmax(diff))
            pooled = float(np.max(np.hypot(interp_s[la], interp_s[lb])))
            pair = PairDeviation(la, lb, float(diff[at]), float(grid[at]), pooled)
            pairs.append(pair)
            if pair.max_abs_deviation >= overall_dev:
                overall_dev, overall_k = pair.max_abs_deviation, pair.k_at_max

    dense_dev = None
    dense_mask = grid >= dense_threshold
    if dense_mask.any():
        try:
            pred = np.array([scaling_curve(index, float(k)) for k in grid[dense_mask]])
        except UnsupportedIndexError:
            pred = None
        if pred is not None:
            dense_dev = max(
                float(np.max(np.abs(interp_y[label][dense_mask] - pred))) for label in labels
            )

    return CollapseReport(
        index=index,
        k_grid=tuple(float(k) for k in grid),
        curves={label: tuple(map(float, interp_y[label])) for label in labels},
        curve_sems={label: tuple(map(float, interp_s[label])) for label in labels},
        pairs=tuple(pairs),
        max_deviation=overall_dev,
        k_at_max=overall_k,
        dense_threshold=dense_threshold,
        dense_deviation=dense_dev,
    )
