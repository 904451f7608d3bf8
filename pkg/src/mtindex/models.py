"""Seeded generators for three random-network models.

Models:

* ``er`` -- Erdos-Renyi G(n, p): each of the C(n, 2) vertex pairs is an edge
  independently with probability p.
* ``rg`` -- random geometric graph on the unit square: n points placed
  uniformly, edge iff Euclidean distance <= r, r in [0, sqrt(2)].
* ``br`` -- bipartite random network with parts of sizes n1 (vertices
  ``0..n1-1``) and n2 (vertices ``n1..n1+n2-1``); each cross pair is an edge
  independently with probability p.  No intra-set edges ever.

Determinism contract: a replica stream is a pure function of the triple
(master_seed, point_id, replica_index), mixed through a splitmix64-style
avalanche into a PCG64 state.  ER/BR spend exactly one uniform draw per
candidate pair in canonical pair order; RG draws the n (x, y) positions first
and only then tests distances, so edges never depend on traversal order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .graph import Graph, _from_canonical

MAX_RADIUS = math.sqrt(2.0)

_MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class ModelSpec:
    """One random-graph model point: ER(n, p) | RG(n, r) | BR(n1, n2, p)."""

    model: str  # "er" | "rg" | "br"
    n: int      # total vertex count (n1 + n2 for br)
    p: float | None = None
    r: float | None = None
    n1: int | None = None
    n2: int | None = None

    def __post_init__(self):
        if self.model not in ("er", "rg", "br"):
            raise ValueError(f"unknown model {self.model!r}")
        if self.n < 1:
            raise ValueError(f"size must be a positive integer, got n={self.n}")
        if self.model in ("er", "br"):
            if self.p is None or not (0.0 <= self.p <= 1.0):
                raise ValueError(f"p must lie in [0, 1], got {self.p}")
        if self.model == "rg":
            if self.r is None or not (0.0 <= self.r <= MAX_RADIUS):
                raise ValueError(f"r must lie in [0, sqrt(2)], got {self.r}")
        if self.model == "br":
            if self.n1 is None or self.n2 is None or self.n1 < 1 or self.n2 < 1:
                raise ValueError("br requires positive part sizes n1, n2")
            if self.n1 + self.n2 != self.n:
                raise ValueError(f"br total n={self.n} != n1+n2={self.n1 + self.n2}")

    @property
    def param_name(self) -> str:
        return "r" if self.model == "rg" else "p"

    @property
    def param_value(self) -> float:
        return self.r if self.model == "rg" else self.p


def erdos_renyi(n: int, p: float) -> ModelSpec:
    return ModelSpec("er", n, p=p)


def random_geometric(n: int, r: float) -> ModelSpec:
    return ModelSpec("rg", n, r=r)


def bipartite(n1: int, n2: int, p: float) -> ModelSpec:
    return ModelSpec("br", n1 + n2, p=p, n1=n1, n2=n2)


def g_of_r(r: float) -> float:
    """Probability that two uniform points of the unit square lie within distance r.

    Piecewise closed form, continuous at r=1, with g(0)=0 and g(sqrt(2))=1.
    """
    if not (0.0 <= r <= MAX_RADIUS):
        raise ValueError(f"r must lie in [0, sqrt(2)], got {r}")
    if r <= 1.0:
        return r * r * (math.pi - (8.0 / 3.0) * r + 0.5 * r * r)
    return (
        1.0 / 3.0
        - 2.0 * r * r * (1.0 - math.asin(1.0 / r) + math.acos(1.0 / r))
        + (4.0 / 3.0) * (2.0 * r * r + 1.0) * math.sqrt(r * r - 1.0)
        - 0.5 * r ** 4
    )


def mean_degree(spec: ModelSpec) -> float:
    """Expected network-level mean degree <k> of a model point.

    ER: (n-1)p.  RG: (n-1)g(r).  BR: 2*n1*n2*p/(n1+n2); the per-set expected
    degrees are available via :func:`br_mean_degrees`.
    """
    if spec.model == "er":
        return (spec.n - 1) * spec.p
    if spec.model == "rg":
        return (spec.n - 1) * g_of_r(spec.r)
    return 2.0 * spec.n1 * spec.n2 * spec.p / (spec.n1 + spec.n2)


def br_mean_degrees(spec: ModelSpec) -> tuple[float, float]:
    """Expected degrees (<d1>, <d2>) = (n2*p, n1*p) of the two parts."""
    if spec.model != "br":
        raise ValueError(f"br_mean_degrees is defined for br specs, got {spec.model!r}")
    return spec.n2 * spec.p, spec.n1 * spec.p


def probability_for_mean_degree(n: int, k: float) -> float:
    """ER probability p with (n-1)p = k."""
    if not 0.0 <= k <= n - 1:
        raise ValueError(f"target mean degree {k} outside [0, n-1]")
    return k / (n - 1)


def br_probability_for_mean_degree(n1: int, n2: int, k: float) -> float:
    """BR probability p with network mean degree 2*n1*n2*p/(n1+n2) = k."""
    p = k * (n1 + n2) / (2.0 * n1 * n2)
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"target mean degree {k} unreachable for n1={n1}, n2={n2}")
    return p


def radius_for_mean_degree(n: int, k: float) -> float:
    """RG radius r with (n-1)g(r) = k, by bisection (g is monotone)."""
    if not 0.0 <= k <= n - 1:
        raise ValueError(f"target mean degree {k} outside [0, n-1]")
    target = k / (n - 1)
    lo, hi = 0.0, MAX_RADIUS
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if g_of_r(mid) < target:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def splitmix64(x: int) -> int:
    """One step of the splitmix64 avalanche; maps 64-bit ints to 64-bit ints."""
    x = (x + 0x9E3779B97F4A7C15) & _MASK64
    z = x
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return (z ^ (z >> 31)) & _MASK64


@dataclass(frozen=True)
class SeedDerivation:
    """Replica-stream identity: (master_seed, point_id, replica_index)."""

    master_seed: int
    point_id: int = 0
    replica_index: int = 0

    def stream_seed(self) -> int:
        h = splitmix64(self.master_seed & _MASK64)
        h = splitmix64((h + self.point_id) & _MASK64)
        h = splitmix64((h + self.replica_index) & _MASK64)
        return h

    def generator(self) -> np.random.Generator:
        return np.random.Generator(np.random.PCG64(self.stream_seed()))


@lru_cache(maxsize=32)
def _pair_indices(n: int) -> tuple[np.ndarray, np.ndarray]:
    # Lexicographic (u, v) with u < v; np.triu_indices enumerates row-major.
    iu, ju = np.triu_indices(n, k=1)
    iu.setflags(write=False)
    ju.setflags(write=False)
    return iu, ju


def sample_edge_arrays(spec: ModelSpec, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    """Draw one instance; return edge endpoint arrays (u, v) in canonical order."""
    if spec.model == "er":
        iu, ju = _pair_indices(spec.n)
        mask = rng.random(iu.shape[0]) < spec.p
        return iu[mask], ju[mask]
    if spec.model == "rg":
        iu, ju = _pair_indices(spec.n)
        pos = rng.random((spec.n, 2))
        dx = pos[iu, 0] - pos[ju, 0]
        dy = pos[iu, 1] - pos[ju, 1]
        mask = dx * dx + dy * dy <= spec.r * spec.r
        return iu[mask], ju[mask]
    # br: candidate pairs (u, n1 + w) in lexicographic order; u < n1 <= v always.
    mask = rng.random((spec.n1, spec.n2)) < spec.p
    iu, jw = np.nonzero(mask)
    return iu, jw + spec.n1


def sample_degree_arrays(
    spec: ModelSpec, rng: np.random.Generator
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Draw one instance; return (degrees, d_u per edge, d_v per edge)."""
    iu, ju = sample_edge_arrays(spec, rng)
    deg = np.bincount(iu, minlength=spec.n) + np.bincount(ju, minlength=spec.n)
    return deg, deg[iu], deg[ju]


def generate(spec: ModelSpec, seed: SeedDerivation) -> Graph:
    """Generate one :class:`Graph` instance, deterministic in the seed triple."""
    iu, ju = sample_edge_arrays(spec, seed.generator())
    return _from_canonical(spec.n, list(zip(iu.tolist(), ju.tolist())))
