"""Brute-force consistency oracle on finite subtrees.

The fixed-point equations assert one concrete, checkable fact: summing the
finite-volume weights over the outermost spin generation reproduces the
weights of the next smaller volume, up to a single constant that does not
depend on the interior configuration.  This module enumerates every spin
configuration on a depth-n ball (no recursion shortcuts, no reuse of the
solver's algebra) and measures how far that ratio is from constant.
"""
from __future__ import annotations

import math
import os
from dataclasses import dataclass

import numpy as np

from .errors import BudgetError, ParameterError
from .model import ModelParams, PeriodTwoField, finite_volume_log_weight

_DEFAULT_MAX_ENUM = 10_000_000
_ENUM_ENV_VAR = "GIBBS_TREE_MAX_ENUM"


@dataclass(frozen=True)
class FiniteTree:
    """A rooted ball of a Cayley tree: the root has k+1 neighbors, others k+1 total.

    parent[v] is the parent index (-1 for the root), depth[v] the generation,
    generations[d] the tuple of vertex ids at depth d, edges the parent-child
    pairs in creation order.
    """

    k: int
    n: int
    parent: tuple[int, ...]
    depth: tuple[int, ...]
    generations: tuple[tuple[int, ...], ...]
    edges: tuple[tuple[int, int], ...]

    def boundary(self) -> tuple[int, ...]:
        """Vertex ids of the outermost generation."""
        return self.generations[self.n]

    @property
    def n_vertices(self) -> int:
        return len(self.parent)


def build_tree(k: int, n: int, max_vertices: int = 1_000_000) -> FiniteTree:
    """Depth-n ball with root branching k+1 and inner branching k."""
    if not isinstance(k, int) or k < 1:
        raise ParameterError(f"k must be a positive integer, got {k!r}")
    if not isinstance(n, int) or n < 0:
        raise ParameterError(f"n must be a nonnegative integer, got {n!r}")
    size = 1
    width = k + 1
    for _ in range(n):
        size += width
        width *= k
    if size > max_vertices:
        raise BudgetError(f"depth-{n} ball has {size} vertices, budget {max_vertices}")
    parent = [-1]
    depth = [0]
    generations = [(0,)]
    edges = []
    frontier = [0]
    for d in range(1, n + 1):
        new_frontier = []
        branching = k + 1 if d == 1 else k
        for v in frontier:
            for _ in range(branching):
                u = len(parent)
                parent.append(v)
                depth.append(d)
                edges.append((v, u))
                new_frontier.append(u)
        generations.append(tuple(new_frontier))
        frontier = new_frontier
    return FiniteTree(
        k=k, n=n,
        parent=tuple(parent),
        depth=tuple(depth),
        generations=tuple(generations),
        edges=tuple(edges),
    )


def _resolve_max_enum(max_enum: int | None) -> int:
    if max_enum is not None:
        return max_enum
    env = os.environ.get(_ENUM_ENV_VAR)
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise ParameterError(f"{_ENUM_ENV_VAR} must be an integer, got {env!r}")
    return _DEFAULT_MAX_ENUM


class _BoundaryEnum:
    """Configuration-independent pieces of the boundary enumeration.

    combos lists every boundary spin assignment (one row per assignment,
    spins 1..q as int8), boundary_term the summed field contribution of each
    row, parents the inner-vertex index feeding each boundary column.  Built
    once per (tree, field) pair and reused across interior configurations.
    """

    def __init__(self, tree: FiniteTree, params: ModelParams,
                 field: PeriodTwoField, max_enum: int) -> None:
        q = params.q
        boundary = tree.boundary()
        b = len(boundary)
        total = q ** b
        if total > max_enum:
            # total can run to thousands of digits; never stringify it
            raise BudgetError(
                f"boundary enumeration needs {q}^{b} terms, budget {max_enum}"
            )
        self.parents = np.array([tree.parent[v] for v in boundary], dtype=np.int64)
        self.combos = np.stack(
            np.unravel_index(np.arange(total), (q,) * b), axis=-1
        ).astype(np.int8) + 1
        h = field.h_even if tree.n % 2 == 0 else field.h_odd
        h_full = np.append(h, 0.0)
        self.boundary_term = h_full[self.combos.astype(np.int64) - 1].sum(axis=1)
        self.inner_edges = [
            e for e in tree.edges if tree.depth[e[1]] < tree.n
        ]
        self.log_theta = math.log(params.theta)

    def log_sum(self, inner: np.ndarray) -> float:
        """log sum over all boundary spin assignments of the full volume weight."""
        inner_mono = sum(1 for (u, v) in self.inner_edges if inner[u] == inner[v])
        parent_spins = inner[self.parents].astype(np.int8)
        cross_mono = (self.combos == parent_spins[None, :]).sum(axis=1)
        logw = (inner_mono + cross_mono) * self.log_theta + self.boundary_term
        shift = float(logw.max())
        return shift + math.log(math.fsum(np.exp(logw - shift).tolist()))


def _inner_log_weight(tree: FiniteTree, params: ModelParams,
                      field: PeriodTwoField, inner: np.ndarray) -> float:
    """Finite-volume log weight of the depth-(n-1) ball holding spins `inner`."""
    inner_edges = [e for e in tree.edges if tree.depth[e[1]] < tree.n]
    config = {v: int(inner[v]) for v in range(len(inner)) if tree.depth[v] < tree.n}
    boundary = [(v, tree.depth[v]) for v in tree.generations[tree.n - 1]]
    return finite_volume_log_weight(config, inner_edges, boundary, field, params)


@dataclass(frozen=True)
class ConsistencyReport:
    passed: bool
    max_relative_error: float
    pairs_checked: int
    n: int
    tolerance: float


def check_consistency(tree: FiniteTree, params: ModelParams, field: PeriodTwoField,
                      tol: float = 1e-8, n_pairs: int = 20, seed: int = 0,
                      max_enum: int | None = None) -> ConsistencyReport:
    """Test that summed depth-n weights track depth-(n-1) weights by one constant.

    Draws n_pairs random interior configurations (plus the all-ones one),
    computes log(sum over boundary) - log(inner weight) for each, and passes
    when the spread of that difference stays within tol.  Works for n >= 1.
    """
    if tree.n < 1:
        raise ParameterError("consistency check needs a ball of depth >= 1")
    if field.q != params.q:
        raise ParameterError(f"field has q={field.q}, params q={params.q}")
    max_enum = _resolve_max_enum(max_enum)
    rng = np.random.default_rng(seed)
    n_inner = len([v for v in range(tree.n_vertices) if tree.depth[v] < tree.n])

    configs = [np.ones(n_inner, dtype=np.int64)]
    for _ in range(n_pairs):
        configs.append(rng.integers(1, params.q + 1, size=n_inner))

    enum = _BoundaryEnum(tree, params, field, max_enum)
    gaps = []
    for inner in configs:
        log_outer = enum.log_sum(inner)
        log_inner = _inner_log_weight(tree, params, field, inner)
        gaps.append(log_outer - log_inner)
    spread = max(gaps) - min(gaps)
    scale = max(1.0, max(abs(g) for g in gaps))
    err = spread / scale
    return ConsistencyReport(
        passed=bool(err <= tol),
        max_relative_error=float(err),
        pairs_checked=len(configs),
        n=tree.n,
        tolerance=tol,
    )


def finite_difference(fn, x: float, step: float = 1e-6) -> float:
    """Central difference derivative estimate."""
    return (fn(x + step) - fn(x - step)) / (2.0 * step)
