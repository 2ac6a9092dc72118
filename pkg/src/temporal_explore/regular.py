"""Exploration of graphs with regularly present edges along an Euler tour of a weighted MST."""

from __future__ import annotations

import logging
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Literal

import networkx as nx
from networkx.utils import UnionFind

from temporal_explore.core import (
    AbsenceRun,
    Instance,
    Pattern,
    TemporalGraph,
    TemporalWalk,
    absence_runs,
    components,
)
from temporal_explore.errors import LifetimeExhaustedError, RegularityError, ShapeError
from temporal_explore.generators import RegularityProfile

logger = logging.getLogger(__name__)


def round_down_pow2(value: int) -> int:
    """Largest power of two not exceeding ``value``."""
    return 1 << (value.bit_length() - 1)


def _observed_runs(pattern: Pattern, lifetime: int) -> list[AbsenceRun]:
    """Absence runs over the lifetime, or over three periods of a periodic pattern."""

    horizon = lifetime
    if pattern.period is not None:
        horizon = min(lifetime, 3 * pattern.period + getattr(pattern, "offset", 0))
    return absence_runs(pattern, horizon)


def estimate_profile(g: TemporalGraph) -> RegularityProfile:
    """Measure ``I_e`` as the longest absence run; ``c`` as the largest ``I_e / min run``.

    Runs cut by step 0 or by the lifetime are ignored. When every edge's runs
    all have one length, ``c`` is 2.
    """

    bounds = []
    ratio = 1.0
    for pattern in g.presence:
        lengths = [run.length for run in _observed_runs(pattern, g.lifetime) if not run.cut]
        if not lengths:
            bounds.append(1)
            continue
        high, low = max(lengths), min(lengths)
        bounds.append(high)
        ratio = max(ratio, high / low)
    c = ratio if ratio > 1 else 2.0
    return RegularityProfile(tuple(bounds), c)


def verify_profile(g: TemporalGraph, profile: RegularityProfile) -> None:
    """Raise :class:`RegularityError` at the first uncut absence run outside its bounds."""

    if len(profile.bounds) != g.m:
        raise RegularityError(f"profile has {len(profile.bounds)} bounds for {g.m} edges")
    for eid, pattern in enumerate(g.presence):
        low, high = profile.low(eid), profile.high(eid)
        for run in _observed_runs(pattern, g.lifetime):
            if run.cut:
                continue
            if not low <= run.length <= high:
                raise RegularityError(
                    f"edge {g.edges[eid]}: absence run of {run.length} at step {run.start} "
                    f"outside [{low}, {high}]"
                )


def _resolve(inst: Instance, profile: RegularityProfile | Literal["estimate"]) -> RegularityProfile:
    g = inst.graph
    if g.m > 3 * g.n:
        raise ShapeError(f"regular exploration needs |E| <= 3n, got {g.m} edges for n={g.n}")
    resolved = estimate_profile(g) if profile == "estimate" else profile
    verify_profile(g, resolved)
    return resolved


def weighted_mst(g: TemporalGraph, weights: list[int]) -> list[int]:
    """Kruskal over ``(weight, edge id)``; returns tree edge ids in selection order."""

    forest = UnionFind(range(g.n))
    tree = []
    for eid in sorted(range(g.m), key=lambda e: (weights[e], e)):
        u, v = g.edges[eid]
        if forest[u] != forest[v]:
            forest.union(u, v)
            tree.append(eid)
    return tree


def euler_tour(g: TemporalGraph, tree: list[int], root: int) -> list[tuple[int, int, int]]:
    """Closed Euler tour of the doubled tree as ``(from, to, edge id)`` triples."""

    doubled = nx.MultiGraph()
    doubled.add_node(root)
    for eid in tree:
        u, v = g.edges[eid]
        doubled.add_edge(u, v, key=2 * eid, eid=eid)
        doubled.add_edge(u, v, key=2 * eid + 1, eid=eid)
    if not tree:
        return []
    return [(u, v, k // 2) for u, v, k in nx.eulerian_circuit(doubled, source=root, keys=True)]


@dataclass
class RegularTour:
    walk: TemporalWalk
    profile: RegularityProfile
    tree: list[int]
    waits: list[tuple[int, int]] = field(default_factory=list)

    def bound(self) -> int:
        """``sum (I_e + 1)`` over the tour edges."""
        return sum(2 * (self.profile.bounds[e] + 1) for e in self.tree)


def regular_tour(
    inst: Instance, profile: RegularityProfile | Literal["estimate"] = "estimate"
) -> RegularTour:
    """Follow the Euler tour, waiting at each endpoint for the next tour edge.

    Every wait is checked against ``I_e``; traversal stops once all vertices
    have been visited.
    """

    g = inst.graph
    resolved = _resolve(inst, profile)
    weights = [round_down_pow2(b) for b in resolved.bounds]
    tree = weighted_mst(g, weights)
    if len(tree) != g.n - 1:
        raise ShapeError("underlying graph is disconnected")

    tour = euler_tour(g, tree, inst.start)
    visited = {inst.start}
    moves: list[tuple[int, int]] = []
    waits: list[tuple[int, int]] = []
    t = 0
    for u, v, eid in tour:
        if len(visited) == g.n:
            break
        pattern = g.presence[eid]
        depart = t
        while depart <= g.lifetime and not pattern.contains(depart):
            depart += 1
        if depart > g.lifetime:
            raise LifetimeExhaustedError(
                f"edge {g.edges[eid]} never reappears", best=TemporalWalk(inst.start, tuple(moves))
            )
        wait = depart - t
        if wait > resolved.bounds[eid]:
            raise RegularityError(
                f"waited {wait} steps for edge {g.edges[eid]} with I_e={resolved.bounds[eid]}"
            )
        waits.append((eid, wait))
        moves.append((depart, v))
        visited.add(v)
        t = depart + 1

    result = RegularTour(TemporalWalk(inst.start, tuple(moves)), resolved, tree, waits)
    logger.info(
        f"regular-mst: n={g.n}, tree weight {sum(weights[e] for e in tree)}, arrival {t}"
    )
    return result


def explore_regular_mst(
    inst: Instance, profile: RegularityProfile | Literal["estimate"] = "estimate"
) -> TemporalWalk:
    return regular_tour(inst, profile).walk


# ----------------------------------------------------------------------
# Charging audit
# ----------------------------------------------------------------------


@dataclass
class ChargeAudit:
    tree_weight: int
    total_charge: float
    max_charge: float
    limit: float
    charges: dict[int, float]
    violations: list[str]

    @property
    def ok(self) -> bool:
        return not self.violations


def mst_weight_audit(
    inst: Instance, profile: RegularityProfile | Literal["estimate"] = "estimate"
) -> ChargeAudit:
    """Recompute the charging argument for the rounded-weight MST.

    For every weight level ``w`` used in the tree, each component of the tree
    without its level-``w`` edges charges ``c * w / J_e`` to every edge leaving
    it. The tree weight must be covered by the charges, no edge may receive
    more than ``8c`` and the tree weight must stay below ``8c |E|``.
    """

    g = inst.graph
    resolved = _resolve(inst, profile)
    c = resolved.c
    weights = [round_down_pow2(b) for b in resolved.bounds]
    tree = weighted_mst(g, weights)
    tree_weight = sum(weights[e] for e in tree)

    charges: dict[int, float] = defaultdict(float)
    for level in sorted({weights[e] for e in tree}):
        kept = [g.edges[e] for e in tree if weights[e] != level]
        forest = components(range(g.n), kept)
        for eid, (u, v) in enumerate(g.edges):
            if forest[u] != forest[v]:
                charges[eid] += 2 * c * level / weights[eid]

    total = sum(charges.values())
    peak = max(charges.values(), default=0.0)
    violations = []
    limit = 8 * c
    if peak > limit + 1e-9:
        worst = max(charges, key=charges.get)
        violations.append(f"edge {g.edges[worst]} receives {peak:.3f} > 8c = {limit:.3f}")
    if tree_weight > limit * g.m:
        violations.append(f"tree weight {tree_weight} exceeds 8c|E| = {limit * g.m:.1f}")
    if total + 1e-9 < tree_weight:
        violations.append(f"charges {total:.3f} do not cover tree weight {tree_weight}")
    for message in violations:
        logger.warning(f"charge audit: {message}")
    return ChargeAudit(tree_weight, total, peak, limit, dict(charges), violations)
