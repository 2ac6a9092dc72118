"""Instance families: lower-bound constructions, the hardness gadget and random realizations.

Every generator returns an always-connected :class:`Instance`. Lifetimes are
``max(|V|^2, lifetime)`` unless stated otherwise. Randomness goes through a
single ``numpy.random.default_rng(seed)`` per call.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import networkx as nx
import numpy as np
from networkx.utils import UnionFind

from temporal_explore.core import (
    Always,
    Cyclic,
    Edge,
    Instance,
    Intervals,
    MultiAgentSchedule,
    Pattern,
    Periodic,
    Steps,
    TemporalGraph,
    TemporalWalk,
    absence_runs,
    greedy_extend,
    is_always_connected,
    norm_edge,
    validate_schedule,
)
from temporal_explore.decomposition import TreeDecomposition
from temporal_explore.errors import GenerationError, InstanceError

logger = logging.getLogger(__name__)

DEFAULT_RETRIES = 50


def _lifetime(vertices: int, requested: int | None) -> int:
    return max(vertices * vertices, requested or 0)


def separator_lifetime(n: int) -> int:
    """Default lifetime of series-parallel instances: ``n^2 + 12 n^1.5 ceil(ln n)``.

    Sized for the separator explorer, whose arrival grows like ``n^1.5 log n``
    and passes ``n^2`` from about 25 vertices on.
    """

    return n * n + 12 * math.ceil(n**1.5) * max(1, math.ceil(math.log(n)))


def _build(n: int, edges: Sequence[Edge], presence: Sequence[Pattern], lifetime: int, start: int):
    return Instance(TemporalGraph(n, tuple(edges), tuple(presence), lifetime), start)


# ----------------------------------------------------------------------
# Profiles and specs
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class RegularityProfile:
    """Per-edge maximum absence run ``I_e`` and the global constant ``c``.

    Every maximal absence run of edge ``e`` must have length in
    ``[ceil(I_e / c), I_e]``; runs cut by step 0 or by the lifetime are exempt.
    """

    bounds: tuple[int, ...]
    c: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "bounds", tuple(int(b) for b in self.bounds))
        if any(b < 1 for b in self.bounds):
            raise InstanceError("every I_e must be >= 1")
        if self.c <= 1:
            raise InstanceError("regularity constant c must be > 1")

    @classmethod
    def uniform(cls, m: int, bound: int, c: float) -> RegularityProfile:
        return cls((bound,) * m, c)

    def low(self, eid: int) -> int:
        return math.ceil(self.bounds[eid] / self.c - 1e-9)

    def high(self, eid: int) -> int:
        return self.bounds[eid]

    def violations(self, g: TemporalGraph) -> list[tuple[int, int, int]]:
        """``(edge id, run start, run length)`` for every uncut run out of range."""

        bad = []
        for eid, pattern in enumerate(g.presence):
            for run in absence_runs(pattern, g.lifetime):
                if run.cut:
                    continue
                if not self.low(eid) <= run.length <= self.high(eid):
                    bad.append((eid, run.start, run.length))
        return bad


@dataclass(frozen=True)
class GadgetSpec:
    """Base graph G' on ``0..n_prime-1`` with terminals ``s``, ``t`` and exponent ``c``."""

    base: tuple[Edge, ...]
    n_prime: int
    s: int
    t: int
    exponent: int = 1

    def __post_init__(self) -> None:
        object.__setattr__(self, "base", tuple(norm_edge(u, v) for u, v in self.base))
        if self.n_prime < 2:
            raise InstanceError("gadget base graph needs n' >= 2")
        if self.exponent < 1:
            raise InstanceError("gadget exponent must be >= 1")
        if self.s == self.t or not (0 <= self.s < self.n_prime and 0 <= self.t < self.n_prime):
            raise InstanceError("gadget terminals must be distinct vertices of G'")
        if not nx.is_connected(self.base_graph()):
            raise InstanceError("gadget base graph must be connected")

    @classmethod
    def path(cls, n_prime: int, exponent: int = 1) -> GadgetSpec:
        """G' = a path ``0..n_prime-1`` with s and t at its ends."""
        return cls(tuple((i, i + 1) for i in range(n_prime - 1)), n_prime, 0, n_prime - 1, exponent)

    def base_graph(self) -> nx.Graph:
        graph = nx.Graph()
        graph.add_nodes_from(range(self.n_prime))
        graph.add_edges_from(self.base)
        return graph

    @property
    def centers(self) -> int:
        return self.n_prime**self.exponent

    @property
    def total_vertices(self) -> int:
        return self.centers * (1 + self.n_prime)

    def copy_vertex(self, copy: int, x: int) -> int:
        """Id of vertex ``x`` of copy ``copy`` (copies are numbered from 1)."""
        return self.centers + (copy - 1) * self.n_prime + x


# ----------------------------------------------------------------------
# Lower-bound families
# ----------------------------------------------------------------------


def _star_edges(centers: Sequence[int], leaves: Sequence[int], offset: int = 0):
    """Edges and patterns of a rotating star: center ``j`` is the hub at steps ``≡ j``."""

    h = len(centers)
    edges: list[Edge] = []
    presence: list[Pattern] = []
    for j, c in enumerate(centers):
        for k in range(j + 1, h):
            edges.append((c, centers[k]))
            presence.append(Cyclic(h, ((j + offset) % h, (k + offset) % h)))
        for leaf in leaves:
            edges.append((c, leaf))
            presence.append(Cyclic(h, ((j + offset) % h,)))
    return edges, presence


def rotating_star(n: int, lifetime: int | None = None) -> Instance:
    """Centers ``c_j = j`` and leaves ``l_j = n + j``; step ``i`` is the star around ``c_{i mod n}``."""

    if n < 2:
        raise InstanceError("rotating_star needs n >= 2")
    edges, presence = _star_edges(range(n), range(n, 2 * n))
    inst = _build(2 * n, edges, presence, _lifetime(2 * n, lifetime), 0)
    logger.info(f"rotating_star: n={n}, {len(edges)} edges, lifetime {inst.graph.lifetime}")
    return inst


def chained_stars(d: int, n: int, lifetime: int | None = None) -> Instance:
    """``n/d`` rotating stars with ``d/2`` centers each, leaf 1 of one copy merged with leaf 0 of the next."""

    if d < 4 or d % 2:
        raise InstanceError("chained_stars needs an even d >= 4")
    if n < d or n % d:
        raise InstanceError("chained_stars needs n to be a positive multiple of d")

    h = d // 2
    copies = n // d
    next_id = 0
    edges: list[Edge] = []
    presence: list[Pattern] = []
    carried: int | None = None
    for _ in range(copies):
        centers = list(range(next_id, next_id + h))
        next_id += h
        leaves = []
        for k in range(h):
            if k == 0 and carried is not None:
                leaves.append(carried)
            else:
                leaves.append(next_id)
                next_id += 1
        carried = leaves[1]
        copy_edges, copy_presence = _star_edges(centers, leaves)
        edges.extend(copy_edges)
        presence.extend(copy_presence)

    inst = _build(next_id, edges, presence, _lifetime(next_id, lifetime), 0)
    logger.info(f"chained_stars: d={d}, {copies} copies, {next_id} vertices")
    return inst


def planar_rounds(n: int, lifetime: int | None = None) -> Instance:
    """Two rows ``t_i = i``, ``b_i = n/4 + i`` joined through a path of ``n/2`` vertices.

    Column ``col`` (edges between columns ``col-1`` and ``col``) swaps its
    horizontal edges for cross edges at the start of round
    ``log2(n) - 2 - v2(col)``; rounds last ``n/2`` steps and replacements persist.
    """

    if n < 8 or n & (n - 1):
        raise InstanceError("planar_rounds needs n a power of two, n >= 8")

    k = n.bit_length() - 1
    quarter = n // 4
    half = n // 2
    L = _lifetime(n, lifetime)

    def top(i: int) -> int:
        return i

    def bottom(i: int) -> int:
        return quarter + i

    edges: list[Edge] = []
    presence: list[Pattern] = []
    path = [top(0)] + [half + j for j in range(half)] + [bottom(0)]
    for a, b in zip(path, path[1:]):
        edges.append((a, b))
        presence.append(Always())

    for col in range(1, quarter):
        twos = (col & -col).bit_length() - 1
        swap = (k - 2 - twos) * half
        before = Intervals(((0, swap - 1),))
        after = Intervals(((swap, L),))
        edges += [(top(col - 1), top(col)), (bottom(col - 1), bottom(col))]
        presence += [before, before]
        edges += [(top(col - 1), bottom(col)), (bottom(col - 1), top(col))]
        presence += [after, after]

    inst = _build(n, edges, presence, L, top(0))
    logger.info(f"planar_rounds: n={n}, {k - 1} rounds of {half} steps")
    return inst


def cycle_2n3(n: int, lifetime: int | None = None) -> Instance:
    """Cycle ``0..n-1`` from 0 where ``{0,1}`` appears late and ``{1,2}`` disappears early."""

    if n < 4:
        raise InstanceError("cycle_2n3 needs n >= 4")
    L = _lifetime(n, lifetime)
    edges: list[Edge] = []
    presence: list[Pattern] = []
    for i in range(n):
        edges.append(norm_edge(i, (i + 1) % n))
        if i == 0:
            presence.append(Intervals(((n - 2, L),)))
        elif i == 1:
            presence.append(Intervals(((0, n - 3),)))
        else:
            presence.append(Always())
    return _build(n, edges, presence, L, 0)


# ----------------------------------------------------------------------
# Hardness gadget
# ----------------------------------------------------------------------


def _gadget_graph(spec: GadgetSpec, lifetime: int | None) -> Instance:
    n = spec.centers
    centers = list(range(n))
    sources = [spec.copy_vertex(i, spec.s) for i in range(1, n + 1)]
    edges, presence = _star_edges(centers, sources)

    for copy in range(1, n + 1):
        for u, v in spec.base:
            edges.append((spec.copy_vertex(copy, u), spec.copy_vertex(copy, v)))
            presence.append(Always())

    L = _lifetime(spec.total_vertices, lifetime)
    for i in range(1, n - 1):
        step = i * spec.n_prime
        if step > L:
            break
        edges.append((spec.copy_vertex(i, spec.t), spec.copy_vertex(i + 1, spec.s)))
        presence.append(Steps((step,)))

    return _build(spec.total_vertices, edges, presence, L, 0)


def _check_hamiltonian(spec: GadgetSpec, path: Sequence[int]) -> None:
    base = spec.base_graph()
    if len(path) != spec.n_prime or set(path) != set(range(spec.n_prime)):
        raise InstanceError("Hamiltonian path must visit every vertex of G' exactly once")
    if path[0] != spec.s or path[-1] != spec.t:
        raise InstanceError("Hamiltonian path must run from s to t")
    for a, b in zip(path, path[1:]):
        if not base.has_edge(a, b):
            raise InstanceError(f"Hamiltonian path uses non-edge {{{a}, {b}}}")


def hamiltonian_witness(
    inst: Instance, spec: GadgetSpec, path: Sequence[int]
) -> MultiAgentSchedule:
    """One-agent schedule: traverse each copy along ``path``, ride the quick links, then sweep.

    Copy 1 is entered from ``c_0`` at step 0; copy ``i`` ends at ``t`` at time
    ``i * n'`` where quick link ``i`` is present. Remaining copies and centers
    are collected by foremost hops.
    """

    _check_hamiltonian(spec, path)
    n = spec.centers
    moves = [(0, spec.copy_vertex(1, spec.s))]
    step = 1
    for copy in range(1, n + 1):
        for x in path[1:]:
            moves.append((step, spec.copy_vertex(copy, x)))
            step += 1
        if copy >= n - 1:
            break
        moves.append((step, spec.copy_vertex(copy + 1, spec.s)))
        step += 1

    walk = greedy_extend(inst.graph, TemporalWalk(inst.start, tuple(moves)))
    schedule = MultiAgentSchedule((walk,))
    report = validate_schedule(inst, schedule)
    if not report.valid or not report.coverage:
        raise InstanceError(f"gadget witness failed validation: {report.violations}")
    logger.info(
        f"gadget witness: arrival {report.arrival}, n*={spec.total_vertices}, "
        f"ratio {report.arrival / spec.total_vertices:.2f}"
    )
    return schedule


def hardness_gadget(
    spec: GadgetSpec,
    path: Sequence[int] | None = None,
    lifetime: int | None = None,
) -> tuple[Instance, MultiAgentSchedule | None]:
    """Rotating star on ``n'^c`` centers whose leaves are copies of G', plus quick links."""

    if path is not None:
        _check_hamiltonian(spec, path)
    inst = _gadget_graph(spec, lifetime)
    logger.info(
        f"hardness_gadget: n'={spec.n_prime}, c={spec.exponent}, n*={spec.total_vertices}"
    )
    witness = hamiltonian_witness(inst, spec, path) if path is not None else None
    return inst, witness


# ----------------------------------------------------------------------
# Random realizations
# ----------------------------------------------------------------------


def cycle_edges(n: int) -> list[Edge]:
    return [norm_edge(i, (i + 1) % n) for i in range(n)]


def grid_edges(columns: int) -> list[Edge]:
    """Edges of the 2 x ``columns`` grid; vertex ``(r, c)`` has id ``r * columns + c``."""

    edges = []
    for r in range(2):
        edges += [(r * columns + c, r * columns + c + 1) for c in range(columns - 1)]
    edges += [(c, columns + c) for c in range(columns)]
    return edges


def _spanning_tree(n: int, edges: Sequence[Edge], weights: np.ndarray, allowed=None) -> set[int]:
    forest = UnionFind(range(n))
    chosen = set()
    for eid in np.argsort(weights, kind="stable"):
        eid = int(eid)
        if allowed is not None and eid not in allowed:
            continue
        u, v = edges[eid]
        if forest[u] != forest[v]:
            forest.union(u, v)
            chosen.add(eid)
    return chosen


def _realize(
    n: int,
    edges: Sequence[Edge],
    lifetime: int,
    choose: Callable[[], set[int]],
    hold: int,
    period: int | None,
) -> list[Pattern]:
    """Call ``choose`` once per segment of ``hold`` steps and turn the picks into patterns."""

    if hold < 1:
        raise GenerationError("hold must be >= 1")
    horizon = period if period else lifetime + 1
    runs: list[list[tuple[int, int]]] = [[] for _ in edges]
    for start in range(0, horizon, hold):
        end = min(start + hold, horizon) - 1
        for eid in choose():
            spans = runs[eid]
            if spans and spans[-1][1] + 1 == start:
                spans[-1] = (spans[-1][0], end)
            else:
                spans.append((start, end))

    presence: list[Pattern] = []
    for spans in runs:
        if spans == [(0, horizon - 1)]:
            presence.append(Always())
        elif period:
            residues = tuple(t for a, b in spans for t in range(a, b + 1))
            presence.append(Cyclic(period, residues))
        else:
            presence.append(Intervals(tuple(spans)))
    return presence


def _check_underlying(graph: nx.Graph) -> int:
    n = graph.number_of_nodes()
    if set(graph.nodes) != set(range(n)):
        raise InstanceError("underlying graph vertices must be 0..n-1")
    if n == 0 or not nx.is_connected(graph):
        raise InstanceError("underlying graph must be connected")
    return n


def random_realization(
    graph: nx.Graph,
    lifetime: int | None,
    density: float,
    seed: int,
    *,
    hold: int = 1,
    period: int | None = None,
    start: int = 0,
) -> Instance:
    """Each segment presents a random spanning tree plus every other edge with probability ``density``.

    Segments are ``hold`` steps long. With ``period`` the draw covers one
    period and repeats through :class:`Cyclic` patterns.
    """

    n = _check_underlying(graph)
    edges = sorted(norm_edge(u, v) for u, v in graph.edges)
    rng = np.random.default_rng(seed)
    m = len(edges)

    def choose() -> set[int]:
        tree = _spanning_tree(n, edges, rng.random(m))
        extra = np.flatnonzero(rng.random(m) < density)
        return tree | {int(e) for e in extra}

    L = _lifetime(n, lifetime)
    presence = _realize(n, edges, L, choose, hold, period)
    return _build(n, edges, presence, L, start)


def connected_gnp(n: int, p: float, seed: int) -> nx.Graph:
    """``G(n, p)`` joined with a random recursive tree, so it is connected."""

    if n < 2:
        raise InstanceError("a random underlying graph needs n >= 2")
    if not 0.0 <= p <= 1.0:
        raise InstanceError(f"edge probability {p} outside [0, 1]")
    rng = np.random.default_rng(seed)
    graph = nx.gnp_random_graph(n, p, seed=int(rng.integers(2**31)))
    graph.add_edges_from((v, int(rng.integers(v))) for v in range(1, n))
    return graph


def cycle_realization(
    n: int,
    seed: int,
    density: float = 0.0,
    lifetime: int | None = None,
    *,
    hold: int = 1,
    period: int | None = None,
) -> Instance:
    """Random temporal cycle on ``0..n-1`` (in cyclic order) starting at 0."""

    if n < 3:
        raise InstanceError("a cycle needs n >= 3")
    graph = nx.Graph(cycle_edges(n))
    return random_realization(graph, lifetime, density, seed, hold=hold, period=period)


def chord_realization(
    n: int,
    seed: int,
    chord: int | None = None,
    chord_density: float = 0.5,
    density: float = 0.0,
    lifetime: int | None = None,
    *,
    hold: int = 1,
    period: int | None = None,
) -> Instance:
    """Random temporal cycle plus the chord ``{0, chord}`` (default ``n // 2``).

    The chord is present in each segment with probability ``chord_density``,
    independent of the cycle edges.
    """

    if n < 4:
        raise InstanceError("a cycle with a chord needs n >= 4")
    x = n // 2 if chord is None else chord
    if not 2 <= x <= n - 2:
        raise InstanceError(f"chord endpoint {x} must not be a cycle neighbour of 0")

    edges = cycle_edges(n) + [(0, x)]
    m = len(edges)
    cycle_ids = set(range(n))
    rng = np.random.default_rng(seed)

    def choose() -> set[int]:
        tree = _spanning_tree(n, edges, rng.random(m), cycle_ids)
        extra = {int(e) for e in np.flatnonzero(rng.random(n) < density)}
        chosen = tree | extra
        if rng.random() < chord_density:
            chosen.add(n)
        return chosen

    L = _lifetime(n, lifetime)
    presence = _realize(n, edges, L, choose, hold, period)
    return _build(n, edges, presence, L, 0)


def grid_realization(
    columns: int,
    seed: int,
    density: float = 0.0,
    lifetime: int | None = None,
    *,
    hold: int = 1,
    period: int | None = None,
) -> Instance:
    """Random temporal 2 x ``columns`` grid starting at vertex ``(0, 0)``."""

    if columns < 1:
        raise InstanceError("a grid needs at least one column")
    graph = nx.Graph()
    graph.add_nodes_from(range(2 * columns))
    graph.add_edges_from(grid_edges(columns))
    return random_realization(graph, lifetime, density, seed, hold=hold, period=period)


def series_parallel(
    n: int,
    seed: int,
    density: float = 0.0,
    lifetime: int | None = None,
    *,
    hold: int = 1,
    period: int | None = None,
    drop: float = 0.3,
) -> tuple[Instance, TreeDecomposition]:
    """Random partial 2-tree with its width-2 decomposition.

    Vertex ``v >= 2`` attaches to both ends of a random existing 2-tree edge;
    with probability ``drop`` one of the two new edges is left out. The
    lifetime defaults to :func:`separator_lifetime`.
    """

    if n < 2:
        raise InstanceError("series_parallel needs n >= 2")
    rng = np.random.default_rng(seed)
    frame: list[Edge] = [(0, 1)]
    home = {(0, 1): 0}
    bags = [frozenset((0, 1))]
    tree: list[tuple[int, int]] = []
    kept: list[Edge] = [(0, 1)]
    for v in range(2, n):
        a, b = frame[int(rng.integers(len(frame)))]
        bags.append(frozenset((a, b, v)))
        tree.append((home[(a, b)], len(bags) - 1))
        for w in (a, b):
            frame.append((w, v))
            home[(w, v)] = len(bags) - 1
        if rng.random() < drop:
            kept.append((a, v) if rng.random() < 0.5 else (b, v))
        else:
            kept += [(a, v), (b, v)]

    graph = nx.Graph()
    graph.add_nodes_from(range(n))
    graph.add_edges_from(kept)
    if lifetime is None:
        lifetime = separator_lifetime(n)
    inst = random_realization(
        graph, lifetime, density, int(rng.integers(2**31)), hold=hold, period=period
    )
    td = TreeDecomposition(tuple(bags), tuple(tree))
    return inst, td


# ----------------------------------------------------------------------
# Regular instances
# ----------------------------------------------------------------------


def draw_absence_runs(profile: RegularityProfile, lifetime: int, seed: int) -> tuple[Steps, ...]:
    """Independent per-edge draws: one present step, then an absence run in ``[low, high]``."""

    rng = np.random.default_rng(seed)
    patterns = []
    for eid in range(len(profile.bounds)):
        low, high = profile.low(eid), profile.high(eid)
        steps = []
        t = int(rng.integers(0, high + 1))
        while t <= lifetime:
            steps.append(t)
            t += 1 + int(rng.integers(low, high + 1))
        patterns.append(Steps(tuple(steps)))
    return tuple(patterns)


def _draw_stepwise(
    n: int, edges: Sequence[Edge], profile: RegularityProfile, lifetime: int, rng
) -> list[Pattern] | None:
    """Step by step: edges at their maximum run are forced, edges inside their minimum run
    are forbidden, the rest join only where needed for connectivity."""

    m = len(edges)
    last: list[int | None] = [None] * m
    steps: list[list[int]] = [[] for _ in range(m)]
    for t in range(lifetime + 1):
        forest = UnionFind(range(n))
        present = []
        optional = []
        for eid in range(m):
            run = t if last[eid] is None else t - last[eid] - 1
            if run >= profile.high(eid):
                present.append(eid)
                forest.union(*edges[eid])
            elif last[eid] is None or run >= profile.low(eid):
                optional.append((-run, rng.random(), eid))
        for _, _, eid in sorted(optional):
            u, v = edges[eid]
            if forest[u] != forest[v]:
                forest.union(u, v)
                present.append(eid)
        root = forest[0]
        if any(forest[v] != root for v in range(1, n)):
            return None
        for eid in present:
            steps[eid].append(t)
            last[eid] = t
    return [Steps(tuple(s)) for s in steps]


def regular_instance(
    graph: nx.Graph,
    profile: RegularityProfile,
    seed: int,
    lifetime: int | None = None,
    *,
    retries: int = DEFAULT_RETRIES,
    start: int = 0,
) -> Instance:
    """Regular realization of ``graph``: edge ``e`` (in sorted order) follows ``I_e``.

    The independent draw of :func:`draw_absence_runs` is tried first; when
    some step is disconnected the step-wise drawing is retried.
    """

    n = _check_underlying(graph)
    edges = sorted(norm_edge(u, v) for u, v in graph.edges)
    if len(edges) > 3 * n:
        raise InstanceError(f"regular instances need |E| <= 3n, got {len(edges)}")
    if len(profile.bounds) != len(edges):
        raise InstanceError("regularity profile must give one bound per edge")

    L = _lifetime(n, lifetime)
    rng = np.random.default_rng(seed)
    candidates: list[Sequence[Pattern] | None] = [draw_absence_runs(profile, L, seed)]
    for attempt in range(retries + 1):
        presence = candidates.pop() if candidates else _draw_stepwise(n, edges, profile, L, rng)
        if presence is None:
            continue
        inst = _build(n, edges, presence, L, start)
        if is_always_connected(inst.graph) and not profile.violations(inst.graph):
            logger.info(f"regular_instance: n={n}, m={len(edges)}, accepted after {attempt} retries")
            return inst
    raise GenerationError(f"no regular realization after {retries} retries", seed=seed)


def staggered_trees(
    n: int, layers: int, seed: int, lifetime: int | None = None
) -> tuple[Instance, RegularityProfile]:
    """``layers`` edge-disjoint Hamiltonian paths; path ``j`` is present at steps ``≡ j (mod layers)``.

    Every edge has absence runs of exactly ``layers - 1`` steps, so the
    instance is regular with ``I_e = layers - 1`` and ``c = 2``.
    """

    if layers < 2 or layers > 3:
        raise InstanceError("staggered_trees supports 2 or 3 layers (|E| <= 3n)")
    strides = [s for s in range(1, (n + 1) // 2) if math.gcd(s, n) == 1]
    if len(strides) < layers:
        raise GenerationError(f"n={n} has fewer than {layers} usable strides", seed=seed)

    rng = np.random.default_rng(seed)
    order = rng.permutation(n)
    chosen = sorted(int(s) for s in rng.choice(strides, size=layers, replace=False))
    edges: list[Edge] = []
    presence: list[Pattern] = []
    for j, stride in enumerate(chosen):
        walk = [int(order[(i * stride) % n]) for i in range(n)]
        for a, b in zip(walk, walk[1:]):
            edges.append(norm_edge(a, b))
            presence.append(Periodic(j, 1, layers - 1))

    inst = _build(n, edges, presence, _lifetime(n, lifetime), int(order[0]))
    profile = RegularityProfile.uniform(len(edges), layers - 1, 2.0)
    logger.info(f"staggered_trees: n={n}, strides {chosen}")
    return inst, profile
