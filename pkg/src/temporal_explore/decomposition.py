"""Tree decompositions: validation, min-fill construction and nice form."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Iterable

import networkx as nx
from networkx.algorithms.approximation import treewidth_min_fill_in

from temporal_explore.errors import DecompositionError

logger = logging.getLogger(__name__)

LEAF = "leaf"
INTRODUCE = "introduce"
FORGET = "forget"
JOIN = "join"


@dataclass(frozen=True)
class TreeDecomposition:
    """Bags indexed ``0..len(bags)-1`` joined by ``tree`` edges over bag ids."""

    bags: tuple[frozenset[int], ...]
    tree: tuple[tuple[int, int], ...]
    heuristic: bool = field(default=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "bags", tuple(frozenset(b) for b in self.bags))
        object.__setattr__(self, "tree", tuple((int(a), int(b)) for a, b in self.tree))

    @property
    def width(self) -> int:
        return max((len(b) for b in self.bags), default=0) - 1

    def tree_graph(self) -> nx.Graph:
        graph = nx.Graph()
        graph.add_nodes_from(range(len(self.bags)))
        graph.add_edges_from(self.tree)
        return graph

    def validate(self, n: int, edges: Iterable[tuple[int, int]]) -> None:
        """Raise :class:`DecompositionError` unless this decomposes the graph."""

        if not self.bags:
            raise DecompositionError("decomposition has no bags")
        for a, b in self.tree:
            if not (0 <= a < len(self.bags) and 0 <= b < len(self.bags)) or a == b:
                raise DecompositionError(f"tree edge ({a}, {b}) references unknown bags")
        tree = self.tree_graph()
        if not nx.is_tree(tree):
            raise DecompositionError("bag adjacency is not a tree")

        holders: dict[int, list[int]] = {v: [] for v in range(n)}
        for index, bag in enumerate(self.bags):
            for v in bag:
                if v not in holders:
                    raise DecompositionError(f"bag {index} contains unknown vertex {v}")
                holders[v].append(index)

        missing = [v for v, bags in holders.items() if not bags]
        if missing:
            raise DecompositionError(f"vertices {missing[:5]} are in no bag")

        for u, v in edges:
            if not set(holders[u]) & set(holders[v]):
                raise DecompositionError(f"edge {{{u}, {v}}} is in no bag")

        for v, bags in holders.items():
            if len(bags) > 1 and not nx.is_connected(tree.subgraph(bags)):
                raise DecompositionError(f"bags containing vertex {v} are not connected")


def min_fill_decomposition(graph: nx.Graph) -> TreeDecomposition:
    """Heuristic decomposition from networkx's min-fill-in elimination.

    The result is marked ``heuristic``; its width is an upper bound only.
    """

    if graph.number_of_nodes() == 1:
        return TreeDecomposition((frozenset(graph.nodes),), (), heuristic=True)
    width, decomposition = treewidth_min_fill_in(graph)
    order = sorted(decomposition.nodes, key=lambda bag: sorted(bag))
    index = {bag: i for i, bag in enumerate(order)}
    tree = tuple(sorted(tuple(sorted((index[a], index[b]))) for a, b in decomposition.edges))
    logger.debug(f"min-fill decomposition: {len(order)} bags, width {width}")
    return TreeDecomposition(tuple(order), tree, heuristic=True)


# ----------------------------------------------------------------------
# Nice form
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class NiceNode:
    kind: str
    bag: frozenset[int]
    children: tuple[int, ...] = ()
    vertex: int | None = None


@dataclass
class NiceDecomposition:
    """Rooted binary decomposition of leaf, introduce, forget and join nodes."""

    nodes: list[NiceNode]
    root: int

    @property
    def width(self) -> int:
        return max(len(node.bag) for node in self.nodes) - 1

    def postorder(self) -> list[int]:
        order: list[int] = []
        stack = [(self.root, False)]
        while stack:
            node, expanded = stack.pop()
            if expanded:
                order.append(node)
                continue
            stack.append((node, True))
            for child in reversed(self.nodes[node].children):
                stack.append((child, False))
        return order

    def check_form(self) -> None:
        """Raise :class:`DecompositionError` if some node breaks the nice-form rules."""

        for index, node in enumerate(self.nodes):
            kids = [self.nodes[c] for c in node.children]
            if node.kind == LEAF:
                ok = not kids and not node.bag
            elif node.kind == INTRODUCE:
                ok = len(kids) == 1 and node.bag == kids[0].bag | {node.vertex} and (
                    node.vertex not in kids[0].bag
                )
            elif node.kind == FORGET:
                ok = len(kids) == 1 and node.bag == kids[0].bag - {node.vertex} and (
                    node.vertex in kids[0].bag
                )
            elif node.kind == JOIN:
                ok = len(kids) == 2 and all(k.bag == node.bag for k in kids)
            else:
                ok = False
            if not ok:
                raise DecompositionError(f"nice node {index} ({node.kind}) is malformed")


def make_nice(td: TreeDecomposition, root: int = 0) -> NiceDecomposition:
    """Convert ``td`` to nice form rooted at bag ``root`` with an empty root bag.

    Every tree edge becomes a forget chain followed by an introduce chain;
    bags with several children get a binary chain of join nodes.
    """

    nodes: list[NiceNode] = []

    def add(kind: str, bag: frozenset[int], children: tuple[int, ...], vertex: int | None = None):
        nodes.append(NiceNode(kind, bag, children, vertex))
        return len(nodes) - 1

    def chain(top: int, start: frozenset[int], target: frozenset[int]) -> int:
        bag = start
        for v in sorted(start - target):
            bag = bag - {v}
            top = add(FORGET, bag, (top,), v)
        for v in sorted(target - start):
            bag = bag | {v}
            top = add(INTRODUCE, bag, (top,), v)
        return top

    tree = td.tree_graph()
    parent = {root: None}
    order = [root]
    for bag_id in order:
        for child in sorted(tree.neighbors(bag_id)):
            if child not in parent:
                parent[child] = bag_id
                order.append(child)

    built: dict[int, int] = {}
    for bag_id in reversed(order):
        bag = td.bags[bag_id]
        children = [c for c in sorted(tree.neighbors(bag_id)) if parent.get(c) == bag_id]
        if not children:
            built[bag_id] = chain(add(LEAF, frozenset(), ()), frozenset(), bag)
            continue
        tops = [chain(built[c], td.bags[c], bag) for c in children]
        top = tops[0]
        for other in tops[1:]:
            top = add(JOIN, bag, (top, other))
        built[bag_id] = top

    top = chain(built[root], td.bags[root], frozenset())
    nice = NiceDecomposition(nodes, top)
    logger.debug(f"nice decomposition: {len(nodes)} nodes, width {nice.width}")
    return nice
