"""
Automorphism Search
Generators of the colour-preserving automorphism group of a coloured digraph

Provides:
- Equitable partition refinement with separate in/out counts
- Individualization-refinement search along a first path with orbit pruning
- Group size as the product of first-path orbit sizes
- Exhaustive oracle for small graphs
"""
import os
import heapq
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .graph_builder import ColouredDigraph, VertexId
from .logging_config import search_logger


# Configuration
DEFAULT_NODE_BUDGET = int(os.getenv("SBC_NODE_BUDGET", 200000))
BRUTE_FORCE_MAX_VERTICES = int(os.getenv("SBC_BRUTE_FORCE_MAX_VERTICES", 10))


@dataclass(frozen=True)
class OrderedPartition:
    """Ordered list of disjoint non-empty vertex cells"""
    cells: Tuple[Tuple[VertexId, ...], ...]

    def __post_init__(self):
        seen = set()
        for cell in self.cells:
            if not cell:
                raise ValueError("partition cells must be non-empty")
            if seen & set(cell) or len(set(cell)) != len(cell):
                raise ValueError("partition cells must be disjoint")
            seen |= set(cell)

    @classmethod
    def unit(cls, vertex_count: int) -> "OrderedPartition":
        return cls((tuple(range(vertex_count)),) if vertex_count else ())

    @classmethod
    def by_colour(cls, graph: ColouredDigraph) -> "OrderedPartition":
        cells: Dict[int, List[VertexId]] = {}
        for vertex, colour in enumerate(graph.colours):
            cells.setdefault(colour, []).append(vertex)
        return cls(tuple(tuple(cells[c]) for c in sorted(cells)))

    @property
    def is_discrete(self) -> bool:
        return all(len(cell) == 1 for cell in self.cells)

    def as_sets(self) -> List[frozenset]:
        return [frozenset(cell) for cell in self.cells]


@dataclass(frozen=True)
class VertexPermutation:
    """Bijection on 0..n-1 stored as an image tuple"""
    images: Tuple[VertexId, ...]

    @classmethod
    def identity(cls, vertex_count: int) -> "VertexPermutation":
        return cls(tuple(range(vertex_count)))

    def __call__(self, vertex: VertexId) -> VertexId:
        return self.images[vertex]

    @property
    def is_identity(self) -> bool:
        return all(i == v for i, v in enumerate(self.images))

    def compose(self, other: "VertexPermutation") -> "VertexPermutation":
        """self ∘ other (apply other first)"""
        return VertexPermutation(tuple(self.images[v] for v in other.images))

    def inverse(self) -> "VertexPermutation":
        inverse = [0] * len(self.images)
        for source, target in enumerate(self.images):
            inverse[target] = source
        return VertexPermutation(tuple(inverse))

    def is_automorphism_of(self, graph: ColouredDigraph) -> bool:
        if sorted(self.images) != list(range(graph.vertex_count)):
            return False
        if any(graph.colours[self.images[v]] != graph.colours[v] for v in range(graph.vertex_count)):
            return False
        return all((self.images[u], self.images[v]) in graph.edges for u, v in graph.edges)


@dataclass
class AutomorphismSearchResult:
    """Outcome of one search"""
    generators: List[VertexPermutation]
    group_size: int
    nodes: int
    depth: int
    orbit_sizes: List[int] = field(default_factory=list)


class _PartitionState:
    """
    Cells as contiguous ranges of `lab`; a cell is named by its start index.
    Start indices are labelling-invariant, so refinement is equivariant.
    """
    __slots__ = ("lab", "start_of", "cell_len", "cells")

    def __init__(self, lab: List[VertexId], start_of: List[int], cell_len: List[int], cells: int):
        self.lab = lab
        self.start_of = start_of
        self.cell_len = cell_len
        self.cells = cells

    @classmethod
    def from_partition(cls, partition: OrderedPartition, vertex_count: int) -> "_PartitionState":
        lab: List[VertexId] = []
        start_of = [0] * vertex_count
        cell_len = [0] * vertex_count
        for cell in partition.cells:
            start = len(lab)
            cell_len[start] = len(cell)
            for vertex in cell:
                start_of[vertex] = start
            lab.extend(cell)
        if len(lab) != vertex_count:
            raise ValueError("partition does not cover all vertices")
        return cls(lab, start_of, cell_len, len(partition.cells))

    def copy(self) -> "_PartitionState":
        return _PartitionState(self.lab[:], self.start_of[:], self.cell_len[:], self.cells)

    def starts(self) -> List[int]:
        result = []
        i = 0
        while i < len(self.lab):
            result.append(i)
            i += self.cell_len[i]
        return result

    def shape(self) -> Tuple[int, ...]:
        return tuple(self.cell_len[s] for s in self.starts())

    @property
    def is_discrete(self) -> bool:
        return self.cells == len(self.lab)

    def first_non_singleton(self) -> Optional[int]:
        for start in self.starts():
            if self.cell_len[start] > 1:
                return start
        return None

    def cell(self, start: int) -> List[VertexId]:
        return self.lab[start:start + self.cell_len[start]]

    def to_partition(self) -> OrderedPartition:
        return OrderedPartition(tuple(tuple(self.cell(s)) for s in self.starts()))

    def split(self, start: int, ordered: List[VertexId], keys: List[tuple]) -> List[int]:
        """Rewrite a cell as fragments of equal key; returns fragment starts"""
        fragments = []
        position = start
        previous = None
        for vertex, key in zip(ordered, keys):
            if key != previous:
                fragments.append(position)
                previous = key
            self.lab[position] = vertex
            position += 1
        bounds = fragments + [start + len(ordered)]
        for i, frag in enumerate(fragments):
            self.cell_len[frag] = bounds[i + 1] - frag
            for p in range(frag, bounds[i + 1]):
                self.start_of[self.lab[p]] = frag
        self.cells += len(fragments) - 1
        return fragments

    def individualize(self, start: int, vertex: VertexId) -> Tuple[int, int]:
        """Split {vertex} off the front of its cell"""
        rest = [v for v in self.cell(start) if v != vertex]
        self.lab[start] = vertex
        self.lab[start + 1:start + 1 + len(rest)] = rest
        self.cell_len[start] = 1
        self.cell_len[start + 1] = len(rest)
        for v in rest:
            self.start_of[v] = start + 1
        self.cells += 1
        return start, start + 1


def _refine_state(graph: ColouredDigraph, state: _PartitionState, splitters: Iterable[int]) -> None:
    """Refine in place to the coarsest equitable partition below the current one"""
    heap = sorted(set(splitters))
    heapq.heapify(heap)
    queued = set(heap)
    successors, predecessors = graph.successors, graph.predecessors

    while heap:
        if state.is_discrete:
            return
        splitter_start = heapq.heappop(heap)
        queued.discard(splitter_start)
        splitter = state.cell(splitter_start)

        out_count: Dict[VertexId, int] = {}
        in_count: Dict[VertexId, int] = {}
        for u in splitter:
            for v in predecessors[u]:
                out_count[v] = out_count.get(v, 0) + 1
            for v in successors[u]:
                in_count[v] = in_count.get(v, 0) + 1

        touched = sorted({state.start_of[v] for v in out_count} | {state.start_of[v] for v in in_count})
        for start in touched:
            if state.cell_len[start] == 1:
                continue
            members = state.cell(start)
            keyed = sorted(
                ((in_count.get(v, 0), out_count.get(v, 0)), v) for v in members
            )
            if keyed[0][0] == keyed[-1][0]:
                continue
            fragments = state.split(start, [v for _, v in keyed], [k for k, _ in keyed])
            for frag in fragments:
                if frag not in queued:
                    queued.add(frag)
                    heapq.heappush(heap, frag)


def refine(graph: ColouredDigraph, partition: OrderedPartition) -> OrderedPartition:
    """
    Coarsest equitable refinement of an ordered partition

    Cells split in place; fragments are ordered by (in-count, out-count)
    toward the splitter cell.
    """
    state = _PartitionState.from_partition(partition, graph.vertex_count)
    _refine_state(graph, state, state.starts())
    return state.to_partition()


class _UnionFind:
    """Vertex orbits of the generators found so far"""

    def __init__(self, size: int):
        self.parent = list(range(size))
        self.size = [1] * size

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, x: int, y: int) -> None:
        x, y = self.find(x), self.find(y)
        if x == y:
            return
        if self.size[x] < self.size[y]:
            x, y = y, x
        self.parent[y] = x
        self.size[x] += self.size[y]

    def class_size(self, x: int) -> int:
        return self.size[self.find(x)]


class AutomorphismSearch:
    """
    Individualization-refinement search for automorphism generators

    The first path individualizes the smallest vertex of the first
    non-singleton cell at every level. Levels are then revisited deepest
    first; every other member of the level's target cell that is not yet
    known to share an orbit with the first-path vertex gets a subtree search
    for a leaf that matches the first leaf under an automorphism.
    """

    def __init__(self, graph: ColouredDigraph, node_budget: Optional[int] = None):
        self.graph = graph
        self.node_budget = node_budget or DEFAULT_NODE_BUDGET
        self.nodes = 0

    def _node(self) -> None:
        self.nodes += 1
        if self.nodes > self.node_budget:
            raise SearchBudgetExceeded(self.node_budget, self.nodes)

    def _child(self, state: _PartitionState, start: int, vertex: VertexId) -> _PartitionState:
        self._node()
        child = state.copy()
        singleton, _ = child.individualize(start, vertex)
        # parent is equitable, so the singleton is the only splitter needed
        _refine_state(self.graph, child, [singleton])
        return child

    def run(self) -> AutomorphismSearchResult:
        graph = self.graph
        n = graph.vertex_count
        if n == 0:
            return AutomorphismSearchResult([], 1, 0, 0)

        root = _PartitionState.from_partition(OrderedPartition.by_colour(graph), n)
        _refine_state(graph, root, root.starts())
        self._node()

        # First path
        path_states = [root]
        targets: List[Tuple[int, List[VertexId]]] = []
        choices: List[VertexId] = []
        state = root
        while not state.is_discrete:
            start = state.first_non_singleton()
            cell = sorted(state.cell(start))
            targets.append((start, cell))
            choices.append(cell[0])
            state = self._child(state, start, cell[0])
            path_states.append(state)
        shapes = [s.shape() for s in path_states]
        first_leaf = state.lab

        generators: List[VertexPermutation] = []
        orbits = _UnionFind(n)
        orbit_sizes = [1] * len(targets)

        for level in range(len(targets) - 1, -1, -1):
            start, cell = targets[level]
            fixed = choices[level]
            failed: List[VertexId] = []
            for vertex in cell:
                if vertex == fixed or orbits.find(vertex) == orbits.find(fixed):
                    continue
                if any(orbits.find(vertex) == orbits.find(f) for f in failed):
                    continue
                gamma = self._search_subtree(path_states[level], level, start, vertex, targets, shapes, first_leaf)
                if gamma is None:
                    failed.append(vertex)
                    continue
                generators.append(gamma)
                for v in range(n):
                    orbits.union(v, gamma.images[v])
            orbit_sizes[level] = orbits.class_size(fixed)

        group_size = 1
        for size in orbit_sizes:
            group_size *= size

        search_logger.debug_data(
            "Automorphism search finished",
            data={
                "vertices": n,
                "edges": graph.edge_count,
                "generators": len(generators),
                "nodes": self.nodes,
                "depth": len(targets),
                "group_size": str(group_size),
            }
        )
        return AutomorphismSearchResult(generators, group_size, self.nodes, len(targets), orbit_sizes)

    def _search_subtree(
        self,
        parent: _PartitionState,
        level: int,
        start: int,
        vertex: VertexId,
        targets: Sequence[Tuple[int, List[VertexId]]],
        shapes: Sequence[Tuple[int, ...]],
        first_leaf: List[VertexId],
    ) -> Optional[VertexPermutation]:
        """Depth-first search below (prefix, vertex) for a leaf equivalent to the first leaf"""
        child = self._child(parent, start, vertex)
        if child.shape() != shapes[level + 1]:
            return None

        depth_limit = len(targets)
        stack: List[Tuple[_PartitionState, int, List[VertexId]]] = []

        def push(state: _PartitionState, depth: int) -> Optional[VertexPermutation]:
            if depth == depth_limit:
                return self._leaf_automorphism(first_leaf, state.lab)
            cell_start = targets[depth][0]
            stack.append((state, depth, sorted(state.cell(cell_start), reverse=True)))
            return None

        found = push(child, level + 1)
        while found is None and stack:
            state, depth, pending = stack[-1]
            if not pending:
                stack.pop()
                continue
            candidate = pending.pop()
            grandchild = self._child(state, targets[depth][0], candidate)
            if grandchild.shape() != shapes[depth + 1]:
                continue
            found = push(grandchild, depth + 1)
        return found

    def _leaf_automorphism(self, first_leaf: List[VertexId], leaf: List[VertexId]) -> Optional[VertexPermutation]:
        images = [0] * len(first_leaf)
        for source, target in zip(first_leaf, leaf):
            images[source] = target
        gamma = VertexPermutation(tuple(images))
        if gamma.is_identity or not gamma.is_automorphism_of(self.graph):
            return None
        return gamma


def search_automorphisms(graph: ColouredDigraph, node_budget: Optional[int] = None) -> AutomorphismSearchResult:
    """Run a search and return generators, group size and effort"""
    return AutomorphismSearch(graph, node_budget).run()


def automorphism_generators(graph: ColouredDigraph, node_budget: Optional[int] = None) -> List[VertexPermutation]:
    """
    Generating set of the colour-preserving automorphism group

    Raises:
        SearchBudgetExceeded: search visited more nodes than the budget
    """
    return search_automorphisms(graph, node_budget).generators


def brute_force_automorphisms(graph: ColouredDigraph) -> List[VertexPermutation]:
    """
    Every automorphism, by exhaustive colour-respecting matching

    Raises:
        TooLarge: graph above the vertex guard
    """
    if graph.vertex_count > BRUTE_FORCE_MAX_VERTICES:
        raise TooLarge(f"{graph.vertex_count} vertices exceeds the brute-force guard of {BRUTE_FORCE_MAX_VERTICES}")
    from networkx.algorithms.isomorphism import DiGraphMatcher, categorical_node_match

    nx_graph = graph.to_networkx()
    matcher = DiGraphMatcher(nx_graph, nx_graph, node_match=categorical_node_match("colour", None))
    found = {
        VertexPermutation(tuple(mapping[v] for v in range(graph.vertex_count)))
        for mapping in matcher.isomorphisms_iter()
    }
    return sorted(found, key=lambda p: p.images)


class SearchBudgetExceeded(Exception):
    """Search tree larger than the configured node budget"""
    def __init__(self, budget: int, nodes: int):
        self.budget = budget
        self.nodes = nodes
        super().__init__(f"automorphism search exceeded node budget {budget}")


class TooLarge(Exception):
    """Input beyond an exhaustive-enumeration guard"""
    pass
