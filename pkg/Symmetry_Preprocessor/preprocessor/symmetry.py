"""
Program Symmetries
Atom permutations projected from graph automorphisms, plus the group
machinery used by constraint generation and the tests
"""
import os
import itertools
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Dict, FrozenSet, Iterable, Iterator, List, Mapping, Optional, Sequence, Set, Tuple, Union

from .automorphism import (
    AutomorphismSearchResult,
    TooLarge,
    VertexPermutation,
    search_automorphisms,
)
from .graph_builder import BuildOptions, ColouredDigraph, VertexMap, build_graph
from .logging_config import pipeline_logger
from .program import AtomId, Program, is_symmetry


# Configuration
CLOSURE_BOUND = int(os.getenv("SBC_CLOSURE_BOUND", 100000))
BRUTE_FORCE_MAX_ATOMS = 8


class AtomPermutation:
    """
    Bijection on atom ids, stored by its moved points only

    Atoms outside the stored mapping are fixed, so one value covers any
    superset of its support (including the false-marker atom).
    """
    __slots__ = ("_moved", "_key")

    def __init__(self, mapping: Union[Mapping[AtomId, AtomId], Iterable[Tuple[AtomId, AtomId]]] = ()):
        moved = {a: b for a, b in dict(mapping).items() if a != b}
        if set(moved) != set(moved.values()):
            raise ValueError("mapping is not a permutation of its moved points")
        self._moved: Dict[AtomId, AtomId] = moved
        self._key = frozenset(moved.items())

    @classmethod
    def identity(cls) -> "AtomPermutation":
        return cls()

    @classmethod
    def from_cycles(cls, cycles: Iterable[Sequence[AtomId]]) -> "AtomPermutation":
        mapping = {}
        for cycle in cycles:
            for i, atom in enumerate(cycle):
                mapping[atom] = cycle[(i + 1) % len(cycle)]
        return cls(mapping)

    def __call__(self, atom: AtomId) -> AtomId:
        return self._moved.get(atom, atom)

    @property
    def mapping(self) -> Dict[AtomId, AtomId]:
        return dict(self._moved)

    @property
    def is_identity(self) -> bool:
        return not self._moved

    def compose(self, other: "AtomPermutation") -> "AtomPermutation":
        """self ∘ other (apply other first)"""
        points = set(self._moved) | set(other._moved)
        return AtomPermutation({a: self(other(a)) for a in points})

    def inverse(self) -> "AtomPermutation":
        return AtomPermutation({b: a for a, b in self._moved.items()})

    def __eq__(self, other) -> bool:
        if not isinstance(other, AtomPermutation):
            return NotImplemented
        return self._key == other._key

    def __hash__(self) -> int:
        return hash(self._key)

    def __repr__(self) -> str:
        return f"AtomPermutation{format_cycles(self) if self._moved else '()'}"


@dataclass(frozen=True)
class CycleForm:
    """Disjoint cycles, each starting at its minimum, sorted by first element"""
    cycles: Tuple[Tuple[AtomId, ...], ...] = ()

    def as_lists(self) -> List[List[AtomId]]:
        return [list(c) for c in self.cycles]

    def render(self, name: Callable[[AtomId], str] = str) -> str:
        return "".join("(" + " ".join(name(a) for a in cycle) + ")" for cycle in self.cycles)


@dataclass(frozen=True)
class GeneratorSet:
    """Ordered verified generators; never contains the identity"""
    generators: Tuple[AtomPermutation, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(self.generators))
        if any(g.is_identity for g in self.generators):
            raise ValueError("generator sets exclude the identity")

    def __iter__(self) -> Iterator[AtomPermutation]:
        return iter(self.generators)

    def __len__(self) -> int:
        return len(self.generators)

    def __getitem__(self, index: int) -> AtomPermutation:
        return self.generators[index]


@dataclass(frozen=True)
class Overflow:
    """Closure stopped after generating more than `bound` elements"""
    bound: int


def support(permutation: AtomPermutation) -> FrozenSet[AtomId]:
    """Atoms not mapped to themselves"""
    return frozenset(a for a in permutation.mapping)


def cycle_form(permutation: AtomPermutation) -> CycleForm:
    remaining = set(permutation.mapping)
    cycles = []
    while remaining:
        start = min(remaining)
        cycle = [start]
        atom = permutation(start)
        while atom != start:
            cycle.append(atom)
            atom = permutation(atom)
        remaining -= set(cycle)
        cycles.append(tuple(cycle))
    return CycleForm(tuple(sorted(cycles)))


def format_cycles(permutation: AtomPermutation, name: Callable[[AtomId], str] = str) -> str:
    """Cycle notation such as '(2 3)(5 7 9)'; '()' for the identity"""
    return cycle_form(permutation).render(name) or "()"


def closure(gens: Iterable, bound: int = CLOSURE_BOUND, identity=None):
    """
    Breadth-first product closure of a generating set

    Args:
        gens: permutations supporting compose()
        bound: maximum number of elements before giving up
        identity: identity element (AtomPermutation identity by default)

    Returns:
        frozenset of group elements, or Overflow
    """
    gens = list(gens)
    if identity is None:
        identity = AtomPermutation.identity()
    elements = {identity}
    queue = deque([identity])
    while queue:
        current = queue.popleft()
        for g in gens:
            product = g.compose(current)
            if product not in elements:
                elements.add(product)
                if len(elements) > bound:
                    return Overflow(bound)
                queue.append(product)
    return frozenset(elements)


def orbit_of_set(sets: Iterable[Iterable[AtomId]], gens: Iterable[AtomPermutation]) -> List[FrozenSet[FrozenSet[AtomId]]]:
    """
    Partition a collection of atom sets into orbits under the generators

    Elements are joined when a generator maps one onto the other;
    images outside the collection are ignored.
    """
    members = sorted({frozenset(s) for s in sets}, key=lambda s: (len(s), sorted(s)))
    index = {s: i for i, s in enumerate(members)}
    parent = list(range(len(members)))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    gens = list(gens)
    for s in members:
        for g in gens:
            image = frozenset(g(a) for a in s)
            j = index.get(image)
            if j is not None:
                a, b = find(index[s]), find(j)
                if a != b:
                    parent[max(a, b)] = min(a, b)

    orbits: Dict[int, Set[FrozenSet[AtomId]]] = {}
    for s in members:
        orbits.setdefault(find(index[s]), set()).add(s)
    return [frozenset(orbits[root]) for root in sorted(orbits)]


def generates(gens: Iterable[AtomPermutation], target: AtomPermutation, bound: int = CLOSURE_BOUND):
    """
    Membership of target in the group generated by gens

    Walks the closure breadth-first and stops as soon as target turns up.

    Returns:
        True or False, or Overflow when more than `bound` elements were seen
    """
    gens = list(gens)
    identity = AtomPermutation.identity()
    if target == identity or target in gens:
        return True
    elements = {identity}
    queue = deque([identity])
    while queue:
        current = queue.popleft()
        for g in gens:
            product = g.compose(current)
            if product == target:
                return True
            if product not in elements:
                elements.add(product)
                if len(elements) > bound:
                    return Overflow(bound)
                queue.append(product)
    return False


def reduce_generators(gens: Sequence[AtomPermutation], bound: int = CLOSURE_BOUND) -> Tuple[List[AtomPermutation], bool]:
    """
    Greedily drop generators that lie in the group of the others

    Returns:
        (kept generators, True if every check completed within the bound)
    """
    kept = list(gens)
    for g in list(gens):
        others = [h for h in kept if h is not g]
        member = generates(others, g, bound)
        if isinstance(member, Overflow):
            return kept, False
        if member:
            kept = others
    return kept, True


class InconsistentAutomorphism(Exception):
    """Vertex automorphism that does not respect the literal pairing"""
    pass


def project(gamma: VertexPermutation, vertex_map: VertexMap) -> AtomPermutation:
    """
    Restrict a graph automorphism to the positive literal vertices

    Raises:
        InconsistentAutomorphism: image of a⁻ is not (π(a))⁻
    """
    atom_at = vertex_map.atom_at_pos()
    mapping = {}
    for atom, vertex in vertex_map.atom_pos.items():
        target = atom_at.get(gamma(vertex))
        if target is None:
            raise InconsistentAutomorphism(f"atom {atom} leaves the positive literal vertices")
        if gamma(vertex_map.atom_neg[atom]) != vertex_map.atom_neg[target]:
            raise InconsistentAutomorphism(f"negative literal of atom {atom} not mapped to that of {target}")
        mapping[atom] = target
    return AtomPermutation(mapping)


@dataclass
class DetectionResult:
    """Generators of one program plus detection bookkeeping"""
    generators: GeneratorSet
    graph: ColouredDigraph
    vertex_map: VertexMap
    group_size: int
    search_nodes: int
    search_depth: int = 0
    found: int = 0
    identity_skipped: int = 0
    pipeline_errors: int = 0
    reduced: bool = False
    dropped_redundant: int = 0
    orbit_sizes: List[int] = field(default_factory=list)


def detect_symmetries(
    program: Program,
    options: BuildOptions = BuildOptions(),
    node_budget: Optional[int] = None,
    closure_bound: int = CLOSURE_BOUND,
) -> DetectionResult:
    """
    Graph construction, automorphism search, projection and verification

    Every projected generator is re-checked with is_symmetry; failures are
    logged and dropped, never returned.

    Raises:
        SearchBudgetExceeded: propagated from the search
    """
    graph, vertex_map = build_graph(program, options)
    search: AutomorphismSearchResult = search_automorphisms(graph, node_budget)

    verified: List[AtomPermutation] = []
    identity_skipped = 0
    errors = 0
    for gamma in search.generators:
        try:
            pi = project(gamma, vertex_map)
        except InconsistentAutomorphism as e:
            errors += 1
            pipeline_logger.error_data("Discarded inconsistent automorphism", data={"error": str(e)})
            continue
        if pi.is_identity:
            identity_skipped += 1
            continue
        if not is_symmetry(program, pi):
            errors += 1
            pipeline_logger.error_data(
                "Discarded generator that is not a program symmetry",
                data={"cycles": format_cycles(pi)}
            )
            continue
        if pi not in verified:
            verified.append(pi)

    kept, reduced = verified, False
    if search.group_size <= closure_bound:
        kept, reduced = reduce_generators(verified, closure_bound)

    pipeline_logger.info_data(
        "Symmetry detection finished",
        data={
            "found": len(search.generators),
            "kept": len(kept),
            "identity_skipped": identity_skipped,
            "pipeline_errors": errors,
            "group_size": str(search.group_size),
        }
    )
    return DetectionResult(
        generators=GeneratorSet(tuple(kept)),
        graph=graph,
        vertex_map=vertex_map,
        group_size=search.group_size,
        search_nodes=search.nodes,
        search_depth=search.depth,
        found=len(search.generators),
        identity_skipped=identity_skipped,
        pipeline_errors=errors,
        reduced=reduced,
        dropped_redundant=len(verified) - len(kept),
        orbit_sizes=search.orbit_sizes,
    )


def brute_force_symmetries(program: Program) -> FrozenSet[AtomPermutation]:
    """
    Every symmetry of a small program, by testing all atom permutations

    Raises:
        TooLarge: more atoms than the guard allows
    """
    atoms = program.sorted_atoms
    if len(atoms) > BRUTE_FORCE_MAX_ATOMS:
        raise TooLarge(f"{len(atoms)} atoms exceeds the brute-force guard of {BRUTE_FORCE_MAX_ATOMS}")
    found = set()
    for images in itertools.permutations(atoms):
        pi = AtomPermutation(dict(zip(atoms, images)))
        if is_symmetry(program, pi):
            found.add(pi)
    return frozenset(found)
