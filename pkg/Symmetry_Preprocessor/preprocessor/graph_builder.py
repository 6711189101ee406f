"""
Program Graph Construction
Coloured digraph whose colour-preserving automorphisms are program symmetries

Every atom gets a positive and a negative literal vertex joined by a
consistency edge, every rule a body vertex linked from its body literals
and to its head atoms. Constraints point at a dedicated bottom vertex.
"""
from dataclasses import dataclass, field
from enum import IntEnum
from typing import Dict, FrozenSet, List, Optional, Tuple

from .program import AtomId, Program, Rule

VertexId = int


class Colour(IntEnum):
    """Vertex colour classes"""
    POS_LIT = 1
    NEG_LIT = 2
    BODY = 3
    FACT = 4
    BOTTOM = 5


@dataclass(frozen=True)
class BuildOptions:
    """Size optimisations; both preserve the automorphism group"""
    opt_facts: bool = True
    opt_unary: bool = True


@dataclass(frozen=True, eq=False)
class ColouredDigraph:
    """Directed graph on vertices 0..vertex_count-1 with one colour per vertex"""
    vertex_count: int
    colours: Tuple[int, ...]
    edges: FrozenSet[Tuple[VertexId, VertexId]]
    successors: Tuple[Tuple[VertexId, ...], ...] = field(init=False, repr=False)
    predecessors: Tuple[Tuple[VertexId, ...], ...] = field(init=False, repr=False)

    def __post_init__(self):
        if len(self.colours) != self.vertex_count:
            raise ValueError("one colour per vertex required")
        succ: List[List[VertexId]] = [[] for _ in range(self.vertex_count)]
        pred: List[List[VertexId]] = [[] for _ in range(self.vertex_count)]
        for u, v in self.edges:
            if u == v:
                raise ValueError(f"self-loop on vertex {u}")
            if not (0 <= u < self.vertex_count and 0 <= v < self.vertex_count):
                raise ValueError(f"edge ({u}, {v}) leaves the vertex range")
            succ[u].append(v)
            pred[v].append(u)
        object.__setattr__(self, "successors", tuple(tuple(sorted(s)) for s in succ))
        object.__setattr__(self, "predecessors", tuple(tuple(sorted(p)) for p in pred))

    def colour_of(self, vertex: VertexId) -> int:
        return self.colours[vertex]

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def to_networkx(self):
        """networkx.DiGraph view with a 'colour' node attribute"""
        import networkx as nx

        graph = nx.DiGraph()
        for vertex, colour in enumerate(self.colours):
            graph.add_node(vertex, colour=colour)
        graph.add_edges_from(self.edges)
        return graph


@dataclass(frozen=True)
class VertexMap:
    """Where atoms, rules and the bottom vertex live in the graph"""
    atom_pos: Dict[AtomId, VertexId]
    atom_neg: Dict[AtomId, VertexId]
    body_of_rule: Dict[Rule, VertexId]
    bottom: Optional[VertexId] = None

    def atom_at_pos(self) -> Dict[VertexId, AtomId]:
        return {v: a for a, v in self.atom_pos.items()}


class _GraphAssembler:
    """Allocates vertices and collects edges for one build"""

    def __init__(self):
        self.colours: List[int] = []
        self.edges: set = set()
        self.bottom: Optional[VertexId] = None

    def vertex(self, colour: Colour) -> VertexId:
        self.colours.append(int(colour))
        return len(self.colours) - 1

    def bottom_vertex(self) -> VertexId:
        if self.bottom is None:
            self.bottom = self.vertex(Colour.BOTTOM)
        return self.bottom

    def edge(self, u: VertexId, v: VertexId) -> None:
        self.edges.add((u, v))

    def graph(self) -> ColouredDigraph:
        return ColouredDigraph(len(self.colours), tuple(self.colours), frozenset(self.edges))


def build_graph(program: Program, options: BuildOptions = BuildOptions()) -> Tuple[ColouredDigraph, VertexMap]:
    """
    Build the coloured digraph of a program

    Args:
        program: ground program
        options: fact / unary-body optimisations

    Returns:
        (graph, vertex map)
    """
    asm = _GraphAssembler()
    atoms = program.sorted_atoms

    facts = set()
    if options.opt_facts:
        facts = {next(iter(r.head)) for r in program.rules if r.is_fact}

    atom_pos: Dict[AtomId, VertexId] = {}
    atom_neg: Dict[AtomId, VertexId] = {}
    for atom in atoms:
        atom_pos[atom] = asm.vertex(Colour.FACT if atom in facts else Colour.POS_LIT)
        atom_neg[atom] = asm.vertex(Colour.NEG_LIT)
        asm.edge(atom_pos[atom], atom_neg[atom])

    body_of_rule: Dict[Rule, VertexId] = {}
    for rule in program.rules:
        if options.opt_facts and rule.is_fact:
            continue

        if options.opt_unary and len(rule.head) <= 1 and rule.body_size == 1:
            if rule.body_pos:
                source = atom_pos[next(iter(rule.body_pos))]
            else:
                source = atom_neg[next(iter(rule.body_neg))]
            target = atom_pos[next(iter(rule.head))] if rule.head else asm.bottom_vertex()
            # a ← a would become a self-loop; keep its body vertex instead
            if source != target:
                asm.edge(source, target)
                continue

        body = asm.vertex(Colour.BODY)
        body_of_rule[rule] = body
        for atom in rule.body_pos:
            asm.edge(atom_pos[atom], body)
        for atom in rule.body_neg:
            asm.edge(atom_neg[atom], body)
        if rule.head:
            for atom in rule.head:
                asm.edge(body, atom_pos[atom])
        else:
            asm.edge(body, asm.bottom_vertex())

    return asm.graph(), VertexMap(atom_pos, atom_neg, body_of_rule, asm.bottom)


def count_parameters(program: Program) -> Tuple[int, int, int]:
    """(m rules, n atoms, l literal occurrences)"""
    m = len(program.rules)
    n = len(program.atoms)
    l = sum(rule.literal_count for rule in program.rules)
    return m, n, l


def graph_size_check(program: Program) -> Tuple[int, int]:
    """
    Expected (vertices, edges) of the unoptimised graph: (m + 2n, l + n)

    Raises:
        FormulaInapplicable: program has integrity constraints (bottom vertex)
    """
    if program.has_constraints:
        raise FormulaInapplicable("size formula does not cover integrity constraints")
    m, n, l = count_parameters(program)
    return m + 2 * n, l + n


def write_graph(graph: ColouredDigraph) -> str:
    """Line format for external tools: 'v <id> <colour>' then 'e <src> <dst>'"""
    lines = [f"v {vertex} {colour}" for vertex, colour in enumerate(graph.colours)]
    lines.extend(f"e {u} {v}" for u, v in sorted(graph.edges))
    return "\n".join(lines) + "\n"


class FormulaInapplicable(Exception):
    """Size formula requested for a program it does not describe"""
    pass
