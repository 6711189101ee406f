"""
Symmetry-Breaking Constraints
Lex-leader permutation constraints as rules over fresh chain atoms

Atom order: ascending id, smallest id most significant, false < true.
The constraint for π keeps exactly the assignments M with
vec(M) ≤ vec(a ↦ M(π(a))), restricted to the first k index positions.
"""
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Tuple, Union

from .logging_config import pipeline_logger
from .program import AtomId, Program, Rule
from .symmetry import AtomPermutation, GeneratorSet, cycle_form


@dataclass(frozen=True)
class LexIndex:
    """Ascending atom positions a permutation constraint compares"""
    positions: Tuple[AtomId, ...]

    def __len__(self) -> int:
        return len(self.positions)


@dataclass(frozen=True)
class TruncationK:
    """Number of lex positions kept per constraint; None means unbounded"""
    k: Optional[int] = None

    def __post_init__(self):
        if self.k is not None and self.k < 1:
            raise ValueError("k must be at least 1")

    @classmethod
    def parse(cls, text: str) -> "TruncationK":
        """'inf' or a positive integer"""
        if text.strip().lower() in ("inf", "infinity", "unbounded"):
            return cls(None)
        return cls(int(text))

    @property
    def unbounded(self) -> bool:
        return self.k is None

    def limit(self, length: int) -> int:
        return length if self.k is None else min(self.k, length)

    def __str__(self) -> str:
        return "inf" if self.k is None else str(self.k)


UNBOUNDED = TruncationK(None)


def _as_truncation(k: Union[TruncationK, int, None]) -> TruncationK:
    return k if isinstance(k, TruncationK) else TruncationK(k)


class FreshAtomAllocator:
    """Hands out consecutive atom ids above a program's max_atom_id"""

    def __init__(self, max_atom_id: int):
        self.next_id = max_atom_id + 1

    def allocate(self) -> AtomId:
        atom = self.next_id
        self.next_id += 1
        return atom

    @property
    def max_atom_id(self) -> int:
        return self.next_id - 1


@dataclass(frozen=True)
class SbcRuleSet:
    """Rules emitted for one generator and the chain atoms they introduce"""
    rules: Tuple[Rule, ...]
    fresh_atoms: Tuple[AtomId, ...]
    generator_tag: int
    index_size: int = 0


class EmptyIndex(Exception):
    """Identity permutation has nothing to compare"""
    pass


def lex_index(pi: AtomPermutation) -> LexIndex:
    """
    Support of π without the largest atom of each cycle, ascending

    Raises:
        EmptyIndex: π is the identity
    """
    form = cycle_form(pi)
    if not form.cycles:
        raise EmptyIndex("identity permutation has an empty lex index")
    positions = set()
    for cycle in form.cycles:
        positions |= set(cycle) - {max(cycle)}
    return LexIndex(tuple(sorted(positions)))


def permutation_constraint(
    pi: AtomPermutation,
    k: Union[TruncationK, int, None],
    alloc: FreshAtomAllocator,
    generator_tag: int = 0,
) -> SbcRuleSet:
    """
    Chained lex-leader constraint for one permutation

    With p₁..p_m the truncated lex index and v₂..v_m fresh chain atoms:
        ← p₁, not π(p₁)
        ← v₂
        vᵢ ← p_{i-1}, pᵢ, not π(pᵢ)
        vᵢ ← pᵢ, not π(p_{i-1}), not π(pᵢ)
        vᵢ ← p_{i-1}, v_{i+1}
        vᵢ ← v_{i+1}, not π(p_{i-1})
    Rules mentioning v_{m+1} are left out, so the chain ends underivable.
    """
    if pi.is_identity:
        return SbcRuleSet((), (), generator_tag)

    index = lex_index(pi)
    p = index.positions[:_as_truncation(k).limit(len(index))]
    m = len(p)

    rules = [Rule.of((), [p[0]], [pi(p[0])])]
    chain: Dict[int, AtomId] = {}
    if m >= 2:
        for i in range(2, m + 1):
            chain[i] = alloc.allocate()
        rules.append(Rule.of((), [chain[2]]))
        for i in range(2, m + 1):
            v, prev, cur = chain[i], p[i - 2], p[i - 1]
            rules.append(Rule.of([v], [prev, cur], [pi(cur)]))
            rules.append(Rule.of([v], [cur], [pi(prev), pi(cur)]))
            if i < m:
                nxt = chain[i + 1]
                rules.append(Rule.of([v], [prev, nxt]))
                rules.append(Rule.of([v], [nxt], [pi(prev)]))

    return SbcRuleSet(tuple(rules), tuple(chain[i] for i in sorted(chain)), generator_tag, len(index))


def sbc_rule_sets(
    program: Program,
    gens: Iterable[AtomPermutation],
    k: Union[TruncationK, int, None] = UNBOUNDED,
    alloc: Optional[FreshAtomAllocator] = None,
) -> List[SbcRuleSet]:
    """One rule block per generator, chain atoms in ascending blocks by generator index"""
    if alloc is None:
        alloc = FreshAtomAllocator(program.max_atom_id)
    blocks = []
    for tag, pi in enumerate(gens, start=1):
        if pi.is_identity:
            continue
        blocks.append(permutation_constraint(pi, k, alloc, tag))
    return blocks


def build_sbc(
    program: Program,
    gens: Union[GeneratorSet, Iterable[AtomPermutation]],
    k: Union[TruncationK, int, None] = UNBOUNDED,
    name_sbc_atoms: bool = False,
) -> Program:
    """
    Program plus the permutation constraints of every generator

    Args:
        program: source program
        gens: generators verified on the program
        k: lex positions per constraint
        name_sbc_atoms: list chain atoms in the symbol table as _sbc(g,i)
    """
    alloc = FreshAtomAllocator(program.max_atom_id)
    blocks = sbc_rule_sets(program, gens, k, alloc)
    if not blocks:
        return program

    added: List[Rule] = []
    symbols = dict(program.symbol_table)
    max_atom_id = alloc.max_atom_id
    for block in blocks:
        added.extend(block.rules)
        for position, atom in enumerate(block.fresh_atoms, start=2):
            if name_sbc_atoms:
                symbols[atom] = f"_sbc({block.generator_tag},{position})"

    pipeline_logger.debug_data(
        "Symmetry-breaking rules added",
        data={
            "generators": len(blocks),
            "rules": len(added),
            "chain_atoms": max_atom_id - program.max_atom_id,
            "k": str(_as_truncation(k)),
        }
    )
    return program.with_rules(program.rules + tuple(added), symbol_table=symbols, max_atom_id=max_atom_id)
