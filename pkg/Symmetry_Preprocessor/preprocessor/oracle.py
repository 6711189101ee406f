"""
Answer-Set Oracle
Exact answer-set enumeration for small programs

Candidates are supported models found by backtracking over atoms in
ascending id order (false first); each candidate is then checked for
minimality against its reduct.
"""
import os
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, Iterator, List, Sequence, Tuple

from .automorphism import TooLarge
from .logging_config import oracle_logger
from .models import CompressionReport
from .program import AtomId, Program, Rule


# Configuration
ORACLE_MAX_ATOMS = int(os.getenv("SBC_ORACLE_MAX_ATOMS", 128))


class OracleTooLarge(TooLarge):
    """Program has more atoms than the oracle guard"""
    pass


@dataclass(frozen=True, order=True)
class AnswerSet:
    """A stable model, ordered by size then atom ids"""
    size: int
    key: Tuple[AtomId, ...]

    @classmethod
    def of(cls, atoms: Iterable[AtomId]) -> "AnswerSet":
        key = tuple(sorted(set(atoms)))
        return cls(len(key), key)

    @property
    def atoms(self) -> FrozenSet[AtomId]:
        return frozenset(self.key)

    def restricted(self, atoms: Iterable[AtomId]) -> "AnswerSet":
        keep = set(atoms)
        return AnswerSet.of(a for a in self.key if a in keep)


def reduct(program: Program, model: Iterable[AtomId]) -> Program:
    """P^M: drop rules whose negative body meets M, strip the rest of negation"""
    model = frozenset(model)
    return program.with_rules(
        Rule(rule.head, rule.body_pos, frozenset())
        for rule in program.rules
        if not rule.body_neg & model
    )


class _SupportedModelSearch:
    """
    Backtracking over a fixed atom universe; atoms outside it are false

    A rule is checked once its last atom is assigned. An atom's support is
    checked once the atom and every atom of its head rules are assigned.
    """

    def __init__(self, rules: Iterable[Rule], atoms: Sequence[AtomId]):
        self.atoms = list(atoms)
        position = {a: i for i, a in enumerate(self.atoms)}
        universe = set(self.atoms)
        n = len(self.atoms)

        self.contradiction = False
        self.rules_at: List[List[Rule]] = [[] for _ in range(n)]
        self.support_at: List[List[Tuple[AtomId, List[Rule]]]] = [[] for _ in range(n)]
        head_rules: Dict[AtomId, List[Rule]] = {a: [] for a in self.atoms}

        for rule in rules:
            if not rule.body_pos <= universe:
                continue
            rule = Rule(rule.head & universe, rule.body_pos, rule.body_neg & universe)
            if not rule.atoms:
                self.contradiction = True
                continue
            self.rules_at[max(position[a] for a in rule.atoms)].append(rule)
            for a in rule.head:
                head_rules[a].append(rule)

        for a in self.atoms:
            last = max([position[a]] + [position[b] for r in head_rules[a] for b in r.atoms])
            self.support_at[last].append((a, head_rules[a]))

        self.value: Dict[AtomId, bool] = {}

    def _body_true(self, rule: Rule) -> bool:
        value = self.value
        return all(value[a] for a in rule.body_pos) and not any(value[a] for a in rule.body_neg)

    def _consistent(self, i: int) -> bool:
        value = self.value
        for rule in self.rules_at[i]:
            if self._body_true(rule) and not any(value[h] for h in rule.head):
                return False
        for atom, rules in self.support_at[i]:
            if not value[atom]:
                continue
            if not any(
                self._body_true(r) and not any(value[h] for h in r.head if h != atom)
                for r in rules
            ):
                return False
        return True

    def models(self) -> Iterator[FrozenSet[AtomId]]:
        if self.contradiction:
            return
        yield from self._extend(0)

    def _extend(self, i: int) -> Iterator[FrozenSet[AtomId]]:
        if i == len(self.atoms):
            yield frozenset(a for a in self.atoms if self.value[a])
            return
        atom = self.atoms[i]
        for truth in (False, True):
            self.value[atom] = truth
            if self._consistent(i):
                yield from self._extend(i + 1)
        del self.value[atom]


def _is_model(program: Program, model: FrozenSet[AtomId]) -> bool:
    for rule in program.rules:
        body = rule.body_pos <= model and not rule.body_neg & model
        if body and not rule.head & model:
            return False
    return True


def _is_minimal(program: Program, model: FrozenSet[AtomId]) -> bool:
    """No proper subset of M is a model of P^M"""
    search = _SupportedModelSearch(reduct(program, model).rules, sorted(model))
    return all(other == model for other in search.models())


def _guard(program: Program) -> None:
    if len(program.atoms) > ORACLE_MAX_ATOMS:
        raise OracleTooLarge(f"{len(program.atoms)} atoms exceeds the oracle guard of {ORACLE_MAX_ATOMS}")


def is_answer_set(program: Program, model: Iterable[AtomId]) -> bool:
    """
    True iff M is a ⊆-minimal model of the reduct P^M

    Raises:
        OracleTooLarge: program above the atom guard
    """
    _guard(program)
    model = frozenset(model)
    if not model <= program.atoms:
        return False
    return _is_model(program, model) and _is_minimal(program, model)


def answer_sets(program: Program) -> List[AnswerSet]:
    """
    All answer sets, sorted

    Raises:
        OracleTooLarge: program above the atom guard
    """
    _guard(program)
    found = []
    candidates = 0
    for model in _SupportedModelSearch(program.rules, program.sorted_atoms).models():
        candidates += 1
        if _is_minimal(program, model):
            found.append(AnswerSet.of(model))
    oracle_logger.debug_data(
        "Answer sets enumerated",
        data={"atoms": len(program.atoms), "candidates": candidates, "answer_sets": len(found)}
    )
    return sorted(found)


def projected_answer_sets(program: Program, atoms: Iterable[AtomId]) -> List[AnswerSet]:
    """Answer sets restricted to the given atoms, deduplicated"""
    atoms = frozenset(atoms)
    return sorted({m.restricted(atoms) for m in answer_sets(program)})


def compression(program: Program, program_sbc: Program) -> CompressionReport:
    """
    Share of answer sets removed by symmetry breaking

    Raises:
        OracleTooLarge: either program above the atom guard
    """
    total = len(answer_sets(program))
    surviving = len(projected_answer_sets(program_sbc, program.atoms))
    ratio = 0.0 if total == 0 else 1.0 - surviving / total
    return CompressionReport(total_models=total, surviving_models=surviving, compression=max(0.0, ratio))
