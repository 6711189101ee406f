"""
Ground Program Model
Ground disjunctive logic programs and the smodels intermediate format

Provides:
- Rule / Program value types (set semantics, integrity constraints as head = ∅)
- Reading and writing of smodels rule types 1 (basic) and 8 (disjunctive)
- Permutation application and the symmetry check
"""
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Dict, FrozenSet, IO, Iterable, List, Mapping, Optional, Tuple, Union

AtomId = int

# smodels rule type codes
BASIC_RULE = 1
DISJUNCTIVE_RULE = 8
UNSUPPORTED_RULE_TYPES = {
    2: "constraint",
    3: "choice",
    5: "weight",
    6: "minimize",
}


@dataclass(frozen=True)
class Rule:
    """A ground rule: head ← body_pos, not body_neg"""
    head: FrozenSet[AtomId] = frozenset()
    body_pos: FrozenSet[AtomId] = frozenset()
    body_neg: FrozenSet[AtomId] = frozenset()

    @classmethod
    def of(
        cls,
        head: Iterable[AtomId] = (),
        pos: Iterable[AtomId] = (),
        neg: Iterable[AtomId] = ()
    ) -> "Rule":
        return cls(frozenset(head), frozenset(pos), frozenset(neg))

    @property
    def is_constraint(self) -> bool:
        return not self.head

    @property
    def is_fact(self) -> bool:
        return len(self.head) == 1 and not self.body_pos and not self.body_neg

    @property
    def body_size(self) -> int:
        return len(self.body_pos) + len(self.body_neg)

    @property
    def literal_count(self) -> int:
        """Literal occurrences in head and body"""
        return len(self.head) + self.body_size

    @property
    def atoms(self) -> FrozenSet[AtomId]:
        return self.head | self.body_pos | self.body_neg

    def mapped(self, image: Callable[[AtomId], AtomId]) -> "Rule":
        return Rule(
            frozenset(image(a) for a in self.head),
            frozenset(image(a) for a in self.body_pos),
            frozenset(image(a) for a in self.body_neg),
        )

    def render(self, name: Callable[[AtomId], str] = str) -> str:
        """Human-readable form, e.g. 'a ; b :- c, not d.'"""
        head = " ; ".join(name(a) for a in sorted(self.head))
        body = [name(a) for a in sorted(self.body_pos)]
        body += [f"not {name(a)}" for a in sorted(self.body_neg)]
        if not body:
            return f"{head}."
        return f"{head} :- {', '.join(body)}." if head else f":- {', '.join(body)}."


@dataclass(frozen=True, eq=False)
class Program:
    """
    A ground disjunctive program with its smodels bookkeeping

    Rules keep first-occurrence order for deterministic output but
    compare as a set. The false-marker atom, if any, never occurs in rules.
    """
    rules: Tuple[Rule, ...] = ()
    symbol_table: Mapping[AtomId, str] = field(default_factory=dict)
    max_atom_id: int = 0
    compute_pos: Tuple[AtomId, ...] = ()
    compute_neg: Tuple[AtomId, ...] = ()
    models_to_compute: int = 1
    false_atom: Optional[AtomId] = None

    def __post_init__(self):
        seen = set()
        unique: List[Rule] = []
        for rule in self.rules:
            if rule not in seen:
                seen.add(rule)
                unique.append(rule)
        object.__setattr__(self, "rules", tuple(unique))
        object.__setattr__(self, "symbol_table", dict(self.symbol_table))
        object.__setattr__(self, "compute_pos", tuple(self.compute_pos))
        object.__setattr__(self, "compute_neg", tuple(self.compute_neg))

        referenced = set(self.symbol_table) | set(self.compute_pos) | set(self.compute_neg)
        for rule in unique:
            referenced |= rule.atoms
        if self.false_atom is not None:
            referenced.add(self.false_atom)
        if any(a < 1 for a in referenced):
            raise ValueError("atom ids must be positive")
        if self.false_atom is not None and any(self.false_atom in r.atoms for r in unique):
            raise ValueError(f"false-marker atom {self.false_atom} occurs in a rule")
        object.__setattr__(self, "max_atom_id", max([self.max_atom_id, *referenced], default=0))

    def _structure(self) -> tuple:
        """Comparison key without the false-marker bookkeeping the writer adds or reuses"""
        compute_neg = tuple(a for a in self.compute_neg if a != self.false_atom)
        max_atom_id = self.max_atom_id
        if self.false_atom is not None and self.false_atom == max_atom_id:
            referenced = set(self.symbol_table) | set(self.compute_pos) | set(compute_neg) | self.atoms
            max_atom_id = max(referenced, default=0)
        return (
            self.rule_set,
            tuple(sorted(self.symbol_table.items())),
            max_atom_id,
            self.compute_pos,
            compute_neg,
            self.models_to_compute,
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, Program):
            return NotImplemented
        return self._structure() == other._structure()

    __hash__ = None

    @cached_property
    def rule_set(self) -> FrozenSet[Rule]:
        return frozenset(self.rules)

    @cached_property
    def atoms(self) -> FrozenSet[AtomId]:
        """atom(P): atoms occurring in rules"""
        result = set()
        for rule in self.rules:
            result |= rule.atoms
        return frozenset(result)

    @property
    def sorted_atoms(self) -> List[AtomId]:
        """Atoms in the global order used downstream (ascending id)"""
        return sorted(self.atoms)

    @property
    def has_constraints(self) -> bool:
        return any(rule.is_constraint for rule in self.rules)

    def name_of(self, atom: AtomId) -> str:
        return self.symbol_table.get(atom, str(atom))

    def with_rules(
        self,
        rules: Iterable[Rule],
        symbol_table: Optional[Mapping[AtomId, str]] = None,
        max_atom_id: Optional[int] = None
    ) -> "Program":
        """Copy with replaced rules, keeping compute sections and the false marker"""
        return Program(
            rules=tuple(rules),
            symbol_table=self.symbol_table if symbol_table is None else symbol_table,
            max_atom_id=self.max_atom_id if max_atom_id is None else max_atom_id,
            compute_pos=self.compute_pos,
            compute_neg=self.compute_neg,
            models_to_compute=self.models_to_compute,
            false_atom=self.false_atom,
        )

    def render(self) -> str:
        return "\n".join(rule.render(self.name_of) for rule in self.rules)


# ==================== smodels reading ====================

@dataclass
class _RawRule:
    rule_type: int
    head: Tuple[AtomId, ...]
    pos: Tuple[AtomId, ...]
    neg: Tuple[AtomId, ...]


class _LineReader:
    """Iterates non-empty lines with 1-based line numbers"""

    def __init__(self, text: str):
        self._lines = text.splitlines()
        self._index = 0

    def next(self, expected: str) -> Tuple[int, str]:
        while self._index < len(self._lines):
            self._index += 1
            line = self._lines[self._index - 1].strip()
            if line:
                return self._index, line
        raise MalformedFile(f"unexpected end of file, expected {expected}", self._index)

    def remaining(self) -> List[Tuple[int, str]]:
        rest = [
            (i + 1, line.strip())
            for i, line in enumerate(self._lines[self._index:], start=self._index)
            if line.strip()
        ]
        self._index = len(self._lines)
        return rest


def _integers(line: str, line_no: int) -> List[int]:
    try:
        return [int(token) for token in line.split()]
    except ValueError:
        raise MalformedFile(f"non-integer token in '{line}'", line_no)


def _atom_ids(values: List[int], line_no: int) -> Tuple[AtomId, ...]:
    for value in values:
        if value < 1:
            raise MalformedFile(f"non-positive atom id {value}", line_no)
    return tuple(values)


def _parse_body(tokens: List[int], offset: int, line_no: int) -> Tuple[Tuple[AtomId, ...], Tuple[AtomId, ...]]:
    if len(tokens) < offset + 2:
        raise MalformedFile("missing body counts", line_no)
    n_lits, n_neg = tokens[offset], tokens[offset + 1]
    if n_lits < 0 or n_neg < 0 or n_neg > n_lits:
        raise MalformedFile(f"invalid body counts {n_lits} {n_neg}", line_no)
    literals = tokens[offset + 2:]
    if len(literals) != n_lits:
        raise MalformedFile(f"body declares {n_lits} literals but lists {len(literals)}", line_no)
    return _atom_ids(literals[n_neg:], line_no), _atom_ids(literals[:n_neg], line_no)


def _parse_rule(tokens: List[int], line_no: int) -> _RawRule:
    rule_type = tokens[0]
    if rule_type in UNSUPPORTED_RULE_TYPES:
        raise UnsupportedRuleType(rule_type, line_no)
    if rule_type == BASIC_RULE:
        if len(tokens) < 2:
            raise MalformedFile("basic rule without head", line_no)
        head = _atom_ids([tokens[1]], line_no)
        pos, neg = _parse_body(tokens, 2, line_no)
        return _RawRule(rule_type, head, pos, neg)
    if rule_type == DISJUNCTIVE_RULE:
        if len(tokens) < 2 or tokens[1] < 0 or len(tokens) < 2 + tokens[1]:
            raise MalformedFile("disjunctive rule head count mismatch", line_no)
        n_heads = tokens[1]
        head = _atom_ids(tokens[2:2 + n_heads], line_no)
        pos, neg = _parse_body(tokens, 2 + n_heads, line_no)
        return _RawRule(rule_type, head, pos, neg)
    raise MalformedFile(f"unknown rule type {rule_type}", line_no)


def _read_compute_block(reader: _LineReader, label: str) -> Tuple[AtomId, ...]:
    line_no, line = reader.next(label)
    if line != label:
        raise MalformedFile(f"expected '{label}', found '{line}'", line_no)
    atoms = []
    while True:
        line_no, line = reader.next(f"{label} entry or 0")
        value = _integers(line, line_no)
        if len(value) != 1:
            raise MalformedFile(f"expected one atom id per {label} line", line_no)
        if value[0] == 0:
            return tuple(atoms)
        atoms.extend(_atom_ids(value, line_no))


def _false_markers(raw_rules: List[_RawRule], symbols: Mapping[AtomId, str], compute_neg: Iterable[AtomId]) -> FrozenSet[AtomId]:
    """
    Hidden atoms listed in B- that only ever occur as the single head of
    basic rules; those rules are integrity constraints.
    """
    candidates = {
        r.head[0] for r in raw_rules
        if r.rule_type == BASIC_RULE and r.head[0] not in symbols
    }
    candidates &= set(compute_neg)
    for r in raw_rules:
        candidates -= set(r.pos)
        candidates -= set(r.neg)
        if r.rule_type == DISJUNCTIVE_RULE:
            candidates -= set(r.head)
    return frozenset(candidates)


def parse_smodels(source: Union[bytes, str, IO]) -> Program:
    """
    Parse an smodels intermediate file

    Args:
        source: file contents as bytes/str, or a readable stream

    Returns:
        Program with set-normalized rules and constraints as head = ∅

    Raises:
        UnsupportedRuleType: choice/weight/constraint/minimize rules
        MalformedFile: count mismatches, bad tokens, missing sections
    """
    if hasattr(source, "read"):
        source = source.read()
    if isinstance(source, bytes):
        try:
            source = source.decode("ascii")
        except UnicodeDecodeError:
            raise MalformedFile("file is not ASCII", 0)
    reader = _LineReader(source)

    raw_rules: List[_RawRule] = []
    while True:
        line_no, line = reader.next("rule or 0")
        tokens = _integers(line, line_no)
        if tokens == [0]:
            break
        raw_rules.append(_parse_rule(tokens, line_no))

    symbols: Dict[AtomId, str] = {}
    while True:
        line_no, line = reader.next("symbol entry or 0")
        if line == "0":
            break
        parts = line.split(maxsplit=1)
        if len(parts) != 2:
            raise MalformedFile(f"malformed symbol entry '{line}'", line_no)
        atom = _integers(parts[0], line_no)[0]
        symbols[_atom_ids([atom], line_no)[0]] = parts[1]

    compute_pos = _read_compute_block(reader, "B+")
    compute_neg = _read_compute_block(reader, "B-")

    line_no, line = reader.next("number of models")
    models = _integers(line, line_no)
    if len(models) != 1 or models[0] < 0:
        raise MalformedFile(f"invalid number of models '{line}'", line_no)
    trailing = reader.remaining()
    if trailing:
        raise MalformedFile("unexpected content after number of models", trailing[0][0])

    markers = _false_markers(raw_rules, symbols, compute_neg)
    rules = []
    for r in raw_rules:
        head = () if (r.rule_type == BASIC_RULE and r.head[0] in markers) else r.head
        rules.append(Rule.of(head, r.pos, r.neg))

    return Program(
        rules=tuple(rules),
        symbol_table=symbols,
        compute_pos=compute_pos,
        compute_neg=compute_neg,
        models_to_compute=models[0],
        false_atom=min(markers) if markers else None,
    )


# ==================== smodels writing ====================

def _body_tokens(rule: Rule) -> List[int]:
    neg = sorted(rule.body_neg)
    pos = sorted(rule.body_pos)
    return [len(neg) + len(pos), len(neg), *neg, *pos]


def write_smodels(program: Program) -> bytes:
    """
    Emit a program in smodels intermediate format

    Integrity constraints are re-encoded through the false-marker atom,
    allocating a fresh hidden one (listed in B-) when the program has none.
    """
    false_atom = program.false_atom
    compute_neg = list(program.compute_neg)
    if program.has_constraints and false_atom is None:
        false_atom = program.max_atom_id + 1
        compute_neg.append(false_atom)

    lines: List[str] = []
    for rule in program.rules:
        if rule.is_constraint:
            tokens = [BASIC_RULE, false_atom, *_body_tokens(rule)]
        elif len(rule.head) == 1:
            tokens = [BASIC_RULE, *rule.head, *_body_tokens(rule)]
        else:
            head = sorted(rule.head)
            tokens = [DISJUNCTIVE_RULE, len(head), *head, *_body_tokens(rule)]
        lines.append(" ".join(str(t) for t in tokens))
    lines.append("0")

    for atom in sorted(program.symbol_table):
        lines.append(f"{atom} {program.symbol_table[atom]}")
    lines.append("0")

    lines.append("B+")
    lines.extend(str(a) for a in program.compute_pos)
    lines.append("0")
    lines.append("B-")
    lines.extend(str(a) for a in compute_neg)
    lines.append("0")
    lines.append(str(program.models_to_compute))

    return ("\n".join(lines) + "\n").encode("ascii")


def read_program(path) -> Program:
    """Read a program from a filesystem path"""
    with open(path, "rb") as f:
        return parse_smodels(f)


# ==================== Program algebra ====================

def _image_function(program: Program, permutation) -> Callable[[AtomId], AtomId]:
    """Resolve a permutation (explicit mapping or callable) into an image function on atoms(P)"""
    if isinstance(permutation, Mapping):
        missing = sorted(a for a in program.atoms if a not in permutation)
        if missing:
            raise PermutationDomainError(f"atoms without image: {missing[:10]}")
        images = [permutation[a] for a in program.atoms]
        if len(set(images)) != len(images):
            raise PermutationDomainError("mapping is not injective on the program atoms")
        return permutation.__getitem__
    if callable(permutation):
        return permutation
    raise PermutationDomainError(f"unsupported permutation type {type(permutation).__name__}")


def apply_permutation(program: Program, permutation) -> Program:
    """
    Map every rule of the program elementwise (P^π)

    Args:
        program: source program
        permutation: AtomPermutation or a mapping total on atoms(P)

    Raises:
        PermutationDomainError: some atom of P has no image
    """
    image = _image_function(program, permutation)
    return program.with_rules(rule.mapped(image) for rule in program.rules)


def is_symmetry(program: Program, permutation) -> bool:
    """True iff P^π = P as rule sets"""
    return apply_permutation(program, permutation).rule_set == program.rule_set


# ==================== Errors ====================

class SmodelsFormatError(Exception):
    """Input is not a supported smodels file"""
    def __init__(self, message: str, line_no: int = 0):
        self.line_no = line_no
        super().__init__(f"line {line_no}: {message}" if line_no else message)


class UnsupportedRuleType(SmodelsFormatError):
    """Rule type outside the basic/disjunctive subset"""
    def __init__(self, rule_type: int, line_no: int = 0):
        self.rule_type = rule_type
        kind = UNSUPPORTED_RULE_TYPES.get(rule_type, "unknown")
        super().__init__(f"unsupported rule type {rule_type} ({kind} rule)", line_no)


class MalformedFile(SmodelsFormatError):
    """Structural error in the smodels file"""
    pass


class PermutationDomainError(Exception):
    """Permutation is not total/bijective on the program atoms"""
    pass
