"""
Benchmark Program Generators
Pigeon-hole, all-interval series and seeded random programs
"""
import random
from itertools import combinations
from typing import Dict, List

from .program import AtomId, Program, Rule


def pigeon(n: int) -> Program:
    """
    n pigeons into n-1 holes

    Atoms p(i,j), i in 1..n, j in 1..n-1, numbered row-major from 1.
    """
    if n < 2:
        raise ValueError("pigeon needs n >= 2")
    holes = n - 1

    def p(i: int, j: int) -> AtomId:
        return (i - 1) * holes + j

    rules: List[Rule] = []
    for i in range(1, n + 1):
        rules.append(Rule.of([p(i, j) for j in range(1, holes + 1)]))
    for j in range(1, holes + 1):
        for i, k in combinations(range(1, n + 1), 2):
            rules.append(Rule.of((), [p(i, j), p(k, j)]))

    symbols = {p(i, j): f"p({i},{j})" for i in range(1, n + 1) for j in range(1, holes + 1)}
    return Program(rules=tuple(rules), symbol_table=symbols)


def allint(n: int) -> Program:
    """
    All-interval series of length n

    v(i,j): variable i takes value j (i in 1..n, j in 0..n-1), row-major;
    d(i,l): distance between positions i and i+1 is l (i, l in 1..n-1), after.
    """
    if n < 3:
        raise ValueError("allint needs n >= 3")

    def v(i: int, j: int) -> AtomId:
        return (i - 1) * n + j + 1

    def d(i: int, l: int) -> AtomId:
        return n * n + (i - 1) * (n - 1) + l

    positions = range(1, n + 1)
    values = range(n)
    gaps = range(1, n)
    distances = range(1, n)

    rules: List[Rule] = []
    for i in positions:
        rules.append(Rule.of([v(i, j) for j in values]))
    for i in positions:
        for j, k in combinations(values, 2):
            rules.append(Rule.of((), [v(i, j), v(i, k)]))
    for j in values:
        for i, k in combinations(positions, 2):
            rules.append(Rule.of((), [v(i, j), v(k, j)]))
    for i in gaps:
        for j in values:
            for k in values:
                if j != k:
                    rules.append(Rule.of([d(i, abs(j - k))], [v(i, j), v(i + 1, k)]))
    for i in gaps:
        for l, m in combinations(distances, 2):
            rules.append(Rule.of((), [d(i, l), d(i, m)]))
    for l in distances:
        for i, k in combinations(gaps, 2):
            rules.append(Rule.of((), [d(i, l), d(k, l)]))

    symbols: Dict[AtomId, str] = {v(i, j): f"v({i},{j})" for i in positions for j in values}
    symbols.update({d(i, l): f"d({i},{l})" for i in gaps for l in distances})
    return Program(rules=tuple(rules), symbol_table=symbols)


def random_program(seed: int, max_atoms: int = 8, max_rules: int = 12, symmetric: bool = False) -> Program:
    """
    Seeded random disjunctive program for oracle cross-checks

    With symmetric=True a random involution on the atoms is drawn and the
    rule set is closed under it, so the program has at least that symmetry.
    """
    rng = random.Random(seed)
    atom_count = rng.randint(2, max_atoms)
    atoms = list(range(1, atom_count + 1))
    base_rules = max_rules // 2 if symmetric else max_rules

    rules: List[Rule] = []
    for _ in range(rng.randint(1, base_rules)):
        head = rng.sample(atoms, rng.choice([0, 1, 1, 1, 2]))
        pos = rng.sample(atoms, rng.randint(0, 2))
        neg = rng.sample(atoms, rng.randint(0, 1 if head else 2))
        if not head and not pos and not neg:
            neg = [rng.choice(atoms)]
        rules.append(Rule.of(head, pos, neg))

    if symmetric:
        shuffled = atoms[:]
        rng.shuffle(shuffled)
        swap = {a: a for a in atoms}
        for a, b in zip(shuffled[0::2], shuffled[1::2]):
            if rng.random() < 0.7:
                swap[a], swap[b] = b, a
        rules += [rule.mapped(swap.__getitem__) for rule in rules]

    return Program(rules=tuple(rules), symbol_table={a: f"a{a}" for a in atoms})
