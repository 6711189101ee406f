"""
Pytest Configuration and Fixtures
"""
import os
import sys
import pytest
from pathlib import Path

# Add parent directory to path
sys.path.insert(0, str(Path(__file__).parent.parent))

# Keep test output quiet and guards at their defaults
os.environ.setdefault("LOG_LEVEL", "WARNING")

DATA_DIR = Path(__file__).parent / "data"

# surviving answer sets of allint(n) per generating pair and k (None = whole index)
ALLINT5_SURVIVORS = {
    frozenset({"reversal", "reflection"}): {1: 7, 2: 5, None: 4},
    frozenset({"reversal", "both"}): {1: 7, 2: 5, None: 2},
    frozenset({"reflection", "both"}): {1: 7, 2: 5, None: 2},
}
ALLINT4_SURVIVORS = {
    frozenset({"reversal", "reflection"}): {1: 3, 2: 2, None: 2},
    frozenset({"reversal", "both"}): {1: 3, 2: 2, None: 1},
    frozenset({"reflection", "both"}): {1: 3, 2: 2, None: 1},
}


def make_p1():
    """a ← not b.  b ← not a.  (a = 1, b = 2)"""
    from preprocessor.program import Program, Rule
    return Program(
        rules=(Rule.of([1], [], [2]), Rule.of([2], [], [1])),
        symbol_table={1: "a", 2: "b"},
    )


def make_p2():
    """a ; b.  ← a, b."""
    from preprocessor.program import Program, Rule
    return Program(
        rules=(Rule.of([1, 2]), Rule.of([], [1, 2])),
        symbol_table={1: "a", 2: "b"},
    )


def micro_corpus():
    """(name, program) pairs small enough for the answer-set oracle"""
    from preprocessor.benchmarks import allint, pigeon, random_program

    corpus = [("P1", make_p1()), ("P2", make_p2())]
    corpus += [(f"pigeon{n}", pigeon(n)) for n in (2, 3, 4)]
    corpus += [(f"allint{n}", allint(n)) for n in (4, 5)]
    corpus += [(f"random{seed}", random_program(seed, symmetric=seed % 2 == 0)) for seed in range(10)]
    return corpus


def allint_symmetries(n):
    """Reversal, reflection and their product on allint(n) atoms, by name"""
    from preprocessor.symmetry import AtomPermutation

    def v(i, j):
        return (i - 1) * n + j + 1

    def d(i, l):
        return n * n + (i - 1) * (n - 1) + l

    def build(reverse, reflect):
        mapping = {}
        for i in range(1, n + 1):
            for j in range(n):
                mapping[v(i, j)] = v(n + 1 - i if reverse else i, n - 1 - j if reflect else j)
        for i in range(1, n):
            for l in range(1, n):
                mapping[d(i, l)] = d(n - i if reverse else i, l)
        return AtomPermutation(mapping)

    return {"reversal": build(True, False), "reflection": build(False, True), "both": build(True, True)}


def generator_names(n, gens):
    """Names of allint(n) generators as keys of the survivor tables"""
    names = {perm: name for name, perm in allint_symmetries(n).items()}
    return frozenset(names[g] for g in gens)


@pytest.fixture
def data_dir():
    """Golden smodels files"""
    return DATA_DIR


@pytest.fixture
def p1():
    return make_p1()


@pytest.fixture
def p2():
    return make_p2()


@pytest.fixture(scope="session")
def corpus():
    return micro_corpus()


@pytest.fixture(scope="session")
def small_corpus():
    """Micro corpus programs with at most 8 atoms"""
    return [(name, prog) for name, prog in micro_corpus() if len(prog.atoms) <= 8]
