"""
Tests for the program model and the smodels reader/writer
"""
import itertools
import random

import pytest

from preprocessor.benchmarks import allint, pigeon
from preprocessor.program import (
    MalformedFile,
    PermutationDomainError,
    Program,
    Rule,
    UnsupportedRuleType,
    apply_permutation,
    is_symmetry,
    parse_smodels,
    read_program,
    write_smodels,
)
from preprocessor.symmetry import AtomPermutation, detect_symmetries
from tests.conftest import micro_corpus


def smodels(*lines: str) -> bytes:
    return ("\n".join(lines) + "\n").encode("ascii")


class TestRuleAndProgram:
    """Value semantics of rules and programs"""

    def test_rule_sets_ignore_literal_order(self):
        """Test rule sets ignore literal order"""
        assert Rule.of([1], [2, 3], [4]) == Rule.of([1], [3, 2, 3], [4])

    def test_constraint_and_fact_flags(self):
        """Test constraint and fact flags"""
        assert Rule.of([], [1]).is_constraint
        assert Rule.of([1]).is_fact
        assert not Rule.of([1, 2]).is_fact

    def test_duplicate_rules_collapse(self):
        """Test duplicate rules collapse"""
        rule = Rule.of([1], [], [2])
        program = Program(rules=(rule, rule))
        assert len(program.rules) == 1

    def test_max_atom_id_covers_rules(self):
        """Test max atom id covers rules"""
        program = Program(rules=(Rule.of([7], [3]),))
        assert program.max_atom_id == 7
        assert program.atoms == {3, 7}

    def test_render(self, p1, p2):
        """Test the text rendering of P1 and P2"""
        assert p1.render() == "a :- not b.\nb :- not a."
        assert p2.render() == "a ; b.\n:- a, b."

    def test_false_atom_may_not_occur_in_rules(self):
        """Test false atom may not occur in rules"""
        with pytest.raises(ValueError):
            Program(rules=(Rule.of([3]),), false_atom=3)


class TestParse:
    """Reading smodels input"""

    def test_parse_p1(self, data_dir, p1):
        """Test parse P1"""
        program = read_program(data_dir / "p1.sm")
        assert program.rule_set == p1.rule_set
        assert program.symbol_table == {1: "a", 2: "b"}
        assert program.false_atom is None
        assert program.models_to_compute == 1

    def test_parse_p2_turns_false_marker_into_constraint(self, data_dir, p2):
        """Test parse P2 turns false marker into constraint"""
        program = read_program(data_dir / "p2.sm")
        assert program.rule_set == p2.rule_set
        assert program.false_atom == 3
        assert program.compute_neg == (3,)
        assert 3 not in program.atoms

    def test_named_atom_is_not_a_false_marker(self):
        """Test named atom is not a false marker"""
        program = parse_smodels(smodels("1 3 1 0 1", "0", "1 a", "3 x", "0", "B+", "0", "B-", "3", "0", "1"))
        assert Rule.of([3], [1]) in program.rule_set
        assert program.false_atom is None

    def test_marker_used_in_a_body_is_kept(self):
        """Test marker used in a body is kept"""
        program = parse_smodels(smodels("1 3 1 0 1", "1 1 1 0 3", "0", "1 a", "0", "B+", "0", "B-", "3", "0", "1"))
        assert not program.has_constraints
        assert program.false_atom is None

    def test_duplicate_literals_are_normalized(self):
        """Test duplicate literals are normalized"""
        program = parse_smodels(smodels("1 1 2 0 2 2", "1 1 1 0 2", "0", "0", "B+", "0", "B-", "0", "1"))
        assert program.rules == (Rule.of([1], [2]),)

    def test_bytes_str_and_stream_inputs_agree(self, data_dir):
        """Test bytes str and stream inputs agree"""
        raw = (data_dir / "p1.sm").read_bytes()
        with open(data_dir / "p1.sm", "rb") as f:
            from_stream = parse_smodels(f)
        assert parse_smodels(raw) == parse_smodels(raw.decode("ascii")) == from_stream

    @pytest.mark.parametrize("rule_type,kind", [(2, "constraint"), (3, "choice"), (5, "weight"), (6, "minimize")])
    def test_unsupported_rule_types(self, rule_type, kind):
        """Test unsupported rule types"""
        with pytest.raises(UnsupportedRuleType) as excinfo:
            parse_smodels(smodels("1 1 0 0", f"{rule_type} 1 1 0 0", "0", "0", "B+", "0", "B-", "0", "1"))
        assert excinfo.value.rule_type == rule_type
        assert excinfo.value.line_no == 2
        assert kind in str(excinfo.value)

    def test_choice_file(self, data_dir):
        """Test choice file"""
        with pytest.raises(UnsupportedRuleType):
            read_program(data_dir / "choice.sm")

    @pytest.mark.parametrize("text", [
        smodels("1 1 2 0 2", "0", "0", "B+", "0", "B-", "0", "1"),           # count mismatch
        smodels("1 1 1 2 2", "0", "0", "B+", "0", "B-", "0", "1"),           # more negatives than literals
        smodels("1 1 0 0", "0", "0", "B-", "0", "B+", "0", "1"),             # sections swapped
        smodels("1 1 0 0", "0", "0", "B+", "0", "B-", "0"),                  # no model count
        smodels("1 x 0 0", "0", "0", "B+", "0", "B-", "0", "1"),             # bad token
        smodels("1 0 0 0", "0", "0", "B+", "0", "B-", "0", "1"),             # atom id 0
        smodels("4 1 0 0", "0", "0", "B+", "0", "B-", "0", "1"),             # unknown type
        smodels("1 1 0 0", "0", "0", "B+", "0", "B-", "0", "1", "1"),        # trailing data
    ])
    def test_malformed_files(self, text):
        """Test malformed files"""
        with pytest.raises(MalformedFile):
            parse_smodels(text)

    def test_non_ascii_rejected(self):
        """Test non ascii rejected"""
        with pytest.raises(MalformedFile):
            parse_smodels("1 1 0 0\n0\n1 ä\n0\nB+\n0\nB-\n0\n1\n".encode("utf-8"))


class TestWrite:
    """Golden files and round trips"""

    def test_p1_golden(self, data_dir, p1):
        """Test P1 golden"""
        assert write_smodels(p1) == (data_dir / "p1.sm").read_bytes()

    def test_p2_golden(self, data_dir):
        """Test P2 golden"""
        raw = (data_dir / "p2.sm").read_bytes()
        assert write_smodels(parse_smodels(raw)) == raw

    def test_pigeon3_golden(self, data_dir):
        """Test pigeon3 golden"""
        assert write_smodels(pigeon(3)) == (data_dir / "pigeon3.sm").read_bytes()

    def test_allint4_golden(self, data_dir):
        """Test allint(4) output byte for byte, constraints through a fresh marker"""
        assert write_smodels(allint(4)) == (data_dir / "allint4.sm").read_bytes()

    def test_allint4_golden_round_trip(self, data_dir):
        """Test that the allint(4) file reads back as allint(4)"""
        assert read_program(data_dir / "allint4.sm") == allint(4)

    def test_fresh_false_atom_is_hidden_and_listed(self, p2):
        """Test fresh false atom is hidden and listed"""
        text = write_smodels(p2).decode("ascii").splitlines()
        assert "1 3 2 0 1 2" in text
        assert text[text.index("B-") + 1] == "3"
        assert "3" not in [line.split()[0] for line in text[text.index("0") + 1:text.index("B+")] if line != "0"]

    def test_output_is_deterministic(self, p2):
        """Test output is deterministic"""
        assert write_smodels(p2) == write_smodels(p2)

    @pytest.mark.parametrize("name,program", micro_corpus())
    def test_round_trip(self, name, program):
        """Test that reading back written output gives an equal program"""
        written = write_smodels(program)
        parsed = parse_smodels(written)
        assert parsed == program
        assert write_smodels(parsed) == written

    def test_round_trip_with_fresh_marker(self, p2):
        """Test that a marker allocated by the writer does not break equality"""
        parsed = parse_smodels(write_smodels(p2))
        assert p2.false_atom is None
        assert (parsed.false_atom, parsed.compute_neg, parsed.max_atom_id) == (3, (3,), 3)
        assert parsed == p2

    def test_parsed_file_equals_in_memory_program(self, data_dir, p2):
        """Test that p2.sm and the hand-built P2 are the same program"""
        assert read_program(data_dir / "p2.sm") == p2

    def test_equality_still_sees_compute_sections(self, p2):
        """Test that non-marker compute entries keep programs apart"""
        other = Program(rules=p2.rules, symbol_table=p2.symbol_table, compute_neg=(1,))
        assert other != p2
        assert Program(rules=p2.rules[:1], symbol_table=p2.symbol_table) != p2


class TestPermutations:
    """Applying permutations and the symmetry check"""

    def test_swap_is_symmetry_of_p1_and_p2(self, p1, p2):
        """Test swap is symmetry of P1 and P2"""
        swap = {1: 2, 2: 1}
        assert apply_permutation(p1, swap).rule_set == p1.rule_set
        assert is_symmetry(p1, swap)
        assert is_symmetry(p2, swap)

    def test_identity_is_symmetry(self, p1):
        """Test identity is symmetry"""
        assert is_symmetry(p1, {1: 1, 2: 2})

    def test_non_symmetry(self):
        """Test non symmetry"""
        program = Program(rules=(Rule.of([1], [2]),))
        assert not is_symmetry(program, {1: 2, 2: 1})

    def test_partial_mapping_rejected(self, p1):
        """Test partial mapping rejected"""
        with pytest.raises(PermutationDomainError):
            apply_permutation(p1, {1: 2})

    def test_non_injective_mapping_rejected(self, p1):
        """Test non injective mapping rejected"""
        with pytest.raises(PermutationDomainError):
            apply_permutation(p1, {1: 2, 2: 2})

    def test_metadata_survives(self, data_dir):
        """Test metadata survives"""
        program = read_program(data_dir / "p2.sm")
        mapped = apply_permutation(program, {1: 2, 2: 1})
        assert mapped.false_atom == program.false_atom
        assert mapped.compute_neg == program.compute_neg

    @pytest.mark.parametrize("name,program", micro_corpus())
    def test_composition_law(self, name, program):
        """Test that mapping by pi then sigma equals mapping by sigma after pi"""
        rng = random.Random(name)
        atoms = program.sorted_atoms
        pi = AtomPermutation(dict(zip(atoms, rng.sample(atoms, len(atoms)))))
        sigma = AtomPermutation(dict(zip(atoms, rng.sample(atoms, len(atoms)))))
        twice = apply_permutation(apply_permutation(program, pi), sigma)
        assert twice == apply_permutation(program, sigma.compose(pi))

    @pytest.mark.parametrize("name,program", micro_corpus())
    def test_symmetries_form_a_group(self, name, program):
        """Test that products and inverses of detected symmetries are symmetries"""
        gens = list(detect_symmetries(program).generators)
        for pi in gens:
            assert is_symmetry(program, pi.inverse())
        for pi, sigma in itertools.product(gens, repeat=2):
            assert is_symmetry(program, sigma.compose(pi))
            assert is_symmetry(program, sigma.compose(pi.inverse()))
