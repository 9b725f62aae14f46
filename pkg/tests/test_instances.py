import numpy as np
import pytest
import scipy.stats
from fractions import Fraction

from qaoasat.errors import DimacsError, ResourceLimitError
from qaoasat.instances import (
    Literal,
    SatInstance,
    brute_force_min_violations,
    generate_instance,
    parse_dimacs,
    write_dimacs,
)

from oracles import enumerate_min_violations, two_sat_satisfiable


def single_clause(*lits: int, n: int) -> SatInstance:
    clause = tuple(Literal.from_int(l) for l in lits)
    return SatInstance(n=n, k=len(clause), clauses=(clause,))


def test_generate_basic_contract():
    inst = generate_instance(6, 12, 3, seed=7)
    assert inst.m == 12
    assert inst.density() == 2.0
    for clause in inst.clauses:
        assert len(clause) == 3
        assert len({lit.var for lit in clause}) == 3
        assert all(1 <= lit.var <= 6 for lit in clause)


def test_generate_empty_instance():
    inst = generate_instance(6, 0, 2, seed=1)
    assert inst.m == 0
    assert inst.density() == 0
    assert brute_force_min_violations(inst)[0] == 0


def test_generate_full_width_clause_excludes_one_assignment():
    inst = generate_instance(3, 1, 3, seed=42)
    best, minimizers = brute_force_min_violations(inst)
    assert best == 0
    assert len(minimizers) == 7  # a 3-clause on 3 variables rules out exactly one of 8


@pytest.mark.parametrize("n,m,expected", [(6, 6, Fraction(1)), (6, 27, Fraction(9, 2)), (10, 1, Fraction(1, 10))])
def test_density_exact(n, m, expected):
    inst = generate_instance(n, m, 2, seed=0)
    assert inst.density() == expected
    assert float(inst.density()) == float(expected)


def test_generate_is_deterministic():
    a = generate_instance(8, 20, 3, seed=99)
    b = generate_instance(8, 20, 3, seed=99)
    assert a == b
    assert write_dimacs(a) == write_dimacs(b)
    assert generate_instance(8, 20, 3, seed=100) != a


def test_generate_rejects_bad_arguments():
    with pytest.raises(ValueError):
        generate_instance(2, 1, 3, seed=0)  # k > n
    with pytest.raises(ValueError):
        generate_instance(0, 1, 1, seed=0)
    with pytest.raises(ValueError):
        generate_instance(4, -1, 2, seed=0)


def test_unique_clauses_mode():
    inst = generate_instance(4, 20, 2, seed=5, unique_clauses=True)
    canonical = {tuple(sorted(c, key=lambda l: l.var)) for c in inst.clauses}
    assert len(canonical) == 20
    with pytest.raises(ValueError):
        generate_instance(3, 100, 2, seed=5, unique_clauses=True)


def test_polarity_is_fair_coin():
    inst = generate_instance(12, 4000, 3, seed=2024)
    negs = sum(lit.negated for clause in inst.clauses for lit in clause)
    total = 3 * inst.m
    result = scipy.stats.chisquare([negs, total - negs])
    assert result.pvalue > 0.001


def test_variables_within_clause_are_distinct_across_seeds():
    for seed in range(30):
        inst = generate_instance(7, 15, 3, seed=seed)
        for clause in inst.clauses:
            assert len({lit.var for lit in clause}) == 3


def test_brute_force_single_positive_clause():
    inst = single_clause(1, 2, n=2)
    best, minimizers = brute_force_min_violations(inst)
    assert best == 0
    assert sorted(minimizers) == [1, 2, 3]  # only 00 violates (x1 or x2)


def test_brute_force_contradictory_units():
    inst = SatInstance(n=1, k=1, clauses=((Literal(1, False),), (Literal(1, True),)))
    best, minimizers = brute_force_min_violations(inst)
    assert best == 1
    assert sorted(minimizers) == [0, 1]


def test_brute_force_frozen_instance():
    # Enumerated independently, literal by literal, over all 64 assignments.
    inst = generate_instance(6, 30, 3, seed=123)
    best, minimizers = brute_force_min_violations(inst)
    assert best == 1
    assert sorted(minimizers) == [32, 33, 49, 53]


def test_brute_force_matches_enumeration_oracle():
    for seed in range(10):
        inst = generate_instance(5, 10, 3, seed=seed)
        expected_best, expected_args = enumerate_min_violations(inst)
        best, args = brute_force_min_violations(inst)
        assert best == expected_best
        assert sorted(args) == expected_args


def test_brute_force_agrees_with_two_sat_implication_graph():
    rng = np.random.default_rng(7)
    for _ in range(60):
        n = int(rng.integers(4, 11))
        alpha = float(rng.uniform(0.3, 2.0))
        inst = generate_instance(n, max(1, round(alpha * n)), 2, seed=int(rng.integers(2**32)))
        assert (brute_force_min_violations(inst)[0] == 0) == two_sat_satisfiable(inst)


def test_brute_force_enumeration_bound():
    inst = generate_instance(12, 5, 2, seed=0)
    with pytest.raises(ResourceLimitError):
        brute_force_min_violations(inst, max_n=10)


def test_write_dimacs_exact_format():
    inst = single_clause(1, -2, n=2)
    assert write_dimacs(inst) == "p cnf 2 1\n1 -2 0\n"


def test_parse_dimacs_literals():
    inst = parse_dimacs("p cnf 2 1\n1 -2 0\n")
    assert inst.n == 2
    assert inst.k == 2
    assert inst.clauses == ((Literal(1, False), Literal(2, True)),)
    assert inst.seed is None


def test_parse_skips_comments_and_blank_lines():
    text = "c generated for a test\n\np cnf 3 2\nc body comment\n1 2 0\n-1 3 0\n"
    inst = parse_dimacs(text)
    assert inst.m == 2


def test_round_trip_identity():
    inst = generate_instance(6, 12, 3, seed=7)
    assert parse_dimacs(write_dimacs(inst)) == inst
    text = "p cnf 4 2\n1 -3 0\n-2 4 0\n"
    assert write_dimacs(parse_dimacs(text)) == text


def test_round_trip_random_instances():
    for seed in range(20):
        inst = generate_instance(9, 18, 2, seed=seed)
        again = parse_dimacs(write_dimacs(inst))
        assert again == inst
        assert write_dimacs(again) == write_dimacs(inst)


@pytest.mark.parametrize(
    "text,line",
    [
        ("p cnf x 1\n1 2 0\n", 1),
        ("p dnf 2 1\n1 2 0\n", 1),
        ("p cnf 2 1\n1 3 0\n", 2),
        ("p cnf 3 2\n1 2 0\n1 2 3 0\n", 3),
        ("p cnf 2 1\n1 2\n", 2),
        ("p cnf 2 1\n1 -1 0\n", 2),
        ("1 2 0\n", 1),
    ],
)
def test_parse_errors_carry_line_numbers(text, line):
    with pytest.raises(DimacsError) as err:
        parse_dimacs(text)
    assert err.value.line == line


def test_parse_errors_without_line():
    with pytest.raises(DimacsError):
        parse_dimacs("")
    with pytest.raises(DimacsError):
        parse_dimacs("p cnf 2 2\n1 2 0\n")  # fewer clauses than declared


def test_instance_invariants_enforced():
    with pytest.raises(ValueError):
        SatInstance(n=2, k=2, clauses=((Literal(1, False), Literal(1, True)),))
    with pytest.raises(ValueError):
        SatInstance(n=2, k=2, clauses=((Literal(1, False), Literal(3, False)),))
    with pytest.raises(ValueError):
        SatInstance(n=0, k=2, clauses=())


def test_seed_not_part_of_equality():
    a = generate_instance(5, 8, 2, seed=3)
    b = SatInstance(n=a.n, k=a.k, clauses=a.clauses, seed=None)
    assert a == b
