import random

import pytest

from kara import (
    Atom,
    DisjunctiveHeadError,
    Interpretation,
    SymConst,
    brute_force_answer_sets,
    ground,
    is_answer_set,
    parse_interpretation,
    parse_program,
    reduct,
    solve,
    stratify,
)
from randprog import random_ground_program, random_nonground_program


def interp(text):
    return parse_interpretation(text, fmt="clasp-line")


# ---------------------------------------------------------------------------
# reduct


def test_reduct_is_identity_without_negation():
    program = ground(parse_program("a. b :- a."))
    assert reduct(program, interp("a b")) == program


def test_reduct_drops_blocked_rules():
    program = ground(parse_program("a :- not b."))
    assert len(reduct(program, interp("b"))) == 0


def test_reduct_strips_naf():
    program = ground(parse_program("a :- not b. b :- not a."))
    red = reduct(program, interp("a"))
    assert len(red) == 1
    rule = red.rules[0]
    assert rule.heads[0] == Atom("a") and not rule.naf_body


# ---------------------------------------------------------------------------
# is_answer_set


def test_fact_is_answer_set():
    program = ground(parse_program("a."))
    assert is_answer_set(program, interp("a"))
    assert not is_answer_set(program, Interpretation())


def test_even_loop_answer_sets():
    program = ground(parse_program("a :- not b. b :- not a."))
    assert is_answer_set(program, interp("a"))
    assert is_answer_set(program, interp("b"))
    assert not is_answer_set(program, interp("a b"))
    assert not is_answer_set(program, Interpretation())


def test_violated_constraint_rejects():
    program = ground(parse_program("a. :- a."))
    assert not is_answer_set(program, interp("a"))


def test_disjunctive_head_raises():
    program = parse_program("a | b.")
    with pytest.raises(DisjunctiveHeadError):
        is_answer_set(program, interp("a"))
    with pytest.raises(DisjunctiveHeadError):
        solve(program)


# ---------------------------------------------------------------------------
# stratify


def test_positive_program_is_single_stratum():
    program = parse_program("visrect(f(X,Y),20,8) :- book(X,Y).")
    result = stratify(program)
    assert result.is_stratified
    assert len(result.strata) == 1


def test_naf_introduces_second_stratum():
    program = parse_program(
        """
        fillempty(R,C) :- empty(C,R), not entrance(C,R), not exit(C,R).
        fillwall(R,C) :- wall(C,R), not entrance(C,R), not exit(C,R).
        fillentrance(R,C) :- entrance(C,R).
        """
    )
    result = stratify(program)
    assert result.is_stratified
    assert len(result.strata) == 2
    assert result.stratum_of(("fillempty", 2, False)) == 1
    assert result.stratum_of(("fillentrance", 2, False)) == 0


def test_negative_cycle_reported():
    result = stratify(parse_program("p :- not p."))
    assert not result.is_stratified
    assert result.negative_cycles == ((("p", 0, False),),)


def test_shelves_program_is_a_single_stratum(shelves):
    program, _ = shelves
    result = stratify(program)
    assert result.is_stratified
    assert len(result.strata) == 1


def test_maze_program_has_two_strata(maze):
    program, _ = maze
    result = stratify(program)
    assert result.is_stratified
    assert len(result.strata) == 2
    assert result.stratum_of(("visfillgrid", 4, False)) == 1
    assert result.stratum_of(("visgrid", 5, False)) == 0


def test_ignored_guess_predicates_restore_stratification():
    program = parse_program("a :- not b. b :- not a. c :- a.")
    assert not stratify(program).is_stratified
    assert stratify(program, ignore_predicates=[("a", 0), ("b", 0)]).is_stratified


# ---------------------------------------------------------------------------
# solve


def test_empty_program_has_empty_answer_set():
    assert solve(parse_program("")) == [Interpretation()]


def test_stratified_program_has_unique_model():
    models = solve(parse_program("b :- a. c :- not d."), interp("a"))
    assert models == [interp("a b c")]


def test_even_loop_enumeration_is_deterministic():
    program = parse_program("a :- not b. b :- not a.")
    models = solve(program)
    assert models == [interp("b"), interp("a")]
    assert solve(program, limit=1) == [interp("b")]


def test_guess_pair_with_constraint():
    program = parse_program(
        """
        a(X) :- not -a(X), d(X).
        -a(X) :- not a(X), d(X).
        d(c).
        :- a(c).
        """
    )
    models = solve(program)
    assert len(models) == 1
    assert Atom("a", (SymConst("c"),), strong_neg=True) in models[0]


def test_unsatisfiable_program_returns_empty_list():
    assert solve(parse_program(":- not a.")) == []


def test_odd_loop_has_no_model():
    assert solve(parse_program("p :- not p.")) == []


def test_constraint_prunes_one_branch():
    program = parse_program("a :- not b. b :- not a. :- b.")
    assert solve(program) == [interp("a")]


def test_solve_agrees_with_brute_force_on_random_programs():
    rng = random.Random(20260810)
    for _ in range(60):
        program = random_ground_program(rng, max_atoms=8)
        expected = {frozenset(m.literals) for m in brute_force_answer_sets(program)}
        got = solve(program)
        assert {frozenset(m.literals) for m in got} == expected, str(program)
        assert len(got) == len(expected)


def test_solve_models_are_consistent_interpretations():
    rng = random.Random(7)
    for _ in range(20):
        program = random_ground_program(rng, max_atoms=6)
        for model in solve(program):
            assert isinstance(model, Interpretation)


def test_solve_agrees_with_brute_force_on_nonground_programs():
    from kara import Interpretation, ground

    rng = random.Random(31337)
    for _ in range(24):
        program, facts = random_nonground_program(rng)
        interpretation = Interpretation(set(facts))
        grounded = ground(program, interpretation)
        expected = {m.literals for m in brute_force_answer_sets(grounded)}
        got = {m.literals for m in solve(program, interpretation)}
        assert got == expected, str(program)


def test_prefer_reorders_but_preserves_the_model_set():
    program = parse_program("a :- not b. b :- not a.")
    assert solve(program, prefer=interp("a")) == [interp("a"), interp("b")]
    assert solve(program, prefer=interp("b")) == [interp("b"), interp("a")]
    assert solve(program, limit=1, prefer=interp("a")) == [interp("a")]
    rng = random.Random(99)
    for _ in range(25):
        random_program = random_ground_program(rng, max_atoms=7)
        plain = {m.literals for m in solve(random_program)}
        preferred = {m.literals for m in solve(random_program, prefer=interp("p0 p1"))}
        assert plain == preferred
