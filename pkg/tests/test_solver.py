from __future__ import annotations

import os
import random
import subprocess
import sys

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from deontasp.asp import solver
from deontasp.asp.parser import parse, parse_literal
from deontasp.asp.solver import (
    CostVector,
    cost,
    enumerate_answer_sets,
    is_answer_set,
    is_answer_set_gl,
    optimal_answer_sets,
    satisfies,
    solve,
)
from deontasp.asp.syntax import Program
from deontasp.corpus import load_entries
from deontasp.deontic import common_core, core_rules
from deontasp.errors import BaseTooLarge

from oracles import oracle_answer_sets, oracle_cost, oracle_optimal, random_ground_program


def lits(text: str) -> frozenset:
    return frozenset(parse_literal(t.strip()) for t in text.split(";") if t.strip())


def rule(text: str):
    return parse(text).rules[0]


# Answer sets of the nine core rules with one action, written out by hand.
CORE_SETS = {
    lits("act(a); O(a); -F(a); Do(a); Happens(a)"),
    lits("act(a); -O(a); F(a); -Do(a); -Dia(a)"),
    lits("act(a); -O(a); -F(a); Do(a); Happens(a)"),
    lits("act(a); -O(a); -F(a); -Do(a); -Dia(a)"),
}


# -- satisfaction -------------------------------------------------------------


def test_satisfies_body_holds_head_missing():
    assert not satisfies(lits("act(a)"), rule("O(a) v -O(a) :- act(a)."))


def test_satisfies_violated_constraint():
    assert not satisfies(lits("O(a); F(a)"), rule(":- O(a), F(a)."))


def test_satisfies_vacuous_body():
    assert satisfies(lits("O(a); Do(a); act(a)"), rule(":- F(a), Do(a)."))


def test_satisfies_default_negation():
    assert satisfies(lits("b"), rule("a :- not b."))
    assert not satisfies(lits(""), rule("a :- not b."))


# -- answer sets ------------------------------------------------------------------


def core_with(action: str = "a") -> Program:
    return core_rules() + parse(f"act({action}).")


def test_is_answer_set_on_a_core_answer_set():
    assert is_answer_set(lits("act(a); O(a); -F(a); Do(a); Happens(a)"), core_with())


def test_is_answer_set_rejects_obligatory_and_forbidden():
    assert not is_answer_set(lits("act(a); O(a); F(a); Do(a); Happens(a)"), core_with())
    assert not is_answer_set(lits("act(a); O(a); F(a); -Do(a); -Dia(a)"), core_with())


def test_is_answer_set_rejects_non_minimal_and_inconsistent():
    p = parse("a v b.")
    assert is_answer_set(lits("a"), p)
    assert not is_answer_set(lits("a; b"), p)
    assert not is_answer_set(lits("a; -a"), parse("a. -a v c."))


def test_core_rules_enumerate_exactly_four_sets():
    assert set(enumerate_answer_sets(core_with())) == CORE_SETS


def test_empty_program_has_the_empty_answer_set():
    assert enumerate_answer_sets(Program()) == [frozenset()]


def test_inconsistent_program_has_none():
    assert enumerate_answer_sets(parse("a. -a.")) == []
    assert enumerate_answer_sets(parse("a :- not a.")) == []


def test_enumeration_order_is_lexicographic():
    sets = enumerate_answer_sets(parse("a v b v c."))
    assert [sorted(map(str, s)) for s in sets] == [["a"], ["b"], ["c"]]


def test_limit_truncates():
    assert len(enumerate_answer_sets(parse("a v b v c."), limit=2)) == 2


def test_enumeration_cap():
    text = " ".join(f"p{i} v q{i}." for i in range(12))
    with pytest.raises(BaseTooLarge):
        solve(parse(text), optimal=False, cap=100)


def test_ross_family_matches_the_subset_oracle():
    (ross,) = load_entries("ross")
    program = core_rules() + ross.program + ross.facts
    got = set(enumerate_answer_sets(program))
    from deontasp.asp.grounder import ground

    assert got == oracle_answer_sets(Program(ground(program).rules))


def test_subset_definition_agrees_with_gelfond_lifschitz_on_the_corpus():
    for entry in load_entries():
        program = entry.full_program()
        for a in solve(program, optimal=False, limit=64):
            assert is_answer_set(a.literals, program), entry.name
            assert is_answer_set_gl(a.literals, program), entry.name


# -- costs and optimality ------------------------------------------------------------


def test_cost_of_unviolated_constraint_is_zero():
    assert cost(lits("O(mail)"), parse("O(mail). :~ -O(mail). [1:2]")) == CostVector()


def test_core_weak_constraint_cost():
    s = lits("act(a); O(a); -F(a); Do(a); Happens(a)")
    assert cost(s, common_core() + parse("act(a).")).as_dict() == {1: 1}


def test_cost_vector_ordering_is_lexicographic_from_the_top():
    assert CostVector.from_dict({2: 1}) < CostVector.from_dict({3: 1})
    assert CostVector.from_dict({3: 1}) < CostVector.from_dict({3: 1, 1: 5})
    assert CostVector.from_dict({1: 9}) < CostVector.from_dict({2: 1})
    assert CostVector.from_dict({2: 1, 1: 0}) == CostVector.from_dict({2: 1})


def test_core_weak_constraints_leave_two_sets():
    optimal = {s for s, _ in optimal_answer_sets(common_core() + parse("act(a)."))}
    assert optimal == {
        lits("act(a); -O(a); -F(a); Do(a); Happens(a)"),
        lits("act(a); -O(a); -F(a); -Do(a); -Dia(a)"),
    }


def test_no_weak_constraints_means_every_answer_set_is_optimal():
    assert {a.literals for a in solve(core_with())} == CORE_SETS


def test_weight_zero_never_matters():
    base = "a v b."
    assert {a.literals for a in solve(parse(base + ":~ a. [0:5]"))} == {lits("a"), lits("b")}


def test_conflicting_weighted_obligations():
    # o3 weighs as much as o1 and o2 together, so either side may win.
    text = """
    act(o1). act(o2). act(o3).
    :~ -O(o3). [3:2]
    :~ -O(o2). [2:2]
    :~ -O(o1). [1:2]
    :- Do(o3), Do(o1).
    :- Do(o3), Do(o2).
    """
    sets = solve(core_rules() + parse(text))
    obligations = {frozenset(str(l) for l in a if l.predicate == "O" and not l.negated) for a in sets}
    assert obligations == {frozenset({"O(o3)"}), frozenset({"O(o1)", "O(o2)"})}


def test_driving_example_two_costs_match_manual_sum():
    (entry,) = load_entries("driving_ex2")
    program = entry.full_program()
    from deontasp.asp.grounder import ground

    g = ground(program)
    for a in solve(program):
        manual: dict[int, int] = {}
        for w in g.weak:
            if all(l in a.literals for l in w.pos) and not any(l in a.literals for l in w.neg):
                manual[w.level] = manual.get(w.level, 0) + w.weight
        assert a.cost.as_dict() == {k: v for k, v in manual.items() if v}


# -- properties against the brute-force oracle ------------------------------------------


@settings(max_examples=150)
@given(st.integers(0, 2**32 - 1))
def test_answer_sets_match_oracle(seed):
    p = random_ground_program(random.Random(seed), max_atoms=5, with_weak=False, max_rules=10)
    assert set(enumerate_answer_sets(p)) == oracle_answer_sets(p)


@settings(max_examples=150)
@given(st.integers(0, 2**32 - 1))
def test_optimal_answer_sets_match_oracle(seed):
    p = random_ground_program(random.Random(seed), max_atoms=5, max_rules=10)
    got = {a.literals: a.cost.as_dict() for a in solve(p)}
    want = oracle_optimal(p)
    assert set(got) == want
    for s in want:
        assert got[s] == oracle_cost(s, p)


@settings(max_examples=100)
@given(st.integers(0, 2**32 - 1))
def test_answer_sets_are_consistent_and_minimal(seed):
    p = random_ground_program(random.Random(seed), max_atoms=5, with_weak=False, max_rules=10)
    for s in enumerate_answer_sets(p):
        assert not any(l.complement() in s for l in s)
        assert is_answer_set(s, p)


@settings(max_examples=100)
@given(st.integers(0, 2**32 - 1))
def test_adding_a_weak_constraint_keeps_the_answer_sets(seed):
    rng = random.Random(seed)
    p = random_ground_program(rng, max_atoms=5, with_weak=False, max_rules=10)
    q = random_ground_program(rng, max_atoms=5, max_rules=0)
    extended = Program(p.rules, q.weak)
    assert enumerate_answer_sets(extended) == enumerate_answer_sets(p)


def test_results_are_deterministic():
    entry = load_entries("fence_sea_nofence")[0]
    first = [str(a) for a in solve(entry.full_program())]
    solver._CACHE.data.clear()
    assert [str(a) for a in solve(entry.full_program())] == first


def test_pure_and_compiled_kernels_agree():
    from deontasp.asp import _search

    if solver.BACKEND != "cython":
        pytest.skip("compiled kernel not built")
    from deontasp.asp import _csearch

    rng = random.Random(3)
    for _ in range(200):
        g = random_ground_program(rng, max_atoms=6, max_rules=12)
        res = solver._simplify(g)
        if res.inconsistent:
            continue
        for optimal in (True, False):
            prob, _, _ = solver.build_problem(res, optimal, 0, 2**20)
            a = _search.search(prob)
            b = _csearch.search(prob)
            assert (a[0], sorted(map(sorted, a[1]))) == (b[0], sorted(map(sorted, b[1])))


def test_environment_switch_selects_the_pure_kernel():
    code = "from deontasp.asp import solver; print(solver.BACKEND)"
    env = dict(os.environ, DEONTASP_PURE="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"
    # Same answers either way.
    prog = "a v b. c :- a, not d. d :- b. :~ c. [1:1]"
    code = f"from deontasp.asp.parser import parse; from deontasp.asp.solver import solve; print([str(a) for a in solve(parse({prog!r}))])"
    pure = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    default = subprocess.run([sys.executable, "-c", code], capture_output=True, text=True, check=True)
    assert pure.stdout == default.stdout
