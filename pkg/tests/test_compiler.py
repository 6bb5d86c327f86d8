from __future__ import annotations

import random
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from deontasp.asp.parser import parse, parse_body, parse_literal, print_program
from deontasp.asp.solver import solve
from deontasp.compiler import (
    NormativeSystem,
    NormSpec,
    assign_levels,
    compile_norm,
    compile_system,
    lint,
    load_norm_spec,
    norm_levels,
    parse_norm_spec,
)
from deontasp.corpus import golden_path, spec_paths
from deontasp.corpus.runner import corpus_path
from deontasp.deontic import DeonticVerdict, core_rules
from deontasp.errors import CyclicPreferences, MalformedSpec, SchemaError, VocabularyCollision

L = parse_literal


def weak_lines(spec: NormSpec, level: int, weight: int = 1, violated: NormSpec | None = None) -> list[str]:
    return print_program(compile_norm(spec, level, weight, violated)).splitlines()


# -- one shape per kind ---------------------------------------------------------------


def test_regular_obligation():
    assert weak_lines(NormSpec("n", "regular", ("meet",)), 2) == [":~ -O(meet). [1:2]"]


def test_conditional_obligation():
    spec = NormSpec("n", "conditional", ("help",), condition=parse_body("Happens(emergency)"))
    assert weak_lines(spec, 3) == [":~ -O(help), Happens(emergency). [1:3]"]


def test_disjunctive_obligation_with_condition():
    spec = NormSpec("n", "disjunction", ("equip_allseason", "equip_winter"), condition=parse_body("winter"))
    assert weak_lines(spec, 2) == [":~ -O(equip_allseason), -O(equip_winter), winter. [1:2]"]


def test_conjunctive_obligation_gets_an_auxiliary_rule():
    spec = NormSpec("O6", "conjunction", ("carry_license", "carry_registration"), exception=L("theft"))
    assert weak_lines(spec, 2) == [
        "aux_conj_o6 :- O(carry_license), O(carry_registration).",
        ":~ not aux_conj_o6, not theft. [1:2]",
    ]


def test_exception_prohibition():
    spec = NormSpec("F1", "exception", ("have_fence",), modality="F", exception=L("location(sea)"))
    assert weak_lines(spec, 2) == [":~ -F(have_fence), not location(sea). [1:2]"]


def test_contrary_to_duty_inherits_the_exception():
    f1 = NormSpec("F1", "exception", ("have_fence",), modality="F", exception=L("location(sea)"))
    f2 = NormSpec("F2", "contrary_to_duty", ("have_white_fence",), violates="F1")
    assert weak_lines(f2, 2, violated=f1) == [
        ":~ Do(have_fence), not location(sea), -O(have_white_fence). [1:2]"
    ]


def test_contrary_to_duty_of_an_obligation_fires_on_omission():
    o1 = NormSpec("A", "regular", ("help",))
    o2 = NormSpec("B", "contrary_to_duty", ("apologise",), violates="A")
    assert weak_lines(o2, 2, violated=o1) == [":~ -Do(help), -O(apologise). [1:2]"]


def test_weight_is_carried_through():
    assert weak_lines(NormSpec("n", "regular", ("o3",)), 2, weight=3) == [":~ -O(o3). [3:2]"]


@pytest.mark.parametrize(
    "spec, level, fragment",
    [
        (NormSpec("n", "disjunction", ("a",)), 2, "at least two"),
        (NormSpec("n", "regular", ("a", "b")), 2, "exactly one"),
        (NormSpec("n", "exception", ("a",)), 2, "exception atom"),
        (NormSpec("n", "conditional", ("a",)), 2, "condition"),
        (NormSpec("n", "contrary_to_duty", ("a",)), 2, "repairs"),
        (NormSpec("n", "regular", ("a",), modality="P"), 2, "modality"),
        (NormSpec("n", "sometimes", ("a",)), 2, "unknown kind"),
        (NormSpec("n", "regular", ("a",)), 1, "level 2"),
    ],
)
def test_malformed_norms(spec, level, fragment):
    with pytest.raises(MalformedSpec, match=fragment):
        compile_norm(spec, level)


# -- levels ------------------------------------------------------------------------


DRIVING_EDGES = [("O1", "O2"), ("O3", "O1"), ("O8", "O2"), ("O3", "O8"), ("O8", "O7")]
DRIVING_TABLE = {"O1": 3, "O2": 2, "O3": 4, "O4": 2, "O5": 2, "O6": 2, "O7": 2, "O8": 3}


def test_driving_preference_graph_levels():
    assert assign_levels([f"O{i}" for i in range(1, 9)], DRIVING_EDGES) == DRIVING_TABLE


def test_driving_spec_levels():
    system = load_norm_spec(corpus_path() / "specs" / "driving.yaml")
    assert norm_levels(system) == DRIVING_TABLE


def test_no_preferences_means_level_two():
    assert assign_levels(["A", "B"], []) == {"A": 2, "B": 2}


def test_cycle_is_named():
    with pytest.raises(CyclicPreferences) as info:
        assign_levels(["a", "b", "c"], [("a", "b"), ("b", "c"), ("c", "a")])
    assert set(info.value.cycle) == {"a", "b", "c"}


def test_equivalent_norms_share_a_level():
    levels = assign_levels(["a", "b", "c"], [("a", "c")], [("a", "b")])
    assert levels == {"a": 3, "b": 3, "c": 2}


def test_preference_inside_an_equivalence_class_is_a_cycle():
    with pytest.raises(CyclicPreferences):
        assign_levels(["a", "b"], [("a", "b")], [("a", "b")])


def _longest_path_to_sink(v, succ) -> int:
    return 0 if not succ[v] else 1 + max(_longest_path_to_sink(w, succ) for w in succ[v])


@settings(max_examples=200)
@given(st.integers(2, 9), st.integers(0, 2**32 - 1))
def test_levels_match_longest_path_oracle(n, seed):
    rng = random.Random(seed)
    order = list(range(n))
    rng.shuffle(order)
    edges = [(order[i], order[j]) for i, j in combinations(range(n), 2) if rng.random() < 0.35]
    succ = {v: [w for u, w in edges if u == v] for v in range(n)}
    levels = assign_levels(list(range(n)), edges)
    for v in range(n):
        assert levels[v] == _longest_path_to_sink(v, succ) + 2
    for u, w in edges:
        assert levels[u] > levels[w]


# -- whole systems ---------------------------------------------------------------------


def test_plato_system_compiles_to_the_expected_lines():
    system = load_norm_spec(corpus_path() / "specs" / "plato.yaml")
    lines = print_program(compile_system(system, with_core=False)).splitlines()
    assert sorted(lines) == sorted(
        [
            ":~ -O(meet). [1:2]",
            ":~ -O(help), Happens(emergency). [1:3]",
            ":- Do(help), Do(meet).",
            "Happens(emergency).",
            "act(meet).",
            "act(help).",
        ]
    )


def test_driving_system_contains_the_characteristic_constraints():
    system = load_norm_spec(corpus_path() / "specs" / "driving.yaml")
    text = print_program(compile_system(system, with_core=False))
    for line in [
        ":~ -O(equip_allseason), -O(equip_winter), winter. [1:2]",
        "aux_conj_o6 :- O(carry_license), O(carry_registration).",
        ":~ not aux_conj_o6, not theft. [1:2]",
        ":~ -O(move), Happens(emergency_vehicle). [1:4]",
        ":~ -F(stop), not Happens(merge). [1:2]",
        "Do(stop) :- Do(give_first_aid).",
        ":- Do(stop), Do(move).",
    ]:
        assert line in text.splitlines(), line


@pytest.mark.parametrize("spec", spec_paths(), ids=lambda p: p.stem)
def test_golden_output(spec):
    compiled = print_program(compile_system(load_norm_spec(spec)))
    assert compiled == golden_path(spec.stem).read_text(encoding="utf-8")


@pytest.mark.parametrize("spec", spec_paths(), ids=lambda p: p.stem)
def test_compilation_is_deterministic(spec):
    system = load_norm_spec(spec)
    assert print_program(compile_system(system)) == print_program(compile_system(load_norm_spec(spec)))


def _obligation_sets(program) -> set:
    return {frozenset(str(l) for l in a if l.predicate == "O" and not l.negated) for a in solve(program)}


def test_case2_weights_tie_the_two_sides():
    system = load_norm_spec(corpus_path() / "specs" / "case2.yaml")
    program = core_rules() + compile_system(system, with_core=False)
    assert _obligation_sets(program) == {frozenset({"O(o3)"}), frozenset({"O(o1)", "O(o2)"})}


def test_case2_tie_is_broken_by_the_level_one_penalties():
    system = load_norm_spec(corpus_path() / "specs" / "case2.yaml")
    assert _obligation_sets(compile_system(system)) == {frozenset({"O(o3)"})}


def test_lint_warns_about_unit_weights_against_several_rivals():
    doc = """
actions: [o, o1, o2]
norms:
  - {id: A, kind: regular, action: o}
  - {id: B, kind: regular, action: o1}
  - {id: C, kind: regular, action: o2}
incompatible: [[o, o1], [o, o2]]
"""
    warnings = lint(parse_norm_spec(doc))
    assert len(warnings) == 1 and "norm A" in warnings[0]
    weighted = doc.replace("action: o}", "action: o, weight: 2}")
    assert lint(parse_norm_spec(weighted)) == []


# -- documents ----------------------------------------------------------------------


def test_minimal_document():
    system = parse_norm_spec("actions: [a]\nnorms:\n  - {id: n, kind: regular, action: a}\n")
    assert len(system.norms) == 1
    assert print_program(compile_system(system, with_core=False)).splitlines() == [
        "act(a).",
        ":~ -O(a). [1:2]",
    ]


@pytest.mark.parametrize(
    "doc, where",
    [
        ("norms: []", "$"),
        ("actions: [a]\nnorms:\n  - {id: n, kind: nope, action: a}", "$.norms[0].kind"),
        ("actions: [a]\nnorms:\n  - {kind: regular, action: a}", "$.norms[0]"),
        ("actions: [A]\nnorms: []", "$.actions[0]"),
        ("actions: [a]\nnorms:\n  - {id: n, kind: conditional, action: a, condition: ['p(']}", "$.norms[0].condition[0]"),
        ("actions: [a]\nnorms: []\nrules: 'p :- .'", "$.rules"),
        ("actions: [a\n", "line"),
    ],
)
def test_schema_errors_carry_a_location(doc, where):
    with pytest.raises(SchemaError) as info:
        parse_norm_spec(doc)
    assert info.value.location.startswith(where)


@settings(max_examples=300)
@given(st.text(alphabet=st.sampled_from(list("abnorm:[]{}-, \n'\"0123456789actionskindregular")), max_size=80))
def test_fuzzed_documents_never_crash(doc):
    try:
        parse_norm_spec(doc)
    except SchemaError:
        pass


@pytest.mark.parametrize(
    "doc",
    [
        "actions: [a]\nnorms:\n  - {id: n, kind: conditional, action: a, condition: ['o(x)']}",
        "actions: [a]\nnorms:\n  - {id: n, kind: conditional, action: a, condition: ['O(x, y)']}",
        "actions: [a]\nnorms: []\nrules: 'aux_conj_x :- a.'",
        "actions: [a]\nnorms: []\nfacts: 'happens(a).'",
    ],
)
def test_vocabulary_collisions(doc):
    with pytest.raises(VocabularyCollision):
        compile_system(parse_norm_spec(doc))


@pytest.mark.parametrize(
    "doc, fragment",
    [
        ("actions: [a]\nnorms:\n  - {id: n, kind: regular, action: b}", "not declared"),
        ("actions: [a]\nnorms:\n  - {id: n, kind: regular, action: a}\n  - {id: n, kind: regular, action: a}", "duplicate"),
        ("actions: [a]\nnorms:\n  - {id: n, kind: regular, action: a}\npreferences: [[n, m]]", "unknown norm"),
        ("actions: [a, b]\nnorms:\n  - {id: n, kind: contrary_to_duty, action: a, violates: m}", "does not exist"),
        ("actions: [a]\nnorms: []\nincompatible: [[a, c]]", "not declared"),
    ],
)
def test_inconsistent_systems_are_rejected(doc, fragment):
    with pytest.raises(MalformedSpec, match=fragment):
        compile_system(parse_norm_spec(doc))


def test_cyclic_document():
    doc = "actions: [a, b]\nnorms:\n  - {id: x, kind: regular, action: a}\n  - {id: y, kind: regular, action: b}\npreferences: [[x, y], [y, x]]"
    with pytest.raises(CyclicPreferences):
        compile_system(parse_norm_spec(doc))


# -- semantic effectiveness ------------------------------------------------------------


def _verdict(system: NormativeSystem) -> DeonticVerdict:
    return DeonticVerdict.from_answer_sets(solve(compile_system(system)))


@settings(max_examples=40)
@given(st.integers(3, 6), st.integers(0, 2**32 - 1))
def test_preferred_norm_wins_an_incompatibility(n, seed):
    rng = random.Random(seed)
    actions = tuple(f"a{i}" for i in range(n))
    norms = tuple(NormSpec(f"N{i}", "regular", (a,)) for i, a in enumerate(actions))
    u, v = rng.sample(range(n), 2)
    others = [i for i in range(n) if i not in (u, v)]
    prefs = [(f"N{u}", f"N{v}")]
    for i in others:
        if rng.random() < 0.5:
            prefs.append((f"N{u}", f"N{i}"))
    system = NormativeSystem(
        actions=actions,
        norms=norms,
        preferences=tuple(prefs),
        incompatible=((actions[u], actions[v]),),
    )
    verdict = _verdict(system)
    assert actions[u] in verdict.cautious_obligations
    assert actions[v] not in verdict.brave_obligations


def _fence(facts: str) -> DeonticVerdict:
    system = load_norm_spec(corpus_path() / "specs" / "fence.yaml")
    from dataclasses import replace

    return _verdict(replace(system, facts=parse(facts)))


def test_exception_suppresses_the_prohibition():
    assert "have_fence" not in _fence("location(sea).").brave_prohibitions
    assert "have_fence" in _fence("").cautious_prohibitions


def test_contrary_to_duty_fires_only_on_violation():
    assert "have_white_fence" in _fence("Do(have_fence).").cautious_obligations
    assert "have_white_fence" not in _fence("-Do(have_fence).").brave_obligations


def test_contrary_to_duty_takes_the_level_of_the_repaired_norm():
    doc = """
actions: [a, b, c]
norms:
  - {id: X, kind: regular, modality: F, action: a}
  - {id: Y, kind: regular, action: c}
  - {id: Z, kind: contrary_to_duty, action: b, violates: X}
preferences: [[X, Y]]
"""
    assert norm_levels(parse_norm_spec(doc)) == {"X": 3, "Y": 2, "Z": 3}
