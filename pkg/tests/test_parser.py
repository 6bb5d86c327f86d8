from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from deontasp.asp.parser import SourceProgram, parse, parse_body, parse_literal, print_program
from deontasp.asp.syntax import Comparison, Fn, Literal, Naf, Program, Rule, Var, WeakConstraint
from deontasp.corpus import load_entries, spec_paths
from deontasp.deontic import common_core
from deontasp.errors import AspSyntaxError

from strategies import programs


def test_weak_constraint_with_weight_and_level():
    p = parse(":~ -O(mail). [1:2]")
    assert p.rules == ()
    assert p.weak == (WeakConstraint((Literal("O", ("mail",), True),), 1, 2),)


def test_fact_is_rule_with_empty_body():
    p = parse("act(mail).")
    assert p.rules == (Rule((Literal("act", ("mail",)),), ()),)
    assert p.rules[0].is_fact


def test_constraint_has_empty_head():
    (r,) = parse(":- Do(help), Do(meet).").rules
    assert r.head == ()
    assert r.body == (Literal("Do", ("help",)), Literal("Do", ("meet",)))


def test_disjunction_and_variables():
    (r,) = parse("O(X) v -O(X) :- act(X).").rules
    assert r.head == (Literal("O", (Var("X"),)), Literal("O", (Var("X"),), True))
    assert r.body == (Literal("act", (Var("X"),)),)


@pytest.mark.parametrize("text", ["a | b.", "a ∨ b.", "a v b."])
def test_disjunction_spellings(text):
    assert parse(text) == parse("a v b.")


@pytest.mark.parametrize("text", ["−a.", "¬a.", "-a."])
def test_strong_negation_spellings(text):
    assert parse(text).rules[0].head == (Literal("a", (), True),)


def test_default_negation_and_builtins():
    (w,) = parse(":~ pacman(A,B), blueGhost(C,D,1), E=C-A, E<=2, not exception, -F(east). [1:4]").weak
    assert Naf(Literal("exception")) in w.body
    assert Comparison("<=", Var("E"), 2) in w.body
    assert w.level == 4


def test_compound_terms():
    (r,) = parse("O(eat(blue_ghost)) :- act(eat(blue_ghost)).").rules
    assert r.head[0].args == (Fn("eat", ("blue_ghost",)),)


def test_comments_and_whitespace():
    assert parse("% a comment\n  a.   % trailing\n\n b :- a .") == parse("a. b :- a.")


def test_empty_program_prints_empty_text():
    assert print_program(Program()) == ""
    assert parse("") == Program()


def test_core_prints_as_eleven_lines():
    text = print_program(common_core())
    lines = text.splitlines()
    assert len(lines) == 11
    assert sum(line.startswith(":~") for line in lines) == 2
    assert lines[0] == "O(X) v -O(X) :- act(X)."


def test_round_trip_of_rule_with_variables():
    p = parse("O(X) v -O(X) :- act(X).")
    assert parse(print_program(p)) == p


def test_maxint_directive_round_trips():
    p = parse("#maxint=10.\na(X) :- X<3.")
    assert p.maxint == 10
    assert parse(print_program(p)) == p


def test_parse_literal_and_body():
    assert parse_literal("-F(have_fence)") == Literal("F", ("have_fence",), True)
    assert parse_body("Happens(merge), not theft") == (
        Literal("Happens", ("merge",)),
        Naf(Literal("theft")),
    )


@pytest.mark.parametrize(
    "text, fragment",
    [
        ("a :- b", "end of input"),
        ("a :- b, .", "body literal"),
        (":~ a. [1]", ":"),
        (":~ a. [x:1]", "integer"),
        (":~ a.", "["),
        ("a(X).", "unsafe variable X"),
        ("X :- a.", "variable"),
        (":- a, not b(Y).", "unsafe variable Y"),
        ("a(.", "term"),
        ("a :- b. c", "end of input"),
    ],
)
def test_errors_carry_a_span(text, fragment):
    with pytest.raises(AspSyntaxError) as info:
        parse(SourceProgram(text, "prog.lp"))
    d = info.value.diagnostic
    assert d.span.file == "prog.lp"
    assert d.span.line >= 1 and d.span.column >= 1
    assert fragment in str(info.value)


def test_error_positions_point_at_the_offending_line():
    with pytest.raises(AspSyntaxError) as info:
        parse("a.\nb.\nc :- .\n")
    assert info.value.diagnostic.span.line == 3


def test_builtin_in_head_is_rejected():
    with pytest.raises(AspSyntaxError):
        parse("X=1 :- a(X).")


def test_every_corpus_program_parses_and_round_trips():
    for entry in load_entries():
        assert parse(print_program(entry.program)) == entry.program, entry.name
        assert parse(print_program(entry.facts)) == entry.facts, entry.name


def test_golden_programs_round_trip():
    from deontasp.corpus import golden_path

    for spec in spec_paths():
        text = golden_path(spec.stem).read_text(encoding="utf-8")
        assert print_program(parse(text)) == text


@settings(max_examples=300)
@given(programs)
def test_print_parse_identity(program):
    assert parse(print_program(program)) == program


@settings(max_examples=300)
@given(st.text(alphabet=st.sampled_from(list("abXY01 .,:-~()[]v|%\n=<>+not")), max_size=40))
def test_fuzzing_never_crashes(text):
    try:
        parse(text)
    except AspSyntaxError:
        pass


def test_binary_junk_never_crashes():
    rng = random.Random(5)
    for _ in range(2000):
        raw = bytes(rng.randrange(256) for _ in range(rng.randrange(30)))
        try:
            parse(raw.decode("latin-1"))
        except AspSyntaxError:
            pass


def test_deep_nesting_is_a_syntax_error_not_a_crash():
    with pytest.raises(AspSyntaxError):
        parse("a(" + "f(" * 5000 + "x" + ")" * 5001 + ".")
