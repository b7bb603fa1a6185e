import random

import pytest
from hypothesis import given, strategies as st

from dyncalc.generators import random_sequent, random_term, decls_for
from dyncalc.syntax import (
    ACT, AG, FM, FNC, Act, Ag, Fm, Fnc, I, Leaf, OpApp, ParseError, SApp, Side, TypeMismatch,
    Atom, get_at, infer_type, occurrences, parse_sequent, parse_term, positions, render,
    replace_at, side_of,
)

from conftest import DECLS


def test_parse_and_render_operational_sequent():
    s = parse_sequent("alpha tri0 p |- (alpha tri0 top) /\\ p", DECLS)
    assert s.tag == FM
    assert render(s) == "alpha tri0 p |- (alpha tri0 top) /\\ p"


def test_heterogeneous_connectives_get_their_result_type():
    t = parse_term("a btri3 alpha", DECLS)
    assert t.tag == Act
    assert parse_term("a SBTRI3 alpha", DECLS).tag == ACT
    assert parse_term("a SBTRI3 alpha", DECLS) == SApp("SBTRI3", Leaf(Atom("a", Ag)),
                                                       Leaf(Atom("alpha", Fnc)))


def test_unit_and_constants_need_no_declaration():
    s = parse_sequent("I |- top", {})
    assert s.lhs is I and s.tag == FM


def test_undeclared_identifier_is_rejected():
    with pytest.raises(ParseError, match="undeclared"):
        parse_sequent("p |- zz", DECLS)


def test_wrong_argument_type_names_the_path():
    with pytest.raises(TypeMismatch) as e:
        parse_sequent("p tri0 q |- p", DECLS)
    assert e.value.path[0] == 0


def test_structural_argument_of_operational_connective_is_rejected():
    with pytest.raises(TypeMismatch):
        parse_sequent("(p ; q) /\\ r |- p", DECLS)


def test_type_mismatched_sides_parse_but_are_not_uniform():
    s = parse_sequent("a |- p", DECLS)
    assert s.tag is None


def test_garbage_is_a_parse_error():
    with pytest.raises(ParseError):
        parse_sequent("p |- |- q", DECLS)


def test_positions_follow_polarity():
    s = parse_sequent("p > q |- r < (alpha SRARR0 s)", DECLS)
    pos = dict(positions(s))
    assert pos[(0, 0)] is Side.SUCCEDENT      # first argument of > is negative
    assert pos[(0, 1)] is Side.PRECEDENT
    assert pos[(1, 0)] is Side.SUCCEDENT
    assert pos[(1, 1)] is Side.PRECEDENT      # second argument of < is negative
    assert pos[(1, 1, 0)] is Side.SUCCEDENT   # first argument of an arrow is negative
    assert pos[(1, 1, 1)] is Side.PRECEDENT


def test_get_and_replace_at():
    s = parse_sequent("p ; q |- r", DECLS)
    assert render(get_at(s, (0, 1))) == "q"
    t = replace_at(s, (0, 1), Leaf(Atom("s", Fm)))
    assert render(t) == "p ; s |- r"
    with pytest.raises(KeyError):
        get_at(s, (1, 0))


def test_latex_rendering_uses_greek_and_vdash():
    s = parse_sequent("alpha tri0 top |- p", DECLS)
    out = render(s, "latex")
    assert r"\alpha" in out and r"\vdash" in out and r"\top" in out


@given(st.integers(0, 10**6), st.integers(0, 3))
def test_render_parse_round_trip(seed, depth):
    rng = random.Random(seed)
    s = random_sequent(depth, rng)
    back = parse_sequent(render(s), decls_for(s))
    assert back == s


@given(st.integers(0, 10**6))
def test_side_of_agrees_with_positions(seed):
    s = random_sequent(3, random.Random(seed))
    for path, side in positions(s):
        assert side_of(s, path) is side
    assert [p for p, _ in positions(s)] == [p for p, _ in occurrences(s)]


@given(st.integers(0, 10**6))
def test_generated_terms_are_well_typed(seed):
    rng = random.Random(seed)
    for tag in (Fm, Fnc, Act, Ag):
        t = random_term(tag, 3, rng)
        assert infer_type(t) == tag
