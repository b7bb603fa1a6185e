import random

import pytest
from hypothesis import given, strategies as st

from dyncalc.checker import ProofTree, check_proof, hyp
from dyncalc.conservativity import (
    NOT_WITNESS, WITNESS, conservativity_report, is_severe, severe_occurrences,
    strip_redundant_displays, va_introductions, virtual_adjoint_occurrences, virtual_census,
)
from dyncalc.display import applicable_postulates, display_search
from dyncalc.generators import random_sequent
from dyncalc.syntax import parse_sequent, parse_term, render

from conftest import DECLS


def S(text):
    return parse_sequent(text, DECLS)


@pytest.mark.parametrize("text,expected", [
    ("p |- a STRI2 q", [(1,)]),
    ("(a VRARR3 (a SBTRI3 alpha)) STRI0 p |- q", [(0, 0)]),
    ("p |- a SRARR2 q", []),
    ("a STRI2 p |- q", []),
    ("p |- q ; r", []),
])
def test_severe_occurrences(text, expected):
    assert severe_occurrences(S(text)) == expected


def test_virtual_adjoint_occurrences():
    assert virtual_adjoint_occurrences(parse_term("q VBLARR0 p", DECLS)) == [()]
    assert virtual_adjoint_occurrences(parse_term("alpha STRI0 p", DECLS)) == []
    steps = display_search(S("p |- alpha SRARR0 q"), (1, 0))
    assert virtual_adjoint_occurrences(steps[-1].result) == [(1,)]


def test_va_introduction_by_weakening_is_rejected():
    t = ProofTree("W1_L", S("(q VBLARR0 p) STRI0 r |- r < r"), (ProofTree("Id", S("r |- r")),))
    t = ProofTree(";/<", S("((q VBLARR0 p) STRI0 r) ; r |- r"), (t,))
    assert check_proof(t, allow_cut=False).ok
    intro = va_introductions(t)
    assert [(i.tree_path, i.rule, i.introduced) for i in intro] == \
        [((0,), "W1_L", "(q VBLARR0 p) STRI0 r")]
    rep = conservativity_report(t)
    assert rep.verdict == NOT_WITNESS
    assert "W1_L at 0 introduces" in str(rep)


def test_plain_weakening_introduces_nothing():
    t = ProofTree("W1_L", S("q |- r < r"), (ProofTree("Id", S("r |- r")),))
    assert va_introductions(t) == []


def _there_and_back(start, name):
    """hyp(start) followed by postulate ``name`` and its inverse."""
    (_, _, mid), = [x for x in applicable_postulates(start) if x[0] == name]
    down = ProofTree(name, mid, (hyp("pi", start),))
    return ProofTree(name, start, (down,)), mid


def test_strip_removes_a_display_step_and_its_inverse():
    start = S("alpha STRI0 p |- q")
    t, mid = _there_and_back(start, "STRI0/VBLARR0")
    assert render(mid) == "alpha |- q VBLARR0 p"
    assert check_proof(t, allow_hyps=True).ok
    assert virtual_census(t) == 1
    out = strip_redundant_displays(t)
    assert out == hyp("pi", start)
    assert virtual_census(out) == 0


def test_strip_leaves_virtual_free_trees_alone(corpus):
    for name, script in corpus.items():
        out = strip_redundant_displays(script.tree)
        assert out.conclusion == script.tree.conclusion
        assert check_proof(out, allow_cut=False).ok, name
        assert strip_redundant_displays(out) == out
        assert virtual_census(out) == 0, name


def test_corpus_proofs_are_witnesses(corpus):
    for name, script in corpus.items():
        rep = conservativity_report(script.tree)
        assert rep.in_image, name
        assert rep.verdict == WITNESS, (name, str(rep))


def test_report_example(corpus):
    rep = conservativity_report(corpus["diamond_atom_fwd"].tree)
    assert rep.endsequent == "alpha tri0 p |- (alpha tri0 top) /\\ p"
    assert rep.lines()[-1] == f"verdict: {WITNESS}"


def test_endsequent_outside_the_image_is_negative():
    t = ProofTree("Id", S("(a tri3 alpha) tri1 p |- (a tri3 alpha) tri1 p"))
    rep = conservativity_report(t)
    assert not rep.in_image and rep.verdict == NOT_WITNESS


def test_invalid_proof_is_negative():
    rep = conservativity_report(ProofTree("Id", S("p |- q")))
    assert rep.problems and rep.verdict == NOT_WITNESS


@given(st.integers(0, 10**6))
def test_severity_survives_display_postulates(seed):
    s = random_sequent(3, random.Random(seed))
    for _, _, result in applicable_postulates(s):
        assert is_severe(result) == is_severe(s)
