import random

import pytest
from hypothesis import given, strategies as st

from dyncalc.checker import (
    ProofTree, check_proof, check_type_uniformity, dumps, expand_macros, hyp, load, loads,
)
from dyncalc.generators import random_sequent
from dyncalc.rules import catalog
from dyncalc.syntax import ParseError, parse_sequent

from conftest import CORPUS, DECLS, corpus_files


def S(text):
    return parse_sequent(text, DECLS)


def ax(rule, text):
    return ProofTree(rule, S(text))


def test_small_proof_checks():
    t = ProofTree("and_R", S("p ; q |- p /\\ q"), (ax("Id", "p |- p"), ax("Id", "q |- q")))
    rep = check_proof(t)
    assert rep.ok and rep.stats["nodes"] == 3


def test_failure_is_reported_with_tree_path():
    t = ProofTree("and_R", S("p ; q |- q /\\ p"), (ax("Id", "p |- p"), ax("Id", "q |- q")))
    rep = check_proof(t)
    assert not rep.ok
    assert rep.failures[0][0] == ()
    assert "and_R" in rep.failures[0][1]


def test_nested_failure_path():
    bad = ax("Id", "p |- q")
    t = ProofTree("top_L", S("top |- p"), (ProofTree("IW_L", S("I |- p"), (bad,)),))
    rep = check_proof(t)
    # the leaf is wrong, and so is its parent, whose premise no longer fits
    assert [p for p, _ in rep.failures] == [(0,), (0, 0)]


def test_cut_is_rejected_on_request():
    t = ProofTree("Cut_FM", S("p |- p"), (ax("Id", "p |- p"), ax("Id", "p |- p")))
    assert check_proof(t).ok
    rep = check_proof(t, allow_cut=False)
    assert not rep.ok and "cut forbidden" in rep.failures[0][1]
    assert rep.stats["cuts"] == 1


def test_cut_of_the_wrong_type_is_rejected():
    t = ProofTree("Cut_AG", S("p |- p"), (ax("Id", "p |- p"), ax("Id", "p |- p")))
    assert not check_proof(t).ok


def test_hypotheses_need_permission():
    t = ProofTree("top_L", S("top |- p"), (hyp("pi", S("I |- p")),))
    assert not check_proof(t).ok
    assert check_proof(t, allow_hyps=True).ok


def test_grishin_rules_belong_to_the_classical_base():
    classical_only = next(s for s in catalog("classical") if s.name == "Gri_L")
    t = ProofTree("Gri_L", classical_only.conclusion)
    rep = check_proof(t, base="intuitionistic")
    assert not rep.ok and "not part of the intuitionistic base" in rep.failures[0][1]


def test_type_uniformity_check():
    assert check_type_uniformity(S("p |- q"))
    assert not check_type_uniformity(S("a |- p"))


def test_unknown_rule_is_a_failure_not_an_exception():
    rep = check_proof(ax("Frobnicate", "p |- p"))
    assert not rep.ok and "unknown rule" in rep.failures[0][1]


def test_script_round_trip(corpus):
    for name, script in corpus.items():
        again = loads(dumps(script.tree, script.decls, script.comments))
        assert again.tree == script.tree, name
        assert again.comments == script.comments


def test_script_errors():
    with pytest.raises(ParseError):
        loads("prop p.\n(rule Id (seq \"p |- p\")")
    with pytest.raises(ParseError, match="undeclared"):
        loads('(ax Id (seq "p |- p"))')
    with pytest.raises(ParseError):
        loads('prop p.\n(ax Id (seq "p |- p") (ax Id (seq "p |- p")))')


def test_corpus_scripts_carry_a_header_comment():
    for f in corpus_files():
        script = load(f)
        assert script.comments and "|-" in script.comments[0], f.name


def test_corpus_is_cut_free_and_macro_free():
    for f in corpus_files():
        t = load(f).tree
        assert check_proof(t, allow_cut=False, allow_macros=False).ok, f.name


def test_macro_expansion_gives_a_primitive_derivation():
    decls = {"p": "prop", "q": "prop", "alpha": "fnc"}
    seq = lambda s: parse_sequent(s, decls)
    premise = ProofTree("hyp", seq("(alpha STRI0 I) ; (alpha STRI0 p) |- q"), (), "pi")
    t = ProofTree("reduce_L", seq("alpha STRI0 p |- q"), (premise,))
    assert check_proof(t, allow_hyps=True).ok
    flat = expand_macros(t)
    assert flat.size() > t.size()
    assert flat.conclusion == t.conclusion
    assert check_proof(flat, allow_hyps=True, allow_macros=False).ok


@given(st.integers(0, 10**6))
def test_identity_on_random_sequents_never_crashes_the_checker(seed):
    s = random_sequent(2, random.Random(seed))
    rep = check_proof(ProofTree("Id", s))
    assert isinstance(rep.ok, bool)


def test_corpus_dir_has_enough_scripts():
    assert len(list(CORPUS.glob("*.dcp"))) >= 26
