import pytest

from dyncalc.checker import ProofTree, check_proof, cut_term, load
from dyncalc.cutelim import (
    FuelExhausted, NotPrincipal, compose_cut, cut_rank, eliminate_cuts, principal_reduce,
    reduce_cut, topmost_cut, EliminationLog,
)
from dyncalc.syntax import op_size, parse_sequent

from conftest import DECLS, GOLDEN, corpus_pairs

GOLDEN_NAMES = sorted(p.name[:-len(".in.dcp")] for p in GOLDEN.glob("*.in.dcp"))


def cuts_of(t):
    out = [t] if t.is_cut else []
    for c in t.children:
        out.extend(cuts_of(c))
    return out


def test_golden_set_covers_every_connective_family():
    # 20 printed schemas plus the six propositional ones
    assert len(GOLDEN_NAMES) == 26
    for name in ("tri0", "tri3", "btri1", "rarr2", "brarr0", "and", "rsub", "ag", "fnc"):
        assert name in GOLDEN_NAMES


@pytest.mark.parametrize("name", GOLDEN_NAMES)
def test_principal_reduction_matches_golden(name):
    before = load(GOLDEN / f"{name}.in.dcp").tree
    expected = load(GOLDEN / f"{name}.out.dcp").tree
    assert principal_reduce(before) == expected


@pytest.mark.parametrize("name", GOLDEN_NAMES)
def test_principal_reduction_output_checks_and_lowers_complexity(name):
    before = load(GOLDEN / f"{name}.in.dcp").tree
    after = principal_reduce(before)
    assert check_proof(after, allow_hyps=True).ok
    assert after.conclusion == before.conclusion
    rank = op_size(cut_term(before))
    for c in cuts_of(after):
        assert op_size(cut_term(c)) < rank


def test_principal_reduce_refuses_parametric_cuts():
    s = lambda t: parse_sequent(t, DECLS)
    pi = ProofTree("hyp", s("p ; q |- r"), (), "pi")
    right = ProofTree("E_L", s("q ; p |- r"), (pi,))
    cut = ProofTree("Cut_FM", s("q ; q |- r"),
                    (ProofTree("hyp", s("q |- p"), (), "rho"), right))
    with pytest.raises(NotPrincipal):
        principal_reduce(cut)


def test_identity_cuts_vanish():
    s = lambda t: parse_sequent(t, DECLS)
    pi = ProofTree("hyp", s("q |- p"), (), "pi")
    cut = ProofTree("Cut_FM", s("q |- p"), (pi, ProofTree("Id", s("p |- p"))))
    log = EliminationLog()
    assert reduce_cut(cut, log) == pi
    assert log.identity == 1


def test_compose_rejects_mismatched_premises(corpus):
    a = corpus["diamond_atom_fwd"].tree
    with pytest.raises(Exception):
        compose_cut(a, a)


@pytest.mark.parametrize("fwd,bwd", corpus_pairs())
def test_round_trip_compositions_become_cut_free(corpus, fwd, bwd):
    for x, y in ((fwd, bwd), (bwd, fwd)):
        t = compose_cut(corpus[x].tree, corpus[y].tree)
        assert topmost_cut(t) == ()
        seen = []
        out = eliminate_cuts(t, on_step=lambda tree, path, b, a: seen.append(
            (b.conclusion, a.conclusion)))
        assert seen and all(b == a for b, a in seen)
        rep = check_proof(out, allow_cut=False)
        assert rep.ok, rep.failures[:3]
        assert out.conclusion == t.conclusion


def test_fuel_exhaustion_returns_the_residual(corpus):
    t = compose_cut(corpus["box_and_fwd"].tree, corpus["box_and_bwd"].tree)
    with pytest.raises(FuelExhausted) as e:
        eliminate_cuts(t, fuel=1)
    residual = e.value.residual
    assert residual.conclusion == t.conclusion
    assert check_proof(residual).ok
    assert cuts_of(residual)


def test_cut_rank_is_ordered_by_complexity_then_height(corpus):
    t = compose_cut(corpus["box_and_fwd"].tree, corpus["box_and_bwd"].tree)
    r = cut_rank(t)
    assert r.complexity == op_size(cut_term(t))
    assert r.height > 0
