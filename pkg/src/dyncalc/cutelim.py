"""Cut elimination.

The engine repeatedly picks a topmost cut (one whose premises are cut-free)
and rewrites it:

* if one premise is an identity axiom the cut disappears;
* if the cut term is principal in both premises, a reduction schema replaces
  the cut by cuts on its immediate subterms (:func:`principal_reduce`);
* otherwise the history of the cut-term occurrence is traced upward through the
  premise in which it is parametric, the occurrence is replaced by the other
  side of the cut everywhere along that history, and a new cut is placed
  wherever the history started at a principal occurrence
  (:func:`parametric_reduce`).

Histories are traced through metavariables: an occurrence sitting inside a
structure metavariable of a rule's conclusion continues into every occurrence
of that metavariable in the premises; an occurrence sitting on an operational
leaf of the conclusion pattern is principal there.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

from .checker import ProofTree, cut_term, expand_macros, match_node
from .display import SearchExhausted, display_search, follow_steps
from .rules import NoMatch, atom_schema, locate, meta_paths, substitute
from .syntax import (
    Leaf, Path, SApp, Sequent, Structure, op_size, parse_sequent, render, replace_at,
)

DEFAULT_FUEL = 100_000
IDENTITY_AXIOMS = ("Id", "AgId", "FncId")


class CutElimError(Exception):
    pass


class NotPrincipal(CutElimError):
    pass


class NoReductionSchema(CutElimError):
    pass


class HistoryUntraceable(CutElimError):
    pass


class FuelExhausted(CutElimError):
    def __init__(self, residual: ProofTree):
        super().__init__("fuel exhausted before all cuts were eliminated")
        self.residual = residual


class CutRank(NamedTuple):
    complexity: int
    height: int


def cut_rank(t: ProofTree) -> CutRank:
    return CutRank(op_size(cut_term(t)), sum(c.height() for c in t.children))


@dataclass
class EliminationLog:
    steps: int = 0
    principal: int = 0
    parametric: int = 0
    identity: int = 0
    # display witnesses chosen for atom axioms whose atom was not displayed
    atom_displays: list[tuple[str, list[str]]] = field(default_factory=list)

    def summary(self) -> str:
        return (f"{self.steps} steps: {self.principal} principal, {self.parametric} "
                f"parametric, {self.identity} identity; "
                f"{len(self.atom_displays)} atom re-displays")


# ---------------------------------------------------------------------------
# helpers

def _effective(n: ProofTree):
    """Premise patterns, conclusion pattern and substitution of one inference,
    with the roles swapped when an invertible rule is read upward."""
    try:
        schema, sub, direction = match_node(n)
    except NoMatch as e:
        raise HistoryUntraceable(f"cannot match {n.rule} at {render(n.conclusion)}: {e}")
    if direction == "down":
        return schema, schema.premises, schema.conclusion, sub
    return schema, (schema.conclusion,), schema.premises[0], sub


def _replace_in(struct: Structure, rel: Path, new: Structure) -> Structure:
    if not rel:
        return new
    if not isinstance(struct, SApp):
        raise HistoryUntraceable("path runs below a leaf")
    if rel[0] == 0:
        return SApp(struct.conn, _replace_in(struct.left, rel[1:], new), struct.right)
    return SApp(struct.conn, struct.left, _replace_in(struct.right, rel[1:], new))


def _cut_name(t: ProofTree) -> str:
    return f"Cut_{t.conclusion.tag}"


def _is_principal(n: ProofTree, side: int) -> bool:
    if n.is_hyp:
        return False
    _, _, conc, _ = _effective(n)
    return locate(conc, (side,))[0] == "leaf"


def topmost_cut(t: ProofTree) -> tuple[int, ...] | None:
    """Path of a cut whose premises contain no further cuts, or None."""
    def has_cut(n: ProofTree) -> bool:
        return n.is_cut or any(has_cut(c) for c in n.children)

    def go(n: ProofTree, path):
        for i, c in enumerate(n.children):
            found = go(c, path + (i,))
            if found is not None:
                return found
        if n.is_cut:
            return path
        return None
    return go(t, ())


# ---------------------------------------------------------------------------
# principal reductions

def _cut(kind: str, seq: Sequent, left: ProofTree, right: ProofTree) -> ProofTree:
    return ProofTree(kind, seq, (left, right))


def _one(rule: str, seq: Sequent, child: ProofTree) -> ProofTree:
    return ProofTree(rule, seq, (child,))


_FIRST_TAG = {0: "FNC", 1: "ACT", 2: "AG", 3: "AG"}
_SECOND_TAG = {0: "FM", 1: "FM", 2: "FM", 3: "FNC"}


def _left_adjoint(i: int, black: bool) -> tuple[str, str]:
    """Display postulate and connective isolating the first argument of a triangle."""
    if i == 1:
        return ("STRI1/SBLARR1", "SBLARR1") if not black else ("SBTRI1/SLARR1", "SLARR1")
    return (f"STRI{i}/VBLARR{i}", f"VBLARR{i}") if not black else \
        (f"SBTRI{i}/VLARR{i}", f"VLARR{i}")


def _right_adjoint(i: int, black: bool) -> tuple[str, str]:
    """Display postulate and connective isolating the second argument of a triangle."""
    if i == 3:
        return ("STRI3/VBRARR3", "VBRARR3") if not black else ("SBTRI3/VRARR3", "VRARR3")
    return (f"STRI{i}/SBRARR{i}", f"SBRARR{i}") if not black else \
        (f"SBTRI{i}/SRARR{i}", f"SRARR{i}")


def _reduce_triangle(i: int, black: bool, L: ProofTree, R: ProofTree, sub: dict,
                     decls: dict) -> ProofTree:
    tri = "SBTRI" if black else "STRI"
    p0, p1, p2 = L.children[0], L.children[1], R.children[0]
    ladj_rule, ladj = _left_adjoint(i, black)
    radj_rule, radj = _right_adjoint(i, black)
    cut_a, cut_b = f"Cut_{_FIRST_TAG[i]}", f"Cut_{_SECOND_TAG[i]}"

    def s(text):
        return substitute(parse_sequent(text, decls), sub)

    n1 = _one(ladj_rule, s(f"a |- z {ladj} b"), p2)
    n2 = _cut(cut_a, s(f"x |- z {ladj} b"), p0, n1)
    n3 = _one(ladj_rule, s(f"x {tri}{i} b |- z"), n2)
    n4 = _one(radj_rule, s(f"b |- x {radj} z"), n3)
    n5 = _cut(cut_b, s(f"y |- x {radj} z"), p1, n4)
    return _one(radj_rule, s(f"x {tri}{i} y |- z"), n5)


def _reduce_arrow(i: int, black: bool, L: ProofTree, R: ProofTree, sub: dict,
                  decls: dict) -> ProofTree:
    # white arrows are residuals of black triangles and vice versa
    tri = "STRI" if black else "SBTRI"
    arr = "SBRARR" if black else "SRARR"
    p1, p0, p2 = L.children[0], R.children[0], R.children[1]
    disp = f"{tri}{i}/{arr}{i}"
    ladj_rule, ladj = _left_adjoint(i, not black)

    def s(text):
        return substitute(parse_sequent(text, decls), sub)

    n1 = _one(disp, s(f"a {tri}{i} Z |- B"), p1)
    n2 = _one(ladj_rule, s(f"a |- B {ladj} Z"), n1)
    n3 = _cut(f"Cut_{_FIRST_TAG[i]}", s(f"x |- B {ladj} Z"), p0, n2)
    n4 = _one(ladj_rule, s(f"x {tri}{i} Z |- B"), n3)
    n5 = _cut("Cut_FM", s(f"x {tri}{i} Z |- Y"), n4, p2)
    return _one(disp, s(f"Z |- x {arr}{i} Y"), n5)


# Propositional reductions.  ``s`` instantiates a sequent pattern over the
# metavariables of the two introduction rules; every cut formula is moved into
# display with the FM postulates, cut, and moved back.
def _reduce_and(L, R, s):
    p1, p2, p3 = L.children[0], L.children[1], R.children[0]
    n = _one(";/>", s("B |- A > Z"), p3)
    n = _cut("Cut_FM", s("Y |- A > Z"), p2, n)
    n = _one(";/>", s("A ; Y |- Z"), n)
    n = _one(";/<", s("A |- Z < Y"), n)
    n = _cut("Cut_FM", s("X |- Z < Y"), p1, n)
    return _one(";/<", s("X ; Y |- Z"), n)


def _reduce_or(L, R, s):
    p1, p2, p3 = L.children[0], R.children[0], R.children[1]
    n = _one(">/;", s("A > Z |- B"), p1)
    n = _cut("Cut_FM", s("A > Z |- Y"), n, p3)
    n = _one(">/;", s("Z |- A ; Y"), n)
    n = _one("</;", s("Z < Y |- A"), n)
    n = _cut("Cut_FM", s("Z < Y |- X"), n, p2)
    return _one("</;", s("Z |- X ; Y"), n)


def _reduce_imp(L, R, s):
    p1, p2, p3 = L.children[0], R.children[0], R.children[1]
    n = _one(";/>", s("A ; Z |- B"), p1)
    n = _cut("Cut_FM", s("A ; Z |- Y"), n, p3)
    n = _one(";/<", s("A |- Y < Z"), n)
    n = _cut("Cut_FM", s("X |- Y < Z"), p2, n)
    n = _one(";/<", s("X ; Z |- Y"), n)
    return _one(";/>", s("Z |- X > Y"), n)


def _reduce_limp(L, R, s):
    p1, p2, p3 = L.children[0], R.children[0], R.children[1]
    n = _one(";/<", s("Z ; A |- B"), p1)
    n = _cut("Cut_FM", s("Z ; A |- Y"), n, p2)
    n = _one(";/>", s("A |- Z > Y"), n)
    n = _cut("Cut_FM", s("X |- Z > Y"), p3, n)
    n = _one(";/>", s("Z ; X |- Y"), n)
    return _one(";/<", s("Z |- Y < X"), n)


def _reduce_lsub(L, R, s):
    p1, p2, p3 = L.children[0], L.children[1], R.children[0]
    n = _one("</;", s("B |- Z ; A"), p3)
    n = _cut("Cut_FM", s("Y |- Z ; A"), p1, n)
    n = _one(">/;", s("Z > Y |- A"), n)
    n = _cut("Cut_FM", s("Z > Y |- X"), n, p2)
    n = _one(">/;", s("Y |- Z ; X"), n)
    return _one("</;", s("Y < X |- Z"), n)


def _reduce_rsub(L, R, s):
    p1, p2, p3 = L.children[0], L.children[1], R.children[0]
    n = _one(">/;", s("B |- A ; Z"), p3)
    n = _cut("Cut_FM", s("Y |- A ; Z"), p2, n)
    n = _one("</;", s("Y < Z |- A"), n)
    n = _cut("Cut_FM", s("Y < Z |- X"), n, p1)
    n = _one("</;", s("Y |- X ; Z"), n)
    return _one(">/;", s("X > Y |- Z"), n)


_PROPOSITIONAL = {
    ("and_R", "and_L"): _reduce_and,
    ("or_R", "or_L"): _reduce_or,
    ("imp_R", "imp_L"): _reduce_imp,
    ("limp_R", "limp_L"): _reduce_limp,
    ("lsub_R", "lsub_L"): _reduce_lsub,
    ("rsub_R", "rsub_L"): _reduce_rsub,
}


def principal_reduce(t: ProofTree) -> ProofTree:
    """Rewrite a cut whose cut term is principal in both premises.

    Cuts against identity axioms are removed outright.
    """
    if not t.is_cut:
        raise NotPrincipal(f"{t.rule} is not a cut")
    L, R = t.children
    if L.rule in IDENTITY_AXIOMS:
        return R
    if R.rule in IDENTITY_AXIOMS:
        return L
    if not (_is_principal(L, 1) and _is_principal(R, 0)):
        raise NotPrincipal(f"cut term {render(cut_term(t))} is parametric in a premise")
    if L.rule == "Atom" and R.rule == "Atom":
        return ProofTree("Atom", t.conclusion)
    if (L.rule, R.rule) == ("TopR", "top_L"):
        return R.children[0]
    if (L.rule, R.rule) == ("bot_R", "BotL"):
        return L.children[0]
    ls, lsub, _ = match_node(L)
    rs, rsub, _ = match_node(R)
    sub = {**lsub, **rsub}
    decls = {**ls.metas, **rs.metas}
    key = (L.rule, R.rule)
    if key in _PROPOSITIONAL:
        out = _PROPOSITIONAL[key](L, R, lambda text: substitute(parse_sequent(text, decls),
                                                                 sub))
    else:
        out = None
        for i in range(4):
            for black, name in ((False, "tri"), (True, "btri")):
                if key == (f"{name}{i}_R", f"{name}{i}_L"):
                    out = _reduce_triangle(i, black, L, R, sub, decls)
            for black, name in ((False, "rarr"), (True, "brarr")):
                if i < 3 and key == (f"{name}{i}_R", f"{name}{i}_L"):
                    out = _reduce_arrow(i, black, L, R, sub, decls)
        if out is None:
            raise NoReductionSchema(f"no reduction for {L.rule} against {R.rule}")
    if out.conclusion != t.conclusion:
        raise CutElimError(f"reduction changed the endsequent to {render(out.conclusion)}")
    return out


# ---------------------------------------------------------------------------
# parametric reduction

class _Tracer:
    """Replace the history of a cut-term occurrence inside one cut premise.

    ``side`` is 0 when the history lives in the right premise (antecedent
    occurrences, replaced by the left premise's antecedent) and 1 when it lives
    in the left premise (succedent occurrences, replaced by the right
    premise's succedent).
    """

    def __init__(self, side: int, partner: ProofTree, cut_rule: str, log: EliminationLog):
        self.side = side
        self.partner = partner
        self.cut_rule = cut_rule
        self.log = log
        self.new = partner.conclusion.lhs if side == 0 else partner.conclusion.rhs

    def cut_with(self, n: ProofTree) -> ProofTree:
        """Place a cut between the partner and ``n`` (whose cut term is displayed)."""
        if self.side == 0:
            seq = Sequent(self.new, n.conclusion.rhs)
            return ProofTree(self.cut_rule, seq, (self.partner, n))
        seq = Sequent(n.conclusion.lhs, self.new)
        return ProofTree(self.cut_rule, seq, (n, self.partner))

    def trace(self, n: ProofTree, occs: list[Path]) -> ProofTree:
        if not occs:
            return n
        if n.is_hyp:
            raise HistoryUntraceable(f"history reaches open hypothesis {n.label}")
        schema, prem_pats, conc_pat, sub = _effective(n)
        param: dict[str, list[Path]] = {}
        principal: list[Path] = []
        for p in occs:
            kind, node, rest = locate(conc_pat, p)
            if kind == "meta":
                param.setdefault(node.name, []).append(rest)
            elif kind == "leaf":
                principal.append(p)
            else:
                raise HistoryUntraceable(f"occurrence {p} hits a structural node of {n.rule}")
        if principal:
            return self._principal(n, schema, prem_pats, conc_pat, sub, param, principal)
        return self._rebuild(n, prem_pats, conc_pat, sub, param)

    def _rebuild(self, n, prem_pats, conc_pat, sub, param) -> ProofTree:
        new_sub = dict(sub)
        for name, rels in param.items():
            copies = [p for p, m in meta_paths(conc_pat) if m.name == name]
            if len(copies) > 1:
                raise HistoryUntraceable(
                    f"{n.rule}: parameter {name} occurs {len(copies)} times in the conclusion")
            value = sub[name]
            for rel in rels:
                value = _replace_in(value, rel, self.new)
            new_sub[name] = value
        kids = []
        for pat, child in zip(prem_pats, n.children):
            child_occs = [mp + rel for mp, m in meta_paths(pat) if m.name in param
                          for rel in param[m.name]]
            kids.append(self.trace(child, child_occs))
        conclusion = substitute(conc_pat, new_sub)
        if n.rule == "Atom" and atom_schema(conclusion) is None:
            raise HistoryUntraceable("substitution breaks an atom axiom")
        return ProofTree(n.rule, conclusion, tuple(kids))

    def _principal(self, n, schema, prem_pats, conc_pat, sub, param, principal) -> ProofTree:
        if len(principal) != 1:
            raise HistoryUntraceable(f"{n.rule}: several principal occurrences in one history")
        (p,) = principal
        if n.rule in IDENTITY_AXIOMS:
            self.log.identity += 1
            return self.partner
        if n.rule == "Atom":
            return self._atom(n, p)
        if p != (self.side,):
            raise HistoryUntraceable(f"{n.rule}: principal occurrence {p} is not displayed")
        rest = self._rebuild(n, prem_pats, conc_pat, sub, param) if param else n
        return self.cut_with(rest)

    def _atom(self, n: ProofTree, p: Path) -> ProofTree:
        if len(p) == 1:
            return self.cut_with(n)
        try:
            steps = display_search(n.conclusion, p, include_virtual=False)
        except SearchExhausted as e:
            raise HistoryUntraceable(f"cannot display the atom in {render(n.conclusion)}: {e}")
        shown = steps[-1].result
        if atom_schema(shown) is None:
            raise HistoryUntraceable(f"display of {render(n.conclusion)} leaves the atom form")
        self.log.atom_displays.append((render(n.conclusion),
                                       [f"{s.rule} {s.direction}" for s in steps]))
        # walk back up the display steps with the atom replaced
        track = follow_steps(n.conclusion, p, steps)
        cur = self.cut_with(ProofTree("Atom", shown))
        for k in range(len(steps) - 1, -1, -1):
            seq, path = track[k]
            cur = ProofTree(steps[k].rule, replace_at(seq, path, self.new), (cur,))
        return cur


def parametric_reduce(t: ProofTree, log: EliminationLog | None = None) -> ProofTree:
    """Push a cut up along the history of a parametric cut-term occurrence."""
    log = log if log is not None else EliminationLog()
    L, R = t.children
    if not _is_principal(R, 0):
        tracer = _Tracer(0, L, t.rule, log)
        out = tracer.trace(R, [(0,)])
    elif not _is_principal(L, 1):
        tracer = _Tracer(1, R, t.rule, log)
        out = tracer.trace(L, [(1,)])
    else:
        raise CutElimError("both cut-term occurrences are principal")
    if out.conclusion != t.conclusion:
        raise CutElimError(f"parametric step changed the endsequent to "
                           f"{render(out.conclusion)}")
    return out


def reduce_cut(t: ProofTree, log: EliminationLog | None = None) -> ProofTree:
    """One elimination step on a cut with cut-free premises."""
    log = log if log is not None else EliminationLog()
    L, R = t.children
    if L.rule in IDENTITY_AXIOMS or R.rule in IDENTITY_AXIOMS:
        log.identity += 1
        return principal_reduce(t)
    if _is_principal(L, 1) and _is_principal(R, 0):
        log.principal += 1
        return principal_reduce(t)
    log.parametric += 1
    return parametric_reduce(t, log)


def eliminate_cuts(t: ProofTree, fuel: int = DEFAULT_FUEL,
                   log: EliminationLog | None = None, on_step=None) -> ProofTree:
    """Remove every cut from ``t``; macros are expanded first.

    ``on_step(tree, path, before, after)`` is called after each rewrite, which
    lets tests assert per-step invariants.
    """
    log = log if log is not None else EliminationLog()
    t = expand_macros(t)
    while True:
        path = topmost_cut(t)
        if path is None:
            return t
        if log.steps >= fuel:
            raise FuelExhausted(t)
        log.steps += 1
        before = t.at(path)
        after = reduce_cut(before, log)
        t = t.replace(path, after)
        if on_step is not None:
            on_step(t, path, before, after)


def compose_cut(left: ProofTree, right: ProofTree) -> ProofTree:
    """Join ``x |- A`` and ``A |- y`` by a cut on A."""
    seq = Sequent(left.conclusion.lhs, right.conclusion.rhs)
    if left.conclusion.rhs != right.conclusion.lhs or not isinstance(left.conclusion.rhs, Leaf):
        raise CutElimError("premises do not share a cut formula")
    return ProofTree(f"Cut_{left.conclusion.tag}", seq, (left, right))
