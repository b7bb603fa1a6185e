"""The rule catalog of the Dynamic Calculus, with schema matching and instantiation.

Every rule is a :class:`RuleSchema` whose premises and conclusion are sequents
over metavariables.  Structure metavariables are :class:`~dyncalc.syntax.SMeta`
nodes and operational ones are :class:`~dyncalc.syntax.OpMeta` nodes, so the
same parser that reads proof scripts also reads the catalog below.

Congruence between premise and conclusion occurrences is metavariable identity.
The only schema that cannot be written down once and for all is the atom axiom,
whose two contexts have arbitrary length; :func:`atom_schema` builds the
concrete schema that fits a given sequent.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Iterator, Mapping, NamedTuple

from .syntax import (
    ACT, AG, FM, FNC, CONNECTIVES, Act, Ag, Atom, Const, Fm, Fnc, I, Leaf, OpApp, OpMeta,
    ParseError, Path, SApp, SMeta, Sequent, Side, TypeTag, Unit, is_opterm, is_structure,
    parse_sequent, render, side_of,
)


class NoMatch(Exception):
    """A schema does not fit the given sequents; ``path`` is the first divergence."""

    def __init__(self, message: str, path: tuple = ()):
        super().__init__(message)
        self.path = path


class TypeViolation(NoMatch):
    """A metavariable would be bound to a node of the wrong type."""


class Constraint(NamedTuple):
    tag: TypeTag
    kind: str  # "structure", "operational-term" or "operational-atom"


Substitution = dict  # metavariable name -> Structure or OpTerm


@dataclass(frozen=True)
class RuleSchema:
    name: str
    premises: tuple[Sequent, ...]
    conclusion: Sequent
    invertible: bool = False
    # axiom, cut, structural, display, operational, modal, swap, macro
    kind: str = "structural"
    classical: bool = False
    macro: bool = False
    # macro schemas only: the primitive steps from premise to conclusion,
    # each a (rule name, conclusion pattern) pair
    expansion: tuple[tuple[str, Sequent], ...] = ()
    # set for the dynamic atom schema and for its placeholder in the catalog
    atom: bool = False

    @property
    def is_axiom(self) -> bool:
        return not self.premises

    @property
    def is_display(self) -> bool:
        return self.kind == "display"

    @property
    def virtual(self) -> bool:
        return any(CONNECTIVES[n].virtual for n in _connectives(self.conclusion))

    @property
    def metas(self) -> dict[str, object]:
        out: dict[str, object] = {}
        for seq in (*self.premises, self.conclusion):
            for node in _meta_nodes(seq):
                out.setdefault(node.name, node)
        return out

    @property
    def constraints(self) -> dict[str, Constraint]:
        out = {}
        for name, node in self.metas.items():
            if isinstance(node, SMeta):
                out[name] = Constraint(node.tag, "structure")
            else:
                out[name] = Constraint(node.tag, "operational-atom" if node.atomic
                                       else "operational-term")
        return out

    @property
    def principal(self) -> frozenset[Path]:
        """Conclusion paths of the operational terms the rule introduces."""
        return frozenset(p for p, n in pattern_leaves(self.conclusion))

    def congruence(self) -> dict[str, tuple[list[Path], list[tuple[int, Path]]]]:
        """For each structure metavariable: conclusion paths and (premise, path) pairs."""
        out: dict[str, tuple[list[Path], list[tuple[int, Path]]]] = {}
        for p, m in meta_paths(self.conclusion):
            out.setdefault(m.name, ([], []))[0].append(p)
        for i, prem in enumerate(self.premises):
            for p, m in meta_paths(prem):
                out.setdefault(m.name, ([], []))[1].append((i, p))
        return out

    def __str__(self) -> str:
        prem = "   ".join(render(p) for p in self.premises) or "(axiom)"
        line = "====" if self.invertible else "----"
        return f"{self.name}\n  {prem}\n  {line}\n  {render(self.conclusion)}"


@dataclass(frozen=True)
class RuleInstance:
    schema: str
    premises: tuple[Sequent, ...]
    conclusion: Sequent
    substitution: Mapping[str, object] = field(compare=False)


# ---------------------------------------------------------------------------
# traversal of patterns

def _connectives(seq: Sequent) -> Iterator[str]:
    def go(n):
        if isinstance(n, (SApp, OpApp)):
            yield n.conn
            yield from go(n.left)
            yield from go(n.right)
        elif isinstance(n, Leaf):
            yield from go(n.term)
    yield from go(seq.lhs)
    yield from go(seq.rhs)


def _meta_nodes(node) -> Iterator[object]:
    if isinstance(node, Sequent):
        yield from _meta_nodes(node.lhs)
        yield from _meta_nodes(node.rhs)
    elif isinstance(node, (SMeta, OpMeta)):
        yield node
    elif isinstance(node, Leaf):
        yield from _meta_nodes(node.term)
    elif isinstance(node, (SApp, OpApp)):
        yield from _meta_nodes(node.left)
        yield from _meta_nodes(node.right)


def _walk_pattern(seq: Sequent) -> Iterator[tuple[Path, object]]:
    def go(n, path):
        yield path, n
        if isinstance(n, SApp):
            yield from go(n.left, path + (0,))
            yield from go(n.right, path + (1,))
    yield from go(seq.lhs, (0,))
    yield from go(seq.rhs, (1,))


def meta_paths(seq: Sequent) -> list[tuple[Path, SMeta]]:
    """Paths of the structure metavariables of a pattern sequent."""
    return [(p, n) for p, n in _walk_pattern(seq) if isinstance(n, SMeta)]


def pattern_leaves(seq: Sequent) -> list[tuple[Path, Leaf]]:
    """Paths of the operational leaves of a pattern sequent."""
    return [(p, n) for p, n in _walk_pattern(seq) if isinstance(n, Leaf)]


def locate(pattern: Sequent, path: Path) -> tuple[str, object, Path]:
    """Say what part of a pattern covers ``path``.

    Returns ``("meta", SMeta, rest)`` when the path runs into a structure
    metavariable (``rest`` is the path below it), ``("leaf", Leaf, ())`` when it
    lands on an operational leaf, and ``("node", node, ())`` for a unit or a
    structural connective of the pattern itself.
    """
    node = pattern.side(path[0])
    for k, i in enumerate(path[1:], start=1):
        if isinstance(node, SMeta):
            return "meta", node, path[k:]
        if not isinstance(node, SApp):
            raise KeyError(path)
        node = node.left if i == 0 else node.right
    if isinstance(node, SMeta):
        return "meta", node, ()
    if isinstance(node, Leaf):
        return "leaf", node, ()
    return "node", node, ()


# ---------------------------------------------------------------------------
# matching and instantiation

def _bind(sub: dict, name: str, value, path) -> None:
    bound = sub.get(name)
    if bound is None:
        sub[name] = value
    elif bound != value:
        raise NoMatch(f"{name} bound to {render(bound)} and {render(value)}", path)


def _match_op(pat, term, sub: dict, path) -> None:
    if isinstance(pat, OpMeta):
        if not is_opterm(term) or term.tag != pat.tag:
            raise TypeViolation(f"{pat.name} expects {pat.tag}", path)
        if pat.atomic and not isinstance(term, Atom):
            raise NoMatch(f"{pat.name} must be atomic, got {render(term)}", path)
        _bind(sub, pat.name, term, path)
    elif isinstance(pat, OpApp):
        if not isinstance(term, OpApp) or term.conn != pat.conn:
            raise NoMatch(f"expected {pat.conn}, got {render(term)}", path)
        _match_op(pat.left, term.left, sub, path)
        _match_op(pat.right, term.right, sub, path)
    elif pat != term:
        raise NoMatch(f"expected {render(pat)}, got {render(term)}", path)


def _match(pat, node, sub: dict, path: Path) -> None:
    if isinstance(pat, SMeta):
        if not is_structure(node) or node.tag != pat.tag:
            raise TypeViolation(f"{pat.name} expects {pat.tag}, got {node.tag}", path)
        _bind(sub, pat.name, node, path)
    elif isinstance(pat, Leaf):
        if not isinstance(node, Leaf):
            raise NoMatch(f"expected a formula, got {render(node)}", path)
        _match_op(pat.term, node.term, sub, path)
    elif isinstance(pat, SApp):
        if not isinstance(node, SApp) or node.conn != pat.conn:
            raise NoMatch(f"expected {pat.conn}, got {render(node)}", path)
        _match(pat.left, node.left, sub, path + (0,))
        _match(pat.right, node.right, sub, path + (1,))
    elif pat != node:
        raise NoMatch(f"expected {render(pat)}, got {render(node)}", path)


def _match_seq(pat: Sequent, seq: Sequent, sub: dict, where) -> None:
    _match(pat.lhs, seq.lhs, sub, (*where, 0))
    _match(pat.rhs, seq.rhs, sub, (*where, 1))


def match_pattern(pattern: Sequent, seq: Sequent, sub: dict | None = None) -> dict:
    """Match one pattern sequent against a concrete sequent."""
    sub = {} if sub is None else sub
    _match_seq(pattern, seq, sub, ())
    return sub


def match_rule(schema: RuleSchema, premises: Iterable[Sequent],
               conclusion: Sequent) -> tuple[Substitution, str]:
    """Match a schema against concrete sequents; return the substitution and
    the direction used ("down", or "up" for an invertible rule read upside down).

    Paths in errors start with the premise index (or ``-1`` for the conclusion).
    """
    premises = tuple(premises)
    if schema.atom:
        schema = atom_schema(conclusion)
        if schema is None:
            raise NoMatch("not an atom axiom", (-1,))
    if len(premises) != len(schema.premises):
        raise NoMatch(f"{schema.name} takes {len(schema.premises)} premises, "
                      f"got {len(premises)}", ())
    first: NoMatch | None = None
    directions = [("down", schema.premises, schema.conclusion)]
    if schema.invertible:
        directions.append(("up", (schema.conclusion,), schema.premises[0]))
    for direction, pprem, pconc in directions:
        sub: dict = {}
        try:
            _match_seq(pconc, conclusion, sub, (-1,))
            for i, (p, s) in enumerate(zip(pprem, premises)):
                _match_seq(p, s, sub, (i,))
        except NoMatch as e:
            first = first or e
            continue
        return sub, direction
    assert first is not None
    raise first


def match_instance(schema: RuleSchema, premises: Iterable[Sequent],
                   conclusion: Sequent) -> Substitution:
    return match_rule(schema, premises, conclusion)[0]


def substitute(pat, sub: Mapping[str, object]):
    """Instantiate a pattern (sequent, structure or operational term)."""
    if isinstance(pat, Sequent):
        return Sequent(substitute(pat.lhs, sub), substitute(pat.rhs, sub))
    if isinstance(pat, (SMeta, OpMeta)):
        if pat.name not in sub:
            raise TypeViolation(f"no binding for {pat.name}")
        value = sub[pat.name]
        if value.tag != pat.tag:
            raise TypeViolation(f"{pat.name} expects {pat.tag}, got {value.tag}")
        if isinstance(pat, OpMeta) and pat.atomic and not isinstance(value, Atom):
            raise TypeViolation(f"{pat.name} must be atomic")
        return value
    if isinstance(pat, Leaf):
        return Leaf(substitute(pat.term, sub))
    if isinstance(pat, SApp):
        return SApp(pat.conn, substitute(pat.left, sub), substitute(pat.right, sub))
    if isinstance(pat, OpApp):
        return OpApp(pat.conn, substitute(pat.left, sub), substitute(pat.right, sub))
    return pat


def apply_schema(schema: RuleSchema, sub: Mapping[str, object]) -> RuleInstance:
    """Instantiate a schema downward; fails if ``sub`` is partial or ill-typed."""
    missing = set(schema.metas) - set(sub)
    if missing:
        raise TypeViolation(f"{schema.name}: unbound {', '.join(sorted(missing))}")
    prems = tuple(substitute(p, sub) for p in schema.premises)
    return RuleInstance(schema.name, prems, substitute(schema.conclusion, sub), dict(sub))


# ---------------------------------------------------------------------------
# the atom axiom

_ATOM_LEFT = ("STRI0", "SBTRI0")
_ATOM_RIGHT = ("SRARR0", "SBRARR0")


def _chain(node, conns):
    ctx = []
    while isinstance(node, SApp) and node.conn in conns and node.left.tag == FNC:
        ctx.append((node.conn, node.left))
        node = node.right
    return ctx, node


def atom_schema(seq: Sequent) -> RuleSchema | None:
    """The concrete atom schema whose conclusion has the shape of ``seq``.

    The antecedent must be ``F1 c1 (F2 c2 (... p))`` with each ``ck`` one of
    STRI0/SBTRI0, and the consequent ``G1 d1 (... p)`` with each ``dk`` one of
    SRARR0/SBRARR0, for the same atomic proposition ``p``.  The ``Fk`` and
    ``Gk`` become structure metavariables of type FNC.
    """
    left, lp = _chain(seq.lhs, _ATOM_LEFT)
    right, rp = _chain(seq.rhs, _ATOM_RIGHT)
    if not (isinstance(lp, Leaf) and isinstance(lp.term, Atom) and lp.term.tag == Fm):
        return None
    if lp != rp:
        return None
    p = Leaf(OpMeta("p", Fm, atomic=True))

    def build(ctx, prefix):
        node = p
        for k in range(len(ctx), 0, -1):
            node = SApp(ctx[k - 1][0], SMeta(f"{prefix}{k}", FNC), node)
        return node

    return RuleSchema("Atom", (), Sequent(build(left, "F"), build(right, "G")),
                      kind="axiom", atom=True)


def atom_context(seq: Sequent) -> tuple[list[tuple[str, object]], list[tuple[str, object]]]:
    """The (connective, FNC structure) contexts of an atom axiom instance."""
    return _chain(seq.lhs, _ATOM_LEFT)[0], _chain(seq.rhs, _ATOM_RIGHT)[0]


# ---------------------------------------------------------------------------
# the catalog

_FIRST = {0: FNC, 1: ACT, 2: AG, 3: AG}
_SECOND = {0: FM, 1: FM, 2: FM, 3: FNC}
_RESULT = {0: FM, 1: FM, 2: FM, 3: ACT}


def meta_decls(spec: str) -> dict[str, object]:
    """Declaration table for schema metavariables.

    ``spec`` is a list of groups such as ``"X Y Z W:FM A B:Fm p:Fm!"``; a
    structural tag gives structure metavariables, an operational tag gives
    operational ones and a trailing ``!`` restricts them to atoms.
    """
    decls: dict[str, object] = {}
    for group in re.findall(r"([^:]+):\s*(\w+!?)", spec):
        names, tag = group[0].split(), group[1]
        atomic = tag.endswith("!")
        tt = TypeTag(tag.rstrip("!"))
        for n in names:
            decls[n] = SMeta(n, tt) if tt.is_structural else OpMeta(n, tt, atomic)
    return decls


class _Builder:
    def __init__(self):
        self.rules: list[RuleSchema] = []

    def add(self, name, premises, conclusion, decls, **flags) -> RuleSchema:
        if isinstance(decls, str):
            decls = meta_decls(decls)
        prem = tuple(parse_sequent(p, decls) for p in premises)
        conc = parse_sequent(conclusion, decls)
        schema = RuleSchema(name, prem, conc, **flags)
        self.rules.append(schema)
        return schema


_FM4 = "X Y Z W:FM A B:Fm"


def _hetero_decls(i: int) -> str:
    x, y, z = _FIRST[i], _SECOND[i], _RESULT[i]
    return (f"x:{x} y:{y} z:{z} a:{x.operational} b:{y.operational} "
            f"B:Fm Y Z:FM")


def _build_catalog() -> list[RuleSchema]:
    b = _Builder()
    ax = dict(kind="axiom")

    # axioms
    b.add("Id", [], "p |- p", "p:Fm!", **ax)
    b.add("AgId", [], "a |- a", "a:Ag!", **ax)
    b.add("FncId", [], "f |- f", "f:Fnc!", **ax)
    b.add("BotL", [], "bot |- I", "", **ax)
    b.add("TopR", [], "I |- top", "", **ax)
    b.rules.append(RuleSchema("Atom", (), parse_sequent("p |- p", meta_decls("p:Fm!")),
                              kind="axiom", atom=True))

    # cuts, one per type
    for tag in (AG, FNC, ACT, FM):
        b.add(f"Cut_{tag}", ["x |- a", "a |- y"], "x |- y",
              f"x y:{tag} a:{tag.operational}", kind="cut")

    # structural rules on formulas
    inv = dict(invertible=True)
    b.add("I1_L", ["X |- Y"], "I |- Y < X", _FM4, **inv)
    b.add("I1_R", ["X |- Y"], "X < Y |- I", _FM4, **inv)
    b.add("I2_L", ["X |- Y"], "I |- X > Y", _FM4, **inv)
    b.add("I2_R", ["X |- Y"], "Y > X |- I", _FM4, **inv)
    b.add("IW_L", ["I |- X"], "Y |- X", _FM4)
    b.add("IW_R", ["X |- I"], "X |- Y", _FM4)
    b.add("W1_L", ["X |- Z"], "Y |- Z < X", _FM4)
    b.add("W1_R", ["X |- Z"], "X < Z |- Y", _FM4)
    b.add("W2_L", ["X |- Z"], "Y |- X > Z", _FM4)
    b.add("W2_R", ["X |- Z"], "Z > X |- Y", _FM4)
    b.add("C_L", ["X ; X |- Y"], "X |- Y", _FM4)
    b.add("C_R", ["Y |- X ; X"], "Y |- X", _FM4)
    b.add("E_L", ["Y ; X |- Z"], "X ; Y |- Z", _FM4)
    b.add("E_R", ["Z |- X ; Y"], "Z |- Y ; X", _FM4)
    b.add("A_L", ["X ; (Y ; Z) |- W"], "(X ; Y) ; Z |- W", _FM4)
    b.add("A_R", ["W |- (Z ; Y) ; X"], "W |- Z ; (Y ; X)", _FM4)

    disp = dict(invertible=True, kind="display")
    b.add(";/<", ["X ; Y |- Z"], "X |- Z < Y", _FM4, **disp)
    b.add("</;", ["Z |- X ; Y"], "Z < Y |- X", _FM4, **disp)
    b.add(";/>", ["X ; Y |- Z"], "Y |- X > Z", _FM4, **disp)
    b.add(">/;", ["Z |- X ; Y"], "X > Z |- Y", _FM4, **disp)

    b.add("Gri_L", ["X > (Y ; Z) |- W"], "(X > Y) ; Z |- W", _FM4, invertible=True,
          classical=True)
    b.add("Gri_R", ["W |- X > (Y ; Z)"], "W |- (X > Y) ; Z", _FM4, invertible=True,
          classical=True)

    # operational rules on formulas
    op = dict(kind="operational")
    b.add("bot_R", ["X |- I"], "X |- bot", _FM4, **op)
    b.add("top_L", ["I |- X"], "top |- X", _FM4, **op)
    b.add("and_L", ["A ; B |- Z"], "A /\\ B |- Z", _FM4, **op)
    b.add("and_R", ["X |- A", "Y |- B"], "X ; Y |- A /\\ B", _FM4, **op)
    b.add("or_L", ["A |- X", "B |- Y"], "A \\/ B |- X ; Y", _FM4, **op)
    b.add("or_R", ["Z |- A ; B"], "Z |- A \\/ B", _FM4, **op)
    b.add("limp_L", ["B |- Y", "X |- A"], "B <- A |- Y < X", _FM4, **op)
    b.add("limp_R", ["Z |- B < A"], "Z |- B <- A", _FM4, **op)
    b.add("lsub_L", ["B < A |- Z"], "B lsub A |- Z", _FM4, **op)
    b.add("lsub_R", ["Y |- B", "A |- X"], "Y < X |- B lsub A", _FM4, **op)
    b.add("imp_L", ["X |- A", "B |- Y"], "A -> B |- X > Y", _FM4, **op)
    b.add("imp_R", ["Z |- A > B"], "Z |- A -> B", _FM4, **op)
    b.add("rsub_L", ["A > B |- Z"], "A rsub B |- Z", _FM4, **op)
    b.add("rsub_R", ["A |- X", "Y |- B"], "X > Y |- A rsub B", _FM4, **op)

    # heterogeneous operational rules
    for i in range(4):
        d = _hetero_decls(i)
        for tri, stri in (("tri", "STRI"), ("btri", "SBTRI")):
            b.add(f"{tri}{i}_L", [f"a {stri}{i} b |- z"], f"a {tri}{i} b |- z", d, **op)
            b.add(f"{tri}{i}_R", ["x |- a", "y |- b"], f"x {stri}{i} y |- a {tri}{i} b",
                  d, **op)
    for i in range(3):
        d = _hetero_decls(i)
        for arr, sarr in (("rarr", "SRARR"), ("brarr", "SBRARR")):
            b.add(f"{arr}{i}_L", ["x |- a", "B |- Y"], f"a {arr}{i} B |- x {sarr}{i} Y",
                  d, **op)
            b.add(f"{arr}{i}_R", [f"Z |- a {sarr}{i} B"], f"Z |- a {arr}{i} B", d, **op)

    # heterogeneous display postulates
    for i in range(3):
        d = _hetero_decls(i)
        b.add(f"STRI{i}/SBRARR{i}", [f"x STRI{i} y |- z"], f"y |- x SBRARR{i} z", d, **disp)
        b.add(f"SBTRI{i}/SRARR{i}", [f"x SBTRI{i} y |- z"], f"y |- x SRARR{i} z", d, **disp)
    d = _hetero_decls(1)
    b.add("STRI1/SBLARR1", ["x STRI1 y |- z"], "x |- z SBLARR1 y", d, **disp)
    b.add("SBTRI1/SLARR1", ["x SBTRI1 y |- z"], "x |- z SLARR1 y", d, **disp)
    for i in (0, 2, 3):
        d = _hetero_decls(i)
        b.add(f"STRI{i}/VBLARR{i}", [f"x STRI{i} y |- z"], f"x |- z VBLARR{i} y", d, **disp)
        b.add(f"SBTRI{i}/VLARR{i}", [f"x SBTRI{i} y |- z"], f"x |- z VLARR{i} y", d, **disp)
    d = _hetero_decls(3)
    b.add("STRI3/VBRARR3", ["x STRI3 y |- z"], "y |- x VBRARR3 z", d, **disp)
    b.add("SBTRI3/VRARR3", ["x SBTRI3 y |- z"], "y |- x VRARR3 z", d, **disp)

    # necessitation, conjugation, Fischer Servi and monotonicity
    modal = dict(kind="modal")
    for i in range(3):
        d = f"x:{_FIRST[i]} Y Z W:FM"
        b.add(f"nec{i}_STRI", ["I |- W"], f"x STRI{i} I |- W", d, **modal)
        b.add(f"nec{i}_SBTRI", ["I |- W"], f"x SBTRI{i} I |- W", d, **modal)
        b.add(f"nec{i}_SRARR", ["W |- I"], f"W |- x SRARR{i} I", d, **modal)
        b.add(f"nec{i}_SBRARR", ["W |- I"], f"W |- x SBRARR{i} I", d, **modal)
        b.add(f"conj{i}_STRI", [f"x STRI{i} ((x SBTRI{i} Y) ; Z) |- W"],
              f"Y ; (x STRI{i} Z) |- W", d, **modal)
        b.add(f"conj{i}_SBTRI", [f"x SBTRI{i} ((x STRI{i} Y) ; Z) |- W"],
              f"Y ; (x SBTRI{i} Z) |- W", d, **modal)
        b.add(f"conj{i}_SRARR", [f"W |- x SRARR{i} ((x SBRARR{i} Y) ; Z)"],
              f"W |- Y ; (x SRARR{i} Z)", d, **modal)
        b.add(f"conj{i}_SBRARR", [f"W |- x SBRARR{i} ((x SRARR{i} Y) ; Z)"],
              f"W |- Y ; (x SBRARR{i} Z)", d, **modal)
        b.add(f"FS{i}_STRI", [f"(x SRARR{i} Y) > (x STRI{i} Z) |- W"],
              f"x STRI{i} (Y > Z) |- W", d, **modal)
        b.add(f"FS{i}_SBTRI", [f"(x SBRARR{i} Y) > (x SBTRI{i} Z) |- W"],
              f"x SBTRI{i} (Y > Z) |- W", d, **modal)
        b.add(f"FS{i}_SRARR", [f"W |- (x STRI{i} Y) > (x SRARR{i} Z)"],
              f"W |- x SRARR{i} (Y > Z)", d, **modal)
        b.add(f"FS{i}_SBRARR", [f"W |- (x SBTRI{i} Y) > (x SBRARR{i} Z)"],
              f"W |- x SBRARR{i} (Y > Z)", d, **modal)
        b.add(f"mon{i}_STRI", [f"(x STRI{i} Y) ; (x STRI{i} Z) |- W"],
              f"x STRI{i} (Y ; Z) |- W", d, **modal)
        b.add(f"mon{i}_SBTRI", [f"(x SBTRI{i} Y) ; (x SBTRI{i} Z) |- W"],
              f"x SBTRI{i} (Y ; Z) |- W", d, **modal)
        b.add(f"mon{i}_SRARR", [f"W |- (x SRARR{i} Y) ; (x SRARR{i} Z)"],
              f"W |- x SRARR{i} (Y ; Z)", d, **modal)
        b.add(f"mon{i}_SBRARR", [f"W |- (x SBRARR{i} Y) ; (x SBRARR{i} Z)"],
              f"W |- x SBRARR{i} (Y ; Z)", d, **modal)

    # interaction between actions and agents
    sw = dict(kind="swap")
    d = "a:AG F:FNC X Y:FM"
    b.add("swap-out_L", ["(a SBTRI3 F) SBTRI1 (a SBTRI2 X) |- Y"],
          "a SBTRI2 (F SBTRI0 X) |- Y", d, **sw)
    b.add("swap-out_R", ["X |- (a SBTRI3 F) SBRARR1 (a SBRARR2 Y)"],
          "X |- a SBRARR2 (F SBRARR0 Y)", d, **sw)
    b.add("swap-in_L", ["a SBTRI2 (F SBTRI0 X) |- Y"],
          "(a SBTRI3 F) SBTRI1 (a SBTRI2 ((F STRI0 I) ; X)) |- Y", d, **sw)
    b.add("swap-in_R", ["X |- a SBRARR2 (F SBRARR0 Y)"],
          "X |- (a SBTRI3 F) SBRARR1 (a SBRARR2 ((F STRI0 I) > Y))", d, **sw)
    b.add("balance", ["X |- Y"], "F STRI0 X |- F SRARR0 Y", d, **sw)

    # derived rules, expanded by the checker
    for name, prem, conc, steps in _MACROS:
        decls = meta_decls("F:FNC X Y:FM")
        expansion = tuple((r, parse_sequent(s, decls)) for r, s in steps)
        b.add(name, [prem], conc, decls, kind="macro", macro=True, expansion=expansion)
    return b.rules


_COMP_L_STEPS = [
    ("STRI0/SBRARR0", "F SBTRI0 X |- F SBRARR0 Y"),
    ("I2_L", "I |- (F SBTRI0 X) > (F SBRARR0 Y)"),
    (";/>", "(F SBTRI0 X) ; I |- F SBRARR0 Y"),
    ("STRI0/SBRARR0", "F STRI0 ((F SBTRI0 X) ; I) |- Y"),
    ("conj0_STRI", "X ; (F STRI0 I) |- Y"),
    ("E_L", "(F STRI0 I) ; X |- Y"),
]

_MACROS = [
    ("reduce_L", "(F STRI0 I) ; (F STRI0 X) |- Y", "F STRI0 X |- Y", [
        ("mon0_STRI", "F STRI0 (I ; X) |- Y"),
        ("STRI0/SBRARR0", "I ; X |- F SBRARR0 Y"),
        (";/<", "I |- (F SBRARR0 Y) < X"),
        ("I1_L", "X |- F SBRARR0 Y"),
        ("STRI0/SBRARR0", "F STRI0 X |- Y"),
    ]),
    ("reduce_R", "Y |- (F STRI0 I) > (F SRARR0 X)", "Y |- F SRARR0 X", [
        ("FS0_SRARR", "Y |- F SRARR0 (I > X)"),
        ("SBTRI0/SRARR0", "F SBTRI0 Y |- I > X"),
        (";/>", "I ; (F SBTRI0 Y) |- X"),
        (";/<", "I |- X < (F SBTRI0 Y)"),
        ("I1_L", "F SBTRI0 Y |- X"),
        ("SBTRI0/SRARR0", "Y |- F SRARR0 X"),
    ]),
    ("comp_L", "F STRI0 (F SBTRI0 X) |- Y", "(F STRI0 I) ; X |- Y", _COMP_L_STEPS),
    ("comp_R", "X |- F SRARR0 (F SBRARR0 Y)", "X |- (F STRI0 I) > Y", [
        ("SBTRI0/SRARR0", "F SBTRI0 X |- F SBRARR0 Y"),
        ("STRI0/SBRARR0", "F STRI0 (F SBTRI0 X) |- Y"),
        *_COMP_L_STEPS,
        (";/>", "X |- (F STRI0 I) > Y"),
    ]),
]


@lru_cache(maxsize=None)
def _catalog(base: str) -> tuple[RuleSchema, ...]:
    if base not in ("intuitionistic", "classical"):
        raise ValueError(f"unknown base {base!r}")
    rules = _build_catalog()
    if base == "intuitionistic":
        rules = [r for r in rules if not r.classical]
    return tuple(rules)


def catalog(base: str = "intuitionistic") -> list[RuleSchema]:
    """The full rule catalog; ``base="classical"`` adds the Grishin rules."""
    return list(_catalog(base))


@lru_cache(maxsize=None)
def rule_table(base: str = "intuitionistic") -> dict[str, RuleSchema]:
    return {r.name: r for r in _catalog(base)}


def display_postulates(base: str = "intuitionistic") -> list[RuleSchema]:
    return [r for r in _catalog(base) if r.is_display]


def get_rule(name: str, base: str = "classical") -> RuleSchema:
    try:
        return rule_table(base)[name]
    except KeyError:
        raise KeyError(f"unknown rule {name!r}") from None


# ---------------------------------------------------------------------------
# rule files

def load_rules(text: str, base: str | None = None) -> list[RuleSchema]:
    """Read schemas from the textual rule format.

    A file holds an optional ``base intuitionistic|classical`` line and rule
    blocks::

        rule NAME [invertible] [kind=KIND]
          meta X Y:FM A:Fm
          premise X |- A
          conclusion X |- Y
        end

    ``meta`` lines may appear anywhere inside a block and rebind names for the
    lines that follow.  When a base is given, the result is that catalog with
    same-named schemas replaced by the ones in the file and new ones appended.
    """
    schemas: list[RuleSchema] = []
    header_base = None
    cur: dict | None = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        word, _, rest = line.partition(" ")
        rest = rest.strip()
        try:
            if word == "base" and cur is None:
                header_base = rest
            elif word == "rule" and cur is None:
                parts = rest.split()
                if not parts:
                    raise ParseError("rule needs a name")
                flags = {"invertible": False, "kind": "structural"}
                for p in parts[1:]:
                    if p == "invertible":
                        flags["invertible"] = True
                    elif p.startswith("kind="):
                        flags["kind"] = p[5:]
                    elif p == "classical":
                        flags["classical"] = True
                    else:
                        raise ParseError(f"unknown rule flag {p!r}")
                cur = {"name": parts[0], "flags": flags, "decls": {}, "premises": [],
                       "conclusion": None}
            elif cur is None:
                raise ParseError(f"unexpected {word!r} outside a rule block")
            elif word == "meta":
                cur["decls"] = {**cur["decls"], **meta_decls(rest)}
            elif word == "premise":
                cur["premises"].append(parse_sequent(rest, cur["decls"]))
            elif word == "conclusion":
                cur["conclusion"] = parse_sequent(rest, cur["decls"])
            elif word == "end":
                if cur["conclusion"] is None:
                    raise ParseError(f"rule {cur['name']} has no conclusion")
                schemas.append(RuleSchema(cur["name"], tuple(cur["premises"]),
                                          cur["conclusion"], **cur["flags"]))
                cur = None
            else:
                raise ParseError(f"unknown keyword {word!r}")
        except ParseError as e:
            raise ParseError(f"line {lineno}: {e}") from None
    if cur is not None:
        raise ParseError(f"rule {cur['name']} is not closed with 'end'")
    base = base or header_base
    if base is None:
        return schemas
    replaced = {s.name: s for s in schemas}
    out = [replaced.pop(r.name, r) for r in _catalog(base)]
    return out + list(replaced.values())


def _meta_line(schema: RuleSchema) -> str:
    groups: dict[str, list[str]] = {}
    for name, node in schema.metas.items():
        tag = str(node.tag) + ("!" if isinstance(node, OpMeta) and node.atomic else "")
        groups.setdefault(tag, []).append(name)
    return " ".join(f"{' '.join(ns)}:{t}" for t, ns in groups.items())


def dump_rules(schemas: Iterable[RuleSchema]) -> str:
    """Write schemas in the format read by :func:`load_rules` (macros and the
    atom placeholder are skipped; their content is not a plain schema)."""
    out = []
    for s in schemas:
        if s.macro or s.atom:
            continue
        flags = (" invertible" if s.invertible else "") + f" kind={s.kind}"
        flags += " classical" if s.classical else ""
        out.append(f"rule {s.name}{flags}")
        if s.metas:
            out.append(f"  meta {_meta_line(s)}")
        out.extend(f"  premise {render(p)}" for p in s.premises)
        out.append(f"  conclusion {render(s.conclusion)}")
        out.append("end")
    return "\n".join(out) + "\n"


def sides_of_metas(seq: Sequent) -> dict[str, set[Side]]:
    """Side of every structure metavariable occurrence in a pattern."""
    out: dict[str, set[Side]] = {}
    for p, m in meta_paths(seq):
        out.setdefault(m.name, set()).add(side_of(seq, p))
    return out


__all__ = [
    "Constraint", "NoMatch", "RuleInstance", "RuleSchema", "Substitution", "TypeViolation",
    "apply_schema", "atom_context", "atom_schema", "catalog", "display_postulates",
    "dump_rules", "get_rule", "load_rules", "locate", "match_instance", "match_pattern", "match_rule",
    "meta_decls", "meta_paths", "pattern_leaves", "rule_table", "sides_of_metas",
    "substitute",
]
