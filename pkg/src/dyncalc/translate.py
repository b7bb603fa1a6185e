"""Translation of single-type EAK formulas into the multi-type language.

The single-type side is kept deliberately small: a :class:`DeakTerm` tree with
propositional connectives, agent and action modalities with their converses,
the precondition constant ``one(alpha)`` and, for the interaction axioms, the
relativised modalities ``dia(act(a, alpha), A)`` and ``box(act(a, alpha), A)``
whose multi-type image goes through ``a btri3 alpha``.

Surface syntax::

    p   top   bot   (A /\\ B)   (A \\/ B)   (A -> B)   (A <- B)   (A lsub B)   (A rsub B)
    dia(i, A)   box(i, A)   bdia(i, A)   bbox(i, A)   one(alpha)

where the index ``i`` is an agent, an action, or ``act(a, alpha)``.  Whether a
bare index names an agent or an action comes from the declaration table; an
undeclared index counts as an action when it is a Greek letter name and as an
agent otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Mapping

from lark import Lark, LarkError, Transformer
from lark.exceptions import VisitError

from .syntax import (
    Ag, Atom, BOT, Const, Fm, Fnc, OpApp, ParseError, TOP, _GREEK,
)

PROPOSITIONAL = ("/\\", "\\/", "->", "<-", "lsub", "rsub")
MODALITIES = ("dia", "box", "bdia", "bbox")

# modality name to (connective for an action index, connective for an agent index)
_MODAL_CONN = {
    "dia": ("tri0", "tri2"),
    "box": ("rarr0", "rarr2"),
    "bdia": ("btri0", "btri2"),
    "bbox": ("brarr0", "brarr2"),
}
# modalities indexed by act(a, alpha); the converses have no such image
_RELATIVE_CONN = {"dia": "tri1", "box": "rarr1"}


@dataclass(frozen=True)
class DeakTerm:
    """A single-type formula.

    ``op`` is ``"atom"``, ``"top"``, ``"bot"``, a propositional connective, one
    of ``"dia_ag" "box_ag" "bdia_ag" "bbox_ag" "dia_act" "box_act" "bdia_act"
    "bbox_act" "dia_rel" "box_rel"`` or ``"one"``.  ``index`` holds the atom
    name, the agent or action name, or the (agent, action) pair of a relative
    modality.
    """
    op: str
    args: tuple["DeakTerm", ...] = ()
    index: str | tuple[str, str] | None = None

    def __str__(self) -> str:
        return render_deak(self)


def atom(name: str) -> DeakTerm:
    return DeakTerm("atom", index=name)


def one(alpha: str) -> DeakTerm:
    return DeakTerm("one", index=alpha)


def modal(kind: str, index, body: DeakTerm, decls: Mapping[str, str] | None = None) -> DeakTerm:
    """Build ``kind(index, body)``, resolving the index as in the surface syntax."""
    if isinstance(index, tuple):
        if kind not in _RELATIVE_CONN:
            raise ParseError(f"{kind} does not take an act(...) index")
        return DeakTerm(f"{kind}_rel", (body,), index)
    suffix = "act" if index_kind(index, decls) == "fnc" else "ag"
    return DeakTerm(f"{kind}_{suffix}", (body,), index)


def index_kind(name: str, decls: Mapping[str, str] | None = None) -> str:
    """``"fnc"`` or ``"agent"`` for a modality index."""
    if decls and name in decls:
        kind = decls[name]
        if kind not in ("fnc", "agent"):
            raise ParseError(f"{name!r} is declared {kind}, not an agent or action")
        return kind
    return "fnc" if name in _GREEK else "agent"


# ---------------------------------------------------------------------------
# the translation

class NotInImage(ValueError):
    """The multi-type term is not the translation of any single-type formula."""


def pre_of(alpha: str):
    """The precondition of an action, ``alpha tri0 top``."""
    return OpApp("tri0", Atom(alpha, Fnc), TOP)


def from_deak(f: DeakTerm):
    """Multi-type image of a single-type formula."""
    op = f.op
    if op == "atom":
        return Atom(f.index, Fm)
    if op == "top":
        return TOP
    if op == "bot":
        return BOT
    if op in PROPOSITIONAL:
        return OpApp(op, from_deak(f.args[0]), from_deak(f.args[1]))
    if op == "one":
        return pre_of(f.index)
    kind, _, suffix = op.partition("_")
    body = from_deak(f.args[0])
    if suffix == "act":
        return OpApp(_MODAL_CONN[kind][0], Atom(f.index, Fnc), body)
    if suffix == "ag":
        return OpApp(_MODAL_CONN[kind][1], Atom(f.index, Ag), body)
    if suffix == "rel":
        agent, action = f.index
        label = OpApp("btri3", Atom(agent, Ag), Atom(action, Fnc))
        return OpApp(_RELATIVE_CONN[kind], label, body)
    raise ValueError(f"unknown formula constructor {op!r}")


_INVERSE = {}
for _kind, (_act, _ag) in _MODAL_CONN.items():
    _INVERSE[_act] = (_kind, "act", Fnc)
    _INVERSE[_ag] = (_kind, "ag", Ag)


def to_deak(t) -> DeakTerm:
    """Inverse of :func:`from_deak`; raises :class:`NotInImage` outside the image.

    ``alpha tri0 top`` is read back as ``one(alpha)``: the precondition constant
    and the diamond of ``top`` share one image.
    """
    if isinstance(t, Atom):
        if t.tag != Fm:
            raise NotInImage(f"{t.name} is not a proposition")
        return atom(t.name)
    if isinstance(t, Const):
        return DeakTerm(t.name)
    if not isinstance(t, OpApp) or t.tag != Fm:
        raise NotInImage(f"not a formula: {t!r}")
    if t.conn in PROPOSITIONAL:
        return DeakTerm(t.conn, (to_deak(t.left), to_deak(t.right)))
    if t.conn in _INVERSE:
        kind, suffix, want = _INVERSE[t.conn]
        if not (isinstance(t.left, Atom) and t.left.tag == want):
            raise NotInImage(f"{t.conn} with a compound index")
        if t.conn == "tri0" and t.right == TOP:
            return one(t.left.name)
        return DeakTerm(f"{kind}_{suffix}", (to_deak(t.right),), t.left.name)
    for kind, conn in _RELATIVE_CONN.items():
        if t.conn == conn:
            lab = t.left
            if not (isinstance(lab, OpApp) and lab.conn == "btri3"
                    and isinstance(lab.left, Atom) and isinstance(lab.right, Atom)):
                raise NotInImage(f"{conn} whose action is not a btri3 label")
            return DeakTerm(f"{kind}_rel", (to_deak(t.right),), (lab.left.name, lab.right.name))
    raise NotInImage(f"{t.conn} has no single-type counterpart")


def in_image(t) -> bool:
    try:
        to_deak(t)
    except NotInImage:
        return False
    return True


# ---------------------------------------------------------------------------
# surface syntax

_GRAMMAR = r"""
?expr: operand
     | operand BIN operand -> binary
?operand: NAME -> name
        | "(" expr ")"
        | MODAL "(" index "," expr ")" -> modal
        | "one" "(" NAME ")" -> one
?index: NAME -> name
      | "act" "(" NAME "," NAME ")" -> act
BIN.2: "/\\" | "\\/" | "->" | "<-" | /(lsub|rsub)(?![A-Za-z0-9_'])/
MODAL.2: /(dia|box|bdia|bbox)(?=\s*\()/
NAME: /[A-Za-z_][A-Za-z0-9_']*/
%import common.WS
%ignore WS
"""


class _Build(Transformer):
    def __init__(self, decls):
        super().__init__()
        self.decls = decls

    def name(self, items):
        return str(items[0])

    def act(self, items):
        return (str(items[0]), str(items[1]))

    def _formula(self, x):
        if isinstance(x, DeakTerm):
            return x
        if isinstance(x, tuple):
            raise ParseError("act(...) is only allowed as a modality index")
        if x in ("top", "bot"):
            return DeakTerm(x)
        if self.decls and self.decls.get(x, "prop") != "prop":
            raise ParseError(f"{x!r} is declared {self.decls[x]}, not a proposition")
        return atom(x)

    def binary(self, items):
        return DeakTerm(str(items[1]), (self._formula(items[0]), self._formula(items[2])))

    def modal(self, items):
        return modal(str(items[0]), items[1], self._formula(items[2]), self.decls)

    def one(self, items):
        name = str(items[0])
        if index_kind(name, self.decls) != "fnc":
            raise ParseError(f"one({name}) needs an action")
        return one(name)


@lru_cache(maxsize=None)
def _parser() -> Lark:
    return Lark(_GRAMMAR, start="expr", parser="lalr")


def parse_deak(text: str, decls: Mapping[str, str] | None = None) -> DeakTerm:
    """Parse the single-type surface syntax."""
    try:
        tree = _parser().parse(text)
    except LarkError as e:
        raise ParseError(f"cannot parse {text!r}: {str(e).splitlines()[0]}") from None
    b = _Build(decls)
    try:
        return b._formula(b.transform(tree))
    except VisitError as e:
        raise e.orig_exc from None


def render_deak(f: DeakTerm) -> str:
    op = f.op
    if op == "atom":
        return f.index
    if op in ("top", "bot"):
        return op
    if op == "one":
        return f"one({f.index})"
    if op in PROPOSITIONAL:
        return f"{_wrap(f.args[0])} {op} {_wrap(f.args[1])}"
    kind, _, suffix = op.partition("_")
    idx = f"act({f.index[0]}, {f.index[1]})" if suffix == "rel" else f.index
    return f"{kind}({idx}, {render_deak(f.args[0])})"


def _wrap(f: DeakTerm) -> str:
    s = render_deak(f)
    return f"({s})" if f.op in PROPOSITIONAL else s
