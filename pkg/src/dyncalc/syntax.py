"""Typed term and structure languages of the Dynamic Calculus.

Operational terms live in four types (Fm, Fnc, Act, Ag) and structures in the
matching structural types (FM, FNC, ACT, AG).  Every binary connective, on
either layer, is written infix and nesting needs explicit parentheses.

Paths address occurrences inside a sequent: the first index selects the side
(0 for the antecedent, 1 for the consequent) and each further index selects
the left (0) or right (1) argument of a binary structural node.  Paths never
descend into operational terms, because those are leaves of the structure.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator, Mapping, Union

from lark import Lark, LarkError, Transformer


class TypeTag(enum.Enum):
    Fm = "Fm"
    Fnc = "Fnc"
    Act = "Act"
    Ag = "Ag"
    FM = "FM"
    FNC = "FNC"
    ACT = "ACT"
    AG = "AG"

    @property
    def is_structural(self) -> bool:
        return self.value.isupper()

    @property
    def structural(self) -> "TypeTag":
        return TypeTag(self.value.upper())

    @property
    def operational(self) -> "TypeTag":
        return _OP_OF[self.value.upper()]

    def __str__(self) -> str:
        return self.value


_OP_OF = {"FM": TypeTag.Fm, "FNC": TypeTag.Fnc, "ACT": TypeTag.Act, "AG": TypeTag.Ag}

Fm, Fnc, Act, Ag = TypeTag.Fm, TypeTag.Fnc, TypeTag.Act, TypeTag.Ag
FM, FNC, ACT, AG = TypeTag.FM, TypeTag.FNC, TypeTag.ACT, TypeTag.AG


class Side(enum.Enum):
    PRECEDENT = "precedent"
    SUCCEDENT = "succedent"

    def flip(self) -> "Side":
        return Side.SUCCEDENT if self is Side.PRECEDENT else Side.PRECEDENT


# ---------------------------------------------------------------------------
# connective table

@dataclass(frozen=True)
class Connective:
    name: str
    structural: bool
    args: tuple[TypeTag, TypeTag]
    result: TypeTag
    polarity: tuple[int, int] = (1, 1)
    # "triangle" and "arrow" drive severity; "" for the Fm connectives
    family: str = ""
    latex: str = ""
    virtual: bool = False


_INDEX_FIRST = {0: Fnc, 1: Act, 2: Ag}

_LATEX_TRI = r"\raisebox{-0.39ex}{\mbox{\,\TriangleUp\,}}"
_LATEX_BTRI = r"\raisebox{-0.39ex}{\mbox{\,\FilledTriangleUp\,}}"
_LATEX_RARR = r"\mbox{\,\raisebox{-0.39ex}{\rotatebox[origin=c]{-90}{\TriangleUp}}\,}"
_LATEX_BRARR = r"\mbox{\,\raisebox{-0.39ex}{\rotatebox[origin=c]{-90}{\FilledTriangleUp}}\,}"
_LATEX_LARR = r"\mbox{\,\raisebox{-0.39ex}{\rotatebox[origin=c]{90}{\TriangleUp}}\,}"
_LATEX_BLARR = r"\mbox{\,\raisebox{-0.39ex}{\rotatebox[origin=c]{90}{\FilledTriangleUp}}\,}"
_LATEX_VLARR = r"\mbox{\,\rotatebox[origin=c]{-3.9999}{\TriangleLeft}\raisebox{0.43ex}{$\mkern-1.3mu\thicksim$}\,}"
_LATEX_VBLARR = r"\mbox{\,\FilledTriangleLeft\raisebox{0.43ex}{$\mkern-1.3mu\thicksim$}\,}"
_LATEX_VRARR = r"\mbox{\,\raisebox{0.43ex}{$\thicksim\mkern-1.3mu$}\rotatebox[origin=c]{3.9999}{\TriangleRight}\,}"
_LATEX_VBRARR = r"\mbox{\,\raisebox{0.43ex}{$\thicksim\mkern-1.3mu$}\FilledTriangleRight\,}"


def _build_table() -> dict[str, Connective]:
    table: dict[str, Connective] = {}

    def add(c: Connective) -> None:
        table[c.name] = c

    for name, tex in [("/\\", r"\wedge"), ("\\/", r"\vee"), ("->", r"\rightarrow"),
                      ("<-", r"\leftarrow"), ("lsub", r"\mbox{$\,-{\mkern-3mu<}\,$}"),
                      ("rsub", r"\mbox{$\,>{\mkern-3mu-}\,$}")]:
        add(Connective(name, False, (Fm, Fm), Fm, latex=tex))
    for i in range(4):
        args = (_INDEX_FIRST[i], Fm) if i < 3 else (Ag, Fnc)
        res = Fm if i < 3 else Act
        add(Connective(f"tri{i}", False, args, res, latex=rf"\vartriangle_{i}"))
        add(Connective(f"btri{i}", False, args, res, latex=rf"\blacktriangle_{i}"))
        sargs = (args[0].structural, args[1].structural)
        add(Connective(f"STRI{i}", True, sargs, res.structural, (1, 1), "triangle",
                       _LATEX_TRI + f"_{i}"))
        add(Connective(f"SBTRI{i}", True, sargs, res.structural, (1, 1), "triangle",
                       _LATEX_BTRI + f"_{i}"))
    for i in range(3):
        args = (_INDEX_FIRST[i], Fm)
        add(Connective(f"rarr{i}", False, args, Fm,
                       latex=rf"\mbox{{$\,-{{\mkern-3mu\vartriangleright}}\,$}}_{i}"))
        add(Connective(f"brarr{i}", False, args, Fm,
                       latex=rf"\mbox{{$\,-{{\mkern-3mu\blacktriangleright}}\,$}}_{i}"))
        sargs = (args[0].structural, FM)
        add(Connective(f"SRARR{i}", True, sargs, FM, (-1, 1), "arrow", _LATEX_RARR + f"_{i}"))
        add(Connective(f"SBRARR{i}", True, sargs, FM, (-1, 1), "arrow", _LATEX_BRARR + f"_{i}"))
    add(Connective(";", True, (FM, FM), FM, (1, 1), latex=r"\,;"))
    add(Connective("<", True, (FM, FM), FM, (1, -1), latex="<"))
    add(Connective(">", True, (FM, FM), FM, (-1, 1), latex=">"))
    add(Connective("SLARR1", True, (FM, FM), ACT, (1, -1), "arrow", _LATEX_LARR + "_1"))
    add(Connective("SBLARR1", True, (FM, FM), ACT, (1, -1), "arrow", _LATEX_BLARR + "_1"))
    # right-hand forms of the ACT grammar; syntax only, no rule mentions them
    add(Connective("SACTL1", True, (FM, FM), ACT, (1, -1), "arrow", r"\lhd_1"))
    add(Connective("SACTBL1", True, (FM, FM), ACT, (1, -1), "arrow", r"\blacktriangleleft_1"))
    for i, args, res in [(0, (FM, FM), FNC), (2, (FM, FM), AG), (3, (ACT, FNC), AG)]:
        add(Connective(f"VLARR{i}", True, args, res, (1, -1), "arrow",
                       _LATEX_VLARR + f"_{i}", virtual=True))
        add(Connective(f"VBLARR{i}", True, args, res, (1, -1), "arrow",
                       _LATEX_VBLARR + f"_{i}", virtual=True))
    add(Connective("VRARR3", True, (AG, ACT), FNC, (-1, 1), "arrow", _LATEX_VRARR + "_3",
                   virtual=True))
    add(Connective("VBRARR3", True, (AG, ACT), FNC, (-1, 1), "arrow", _LATEX_VBRARR + "_3",
                   virtual=True))
    return table


CONNECTIVES: dict[str, Connective] = _build_table()
OPERATIONAL_CONNECTIVES = tuple(n for n, c in CONNECTIVES.items() if not c.structural)
STRUCTURAL_CONNECTIVES = tuple(n for n, c in CONNECTIVES.items() if c.structural)

CONSTANTS = ("top", "bot")
RESERVED = frozenset(CONSTANTS) | {"I"} | frozenset(CONNECTIVES)


# ---------------------------------------------------------------------------
# nodes

def _set(obj, name, value):
    object.__setattr__(obj, name, value)


@dataclass(frozen=True, slots=True)
class Atom:
    """Declared atom: a proposition (Fm), an agent (Ag) or a functional action (Fnc)."""
    name: str
    tag: TypeTag


@dataclass(frozen=True, slots=True)
class Const:
    name: str  # "top" or "bot"

    @property
    def tag(self) -> TypeTag:
        return Fm


@dataclass(frozen=True, slots=True)
class OpApp:
    conn: str
    left: "OpTerm"
    right: "OpTerm"
    tag: TypeTag | None = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        c = CONNECTIVES.get(self.conn)
        ok = (c is not None and not c.structural and self.left.tag == c.args[0]
              and self.right.tag == c.args[1])
        _set(self, "tag", c.result if ok else None)


@dataclass(frozen=True, slots=True)
class OpMeta:
    """Schematic operational term.  ``atomic`` restricts it to declared atoms."""
    name: str
    tag: TypeTag
    atomic: bool = False


OpTerm = Union[Atom, Const, OpApp, OpMeta]


@dataclass(frozen=True, slots=True)
class Leaf:
    term: OpTerm
    tag: TypeTag | None = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        t = self.term.tag
        _set(self, "tag", t.structural if t is not None else None)


@dataclass(frozen=True, slots=True)
class Unit:
    @property
    def tag(self) -> TypeTag:
        return FM


@dataclass(frozen=True, slots=True)
class SApp:
    conn: str
    left: "Structure"
    right: "Structure"
    tag: TypeTag | None = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        c = CONNECTIVES.get(self.conn)
        ok = (c is not None and c.structural and self.left.tag == c.args[0]
              and self.right.tag == c.args[1])
        _set(self, "tag", c.result if ok else None)


@dataclass(frozen=True, slots=True)
class SMeta:
    """Schematic structure of a fixed structural type."""
    name: str
    tag: TypeTag


Structure = Union[Leaf, Unit, SApp, SMeta]
Node = Union[OpTerm, Structure]

I = Unit()
TOP = Const("top")
BOT = Const("bot")


@dataclass(frozen=True, slots=True)
class Sequent:
    lhs: Structure
    rhs: Structure

    @property
    def tag(self) -> TypeTag | None:
        """Common type of both sides, or None when the sequent is not type-uniform."""
        lt, rt = self.lhs.tag, self.rhs.tag
        return lt if lt is not None and lt == rt else None

    def side(self, i: int) -> Structure:
        return self.lhs if i == 0 else self.rhs

    def __str__(self) -> str:
        return render(self)


def leaf(t: OpTerm) -> Leaf:
    return Leaf(t)


def as_structure(n: Node) -> Structure:
    return n if isinstance(n, (Leaf, Unit, SApp, SMeta)) else Leaf(n)


def is_structure(n: object) -> bool:
    return isinstance(n, (Leaf, Unit, SApp, SMeta))


def is_opterm(n: object) -> bool:
    return isinstance(n, (Atom, Const, OpApp, OpMeta))


# ---------------------------------------------------------------------------
# errors and type inference

class ParseError(ValueError):
    pass


class TypeMismatch(ParseError):
    def __init__(self, message: str, path: tuple[int, ...] = ()):
        super().__init__(message)
        self.path = path


def infer_type(node: Node, _path: tuple[int, ...] = ()) -> TypeTag:
    """Return the type of ``node`` or raise TypeMismatch naming the first bad node."""
    if isinstance(node, Sequent):
        raise TypeError("infer_type expects a term or structure; use Sequent.tag")
    if node.tag is not None:
        return node.tag
    if isinstance(node, Leaf):
        return infer_type(node.term, _path).structural
    if isinstance(node, (OpApp, SApp)):
        c = CONNECTIVES.get(node.conn)
        if c is None:
            raise TypeMismatch(f"unknown connective {node.conn!r}", _path)
        lt = infer_type(node.left, _path + (0,))
        rt = infer_type(node.right, _path + (1,))
        if c.structural != isinstance(node, SApp):
            raise TypeMismatch(f"connective {node.conn} used on the wrong layer", _path)
        for k, (got, want) in enumerate(zip((lt, rt), c.args)):
            if got != want:
                raise TypeMismatch(
                    f"argument {k + 1} of {node.conn} has type {got}, expected {want}",
                    _path + (k,))
    raise TypeMismatch("ill-typed node", _path)


def op_size(t: OpTerm) -> int:
    """Number of connectives and atoms in an operational term."""
    if isinstance(t, OpApp):
        return 1 + op_size(t.left) + op_size(t.right)
    return 1


# ---------------------------------------------------------------------------
# paths and positions

Path = tuple[int, ...]


def children(n: Structure) -> tuple[Structure, ...]:
    return (n.left, n.right) if isinstance(n, SApp) else ()


def get_at(seq: Sequent, path: Path) -> Structure:
    node = seq.side(path[0])
    for i in path[1:]:
        if not isinstance(node, SApp):
            raise KeyError(path)
        node = node.left if i == 0 else node.right
    return node


def _replace(node: Structure, rest: Path, new: Structure) -> Structure:
    if not rest:
        return new
    if not isinstance(node, SApp):
        raise KeyError(rest)
    if rest[0] == 0:
        return SApp(node.conn, _replace(node.left, rest[1:], new), node.right)
    return SApp(node.conn, node.left, _replace(node.right, rest[1:], new))


def replace_at(seq: Sequent, path: Path, new: Structure) -> Sequent:
    if path[0] == 0:
        return Sequent(_replace(seq.lhs, path[1:], new), seq.rhs)
    return Sequent(seq.lhs, _replace(seq.rhs, path[1:], new))


def walk(node: Structure, prefix: Path = ()) -> Iterator[tuple[Path, Structure]]:
    yield prefix, node
    if isinstance(node, SApp):
        yield from walk(node.left, prefix + (0,))
        yield from walk(node.right, prefix + (1,))


def occurrences(seq: Sequent) -> Iterator[tuple[Path, Structure]]:
    """All structure occurrences of a sequent, in pre-order, sides included."""
    yield from walk(seq.lhs, (0,))
    yield from walk(seq.rhs, (1,))


def side_of(seq: Sequent, path: Path) -> Side:
    side = Side.PRECEDENT if path[0] == 0 else Side.SUCCEDENT
    node = seq.side(path[0])
    for i in path[1:]:
        if CONNECTIVES[node.conn].polarity[i] < 0:
            side = side.flip()
        node = node.left if i == 0 else node.right
    return side


def positions(seq: Sequent) -> list[tuple[Path, Side]]:
    out: list[tuple[Path, Side]] = []

    def go(node: Structure, path: Path, side: Side) -> None:
        out.append((path, side))
        if isinstance(node, SApp):
            pol = CONNECTIVES[node.conn].polarity
            go(node.left, path + (0,), side if pol[0] > 0 else side.flip())
            go(node.right, path + (1,), side if pol[1] > 0 else side.flip())

    go(seq.lhs, (0,), Side.PRECEDENT)
    go(seq.rhs, (1,), Side.SUCCEDENT)
    return out


# ---------------------------------------------------------------------------
# rendering

_GREEK = {"alpha", "beta", "gamma", "delta", "epsilon", "zeta", "eta", "theta", "iota",
          "kappa", "lambda", "mu", "nu", "xi", "pi", "rho", "sigma", "tau", "phi",
          "chi", "psi", "omega"}


def _render_name(name: str, fmt: str) -> str:
    if fmt != "latex":
        return name
    if name in _GREEK:
        return "\\" + name
    if name in ("top", "bot"):
        return "\\" + name
    if name == "I":
        return r"\textrm{I}"
    return name


def render(node, fmt: str = "ascii") -> str:
    """Print a term, structure or sequent in ``ascii`` or ``latex`` form."""
    if isinstance(node, Sequent):
        turn = r" \vdash " if fmt == "latex" else " |- "
        return render(node.lhs, fmt) + turn + render(node.rhs, fmt)
    return _render(node, fmt)


def _render(node, fmt: str) -> str:
    if isinstance(node, Leaf):
        return _render(node.term, fmt)
    if isinstance(node, (Atom, OpMeta, SMeta)):
        return _render_name(node.name, fmt)
    if isinstance(node, Const):
        return _render_name(node.name, fmt)
    if isinstance(node, Unit):
        return _render_name("I", fmt)
    conn = node.conn
    sym = CONNECTIVES[conn].latex if fmt == "latex" else conn
    return f"{_wrap(node.left, fmt)} {sym} {_wrap(node.right, fmt)}"


def _wrap(node, fmt: str) -> str:
    inner = node.term if isinstance(node, Leaf) else node
    s = _render(inner, fmt)
    return f"({s})" if isinstance(inner, (OpApp, SApp)) else s


# ---------------------------------------------------------------------------
# parsing

_GRAMMAR = r"""
sequent: expr "|-" expr
?expr: operand
     | operand CONN operand -> binary
?operand: NAME -> name
        | "(" expr ")"
CONN.2: "/\\" | "\\/" | "->" | "<-" | ";" | "<" | ">"
      | /(lsub|rsub|tri[0-3]|btri[0-3]|rarr[0-2]|brarr[0-2]|STRI[0-3]|SBTRI[0-3]|SRARR[0-2]|SBRARR[0-2]|SLARR1|SBLARR1|SACTL1|SACTBL1|VLARR[023]|VBLARR[023]|VRARR3|VBRARR3)(?![A-Za-z0-9_'])/
NAME: /[A-Za-z_][A-Za-z0-9_']*/
%import common.WS
%ignore WS
"""


class _Raw(Transformer):
    def name(self, items):
        return ("name", str(items[0]))

    def binary(self, items):
        return ("bin", str(items[1]), items[0], items[2])

    def sequent(self, items):
        return ("seq", items[0], items[1])


@lru_cache(maxsize=None)
def _parser() -> Lark:
    return Lark(_GRAMMAR, start=["sequent", "expr"], parser="lalr")


DECL_KINDS = {"prop": Fm, "agent": Ag, "fnc": Fnc}

Decls = Mapping[str, object]


def _build(raw, decls: Decls):
    if raw[0] == "name":
        name = raw[1]
        if name == "I":
            return I
        if name in CONSTANTS:
            return Const(name)
        if name not in decls:
            raise ParseError(f"undeclared identifier {name!r}")
        kind = decls[name]
        if isinstance(kind, str):
            if kind not in DECL_KINDS:
                raise ParseError(f"bad declaration kind {kind!r} for {name!r}")
            return Atom(name, DECL_KINDS[kind])
        return kind
    _, conn, l, r = raw
    left, right = _build(l, decls), _build(r, decls)
    c = CONNECTIVES[conn]
    if c.structural:
        return SApp(conn, as_structure(left), as_structure(right))
    for k, child in enumerate((left, right)):
        if is_structure(child):
            raise TypeMismatch(f"argument {k + 1} of operational {conn} is a structure", (k,))
    return OpApp(conn, left, right)


def _raw(text: str, start: str):
    try:
        return _Raw().transform(_parser().parse(text, start=start))
    except LarkError as e:
        raise ParseError(f"cannot parse {text!r}: {str(e).splitlines()[0]}") from None


def parse_sequent(text: str, decls: Decls) -> Sequent:
    """Parse ``"X |- Y"`` against a declaration table and type-check both sides."""
    _, l, r = _raw(text, "sequent")
    seq = Sequent(as_structure(_build(l, decls)), as_structure(_build(r, decls)))
    for i in (0, 1):
        try:
            infer_type(seq.side(i))
        except TypeMismatch as e:
            raise TypeMismatch(f"{e} (in {render(seq)})", (i,) + e.path) from None
    return seq


def parse_term(text: str, decls: Decls) -> Node:
    """Parse a single term or structure; operational terms stay operational."""
    node = _build(_raw(text, "expr"), decls)
    infer_type(node)
    return node


def declared_atoms(node, acc: dict[str, TypeTag] | None = None) -> dict[str, TypeTag]:
    """Collect atoms (name to operational type) occurring anywhere in a node."""
    acc = {} if acc is None else acc
    if isinstance(node, Sequent):
        declared_atoms(node.lhs, acc)
        declared_atoms(node.rhs, acc)
    elif isinstance(node, Atom):
        acc[node.name] = node.tag
    elif isinstance(node, Leaf):
        declared_atoms(node.term, acc)
    elif isinstance(node, (OpApp, SApp)):
        declared_atoms(node.left, acc)
        declared_atoms(node.right, acc)
    return acc
