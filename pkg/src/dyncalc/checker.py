r"""Proof trees, the proof checker and the ``.dcp`` proof-script format.

A proof script is a declaration header followed by one s-expression::

    prop p.
    fnc alpha.
    (rule and_R (seq "p ; p |- p /\ p")
      (ax Id (seq "p |- p"))
      (ax Id (seq "p |- p")))

``(hyp NAME (seq "..."))`` marks an open premise.  Hypotheses are rejected by
:func:`check_proof` unless explicitly allowed; they are used to state reduction
schemas over unspecified subderivations.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path as FilePath
from typing import Iterator, Mapping

from lark import Lark, LarkError, Transformer

from .rules import (
    NoMatch, RuleSchema, apply_schema, atom_schema, get_rule, match_rule, rule_table,
    substitute,
)
from .syntax import (
    Leaf, ParseError, Sequent, TypeMismatch, declared_atoms, infer_type, op_size,
    parse_sequent, render,
)

HYP = "hyp"

TreePath = tuple[int, ...]


@dataclass(frozen=True)
class ProofTree:
    rule: str
    conclusion: Sequent
    children: tuple["ProofTree", ...] = ()
    # name of an open premise; only meaningful when rule == HYP
    label: str = ""
    annotation: Mapping[str, object] | None = field(default=None, compare=False,
                                                    hash=False, repr=False)

    @property
    def is_cut(self) -> bool:
        return self.rule.startswith("Cut_")

    @property
    def is_hyp(self) -> bool:
        return self.rule == HYP

    def premises(self) -> tuple[Sequent, ...]:
        return tuple(c.conclusion for c in self.children)

    def height(self) -> int:
        return 1 + max((c.height() for c in self.children), default=0)

    def size(self) -> int:
        return 1 + sum(c.size() for c in self.children)

    def nodes(self, prefix: TreePath = ()) -> Iterator[tuple[TreePath, "ProofTree"]]:
        """Pre-order traversal yielding (tree path, subtree)."""
        yield prefix, self
        for i, c in enumerate(self.children):
            yield from c.nodes(prefix + (i,))

    def at(self, path: TreePath) -> "ProofTree":
        node = self
        for i in path:
            node = node.children[i]
        return node

    def replace(self, path: TreePath, new: "ProofTree") -> "ProofTree":
        if not path:
            return new
        kids = list(self.children)
        kids[path[0]] = kids[path[0]].replace(path[1:], new)
        return ProofTree(self.rule, self.conclusion, tuple(kids), self.label)

    def hypotheses(self) -> list[tuple[str, Sequent]]:
        return [(n.label, n.conclusion) for _, n in self.nodes() if n.is_hyp]

    def __str__(self) -> str:
        return dump_tree(self)


def node(rule: str, conclusion: Sequent, *children: ProofTree) -> ProofTree:
    return ProofTree(rule, conclusion, tuple(children))


def hyp(label: str, conclusion: Sequent) -> ProofTree:
    return ProofTree(HYP, conclusion, (), label)


def cut_term(t: ProofTree):
    """The operational cut term of a Cut node (the left premise's succedent)."""
    rhs = t.children[0].conclusion.rhs
    if not isinstance(rhs, Leaf):
        raise ValueError("left premise of a cut must end in a formula")
    return rhs.term


@dataclass
class CheckReport:
    ok: bool
    failures: list[tuple[TreePath, str]]
    stats: dict[str, int]
    seconds: float = 0.0

    def summary(self) -> str:
        head = "ok" if self.ok else f"FAILED ({len(self.failures)} problems)"
        st = ", ".join(f"{k}={v}" for k, v in self.stats.items())
        return f"{head}; {st}"


class MacroMismatch(ValueError):
    pass


def check_type_uniformity(s: Sequent) -> bool:
    """True iff both sides of the sequent have the same type."""
    try:
        return infer_type(s.lhs) == infer_type(s.rhs)
    except TypeMismatch:
        return False


def _schema_for(t: ProofTree, base: str) -> RuleSchema:
    table = rule_table(base)
    if t.rule not in table:
        if t.rule in rule_table("classical"):
            raise NoMatch(f"rule {t.rule} is not part of the {base} base")
        raise NoMatch(f"unknown rule {t.rule!r}")
    schema = table[t.rule]
    if schema.atom:
        concrete = atom_schema(t.conclusion)
        if concrete is None:
            raise NoMatch(f"{render(t.conclusion)} is not an atom axiom")
        return concrete
    return schema


def match_node(t: ProofTree, base: str = "classical") -> tuple[RuleSchema, dict, str]:
    """Schema, substitution and direction justifying one inference."""
    schema = _schema_for(t, base)
    sub, direction = match_rule(schema, t.premises(), t.conclusion)
    return schema, sub, direction


def expand_macro_node(t: ProofTree) -> ProofTree:
    """Replace one macro inference by its chain of primitive inferences."""
    schema = get_rule(t.rule)
    if not schema.macro:
        return t
    try:
        sub, _ = match_rule(schema, t.premises(), t.conclusion)
    except NoMatch as e:
        raise MacroMismatch(f"{t.rule}: {e}") from None
    cur = t.children[0]
    for rule, pattern in schema.expansion:
        cur = ProofTree(rule, substitute(pattern, sub), (cur,))
    if cur.conclusion != t.conclusion:
        raise MacroMismatch(f"{t.rule}: expansion ends in {render(cur.conclusion)}")
    return cur


def expand_macros(t: ProofTree) -> ProofTree:
    """Replace every macro node by its primitive derivation, bottom-up."""
    kids = tuple(expand_macros(c) for c in t.children)
    rebuilt = ProofTree(t.rule, t.conclusion, kids, t.label, t.annotation)
    if t.rule in rule_table("classical") and get_rule(t.rule).macro:
        return expand_macro_node(rebuilt)
    return rebuilt


def check_proof(t: ProofTree, base: str = "intuitionistic", allow_cut: bool = True,
                allow_macros: bool = True, allow_hyps: bool = False) -> CheckReport:
    """Validate every inference of ``t`` against the catalog.

    Failures never raise; each one is reported with the tree path of the
    offending node.
    """
    start = time.perf_counter()
    failures: list[tuple[TreePath, str]] = []
    cuts = 0
    max_rank = 0
    count = 0
    for path, n in t.nodes():
        count += 1
        if not check_type_uniformity(n.conclusion):
            failures.append((path, f"sequent {render(n.conclusion)} is not type-uniform"))
            continue
        if n.is_hyp:
            if not allow_hyps:
                failures.append((path, f"open hypothesis {n.label}"))
            elif n.children:
                failures.append((path, "hypothesis with premises"))
            continue
        if n.is_cut:
            cuts += 1
            if not allow_cut:
                failures.append((path, "cut forbidden"))
            try:
                max_rank = max(max_rank, op_size(cut_term(n)))
            except (ValueError, IndexError):
                pass
        try:
            schema, sub, _ = match_node(n, base)
        except NoMatch as e:
            failures.append((path, f"{n.rule}: {e}"))
            continue
        if schema.macro:
            if not allow_macros:
                failures.append((path, f"macro rule {n.rule} not allowed"))
                continue
            try:
                expanded = expand_macro_node(n)
            except MacroMismatch as e:
                failures.append((path, str(e)))
                continue
            inner = expanded
            for depth in range(len(schema.expansion)):
                try:
                    match_node(inner, base)
                except NoMatch as e:
                    failures.append((path, f"{n.rule} expansion step {inner.rule}: {e}"))
                    break
                inner = inner.children[0]
    stats = {"nodes": count, "cuts": cuts, "max_cut_rank": max_rank}
    return CheckReport(not failures, failures, stats, time.perf_counter() - start)


def annotate(t: ProofTree, base: str = "classical") -> ProofTree:
    """Record each node's matching substitution as its annotation."""
    kids = tuple(annotate(c, base) for c in t.children)
    sub = None
    if not t.is_hyp:
        try:
            _, sub, _ = match_node(t, base)
        except NoMatch:
            sub = None
    return ProofTree(t.rule, t.conclusion, kids, t.label, sub)


# ---------------------------------------------------------------------------
# proof scripts

_SCRIPT_GRAMMAR = r"""
start: decl* tree
decl: DKIND NAME* "."
tree: "(" KIND RNAME seq tree* ")"
seq: "(" "seq" STRING ")"
DKIND: "prop" | "agent" | "fnc"
KIND: "rule" | "ax" | "hyp"
NAME: /[A-Za-z_][A-Za-z0-9_']*/
RNAME: /[^\s()"]+/
COMMENT: /#[^\n]*/
STRING: /"[^"\n]*"/
%import common.WS
%ignore WS
%ignore COMMENT
"""


@lru_cache(maxsize=None)
def _script_parser() -> Lark:
    return Lark(_SCRIPT_GRAMMAR, parser="lalr", lexer="contextual")


@dataclass
class Script:
    decls: dict[str, str]
    tree: ProofTree
    comments: list[str] = field(default_factory=list)


class _ScriptBuilder(Transformer):
    def __init__(self):
        super().__init__()
        self.decls: dict[str, str] = {}

    def decl(self, items):
        kind = str(items[0])
        for n in items[1:]:
            name = str(n)
            if name in self.decls and self.decls[name] != kind:
                raise ParseError(f"{name} declared as both {self.decls[name]} and {kind}")
            self.decls[name] = kind
        return None

    def seq(self, items):
        return str(items[0])[1:-1]

    def tree(self, items):
        return ("tree", str(items[0]), str(items[1]), items[2], items[3:])

    def start(self, items):
        return items[-1]


def _build_tree(raw, decls: dict[str, str]) -> ProofTree:
    _, kind, name, text, kids = raw
    seq = parse_sequent(text, decls)
    children = tuple(_build_tree(k, decls) for k in kids)
    if kind == "hyp":
        if children:
            raise ParseError(f"hypothesis {name} cannot have premises")
        return ProofTree(HYP, seq, (), name)
    if kind == "ax" and children:
        raise ParseError(f"axiom {name} cannot have premises")
    return ProofTree(name, seq, children)


def loads(text: str) -> Script:
    """Parse a proof script."""
    builder = _ScriptBuilder()
    try:
        raw = builder.transform(_script_parser().parse(text))
    except LarkError as e:
        inner = getattr(e, "orig_exc", None)
        if isinstance(inner, ParseError):
            raise inner from None
        raise ParseError(f"malformed proof script: {str(e).splitlines()[0]}") from None
    comments = [ln.strip()[1:].strip() for ln in text.splitlines()
                if ln.strip().startswith("#")]
    return Script(builder.decls, _build_tree(raw, builder.decls), comments)


def load(path: str | FilePath) -> Script:
    return loads(FilePath(path).read_text(encoding="utf-8"))


def _decl_lines(decls: Mapping[str, str]) -> list[str]:
    out = []
    for kind in ("prop", "agent", "fnc"):
        names = sorted(n for n, k in decls.items() if k == kind)
        if names:
            out.append(f"{kind} {' '.join(names)}.")
    return out


def decls_of(t: ProofTree) -> dict[str, str]:
    """Declaration table covering every atom in a tree."""
    kinds = {"Fm": "prop", "Ag": "agent", "Fnc": "fnc"}
    out: dict[str, str] = {}
    for _, n in t.nodes():
        for name, tag in declared_atoms(n.conclusion).items():
            out[name] = kinds[tag.value]
    return out


def dump_tree(t: ProofTree, indent: int = 0) -> str:
    pad = "  " * indent
    text = f'"{render(t.conclusion)}"'
    if t.is_hyp:
        return f"{pad}(hyp {t.label} (seq {text}))"
    kind = "rule" if t.children else "ax"
    head = f"{pad}({kind} {t.rule} (seq {text})"
    if not t.children:
        return head + ")"
    body = "\n".join(dump_tree(c, indent + 1) for c in t.children)
    return f"{head}\n{body})"


def dumps(t: ProofTree, decls: Mapping[str, str] | None = None,
          comments: list[str] | None = None) -> str:
    """Write a proof script; declarations default to the atoms in the tree."""
    decls = decls_of(t) if decls is None else decls
    lines = [f"# {c}" if c else "#" for c in (comments or [])]
    lines += _decl_lines(decls)
    lines.append(dump_tree(t))
    return "\n".join(lines) + "\n"


_INFER = {1: "UnaryInfC", 2: "BinaryInfC", 3: "TrinaryInfC"}


def _latex_rule(name: str) -> str:
    return r"\textrm{" + name.replace("_", r"\_").replace(";", r"{;}") + "}"


def latex_proof(t: ProofTree) -> str:
    """The tree as a ``bussproofs`` environment."""
    lines: list[str] = []

    def go(n: ProofTree) -> None:
        seq = "$" + render(n.conclusion, "latex") + "$"
        if n.is_hyp:
            lines.append(r"\AxiomC{$\vdots$ \raisebox{1mm}{$" + n.label + "$}}")
            lines.append(r"\noLine")
            lines.append(r"\UnaryInfC{" + seq + "}")
            return
        if not n.children:
            lines.append(r"\AxiomC{}")
            lines.append(r"\RightLabel{\scriptsize " + _latex_rule(n.rule) + "}")
            lines.append(r"\UnaryInfC{" + seq + "}")
            return
        for c in n.children:
            go(c)
        lines.append(r"\RightLabel{\scriptsize " + _latex_rule(n.rule) + "}")
        lines.append("\\" + _INFER[len(n.children)] + "{" + seq + "}")

    go(t)
    return "\n".join([r"\begin{prooftree}", *lines, r"\end{prooftree}"]) + "\n"


def instantiate(schema_name: str, sub: Mapping[str, object], *children: ProofTree,
                base: str = "classical") -> ProofTree:
    """Build a node by instantiating a schema downward over given children."""
    inst = apply_schema(get_rule(schema_name, base), sub)
    return ProofTree(schema_name, inst.conclusion, tuple(children))
