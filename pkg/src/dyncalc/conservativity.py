"""Conservativity checks: severe sequents, virtual adjoints and the witness report.

A cut-free proof of ``A |- B`` certifies a single-type derivation when its
endsequent is the translation of a single-type sequent and no virtual adjoint
survives once redundant display steps are stripped.  Virtual adjoints can only
enter a proof through rules whose conclusion mentions material absent from the
premises (weakenings, the atom axiom, balance, necessitation), so those nodes
are inspected individually.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .checker import ProofTree, check_proof, expand_macros, match_node
from .rules import NoMatch, _meta_nodes, catalog
from .syntax import (
    AG, CONNECTIVES, FNC, Leaf, Path, SApp, Sequent, Side, get_at, positions, render, walk,
)
from .translate import in_image

WITNESS = "conservative-witness"
NOT_WITNESS = "not-a-witness"


# ---------------------------------------------------------------------------
# severity

def severe_occurrences(s: Sequent) -> list[Path]:
    """Structural connective occurrences no display postulate can act on.

    These are triangles in succedent position and arrows in precedent position.
    """
    out = []
    for path, side in positions(s):
        node = get_at(s, path)
        if not isinstance(node, SApp):
            continue
        family = CONNECTIVES[node.conn].family
        if (family == "triangle" and side is Side.SUCCEDENT) or \
                (family == "arrow" and side is Side.PRECEDENT):
            out.append(path)
    return out


def is_severe(s: Sequent) -> bool:
    return bool(severe_occurrences(s))


# ---------------------------------------------------------------------------
# virtual adjoints

def virtual_adjoint_occurrences(x) -> list[Path]:
    """Paths of the virtual adjoint nodes in a structure (or in both sides of a sequent)."""
    if isinstance(x, Sequent):
        return virtual_adjoint_occurrences_at(x.lhs, (0,)) + \
            virtual_adjoint_occurrences_at(x.rhs, (1,))
    return virtual_adjoint_occurrences_at(x, ())


def virtual_adjoint_occurrences_at(x, prefix: Path) -> list[Path]:
    return [p for p, n in walk(x, prefix)
            if isinstance(n, SApp) and CONNECTIVES[n.conn].virtual]


def _introducing_rules() -> dict[str, frozenset[str]]:
    """Rule name to the metavariables its conclusion introduces."""
    out = {}
    for schema in catalog("classical"):
        before = {m.name for p in schema.premises for m in _meta_nodes(p)}
        fresh = {m.name for m in _meta_nodes(schema.conclusion)} - before
        if fresh:
            out[schema.name] = frozenset(fresh)
    return out


_INTRODUCING = _introducing_rules()


@dataclass(frozen=True)
class Introduction:
    """A node that brings a virtual adjoint into the proof."""
    tree_path: tuple[int, ...]
    rule: str
    introduced: str  # the offending structure, rendered

    def __str__(self) -> str:
        where = ".".join(map(str, self.tree_path)) or "root"
        return f"{self.rule} at {where} introduces {self.introduced}"


def va_introductions(t: ProofTree) -> list[Introduction]:
    """Nodes of ``t`` whose freshly introduced material contains a virtual adjoint."""
    out = []
    for path, n in t.nodes():
        if n.is_hyp:
            continue
        try:
            schema, sub, _ = match_node(n)
        except NoMatch:
            continue
        names = _INTRODUCING.get(schema.name)
        if schema.atom and not n.children:
            names = frozenset(sub)
        if not names:
            continue
        for name in sorted(names):
            value = sub[name]
            if isinstance(value, SApp) and virtual_adjoint_occurrences(value):
                out.append(Introduction(path, n.rule, render(value)))
    return out


# ---------------------------------------------------------------------------
# stripping redundant display steps

class FactViolation(AssertionError):
    """An Ag or Fnc sequent whose sides are not operational terms, in a proof
    that introduces no virtual adjoints."""


def _is_display(rule: str) -> bool:
    try:
        return _RULES[rule].is_display
    except KeyError:
        return False


_RULES = {s.name: s for s in catalog("classical")}


def _strip(t: ProofTree) -> ProofTree:
    kids = tuple(_strip(c) for c in t.children)
    t = ProofTree(t.rule, t.conclusion, kids, t.label)
    # a display step immediately undone by another one returns to the same sequent
    while (_is_display(t.rule) and len(t.children) == 1 and _is_display(t.children[0].rule)
           and t.children[0].children[0].conclusion == t.conclusion):
        t = t.children[0].children[0]
    return t


def strip_redundant_displays(t: ProofTree) -> ProofTree:
    """Remove pairs of display steps that cancel out, to a fixed point.

    When ``t`` introduces no virtual adjoint, every Ag or Fnc sequent of the
    result is checked to have operational terms on both sides; a violation
    raises :class:`FactViolation`.
    """
    cur = t
    while True:
        nxt = _strip(cur)
        if nxt == cur:
            break
        cur = nxt
    if not va_introductions(cur):
        for path, n in cur.nodes():
            s = n.conclusion
            if s.tag in (AG, FNC) and not (isinstance(s.lhs, Leaf) and isinstance(s.rhs, Leaf)):
                raise FactViolation(f"node {path}: {render(s)} has structural sides")
    return cur


def virtual_census(t: ProofTree) -> int:
    """Total number of virtual adjoint occurrences over all nodes of ``t``."""
    return sum(len(virtual_adjoint_occurrences(n.conclusion)) for _, n in t.nodes())


# ---------------------------------------------------------------------------
# the report

@dataclass
class ConservativityReport:
    endsequent: str
    in_image: bool
    severe: list[Path]
    introductions: list[Introduction] = field(default_factory=list)
    census: int = 0
    problems: list[str] = field(default_factory=list)

    @property
    def verdict(self) -> str:
        ok = (self.in_image and not self.severe and not self.introductions
              and self.census == 0 and not self.problems)
        return WITNESS if ok else NOT_WITNESS

    def lines(self) -> list[str]:
        out = [f"endsequent: {self.endsequent}",
               f"in translation image: {'yes' if self.in_image else 'no'}",
               f"severe occurrences: {len(self.severe)}",
               f"virtual adjoint introductions: {len(self.introductions)}"]
        out += [f"  {i}" for i in self.introductions]
        out.append(f"virtual adjoints after stripping: {self.census}")
        out += [f"problem: {p}" for p in self.problems]
        out.append(f"verdict: {self.verdict}")
        return out

    def __str__(self) -> str:
        return "\n".join(self.lines())


def _endsequent_in_image(s: Sequent) -> bool:
    return all(isinstance(side, Leaf) and in_image(side.term) for side in (s.lhs, s.rhs))


def conservativity_report(t: ProofTree) -> ConservativityReport:
    """Decide whether ``t`` is a witness for derivability in the single-type calculus."""
    s = t.conclusion
    rep = ConservativityReport(render(s), _endsequent_in_image(s), severe_occurrences(s))
    check = check_proof(t, base="intuitionistic", allow_cut=False)
    if not check.ok:
        rep.problems += [f"{p}: {m}" for p, m in check.failures]
        return rep
    flat = expand_macros(t)
    rep.introductions = va_introductions(flat)
    try:
        stripped = strip_redundant_displays(flat)
    except FactViolation as e:
        rep.problems.append(str(e))
        stripped = flat
    rep.census = virtual_census(stripped)
    return rep
