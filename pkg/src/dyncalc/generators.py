"""Random and canonical instances of terms, structures, sequents and rules.

Everything here draws from an explicit :class:`random.Random` so that runs are
reproducible from a seed.  The generators follow the connective table, so they
produce every well-typed shape, virtual adjoints included.
"""

from __future__ import annotations

import random

from .checker import ProofTree, hyp
from .rules import RuleSchema, apply_schema, get_rule
from .syntax import (
    ACT, AG, BOT, CONNECTIVES, FM, FNC, I, TOP, Act, Ag, Atom, Fm, Fnc, Leaf, OpApp,
    OpMeta, SApp, Sequent, TypeTag, declared_atoms,
)

ATOM_NAMES = {
    Fm: ("p", "q", "r", "s"),
    Ag: ("a", "b", "c"),
    Fnc: ("alpha", "beta", "gamma"),
}
DECL_KIND = {Fm: "prop", Ag: "agent", Fnc: "fnc"}


def _by_result(structural: bool) -> dict[TypeTag, list[str]]:
    out: dict[TypeTag, list[str]] = {}
    for name, c in CONNECTIVES.items():
        if c.structural == structural:
            out.setdefault(c.result, []).append(name)
    return out


_OP_CONNS = _by_result(False)
_STRUCT_CONNS = _by_result(True)


def random_atom(tag: TypeTag, rng: random.Random) -> Atom:
    return Atom(rng.choice(ATOM_NAMES[tag]), tag)


def random_term(tag: TypeTag, depth: int, rng: random.Random):
    """A well-typed operational term of type ``tag`` and height at most ``depth``."""
    if tag == Act:
        # Act has no atoms: its terms are always triangles of index 3
        conn = rng.choice(_OP_CONNS[Act])
        return OpApp(conn, random_atom(Ag, rng), random_atom(Fnc, rng))
    if tag != Fm or depth <= 0 or rng.random() < 0.3:
        if tag == Fm and rng.random() < 0.15:
            return rng.choice((TOP, BOT))
        return random_atom(tag, rng)
    conn = rng.choice(_OP_CONNS[Fm])
    first, second = CONNECTIVES[conn].args
    return OpApp(conn, random_term(first, depth - 1, rng), random_term(second, depth - 1, rng))


def random_structure(tag: TypeTag, depth: int, rng: random.Random):
    """A well-typed structure of structural type ``tag`` and height at most ``depth``."""
    if depth <= 0 or rng.random() < 0.3:
        if tag == FM and rng.random() < 0.15:
            return I
        return Leaf(random_term(tag.operational, max(depth, 0), rng))
    conn = rng.choice(_STRUCT_CONNS[tag])
    first, second = CONNECTIVES[conn].args
    return SApp(conn, random_structure(first, depth - 1, rng),
                random_structure(second, depth - 1, rng))


def random_sequent(depth: int, rng: random.Random, tag: TypeTag | None = None) -> Sequent:
    tag = tag or rng.choice((FM, FNC, ACT, AG))
    return Sequent(random_structure(tag, depth, rng), random_structure(tag, depth, rng))


def break_signature(node, rng: random.Random):
    """Replace one argument somewhere in ``node`` by a node of the wrong type."""
    path = []
    cur = node
    while isinstance(cur, (OpApp, SApp)) and rng.random() < 0.6:
        k = rng.randrange(2)
        path.append(k)
        cur = cur.left if k == 0 else cur.right
    if not isinstance(cur, (OpApp, SApp)):
        # wrap the chosen node in a connective whose argument type it cannot fill
        return _rebuild(node, path, _misapply(cur, rng))
    k = rng.randrange(2)
    want = CONNECTIVES[cur.conn].args[k]
    bad = _wrong_typed(want, isinstance(cur, SApp), rng)
    new = type(cur)(cur.conn, bad, cur.right) if k == 0 else type(cur)(cur.conn, cur.left, bad)
    return _rebuild(node, path, new)


def _wrong_typed(want: TypeTag, structural: bool, rng: random.Random):
    layer = (FM, FNC, ACT, AG) if structural else (Fm, Fnc, Act, Ag)
    other = rng.choice([t for t in layer if t != want])
    return random_structure(other, 1, rng) if structural else random_term(other, 1, rng)


def _misapply(cur, rng: random.Random):
    structural = isinstance(cur, (Leaf, SApp)) or cur is I
    tag = cur.tag
    pool = [n for n, c in CONNECTIVES.items()
            if c.structural == structural and c.args[0] != tag]
    conn = rng.choice(pool)
    second = CONNECTIVES[conn].args[1]
    other = random_structure(second, 0, rng) if structural else random_term(second, 0, rng)
    return (SApp if structural else OpApp)(conn, cur, other)


def _rebuild(node, path, new):
    if not path:
        return new
    k = path[0]
    if k == 0:
        return type(node)(node.conn, _rebuild(node.left, path[1:], new), node.right)
    return type(node)(node.conn, node.left, _rebuild(node.right, path[1:], new))


# ---------------------------------------------------------------------------
# substitutions

def _fresh_atom(tag: TypeTag, k: int) -> Atom:
    names = ATOM_NAMES[tag]
    name = names[k] if k < len(names) else f"{names[0]}{k}"
    return Atom(name, tag)


def witness_value(meta, k: int):
    """A canonical value for a metavariable, distinct for distinct ``k``."""
    op = meta.tag if isinstance(meta, OpMeta) else meta.tag.operational
    if op == Act:
        term = OpApp("btri3", _fresh_atom(Ag, k), _fresh_atom(Fnc, k))
    else:
        term = _fresh_atom(op, k)
    return term if isinstance(meta, OpMeta) else Leaf(term)


def witness_substitution(schema: RuleSchema | dict) -> dict:
    """Map every metavariable of ``schema`` (or of a name-to-meta table) to a
    distinct canonical value."""
    metas = schema.metas if isinstance(schema, RuleSchema) else schema
    counters: dict[TypeTag, int] = {}
    sub = {}
    for name, meta in sorted(metas.items()):
        op = meta.tag if isinstance(meta, OpMeta) else meta.tag.operational
        k = counters.get(op, 0)
        counters[op] = k + 1
        sub[name] = witness_value(meta, k)
    return sub


def random_substitution(schema: RuleSchema, depth: int, rng: random.Random) -> dict:
    sub = {}
    for name, meta in sorted(schema.metas.items()):
        if isinstance(meta, OpMeta):
            sub[name] = (random_atom(meta.tag, rng) if meta.atomic
                         else random_term(meta.tag, depth, rng))
        else:
            sub[name] = random_structure(meta.tag, depth, rng)
    return sub


# ---------------------------------------------------------------------------
# canonical cut instances

def principal_cut(right_rule: str, left_rule: str, sub: dict | None = None) -> ProofTree:
    """A cut between a right introduction and a left introduction of the same term.

    The premises of both rules are open hypotheses ``pi0``, ``pi1``, ... in
    order (right rule first).  Without ``sub`` the metavariables get the
    canonical witness values; the two rules share the names of the operational
    metavariables, so they introduce the same cut term.
    """
    rs, ls = get_rule(right_rule), get_rule(left_rule)
    if sub is None:
        sub = witness_substitution({**rs.metas, **ls.metas})
    ri, li = apply_schema(rs, sub), apply_schema(ls, sub)
    labels = iter(f"pi{k}" for k in range(len(ri.premises) + len(li.premises)))
    left = ProofTree(right_rule, ri.conclusion, tuple(hyp(next(labels), p) for p in ri.premises))
    right = ProofTree(left_rule, li.conclusion, tuple(hyp(next(labels), p) for p in li.premises))
    conclusion = Sequent(ri.conclusion.lhs, li.conclusion.rhs)
    return ProofTree(f"Cut_{conclusion.tag}", conclusion, (left, right))


def decls_for(*nodes) -> dict[str, str]:
    """Declaration table covering the atoms of the given nodes."""
    acc: dict = {}
    for n in nodes:
        declared_atoms(n, acc)
    return {name: DECL_KIND[tag] for name, tag in acc.items()}

