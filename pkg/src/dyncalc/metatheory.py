"""Per-schema checks of the Belnap-style cut-elimination conditions.

Only the conditions that can be read off the shape of a single schema are
checked here:

* C1: every formula metavariable of a premise survives in the conclusion
  (cut rules excepted);
* C'2: all occurrences of a metavariable carry the same type;
* C4: congruent structure occurrences sit on one side, all precedent or all
  succedent;
* C'3: a structure parameter occurs at most once in the conclusion, except for
  agent, action and function parameters, which the swap, conjugation and
  monotonicity rules legitimately repeat;
* C10: every cut rule is type-uniform, with premises and conclusion of one type.

The remaining conditions quantify over derivations; they are exercised by the
property and cut-elimination test suites instead.

Every violation carries a concrete instance built from the canonical witness
substitution, and :meth:`Violation.verify` re-checks the claim on that instance
without looking at the schema again.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .generators import witness_value
from .rules import RuleSchema, TypeViolation, _meta_nodes, apply_schema, meta_paths
from .syntax import (
    ACT, AG, FNC, Leaf, OpApp, OpMeta, SApp, SMeta, Sequent, Side, get_at, render, side_of,
)

LINTED = ("C1", "C'2", "C'3", "C4", "C10")
DELEGATED = {
    "C'5": "identity axioms: verified by test suite, not by lint",
    "C''5": "atom axioms closed under display: verified by test suite, not by lint",
    "C'6": "closure under substitution (structures): verified by test suite, not by lint",
    "C'7": "closure under substitution (operational terms): verified by test suite, not by lint",
    "C'8": "principal reductions: verified by test suite, not by lint",
    "C''8": "principal reductions across types: verified by test suite, not by lint",
    "C9": "type-uniformity of derivable sequents: verified by test suite, not by lint",
}
EXEMPT_FROM_PROLIFERATION = (AG, FNC, ACT)


@dataclass(frozen=True)
class Violation:
    condition: str
    rule: str
    message: str
    # canonical instance of the offending schema (premises, conclusion)
    premises: tuple[Sequent, ...]
    conclusion: Sequent
    # metavariable name to its witness value; the claim is about these values
    witness: tuple[tuple[str, object], ...]
    # condition-specific evidence, see :meth:`verify`
    evidence: tuple = ()

    def __str__(self) -> str:
        wit = ", ".join(f"{k}:={render(v)}" for k, v in self.witness)
        return f"{self.condition} {self.rule}: {self.message} [witness {wit}]"

    def verify(self) -> bool:
        """Re-check the violation on its concrete instance."""
        return _VERIFY[self.condition](self)


# ---------------------------------------------------------------------------
# witness instances

def _witness(schema: RuleSchema) -> dict:
    """Distinct canonical values, unique across metavariable names *and* types."""
    out = {}
    for k, (name, meta) in enumerate(sorted(schema.metas.items())):
        out[name] = witness_value(meta, k)
    return out


def _variants(schema: RuleSchema) -> dict[tuple, object]:
    """(name, class, type) of every metavariable occurrence to a witness value.

    A name used with a single type gets its canonical witness; a name used with
    several types gets one fresh value per type.
    """
    sub = _witness(schema)
    out: dict[tuple, object] = {}
    k = len(sub)
    for seq in (*schema.premises, schema.conclusion):
        for m in _meta_nodes(seq):
            key = (m.name, type(m), m.tag)
            if key in out:
                continue
            if schema.metas[m.name] == m:
                out[key] = sub[m.name]
            else:
                out[key] = witness_value(m, k)
                k += 1
    return out


def _fill(pat, values: dict[tuple, object]):
    if isinstance(pat, Sequent):
        return Sequent(_fill(pat.lhs, values), _fill(pat.rhs, values))
    if isinstance(pat, (SMeta, OpMeta)):
        return values[(pat.name, type(pat), pat.tag)]
    if isinstance(pat, Leaf):
        return Leaf(_fill(pat.term, values))
    if isinstance(pat, (SApp, OpApp)):
        return type(pat)(pat.conn, _fill(pat.left, values), _fill(pat.right, values))
    return pat


def _instance(schema: RuleSchema):
    """(premises, conclusion, substitution) of the canonical instance.

    Substitution is done occurrence by occurrence, so a schema whose
    metavariable changes type between occurrences still gets an instance.
    """
    sub = _witness(schema)
    try:
        inst = apply_schema(schema, sub)
        return inst.premises, inst.conclusion, sub
    except TypeViolation:
        values = _variants(schema)
        return (tuple(_fill(p, values) for p in schema.premises),
                _fill(schema.conclusion, values), sub)


def _violation(cond, schema, message, names, evidence=()):
    prem, concl, sub = _instance(schema)
    wit = tuple((n, sub[n]) for n in sorted(names))
    return Violation(cond, schema.name, message, prem, concl, wit, tuple(evidence))


def _contains(node, value) -> bool:
    """Does ``value`` occur as a subterm of ``node``?"""
    if node == value:
        return True
    if isinstance(node, Sequent):
        return _contains(node.lhs, value) or _contains(node.rhs, value)
    if isinstance(node, Leaf):
        return _contains(node.term, value)
    if isinstance(node, (OpApp, SApp)):
        return _contains(node.left, value) or _contains(node.right, value)
    return False


# ---------------------------------------------------------------------------
# the checks

def _op_metas(seq: Sequent) -> set[str]:
    return {m.name for m in _meta_nodes(seq) if isinstance(m, OpMeta)}


def check_c1(schema: RuleSchema) -> list[Violation]:
    if schema.kind == "cut" or not schema.premises:
        return []
    kept = _op_metas(schema.conclusion)
    lost = sorted(set().union(*(_op_metas(p) for p in schema.premises)) - kept)
    if not lost:
        return []
    return [_violation("C1", schema,
                       f"formula {', '.join(lost)} of a premise is not a subterm of the conclusion",
                       lost)]


def check_c2(schema: RuleSchema) -> list[Violation]:
    kinds: dict[str, set] = {}
    for seq in (*schema.premises, schema.conclusion):
        for m in _meta_nodes(seq):
            kinds.setdefault(m.name, set()).add((type(m), m.tag))
    bad = sorted(n for n, ks in kinds.items() if len(ks) > 1)
    if not bad:
        return []
    prem, concl, _ = _instance(schema)
    values = _variants(schema)
    out = []
    for n in bad:
        tags = ", ".join(sorted(str(t) for _, t in kinds[n]))
        wit = tuple((n, values[(n, cls, tag)]) for cls, tag in
                    sorted(kinds[n], key=lambda k: (k[0].__name__, str(k[1]))))
        out.append(Violation("C'2", schema.name, f"parameter {n} occurs with types {tags}",
                             prem, concl, wit))
    return out


def _meta_sides(schema: RuleSchema) -> dict[str, list[tuple[int, tuple, Side]]]:
    """Structure metavariable to (sequent index, path, side); the conclusion is index -1."""
    out: dict[str, list] = {}
    for k, seq in [(-1, schema.conclusion)] + list(enumerate(schema.premises)):
        for p, m in meta_paths(seq):
            out.setdefault(m.name, []).append((k, p, side_of(seq, p)))
    return out


def check_c4(schema: RuleSchema) -> list[Violation]:
    out = []
    for name, occ in sorted(_meta_sides(schema).items()):
        sides = {s for _, _, s in occ}
        if len(sides) > 1:
            pre = next(o for o in occ if o[2] is Side.PRECEDENT)
            suc = next(o for o in occ if o[2] is Side.SUCCEDENT)
            out.append(_violation(
                "C4", schema, f"parameter {name} occurs in both precedent and succedent position",
                [name], [(name, pre[:2], suc[:2])]))
    return out


def check_c3(schema: RuleSchema) -> list[Violation]:
    if not schema.premises:
        return []
    out = []
    counts: dict[str, list] = {}
    for p, m in meta_paths(schema.conclusion):
        counts.setdefault(m.name, []).append((p, m))
    for name, occ in sorted(counts.items()):
        if len(occ) > 1 and occ[0][1].tag not in EXEMPT_FROM_PROLIFERATION:
            out.append(_violation("C'3", schema,
                                  f"parameter {name} occurs {len(occ)} times in the conclusion",
                                  [name], [(name, tuple(p for p, _ in occ))]))
    return out


def check_c10(schema: RuleSchema) -> list[Violation]:
    if schema.kind != "cut":
        return []
    tags = [s.tag for s in (*schema.premises, schema.conclusion)]
    if None not in tags and len(set(tags)) == 1:
        return []
    shown = ", ".join(str(t) for t in tags)
    return [_violation("C10", schema, f"cut is not type-uniform (sequent types {shown})",
                       sorted(schema.metas))]


CHECKS = (check_c1, check_c2, check_c3, check_c4, check_c10)


def lint_schema(schema: RuleSchema) -> list[Violation]:
    if schema.macro or schema.atom:
        return []
    return [v for check in CHECKS for v in check(schema)]


def lint_catalog(rules: Iterable[RuleSchema]) -> list[Violation]:
    """All per-schema violations, in catalog order."""
    return [v for schema in rules for v in lint_schema(schema)]


# ---------------------------------------------------------------------------
# independent verification on the instance

def _verify_c1(v: Violation) -> bool:
    return all(any(_contains(p, val) for p in v.premises) and not _contains(v.conclusion, val)
               for _, val in v.witness)


def _verify_c2(v: Violation) -> bool:
    # one parameter received values of different types, all present in the instance
    tags = {val.tag for _, val in v.witness}
    present = all(any(_contains(s, val) for s in (*v.premises, v.conclusion))
                  for _, val in v.witness)
    return len({n for n, _ in v.witness}) == 1 and len(tags) > 1 and present


def _seq_of(v: Violation, k: int) -> Sequent:
    return v.conclusion if k == -1 else v.premises[k]


def _verify_c4(v: Violation) -> bool:
    _, (k1, p1), (k2, p2) = v.evidence[0]
    s1, s2 = _seq_of(v, k1), _seq_of(v, k2)
    val = v.witness[0][1]
    return (get_at(s1, p1) == val and get_at(s2, p2) == val
            and side_of(s1, p1) is Side.PRECEDENT and side_of(s2, p2) is Side.SUCCEDENT)


def _verify_c3(v: Violation) -> bool:
    _, paths = v.evidence[0]
    val = v.witness[0][1]
    return len(paths) > 1 and all(get_at(v.conclusion, p) == val for p in paths)


def _verify_c10(v: Violation) -> bool:
    tags = [s.tag for s in (*v.premises, v.conclusion)]
    return None in tags or len(set(tags)) > 1


_VERIFY = {"C1": _verify_c1, "C'2": _verify_c2, "C4": _verify_c4, "C'3": _verify_c3,
           "C10": _verify_c10}


def lint_lines(rules: Iterable[RuleSchema]) -> list[str]:
    """Human-readable lint output, one line per violation plus the delegated conditions."""
    rules = list(rules)
    found = lint_catalog(rules)
    out = [str(v) for v in found]
    out.append(f"{len(rules)} schemas, {len(found)} violations "
               f"(checked: {', '.join(LINTED)})")
    out += [f"{c}: {msg}" for c, msg in DELEGATED.items()]
    return out
