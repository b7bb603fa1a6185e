"""Write the principal-reduction golden files.

Each ``NAME.in.dcp`` is a cut between a right and a left introduction of the
same term, with open premises ``pi0``, ``pi1``, ...  Each ``NAME.out.dcp`` is
the expected reduct, transcribed here directly from the reduction schemas
(``expected_*`` below) without calling the reduction engine.  The propositional
reducts have no printed counterpart and are frozen from the engine as
regression data; the test suite validates them separately.

Run from the repository root:  python3 scripts/make_goldens.py
"""

from __future__ import annotations

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from dyncalc.checker import ProofTree, check_proof, decls_of, dumps, hyp  # noqa: E402
from dyncalc.cutelim import principal_reduce  # noqa: E402
from dyncalc.generators import principal_cut  # noqa: E402
from dyncalc.rules import get_rule  # noqa: E402
from dyncalc.syntax import I, Leaf, SApp, Sequent, TOP, BOT, Atom, Fm, Ag, Fnc  # noqa: E402

OUT = Path(__file__).resolve().parents[1] / "src" / "dyncalc" / "data" / "golden"


def N(rule, lhs, rhs, *kids):
    get_rule(rule)  # fail early on a misspelt rule
    return ProofTree(rule, Sequent(lhs, rhs), tuple(kids))


def cut(lhs, rhs, left, right):
    return N(f"Cut_{left.conclusion.tag}", lhs, rhs, left, right)


def hyps(t):
    return {n.label: n for _, n in t.nodes() if n.is_hyp}


# connective names for index i: (structural, left adjoint, right adjoint)
def tri_names(i, black):
    s = f"SBTRI{i}" if black else f"STRI{i}"
    if i == 1:
        left = "SLARR1" if black else "SBLARR1"
    else:
        left = f"VLARR{i}" if black else f"VBLARR{i}"
    if i == 3:
        right = "VRARR3" if black else "VBRARR3"
    else:
        right = f"SRARR{i}" if black else f"SBRARR{i}"
    return s, left, right


def expected_triangle(c, i, black):
    """x S y |- a T b  ;  a T b |- z   becomes: cut on a inside, then on b."""
    h = hyps(c)
    p0, p1, p2 = h["pi0"], h["pi1"], h["pi2"]
    x, a = p0.conclusion.lhs, p0.conclusion.rhs
    y, b = p1.conclusion.lhs, p1.conclusion.rhs
    z = p2.conclusion.rhs
    S, L, R = tri_names(i, black)
    left_post, right_post = f"{S}/{L}", f"{S}/{R}"
    t = N(left_post, a, SApp(L, z, b), p2)
    t = cut(x, SApp(L, z, b), p0, t)
    t = N(left_post, SApp(S, x, b), z, t)
    t = N(right_post, b, SApp(R, x, z), t)
    t = cut(y, SApp(R, x, z), p1, t)
    return N(right_post, SApp(S, x, y), z, t)


def expected_arrow(c, i, black):
    """y |- a A b  ;  a A b |- x A z   becomes: cut on a inside, then on b."""
    h = hyps(c)
    p0, p1, p2 = h["pi0"], h["pi1"], h["pi2"]
    y = p0.conclusion.lhs
    arrow = p0.conclusion.rhs  # a SRARRi b
    a, b = arrow.left, arrow.right
    x = p1.conclusion.lhs
    z = p2.conclusion.rhs
    # the display partner of the arrow is the triangle of the other colour
    S, L, _ = tri_names(i, not black)
    A = arrow.conn
    t = N(f"{S}/{A}", SApp(S, a, y), b, p0)
    t = N(f"{S}/{L}", a, SApp(L, b, y), t)
    t = cut(x, SApp(L, b, y), p1, t)
    t = N(f"{S}/{L}", SApp(S, x, y), b, t)
    t = cut(SApp(S, x, y), z, t, p2)
    return N(f"{S}/{A}", y, SApp(A, x, z), t)


def leaf(name, tag):
    return Leaf(Atom(name, tag))


def atomic_cases():
    p = leaf("p", Fm)
    alpha, beta = leaf("alpha", Fnc), leaf("beta", Fnc)
    phi = SApp("STRI0", alpha, p)
    psi = SApp("SRARR0", beta, p)
    out = {}
    # atom axioms: Phi p |- p  and  p |- Psi p  give  Phi p |- Psi p
    out["atom"] = (cut(phi, psi, N("Atom", phi, p), N("Atom", p, psi)), N("Atom", phi, psi))
    out["atom_id"] = (cut(p, p, N("Id", p, p), N("Id", p, p)), N("Id", p, p))
    X = leaf("q", Fm)
    pi = hyp("pi0", Sequent(I, X))
    out["top"] = (cut(I, X, N("TopR", I, Leaf(TOP)), N("top_L", Leaf(TOP), X, pi)), pi)
    pi = hyp("pi0", Sequent(X, I))
    out["bot"] = (cut(X, I, N("bot_R", X, Leaf(BOT), pi), N("BotL", Leaf(BOT), I)), pi)
    a = leaf("a", Ag)
    out["ag"] = (cut(a, a, N("AgId", a, a), N("AgId", a, a)), N("AgId", a, a))
    out["fnc"] = (cut(alpha, alpha, N("FncId", alpha, alpha), N("FncId", alpha, alpha)),
                  N("FncId", alpha, alpha))
    return out


PROPOSITIONAL = [("and", "and_R", "and_L"), ("or", "or_R", "or_L"), ("imp", "imp_R", "imp_L"),
                 ("limp", "limp_R", "limp_L"), ("lsub", "lsub_R", "lsub_L"),
                 ("rsub", "rsub_R", "rsub_L")]


def cases():
    out = atomic_cases()
    for i in range(4):
        for black in (False, True):
            name = f"{'b' if black else ''}tri{i}"
            c = principal_cut(f"{name}_R", f"{name}_L")
            out[name] = (c, expected_triangle(c, i, black))
    for i in range(3):
        for black in (False, True):
            name = f"{'b' if black else ''}rarr{i}"
            c = principal_cut(f"{name}_R", f"{name}_L")
            out[name] = (c, expected_arrow(c, i, black))
    for name, r, l in PROPOSITIONAL:
        c = principal_cut(r, l)
        out[name] = (c, principal_reduce(c))
    return out


HEADER = {
    "in": "cut between a right and a left introduction of the same term",
    "out": "expected reduct",
}


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    for name, (cin, cout) in sorted(cases().items()):
        for t in (cin, cout):
            rep = check_proof(t, allow_hyps=True)
            if not rep.ok:
                raise SystemExit(f"{name}: {rep.failures}")
        frozen = name in {n for n, _, _ in PROPOSITIONAL}
        decls = {**decls_of(cin), **decls_of(cout)}
        (OUT / f"{name}.in.dcp").write_text(dumps(cin, decls, [f"{name}: {HEADER['in']}"]))
        note = "frozen from the engine (regression)" if frozen else "transcribed reduction schema"
        (OUT / f"{name}.out.dcp").write_text(
            dumps(cout, decls, [f"{name}: {HEADER['out']}, {note}"]))
        print(f"wrote {name}")


if __name__ == "__main__":
    main()
