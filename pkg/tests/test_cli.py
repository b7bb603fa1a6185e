import pytest
from click.testing import CliRunner

from dyncalc.checker import ProofTree, decls_of, dumps, load
from dyncalc.cli import cli
from dyncalc.cutelim import compose_cut
from dyncalc.syntax import parse_sequent

from conftest import CORPUS, DATA, DECLS, corpus_files


@pytest.fixture
def run():
    runner = CliRunner()

    def invoke(*args):
        return runner.invoke(cli, [str(a) for a in args], catch_exceptions=False)
    return invoke


def write_tree(path, tree, comments=()):
    path.write_text(dumps(tree, decls_of(tree), list(comments)))
    return path


def test_check_valid_and_invalid(run, tmp_path):
    assert run("check", CORPUS / "diamond_atom_fwd.dcp").exit_code == 0
    bad = write_tree(tmp_path / "bad.dcp", ProofTree("Id", parse_sequent("p |- q", DECLS)))
    r = run("check", bad)
    assert r.exit_code == 1 and "at root [Id]" in r.output


def test_check_usage_errors(run, tmp_path):
    assert run("check", tmp_path / "missing.dcp").exit_code == 2
    junk = tmp_path / "junk.dcp"
    junk.write_text("(rule")
    assert run("check", junk).exit_code == 2


def test_cut_needs_a_flag(run, tmp_path):
    s = lambda t: parse_sequent(t, DECLS)
    t = ProofTree("Cut_FM", s("p |- p"), (ProofTree("Id", s("p |- p")),) * 2)
    f = write_tree(tmp_path / "cut.dcp", t)
    assert run("check", f).exit_code == 1
    assert run("check", f, "--allow-cut").exit_code == 0


def test_cutfree_writes_a_checkable_script(run, tmp_path):
    fwd, bwd = (load(CORPUS / f"box_and_{d}.dcp") for d in ("fwd", "bwd"))
    f = write_tree(tmp_path / "composed.dcp", compose_cut(fwd.tree, bwd.tree))
    out = tmp_path / "out.dcp"
    r = run("cutfree", f, "--out", out)
    assert r.exit_code == 0, r.output
    assert run("check", out).exit_code == 0
    assert "cut-free form" in out.read_text()


def test_cutfree_reports_fuel_exhaustion(run, tmp_path):
    fwd, bwd = (load(CORPUS / f"box_and_{d}.dcp") for d in ("fwd", "bwd"))
    f = write_tree(tmp_path / "composed.dcp", compose_cut(fwd.tree, bwd.tree))
    r = run("cutfree", f, "--fuel", 1)
    assert r.exit_code == 1 and "fuel exhausted" in r.output


def test_translate(run):
    r = run("translate", "dia(alpha, p)")
    assert r.exit_code == 0 and r.output.strip() == "alpha tri0 p"
    assert run("translate", "dia(alpha p)").exit_code == 2


def test_display(run):
    f = CORPUS / "diamond_atom_fwd.dcp"
    r = run("display", f, "--seq", "p |- alpha SRARR0 q", "--decls", "prop q.", "--path", "1.0")
    assert r.exit_code == 0, r.output
    assert "alpha |- q VLARR0 p" in r.output
    assert r.output.strip().endswith("as precedent")
    assert run("display", f, "--path", "7.7").exit_code == 2


def test_conserve(run, tmp_path):
    assert run("conserve", CORPUS / "diamond_atom_fwd.dcp").exit_code == 0
    s = lambda t: parse_sequent(t, DECLS)
    t = ProofTree("W1_L", s("(q VBLARR0 p) STRI0 r |- r < r"), (ProofTree("Id", s("r |- r")),))
    r = run("conserve", write_tree(tmp_path / "weak.dcp", t))
    assert r.exit_code == 1 and "verdict: not-a-witness" in r.output


def test_lint_rules(run):
    r = run("lint-rules")
    assert r.exit_code == 0 and "0 violations" in r.output
    r = run("lint-rules", "--rules", DATA / "mutant_c1.rules")
    assert r.exit_code == 1 and r.output.startswith("C1 and_L")


def test_rules_and_latex(run):
    r = run("rules", "--classical")
    # the four macros and the atom placeholder have no plain schema form
    names = [l.split()[1] for l in r.output.splitlines() if l.startswith("rule ")]
    assert r.exit_code == 0 and len(names) == 147 - 5 and "Gri_L" in names
    r = run("latex", CORPUS / "diamond_atom_fwd.dcp")
    assert r.exit_code == 0 and r.output.startswith(r"\begin{prooftree}")


def test_corpus_table_is_deterministic(run):
    first, second = run("corpus"), run("corpus")
    assert first.exit_code == 0 and first.output == second.output
    lines = first.output.splitlines()
    assert lines[-1] == f"{len(corpus_files())}/{len(corpus_files())} passed"
    assert [l.split()[0] for l in lines[:-1]] == [f.name for f in corpus_files()]


def test_corpus_reports_failures(run, tmp_path):
    (tmp_path / "a.dcp").write_text((CORPUS / "diamond_atom_fwd.dcp").read_text())
    write_tree(tmp_path / "b.dcp", ProofTree("Id", parse_sequent("p |- q", DECLS)))
    r = run("corpus", "--dir", tmp_path)
    assert r.exit_code == 1
    assert "b.dcp  FAIL" in r.output and r.output.strip().endswith("1/2 passed")
