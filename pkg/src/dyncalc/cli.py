"""Command-line front end.

Exit status is 0 when every requested check passes, 1 when a check fails and 2
on usage or parse errors.  Output is deterministic: no timings, and files are
always visited in sorted order.
"""

from __future__ import annotations

import sys
from importlib.resources import files
from pathlib import Path

import click

from .checker import check_proof, decls_of, dumps, latex_proof, load
from .conservativity import WITNESS, conservativity_report
from .cutelim import DEFAULT_FUEL, CutElimError, EliminationLog, eliminate_cuts
from .display import DEFAULT_DEPTH, SearchExhausted, display_search, displayed_side
from .metatheory import lint_catalog, lint_lines
from .rules import catalog, dump_rules, load_rules
from .syntax import ParseError, parse_sequent, render
from .translate import from_deak, parse_deak

EXISTING_FILE = click.Path(exists=True, dir_okay=False, path_type=Path)


def _fail_usage(message: str):
    click.echo(f"error: {message}", err=True)
    sys.exit(2)


def _load(path: Path):
    try:
        return load(path)
    except (ParseError, UnicodeDecodeError) as e:
        _fail_usage(f"{path}: {e}")


def _base(classical: bool) -> str:
    return "classical" if classical else "intuitionistic"


def _path_str(path) -> str:
    return ".".join(map(str, path)) or "root"


def _report_failures(script, report) -> None:
    for path, message in report.failures:
        rule = script.tree.at(path).rule
        click.echo(f"  at {_path_str(path)} [{rule}]: {message}")


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
def cli():
    """Proof kernel for the multi-type Dynamic Calculus for EAK."""


@cli.command()
@click.argument("file", type=EXISTING_FILE)
@click.option("--classical", is_flag=True, help="Check against the classical base.")
@click.option("--allow-cut", is_flag=True, help="Accept cut inferences.")
def check(file, classical, allow_cut):
    """Validate a proof script."""
    script = _load(file)
    report = check_proof(script.tree, base=_base(classical), allow_cut=allow_cut)
    click.echo(f"{file.name}: {render(script.tree.conclusion)}: {report.summary()}")
    _report_failures(script, report)
    sys.exit(0 if report.ok else 1)


@cli.command()
@click.argument("file", type=EXISTING_FILE)
@click.option("--fuel", type=click.IntRange(min=1), default=DEFAULT_FUEL, show_default=True,
              help="Maximum number of reduction steps.")
@click.option("--out", "out", type=click.Path(dir_okay=False, path_type=Path),
              help="Write the cut-free script here instead of standard output.")
def cutfree(file, fuel, out):
    """Eliminate every cut from a proof script."""
    script = _load(file)
    before = check_proof(script.tree, allow_cut=True, allow_hyps=True)
    if not before.ok:
        click.echo(f"{file.name}: input does not check")
        _report_failures(script, before)
        sys.exit(1)
    log = EliminationLog()
    try:
        result = eliminate_cuts(script.tree, fuel=fuel, log=log)
    except CutElimError as e:
        click.echo(f"{file.name}: cut elimination failed: {e}")
        sys.exit(1)
    after = check_proof(result, allow_cut=False, allow_hyps=True)
    if not after.ok:
        click.echo(f"{file.name}: result does not check: {after.failures[0][1]}")
        sys.exit(1)
    text = dumps(result, {**script.decls, **decls_of(result)},
                 script.comments + [f"cut-free form: {log.summary()}"])
    if out is None:
        click.echo(text, nl=False)
    else:
        out.write_text(text, encoding="utf-8")
        click.echo(f"{file.name}: {log.summary()}; wrote {out}")


@cli.command()
@click.argument("expr")
@click.option("--decls", default="", help='Declarations, e.g. "agent a b. fnc alpha."')
def translate(expr, decls):
    """Translate a single-type formula into the multi-type language."""
    try:
        click.echo(render(from_deak(parse_deak(expr, _decls(decls) or None))))
    except ParseError as e:
        _fail_usage(str(e))


def _decls(text: str) -> dict[str, str]:
    """Parse ``"prop p q. agent a. fnc alpha."`` into a declaration table."""
    table = {}
    for part in text.split("."):
        words = part.split()
        if not words:
            continue
        if words[0] not in ("prop", "agent", "fnc"):
            _fail_usage(f"bad declaration kind {words[0]!r}")
        for name in words[1:]:
            table[name] = words[0]
    return table


def _parse_path(text: str) -> tuple[int, ...]:
    try:
        path = tuple(int(k) for k in text.split("."))
    except ValueError:
        _fail_usage(f"bad path {text!r}: use dot-separated indices such as 0.1")
    if not path or path[0] not in (0, 1) or any(k not in (0, 1) for k in path):
        _fail_usage(f"bad path {text!r}: indices are 0 or 1, starting with the side")
    return path


@cli.command()
@click.argument("file", type=EXISTING_FILE)
@click.option("--seq", "seq_text", help="Sequent to work on (default: the endsequent of FILE).")
@click.option("--path", "path_text", required=True,
              help="Occurrence to display, e.g. 0.1 (side, then argument indices).")
@click.option("--depth", type=click.IntRange(min=0), default=DEFAULT_DEPTH, show_default=True)
@click.option("--decls", default="", help="Extra declarations for --seq.")
def display(file, seq_text, path_text, depth, decls):
    """Display a substructure occurrence by display postulates."""
    script = _load(file)
    try:
        seq = parse_sequent(seq_text, {**script.decls, **_decls(decls)}) if seq_text else script.tree.conclusion
    except ParseError as e:
        _fail_usage(str(e))
    path = _parse_path(path_text)
    try:
        steps = display_search(seq, path, max_depth=depth)
    except KeyError:
        _fail_usage(f"path {path_text} is not an occurrence of {render(seq)}")
    except SearchExhausted as e:
        click.echo(str(e))
        sys.exit(1)
    click.echo(render(seq))
    for st in steps:
        click.echo(f"  {st}")
    click.echo(f"displayed in {len(steps)} steps as {displayed_side(seq, path, steps).value}")


@cli.command()
@click.argument("file", type=EXISTING_FILE)
def conserve(file):
    """Report whether a proof witnesses a single-type derivation."""
    report = conservativity_report(_load(file).tree)
    click.echo(str(report))
    sys.exit(0 if report.verdict == WITNESS else 1)


@cli.command("lint-rules")
@click.option("--rules", "rules_file", type=EXISTING_FILE,
              help="Rule file to lint (default: the shipped catalog).")
@click.option("--classical", is_flag=True)
def lint_rules(rules_file, classical):
    """Check the per-schema cut-elimination conditions."""
    if rules_file is None:
        schemas = catalog(_base(classical))
    else:
        try:
            schemas = load_rules(rules_file.read_text(encoding="utf-8"))
        except ParseError as e:
            _fail_usage(f"{rules_file}: {e}")
    for line in lint_lines(schemas):
        click.echo(line)
    sys.exit(1 if lint_catalog(schemas) else 0)


@cli.command()
@click.option("--classical", is_flag=True)
def rules(classical):
    """Print the rule catalog in the rule-file format."""
    click.echo(dump_rules(catalog(_base(classical))), nl=False)


@cli.command()
@click.argument("file", type=EXISTING_FILE)
def latex(file):
    """Print a proof as a bussproofs environment."""
    click.echo(latex_proof(_load(file).tree), nl=False)


def bundled_corpus() -> Path:
    return Path(str(files("dyncalc") / "corpus"))


def check_file(path: Path) -> tuple[str, bool, str]:
    """(name, ok, detail) for one corpus file."""
    try:
        script = load(path)
    except (ParseError, UnicodeDecodeError) as e:
        return path.name, False, f"parse error: {e}"
    report = check_proof(script.tree, allow_cut=False)
    if report.ok:
        return path.name, True, f"{report.stats['nodes']} nodes"
    where, message = report.failures[0]
    return path.name, False, f"at {_path_str(where)}: {message}"


@cli.command()
@click.option("--dir", "directory", type=click.Path(exists=True, file_okay=False, path_type=Path),
              help="Directory of .dcp files (default: the bundled corpus).")
def corpus(directory):
    """Check every proof script in a directory."""
    directory = directory or bundled_corpus()
    paths = sorted(directory.glob("*.dcp"))
    if not paths:
        _fail_usage(f"no .dcp files in {directory}")
    results = [check_file(p) for p in paths]
    width = max(len(name) for name, _, _ in results)
    for name, ok, detail in results:
        click.echo(f"{name:<{width}}  {'pass' if ok else 'FAIL'}  {detail}")
    passed = sum(ok for _, ok, _ in results)
    click.echo(f"{passed}/{len(results)} passed")
    sys.exit(0 if passed == len(results) else 1)


def main(argv=None):
    cli.main(args=argv, prog_name="dyncalc")


if __name__ == "__main__":
    main()
