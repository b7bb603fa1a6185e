import os
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from dyncalc.checker import load

PKG = Path(__file__).resolve().parents[1] / "src" / "dyncalc"
CORPUS = PKG / "corpus"
DATA = PKG / "data"
GOLDEN = DATA / "golden"

settings.register_profile("default", deadline=None, max_examples=100,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("ci", deadline=None, max_examples=300,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

DECLS = {"p": "prop", "q": "prop", "r": "prop", "s": "prop", "A": "prop", "B": "prop",
         "a": "agent", "b": "agent", "alpha": "fnc", "beta": "fnc"}


def corpus_files():
    return sorted(CORPUS.glob("*.dcp"))


def corpus_pairs():
    """(forward, backward) file names of every two-way corpus entry."""
    names = {f.stem for f in corpus_files()}
    pairs = [(n, n[:-4] + "_bwd") for n in sorted(names) if n.endswith("_fwd")]
    pairs.append(("swap_in_diamond_box", "swap_out_diamond_box"))
    assert all(a in names and b in names for a, b in pairs)
    return pairs


@pytest.fixture(scope="session")
def corpus():
    return {f.stem: load(f) for f in corpus_files()}


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[n])
