import pytest

from dyncalc.metatheory import (
    DELEGATED, LINTED, check_c2, check_c3, lint_catalog, lint_lines, lint_schema,
)
from dyncalc.rules import catalog, load_rules
from dyncalc.syntax import render

from conftest import DATA


def one_rule(text):
    (schema,) = load_rules(text)
    return schema


@pytest.mark.parametrize("base", ["intuitionistic", "classical"])
def test_shipped_catalog_is_clean(base):
    assert lint_catalog(catalog(base)) == []


@pytest.mark.parametrize("mutant,condition,count", [
    ("mutant_c1.rules", "C1", 1),
    ("mutant_c4.rules", "C4", 2),
    ("mutant_c10.rules", "C10", 1),
])
def test_each_mutant_triggers_exactly_its_condition(mutant, condition, count):
    found = lint_catalog(load_rules((DATA / mutant).read_text()))
    assert {v.condition for v in found} == {condition}
    assert len(found) == count
    assert all(v.verify() for v in found)


def test_c1_names_the_lost_formula():
    (v,) = lint_catalog(load_rules((DATA / "mutant_c1.rules").read_text()))
    assert v.rule == "and_L" and [k for k, _ in v.witness] == ["C"]


def test_c4_names_both_misplaced_structures():
    found = lint_catalog(load_rules((DATA / "mutant_c4.rules").read_text()))
    assert sorted(v.witness[0][0] for v in found) == ["Y", "Z"]


RETYPED = """
rule retyped
  meta X Y:FM
  premise X |- Y
  meta X:AG
  conclusion X |- X
end
"""


def test_c2_catches_a_metavariable_that_changes_type():
    found = check_c2(one_rule(RETYPED))
    assert found and found[0].condition == "C'2" and found[0].verify()


REPEATED = """
rule duplicate
  meta X Y:FM
  premise X |- Y
  conclusion X ; X |- Y
end
"""


def test_c3_catches_a_repeated_parameter():
    (v,) = check_c3(one_rule(REPEATED))
    assert v.verify()
    assert render(v.conclusion).count(render(v.witness[0][1])) == 2


def test_agent_parameters_may_repeat():
    swaps = [s for s in catalog("intuitionistic") if s.kind == "swap"]
    assert swaps and all(check_c3(s) == [] for s in swaps)


def test_verification_rejects_a_tampered_witness():
    (v,) = check_c3(one_rule(REPEATED))
    other = v.conclusion.rhs
    tampered = type(v)(v.condition, v.rule, v.message, v.premises, v.conclusion,
                       ((v.witness[0][0], other),), v.evidence)
    assert not tampered.verify()


def test_lint_skips_macros():
    macros = [s for s in catalog("intuitionistic") if s.macro]
    assert macros and all(lint_schema(s) == [] for s in macros)


def test_lint_lines_summarise_and_list_delegated_conditions():
    lines = lint_lines(catalog("classical"))
    assert lines[0].startswith("147 schemas, 0 violations")
    assert all(c in lines[0] for c in LINTED)
    assert len(lines) == 1 + len(DELEGATED)
