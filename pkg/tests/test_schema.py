"""Axiom-schema checkers, the three-way crosscheck, and the lemma battery."""

import pytest

from kripkelab.formula import parse, render
from kripkelab.frame import chain, tree
from kripkelab.hierarchy import DefConfig
from kripkelab.schema import (
    BASE_SCHEMAS,
    build_template,
    check_all,
    check_instance,
    check_schema,
    CheckBounds,
    CheckReport,
    EQUIVALENT_TRIO,
    bounding_uniformity_agreement,
    lemma_suite,
    proposition1_crosscheck,
    SchemaId,
)
from kripkelab.specfile import canonical_structure, load_structure, uniformity_gap

from conftest import FIXTURES

EXPECTED_TAGS = [
    "tower-of-one-sigma",
    "def-step-of-tower",
    "zero-family-fixed-point",
    "nonzero-carve",
    "xi-ordinal-containment",
    "externalization-chains",
    "branch-recovery",
    "staged-collection-formula",
    "fixpoint-extremality",
    "uniformity-gap",
    "semantic-battery",
]


@pytest.fixture(scope="module")
def t2():
    return canonical_structure(tree(2))


def test_check_bounds_validation():
    with pytest.raises(ValueError):
        CheckBounds(formula_depth=-1)
    with pytest.raises(ValueError):
        CheckBounds(node_scope="everywhere")


def test_build_template_closes_the_formula():
    phi = parse("x in #A")
    tpl = build_template(SchemaId.DELTA0_COMPREHENSION, phi)
    assert "exists" in render(tpl) and "forall" in render(tpl)
    # axioms take no instance formula
    with pytest.raises(ValueError):
        build_template(SchemaId.PAIRING, phi)
    with pytest.raises(ValueError):
        build_template(SchemaId.DELTA0_COMPREHENSION, None)
    # unbounded instances are rejected for bounded schemas
    with pytest.raises(ValueError):
        build_template(SchemaId.DELTA0_COMPREHENSION, parse("exists q . q in x"))


def test_check_instance_verdicts(t2):
    good = check_instance(t2, SchemaId.EMPTY_SET)
    assert good.holds and good.counterexample is None
    bad = check_instance(t2, SchemaId.PAIRING)
    assert not bad.holds
    assert bad.counterexample == ("Pairing", "", (), "e")


def test_check_schema_epsilon_induction_holds(t2):
    report = check_schema(t2, SchemaId.EPSILON_INDUCTION, CheckBounds(1, 1))
    assert isinstance(report, CheckReport)
    assert report.holds and report.counterexample is None
    assert report.stats["instances"] == 60
    assert report.stats["nodes"] == 3


def test_check_schema_pairing_fails_on_a_finite_universe(t2):
    report = check_schema(t2, SchemaId.PAIRING, CheckBounds(1, 1))
    assert not report.holds
    assert report.counterexample == ("Pairing", "", (), "e")


def test_designated_instances_come_first():
    gap = uniformity_gap()
    report = check_schema(gap, SchemaId.DELTA0_UNIFORMITY, CheckBounds(1, 1, "bottom"))
    assert not report.holds
    assert report.counterexample == (
        "Delta0Uniformity", "y in x", ("A=staged",), "bot"
    )
    assert report.note == "cofinal stage family"
    assert report.stats["designated"] >= 1


def test_gap_bounding_scope_contrast():
    # enlarging the universe along the fan outruns every internal bound, so
    # whole-frame scope fails while the bottom reading stays consistent
    gap = uniformity_gap()
    assert check_schema(gap, SchemaId.DELTA0_BOUNDING, CheckBounds(1, 1, "bottom")).holds
    assert not check_schema(gap, SchemaId.DELTA0_BOUNDING, CheckBounds(1, 1, "all")).holds


def test_check_all_covers_every_schema(t2):
    out = check_all(t2, CheckBounds(1, 0))
    assert set(out) == set(SchemaId)
    assert all(isinstance(r, CheckReport) for r in out.values())
    assert out[SchemaId.EMPTY_SET].holds
    assert not out[SchemaId.PAIRING].holds


def test_bounding_uniformity_agreement_counts(t2):
    c1 = canonical_structure(chain(1))
    rep = bounding_uniformity_agreement(c1, CheckBounds(1, 1))
    assert rep.ok and rep.mismatches == () and rep.pairs == 1323
    rep2 = bounding_uniformity_agreement(t2, CheckBounds(1, 1))
    assert rep2.ok and rep2.pairs == 3402


def test_trio_and_base_listings():
    assert EQUIVALENT_TRIO == (
        SchemaId.PI_PERSISTENCE,
        SchemaId.PI_UNIFORMITY,
        SchemaId.DELTA0_UNIFORMITY,
    )
    assert SchemaId.EPSILON_INDUCTION in BASE_SCHEMAS


def test_proposition1_crosscheck_rows(corpus_dir):
    structs = [load_structure(p) for p in sorted(corpus_dir.glob("*.struct"))]
    report = proposition1_crosscheck(structs, CheckBounds(1, 1))
    assert len(report.rows) == len(structs)
    assert report.agreements + report.disagreements == len(structs)
    for row in report.rows:
        assert [name for name, _ in row.trio] == [s.value for s in EQUIVALENT_TRIO]
        assert row.agreement == (len({h for _, h in row.trio}) == 1)
        if not row.hypothesis_met:
            assert row.note == "proposition hypothesis unmet"


def test_lemma_suite_validation():
    with pytest.raises(ValueError):
        lemma_suite(tree_depth=4)
    with pytest.raises(ValueError):
        lemma_suite(def_depth=-1)
    with pytest.raises(ValueError):
        lemma_suite(samples=-5)


def test_lemma_suite_default_is_clean():
    rows = lemma_suite()
    assert [r.tag for r in rows] == EXPECTED_TAGS
    assert all(r.status == "holds" for r in rows)
    assert all(r.checked > 0 for r in rows)


def test_lemma_suite_depth_zero_degrades_honestly():
    rows = lemma_suite(def_depth=0, samples=40)
    by_tag = {r.tag: r for r in rows}
    assert [r.tag for r in rows] == EXPECTED_TAGS
    for tag in EXPECTED_TAGS:
        row = by_tag[tag]
        assert row.status in ("holds", "under-enumeration")
        if row.status == "under-enumeration":
            assert row.note == "definability depth 0"
    assert by_tag["externalization-chains"].status == "holds"
    assert by_tag["fixpoint-extremality"].status == "holds"
    assert by_tag["uniformity-gap"].status == "holds"
    battery = by_tag["semantic-battery"]
    assert battery.status == "holds"
    assert "absoluteness leg skipped at definability depth 0" in battery.note
