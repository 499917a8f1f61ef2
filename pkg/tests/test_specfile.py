"""Structure files: grammar, builders, privacy rules, and round-trips."""

import pytest

from kripkelab.construct import empty_set, internal_nat, one_sigma, p_hat
from kripkelab.frame import fan, tree
from kripkelab.schema import SchemaId
from kripkelab.semantics import forced_equal, forced_member, universe_at
from kripkelab.specfile import (
    build_structure,
    canonical_structure,
    dump_structure_spec,
    load_structure,
    parse_structure_spec,
    SpecError,
    UNIFORMITY_GAP_TEXT,
    uniformity_gap,
)

from conftest import FIXTURES
from util import classes, find_class

BASIC = """\
frame tree depth=2
zero = empty
two = nat 2
d0 = one_sigma 0
p = pair zero two
u = union p
_hidden = nat 3
"""


def test_parse_and_dump_round_trip():
    spec = parse_structure_spec(BASIC)
    text = dump_structure_spec(spec)
    assert parse_structure_spec(text) == spec
    # canonical form is a fixed point of the round trip
    assert dump_structure_spec(parse_structure_spec(text)) == text


def test_build_structure_binds_names():
    s = build_structure(parse_structure_spec(BASIC))
    f = s.frame
    assert forced_equal(f, "e", s.names["zero"], empty_set(f))
    assert forced_equal(f, "e", s.names["two"], internal_nat(f, 2))
    assert forced_equal(f, "e", s.names["d0"], one_sigma(f, "0"))
    # pair holds both, union of the pair flattens to two's members plus none
    assert forced_member(f, "e", s.names["zero"], s.names["p"])
    assert forced_member(f, "e", s.names["two"], s.names["p"])
    assert forced_equal(f, "e", s.names["u"], internal_nat(f, 2))


def test_underscore_names_stay_out_of_the_universe():
    s = build_structure(parse_structure_spec(BASIC))
    f = s.frame
    assert "_hidden" in s.names
    assert find_class(f, "e", universe_at(s, "e"), internal_nat(f, 3)) is None
    assert find_class(f, "e", universe_at(s, "e"), internal_nat(f, 2)) is not None


def test_universe_directive_seeds_extensions():
    text = (
        "frame fan width=2\n"
        "_stages = staged_nats bot:1 1:2 2:3\n"
        "universe _stages\n"
    )
    s = build_structure(parse_structure_spec(text))
    sizes = {n: len(universe_at(s, n)) for n in s.frame.nodes}
    assert sizes == {"bot": 1, "1": 2, "2": 3}
    # the container itself stays out
    assert find_class(s.frame, "bot", universe_at(s, "bot"), s.names["_stages"]) is None


def test_builders_cover_the_catalog():
    text = (
        "frame tree depth=2\n"
        "q = phat\n"
        "q0 = phat0\n"
        "b = branch 1\n"
        "lv = L 1\n"
    )
    s = build_structure(parse_structure_spec(text))
    f = s.frame
    assert forced_equal(f, "e", s.names["q"], p_hat(f))
    assert forced_member(f, "e", empty_set(f), s.names["q0"])
    assert forced_member(f, "e", one_sigma(f, "1"), s.names["b"])
    assert forced_member(f, "e", empty_set(f), s.names["lv"])


@pytest.mark.parametrize(
    "text,fragment",
    [
        ("zero = empty\n", "first entry must name the frame"),
        ("frame tree depth=2\nframe tree depth=2\n", "duplicate frame line"),
        ("frame tree depth=2\nx = widget\n", "unknown builder"),
        ("frame tree depth=2\nx = pair a b\n", "unknown name"),
        ("frame tree depth=2\nx = nat 2\nx = nat 3\n", "bound twice"),
        ("frame tree depth=2\nx nat 2\n", "expected `name = builder args...`"),
        ("frame tree depth=2\nuniverse ghost\n", "unknown name"),
        ("frame tree depth=2\nx = nat q\n", "bad numeral"),
        ("frame tree depth=2\nx = one_sigma zz\n", "unknown node"),
        ("frame tree depth=2\nx = nat 2 3\n", "takes 1 argument"),
        ("frame tree depth=2\nx = L -1\n", "level count"),
        ("frame tree depth=2\ndesignate Shiny phi=\"x = x\"\n", "unknown schema"),
        ("frame tree depth=2\ndesignate Pairing A=ghost\n", "unknown name"),
        ("frame fan width=2\n_s = staged_nats bot:2 1:1 2:3\nuniverse _s\n",
         "grow along the order"),
        ("frame fan width=2\n_s = staged_nats bot:1\nuniverse _s\n", "missing counts"),
    ],
)
def test_spec_errors(text, fragment):
    with pytest.raises(SpecError, match=fragment):
        build_structure(parse_structure_spec(text))


def test_gap_fixture_matches_the_shipped_file(fixtures_dir):
    on_disk = (fixtures_dir / "uniformity_gap.struct").read_text(encoding="utf-8")
    assert on_disk == UNIFORMITY_GAP_TEXT
    canon = dump_structure_spec(parse_structure_spec(UNIFORMITY_GAP_TEXT))
    assert canon == UNIFORMITY_GAP_TEXT


def test_gap_structure_shape():
    s = uniformity_gap()
    sizes = {n: len(universe_at(s, n)) for n in s.frame.nodes}
    assert sizes == {"bot": 1, "1": 2, "2": 3, "3": 4}
    note = s.notes[0]
    assert note.schema is SchemaId.DELTA0_UNIFORMITY
    assert note.phi == "y in x"
    assert note.params == (("A", "_W"),)
    assert note.node == "bot"
    assert note.label == "cofinal stage family"


def test_load_structure_from_corpus(corpus_dir):
    s = load_structure(str(corpus_dir / "level2.struct"))
    sizes = {n: len(universe_at(s, n)) for n in s.frame.nodes}
    assert sizes == {"0": 3, "1": 3}
    m = load_structure(str(corpus_dir / "markers.struct"))
    assert {n: len(universe_at(m, n)) for n in m.frame.nodes} == {"e": 8, "0": 8, "1": 8}


def test_canonical_structure_names():
    f = tree(2)
    s = canonical_structure(f)
    want = {"zero", "one", "two", "three", "phat", "phat0", "one_e", "one_0", "one_1"}
    assert set(s.names) == want
    assert forced_equal(f, "e", s.names["one_0"], one_sigma(f, "0"))
