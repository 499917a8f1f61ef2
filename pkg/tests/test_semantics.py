"""Forcing semantics: equality, membership, persistence, decidability at
leaves, end extensions, and the structural predicates."""

import itertools

import pytest

from kripkelab.formula import enumerate_delta0, Not, parse
from kripkelab.frame import chain, leaves, leq, tree, up_set
from kripkelab.construct import internal_nat, one_sigma, empty_set
from kripkelab.hierarchy import DefConfig, def_step, structure_from_sets
from kripkelab.semantics import (
    alive,
    delta0_absolute,
    EvalError,
    ext_at,
    forced_equal,
    forced_member,
    forces,
    is_end_extension,
    is_extensional,
    is_ordinal,
    KripkeSet,
    universe_at,
)
from kripkelab.specfile import canonical_structure

from util import find_class


@pytest.fixture(scope="module")
def t2():
    return canonical_structure(tree(2))


def test_forced_equal_is_an_equivalence(t2):
    f = t2.frame
    for sigma in f.nodes:
        elems = universe_at(t2, sigma)
        for x in elems:
            assert forced_equal(f, sigma, x, x)
        for x, y in itertools.combinations(elems, 2):
            assert forced_equal(f, sigma, x, y) == forced_equal(f, sigma, y, x)
        for x, y, z in itertools.combinations(elems, 3):
            if forced_equal(f, sigma, x, y) and forced_equal(f, sigma, y, z):
                assert forced_equal(f, sigma, x, z)


def test_forced_equal_is_a_congruence_for_membership(t2):
    f = t2.frame
    for sigma in f.nodes:
        elems = universe_at(t2, sigma)
        for x, x2 in itertools.combinations(elems, 2):
            if not forced_equal(f, sigma, x, x2):
                continue
            for y in elems:
                assert forced_member(f, sigma, x, y) == forced_member(f, sigma, x2, y)
                assert forced_member(f, sigma, y, x) == forced_member(f, sigma, y, x2)


def test_no_forced_self_membership(t2):
    f = t2.frame
    for sigma in f.nodes:
        for x in universe_at(t2, sigma):
            assert not forced_member(f, sigma, x, x)


def test_equality_persists_upward(t2):
    f = t2.frame
    for sigma in f.nodes:
        for tau in up_set(f, sigma):
            for x, y in itertools.combinations(universe_at(t2, sigma), 2):
                if forced_equal(f, sigma, x, y):
                    assert forced_equal(f, tau, x, y)


def test_forcing_is_monotone(t2):
    f = t2.frame
    pool = enumerate_delta0(1, ("x", "y"))
    for sigma in f.nodes:
        elems = universe_at(t2, sigma)[:4]
        for tau in up_set(f, sigma):
            for phi in pool[:40]:
                for x in elems:
                    for y in elems[:2]:
                        env = {"x": x, "y": y}
                        if forces(t2, sigma, phi, env):
                            assert forces(t2, tau, phi, env)


def test_leaves_decide_everything(t2):
    f = t2.frame
    pool = enumerate_delta0(1, ("x",))
    for leaf in leaves(f):
        for x in universe_at(t2, leaf):
            for phi in pool[:60]:
                env = {"x": x}
                assert forces(t2, leaf, phi, env) or forces(t2, leaf, Not(phi), env)


def test_connective_clauses(t2):
    f = t2.frame
    zero, one = t2.names["zero"], t2.names["one"]
    env = {}
    names = {"zero": zero, "one": one}
    assert forces(t2, "e", parse("#zero in #one"), env, names)
    assert not forces(t2, "e", parse("#one in #zero"), env, names)
    assert forces(t2, "e", parse(r"(#zero in #one /\ ~(#one in #zero))"), env, names)
    assert forces(t2, "e", parse(r"(#one in #zero \/ #zero in #one)"), env, names)
    assert forces(t2, "e", parse("(#zero in #one -> #zero in #one)"), env, names)
    assert forces(t2, "e", parse("forall u in #one . u = #zero"), env, names)
    assert forces(t2, "e", parse("exists u in #one . u in #one"), env, names)
    assert not forces(t2, "e", parse("exists u in #zero . u = u"), env, names)


def test_delayed_one_collapse_depends_on_depth():
    # the marker born at an inner node never collapses to zero; at a leaf it does
    phi = parse("~(#one_0 = #zero)")
    s2 = canonical_structure(tree(2))
    s3 = canonical_structure(tree(3))
    assert not forces(s2, "e", phi, extra_names=s2.names)
    assert forces(s3, "e", phi, extra_names=s3.names)
    # at the dying leaf itself the marker is forced equal to zero
    f2 = s2.frame
    assert forced_equal(f2, "0", s2.names["one_0"], s2.names["zero"])
    assert not forced_equal(f2, "e", s2.names["one_0"], s2.names["zero"])


def test_eval_errors(t2):
    with pytest.raises(EvalError, match="unbound variable 'x'"):
        forces(t2, "e", parse("x = x"))
    with pytest.raises(EvalError, match="unknown parameter #nope"):
        forces(t2, "e", parse("#nope = #nope"))
    f = t2.frame
    late = KripkeSet(f, "0", {"0": ()}, "late")
    with pytest.raises(EvalError, match="parameter born at '0' is dead at '1'"):
        forces(t2, "1", parse("#a = #a"), extra_names={"a": late})


def test_universes_grow_and_close(t2):
    f = t2.frame
    for sigma in f.nodes:
        for tau in up_set(f, sigma):
            here = {x.uid for x in universe_at(t2, sigma)}
            there = {x.uid for x in universe_at(t2, tau)}
            assert here <= there
        for x in universe_at(t2, sigma):
            assert alive(x, sigma)
            for m in ext_at(x, sigma):
                assert m.uid in {u.uid for u in universe_at(t2, sigma)}


def test_end_extension_of_def_step():
    f = chain(2)
    base = structure_from_sets(f, (internal_nat(f, 2),))
    bigger = def_step(base, DefConfig(formula_depth=1))
    assert is_end_extension(base, bigger)
    # the reverse direction fails as soon as the step added anything new
    grew = any(
        len(universe_at(bigger, n)) > len(universe_at(base, n)) for n in f.nodes
    )
    assert grew and not is_end_extension(bigger, base)


def test_end_extension_demands_one_frame():
    a = structure_from_sets(chain(2), (internal_nat(chain(2), 1),))
    with pytest.raises(ValueError, match="different frames"):
        is_end_extension(a, structure_from_sets(chain(2), (internal_nat(chain(2), 1),)))


def test_delta0_absolute_rejects_unbounded(t2):
    with pytest.raises(ValueError, match="bounded"):
        delta0_absolute(t2, t2, parse("exists z . z = z"))


def test_delta0_absolute_along_def_step():
    f = tree(2)
    base = structure_from_sets(f, (internal_nat(f, 2), one_sigma(f, "0")))
    bigger = def_step(base, DefConfig(formula_depth=1))
    for phi in enumerate_delta0(1, ("x",))[:30]:
        for a in universe_at(base, f.bottom):
            assert delta0_absolute(base, bigger, phi, {"x": a})


def test_is_extensional_and_broken_comparator(t2):
    assert is_extensional(t2)
    assert not is_extensional(t2, eq=lambda sigma, x, y: True)


def test_is_ordinal(t2):
    f = t2.frame
    assert is_ordinal(t2, t2.names["two"])
    assert is_ordinal(t2, t2.names["zero"])
    assert is_ordinal(t2, t2.names["one_0"])
    one = t2.names["one"]
    s1 = KripkeSet(f, "e", {n: (one,) for n in f.nodes}, "s1")
    ss = KripkeSet(f, "e", {n: (s1,) for n in f.nodes}, "ss")
    probe = structure_from_sets(f, (ss,))
    assert not is_ordinal(probe, ss)
