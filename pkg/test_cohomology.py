"""
First cohomology with graded and character coefficients, Frobenius twists,
annihilators and the bar complex.
"""
import pytest

from src.errors import InvalidCocycleError, NotInvariantError, TrivialClassError
from src.mechanics.cohomology import (CERTIFIED, REFUTED, CoefficientModule, Cocycle1, annihilates, bar_hn_trivial,
                                      cocycle_space, frobenius_chain, frobenius_power_cocycle, is_coboundary,
                                      nontrivial_all_frobenius, restrict, search_restricted_classes)
from src.mechanics.group import act


def _coboundary_holds(G, a, g, witness):
    """(s - 1) b == a * g_s at every generator."""
    ring = g.module.ring
    b = ring.parse(witness)
    for s in G.generators:
        g_s = g.module.polynomial(g.value(s))
        if act(s, b) - b != a * g_s:
            return False
    return True


def test_c4_degree_zero_class(scenario):
    scn = scenario("c4perm")
    G = scn.group
    space = cocycle_space(G, CoefficientModule.graded(G, scn.ring, 0))
    assert (space.dim_z, space.dim_b, space.dim_h) == (1, 0, 1)
    g0 = scn.cocycles["g0"]
    assert not is_coboundary(g0).is_coboundary
    assert str(nontrivial_all_frobenius(g0)) == "CERTIFIED(trivial-coefficients)"


@pytest.mark.parametrize("name, witness", [("c1", "x1 + x3"), ("c2", "x1*x3"), ("c3", "x2*x3 + x1*x4")])
def test_c4_annihilators(scenario, name, witness):
    scn = scenario("c4perm")
    g0 = scn.cocycles["g0"]
    a = scn.defines[name]
    result = annihilates(a, g0)
    assert result.annihilates
    assert result.witness == witness
    assert _coboundary_holds(scn.group, a, g0, result.witness)


def test_c4_degree_two_class_is_certified_by_permutation(scenario):
    scn = scenario("c4perm")
    space = cocycle_space(scn.group, CoefficientModule.graded(scn.group, scn.ring, 2))
    assert space.dim_h == 1
    verdict = nontrivial_all_frobenius(space.representatives[0])
    assert str(verdict) == "CERTIFIED(permutation)"
    assert verdict.witness is not None


def test_annihilator_must_be_invariant(scenario):
    scn = scenario("c4perm")
    with pytest.raises(NotInvariantError):
        annihilates(scn.poly("x1"), scn.cocycles["g0"])


def test_restriction_to_half_vanishes(scenario):
    scn = scenario("c4perm")
    res = restrict(scn.cocycles["g0"], scn.subgroups["half"])
    assert res.is_zero()
    assert is_coboundary(res).is_coboundary
    with pytest.raises(TrivialClassError):
        nontrivial_all_frobenius(res)


@pytest.mark.parametrize("fixture", ["additive3copies", "additive3copies_f3"])
def test_additive_copies_annihilated_by_variables(scenario, fixture):
    scn = scenario(fixture)
    G, g0 = scn.group, scn.cocycles["g0"]
    assert cocycle_space(G, g0.module).dim_h == 1
    for name in ("x1", "x2", "x3"):
        a = scn.poly(name)
        result = annihilates(a, g0)
        assert result.annihilates
        assert result.witness == "y" + name[1:]
        assert _coboundary_holds(G, a, g0, result.witness)


def test_invalid_cocycles(scenario):
    scn = scenario("c4perm")
    module = CoefficientModule.graded(scn.group, scn.ring, 0)
    with pytest.raises(InvalidCocycleError):
        Cocycle1(module, {h: {0: 1} for h in scn.group.elements})
    with pytest.raises(InvalidCocycleError):
        Cocycle1.from_generators(module, [])


def test_a4_twisted_characters(scenario):
    scn = scenario("a4twisted")
    G, F = scn.group, scn.field
    assert cocycle_space(G, CoefficientModule.trivial(G)).dim_h == 0
    w = F.generator().value
    twisted = CoefficientModule.from_character(G, [w, 1])
    assert cocycle_space(G, twisted).dim_h == 1
    with pytest.raises(InvalidCocycleError):
        CoefficientModule.from_character(G, [w, w])


def test_a4_frobenius_periodic(scenario):
    scn = scenario("a4twisted")
    tw = scn.cocycles["tw"]
    assert not is_coboundary(tw).is_coboundary
    tw2 = frobenius_power_cocycle(tw, 1)
    assert not tw2.module.same_as(tw.module)
    assert not is_coboundary(tw2).is_coboundary
    assert frobenius_power_cocycle(tw, 2).values == tw.values
    assert all(not trivial for _, _, trivial in frobenius_chain(tw, 4))
    verdict = nontrivial_all_frobenius(tw)
    assert verdict.kind == CERTIFIED and verdict.reason == "frobenius-periodic"
    assert verdict.m == 2


def test_bar_complex(scenario):
    assert bar_hn_trivial(scenario("c4perm").group, 0) == 1
    assert bar_hn_trivial(scenario("c4perm").group, 1) == 1
    assert bar_hn_trivial(scenario("a4twisted").group, 1) == 0
    with pytest.raises(ValueError):
        bar_hn_trivial(scenario("c4perm").group, -1)


@pytest.mark.slow
def test_klein_restricted_classes_are_refuted(scenario):
    scn = scenario("klein5")
    found = search_restricted_classes(scn.group, scn.ring, 5)
    assert found.degree is not None
    assert found.classes
    verdict = nontrivial_all_frobenius(found.classes[0])
    assert verdict.kind == REFUTED
    assert verdict.m is not None
