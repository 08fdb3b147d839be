"""
Separating sets: orbit separation over finite fields, the geometric test and
the purely inseparable closure.
"""
import pytest

from src.mechanics.gf import FieldCtx
from src.mechanics.group import enumerate_group, parse_permutation, permutation_matrix
from src.mechanics.invariant import noether_separating_set
from src.mechanics.mpoly import PolyRing
from src.mechanics.separating import (FAIL, INCONCLUSIVE, PASS, doubled_ring, geometric_separating_test, graph_ideal,
                                      inseparable_closure_test, second_copy, separates_points)


@pytest.fixture
def c4perm():
    F = FieldCtx(2)
    G = enumerate_group(F, [permutation_matrix(parse_permutation("(1 2 3 4)"))], ["s"])
    ring = PolyRing(F, ["x1", "x2", "x3", "x4"])
    c = [ring.parse(s) for s in ("x1 + x2 + x3 + x4", "x1*x3 + x2*x4",
                                 "x1*x2 + x2*x3 + x3*x4 + x1*x4", "x1*x2*x3*x4")]
    return G, ring, c


@pytest.fixture
def c4scalar():
    F = FieldCtx(5)
    G = enumerate_group(F, [[[2, 0], [0, 2]]], ["z"])
    ring = PolyRing(F, ["x", "y"])
    return G, ring, [ring.parse(s) for s in ("x^4", "x^3*y", "x*y^3", "y^4")]


def test_c4_separates_points(c4perm):
    G, ring, c = c4perm
    assert separates_points(G, ring, c, 1).result == PASS
    verdict = separates_points(G, ring, c[:1], 1)
    assert verdict.result == FAIL
    assert "~" in verdict.witness


def test_c4_not_geometric(c4perm):
    # c1..c4 are also invariant under the reflection (1 3), so orbits collide over F_4
    G, ring, c = c4perm
    verdict = geometric_separating_test(G, ring, c)
    assert verdict.result == FAIL
    assert verdict.details["extension_degree"] == 2
    assert verdict.details["falsified_by"] == "points over F_4"
    assert verdict.witness in [str(j) for j in graph_ideal(G, ring).basis]


@pytest.mark.slow
def test_c4_not_geometric_by_radical_membership(c4perm):
    G, ring, c = c4perm
    verdict = geometric_separating_test(G, ring, c, point_check=False)
    assert verdict.result == FAIL
    assert verdict.witness in [str(j) for j in graph_ideal(G, ring).basis]
    assert "falsified_by" not in verdict.details


def test_graph_ideal_contains_separating_ideal(c4perm):
    G, ring, c = c4perm
    gb = graph_ideal(G, ring)
    doubled = doubled_ring(ring)
    for f in c:
        assert gb.contains(f.to_ring(doubled) - second_copy(f, doubled))


def test_scalar_geometric(c4scalar):
    G, ring, gens = c4scalar
    assert geometric_separating_test(G, ring, gens).result == PASS
    without = [gens[0], gens[1], gens[3]]
    assert geometric_separating_test(G, ring, without).result == PASS
    assert geometric_separating_test(G, ring, [gens[0], gens[3]]).result == FAIL


def test_noether_set_is_geometric(c4scalar):
    G, ring, _ = c4scalar
    assert geometric_separating_test(G, ring, noether_separating_set(G, ring)).result == PASS


def test_inseparable_closure(c4scalar):
    G, ring, gens = c4scalar
    verdict = inseparable_closure_test(gens, [ring.parse("x^2*y^2")], 2, G)
    assert verdict.result == PASS
    assert verdict.details["exponents"] == {"x^2*y^2": 1}
    short = inseparable_closure_test([gens[0], gens[3]], [ring.parse("x^3*y")], 1, G)
    assert short.result == INCONCLUSIVE


def test_inseparable_closure_empty_sets(c4scalar):
    G, ring, gens = c4scalar
    assert inseparable_closure_test(gens, [], 2, G).result == PASS
    assert inseparable_closure_test([], [], 2).details == {"exponents": {}}
    empty_s = inseparable_closure_test([], [gens[0]], 2, G)
    assert empty_s.result == INCONCLUSIVE
    assert empty_s.witness == "x^4"
