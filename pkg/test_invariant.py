"""
Invariant bases on graded pieces, transfers and the Noether separating set.
"""
import pytest

from src.errors import NotInvariantError
from src.mechanics.gf import FieldCtx
from src.mechanics.group import enumerate_group, parse_permutation, permutation_matrix
from src.mechanics.invariant import (graded_piece, invariant_basis, is_invariant, noether_separating_set,
                                     require_invariant, transfer)
from src.mechanics.mpoly import PolyRing


@pytest.fixture
def c4perm():
    F = FieldCtx(2)
    G = enumerate_group(F, [permutation_matrix(parse_permutation("(1 2 3 4)"))], ["s"])
    return G, PolyRing(F, ["x1", "x2", "x3", "x4"])


@pytest.fixture
def c4scalar():
    F = FieldCtx(5)
    return enumerate_group(F, [[[2, 0], [0, 2]]], ["z"]), PolyRing(F, ["x", "y"])


def test_graded_piece_coordinates():
    ring = PolyRing(FieldCtx(3), ["x", "y"])
    piece = graded_piece(ring, 2)
    assert piece.dim == 3
    f = ring.parse("x^2 + 2*x*y")
    assert piece.polynomial(piece.vector(f)) == f


def test_permutation_invariants_are_orbit_sums(c4perm):
    G, ring = c4perm
    assert invariant_basis(G, ring, 1).basis == [ring.parse("x1 + x2 + x3 + x4")]
    # x_i^2, x1x2-type, x1x3-type
    assert invariant_basis(G, ring, 2).dim == 3
    for f in invariant_basis(G, ring, 3).basis:
        assert is_invariant(G, f)


def test_scalar_invariants(c4scalar):
    G, ring = c4scalar
    assert invariant_basis(G, ring, 1).dim == 0
    assert invariant_basis(G, ring, 2).dim == 0
    assert invariant_basis(G, ring, 4).dim == 5
    assert invariant_basis(G, ring, 8).dim == 9


def test_transfer(c4perm, c4scalar):
    G, ring = c4perm
    assert transfer(G, ring.parse("x1")) == ring.parse("x1 + x2 + x3 + x4")
    # characteristic 2: the orbit sum of x1*x3 is counted twice
    assert transfer(G, ring.parse("x1*x3")).is_zero()
    H, r2 = c4scalar
    assert transfer(H, r2.parse("x^4")) == r2.parse("4*x^4")
    assert transfer(H, r2.parse("x^3")).is_zero()


def test_require_invariant(c4perm):
    G, ring = c4perm
    require_invariant(G, [ring.parse("x1*x2*x3*x4")])
    with pytest.raises(NotInvariantError):
        require_invariant(G, [ring.parse("x1*x2")])


def test_noether_set(c4scalar):
    G, ring = c4scalar
    noether = noether_separating_set(G, ring)
    assert len(noether) == 5
    assert all(f.degree() == 4 for f in noether)
