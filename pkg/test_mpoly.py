"""
Sparse polynomials: parsing, arithmetic, orders, substitution, Frobenius powers.
"""
import random

import pytest

from src.errors import DimensionMismatchError, PolySyntaxError, UnknownVariableError
from src.mechanics.gf import FieldCtx
from src.mechanics.mpoly import GREVLEX, LEX, MonomialOrder, PolyRing


@pytest.fixture
def r4():
    return PolyRing(FieldCtx(2), ["x1", "x2", "x3", "x4"])


def test_parse_and_print(r4):
    c2 = r4.parse("x1*x3 + x2*x4")
    assert str(c2) == "x1*x3 + x2*x4"
    assert c2.is_homogeneous() and c2.degree() == 2
    assert r4.parse("(x1 + x2)^2") == r4.parse("x1^2 + x2^2")  # characteristic 2
    assert str(r4.parse("x1 + x1")) == "0"


def test_parse_errors(r4):
    with pytest.raises(PolySyntaxError):
        r4.parse("x1 +")
    with pytest.raises(UnknownVariableError):
        r4.parse("x1 + z")


def test_reserved_and_duplicate_names():
    F = FieldCtx(2)
    with pytest.raises(UnknownVariableError):
        PolyRing(F, ["x", "x"])
    with pytest.raises(UnknownVariableError):
        PolyRing(F, ["T1", "x"])


def test_orders_pick_different_leading_terms():
    F = FieldCtx(3)
    f_lex = PolyRing(F, ["x", "y", "z"], LEX).parse("x*z^3 + y^5")
    f_grevlex = PolyRing(F, ["x", "y", "z"], GREVLEX).parse("x*z^3 + y^5")
    assert f_lex.lm() == (1, 0, 3)
    assert f_grevlex.lm() == (0, 5, 0)
    elim = PolyRing(F, ["x", "y", "z"], MonomialOrder.elim(1)).parse("x + y^7")
    assert elim.lm() == (1, 0, 0)


def test_weighted_degree():
    R = PolyRing(FieldCtx(2), ["T1", "T2"], weights=[1, 4], reserved_ok=True)
    f = R.parse("T1^4 + T2")
    assert f.degree() == 4 and f.is_homogeneous()
    assert len(R.monomial_basis(8)) == 3


def test_ring_axioms_random():
    R = PolyRing(FieldCtx(5), ["x", "y"])
    rng = random.Random(3)

    def rand_poly():
        out = R.zero()
        for _ in range(4):
            out = out + R.monomial((rng.randrange(4), rng.randrange(4)), rng.randrange(5))
        return out

    for _ in range(30):
        a, b, c = rand_poly(), rand_poly(), rand_poly()
        assert a * (b + c) == a * b + a * c
        assert (a - b) + b == a
        assert (a * b) * c == a * (b * c)


def test_evaluate_char_two():
    R = PolyRing(FieldCtx(2), ["x1", "x2", "x3", "x4"])
    c1 = R.parse("x1 + x2 + x3 + x4")
    assert c1.evaluate([1, 1, 0, 0]).is_zero()
    with pytest.raises(DimensionMismatchError):
        c1.evaluate([1, 1])


def test_evaluate_in_extension():
    F2, F4 = FieldCtx(2), FieldCtx(2, 2)
    R = PolyRing(F2, ["x"])
    f = R.parse("x^2 + x + 1")
    w = F4.generator()
    assert f.evaluate([w]).is_zero()


def test_frobenius_power_matches_power():
    F = FieldCtx(3, 2)
    R = PolyRing(F, ["x", "y"])
    f = R.parse("w*x + y^2 + 2")
    assert f.frobenius_power_poly(1) == f ** 3
    assert f.frobenius_power_poly(0) == f


def test_apply_matrix_substitutes_rows():
    R = PolyRing(FieldCtx(2), ["x", "y"])
    f = R.parse("y")
    assert f.apply_matrix([[1, 0], [1, 1]]) == R.parse("x + y")
    with pytest.raises(DimensionMismatchError):
        f.apply_matrix([[1]])


def test_substitute_into_other_ring():
    F = FieldCtx(5)
    tags = PolyRing(F, ["T1", "T2", "T3"], reserved_ok=True)
    R = PolyRing(F, ["x", "y"])
    rel = tags.parse("T2^4 - T1^3*T3")
    images = [R.parse("x^4"), R.parse("x^3*y"), R.parse("y^4")]
    assert rel.substitute(images, R).is_zero()
