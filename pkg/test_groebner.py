"""
Ideal engine: Buchberger against sympy, ideal operations, dimensions, Hilbert numerators.
"""
import random

import pytest
import sympy

from src.errors import DegreeCapExceeded, OrderMismatchError, UnitIdealError
from src.mechanics.gf import FieldCtx
from src.mechanics.groebner import (Ideal, buchberger, eliminate, hilbert_numerator, ideal_contains, ideal_equal,
                                    intersect, krull_dimension, normal_form, quotient, radical_member, t_symbol)
from src.mechanics.mpoly import GREVLEX, LEX, PolyRing


def _to_sympy(polys, ring):
    syms = sympy.symbols(" ".join(ring.vars))
    p = ring.field.p
    return {sympy.Poly(sympy.sympify(str(f).replace("^", "**")), *syms, modulus=p) for f in polys}, syms


def _random_poly(ring, rng, terms=3, max_exp=2):
    f = ring.zero()
    for _ in range(terms):
        e = tuple(rng.randrange(max_exp + 1) for _ in range(ring.nvars))
        f = f + ring.monomial(e, rng.randrange(1, ring.field.p))
    return f


@pytest.mark.parametrize("p,order,seed", [(3, GREVLEX, 1), (5, GREVLEX, 2), (7, LEX, 3), (2, LEX, 4)])
def test_matches_sympy_reduced_basis(p, order, seed):
    rng = random.Random(seed)
    ring = PolyRing(FieldCtx(p), ["x", "y", "z"], order)
    gens = [_random_poly(ring, rng) for _ in range(3)]
    gb = buchberger(Ideal(ring, gens))

    ours, syms = _to_sympy(gb.basis, ring)
    generators = [sympy.sympify(str(g).replace("^", "**")) for g in gens if not g.is_zero()]
    oracle = sympy.groebner(generators, *syms, modulus=p, order=order.kind)
    theirs = {sympy.Poly(g, *syms, modulus=p).monic() for g in oracle.exprs}
    assert ours == theirs


def test_basis_is_idempotent():
    ring = PolyRing(FieldCtx(2), ["x1", "x2", "x3", "x4"])
    c = [ring.parse(s) for s in ("x1 + x2 + x3 + x4", "x1*x3 + x2*x4",
                                 "x1*x2 + x2*x3 + x3*x4 + x1*x4", "x1*x2*x3*x4")]
    gb = buchberger(Ideal(ring, c))
    again = buchberger(gb.as_ideal())
    assert again.basis == gb.basis
    assert krull_dimension(gb) == 0


def test_membership_and_order_mismatch():
    ring = PolyRing(FieldCtx(5), ["x", "y"])
    gb = buchberger(Ideal(ring, [ring.parse("x^2 - y"), ring.parse("x*y - 1")]))
    assert gb.contains(ring.parse("y^2 - x"))
    assert not gb.contains(ring.parse("x + y"))
    lex_ring = ring.with_order(LEX)
    with pytest.raises(OrderMismatchError):
        normal_form(lex_ring.parse("x"), gb)


def test_unit_ideal():
    ring = PolyRing(FieldCtx(3), ["x", "y"])
    gb = buchberger(Ideal(ring, [ring.parse("x"), ring.parse("x + 1")]))
    assert gb.is_unit()
    with pytest.raises(UnitIdealError):
        krull_dimension(gb)


def test_degree_cap_keeps_partial_basis():
    ring = PolyRing(FieldCtx(11), ["u", "v", "s"])
    f1, f2 = ring.parse("u^2 - v*s"), ring.parse("u*v - s^2")
    with pytest.raises(DegreeCapExceeded) as info:
        buchberger(Ideal(ring, [f1, f2]), degree_cap=2)
    assert info.value.cap == 2
    assert len(info.value.partial) == 2


def test_intersect_quotient_eliminate():
    ring = PolyRing(FieldCtx(3), ["x", "y"])
    x, y = ring.var("x"), ring.var("y")
    meet = intersect(Ideal(ring, [x]), Ideal(ring, [y]))
    assert ideal_equal(meet, Ideal(ring, [x * y]))
    assert ideal_equal(quotient(Ideal(ring, [x * y]), x), Ideal(ring, [y]))

    curve = PolyRing(FieldCtx(3), ["t", "x", "y"])
    I = Ideal(curve, [curve.parse("x - t^2"), curve.parse("y - t^3")])
    E = eliminate(I, 1)
    assert E.ring.vars == ("x", "y")
    assert ideal_equal(E, Ideal(E.ring, [E.ring.parse("y^2 - x^3")]))


def test_ideal_contains():
    ring = PolyRing(FieldCtx(2), ["x", "y"])
    big = Ideal(ring, [ring.parse("x"), ring.parse("y")])
    assert ideal_contains(big, Ideal(ring, [ring.parse("x*y + y^2")]))
    assert not ideal_contains(Ideal(ring, [ring.parse("x*y")]), big)


def test_radical_membership():
    ring = PolyRing(FieldCtx(2), ["x", "y"])
    I = Ideal(ring, [ring.parse("x^3"), ring.parse("y^2")])
    assert radical_member(ring.parse("x + y"), I)
    assert not radical_member(ring.parse("x + 1"), I)


@pytest.mark.parametrize("text, member", [
    ("x", True),
    ("x + y*z", True),
    ("y", False),
    ("y + z", False),
])
def test_radical_membership_from_basis(text, member):
    # sqrt((x^5, y*z)) = (x, y*z); the basis path seeds the Rabinowitsch run
    ring = PolyRing(FieldCtx(3), ["x", "y", "z"])
    I = Ideal(ring, [ring.parse("x^5"), ring.parse("y*z")])
    gb = buchberger(I)
    f = ring.parse(text)
    assert radical_member(f, gb) is member
    assert radical_member(f, gb, frobenius_tries=0) is member
    assert radical_member(f, I) is member


def test_hilbert_numerators():
    t = t_symbol
    assert hilbert_numerator([(2, 0)], [1, 1]).as_expr() == 1 - t ** 2
    assert hilbert_numerator([(1, 0), (0, 1)], [1, 1]).as_expr() == sympy.expand((1 - t) ** 2)
    assert hilbert_numerator([], [1, 1]).as_expr() == 1
    # (x^2, xy) : 1 - 2t^2 + t^3
    assert hilbert_numerator([(2, 0), (1, 1)], [1, 1]).as_expr() == 1 - 2 * t ** 2 + t ** 3
    # weighted: T2^2 with deg T2 = 4
    assert hilbert_numerator([(0, 2)], [1, 4]).as_expr() == 1 - t ** 8


def test_hilbert_numerator_counts_monomials():
    # compare against brute force standard-monomial counts in 3 variables
    rng = random.Random(5)
    for _ in range(5):
        gens = [tuple(rng.randrange(3) for _ in range(3)) for _ in range(3)]
        gens = [g for g in gens if any(g)]
        num = hilbert_numerator(gens, [1, 1, 1])
        series = sympy.series(num.as_expr() / (1 - t_symbol) ** 3, t_symbol, 0, 7).removeO()
        for d in range(7):
            count = sum(1 for a in range(d + 1) for b in range(d + 1 - a)
                        if not any(all(x <= y for x, y in zip(g, (a, b, d - a - b))) for g in gens))
            assert series.coeff(t_symbol, d) == count
