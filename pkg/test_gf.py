"""
Finite field arithmetic: construction, axioms, Frobenius, roots of unity, embeddings.
"""
import itertools
import random

import pytest

from src.errors import CompositeCharacteristicError, IncompatibleFieldsError, NoSuchRootError, SizeCapError
from src.mechanics.gf import FieldCtx, embed, find_irreducible, frobenius, root_of_unity


def test_find_irreducible_smallest():
    assert find_irreducible(2, 1) == (0, 1)
    assert find_irreducible(2, 2) == (1, 1, 1)
    assert find_irreducible(2, 3) == (1, 1, 0, 1)
    assert find_irreducible(3, 2) == (1, 0, 1)


def test_find_irreducible_errors():
    with pytest.raises(CompositeCharacteristicError):
        find_irreducible(4, 1)
    with pytest.raises(SizeCapError):
        find_irreducible(2, 40)


def test_reducible_modulus_rejected():
    with pytest.raises(SizeCapError):
        FieldCtx(2, 2, (1, 0, 1))  # w^2 + 1 = (w + 1)^2


@pytest.mark.parametrize("p,n", [(2, 2), (3, 2), (2, 3), (5, 1), (2, 4)])
def test_field_axioms_exhaustive(p, n):
    F = FieldCtx(p, n)
    elems = list(F.elements())
    zero, one = F.zero(), F.one()
    for a in elems:
        assert a + zero == a
        assert a * one == a
        assert a + (-a) == zero
        if a:
            assert a * a.inverse() == one
    for a, b in itertools.product(elems, repeat=2):
        assert a + b == b + a
        assert a * b == b * a
    rng = random.Random(7)
    for _ in range(200):
        a, b, c = (rng.choice(elems) for _ in range(3))
        assert a * (b + c) == a * b + a * c
        assert (a * b) * c == a * (b * c)


@pytest.mark.slow
def test_field_axioms_256():
    F = FieldCtx(2, 8)
    elems = list(F.elements())
    for a in elems[1:]:
        assert a * a.inverse() == F.one()
    rng = random.Random(11)
    for _ in range(2000):
        a, b, c = (rng.choice(elems) for _ in range(3))
        assert a * (b + c) == a * b + a * c


def test_f4_generator():
    F = FieldCtx(2, 2, (1, 1, 1))
    w = F.generator()
    assert w ** 3 == F.one()
    assert w * w == w + 1
    assert str(w * w) == "w+1"


def test_frobenius_is_field_automorphism():
    F = FieldCtx(3, 2)
    for a in F.elements():
        for b in F.elements():
            assert frobenius(a + b, 1) == frobenius(a, 1) + frobenius(b, 1)
            assert frobenius(a * b, 1) == frobenius(a, 1) * frobenius(b, 1)
        assert frobenius(a, F.n) == a


def test_root_of_unity():
    F4 = FieldCtx(2, 2)
    omega = root_of_unity(F4, 3)
    assert omega ** 3 == F4.one() and omega != F4.one()
    zeta = root_of_unity(FieldCtx(5), 4)
    assert zeta.value == 2
    with pytest.raises(NoSuchRootError):
        root_of_unity(FieldCtx(2, 2), 5)


def test_embedding_is_homomorphism():
    F4, F16 = FieldCtx(2, 2), FieldCtx(2, 4)
    for a in F4.elements():
        for b in F4.elements():
            assert embed(a * b, F16) == embed(a, F16) * embed(b, F16)
            assert embed(a + b, F16) == embed(a, F16) + embed(b, F16)
    with pytest.raises(IncompatibleFieldsError):
        embed(F4.one(), FieldCtx(2, 3))


def test_parse_and_mixing_fields():
    F = FieldCtx(2, 2)
    assert F.parse("w^2 + w") == F.one()
    with pytest.raises(IncompatibleFieldsError):
        F.one() + FieldCtx(3).one()
