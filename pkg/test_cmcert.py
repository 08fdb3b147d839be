"""
Subalgebra presentations, Hilbert series, regular sequences, free-module
checks and defect certificates.
"""
import pytest
from sympy import Poly

from src.errors import ConsistencyError, NotAnnihilatingError, NotHsopError, NotPhsopError, ScenarioParseError
from src.mechanics.cmcert import (NO_CM_VERDICT, DefectCertificate, HilbertSeries, copies_bound, defect_certificate,
                                  free_module_check, gorenstein_check, hilbert_series, hsop_check_polyring,
                                  membership, present, regular_rep_bound, regular_sequence_check)
from src.mechanics.gf import FieldCtx
from src.mechanics.groebner import Ideal, ideal_equal, t_symbol
from src.mechanics.group import parse_permutation, regular_representation
from src.mechanics.mpoly import PolyRing


@pytest.fixture
def hypersurface():
    ring = PolyRing(FieldCtx(5), ["x", "y"])
    return ring, present(ring, [ring.parse(s) for s in ("x^4", "x^3*y", "y^4")])


@pytest.fixture
def four_monomials():
    ring = PolyRing(FieldCtx(5), ["x", "y"])
    return present(ring, [ring.parse(s) for s in ("x^4", "x^3*y", "x*y^3", "y^4")])


def test_present_hypersurface(hypersurface):
    ring, A = hypersurface
    assert A.degrees == [4, 4, 4]
    assert len(A.relations.gens) == 1
    expected = Ideal(A.tagring, [A.tag("T2^4 - T1^3*T3")])
    assert ideal_equal(A.relations, expected)
    assert A.to_ambient(A.tag("T1*T3")) == ring.parse("x^4*y^4")


def test_membership(hypersurface):
    ring, A = hypersurface
    assert membership(A, ring.parse("x^7*y")) == A.tag("T1*T2")
    assert membership(A, ring.parse("x^2*y^2")) is None


def test_hilbert_series_of_hypersurface(hypersurface):
    _, A = hypersurface
    H = hilbert_series(A)
    assert H == HilbertSeries.parse("(1+t^4+t^8+t^12)/((1-t^4)^2)")
    assert H == HilbertSeries(Poly(1 - t_symbol ** 16, t_symbol), [4, 4, 4])
    assert H.dimension() == 2
    assert H.expand(8) == [1, 0, 0, 0, 3, 0, 0, 0, 6]


def test_hilbert_series_text():
    text = "(1+2t^4+t^8)/((1-t)^3(1-t^4)^2)"
    assert str(HilbertSeries.parse(text)) == text
    assert HilbertSeries.parse("1/(1-t)").expand(4) == [1, 1, 1, 1, 1]


@pytest.mark.parametrize("text", [
    "(1+t^4)^2/((1-t)^3(1-t^4)^2)",
    "(1+t^4)(1+t^4)/((1-t)^3(1-t^4)^2)",
    "(1 - t^2 + 2t^4 - 2t^6 + t^8 - t^10)/((1-t)^3 (1-t^2) (1-t^4)^2)",
])
def test_hilbert_series_parse_equal_forms(text):
    assert HilbertSeries.parse(text) == HilbertSeries.parse("(1+2t^4+t^8)/((1-t)^3(1-t^4)^2)")


@pytest.mark.parametrize("text", ["(1+2s)/(1-t)", "1/(1+t)", "/(1-t)", "1/()", "(1+t/(1-t)"])
def test_hilbert_series_parse_rejects(text):
    with pytest.raises(ScenarioParseError):
        HilbertSeries.parse(text)


def test_gorenstein():
    line = gorenstein_check(HilbertSeries.parse("1/(1-t)"), 1)
    assert line.gorenstein and line.a == 1
    assert not gorenstein_check(HilbertSeries.parse("(1+2t)/(1-t)"), 1).gorenstein
    klein = gorenstein_check(HilbertSeries.parse("(1+2t^4+t^8)/((1-t)^3(1-t^4)^2)"), 5, 5)
    assert klein.gorenstein and klein.a == 3
    assert klein.strongly is False


def test_hsop_in_polynomial_ring():
    ring = PolyRing(FieldCtx(5), ["x", "y"])
    assert hsop_check_polyring([ring.parse("x^4"), ring.parse("y^4")])
    assert not hsop_check_polyring([ring.parse("x^4"), ring.parse("x^3*y")])


def test_regular_sequence_fails_at_second_element(four_monomials):
    A = four_monomials
    result = regular_sequence_check(A, [A.tag("T1"), A.tag("T4")])
    assert not result
    assert result.failing_index == 2


def test_free_module_identity_fails(four_monomials):
    A = four_monomials
    verdict = free_module_check(A, [A.tag("T1"), A.tag("T4")], [A.tag("1"), A.tag("T2"), A.tag("T3")])
    assert not verdict.free
    assert not verdict.hilbert_identity


def test_polynomial_ring_is_free():
    ring = PolyRing(FieldCtx(3), ["x", "y"])
    A = present(ring, [ring.parse("x"), ring.parse("y")])
    verdict = free_module_check(A, A.tags, [A.tag("1")])
    assert verdict.free and verdict.generation
    with pytest.raises(NotHsopError):
        free_module_check(A, [A.tag("T1")], [A.tag("1")])


def test_c4_certificate_round_trip(scenario):
    scn = scenario("c4perm")
    g0 = scn.cocycles["g0"]
    cert = defect_certificate(scn.group, g0, [scn.defines[n] for n in ("c1", "c2", "c3")])
    assert (cert.k, cert.bound, cert.quotient_dim) == (3, 1, 1)
    assert cert.conclusion == NO_CM_VERDICT
    assert cert.nontriviality == "CERTIFIED(trivial-coefficients)"
    again = DefectCertificate.from_dict(cert.to_dict())
    assert again == cert
    assert again.verify(g0)


def test_short_certificate_has_no_conclusion(scenario):
    scn = scenario("c4perm")
    cert = defect_certificate(scn.group, scn.cocycles["g0"], [scn.defines["c1"], scn.defines["c2"]])
    assert cert.bound == 0
    assert cert.conclusion is None


def test_certificate_rejects_non_phsop(scenario):
    scn = scenario("c4perm")
    c1 = scn.defines["c1"]
    with pytest.raises(NotPhsopError):
        defect_certificate(scn.group, scn.cocycles["g0"], [c1, c1 * c1])


def test_tampered_certificate(scenario):
    scn = scenario("c4perm")
    g0 = scn.cocycles["g0"]
    cert = defect_certificate(scn.group, g0, [scn.defines[n] for n in ("c1", "c2", "c3")])
    data = cert.to_dict()
    data["bound"] = 2
    with pytest.raises(ConsistencyError):
        DefectCertificate.from_dict(data).verify(g0)
    data = cert.to_dict()
    data["annihilators"] = [dict(data["annihilators"][0], witness="x1")] + data["annihilators"][1:]
    with pytest.raises(NotAnnihilatingError):
        DefectCertificate.from_dict(data).verify(g0)


def test_additive_copies_certificate(scenario):
    scn = scenario("additive3copies")
    cert = defect_certificate(scn.group, scn.cocycles["g0"], [scn.poly(v) for v in ("x1", "x2", "x3")])
    assert cert.bound == 1
    assert copies_bound(scn.group, 3).bound == 1


def test_regular_representation_bounds(scenario):
    assert regular_rep_bound(scenario("c4perm").group).bound == 0
    assert regular_rep_bound(scenario("c4scalar5").group).bound is None
    C8 = regular_representation(FieldCtx(2), [parse_permutation("(1 2 3 4 5 6 7 8)")], ["s"])
    report = regular_rep_bound(C8)
    assert report.bound == 2
    assert report.conclusion == NO_CM_VERDICT


@pytest.mark.slow
def test_klein_algebra_is_cohen_macaulay(scenario):
    scn = scenario("klein5")
    A = present(scn.ring, [scn.defines[f"a{i}"] for i in range(1, 8)], scn.group)
    assert str(hilbert_series(A)) == "(1+2t^4+t^8)/((1-t)^3(1-t^4)^2)"
    hsop = A.tags[:5]
    assert regular_sequence_check(A, hsop)
    verdict = free_module_check(A, hsop, [A.tag("1"), A.tag("T6"), A.tag("T7"), A.tag("T6*T7")])
    assert verdict.free
