"""
Presented graded subalgebras A = k[a_1..a_m] of k[V] and Cohen-Macaulay checks on them.

A presentation lives in k[x, T] with the elim(n) order, T_i weighted by
deg a_i. Its relation ideal R is the kernel of T_i -> a_i; elements of A are
passed around as polynomials in T.

free_module_check only tests the products a_i * m_j for generation: an
induction on monomials in the a_i then covers every element of A.
"""
import logging
import re
from collections import Counter
from dataclasses import asdict, dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from sympy import Poly, ZZ, sympify
from sympy.parsing.sympy_parser import (convert_xor, implicit_multiplication, parse_expr,
                                        standard_transformations)

from src.config import FROBENIUS_MMAX, TAG_PREFIX, TRUNCATION_ORDER
from src.errors import (ConsistencyError, GenerationFailureError, NontrivialityNotCertifiedError,
                        NotAnnihilatingError, NotHomogeneousError, NotHsopError, NotPhsopError, ScenarioParseError)
from src.mechanics.groebner import (GroebnerBasis, Ideal, buchberger, hilbert_numerator, ideal_equal, krull_dimension,
                                    quotient, t_symbol)
from src.mechanics.linalg import SparseEchelon
from src.mechanics.mpoly import GREVLEX, Exponent, Polynomial, PolyRing

log = logging.getLogger(__name__)

NO_CM_VERDICT = "no graded geometric separating algebra is Cohen-Macaulay"


# --- PRESENTATIONS ---

@dataclass
class SubalgebraPresentation:
    ambient: PolyRing
    gens: List[Polynomial]
    degrees: List[int]
    tagring: PolyRing
    combined: GroebnerBasis
    relations: Ideal
    gb_relations: GroebnerBasis

    @property
    def tags(self) -> List[Polynomial]:
        return self.tagring.gens()

    def to_ambient(self, f: Polynomial) -> Polynomial:
        """Substitute T_i -> a_i."""
        return f.to_ring(self.tagring).substitute(self.gens, self.ambient)

    def tag(self, text: str) -> Polynomial:
        return self.tagring.parse(text)


def tag_ring(ambient: PolyRing, degrees: Sequence[int]) -> PolyRing:
    names = [f"{TAG_PREFIX}{i + 1}" for i in range(len(degrees))]
    return PolyRing(ambient.field, names, GREVLEX, list(degrees), reserved_ok=True)


def present(ring: PolyRing, gens: Sequence[Polynomial], G=None, degree_cap: Optional[int] = None) -> SubalgebraPresentation:
    """Relation ideal of k[gens] by elimination of the ambient variables."""
    if not gens:
        raise NotHomogeneousError("a presentation needs at least one generator")
    degrees = []
    for a in gens:
        if a.is_zero() or a.is_constant() or not a.is_homogeneous():
            raise NotHomogeneousError(f"{a} is not a nonconstant homogeneous polynomial")
        degrees.append(a.degree())
    if G is not None:
        from src.mechanics.invariant import require_invariant
        require_invariant(G, gens)

    tags = tag_ring(ring, degrees)
    combined = tags.prepend(ring.vars, ring.weights)
    n = ring.nvars
    lifted = [combined.var(n + i) - a.to_ring(combined) for i, a in enumerate(gens)]
    gb = buchberger(Ideal(combined, lifted), degree_cap=degree_cap)
    relations = [g.to_ring(tags) for g in gb.basis if all(not any(e[:n]) for e in g.coeffs)]
    for r in relations:
        if not r.substitute(list(gens), ring).is_zero():
            raise ConsistencyError(f"relation {r} does not vanish on the generators")
    R = Ideal(tags, relations)
    log.debug("🧩 presented %d generators with %d relations", len(gens), len(relations))
    return SubalgebraPresentation(ring, list(gens), degrees, tags, gb, R, buchberger(R, degree_cap=degree_cap))


def membership(A: SubalgebraPresentation, f: Polynomial) -> Optional[Polynomial]:
    """f as a polynomial in the tags when f lies in A, else None."""
    n = A.ambient.nvars
    nf = A.combined.normal_form(f.to_ring(A.combined.ring))
    if any(any(e[:n]) for e in nf.coeffs):
        return None
    return nf.to_ring(A.tagring)


# --- HSOP / REGULAR SEQUENCES ---

def hsop_check_polyring(elements: Sequence[Polynomial], ring: Optional[PolyRing] = None, degree_cap: Optional[int] = None) -> bool:
    """True iff k[V]/(a_1..a_k) has Krull dimension n - k."""
    ring = ring or elements[0].ring
    for a in elements:
        if a.is_constant() or not a.is_homogeneous():
            raise NotHomogeneousError(f"{a} is not a nonconstant homogeneous polynomial")
    gb = buchberger(Ideal(ring, [a.to_ring(ring) for a in elements]), degree_cap=degree_cap)
    if gb.is_unit():
        return False
    return krull_dimension(gb) == ring.nvars - len(elements)


@dataclass
class RegularSequenceResult:
    regular: bool
    failing_index: Optional[int] = None

    def __bool__(self):
        return self.regular


def regular_sequence_check(A: SubalgebraPresentation, seq: Sequence[Polynomial],
                           degree_cap: Optional[int] = None) -> RegularSequenceResult:
    """s_i is a nonzerodivisor mod R + (s_1..s_{i-1}) for every i; 1-based failing index."""
    tags = A.tagring
    current = Ideal(tags, A.relations.gens)
    for i, s in enumerate(seq, start=1):
        s = s.to_ring(tags)
        if s.is_constant():
            raise NotHomogeneousError(f"sequence element {s} is constant")
        colon = quotient(current, s, degree_cap)
        if not ideal_equal(colon, current, degree_cap):
            log.debug("❌ element %d (%s) is a zero divisor", i, s)
            return RegularSequenceResult(False, i)
        current = current.with_gens([s])
    return RegularSequenceResult(True)


# --- HILBERT SERIES ---

_FACTOR = re.compile(r"\(1-t(?:\^(\d+))?\)(?:\^(\d+))?")
_NUMERATOR_CHARS = re.compile(r"[0-9t+\-*^()]+")
_DIGIT_PRODUCT = re.compile(r"(\d)(?=[t(])")
_SERIES_TRANSFORMS = standard_transformations + (implicit_multiplication, convert_xor)


class HilbertSeries:
    """numerator(t) / prod (1 - t^e)."""

    __slots__ = ('numerator', 'denominator')

    def __init__(self, numerator: Poly, denominator: Sequence[int]):
        if not isinstance(numerator, Poly):
            numerator = Poly(numerator, t_symbol, domain=ZZ)
        self.numerator = numerator
        self.denominator = tuple(sorted(denominator))

    @staticmethod
    def _factor(e: int) -> Poly:
        return Poly(1 - t_symbol ** e, t_symbol, domain=ZZ)

    def _denominator_poly(self) -> Poly:
        out = Poly(1, t_symbol, domain=ZZ)
        for e in self.denominator:
            out = out * self._factor(e)
        return out

    def canonical(self) -> "HilbertSeries":
        """Cancel every (1 - t^e) that divides the numerator, largest e first."""
        num = self.numerator
        dens = sorted(self.denominator, reverse=True)
        kept = []
        for e in dens:
            q, r = num.div(self._factor(e))
            if r.is_zero and not num.is_zero:
                num = q
            else:
                kept.append(e)
        return HilbertSeries(num, kept)

    def __eq__(self, other):
        if not isinstance(other, HilbertSeries):
            return NotImplemented
        return self.numerator * other._denominator_poly() == other.numerator * self._denominator_poly()

    def __hash__(self):
        c = self.canonical()
        return hash((tuple(c.numerator.all_coeffs()), c.denominator))

    def expand(self, order: int = TRUNCATION_ORDER) -> List[int]:
        """Coefficients of t^0 .. t^order."""
        coeffs = [0] * (order + 1)
        for (k,), c in self.numerator.terms():
            if k <= order:
                coeffs[k] += int(c)
        for e in self.denominator:
            for i in range(e, order + 1):
                coeffs[i] += coeffs[i - e]
        return coeffs

    def dimension(self) -> int:
        """Order of the pole at t = 1."""
        poles = len(self.denominator)
        num = self.numerator
        one_minus_t = self._factor(1)
        while not num.is_zero:
            q, r = num.div(one_minus_t)
            if not r.is_zero:
                break
            num = q
            poles -= 1
        return poles

    def numerator_text(self) -> str:
        terms = sorted(((k, int(c)) for (k,), c in self.numerator.terms()), key=lambda kc: kc[0])
        if not terms:
            return "0"
        out = ""
        for k, c in terms:
            mono = "" if k == 0 else ("t" if k == 1 else f"t^{k}")
            mag = abs(c)
            body = str(mag) if not mono else (mono if mag == 1 else f"{mag}{mono}")
            if not out:
                out = ("-" if c < 0 else "") + body
            else:
                out += ("-" if c < 0 else "+") + body
        return out

    def __str__(self):
        num = self.numerator_text()
        if len(self.numerator.terms()) > 1:
            num = f"({num})"
        if not self.denominator:
            return num
        parts = []
        for e, mult in sorted(Counter(self.denominator).items()):
            factor = "(1-t)" if e == 1 else f"(1-t^{e})"
            parts.append(factor if mult == 1 else f"{factor}^{mult}")
        den = "".join(parts)
        if len(self.denominator) > 1:
            den = f"({den})"
        return f"{num}/{den}"

    def __repr__(self):
        return f"HilbertSeries({self})"

    @classmethod
    def parse(cls, text: str) -> "HilbertSeries":
        """Reads numerator/denominator text such as (1+2t^4+t^8)/((1-t)^3(1-t^4)^2).

        The numerator is any integer polynomial in t with implicit products
        (2t^4, (1+t)(1-t)); the denominator is a product of (1-t^e)^k factors.
        """
        text = text.replace(" ", "")
        head, sep, tail = text.partition("/")
        if not head or not _NUMERATOR_CHARS.fullmatch(head):
            raise ScenarioParseError(f"bad Hilbert series numerator '{head}'")
        try:
            expr = parse_expr(_DIGIT_PRODUCT.sub(r"\1*", head), local_dict={"t": t_symbol},
                              transformations=_SERIES_TRANSFORMS)
            num = Poly(expr, t_symbol, domain=ZZ)
        except Exception as exc:
            raise ScenarioParseError(f"bad Hilbert series numerator '{head}': {exc}") from None
        dens: List[int] = []
        if sep:
            body = tail[1:-1] if tail.startswith("((") else tail
            if not body:
                raise ScenarioParseError(f"bad Hilbert series denominator '{tail}'")
            pos = 0
            while pos < len(body):
                m = _FACTOR.match(body, pos)
                if not m:
                    raise ScenarioParseError(f"bad Hilbert series denominator '{tail}'")
                dens.extend([int(m.group(1) or 1)] * int(m.group(2) or 1))
                pos = m.end()
        return cls(num, dens)


def hilbert_series(A: SubalgebraPresentation) -> HilbertSeries:
    lms = A.gb_relations.leading_monomials()
    num = hilbert_numerator(lms, A.tagring.weights)
    return HilbertSeries(num, A.degrees).canonical()


@dataclass
class GorensteinVerdict:
    gorenstein: bool
    a: Optional[int] = None
    strongly: Optional[bool] = None


def gorenstein_check(H: HilbertSeries, dim_a: int, dim_v: Optional[int] = None) -> GorensteinVerdict:
    """H(1/t) = (-1)^dim_a t^a H(t) for some integer a, read off a palindromic numerator."""
    terms = {k: int(c) for (k,), c in H.numerator.terms() if c}
    if not terms:
        return GorensteinVerdict(False)
    low, high = min(terms), max(terms)
    mirrored = {low + high - k: c for k, c in terms.items()}
    if mirrored == terms:
        sign = 1
    elif mirrored == {k: -c for k, c in terms.items()}:
        sign = -1
    else:
        return GorensteinVerdict(False)
    parity = (-1) ** len(H.denominator) * sign
    if parity != (-1) ** dim_a:
        return GorensteinVerdict(False)
    a = sum(H.denominator) - high - low
    strongly = None if dim_v is None else a == dim_v
    return GorensteinVerdict(True, a, strongly)


# --- FREE MODULES ---

@dataclass
class FreeModuleVerdict:
    free: bool
    hilbert_identity: bool
    generation: Optional[bool]
    failing_product: Optional[str] = None
    expected: Optional[str] = None
    observed: Optional[str] = None


def _weighted_degree(f: Polynomial) -> int:
    if f.is_zero():
        return 0
    if not f.is_homogeneous():
        raise NotHomogeneousError(f"{f} is not homogeneous")
    return f.degree()


class _ModuleSpan:
    """Degreewise spans of P.m_j inside k[V], in monomial coordinates."""

    def __init__(self, hsop: List[Polynomial], module_gens: List[Polynomial], ambient: PolyRing):
        self.hsop = hsop
        self.module_gens = module_gens
        self.ambient = ambient
        self.pring = PolyRing(ambient.field, [f"{TAG_PREFIX}{i + 1}" for i in range(len(hsop))], GREVLEX,
                              [_weighted_degree(h) for h in hsop], reserved_ok=True)
        self._powers: Dict[Exponent, Polynomial] = {(0,) * len(hsop): ambient.one()}
        self._spans: Dict[int, Tuple[SparseEchelon, Dict[Exponent, int]]] = {}

    def power(self, alpha: Exponent) -> Polynomial:
        got = self._powers.get(alpha)
        if got is None:
            i = next(j for j, x in enumerate(alpha) if x)
            smaller = alpha[:i] + (alpha[i] - 1,) + alpha[i + 1:]
            got = self.power(smaller) * self.hsop[i]
            self._powers[alpha] = got
        return got

    def span(self, d: int) -> Tuple[SparseEchelon, Dict[Exponent, int]]:
        if d not in self._spans:
            ech = SparseEchelon(self.ambient.field)
            index: Dict[Exponent, int] = {}
            for m in self.module_gens:
                rest = d - _weighted_degree(m)
                if rest < 0:
                    continue
                for alpha in self.pring.monomial_basis(rest):
                    ech.insert(self._vector(self.power(alpha) * m, index))
            self._spans[d] = (ech, index)
        return self._spans[d]

    @staticmethod
    def _vector(f: Polynomial, index: Dict[Exponent, int]) -> Dict[int, int]:
        out = {}
        for e, c in f.coeffs.items():
            if e not in index:
                index[e] = len(index)
            out[index[e]] = c
        return out

    def contains(self, f: Polynomial) -> bool:
        if f.is_zero():
            return True
        ech, index = self.span(_weighted_degree(f))
        return ech.contains(self._vector(f, index))


def free_module_check(A: SubalgebraPresentation, hsop: Sequence[Polynomial], module_gens: Sequence[Polynomial],
                      strict: bool = False, degree_cap: Optional[int] = None) -> FreeModuleVerdict:
    """A is free over k[hsop] on module_gens (all given as tag polynomials)."""
    hsop_ambient = [A.to_ambient(h) for h in hsop]
    if len(hsop_ambient) != A.ambient.nvars or not hsop_check_polyring(hsop_ambient, A.ambient, degree_cap):
        raise NotHsopError("the proposed hsop does not cut k[V] down to dimension 0")
    gens_ambient = [A.to_ambient(m) for m in module_gens]

    # 1. Hilbert identity
    numerator = Poly(sum((t_symbol ** _weighted_degree(m) for m in gens_ambient), sympify(0)), t_symbol, domain=ZZ)
    expected = HilbertSeries(numerator, [_weighted_degree(h) for h in hsop_ambient]).canonical()
    observed = hilbert_series(A)
    if expected != observed:
        log.debug("❌ Hilbert identity fails: %s vs %s", expected, observed)
        return FreeModuleVerdict(False, False, None, expected=str(expected), observed=str(observed))

    # 2. Generation on products a_i * m_j
    span = _ModuleSpan(hsop_ambient, gens_ambient, A.ambient)
    for i, a in enumerate(A.gens):
        for j, m in enumerate(gens_ambient):
            if not span.contains(a * m):
                product = f"{A.tagring.vars[i]}*({module_gens[j]})"
                if strict:
                    raise GenerationFailureError(product)
                return FreeModuleVerdict(False, True, False, product, str(expected), str(observed))
    return FreeModuleVerdict(True, True, True, None, str(expected), str(observed))


# --- CERTIFICATES ---

@dataclass
class DefectCertificate:
    cocycle: str
    nontriviality: str
    annihilators: List[Dict[str, str]]
    ambient_dim: int
    quotient_dim: int
    k: int
    bound: int
    conclusion: Optional[str]
    conditional: bool = False
    notes: List[str] = field(default_factory=list)

    def to_dict(self) -> Dict[str, object]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Dict[str, object]) -> "DefectCertificate":
        return cls(**data)

    def verify(self, g, degree_cap: Optional[int] = None) -> bool:
        """Recheck every witness against the cocycle g; raises on mismatch."""
        from src.mechanics.cohomology import annihilates, nontrivial_all_frobenius
        ring = g.module.ring
        if not self.conditional:
            verdict = nontrivial_all_frobenius(g)
            if str(verdict) != self.nontriviality:
                raise NontrivialityNotCertifiedError(f"nontriviality is {verdict}, certificate says {self.nontriviality}")
        elements = []
        for i, entry in enumerate(self.annihilators, start=1):
            a = ring.parse(entry["element"])
            result = annihilates(a, g)
            if not result.annihilates or result.witness != entry["witness"]:
                raise NotAnnihilatingError(i, a)
            elements.append(a)
        gb = buchberger(Ideal(ring, elements), degree_cap=degree_cap)
        if krull_dimension(gb) != self.quotient_dim or self.quotient_dim != ring.nvars - self.k:
            raise NotPhsopError("height evidence does not match")
        if self.bound != self.k - 2:
            raise ConsistencyError("bound is not k - 2")
        return True


def defect_certificate(G, g, ann_elements: Sequence[Polynomial], heuristic: bool = False,
                       m_max: int = FROBENIUS_MMAX, degree_cap: Optional[int] = None) -> DefectCertificate:
    """Lower bound k - 2 on the Cohen-Macaulay defect of every graded geometric
    separating algebra, from a class g killed by a phsop of length k."""
    from src.mechanics.cohomology import annihilates, nontrivial_all_frobenius
    if g.group != G:
        raise ConsistencyError("the cocycle belongs to another group")
    verdict = nontrivial_all_frobenius(g, m_max)
    conditional = False
    if not verdict.certified:
        if not (heuristic and verdict.kind == "CHECKED"):
            raise NontrivialityNotCertifiedError(f"nontriviality verdict is {verdict}")
        conditional = True
        log.warning("⚠️ heuristic certificate: nontriviality only checked up to m=%d", verdict.m)

    ring = g.module.ring
    witnesses = []
    for i, a in enumerate(ann_elements, start=1):
        result = annihilates(a, g)
        if not result.annihilates:
            raise NotAnnihilatingError(i, a)
        witnesses.append({"element": str(a), "witness": result.witness})

    k = len(ann_elements)
    gb = buchberger(Ideal(ring, list(ann_elements)), degree_cap=degree_cap)
    dim = -1 if gb.is_unit() else krull_dimension(gb)
    if dim != ring.nvars - k:
        raise NotPhsopError(f"k[V]/(a_1..a_{k}) has dimension {dim}, expected {ring.nvars - k}")

    bound = k - 2
    notes = []
    if conditional:
        notes.append(f"conditional: Frobenius powers checked only up to m={verdict.m}")
    return DefectCertificate(str(g), str(verdict), witnesses, ring.nvars, dim, k, bound,
                             NO_CM_VERDICT if k >= 3 else None, conditional, notes)


@dataclass
class BoundReport:
    bound: Optional[int]
    evidence: Dict[str, object]
    conclusion: Optional[str] = None


def copies_bound(G, k: int) -> BoundReport:
    """k - 2 for V^k when G has a normal subgroup of index p."""
    from src.mechanics.group import normal_subgroups_of_index_p
    normals = normal_subgroups_of_index_p(G)
    if not normals:
        return BoundReport(None, {"normal_index_p": 0})
    bound = k - 2
    return BoundReport(bound, {"normal_index_p": len(normals), "copies": k},
                       NO_CM_VERDICT if bound >= 1 else None)


def regular_rep_bound(G) -> BoundReport:
    """|G|(p-1)/p - 2 for the regular representation when p divides |G|."""
    from src.mechanics.group import min_order_p_codim
    p, order = G.field.p, G.order
    if order % p:
        return BoundReport(None, {"order": order, "p": p})
    bound = order * (p - 1) // p - 2
    evidence = {"order": order, "p": p, "min_order_p_codim": min_order_p_codim(G)}
    if order >= 5:
        evidence["remark"] = "at least one since |G| >= 5"
    return BoundReport(bound, evidence, NO_CM_VERDICT if bound >= 1 else None)
