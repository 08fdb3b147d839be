"""
Buchberger-based ideal engine.

buchberger() uses the Gebauer-Moeller pair criteria and the sugar selection
strategy (ties broken by lcm order, then pair indices), so bases are
deterministic. Results are reduced, monic and sorted by descending leading
monomial, and are memoized per (ring, generator set).
"""
import heapq
import itertools
import logging
import threading
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

from cachetools import LRUCache, cached
from cachetools.keys import hashkey
from sympy import Poly, ZZ, symbols

from src.config import AUX_INTERSECT, AUX_RABINOWITSCH, DEGREE_CAP, MAX_VARIABLES_DIM
from src.errors import (DegreeCapExceeded, IncompatibleFieldsError, OrderMismatchError, SizeCapError,
                        UnitIdealError, ZeroDivisorQueryError)
from src.mechanics.mpoly import GREVLEX, Exponent, MonomialOrder, Polynomial, PolyRing

log = logging.getLogger(__name__)

t_symbol = symbols("t")


class Ideal:
    __slots__ = ('ring', 'gens')

    def __init__(self, ring: PolyRing, gens: Iterable[Polynomial] = ()):
        gens = [g for g in gens if not g.is_zero()]
        for g in gens:
            if g.ring != ring:
                raise IncompatibleFieldsError(f"generator {g} is not in {ring}")
        self.ring = ring
        self.gens = gens

    def __add__(self, other: "Ideal") -> "Ideal":
        return Ideal(self.ring, self.gens + [g.to_ring(self.ring) for g in other.gens])

    def with_gens(self, extra: Iterable[Polynomial]) -> "Ideal":
        return Ideal(self.ring, self.gens + list(extra))

    def is_zero(self) -> bool:
        return not self.gens

    def __str__(self):
        return "(" + ", ".join(str(g) for g in self.gens) + ")" if self.gens else "(0)"

    def __repr__(self):
        return f"Ideal{self}"


class GroebnerBasis:
    __slots__ = ('ideal', 'ring', 'order', 'basis', 'stats')

    def __init__(self, ideal: Ideal, ring: PolyRing, basis: List[Polynomial], stats: Dict[str, int]):
        self.ideal = ideal
        self.ring = ring
        self.order = ring.order
        self.basis = basis
        self.stats = stats

    def __iter__(self):
        return iter(self.basis)

    def __len__(self):
        return len(self.basis)

    def is_unit(self) -> bool:
        return any(g.is_constant() for g in self.basis)

    def leading_monomials(self) -> List[Exponent]:
        return [g.lm() for g in self.basis]

    def normal_form(self, f: Polynomial) -> Polynomial:
        return normal_form(f, self)

    def contains(self, f: Polynomial) -> bool:
        return normal_form(f, self).is_zero()

    def as_ideal(self) -> Ideal:
        return Ideal(self.ring, self.basis)

    def __str__(self):
        return "{" + ", ".join(str(g) for g in self.basis) + "}"


# --- REDUCTION ---

def _divides(a: Exponent, b: Exponent) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _lcm(a: Exponent, b: Exponent) -> Exponent:
    return tuple(x if x >= y else y for x, y in zip(a, b))


def _reduce(ring: PolyRing, coeffs: Dict[Exponent, int], divisors: Sequence[Tuple[Exponent, List]]) -> Dict[Exponent, int]:
    """Full reduction of coeffs by monic divisors given as (lm, tail items).

    Terms are visited largest first through a heap of order keys; terms that
    cancel stay in the heap and are skipped when popped.
    """
    field = ring.field
    sub, mul = field.sub, field.mul
    key = ring.key
    work = dict(coeffs)
    heap = [(key(e), e) for e in work]
    heapq.heapify(heap)
    remainder = {}
    while heap:
        _, e = heapq.heappop(heap)
        c = work.pop(e, 0)
        if not c:
            continue
        for lm, tail in divisors:
            if _divides(lm, e):
                shift = tuple(x - y for x, y in zip(e, lm))
                for te, tc in tail:
                    ne = tuple(x + y for x, y in zip(te, shift))
                    old = work.get(ne)
                    v = sub(old or 0, mul(c, tc))
                    if v:
                        if old is None:
                            heapq.heappush(heap, (key(ne), ne))
                        work[ne] = v
                    elif old is not None:
                        del work[ne]
                break
        else:
            remainder[e] = c
    return remainder


def _divisor_entry(g: Polynomial) -> Tuple[Exponent, List]:
    items = g.sorted_items()
    return items[0][0], items[1:]


def normal_form(f: Polynomial, gb: GroebnerBasis) -> Polynomial:
    """Remainder of f on division by the basis; zero iff f lies in the ideal."""
    if f.ring != gb.ring:
        if f.ring.vars == gb.ring.vars and f.ring.order != gb.ring.order:
            raise OrderMismatchError(f"polynomial order {f.ring.order!r} vs basis order {gb.ring.order!r}")
        f = f.to_ring(gb.ring)
    divisors = [_divisor_entry(g) for g in gb.basis]
    return Polynomial(gb.ring, _reduce(gb.ring, f.coeffs, divisors))


# --- BUCHBERGER ---

def _gens_key(ring: PolyRing, gens: Sequence[Polynomial], degree_cap: int, seed: Sequence[Polynomial] = ()):
    return hashkey(ring, frozenset(frozenset(g.coeffs.items()) for g in gens),
                   frozenset(frozenset(g.coeffs.items()) for g in seed))


@cached(LRUCache(maxsize=256), key=_gens_key, lock=threading.Lock())
def _compute_basis(ring: PolyRing, gens: Sequence[Polynomial], degree_cap: int,
                   seed: Sequence[Polynomial] = ()) -> Tuple[List[Polynomial], Dict[str, int]]:
    """seed must already be a reduced Groebner basis under the restriction of
    the ring order; its own pairs are never formed."""
    key, wdeg = ring.key, ring.wdeg
    store: List[Polynomial] = []       # every basis element ever added
    entries: List[Tuple[Exponent, List]] = []
    sugar: List[int] = []
    G: List[int] = []
    pairs: Dict[Tuple[int, int], Tuple] = {}
    stats = {"pairs": 0, "reductions_to_zero": 0, "max_degree": 0}

    def pair_info(i, j):
        li, lj = entries[i][0], entries[j][0]
        L = _lcm(li, lj)
        s = max(sugar[i] + wdeg(L) - wdeg(li), sugar[j] + wdeg(L) - wdeg(lj))
        return (s, key(L), i, j)

    def update(ih):
        # Gebauer-Moeller criteria
        mh = entries[ih][0]
        C = list(G)
        D = []
        while C:
            ig = C.pop(0)
            mg = entries[ig][0]
            L = _lcm(mh, mg)
            disjoint = all(not (a and b) for a, b in zip(mh, mg))
            if disjoint or not (any(_divides(_lcm(mh, entries[x][0]), L) for x in C)
                                or any(_divides(_lcm(mh, entries[x][0]), L) for x in D)):
                D.append(ig)
        E = [ig for ig in D if not all(not (a and b) for a, b in zip(mh, entries[ig][0]))]
        for (i, j) in list(pairs):
            mi, mj = entries[i][0], entries[j][0]
            L = _lcm(mi, mj)
            if _divides(mh, L) and _lcm(mi, mh) != L and _lcm(mj, mh) != L:
                del pairs[(i, j)]
        for ig in E:
            i, j = (ig, ih) if ig < ih else (ih, ig)
            pairs[(i, j)] = pair_info(i, j)
        G[:] = [ig for ig in G if not _divides(mh, entries[ig][0])] + [ih]

    def add(poly: Polynomial, s: int):
        poly = poly.monic()
        store.append(poly)
        entries.append(_divisor_entry(poly))
        sugar.append(s)
        update(len(store) - 1)

    for g in seed:
        store.append(g.monic())
        entries.append(_divisor_entry(store[-1]))
        sugar.append(g.degree())
        G.append(len(store) - 1)

    initial = sorted(gens, key=lambda g: key(g.lm()), reverse=True)
    for g in initial:
        r = _reduce(ring, g.coeffs, [entries[i] for i in G])
        if r:
            add(Polynomial(ring, r), g.degree())

    while pairs:
        pair, info = min(pairs.items(), key=lambda item: item[1])
        del pairs[pair]
        s = info[0]
        if s > degree_cap:
            raise DegreeCapExceeded(degree_cap, s, [store[i] for i in G])
        stats["pairs"] += 1
        stats["max_degree"] = max(stats["max_degree"], s)
        i, j = pair
        fi, fj = store[i], store[j]
        L = _lcm(entries[i][0], entries[j][0])
        spoly = (fi.mul_term(tuple(a - b for a, b in zip(L, entries[i][0])), 1)
                 - fj.mul_term(tuple(a - b for a, b in zip(L, entries[j][0])), 1))
        r = _reduce(ring, spoly.coeffs, [entries[x] for x in G])
        if r:
            add(Polynomial(ring, r), s)
            if len(G) % 25 == 0:
                log.debug("🧮 basis size %d, %d pairs pending, sugar %d", len(G), len(pairs), s)
        else:
            stats["reductions_to_zero"] += 1

    # interreduce: G is already minimal
    reduced = []
    for ig in G:
        others = [entries[x] for x in G if x != ig]
        reduced.append(Polynomial(ring, _reduce(ring, store[ig].coeffs, others)).monic())
    reduced.sort(key=lambda g: key(g.lm()))
    stats["size"] = len(reduced)
    log.debug("✅ Groebner basis with %d elements after %d pairs", len(reduced), stats["pairs"])
    return reduced, stats


def buchberger(ideal: Ideal, order: Optional[MonomialOrder] = None, degree_cap: Optional[int] = None) -> GroebnerBasis:
    """Reduced Groebner basis of ideal under order (default: the ring's order)."""
    ring = ideal.ring if order is None else ideal.ring.with_order(order)
    cap = DEGREE_CAP if degree_cap is None else degree_cap
    gens = [g.to_ring(ring) for g in ideal.gens]
    basis, stats = _compute_basis(ring, gens, cap)
    return GroebnerBasis(ideal, ring, list(basis), dict(stats))


def groebner_of(source: Union[Ideal, GroebnerBasis], degree_cap: Optional[int] = None) -> GroebnerBasis:
    return source if isinstance(source, GroebnerBasis) else buchberger(source, degree_cap=degree_cap)


# --- IDEAL OPERATIONS ---

def ideal_contains(big: Union[Ideal, GroebnerBasis], small: Ideal, degree_cap: Optional[int] = None) -> bool:
    gb = groebner_of(big, degree_cap)
    return all(gb.contains(g) for g in small.gens)


def ideal_equal(a: Ideal, b: Ideal, degree_cap: Optional[int] = None) -> bool:
    return ideal_contains(a, b, degree_cap) and ideal_contains(b, a, degree_cap)


def radical_member(f: Polynomial, ideal: Union[Ideal, GroebnerBasis], degree_cap: Optional[int] = None,
                   frobenius_tries: int = 2) -> bool:
    """f in sqrt(I), decided by 1 in I + (1 - T*f) with one auxiliary variable.

    Given a grevlex basis, f^(p^m) for m <= frobenius_tries is tried by normal
    form first, and the Rabinowitsch run is seeded with the basis so only the
    pairs against 1 - T*f are formed.
    """
    ring = ideal.ring
    if f.is_zero():
        return True
    cap = DEGREE_CAP if degree_cap is None else degree_cap
    if isinstance(ideal, GroebnerBasis):
        power = f
        for m in range(frobenius_tries + 1):
            if m:
                power = f.frobenius_power_poly(m)
                if power.degree() > cap:
                    break
            if ideal.contains(power):
                return True
    extended = ring.prepend([AUX_RABINOWITSCH], order=GREVLEX)
    aux = extended.var(0)
    rabinowitsch = extended.one() - aux * f.to_ring(extended)
    if isinstance(ideal, GroebnerBasis) and ring.order == GREVLEX:
        seed = tuple(g.to_ring(extended) for g in ideal.basis)
        basis, _ = _compute_basis(extended, [rabinowitsch], cap, seed=seed)
        return any(g.is_constant() for g in basis)
    gens = ideal.basis if isinstance(ideal, GroebnerBasis) else ideal.gens
    lifted = [g.to_ring(extended) for g in gens] + [rabinowitsch]
    return buchberger(Ideal(extended, lifted), degree_cap=degree_cap).is_unit()


def eliminate(ideal: Ideal, k: int, degree_cap: Optional[int] = None) -> Ideal:
    """I intersected with the subring of the last n-k variables."""
    ring = ideal.ring
    gb = buchberger(ideal, MonomialOrder.elim(k), degree_cap)
    target = ring.drop_first(k)
    kept = [g for g in gb.basis if all(not any(e[:k]) for e in g.coeffs)]
    return Ideal(target, [g.to_ring(target) for g in kept])


def intersect(a: Ideal, b: Ideal, degree_cap: Optional[int] = None) -> Ideal:
    """I cap J via t*I + (1-t)*J, eliminating t."""
    ring = a.ring
    if b.ring != ring:
        raise IncompatibleFieldsError("intersect needs ideals of the same ring")
    if a.is_zero() or b.is_zero():
        return Ideal(ring)
    extended = ring.prepend([AUX_INTERSECT])
    t = extended.var(0)
    gens = [t * g.to_ring(extended) for g in a.gens]
    gens += [(extended.one() - t) * g.to_ring(extended) for g in b.gens]
    result = eliminate(Ideal(extended, gens), 1, degree_cap)
    return Ideal(ring, [g.to_ring(ring) for g in result.gens])


def quotient(ideal: Ideal, f: Polynomial, degree_cap: Optional[int] = None) -> Ideal:
    """(I : f) = (I cap (f)) / f."""
    if f.is_zero():
        raise ZeroDivisorQueryError("quotient by the zero polynomial")
    meet = intersect(ideal, Ideal(ideal.ring, [f]), degree_cap)
    return Ideal(ideal.ring, [g.exact_div(f) for g in meet.gens])


def krull_dimension(gb: GroebnerBasis) -> int:
    """Largest set of variables containing the support of no leading monomial."""
    if gb.is_unit():
        raise UnitIdealError("the unit ideal has dimension -1")
    n = gb.ring.nvars
    if n > MAX_VARIABLES_DIM:
        raise SizeCapError(f"{n} variables exceed the dimension search cap {MAX_VARIABLES_DIM}")
    masks = set()
    for e in gb.leading_monomials():
        masks.add(sum(1 << i for i, x in enumerate(e) if x))
    for size in range(n, -1, -1):
        for subset in itertools.combinations(range(n), size):
            s = sum(1 << i for i in subset)
            if all(m & ~s for m in masks):
                return size
    return 0


# --- HILBERT NUMERATORS OF MONOMIAL IDEALS ---

def _minimalize(gens: Iterable[Exponent]) -> List[Exponent]:
    out: List[Exponent] = []
    for m in sorted(set(gens), key=sum):
        if not any(_divides(g, m) for g in out):
            out.append(m)
    return out


def _poly_mul(a: Dict[int, int], b: Dict[int, int]) -> Dict[int, int]:
    out: Dict[int, int] = {}
    for i, x in a.items():
        for j, y in b.items():
            out[i + j] = out.get(i + j, 0) + x * y
    return {k: v for k, v in out.items() if v}


def _poly_add(a: Dict[int, int], b: Dict[int, int]) -> Dict[int, int]:
    out = dict(a)
    for k, v in b.items():
        out[k] = out.get(k, 0) + v
    return {k: v for k, v in out.items() if v}


def _numerator(gens: List[Exponent], weights: Sequence[int]) -> Dict[int, int]:
    gens = _minimalize(gens)
    if not gens:
        return {0: 1}
    masks = [sum(1 << i for i, x in enumerate(m) if x) for m in gens]
    union = 0
    coprime = True
    for mask in masks:
        if union & mask:
            coprime = False
            break
        union |= mask
    if coprime:
        out = {0: 1}
        for m in gens:
            d = sum(a * b for a, b in zip(m, weights))
            out = _poly_mul(out, {0: 1, d: -1})
        return out
    # pivot on the variable shared by most mixed generators
    mixed = [m for m, mask in zip(gens, masks) if mask & (mask - 1)]
    counts = [sum(1 for m in mixed if m[v]) for v in range(len(weights))]
    v = max(range(len(weights)), key=lambda i: (counts[i], -i))
    e = min(m[v] for m in mixed if m[v])
    pivot = tuple(e if i == v else 0 for i in range(len(weights)))
    plus = [m for m in gens if not _divides(pivot, m)] + [pivot]
    colon = [tuple(max(x - y, 0) for x, y in zip(m, pivot)) for m in gens]
    shifted = {k + e * weights[v]: c for k, c in _numerator(colon, weights).items()}
    return _poly_add(_numerator(plus, weights), shifted)


def hilbert_numerator(monomials: Iterable[Exponent], weights: Sequence[int]) -> Poly:
    """N(t) with H(ring/M, t) = N(t) / prod_v (1 - t^weight(v))."""
    coeffs = _numerator(list(monomials), list(weights))
    return Poly.from_dict({(k,): v for k, v in coeffs.items()} or {(0,): 0}, t_symbol, domain=ZZ)
