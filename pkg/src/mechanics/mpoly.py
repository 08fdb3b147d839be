"""
Sparse multivariate polynomials over a FieldCtx.

A Polynomial is an immutable map {exponent tuple: coefficient code}. Term order
lives on the ring: PolyRing.key(e) is a sort key for which ascending order
means descending monomial order, so the leading monomial is the min key.
"""
import logging
from typing import Dict, List, Optional, Sequence, Tuple

from src.config import MAX_EXPONENT, TAG_PREFIX
from src.errors import (CharZeroUnsupportedError, DimensionMismatchError, IncompatibleFieldsError,
                        SizeCapError, UnknownVariableError)
from src.mechanics.gf import FieldCtx, FieldElem, embed_code
from src.mechanics.parsing import ExprParser

log = logging.getLogger(__name__)

Exponent = Tuple[int, ...]


class MonomialOrder:
    """grevlex, lex, or elim(k): grevlex on the first k variables, ties broken
    by grevlex on the rest. Degrees are weighted by the ring weights."""

    __slots__ = ('kind', 'k')

    def __init__(self, kind: str = "grevlex", k: int = 0):
        if kind not in ("grevlex", "lex", "elim"):
            raise ValueError(f"unknown monomial order '{kind}'")
        self.kind = kind
        self.k = k if kind == "elim" else 0

    @classmethod
    def elim(cls, k: int) -> "MonomialOrder":
        return cls("elim", k)

    def __eq__(self, other):
        return isinstance(other, MonomialOrder) and (self.kind, self.k) == (other.kind, other.k)

    def __hash__(self):
        return hash((self.kind, self.k))

    def __repr__(self):
        return f"elim({self.k})" if self.kind == "elim" else self.kind

    def key_function(self, weights: Sequence[int]):
        w = tuple(weights)
        n = len(w)
        if self.kind == "lex":
            return lambda e: tuple(-x for x in e)
        if self.kind == "grevlex":
            return lambda e: (-sum(a * b for a, b in zip(e, w)),) + e[::-1]
        k = self.k
        w1, w2 = w[:k], w[k:]

        def elim_key(e):
            b1, b2 = e[:k], e[k:n]
            return ((-sum(a * b for a, b in zip(b1, w1)),) + b1[::-1]
                    + (-sum(a * b for a, b in zip(b2, w2)),) + b2[::-1])
        return elim_key


GREVLEX = MonomialOrder("grevlex")
LEX = MonomialOrder("lex")


class PolyRing:
    __slots__ = ('field', 'vars', 'nvars', 'weights', 'order', '_index', '_keyfn', '_keys', '_hash')

    def __init__(self, field: FieldCtx, variables: Sequence[str], order: Optional[MonomialOrder] = None,
                 weights: Optional[Sequence[int]] = None, reserved_ok: bool = False):
        variables = [v.strip() for v in variables]
        if not variables:
            raise UnknownVariableError("<empty variable list>")
        if len(set(variables)) != len(variables):
            raise UnknownVariableError(f"duplicate variable in {variables}")
        for v in variables:
            if not v or not (v[0].isalpha() or v[0] == "_"):
                raise UnknownVariableError(v)
            if v == field.generator_name:
                raise UnknownVariableError(f"{v} clashes with the field generator")
            if not reserved_ok and v.startswith(TAG_PREFIX):
                raise UnknownVariableError(f"{v} uses the reserved prefix '{TAG_PREFIX}'")
        weights = tuple(int(x) for x in (weights or [1] * len(variables)))
        if len(weights) != len(variables) or any(x < 1 for x in weights):
            raise DimensionMismatchError("weights must be positive, one per variable")
        self.field = field
        self.vars = tuple(variables)
        self.nvars = len(variables)
        self.weights = weights
        self.order = order or GREVLEX
        self._index = {v: i for i, v in enumerate(self.vars)}
        self._keyfn = self.order.key_function(weights)
        self._keys = {}
        self._hash = hash((self.field, self.vars, self.weights, self.order))

    def __eq__(self, other):
        if self is other:
            return True
        return (isinstance(other, PolyRing) and self.field == other.field and self.vars == other.vars
                and self.weights == other.weights and self.order == other.order)

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"PolyRing({self.field!r}, [{','.join(self.vars)}], {self.order!r})"

    # --- monomials ---
    def key(self, e: Exponent):
        k = self._keys.get(e)
        if k is None:
            k = self._keyfn(e)
            self._keys[e] = k
        return k

    def wdeg(self, e: Exponent) -> int:
        return sum(a * b for a, b in zip(e, self.weights))

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise UnknownVariableError(name) from None

    def monomial_str(self, e: Exponent) -> str:
        parts = []
        for name, x in zip(self.vars, e):
            if x == 1:
                parts.append(name)
            elif x > 1:
                parts.append(f"{name}^{x}")
        return "*".join(parts) if parts else "1"

    def monomial_basis(self, d: int) -> List[Exponent]:
        """Exponents of weighted degree d, in descending monomial order."""
        out = []
        n = self.nvars
        w = self.weights

        def rec(i, remaining, prefix):
            if i == n - 1:
                if remaining % w[i] == 0:
                    out.append(tuple(prefix + [remaining // w[i]]))
                return
            for x in range(remaining // w[i], -1, -1):
                prefix.append(x)
                rec(i + 1, remaining - x * w[i], prefix)
                prefix.pop()

        if d >= 0:
            rec(0, d, [])
        out.sort(key=self.key)
        return out

    # --- derived rings ---
    def with_order(self, order: MonomialOrder) -> "PolyRing":
        if order == self.order:
            return self
        return PolyRing(self.field, self.vars, order, self.weights, reserved_ok=True)

    def prepend(self, names: Sequence[str], weights: Optional[Sequence[int]] = None,
                order: Optional[MonomialOrder] = None) -> "PolyRing":
        """New ring with extra variables in front (the block an elim order removes)."""
        weights = list(weights or [1] * len(names))
        return PolyRing(self.field, list(names) + list(self.vars), order or MonomialOrder.elim(len(names)),
                        weights + list(self.weights), reserved_ok=True)

    def drop_first(self, k: int) -> "PolyRing":
        return PolyRing(self.field, self.vars[k:], GREVLEX, self.weights[k:], reserved_ok=True)

    # --- constructors ---
    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    def const(self, c) -> "Polynomial":
        code = self._coerce_scalar(c)
        return Polynomial(self, {(0,) * self.nvars: code} if code else {})

    def one(self) -> "Polynomial":
        return self.const(1)

    def var(self, name_or_index) -> "Polynomial":
        i = name_or_index if isinstance(name_or_index, int) else self.index(name_or_index)
        e = [0] * self.nvars
        e[i] = 1
        return Polynomial(self, {tuple(e): 1})

    def gens(self) -> List["Polynomial"]:
        return [self.var(i) for i in range(self.nvars)]

    def monomial(self, e: Exponent, c=1) -> "Polynomial":
        code = self._coerce_scalar(c)
        return Polynomial(self, {tuple(e): code} if code else {})

    def from_vector(self, coords: Dict[int, int], basis: Sequence[Exponent]) -> "Polynomial":
        return Polynomial(self, {basis[i]: c for i, c in coords.items() if c})

    def _coerce_scalar(self, c) -> int:
        if isinstance(c, FieldElem):
            if c.ctx != self.field:
                raise IncompatibleFieldsError(f"{c} is not in {self.field}")
            return c.value
        return self.field.from_int(c)

    def parse(self, text: str) -> "Polynomial":
        field = self.field

        def from_name(name, pos):
            if name in self._index:
                return self.var(self._index[name])
            if name == field.generator_name and field.n > 1:
                return Polynomial(self, {(0,) * self.nvars: field.p})
            raise UnknownVariableError(name, pos)

        return ExprParser(text, self.const, from_name).parse()

    def __call__(self, value) -> "Polynomial":
        if isinstance(value, Polynomial):
            return value.to_ring(self)
        if isinstance(value, str):
            return self.parse(value)
        return self.const(value)


class Polynomial:
    __slots__ = ('ring', 'coeffs', '_sorted')

    def __init__(self, ring: PolyRing, coeffs: Dict[Exponent, int]):
        self.ring = ring
        self.coeffs = coeffs
        self._sorted = None

    # --- term access ---
    def sorted_items(self) -> List[Tuple[Exponent, int]]:
        """(exponent, code) pairs, strictly descending in the ring's order."""
        if self._sorted is None:
            key = self.ring.key
            self._sorted = sorted(self.coeffs.items(), key=lambda item: key(item[0]))
        return self._sorted

    @property
    def terms(self) -> List[Tuple[Exponent, FieldElem]]:
        field = self.ring.field
        return [(e, FieldElem(field, c)) for e, c in self.sorted_items()]

    def lm(self) -> Exponent:
        return self.sorted_items()[0][0]

    def lc(self) -> int:
        return self.sorted_items()[0][1]

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.coeffs)

    def constant_term(self) -> int:
        return self.coeffs.get((0,) * self.ring.nvars, 0)

    def degree(self) -> int:
        if not self.coeffs:
            return -1
        return max(self.ring.wdeg(e) for e in self.coeffs)

    def is_homogeneous(self) -> bool:
        degrees = {self.ring.wdeg(e) for e in self.coeffs}
        return len(degrees) <= 1

    def support_vars(self) -> List[int]:
        used = set()
        for e in self.coeffs:
            used.update(i for i, x in enumerate(e) if x)
        return sorted(used)

    def homogeneous_component(self, d: int) -> "Polynomial":
        wdeg = self.ring.wdeg
        return Polynomial(self.ring, {e: c for e, c in self.coeffs.items() if wdeg(e) == d})

    # --- arithmetic ---
    def _other(self, other) -> Optional["Polynomial"]:
        if isinstance(other, Polynomial):
            if other.ring is not self.ring and other.ring != self.ring:
                raise IncompatibleFieldsError(f"cannot mix polynomials of {self.ring} and {other.ring}")
            return other
        if isinstance(other, (int, FieldElem)):
            return self.ring.const(other)
        return None

    def __add__(self, other):
        other = self._other(other)
        if other is None:
            return NotImplemented
        add = self.ring.field.add
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            s = add(out.get(e, 0), c)
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return Polynomial(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        neg = self.ring.field.neg
        return Polynomial(self.ring, {e: neg(c) for e, c in self.coeffs.items()})

    def __sub__(self, other):
        other = self._other(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._other(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = self._other(other)
        if other is None:
            return NotImplemented
        field = self.ring.field
        add, mul = field.add, field.mul
        out = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in other.coeffs.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = add(out.get(e, 0), mul(c1, c2))
                if s:
                    out[e] = s
                else:
                    out.pop(e, None)
        return Polynomial(self.ring, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("polynomial exponent must be a nonnegative integer")
        result = self.ring.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def scale(self, code: int) -> "Polynomial":
        if code == 0:
            return self.ring.zero()
        mul = self.ring.field.mul
        return Polynomial(self.ring, {e: mul(c, code) for e, c in self.coeffs.items()})

    def mul_term(self, shift: Exponent, code: int) -> "Polynomial":
        mul = self.ring.field.mul
        return Polynomial(self.ring, {tuple(a + b for a, b in zip(e, shift)): mul(c, code)
                                      for e, c in self.coeffs.items()})

    def monic(self) -> "Polynomial":
        if not self.coeffs:
            return self
        return self.scale(self.ring.field.inv(self.lc()))

    def exact_div(self, divisor: "Polynomial") -> "Polynomial":
        """Quotient of self by divisor; raises if the division leaves a remainder."""
        if divisor.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        field = self.ring.field
        lm_d, lc_inv = divisor.lm(), field.inv(divisor.lc())
        rest = self
        quotient = {}
        while rest:
            e, c = rest.sorted_items()[0]
            shift = tuple(a - b for a, b in zip(e, lm_d))
            if any(x < 0 for x in shift):
                raise ArithmeticError(f"{divisor} does not divide {self}")
            q = field.mul(c, lc_inv)
            quotient[shift] = q
            rest = rest - divisor.mul_term(shift, q)
        return Polynomial(self.ring, quotient)

    # --- comparisons / printing ---
    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.ring == other.ring and self.coeffs == other.coeffs
        if isinstance(other, int):
            return self.coeffs == self.ring.const(other).coeffs
        return NotImplemented

    def __hash__(self):
        return hash((self.ring, frozenset(self.coeffs.items())))

    def __str__(self):
        if not self.coeffs:
            return "0"
        ring = self.ring
        field = ring.field
        single = len(self.coeffs) == 1
        parts = []
        for e, c in self.sorted_items():
            cs = field.format(c)
            if field.n > 1 and "+" in cs and not (single and not any(e)):
                cs = f"({cs})"
            if not any(e):
                parts.append(cs)
            elif c == 1:
                parts.append(ring.monomial_str(e))
            else:
                parts.append(f"{cs}*{ring.monomial_str(e)}")
        return " + ".join(parts)

    def __repr__(self):
        return f"Polynomial({self})"

    # --- ring changes ---
    def to_ring(self, ring: PolyRing) -> "Polynomial":
        """Same polynomial in a ring sharing its variable names (by name, any order)."""
        if ring == self.ring:
            return self if ring is self.ring else Polynomial(ring, self.coeffs)
        if ring.field != self.ring.field:
            raise IncompatibleFieldsError(f"{self.ring.field} vs {ring.field}")
        positions = []
        for i, name in enumerate(self.ring.vars):
            positions.append(ring.index(name) if name in ring._index else -1)
        out = {}
        for e, c in self.coeffs.items():
            target = [0] * ring.nvars
            for i, x in enumerate(e):
                if x:
                    if positions[i] < 0:
                        raise UnknownVariableError(self.ring.vars[i])
                    target[positions[i]] = x
            out[tuple(target)] = c
        return Polynomial(ring, out)

    def substitute(self, images: Sequence["Polynomial"], target: Optional[PolyRing] = None) -> "Polynomial":
        """Replace variable i by images[i] (polynomials of the target ring)."""
        if len(images) != self.ring.nvars:
            raise DimensionMismatchError(f"{len(images)} images for {self.ring.nvars} variables")
        target = target or (images[0].ring if images else self.ring)
        field = target.field
        powers = [{0: target.one()} for _ in images]

        def power(i, k):
            cache = powers[i]
            if k not in cache:
                best = max(x for x in cache if x <= k)
                p = cache[best]
                for x in range(best + 1, k + 1):
                    p = p * images[i]
                    cache[x] = p
            return cache[k]

        add = field.add
        out = {}
        for e, c in self.coeffs.items():
            term = target.const(FieldElem(field, c))
            for i, k in enumerate(e):
                if k:
                    term = term * power(i, k)
            for te, tc in term.coeffs.items():
                s = add(out.get(te, 0), tc)
                if s:
                    out[te] = s
                else:
                    out.pop(te, None)
        return Polynomial(target, out)

    def apply_matrix(self, matrix: Sequence[Sequence]) -> "Polynomial":
        """f(Mx): x_j becomes sum_i M[j][i] x_i, all substitutions at once."""
        ring = self.ring
        n = ring.nvars
        if len(matrix) != n or any(len(row) != n for row in matrix):
            raise DimensionMismatchError(f"matrix is not {n}x{n}")
        return self.apply_code_matrix([[ring._coerce_scalar(x) for x in row] for row in matrix])

    def apply_code_matrix(self, matrix: Sequence[Sequence[int]]) -> "Polynomial":
        """apply_matrix for a matrix already given as field codes."""
        ring = self.ring
        n = ring.nvars
        if len(matrix) != n:
            raise DimensionMismatchError(f"matrix is not {n}x{n}")
        images = []
        for row in matrix:
            coeffs = {}
            for i, code in enumerate(row):
                if code:
                    e = [0] * n
                    e[i] = 1
                    coeffs[tuple(e)] = code
            images.append(Polynomial(ring, coeffs))
        return self.substitute(images, ring)

    def frobenius_power_poly(self, m: int) -> "Polynomial":
        """f^(p^m), termwise: exponents scale by p^m, coefficients go through Frobenius."""
        field = self.ring.field
        if field.p == 0:
            raise CharZeroUnsupportedError("Frobenius powers need positive characteristic")
        if m < 0:
            raise ValueError("m must be nonnegative")
        if m == 0:
            return self
        q = field.p ** m
        out = {}
        for e, c in self.coeffs.items():
            scaled = tuple(x * q for x in e)
            if scaled and max(scaled) > MAX_EXPONENT:
                raise SizeCapError(f"exponent overflow computing Frobenius power m={m}")
            out[scaled] = field.frob(c, m)
        return Polynomial(self.ring, out)

    # --- evaluation ---
    def evaluator(self, target: FieldCtx):
        """Returns a function of a tuple of codes in target giving the value code."""
        source = self.ring.field
        items = [(e, embed_code(source, target, c)) for e, c in self.coeffs.items()]
        add, mul, power = target.add, target.mul, target.power

        def evaluate_codes(point: Sequence[int]) -> int:
            acc = 0
            for e, c in items:
                v = c
                for x, k in zip(point, e):
                    if k:
                        v = mul(v, power(x, k))
                        if not v:
                            break
                acc = add(acc, v)
            return acc
        return evaluate_codes

    def evaluate(self, point: Sequence) -> FieldElem:
        if len(point) != self.ring.nvars:
            raise DimensionMismatchError(f"point has {len(point)} coordinates, ring has {self.ring.nvars}")
        target = self.ring.field
        for x in point:
            if isinstance(x, FieldElem):
                target = x.ctx
                break
        codes = []
        for x in point:
            if isinstance(x, FieldElem):
                if x.ctx != target:
                    raise IncompatibleFieldsError("point coordinates live in different fields")
                codes.append(x.value)
            else:
                codes.append(target.from_int(x))
        return FieldElem(target, self.evaluator(target)(codes))


def parse(ring: PolyRing, text: str) -> Polynomial:
    return ring.parse(text)


def evaluate(f: Polynomial, point: Sequence) -> FieldElem:
    return f.evaluate(point)


def frobenius_power_poly(f: Polynomial, m: int) -> Polynomial:
    return f.frobenius_power_poly(m)


def apply_matrix(f: Polynomial, matrix: Sequence[Sequence]) -> Polynomial:
    return f.apply_matrix(matrix)
