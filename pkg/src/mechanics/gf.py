"""
Exact arithmetic in finite fields F_{p^n}.

Elements are stored as integer codes: the base-p digits of the code are the
coefficients c_0..c_{n-1} of the element written as a polynomial in the
generator w (reduced modulo the defining modulus). The hot paths (polynomials,
Groebner bases, linear algebra) work directly on codes through the bound
arithmetic methods of FieldCtx; FieldElem is the public value type.
"""
import logging
import threading
from typing import Iterator, List, Optional, Sequence, Tuple

from cachetools import LRUCache, cached

from src.config import DEFAULT_GENERATOR, FIELD_CAP
from src.errors import (CompositeCharacteristicError, IncompatibleFieldsError,
                        NoSuchRootError, SizeCapError, UnknownVariableError)

log = logging.getLogger(__name__)


# --- INTEGER HELPERS ---

def is_prime(p: int) -> bool:
    """Trial division; fields here are desk-sized."""
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


def prime_factors(n: int) -> List[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


# --- POLYNOMIALS OVER Z_p (coefficient lists, lowest degree first) ---

def _trim(a: List[int]) -> List[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmul(a: Sequence[int], b: Sequence[int], p: int) -> List[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] = (out[i + j] + x * y) % p
    return _trim(out)


def _pdivmod(a: Sequence[int], b: Sequence[int], p: int) -> Tuple[List[int], List[int]]:
    a = _trim(list(a))
    b = _trim(list(b))
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    inv_lead = pow(b[-1], -1, p)
    q = [0] * max(0, len(a) - len(b) + 1)
    while len(a) >= len(b) and a:
        shift = len(a) - len(b)
        c = (a[-1] * inv_lead) % p
        q[shift] = c
        for i, y in enumerate(b):
            a[i + shift] = (a[i + shift] - c * y) % p
        _trim(a)
    return _trim(q), a


def _psub(a: Sequence[int], b: Sequence[int], p: int) -> List[int]:
    out = [0] * max(len(a), len(b))
    for i, x in enumerate(a):
        out[i] = x
    for i, y in enumerate(b):
        out[i] = (out[i] - y) % p
    return _trim(out)


def _pmod(a: Sequence[int], m: Sequence[int], p: int) -> List[int]:
    return _pdivmod(a, m, p)[1]


def _is_irreducible(poly: Sequence[int], p: int) -> bool:
    """Exhaustive factor search: no monic factor of degree 1..n//2 divides poly."""
    n = len(poly) - 1
    if n <= 0:
        return False
    if n == 1:
        return True
    if poly[0] == 0:
        return False
    for d in range(1, n // 2 + 1):
        for k in range(p ** d):
            cand = [(k // p ** i) % p for i in range(d)] + [1]
            if not _pmod(poly, cand, p):
                return False
    return True


def find_irreducible(p: int, n: int) -> Optional[Tuple[int, ...]]:
    """Lexicographically smallest monic irreducible of degree n over F_p.

    Candidates are enumerated by comparing coefficients from the highest
    non-leading degree downwards. Returns the coefficient tuple (lowest degree
    first, leading 1 included); for n == 1 the prime field needs no modulus and
    (0, 1), i.e. "w", is returned as a placeholder.
    """
    if not is_prime(p):
        raise CompositeCharacteristicError(f"{p} is not prime")
    if n < 1:
        raise SizeCapError("extension degree must be at least 1")
    if p ** n > FIELD_CAP:
        raise SizeCapError(f"field size {p}^{n} exceeds cap {FIELD_CAP}")
    if n == 1:
        return (0, 1)
    for k in range(p ** n):
        cand = [(k // p ** i) % p for i in range(n)] + [1]
        if _is_irreducible(cand, p):
            return tuple(cand)
    raise SizeCapError(f"no irreducible of degree {n} over F_{p} found")  # unreachable for valid input


# --- FIELD CONTEXT ---

class FieldCtx:
    """The field F_{p^n}; immutable after construction."""

    __slots__ = ('p', 'n', 'q', 'modulus', 'generator_name', 'add', 'sub', 'neg', 'mul',
                 '_exp', '_log', '_inv', '_lock')

    def __init__(self, p: int, n: int = 1, modulus: Optional[Sequence[int]] = None,
                 generator_name: str = DEFAULT_GENERATOR):
        if not is_prime(p):
            raise CompositeCharacteristicError(f"{p} is not prime")
        if n < 1:
            raise SizeCapError("extension degree must be at least 1")
        if p ** n > FIELD_CAP:
            raise SizeCapError(f"field size {p}^{n} exceeds cap {FIELD_CAP}")
        self.p = p
        self.n = n
        self.q = p ** n
        self.generator_name = generator_name
        if n == 1:
            self.modulus = None
        else:
            if modulus is None:
                modulus = find_irreducible(p, n)
            modulus = tuple(int(c) % p for c in modulus)
            if len(modulus) != n + 1 or modulus[-1] != 1:
                raise SizeCapError(f"modulus must be monic of degree {n}")
            if not _is_irreducible(modulus, p):
                raise SizeCapError(f"modulus {modulus} is reducible over F_{p}")
            self.modulus = modulus
        self._exp = None
        self._log = None
        self._inv = {}
        self._lock = threading.Lock()

        # 1. Bind the arithmetic for the hot paths
        if n == 1:
            self.add = lambda a, b: (a + b) % p
            self.sub = lambda a, b: (a - b) % p
            self.neg = lambda a: (-a) % p
            self.mul = lambda a, b: (a * b) % p
        elif p == 2:
            self.add = lambda a, b: a ^ b
            self.sub = lambda a, b: a ^ b
            self.neg = lambda a: a
            self.mul = self._mul_ext
        else:
            self.add = self._add_ext
            self.sub = lambda a, b: self._add_ext(a, self._neg_ext(b))
            self.neg = self._neg_ext
            self.mul = self._mul_ext

    # --- identity / hashing ---
    def _key(self):
        return (self.p, self.n, self.modulus)

    def __eq__(self, other):
        return isinstance(other, FieldCtx) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        if self.n == 1:
            return f"FieldCtx(F_{self.p})"
        return f"FieldCtx(F_{self.p}^{self.n}, modulus={self.format_modulus()})"

    @property
    def is_prime_field(self) -> bool:
        return self.n == 1

    # --- code conversions ---
    def digits(self, a: int) -> List[int]:
        p = self.p
        out = []
        for _ in range(self.n):
            out.append(a % p)
            a //= p
        return out

    def from_digits(self, digits: Sequence[int]) -> int:
        """Reduces an arbitrary-length coefficient list modulo the modulus."""
        p = self.p
        digits = [int(c) % p for c in digits]
        if self.n > 1 and len(digits) > self.n:
            digits = _pmod(digits, self.modulus, p)
        code = 0
        for c in reversed(digits[:self.n] if self.n == 1 else digits):
            code = code * p + c
        return code

    def from_int(self, k: int) -> int:
        return int(k) % self.p

    # --- extension arithmetic on codes ---
    def _add_ext(self, a: int, b: int) -> int:
        p = self.p
        code, place = 0, 1
        while a or b:
            code += ((a % p + b % p) % p) * place
            a //= p
            b //= p
            place *= p
        return code

    def _neg_ext(self, a: int) -> int:
        p = self.p
        code, place = 0, 1
        while a:
            code += ((-(a % p)) % p) * place
            a //= p
            place *= p
        return code

    def _mul_poly(self, a: int, b: int) -> int:
        prod = _pmul(_trim(self.digits(a)), _trim(self.digits(b)), self.p)
        return self.from_digits(_pmod(prod, self.modulus, self.p) if prod else [])

    def _build_tables(self):
        with self._lock:
            if self._exp is not None:
                return
            q = self.q
            order = q - 1
            factors = prime_factors(order)
            gen = None
            for cand in range(2, q):
                ok = True
                for f in factors:
                    if self._pow_poly(cand, order // f) == 1:
                        ok = False
                        break
                if ok:
                    gen = cand
                    break
            exp = [0] * order
            lg = [0] * q
            x = 1
            for i in range(order):
                exp[i] = x
                lg[x] = i
                x = self._mul_poly(x, gen)
            self._log = lg
            self._exp = exp
            log.debug("🧮 built log tables for %r (primitive code %d)", self, gen)

    def _pow_poly(self, a: int, e: int) -> int:
        result = 1
        while e:
            if e & 1:
                result = self._mul_poly(result, a)
            a = self._mul_poly(a, a)
            e >>= 1
        return result

    def _mul_ext(self, a: int, b: int) -> int:
        if not a or not b:
            return 0
        if self._exp is None:
            self._build_tables()
        return self._exp[(self._log[a] + self._log[b]) % (self.q - 1)]

    def inv(self, a: int) -> int:
        """Inverse by the extended Euclidean algorithm on the coefficient polynomial."""
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        if self.n == 1:
            return pow(a, -1, self.p)
        cached_inv = self._inv.get(a)
        if cached_inv is not None:
            return cached_inv
        p = self.p
        r0, r1 = list(self.modulus), _trim(self.digits(a))
        s0, s1 = [], [1]
        while r1:
            quo, rem = _pdivmod(r0, r1, p)
            r0, r1 = r1, rem
            s0, s1 = s1, _psub(s0, _pmul(quo, s1, p), p)
        # r0 is a nonzero constant
        c = pow(r0[0], -1, p)
        result = self.from_digits([(x * c) % p for x in s0])
        self._inv[a] = result
        return result

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def power(self, a: int, e: int) -> int:
        if e < 0:
            a = self.inv(a)
            e = -e
        result = 1
        while e:
            if e & 1:
                result = self.mul(result, a)
            a = self.mul(a, a)
            e >>= 1
        return result

    def frob(self, a: int, m: int) -> int:
        """a^(p^m) on codes."""
        if a == 0 or self.n == 1:
            return a
        e = pow(self.p, m, self.q - 1)
        return self.power(a, e) if e else 1

    def order_of(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("zero has no multiplicative order")
        order = self.q - 1
        for f in prime_factors(self.q - 1):
            while order % f == 0 and self.power(a, order // f) == 1:
                order //= f
        return order

    # --- public element API ---
    def __call__(self, value) -> "FieldElem":
        if isinstance(value, FieldElem):
            if value.ctx != self:
                raise IncompatibleFieldsError(f"{value} belongs to {value.ctx}, not {self}")
            return value
        if isinstance(value, str):
            return self.parse(value)
        return FieldElem(self, self.from_int(value))

    def element(self, code: int) -> "FieldElem":
        return FieldElem(self, code)

    def zero(self) -> "FieldElem":
        return FieldElem(self, 0)

    def one(self) -> "FieldElem":
        return FieldElem(self, 1)

    def generator(self) -> "FieldElem":
        if self.n == 1:
            raise UnknownVariableError(self.generator_name)
        return FieldElem(self, self.p)

    def elements(self) -> Iterator["FieldElem"]:
        for code in range(self.q):
            yield FieldElem(self, code)

    def extension(self, e: int) -> "FieldCtx":
        if e == 1:
            return self
        return FieldCtx(self.p, self.n * e, generator_name=self.generator_name)

    def format(self, a: int) -> str:
        if self.n == 1:
            return str(a)
        digits = self.digits(a)
        terms = []
        g = self.generator_name
        for i in range(self.n - 1, -1, -1):
            c = digits[i]
            if not c:
                continue
            if i == 0:
                terms.append(str(c))
            else:
                base = g if i == 1 else f"{g}^{i}"
                terms.append(base if c == 1 else f"{c}*{base}")
        return "+".join(terms) if terms else "0"

    def format_modulus(self) -> str:
        if self.modulus is None:
            return self.generator_name
        g = self.generator_name
        terms = []
        for i in range(len(self.modulus) - 1, -1, -1):
            c = self.modulus[i]
            if not c:
                continue
            if i == 0:
                terms.append(str(c))
            else:
                base = g if i == 1 else f"{g}^{i}"
                terms.append(base if c == 1 else f"{c}*{base}")
        return "+".join(terms)

    def parse(self, text: str) -> "FieldElem":
        from src.mechanics.parsing import ExprParser

        def from_name(name, pos):
            if name == self.generator_name and self.n > 1:
                return self.generator()
            raise UnknownVariableError(name, pos)

        value = ExprParser(text, lambda k: FieldElem(self, self.from_int(k)), from_name).parse()
        return value if isinstance(value, FieldElem) else FieldElem(self, self.from_int(value))

    def is_subfield_of(self, other: "FieldCtx") -> bool:
        return self.p == other.p and other.n % self.n == 0


# --- FIELD ELEMENTS ---

class FieldElem:
    __slots__ = ('ctx', 'value')

    def __init__(self, ctx: FieldCtx, value: int):
        self.ctx = ctx
        self.value = value

    def _coerce(self, other) -> int:
        if isinstance(other, FieldElem):
            if other.ctx is not self.ctx and other.ctx != self.ctx:
                raise IncompatibleFieldsError(f"cannot mix {self.ctx} and {other.ctx}")
            return other.value
        if isinstance(other, int):
            return self.ctx.from_int(other)
        return NotImplemented

    def __add__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return NotImplemented
        return FieldElem(self.ctx, self.ctx.add(self.value, b))

    __radd__ = __add__

    def __sub__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return NotImplemented
        return FieldElem(self.ctx, self.ctx.sub(self.value, b))

    def __rsub__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return NotImplemented
        return FieldElem(self.ctx, self.ctx.sub(b, self.value))

    def __mul__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return NotImplemented
        return FieldElem(self.ctx, self.ctx.mul(self.value, b))

    __rmul__ = __mul__

    def __truediv__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return NotImplemented
        return FieldElem(self.ctx, self.ctx.div(self.value, b))

    def __rtruediv__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return NotImplemented
        return FieldElem(self.ctx, self.ctx.div(b, self.value))

    def __neg__(self):
        return FieldElem(self.ctx, self.ctx.neg(self.value))

    def __pow__(self, e: int):
        return FieldElem(self.ctx, self.ctx.power(self.value, e))

    def inverse(self) -> "FieldElem":
        return FieldElem(self.ctx, self.ctx.inv(self.value))

    def __eq__(self, other):
        if isinstance(other, FieldElem):
            return self.ctx == other.ctx and self.value == other.value
        if isinstance(other, int):
            return self.value == self.ctx.from_int(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.ctx, self.value))

    def __bool__(self):
        return self.value != 0

    @property
    def coeffs(self) -> List[int]:
        return self.ctx.digits(self.value)

    def is_zero(self) -> bool:
        return self.value == 0

    def is_one(self) -> bool:
        return self.value == 1

    def __str__(self):
        return self.ctx.format(self.value)

    def __repr__(self):
        return f"FieldElem({self.ctx.format(self.value)})"


# --- OPERATIONS ---

def root_of_unity(ctx: FieldCtx, r: int) -> FieldElem:
    """Smallest element (in code order) of exact multiplicative order r."""
    if r < 1 or (ctx.q - 1) % r:
        raise NoSuchRootError(f"{r} does not divide {ctx.q - 1}")
    for code in range(1, ctx.q):
        if ctx.order_of(code) == r:
            return FieldElem(ctx, code)
    raise NoSuchRootError(f"no element of order {r} in {ctx}")  # unreachable: F_q^* is cyclic


def frobenius(a: FieldElem, m: int) -> FieldElem:
    """a^(p^m)."""
    if m < 0:
        raise ValueError("m must be nonnegative")
    return FieldElem(a.ctx, a.ctx.frob(a.value, m))


_EMBED_CACHE = LRUCache(maxsize=128)


@cached(_EMBED_CACHE, lock=threading.Lock())
def _embedding_root(source: FieldCtx, target: FieldCtx) -> int:
    """Code of the smallest root of the source modulus inside the target field."""
    modulus = source.modulus
    for z in range(target.q):
        acc = 0
        for c in reversed(modulus):
            acc = target.add(target.mul(acc, z), target.from_int(c))
        if acc == 0:
            return z
    raise IncompatibleFieldsError(f"{source} does not embed into {target}")


def embed_code(source: FieldCtx, target: FieldCtx, a: int) -> int:
    if source == target:
        return a
    if source.p != target.p or target.n % source.n:
        raise IncompatibleFieldsError(f"{source} does not embed into {target}")
    if source.n == 1:
        return a
    z = _embedding_root(source, target)
    acc = 0
    for c in reversed(source.digits(a)):
        acc = target.add(target.mul(acc, z), target.from_int(c))
    return acc


def embed(a: FieldElem, target: FieldCtx) -> FieldElem:
    """Image of a under the fixed embedding F_{p^n} -> F_{p^(n e)}."""
    return FieldElem(target, embed_code(a.ctx, target, a.value))
