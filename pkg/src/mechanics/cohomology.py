"""
First cohomology H^1(G, M) for M a graded piece k[V]_d or a one-dimensional
character module, plus H^n(G, F_p) through the normalized bar complex.

Cocycles are stored on every group element. Values at the generators
determine the rest through g_{s h} = s.g_h + g_s along the Cayley graph; every
edge of the graph is checked, which is equivalent to the full cocycle identity.
"""
import itertools
import logging
from collections import deque
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from src.config import BAR_CAP, FROBENIUS_MMAX, MODULE_DIM_CAP, SEARCH_DEGREE
from src.errors import (InvalidCocycleError, NotHomogeneousError, NotInvariantError, NotSubgroupError,
                        SizeCapError, TrivialClassError)
from src.mechanics.gf import FieldCtx
from src.mechanics.group import FiniteMatrixGroup, GroupElement, is_permutation_group, maximal_subgroups
from src.mechanics.invariant import GradedPiece, apply_graded, graded_action, graded_piece, is_invariant
from src.mechanics.linalg import SparseEchelon, Vector, kernel, rank
from src.mechanics.mpoly import Polynomial, PolyRing

log = logging.getLogger(__name__)

CERTIFIED, REFUTED, CHECKED = "CERTIFIED", "REFUTED", "CHECKED"


def _add(ctx: FieldCtx, a: Vector, b: Vector) -> Vector:
    out = dict(a)
    for k, v in b.items():
        s = ctx.add(out.get(k, 0), v)
        if s:
            out[k] = s
        else:
            out.pop(k, None)
    return out


def _sub(ctx: FieldCtx, a: Vector, b: Vector) -> Vector:
    return _add(ctx, a, {k: ctx.neg(v) for k, v in b.items()})


def _scale(ctx: FieldCtx, a: Vector, c: int) -> Vector:
    if not c:
        return {}
    return {k: ctx.mul(v, c) for k, v in a.items()}


class CoefficientModule:
    """k[V]_d under the group action, or k twisted by a character."""

    __slots__ = ('group', 'kind', 'ctx', 'ring', 'degree', 'piece', 'character', 'name')

    def __init__(self, group: FiniteMatrixGroup, kind: str, ctx: FieldCtx, ring: Optional[PolyRing] = None,
                 degree: int = 0, character: Optional[Dict[GroupElement, int]] = None, name: Optional[str] = None):
        self.group = group
        self.kind = kind
        self.ctx = ctx
        self.ring = ring
        self.degree = degree
        self.piece: Optional[GradedPiece] = None
        self.character = character
        self.name = name
        if kind == "graded":
            self.piece = graded_piece(ring, degree)
            if self.piece.dim > MODULE_DIM_CAP:
                raise SizeCapError(f"dim k[V]_{degree} = {self.piece.dim} exceeds cap {MODULE_DIM_CAP}")

    @classmethod
    def graded(cls, group: FiniteMatrixGroup, ring: PolyRing, degree: int) -> "CoefficientModule":
        return cls(group, "graded", ring.field, ring=ring, degree=degree)

    @classmethod
    def from_character(cls, group: FiniteMatrixGroup, generator_values: Sequence[int], ctx: Optional[FieldCtx] = None,
                       name: Optional[str] = None) -> "CoefficientModule":
        """Extends generator values to a homomorphism G -> k^*, checking every Cayley edge."""
        ctx = ctx or group.field
        if len(generator_values) != len(group.generators):
            raise InvalidCocycleError("one character value per generator is required")
        if any(v == 0 for v in generator_values):
            raise InvalidCocycleError("character values must be nonzero")
        one = group.identity()
        values = {one: 1}
        queue = deque([one])
        while queue:
            h = queue.popleft()
            for s, v in zip(group.generators, generator_values):
                sh = s * h
                val = ctx.mul(v, values[h])
                if sh not in values:
                    values[sh] = val
                    queue.append(sh)
                elif values[sh] != val:
                    raise InvalidCocycleError("character values do not define a homomorphism")
        return cls(group, "character", ctx, character=values, name=name)

    @classmethod
    def trivial(cls, group: FiniteMatrixGroup, ctx: Optional[FieldCtx] = None) -> "CoefficientModule":
        ctx = ctx or group.field
        return cls.from_character(group, [1] * len(group.generators), ctx, name="trivial")

    @property
    def dim(self) -> int:
        return self.piece.dim if self.kind == "graded" else 1

    def is_trivial(self) -> bool:
        if self.kind == "graded":
            return self.degree == 0
        return all(v == 1 for v in self.character.values())

    def act(self, g: GroupElement, vec: Vector) -> Vector:
        if self.kind == "graded":
            return apply_graded(g, self.piece, vec)
        return _scale(self.ctx, vec, self.character[g])

    def images(self, g: GroupElement) -> List[Vector]:
        """g applied to each basis vector."""
        if self.kind == "graded":
            return graded_action(g, self.ring, self.degree)
        return [{0: self.character[g]}]

    def format(self, vec: Vector) -> str:
        if self.kind == "graded":
            return str(self.piece.polynomial(vec))
        return self.ctx.format(vec.get(0, 0))

    def polynomial(self, vec: Vector) -> Polynomial:
        return self.piece.polynomial(vec)

    @property
    def label(self) -> str:
        if self.kind == "graded":
            return f"k[V]_{self.degree}"
        if self.name:
            return self.name
        return self.character_label()

    def character_label(self) -> str:
        G = self.group
        parts = [f"{n}: {self.ctx.format(self.character[s])}" for n, s in zip(G.names, G.generators)]
        return "char(" + ", ".join(parts) + ")"

    def same_as(self, other: "CoefficientModule") -> bool:
        if self.kind != other.kind or self.group != other.group:
            return False
        if self.kind == "graded":
            return self.ring == other.ring and self.degree == other.degree
        return self.character == other.character

    def restrict(self, H: FiniteMatrixGroup) -> "CoefficientModule":
        if self.kind == "graded":
            return CoefficientModule.graded(H, self.ring, self.degree)
        return CoefficientModule(H, "character", self.ctx, character={h: self.character[h] for h in H.elements},
                                 name=self.name)

    def frobenius(self, m: int) -> "CoefficientModule":
        if self.kind == "graded":
            return CoefficientModule.graded(self.group, self.ring, self.degree * self.ctx.p ** m)
        values = {g: self.ctx.frob(v, m) for g, v in self.character.items()}
        return CoefficientModule(self.group, "character", self.ctx, character=values)

    def frobenius_vector(self, vec: Vector, m: int, target: "CoefficientModule") -> Vector:
        if self.kind == "graded":
            return target.piece.vector(self.piece.polynomial(vec).frobenius_power_poly(m))
        return {0: self.ctx.frob(vec[0], m)} if vec.get(0) else {}

    def parse_value(self, text: str) -> Vector:
        if self.kind == "graded":
            f = self.ring.parse(text)
            if not f.is_zero() and (not f.is_homogeneous() or f.degree() != self.degree):
                raise NotHomogeneousError(f"{f} is not homogeneous of degree {self.degree}")
            return self.piece.vector(f)
        code = self.ctx.parse(text).value
        return {0: code} if code else {}


class Cocycle1:
    __slots__ = ('group', 'module', 'values')

    def __init__(self, module: CoefficientModule, values: Dict[GroupElement, Vector], verify: bool = True):
        self.group = module.group
        self.module = module
        self.values = values
        if verify:
            self.verify()

    def verify(self) -> None:
        G, M, ctx = self.group, self.module, self.module.ctx
        if set(self.values) != set(G.elements):
            raise InvalidCocycleError("cocycle values must cover every group element")
        if self.values[G.identity()]:
            raise InvalidCocycleError("cocycle must vanish at the identity")
        products = {}
        for s in G.elements:
            for t in G.elements:
                st = products.get((s, t))
                if st is None:
                    st = s * t
                expected = _add(ctx, M.act(s, self.values[t]), self.values[s])
                if self.values[st] != expected:
                    raise InvalidCocycleError(f"cocycle identity fails at ({G.label(s)}, {G.label(t)})")

    @classmethod
    def from_generators(cls, module: CoefficientModule, generator_values: Sequence[Vector]) -> "Cocycle1":
        G, ctx = module.group, module.ctx
        if len(generator_values) != len(G.generators):
            raise InvalidCocycleError("one value per generator is required")
        one = G.identity()
        values: Dict[GroupElement, Vector] = {one: {}}
        queue = deque([one])
        while queue:
            h = queue.popleft()
            for s, gs in zip(G.generators, generator_values):
                sh = s * h
                val = _add(ctx, module.act(s, values[h]), gs)
                if sh not in values:
                    values[sh] = val
                    queue.append(sh)
                elif values[sh] != val:
                    raise InvalidCocycleError(f"generator values violate the cocycle identity at {G.label(sh)}")
        return cls(module, values, verify=False)

    def value(self, g: GroupElement) -> Vector:
        return self.values[g]

    def generator_values(self) -> List[Vector]:
        return [self.values[s] for s in self.group.generators]

    def is_zero(self) -> bool:
        return not any(self.values.values())

    def scaled(self, c: int) -> "Cocycle1":
        ctx = self.module.ctx
        return Cocycle1(self.module, {g: _scale(ctx, v, c) for g, v in self.values.items()}, verify=False)

    def __add__(self, other: "Cocycle1") -> "Cocycle1":
        ctx = self.module.ctx
        return Cocycle1(self.module, {g: _add(ctx, v, other.values[g]) for g, v in self.values.items()}, verify=False)

    def table(self) -> Dict[str, str]:
        return {self.group.label(g): self.module.format(self.values[g]) for g in self.group.elements}

    def __str__(self):
        parts = [f"{name} -> {self.module.format(self.values[s])}"
                 for name, s in zip(self.group.names, self.group.generators)]
        return "{" + ", ".join(parts) + "} in " + self.module.label


# --- LINEAR STRUCTURE ---

def _stacked_coboundary_images(module: CoefficientModule, columns: Optional[Sequence[int]] = None) -> List[Vector]:
    """For each basis vector e_j: the concatenation of (s - 1) e_j over the generators."""
    ctx = module.ctx
    N = module.dim
    gens = module.group.generators
    per_gen = [module.images(s) for s in gens]
    cols = range(N) if columns is None else columns
    out = []
    for j in cols:
        vec: Vector = {}
        for k, images in enumerate(per_gen):
            diff = dict(images[j])
            diff[j] = ctx.sub(diff.get(j, 0), 1)
            for i, x in diff.items():
                if x:
                    vec[k * N + i] = x
        out.append(vec)
    return out


def _stack(values: Sequence[Vector], N: int) -> Vector:
    out: Vector = {}
    for k, vec in enumerate(values):
        for i, x in vec.items():
            out[k * N + i] = x
    return out


def _unstack(vec: Vector, r: int, N: int) -> List[Vector]:
    out: List[Vector] = [dict() for _ in range(r)]
    for idx, x in vec.items():
        out[idx // N][idx % N] = x
    return out


@dataclass
class CoboundaryResult:
    is_coboundary: bool
    witness: Optional[Vector]
    witness_text: Optional[str]


def _solve_coboundary(module: CoefficientModule, generator_values: Sequence[Vector],
                      columns: Optional[Sequence[int]] = None) -> Optional[Vector]:
    """Canonical b with (s - 1) b = g_s for all generators, or None.

    The solution is reduced modulo the invariants of the module, pivoting on
    the smallest coordinates, so it is independent of elimination order.
    """
    ctx = module.ctx
    cols = list(range(module.dim)) if columns is None else list(columns)
    images = _stacked_coboundary_images(module, cols)
    ech = SparseEchelon(ctx, track=True)
    invariants: List[Vector] = []
    for vec in images:
        rel = ech.insert(vec)
        if rel is not None:
            invariants.append(rel)
    x = ech.express(_stack(generator_values, module.dim))
    if x is None:
        return None
    fixed = SparseEchelon(ctx)
    for rel in invariants:
        fixed.insert(rel)
    reduced, _ = fixed.reduce(x)
    return {cols[i]: c for i, c in reduced.items()}


def is_coboundary(g: Cocycle1) -> CoboundaryResult:
    b = _solve_coboundary(g.module, g.generator_values())
    if b is None:
        return CoboundaryResult(False, None, None)
    return CoboundaryResult(True, b, g.module.format(b))


@dataclass
class CohomologySpace:
    module: str
    dim_z: int
    dim_b: int
    dim_h: int
    representatives: List[Cocycle1] = field(default_factory=list)
    z_basis: List[Cocycle1] = field(default_factory=list)


def cocycle_space(G: FiniteMatrixGroup, module: CoefficientModule) -> CohomologySpace:
    """Z^1, B^1 and a basis of a complement of B^1 in Z^1."""
    ctx = module.ctx
    N = module.dim
    r = len(G.generators)
    if N > MODULE_DIM_CAP:
        raise SizeCapError(f"module dimension {N} exceeds cap {MODULE_DIM_CAP}")
    unknowns = r * N

    # 1. Values at every element as linear maps of the generator values
    one = G.identity()
    maps: Dict[GroupElement, List[Vector]] = {one: [{} for _ in range(unknowns)]}
    constraints: List[List[Vector]] = []
    queue = deque([one])
    while queue:
        h = queue.popleft()
        for k, s in enumerate(G.generators):
            computed = []
            for j, vec in enumerate(maps[h]):
                image = module.act(s, vec) if vec else {}
                if j // N == k:
                    image = _add(ctx, image, {j % N: 1})
                computed.append(image)
            sh = s * h
            if sh not in maps:
                maps[sh] = computed
                queue.append(sh)
            else:
                diff = [_sub(ctx, a, b) for a, b in zip(computed, maps[sh])]
                if any(diff):
                    constraints.append(diff)

    # 2. Z^1 = common kernel of the edge constraints
    columns = []
    for j in range(unknowns):
        col: Vector = {}
        for c, diff in enumerate(constraints):
            for i, x in diff[j].items():
                col[c * N + i] = x
        columns.append(col)
    z_vectors = kernel(ctx, columns)

    # 3. B^1 and the complement
    b_images = _stacked_coboundary_images(module)
    ech = SparseEchelon(ctx)
    for vec in b_images:
        ech.insert(vec)
    dim_b = ech.rank
    reps = []
    z_cocycles = []
    for z in z_vectors:
        cocycle = Cocycle1.from_generators(module, _unstack(z, r, N))
        z_cocycles.append(cocycle)
        if ech.insert(z) is None:
            reps.append(cocycle)
    log.debug("🧮 H^1(G, %s): dim Z=%d dim B=%d", module.label, len(z_vectors), dim_b)
    return CohomologySpace(module.label, len(z_vectors), dim_b, len(z_vectors) - dim_b, reps, z_cocycles)


# --- FROBENIUS / PRODUCTS / RESTRICTION ---

def frobenius_power_cocycle(g: Cocycle1, m: int) -> Cocycle1:
    """sigma -> (g_sigma)^(p^m), re-verified in the target module."""
    if m < 0:
        raise ValueError("m must be nonnegative")
    if m == 0:
        return g
    target = g.module.frobenius(m)
    values = {h: g.module.frobenius_vector(v, m, target) for h, v in g.values.items()}
    return Cocycle1(target, values, verify=True)


@dataclass
class AnnihilationResult:
    annihilates: bool
    witness: Optional[str]
    product: Cocycle1


def annihilates(a: Polynomial, g: Cocycle1) -> AnnihilationResult:
    """Whether a.g is a coboundary; the canonical b with (sigma - 1) b = a g_sigma is returned."""
    module = g.module
    if module.kind != "graded":
        raise InvalidCocycleError("annihilators need polynomial coefficients")
    if not a.is_homogeneous():
        raise NotHomogeneousError(f"{a} is not homogeneous")
    if not is_invariant(g.group, a):
        raise NotInvariantError(a)
    target = CoefficientModule.graded(g.group, module.ring, module.degree + max(a.degree(), 0))
    values = {h: target.piece.vector(a * module.polynomial(v)) for h, v in g.values.items()}
    product = Cocycle1(target, values, verify=False)
    result = is_coboundary(product)
    return AnnihilationResult(result.is_coboundary, result.witness_text, product)


def restrict(g: Cocycle1, H: FiniteMatrixGroup) -> Cocycle1:
    if not H.is_subgroup_of(g.group):
        raise NotSubgroupError("restriction target is not a subgroup")
    module = g.module.restrict(H)
    return Cocycle1(module, {h: g.values[h] for h in H.elements}, verify=True)


# --- NONTRIVIALITY UNDER FROBENIUS ---

@dataclass
class NontrivialityVerdict:
    kind: str
    reason: str
    m: Optional[int] = None
    witness: Optional[str] = None

    @property
    def certified(self) -> bool:
        return self.kind == CERTIFIED

    def __str__(self):
        if self.kind == CERTIFIED:
            return f"CERTIFIED({self.reason})"
        return f"{self.kind}({self.m})"


def monomial_orbits(module: CoefficientModule) -> List[List[int]]:
    """Orbits of basis monomials when every generator maps monomials to monomials."""
    N = module.dim
    images = [module.images(s) for s in module.group.generators]
    seen = [-1] * N
    orbits = []
    for start in range(N):
        if seen[start] >= 0:
            continue
        orbit = [start]
        seen[start] = len(orbits)
        queue = deque([start])
        while queue:
            j = queue.popleft()
            for per_gen in images:
                for i in per_gen[j]:
                    if seen[i] < 0:
                        seen[i] = len(orbits)
                        orbit.append(i)
                        queue.append(i)
        orbits.append(sorted(orbit))
    return orbits


def _permutation_witness(g: Cocycle1) -> Optional[str]:
    """A monomial orbit on which g has a nontrivial component."""
    module = g.module
    for orbit in monomial_orbits(module):
        members = set(orbit)
        projected = [{i: x for i, x in v.items() if i in members} for v in g.generator_values()]
        if _solve_coboundary(module, projected, orbit) is None:
            return str(module.piece.polynomial({orbit[0]: 1}))
    return None


def frobenius_chain(g: Cocycle1, m_max: int = FROBENIUS_MMAX) -> List[Tuple[int, str, bool]]:
    """(m, module label, g^(p^m) is a coboundary) for m = 0..m_max."""
    out = []
    for m in range(m_max + 1):
        gm = frobenius_power_cocycle(g, m)
        out.append((m, gm.module.character_label() if gm.module.kind == "character" else gm.module.label,
                    is_coboundary(gm).is_coboundary))
    return out


def _frobenius_period(g: Cocycle1, m_max: int) -> Optional[int]:
    if g.module.kind != "character":
        return None
    for m in range(1, m_max + 1):
        gm = frobenius_power_cocycle(g, m)
        if is_coboundary(gm).is_coboundary:
            return None
        if gm.module.same_as(g.module) and gm.values == g.values:
            return m
    return None


def nontrivial_all_frobenius(g: Cocycle1, m_max: int = FROBENIUS_MMAX) -> NontrivialityVerdict:
    if is_coboundary(g).is_coboundary:
        raise TrivialClassError("the class is already a coboundary")
    module = g.module
    if module.is_trivial():
        return NontrivialityVerdict(CERTIFIED, "trivial-coefficients")
    if module.kind == "graded" and is_permutation_group(g.group):
        witness = _permutation_witness(g)
        if witness is not None:
            return NontrivialityVerdict(CERTIFIED, "permutation", witness=witness)
    period = _frobenius_period(g, m_max)
    if period is not None:
        return NontrivialityVerdict(CERTIFIED, "frobenius-periodic", m=period)
    for m in range(1, m_max + 1):
        if is_coboundary(frobenius_power_cocycle(g, m)).is_coboundary:
            return NontrivialityVerdict(REFUTED, "coboundary", m=m)
    log.warning("⚠️ only checked up to m=%d; not a proof for all m", m_max)
    return NontrivialityVerdict(CHECKED, "not a proof", m=m_max)


# --- SEARCH FOR CLASSES VANISHING ON PROPER SUBGROUPS ---

@dataclass
class RestrictedSearchResult:
    degree: Optional[int]
    classes: List[Cocycle1]
    dims: Dict[int, int]


def search_restricted_classes(G: FiniteMatrixGroup, ring: PolyRing, max_degree: int = SEARCH_DEGREE) -> RestrictedSearchResult:
    """Lowest degree d <= max_degree with classes in H^1(G, k[V]_d) whose restriction
    to every proper subgroup is zero."""
    subgroups = maximal_subgroups(G)
    dims: Dict[int, int] = {}
    for d in range(0, max_degree + 1):
        module = CoefficientModule.graded(G, ring, d)
        ctx = module.ctx
        space = cocycle_space(G, module)
        if space.dim_h == 0:
            dims[d] = 0
            continue

        # conditions: restriction to H lies in B^1(H)
        columns: List[Vector] = [dict() for _ in space.z_basis]
        offset = 0
        for H in subgroups:
            sub_module = module.restrict(H)
            images = _stacked_coboundary_images(sub_module)
            ech = SparseEchelon(ctx)
            for vec in images:
                ech.insert(vec)
            width = len(H.generators) * module.dim
            for i, z in enumerate(space.z_basis):
                rem, _ = ech.reduce(_stack([z.values[h] for h in H.generators], module.dim))
                for col, x in rem.items():
                    columns[i][offset + col] = x
            offset += width
        combos = kernel(ctx, columns)
        b_ech = SparseEchelon(ctx)
        for vec in _stacked_coboundary_images(module):
            b_ech.insert(vec)
        found = []
        r = len(G.generators)
        for combo in combos:
            total: Vector = {}
            for i, c in combo.items():
                total = _add(ctx, total, _scale(ctx, _stack(space.z_basis[i].generator_values(), module.dim), c))
            if b_ech.insert(total) is None:
                found.append(Cocycle1.from_generators(module, _unstack(total, r, module.dim)))
        dims[d] = len(found)
        if found:
            log.debug("🧮 found %d restricted classes in degree %d", len(found), d)
            return RestrictedSearchResult(d, found, dims)
    return RestrictedSearchResult(None, [], dims)


# --- TRIVIAL COEFFICIENTS ---

def homomorphisms_to_prime_field(G: FiniteMatrixGroup) -> List[List[int]]:
    """Every nonzero homomorphism G -> (F_p, +), as values in element order."""
    prime = FieldCtx(G.field.p)
    space = cocycle_space(G, CoefficientModule.trivial(G, prime))
    basis = space.z_basis
    if prime.p ** len(basis) > 4096:
        raise SizeCapError("too many homomorphisms to enumerate")
    out = []
    for coeffs in itertools.product(range(prime.p), repeat=len(basis)):
        if not any(coeffs):
            continue
        values = []
        for g in G.elements:
            v = 0
            for c, z in zip(coeffs, basis):
                v = prime.add(v, prime.mul(c, z.values[g].get(0, 0)))
            values.append(v)
        out.append(values)
    return out


def bar_hn_trivial(G: FiniteMatrixGroup, n: int) -> int:
    """dim H^n(G, F_p) from the normalized bar complex with trivial coefficients."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    p = G.field.p
    ctx = FieldCtx(p)
    nonid = G.elements[1:]
    m = len(nonid)
    if m ** n > BAR_CAP:
        raise SizeCapError(f"(|G|-1)^{n} = {m ** n} exceeds cap {BAR_CAP}")
    index = {g: i for i, g in enumerate(nonid)}
    product = [[index.get(a * b, -1) for b in nonid] for a in nonid]
    factorizations: List[List[Tuple[int, int]]] = [[] for _ in range(m)]
    for x in range(m):
        for y in range(m):
            if product[x][y] >= 0:
                factorizations[product[x][y]].append((x, y))

    def encode(t: Sequence[int]) -> int:
        code = 0
        for x in t:
            code = code * m + x
        return code

    def differential_rank(k: int) -> int:
        """Rank of d_k : C^k -> C^(k+1)."""
        if k < 0 or (k > 0 and m == 0):
            return 0
        images = []
        sign_last = 1 if (k + 1) % 2 == 0 else p - 1
        for a in itertools.product(range(m), repeat=k):
            vec: Vector = {}

            def bump(t, c):
                key = encode(t)
                v = ctx.add(vec.get(key, 0), c)
                if v:
                    vec[key] = v
                else:
                    vec.pop(key, None)

            for g in range(m):
                bump((g,) + a, 1)
            for i in range(1, k + 1):
                sign = 1 if i % 2 == 0 else p - 1
                for x, y in factorizations[a[i - 1]]:
                    bump(a[:i - 1] + (x, y) + a[i:], sign)
            for g in range(m):
                bump(a + (g,), sign_last)
            images.append(vec)
        return rank(ctx, images)

    c_n = m ** n
    return c_n - differential_rank(n) - differential_rank(n - 1)
