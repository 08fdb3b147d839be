"""
Finite matrix groups over F_q, fully enumerated.

Matrices are tuples of tuples of field codes; a matrix M acts on V = F_q^d by
v -> Mv and on polynomials by (g.f)(x) = f(g^-1 x). Elements are listed with
the identity first, then by their flattened codes, and carry the shortest word
in the generators that BFS found for them.
"""
import itertools
import logging
from collections import deque
from dataclasses import dataclass, field as dc_field
from typing import Dict, List, Optional, Sequence, Tuple

from src.config import GROUP_CAP, POINT_CAP, REGULAR_REP_CAP
from src.errors import (CapExceeded, ConsistencyError, DimensionMismatchError, NotNormalError,
                        NotSubgroupError, QuotientNotElementaryAbelianError, SigmaInNError,
                        SingularGeneratorError, SizeCapError)
from src.mechanics.gf import FieldCtx, embed_code
from src.mechanics.linalg import (Matrix, identity, mat_inv, mat_mul, mat_sub_identity, mat_vec,
                                  matrix_rank, null_space)
from src.mechanics.mpoly import Polynomial

log = logging.getLogger(__name__)


class GroupElement:
    __slots__ = ('ctx', 'matrix', '_inverse', '_hash')

    def __init__(self, ctx: FieldCtx, matrix: Sequence[Sequence[int]], inverse: Optional[Matrix] = None):
        self.ctx = ctx
        self.matrix = tuple(tuple(row) for row in matrix)
        n = len(self.matrix)
        if any(len(row) != n for row in self.matrix):
            raise DimensionMismatchError("group elements must be square matrices")
        self._inverse = inverse
        self._hash = hash(self.matrix)

    @property
    def dim(self) -> int:
        return len(self.matrix)

    def inverse_matrix(self) -> Matrix:
        if self._inverse is None:
            self._inverse = mat_inv(self.ctx, self.matrix)
        return self._inverse

    def inverse(self) -> "GroupElement":
        return GroupElement(self.ctx, self.inverse_matrix(), self.matrix)

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        return GroupElement(self.ctx, mat_mul(self.ctx, self.matrix, other.matrix))

    def __pow__(self, k: int) -> "GroupElement":
        result = GroupElement(self.ctx, identity(self.dim))
        base = self if k >= 0 else self.inverse()
        for _ in range(abs(k)):
            result = result * base
        return result

    def __eq__(self, other):
        return isinstance(other, GroupElement) and self.matrix == other.matrix

    def __hash__(self):
        return self._hash

    def is_identity(self) -> bool:
        return self.matrix == identity(self.dim)

    def flat(self) -> Tuple[int, ...]:
        return tuple(x for row in self.matrix for x in row)

    def apply(self, point: Sequence[int]) -> Tuple[int, ...]:
        return mat_vec(self.ctx, self.matrix, point)

    def format(self) -> str:
        return "[" + ", ".join("[" + ", ".join(self.ctx.format(x) for x in row) + "]" for row in self.matrix) + "]"

    def __repr__(self):
        return f"GroupElement({self.format()})"


class FiniteMatrixGroup:
    __slots__ = ('field', 'dim', 'generators', 'names', 'elements', 'words', '_index', '_hash')

    def __init__(self, field_ctx: FieldCtx, generators: Sequence[GroupElement], names: Optional[Sequence[str]] = None,
                 cap: int = GROUP_CAP, dim: Optional[int] = None):
        if not generators and dim is None:
            raise DimensionMismatchError("a group without generators needs an explicit dimension")
        self.field = field_ctx
        self.dim = dim if dim is not None else generators[0].dim
        self.generators = list(generators)
        self.names = list(names) if names else [f"g{i + 1}" for i in range(len(generators))]
        for g in self.generators:
            if g.dim != self.dim:
                raise DimensionMismatchError("generators have different sizes")
            try:
                g.inverse_matrix()
            except SingularGeneratorError:
                raise SingularGeneratorError(f"generator {g.format()} is singular") from None

        # 1. BFS closure under left multiplication by generators
        one = GroupElement(field_ctx, identity(self.dim))
        words = {one: "1"}
        queue = deque([one])
        while queue:
            h = queue.popleft()
            for name, s in zip(self.names, self.generators):
                sh = s * h
                if sh not in words:
                    words[sh] = name if h == one else f"{name}*{words[h]}"
                    if len(words) > cap:
                        raise CapExceeded(f"group order exceeds cap {cap}")
                    queue.append(sh)

        # 2. Canonical order: identity, then flattened codes
        rest = sorted((g for g in words if g != one), key=GroupElement.flat)
        self.elements = [one] + rest
        self.words = words
        self._index = {g: i for i, g in enumerate(self.elements)}
        self._hash = hash((self.field, self.dim, frozenset(self._index)))
        log.debug("🧩 enumerated group of order %d in dimension %d", len(self.elements), self.dim)

    # --- basic structure ---
    def __len__(self):
        return len(self.elements)

    @property
    def order(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, g: GroupElement) -> bool:
        return g in self._index

    def __eq__(self, other):
        return (isinstance(other, FiniteMatrixGroup) and self.field == other.field and self.dim == other.dim
                and set(self._index) == set(other._index))

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"FiniteMatrixGroup(order={self.order}, dim={self.dim}, {self.field!r})"

    def identity(self) -> GroupElement:
        return self.elements[0]

    def index_of(self, g: GroupElement) -> int:
        return self._index[g]

    def label(self, g: GroupElement) -> str:
        return self.words.get(g, g.format())

    def generator(self, name: str) -> GroupElement:
        return self.generators[self.names.index(name)]

    def subgroup(self, generators: Sequence[GroupElement], names: Optional[Sequence[str]] = None) -> "FiniteMatrixGroup":
        for g in generators:
            if g not in self:
                raise NotSubgroupError(f"{g.format()} is not an element of the group")
        sub = FiniteMatrixGroup(self.field, list(generators), names, dim=self.dim)
        return sub

    def is_subgroup_of(self, other: "FiniteMatrixGroup") -> bool:
        return all(g in other for g in self.elements)


def enumerate_group(field_ctx: FieldCtx, matrices: Sequence[Sequence[Sequence[int]]], names: Optional[Sequence[str]] = None,
                    cap: int = GROUP_CAP, dim: Optional[int] = None) -> FiniteMatrixGroup:
    return FiniteMatrixGroup(field_ctx, [GroupElement(field_ctx, m) for m in matrices], names, cap, dim)


def act(g: GroupElement, f: Polynomial) -> Polynomial:
    """(g.f)(x) = f(g^-1 x); a left action."""
    if f.ring.nvars != g.dim:
        raise DimensionMismatchError(f"{g.dim}x{g.dim} matrix acting on {f.ring.nvars} variables")
    return f.apply_code_matrix(g.inverse_matrix())


def element_order(g: GroupElement) -> int:
    k, h = 1, g
    while not h.is_identity():
        h = h * g
        k += 1
    return k


def is_p_group(G: FiniteMatrixGroup) -> bool:
    n, p = G.order, G.field.p
    while n % p == 0:
        n //= p
    return n == 1


# --- ORBITS ON POINTS ---

@dataclass
class OrbitPartition:
    field: FieldCtx
    dim: int
    orbits: List[List[Tuple[int, ...]]]
    orbit_of: Dict[Tuple[int, ...], int]
    burnside_count: int

    @property
    def num_points(self) -> int:
        return sum(len(o) for o in self.orbits)

    @property
    def sizes(self) -> List[int]:
        return [len(o) for o in self.orbits]


def _points(ctx: FieldCtx, d: int):
    return itertools.product(range(ctx.q), repeat=d)


def orbits_of_points(G: FiniteMatrixGroup, e: int = 1) -> OrbitPartition:
    """All G-orbits on V(F_{q^e}); the count is cross-checked against Burnside's lemma."""
    target = G.field.extension(e)
    total = target.q ** G.dim
    if total > POINT_CAP:
        raise SizeCapError(f"{total} points exceed cap {POINT_CAP}")
    mats = [tuple(tuple(embed_code(G.field, target, x) for x in row) for row in g.matrix) for g in G.generators]
    orbit_of: Dict[Tuple[int, ...], int] = {}
    orbits: List[List[Tuple[int, ...]]] = []
    for v in _points(target, G.dim):
        if v in orbit_of:
            continue
        idx = len(orbits)
        orbit = [v]
        orbit_of[v] = idx
        queue = deque([v])
        while queue:
            u = queue.popleft()
            for m in mats:
                w = mat_vec(target, m, u)
                if w not in orbit_of:
                    orbit_of[w] = idx
                    orbit.append(w)
                    queue.append(w)
        orbit.sort()
        orbits.append(orbit)

    # Burnside: #orbits = average number of fixed points; fixed points of g form a subspace
    fixed_total = 0
    for g in G.elements:
        m = tuple(tuple(embed_code(G.field, target, x) for x in row) for row in g.matrix)
        kernel_dim = G.dim - matrix_rank(target, mat_sub_identity(target, m))
        fixed_total += target.q ** kernel_dim
    burnside = fixed_total // G.order
    if fixed_total % G.order or burnside != len(orbits):
        raise ConsistencyError(f"orbit count {len(orbits)} disagrees with Burnside count {fixed_total}/{G.order}")
    log.debug("🧩 %d points in %d orbits", total, len(orbits))
    return OrbitPartition(target, G.dim, orbits, orbit_of, burnside)


# --- FIXED SPACES ---

@dataclass
class FixedSpace:
    dim: int
    basis: List[Tuple[int, ...]]
    codim: int

    def contains(self, ctx: FieldCtx, other: "FixedSpace") -> bool:
        """True when other is a subspace of self."""
        return all(_in_span(ctx, self.basis, v) for v in other.basis)


def _in_span(ctx: FieldCtx, basis: List[Tuple[int, ...]], v: Tuple[int, ...]) -> bool:
    from src.mechanics.linalg import SparseEchelon
    ech = SparseEchelon(ctx)
    for b in basis:
        ech.insert({i: x for i, x in enumerate(b) if x})
    return ech.contains({i: x for i, x in enumerate(v) if x})


def fixed_space(x, ctx: Optional[FieldCtx] = None) -> FixedSpace:
    """V^g for an element, or the common fixed space of a group or element list."""
    if isinstance(x, GroupElement):
        elements = [x]
        ctx = x.ctx
    elif isinstance(x, FiniteMatrixGroup):
        elements = x.generators
        ctx = x.field
        if not elements:
            return FixedSpace(x.dim, [tuple(1 if i == j else 0 for j in range(x.dim)) for i in range(x.dim)], 0)
    else:
        elements = list(x)
        ctx = ctx or elements[0].ctx
    d = elements[0].dim
    stacked = tuple(row for g in elements for row in mat_sub_identity(ctx, g.matrix))
    basis = null_space(ctx, stacked)
    return FixedSpace(d, basis, d - len(basis))


def fixed_codim(g: GroupElement) -> int:
    return matrix_rank(g.ctx, mat_sub_identity(g.ctx, g.matrix))


# --- BIREFLECTIONS ---

@dataclass
class BireflectionReport:
    codims: Dict[str, int]
    reflections: List[str]
    bireflections: List[str]
    subgroup_order: int
    generated_by_bireflections: bool
    generated_by_reflections: bool
    is_p_group: bool
    no_cm_separating_algebra: bool
    notes: List[str] = dc_field(default_factory=list)


def bireflection_subgroup(G: FiniteMatrixGroup, max_codim: int = 2) -> FiniteMatrixGroup:
    gens = [g for g in G.elements[1:] if fixed_codim(g) <= max_codim]
    return FiniteMatrixGroup(G.field, gens, [G.label(g) for g in gens], dim=G.dim)


def bireflection_analysis(G: FiniteMatrixGroup) -> BireflectionReport:
    codims = {G.label(g): fixed_codim(g) for g in G.elements}
    reflections = [G.label(g) for g in G.elements[1:] if codims[G.label(g)] <= 1]
    bireflections = [G.label(g) for g in G.elements[1:] if codims[G.label(g)] <= 2]
    birefl_group = bireflection_subgroup(G, 2)
    refl_group = bireflection_subgroup(G, 1)

    # conjugates of bireflections are bireflections
    for g in G.elements:
        for b in birefl_group.generators:
            if fixed_codim(g * b * g.inverse()) != fixed_codim(b):
                raise ConsistencyError("conjugation changed a fixed-space codimension")

    p_group = is_p_group(G)
    by_birefl = birefl_group.order == G.order
    report = BireflectionReport(
        codims=codims,
        reflections=reflections,
        bireflections=bireflections,
        subgroup_order=birefl_group.order,
        generated_by_bireflections=by_birefl,
        generated_by_reflections=refl_group.order == G.order,
        is_p_group=p_group,
        no_cm_separating_algebra=p_group and not by_birefl,
    )
    if report.no_cm_separating_algebra:
        report.notes.append("p-group not generated by bireflections: no graded separating algebra is Cohen-Macaulay")
    return report


def check_normal(G: FiniteMatrixGroup, N: FiniteMatrixGroup) -> None:
    if not N.is_subgroup_of(G):
        raise NotSubgroupError("N is not a subgroup of G")
    for g in G.elements:
        gi = g.inverse()
        for n in N.generators:
            if g * n * gi not in N:
                raise NotNormalError(f"conjugate of {N.label(n)} by {G.label(g)} leaves N")


def check_elementary_abelian_quotient(G: FiniteMatrixGroup, N: FiniteMatrixGroup) -> None:
    p = G.field.p
    for g in G.elements:
        if g ** p not in N:
            raise QuotientNotElementaryAbelianError(f"{G.label(g)}^{p} is not in N")
    for g, h in itertools.combinations(G.elements, 2):
        if g * h * g.inverse() * h.inverse() not in N:
            raise QuotientNotElementaryAbelianError(f"commutator of {G.label(g)} and {G.label(h)} is not in N")


def check_bireflection_criterion(G: FiniteMatrixGroup, N: FiniteMatrixGroup, sigma: GroupElement) -> bool:
    """True iff V^sigma lies in the fixed space of no bireflection outside N.

    With N normal and G/N elementary abelian, a true answer means no graded
    geometric separating algebra of k[V]^G is Cohen-Macaulay.
    """
    check_normal(G, N)
    check_elementary_abelian_quotient(G, N)
    if sigma in N:
        raise SigmaInNError("sigma lies in N")
    if sigma not in G:
        raise NotSubgroupError("sigma is not an element of G")
    ctx = G.field
    v_sigma = fixed_space(sigma)
    for b in G.elements:
        if b in N or fixed_codim(b) > 2:
            continue
        if fixed_space(b).contains(ctx, v_sigma):
            log.debug("criterion fails at bireflection %s", G.label(b))
            return False
    return True


def index_p_bireflection_criterion(G: FiniteMatrixGroup, N: FiniteMatrixGroup) -> bool:
    """N normal of index p containing every bireflection: then no graded geometric
    separating algebra is Cohen-Macaulay."""
    check_normal(G, N)
    if G.order != N.order * G.field.p:
        raise QuotientNotElementaryAbelianError(f"index {G.order // N.order} is not {G.field.p}")
    return all(b in N for b in G.elements if fixed_codim(b) <= 2)


def min_order_p_codim(G: FiniteMatrixGroup) -> Optional[int]:
    p = G.field.p
    codims = [fixed_codim(g) for g in G.elements[1:] if element_order(g) == p]
    return min(codims) if codims else None


def normal_subgroups_of_index_p(G: FiniteMatrixGroup) -> List[FiniteMatrixGroup]:
    """Kernels of the nonzero homomorphisms G -> (F_p, +), found by enumeration."""
    from src.mechanics.cohomology import homomorphisms_to_prime_field
    out = []
    seen = set()
    for hom in homomorphisms_to_prime_field(G):
        kernel = [g for g, v in zip(G.elements, hom) if v == 0]
        key = frozenset(kernel)
        if key in seen:
            continue
        seen.add(key)
        out.append(FiniteMatrixGroup(G.field, kernel[1:], [G.label(g) for g in kernel[1:]], dim=G.dim))
    return out


def subgroup_lattice(G: FiniteMatrixGroup) -> List[FiniteMatrixGroup]:
    """Every subgroup of G, built as joins of cyclic subgroups, smallest first."""
    cyclic: Dict[frozenset, FiniteMatrixGroup] = {}
    for g in G.elements[1:]:
        H = FiniteMatrixGroup(G.field, [g], [G.label(g)], dim=G.dim)
        cyclic.setdefault(frozenset(H.elements), H)
    found: Dict[frozenset, FiniteMatrixGroup] = {frozenset([G.identity()]): FiniteMatrixGroup(G.field, [], dim=G.dim)}
    found.update(cyclic)
    frontier = list(cyclic.values())
    while frontier:
        grown = []
        for H in frontier:
            for C in cyclic.values():
                if C.generators[0] in H:
                    continue
                J = FiniteMatrixGroup(G.field, H.generators + C.generators, H.names + C.names, dim=G.dim)
                key = frozenset(J.elements)
                if key not in found:
                    found[key] = J
                    grown.append(J)
        frontier = grown
    return sorted(found.values(), key=lambda H: H.order)


def maximal_subgroups(G: FiniteMatrixGroup) -> List[FiniteMatrixGroup]:
    proper = [H for H in subgroup_lattice(G) if H.order < G.order]
    sets = [frozenset(H.elements) for H in proper]
    return [H for H, s in zip(proper, sets) if not any(s < t for t in sets)]


# --- CONSTRUCTIONS ---

def direct_sum(G: FiniteMatrixGroup, k: int) -> FiniteMatrixGroup:
    """G acting diagonally on V^k."""
    if k < 1:
        raise DimensionMismatchError("number of copies must be at least 1")
    d = G.dim

    def block(m: Matrix) -> Matrix:
        out = []
        for c in range(k):
            for row in m:
                out.append((0,) * (c * d) + tuple(row) + (0,) * ((k - c - 1) * d))
        return tuple(out)

    gens = [GroupElement(G.field, block(g.matrix)) for g in G.generators]
    result = FiniteMatrixGroup(G.field, gens, G.names, dim=d * k)
    if result.order != G.order:
        raise ConsistencyError("direct sum changed the group order")
    return result


def parse_permutation(text: str, degree: Optional[int] = None) -> Tuple[int, ...]:
    """Cycle notation "(1 2 3)(4 5)" -> 0-based image tuple."""
    cycles = []
    for chunk in text.replace(")", ")|").split("|"):
        chunk = chunk.strip()
        if not chunk:
            continue
        if not (chunk.startswith("(") and chunk.endswith(")")):
            raise ValueError(f"bad cycle '{chunk}'")
        body = chunk[1:-1].replace(",", " ").split()
        cycles.append([int(x) - 1 for x in body])
    n = max([degree or 0] + [x + 1 for c in cycles for x in c])
    images = list(range(n))
    for c in cycles:
        for i, x in enumerate(c):
            images[x] = c[(i + 1) % len(c)]
    return tuple(images)


def permutation_matrix(perm: Sequence[int]) -> Matrix:
    """P with P e_i = e_perm(i), so sigma.x_i = x_perm(i)."""
    n = len(perm)
    rows = [[0] * n for _ in range(n)]
    for i, j in enumerate(perm):
        rows[j][i] = 1
    return tuple(tuple(r) for r in rows)


def regular_representation(field_ctx: FieldCtx, perms: Sequence[Sequence[int]], names: Optional[Sequence[str]] = None,
                           cap: int = REGULAR_REP_CAP) -> FiniteMatrixGroup:
    """Left-regular representation of the permutation group generated by perms."""
    n = max(len(p) for p in perms) if perms else 1
    perms = [tuple(p) + tuple(range(len(p), n)) for p in perms]
    one = tuple(range(n))
    elements = {one}
    queue = deque([one])
    while queue:
        h = queue.popleft()
        for s in perms:
            sh = tuple(s[h[i]] for i in range(n))
            if sh not in elements:
                elements.add(sh)
                if len(elements) > cap:
                    raise SizeCapError(f"group order exceeds regular representation cap {cap}")
                queue.append(sh)
    ordered = [one] + sorted(elements - {one})
    index = {h: i for i, h in enumerate(ordered)}
    mats = []
    for s in perms:
        images = [index[tuple(s[h[i]] for i in range(n))] for h in ordered]
        mats.append(permutation_matrix(images))
    return enumerate_group(field_ctx, mats, names, dim=len(ordered))


def is_permutation_group(G: FiniteMatrixGroup) -> bool:
    for g in G.generators:
        for row in g.matrix:
            if sorted(row) != [0] * (len(row) - 1) + [1]:
                return False
        for col in zip(*g.matrix):
            if sorted(col) != [0] * (len(col) - 1) + [1]:
                return False
    return True


def space_basis_text(ctx: FieldCtx, space: FixedSpace) -> List[str]:
    return ["(" + ", ".join(ctx.format(x) for x in v) + ")" for v in space.basis]
