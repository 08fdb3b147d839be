"""
Invariant spaces of finite matrix groups on graded pieces of k[V].

Graded pieces use a fixed column numbering: column 0 is the smallest monomial
of the degree, so echelon pivots land on trailing monomials.
"""
import logging
import threading
from dataclasses import dataclass
from typing import Dict, List, Sequence

from cachetools import LRUCache, cached
from cachetools.keys import hashkey

from src.config import GRADED_PIECE_CAP
from src.errors import NotInvariantError, SizeCapError
from src.mechanics.group import FiniteMatrixGroup, GroupElement, act
from src.mechanics.linalg import Vector, kernel, row_space_basis
from src.mechanics.mpoly import Exponent, Polynomial, PolyRing

log = logging.getLogger(__name__)


class GradedPiece:
    """k[V]_d with its monomial coordinates."""

    __slots__ = ('ring', 'degree', 'basis', 'index')

    def __init__(self, ring: PolyRing, degree: int):
        basis = ring.monomial_basis(degree)
        if len(basis) > GRADED_PIECE_CAP:
            raise SizeCapError(f"dim k[V]_{degree} = {len(basis)} exceeds cap {GRADED_PIECE_CAP}")
        basis.reverse()
        self.ring = ring
        self.degree = degree
        self.basis: List[Exponent] = basis
        self.index: Dict[Exponent, int] = {e: i for i, e in enumerate(basis)}

    @property
    def dim(self) -> int:
        return len(self.basis)

    def vector(self, f: Polynomial) -> Vector:
        out = {}
        for e, c in f.coeffs.items():
            if e not in self.index:
                raise SizeCapError(f"{f} has terms outside degree {self.degree}")
            out[self.index[e]] = c
        return out

    def polynomial(self, vec: Vector) -> Polynomial:
        return Polynomial(self.ring, {self.basis[i]: c for i, c in vec.items() if c})


@cached(LRUCache(maxsize=64), key=lambda ring, d: hashkey(ring, d), lock=threading.Lock())
def graded_piece(ring: PolyRing, d: int) -> GradedPiece:
    return GradedPiece(ring, d)


@cached(LRUCache(maxsize=512), key=lambda g, ring, d: hashkey(g, ring, d), lock=threading.Lock())
def graded_action(g: GroupElement, ring: PolyRing, d: int) -> List[Vector]:
    """Images of the monomial basis of k[V]_d under g, as coordinate vectors."""
    piece = graded_piece(ring, d)
    return [piece.vector(act(g, Polynomial(ring, {e: 1}))) for e in piece.basis]


def apply_graded(g: GroupElement, piece: GradedPiece, vec: Vector) -> Vector:
    images = graded_action(g, piece.ring, piece.degree)
    ctx = piece.ring.field
    out: Vector = {}
    for j, c in vec.items():
        for i, x in images[j].items():
            v = ctx.add(out.get(i, 0), ctx.mul(c, x))
            if v:
                out[i] = v
            else:
                out.pop(i, None)
    return out


@dataclass
class InvariantBasis:
    degree: int
    basis: List[Polynomial]

    @property
    def dim(self) -> int:
        return len(self.basis)


def is_invariant(G: FiniteMatrixGroup, f: Polynomial) -> bool:
    return all(act(g, f) == f for g in G.generators)


def require_invariant(G: FiniteMatrixGroup, polys: Sequence[Polynomial]) -> None:
    for f in polys:
        if not is_invariant(G, f):
            raise NotInvariantError(f)


def invariant_basis(G: FiniteMatrixGroup, ring: PolyRing, d: int) -> InvariantBasis:
    """Echelon basis of k[V]^G_d, the common kernel of (g - 1) over the generators."""
    piece = graded_piece(ring, d)
    ctx = ring.field
    n = piece.dim
    if not G.generators:
        return InvariantBasis(d, [Polynomial(ring, {e: 1}) for e in reversed(piece.basis)])
    columns = []
    actions = [graded_action(g, ring, d) for g in G.generators]
    for j in range(n):
        col: Vector = {}
        for k, images in enumerate(actions):
            diff = dict(images[j])
            diff[j] = ctx.sub(diff.get(j, 0), 1)
            for i, x in diff.items():
                if x:
                    col[k * n + i] = x
        columns.append(col)
    rels = row_space_basis(ctx, kernel(ctx, columns))
    basis = [piece.polynomial(v) for v in rels]
    log.debug("🧩 dim k[V]^G_%d = %d (of %d)", d, len(basis), n)
    return InvariantBasis(d, basis)


def transfer(G: FiniteMatrixGroup, f: Polynomial) -> Polynomial:
    """Sum of g.f over the whole group."""
    total = f.ring.zero()
    for g in G.elements:
        total = total + act(g, f)
    return total


def noether_separating_set(G: FiniteMatrixGroup, ring: PolyRing) -> List[Polynomial]:
    """All invariants of degree 1..|G| (a geometric separating set for finite G)."""
    out: List[Polynomial] = []
    for d in range(1, G.order + 1):
        out.extend(invariant_basis(G, ring, d).basis)
    return out

