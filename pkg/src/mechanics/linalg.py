"""
Exact linear algebra over a FieldCtx on integer codes.

Vectors are sparse dicts {column: code}. SparseEchelon keeps rows whose pivot
is their smallest column, so callers choose which coordinates get eliminated
first by how they number columns.
"""
import heapq
from typing import Dict, List, Optional, Sequence, Tuple

from src.errors import DimensionMismatchError, SingularGeneratorError
from src.mechanics.gf import FieldCtx

Vector = Dict[int, int]
Matrix = Tuple[Tuple[int, ...], ...]


def _axpy(ctx: FieldCtx, target: Vector, a: int, source: Vector) -> None:
    """target -= a * source, in place."""
    sub, mul = ctx.sub, ctx.mul
    for col, c in source.items():
        v = sub(target.get(col, 0), mul(a, c))
        if v:
            target[col] = v
        else:
            target.pop(col, None)


class SparseEchelon:
    """Incremental row echelon form with optional tracking of input combinations.

    Each stored row r satisfies r.vector == sum_j r.combo[j] * input_j when
    tracking is on; inputs that reduce to zero yield kernel relations.
    """

    __slots__ = ('ctx', 'track', 'rows', 'combos', 'count')

    def __init__(self, ctx: FieldCtx, track: bool = False):
        self.ctx = ctx
        self.track = track
        self.rows: Dict[int, Vector] = {}
        self.combos: Dict[int, Vector] = {}
        self.count = 0

    @property
    def rank(self) -> int:
        return len(self.rows)

    def reduce(self, vec: Vector, combo: Optional[Vector] = None) -> Tuple[Vector, Vector]:
        """Returns (remainder, used) with vec = remainder + sum(used[piv] * rows[piv]).
        A given combo is updated in place alongside the vector."""
        ctx = self.ctx
        work = dict(vec)
        used: Vector = {}
        heap = [c for c in work if c in self.rows]
        heapq.heapify(heap)
        while heap:
            col = heapq.heappop(heap)
            a = work.get(col, 0)
            if not a or col not in self.rows:
                continue
            row = self.rows[col]
            for c in row:
                if c not in work and c in self.rows:
                    heapq.heappush(heap, c)
            _axpy(ctx, work, a, row)
            if combo is not None:
                _axpy(ctx, combo, a, self.combos[col])
            used[col] = ctx.add(used.get(col, 0), a)
        return work, used

    def insert(self, vec: Vector) -> Optional[Vector]:
        """Adds vec as input number self.count. Returns the kernel relation
        (a combination of inputs summing to zero) when vec is dependent, else None."""
        ctx = self.ctx
        index = self.count
        self.count += 1
        combo = {index: 1} if self.track else None
        rem, _ = self.reduce(vec, combo)
        if not rem:
            return combo if self.track else {}
        pivot = min(rem)
        inv = ctx.inv(rem[pivot])
        self.rows[pivot] = {c: ctx.mul(v, inv) for c, v in rem.items()}
        if self.track:
            self.combos[pivot] = {c: ctx.mul(v, inv) for c, v in combo.items()}
        return None

    def contains(self, vec: Vector) -> bool:
        rem, _ = self.reduce(vec)
        return not rem

    def express(self, vec: Vector) -> Optional[Vector]:
        """Coefficients x with vec = sum_j x[j] * input_j, or None when vec is outside the span."""
        if not self.track:
            raise ValueError("express needs a tracking echelon")
        ctx = self.ctx
        rem, used = self.reduce(vec)
        if rem:
            return None
        out: Vector = {}
        for col, a in used.items():
            for j, c in self.combos[col].items():
                v = ctx.add(out.get(j, 0), ctx.mul(a, c))
                if v:
                    out[j] = v
                else:
                    out.pop(j, None)
        return out

    def fully_reduced_rows(self) -> List[Vector]:
        """Rows of the reduced echelon form, ordered by pivot."""
        ctx = self.ctx
        pivots = sorted(self.rows)
        reduced: Dict[int, Vector] = {}
        for piv in reversed(pivots):
            row = dict(self.rows[piv])
            for other in pivots:
                if other > piv and other in row and other in reduced:
                    _axpy(ctx, row, row[other], reduced[other])
            reduced[piv] = row
        return [reduced[p] for p in pivots]


def kernel(ctx: FieldCtx, images: Sequence[Vector]) -> List[Vector]:
    """Basis of {x : sum_j x[j] * images[j] = 0}."""
    ech = SparseEchelon(ctx, track=True)
    out = []
    for vec in images:
        rel = ech.insert(vec)
        if rel is not None:
            out.append(rel)
    return out


def rank(ctx: FieldCtx, vectors: Sequence[Vector]) -> int:
    ech = SparseEchelon(ctx)
    for vec in vectors:
        ech.insert(vec)
    return ech.rank


def row_space_basis(ctx: FieldCtx, vectors: Sequence[Vector]) -> List[Vector]:
    ech = SparseEchelon(ctx)
    for vec in vectors:
        ech.insert(vec)
    return ech.fully_reduced_rows()


# --- dense square matrices (tuples of tuples of codes) ---

def identity(n: int) -> Matrix:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def mat_mul(ctx: FieldCtx, a: Matrix, b: Matrix) -> Matrix:
    n, m, k = len(a), len(b), len(b[0]) if b else 0
    if a and len(a[0]) != m:
        raise DimensionMismatchError("matrix shapes do not match")
    add, mul = ctx.add, ctx.mul
    out = []
    for i in range(n):
        row = a[i]
        new = [0] * k
        for t in range(m):
            x = row[t]
            if x:
                brow = b[t]
                for j in range(k):
                    y = brow[j]
                    if y:
                        new[j] = add(new[j], mul(x, y))
        out.append(tuple(new))
    return tuple(out)


def mat_vec(ctx: FieldCtx, a: Matrix, v: Sequence[int]) -> Tuple[int, ...]:
    add, mul = ctx.add, ctx.mul
    out = []
    for row in a:
        acc = 0
        for x, y in zip(row, v):
            if x and y:
                acc = add(acc, mul(x, y))
        out.append(acc)
    return tuple(out)


def mat_inv(ctx: FieldCtx, a: Matrix) -> Matrix:
    """Gauss-Jordan inverse; raises SingularGeneratorError when det = 0."""
    n = len(a)
    rows = [list(r) + [1 if i == j else 0 for j in range(n)] for i, r in enumerate(a)]
    for col in range(n):
        piv = next((r for r in range(col, n) if rows[r][col]), None)
        if piv is None:
            raise SingularGeneratorError("matrix is singular")
        rows[col], rows[piv] = rows[piv], rows[col]
        inv = ctx.inv(rows[col][col])
        rows[col] = [ctx.mul(x, inv) for x in rows[col]]
        for r in range(n):
            if r != col and rows[r][col]:
                f = rows[r][col]
                rows[r] = [ctx.sub(x, ctx.mul(f, y)) for x, y in zip(rows[r], rows[col])]
    return tuple(tuple(r[n:]) for r in rows)


def mat_sub_identity(ctx: FieldCtx, a: Matrix) -> Matrix:
    return tuple(tuple(ctx.sub(x, 1) if i == j else x for j, x in enumerate(row)) for i, row in enumerate(a))


def matrix_rank(ctx: FieldCtx, a: Matrix) -> int:
    return rank(ctx, [{j: x for j, x in enumerate(row) if x} for row in a])


def null_space(ctx: FieldCtx, a: Matrix) -> List[Tuple[int, ...]]:
    """Reduced echelon basis of {v : a v = 0} as dense tuples."""
    n = len(a[0]) if a else 0
    columns = [{i: a[i][j] for i in range(len(a)) if a[i][j]} for j in range(n)]
    rels = kernel(ctx, columns)
    basis = row_space_basis(ctx, rels)
    return [tuple(vec.get(j, 0) for j in range(n)) for vec in basis]
