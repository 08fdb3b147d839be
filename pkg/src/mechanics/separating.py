"""
Point separation over finite extensions, geometric separation over the
algebraic closure, and the purely inseparable closure test.

The geometric test works in k[x, y], two copies of the variables: S is a
geometric separating set iff every generator of the graph ideal
J = cap_g (y - g x) lies in the radical of I_sep = (s(x) - s(y) : s in S).
Orbit collisions over small extensions are searched first; one of them
hands over a non-vanishing graph generator without any radical computation.
Degree-cap overruns turn into inconclusive verdicts.
"""
import logging
import threading
from dataclasses import dataclass, field
from typing import Dict, Optional, Sequence

from cachetools import LRUCache, cached
from cachetools.keys import hashkey

from src.config import FALSIFIER_POINT_CAP, INSEPARABLE_MMAX, MAX_VARIABLES_DIM, POINT_CAP, SECOND_COPY_SUFFIX
from src.errors import ConsistencyError, DegreeCapExceeded, SizeCapError
from src.mechanics.cmcert import membership, present
from src.mechanics.groebner import GroebnerBasis, Ideal, buchberger, intersect, radical_member
from src.mechanics.group import FiniteMatrixGroup, orbits_of_points
from src.mechanics.invariant import require_invariant
from src.mechanics.mpoly import GREVLEX, Polynomial, PolyRing

log = logging.getLogger(__name__)

PASS, FAIL, INCONCLUSIVE = "pass", "fail", "inconclusive"


@dataclass
class SeparatingVerdict:
    kind: str
    result: str
    witness: Optional[str] = None
    details: Dict[str, object] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.result == PASS


# --- POINTS ---

def _orbit_collision(G: FiniteMatrixGroup, S: Sequence[Polynomial], e: int):
    """(partition, u, v) for two orbit representatives S cannot tell apart, or (partition, None, None)."""
    partition = orbits_of_points(G, e)
    evaluators = [s.evaluator(partition.field) for s in S]
    seen: Dict[tuple, int] = {}
    for idx, orbit in enumerate(partition.orbits):
        rep = orbit[0]
        signature = tuple(ev(rep) for ev in evaluators)
        if signature in seen:
            return partition, partition.orbits[seen[signature]][0], rep
        seen[signature] = idx
    return partition, None, None


def _format_point(target, v) -> str:
    return "(" + ", ".join(target.format(x) for x in v) + ")"


def separates_points(G: FiniteMatrixGroup, ring: PolyRing, S: Sequence[Polynomial], e: int = 1) -> SeparatingVerdict:
    """Pass iff S takes different values on every two G-orbits of V(F_{q^e})."""
    require_invariant(G, S)
    partition, u, v = _orbit_collision(G, S, e)
    details = {"orbits": len(partition.orbits), "points": partition.num_points}
    if u is not None:
        target = partition.field
        return SeparatingVerdict(f"point({e})", FAIL, f"{_format_point(target, u)} ~ {_format_point(target, v)}", details)
    return SeparatingVerdict(f"point({e})", PASS, None, details)


# --- GEOMETRIC ---

def doubled_ring(ring: PolyRing) -> PolyRing:
    names = list(ring.vars) + [v + SECOND_COPY_SUFFIX for v in ring.vars]
    return PolyRing(ring.field, names, GREVLEX, list(ring.weights) * 2, reserved_ok=True)


def second_copy(f: Polynomial, doubled: PolyRing) -> Polynomial:
    n = f.ring.nvars
    return f.substitute([doubled.var(n + i) for i in range(n)], doubled)


@cached(LRUCache(maxsize=32), key=lambda G, ring, degree_cap=None: hashkey(G, ring), lock=threading.Lock())
def graph_ideal(G: FiniteMatrixGroup, ring: PolyRing, degree_cap: Optional[int] = None) -> GroebnerBasis:
    """Groebner basis of the ideal of the union of the graphs {(v, g v)}."""
    doubled = doubled_ring(ring)
    n = ring.nvars
    xs = [doubled.var(i) for i in range(n)]
    ys = [doubled.var(n + i) for i in range(n)]
    J: Optional[Ideal] = None
    for g in G.elements:
        gens = []
        for i, row in enumerate(g.matrix):
            image = doubled.zero()
            for j, code in enumerate(row):
                if code:
                    image = image + xs[j].scale(code)
            gens.append(ys[i] - image)
        graph = Ideal(doubled, gens)
        J = graph if J is None else intersect(J, graph, degree_cap)
        log.debug("🧩 graph ideal after %s: %d generators", G.label(g), len(J.gens))
    return buchberger(J, degree_cap=degree_cap)


def _falsifying_pair(G: FiniteMatrixGroup, ring: PolyRing, S: Sequence[Polynomial]):
    """Searches V(F_{q^e}) for e = 1, 2, ... while the point count stays under
    FALSIFIER_POINT_CAP. Returns (e, field, u, v) or None."""
    q, n = ring.field.q, ring.nvars
    e = 1
    while q ** (e * n) <= min(POINT_CAP, FALSIFIER_POINT_CAP):
        partition, u, v = _orbit_collision(G, S, e)
        if u is not None:
            log.info("🔎 S fails to separate %s ~ %s over F_%d", u, v, partition.field.q)
            return e, partition.field, u, v
        e += 1
    return None


def geometric_separating_test(G: FiniteMatrixGroup, ring: PolyRing, S: Sequence[Polynomial],
                              degree_cap: Optional[int] = None, point_check: bool = True) -> SeparatingVerdict:
    """Pass iff S separates orbits over the algebraic closure.

    A FAIL always names a graph-ideal generator outside sqrt(I_sep). When the
    point search finds two orbits S cannot tell apart, the pair lies in
    V(I_sep) and any generator not vanishing on it is such a witness, so no
    radical computation is needed.
    """
    require_invariant(G, S)
    if 2 * ring.nvars > MAX_VARIABLES_DIM:
        raise SizeCapError(f"{2 * ring.nvars} variables exceed cap {MAX_VARIABLES_DIM}")

    falsified = _falsifying_pair(G, ring, S) if point_check else None

    doubled = doubled_ring(ring)
    isep = Ideal(doubled, [s.to_ring(doubled) - second_copy(s, doubled) for s in S])
    try:
        gb_j = graph_ideal(G, ring, degree_cap)
        for gen in isep.gens:
            if not gb_j.contains(gen):
                raise ConsistencyError(f"I_sep is not contained in the graph ideal: {gen}")
        if falsified is not None:
            e, target, u, v = falsified
            point = tuple(u) + tuple(v)
            for j in gb_j.basis:
                if j.evaluator(target)(point):
                    return SeparatingVerdict("geometric", FAIL, str(j), {
                        "graph_generators": len(gb_j), "falsified_by": f"points over F_{target.q}",
                        "extension_degree": e,
                        "points": f"{_format_point(target, u)} ~ {_format_point(target, v)}"})
            raise ConsistencyError("graph ideal vanishes on two points in different orbits")
        gb_sep = buchberger(isep, degree_cap=degree_cap)
        for j in gb_j.basis:
            if not radical_member(j, gb_sep, degree_cap):
                return SeparatingVerdict("geometric", FAIL, str(j), {"graph_generators": len(gb_j)})
    except DegreeCapExceeded as exc:
        log.warning("⚠️ degree cap hit in geometric test: %s", exc)
        return SeparatingVerdict("geometric", INCONCLUSIVE, None, {"reason": str(exc)})
    return SeparatingVerdict("geometric", PASS, None, {"graph_generators": len(gb_j)})


# --- PURELY INSEPARABLE CLOSURE ---

def inseparable_closure_test(S: Sequence[Polynomial], H: Sequence[Polynomial], m_max: int = INSEPARABLE_MMAX,
                             G: Optional[FiniteMatrixGroup] = None, degree_cap: Optional[int] = None) -> SeparatingVerdict:
    """Pass iff every h in H has some h^(p^m), m <= m_max, in the algebra k[S].

    An empty H passes vacuously; an empty S spans only the constants.
    """
    if G is not None:
        require_invariant(G, list(S) + list(H))
    if not H:
        return SeparatingVerdict("inseparable-closure", PASS, None, {"exponents": {}})
    if S:
        try:
            algebra = present(S[0].ring, list(S), degree_cap=degree_cap)
        except DegreeCapExceeded as exc:
            return SeparatingVerdict("inseparable-closure", INCONCLUSIVE, None, {"reason": str(exc)})
        in_algebra = lambda f: membership(algebra, f) is not None
    else:
        in_algebra = lambda f: f.is_constant()
    exponents: Dict[str, int] = {}
    for h in H:
        found = None
        for m in range(m_max + 1):
            if in_algebra(h.frobenius_power_poly(m)):
                found = m
                break
        if found is None:
            return SeparatingVerdict("inseparable-closure", INCONCLUSIVE, str(h),
                                     {"m_max": m_max, "exponents": exponents})
        exponents[str(h)] = found
    return SeparatingVerdict("inseparable-closure", PASS, None, {"exponents": exponents})
