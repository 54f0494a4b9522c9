"""Paths, cycles modulo rotation, potentials, cyclic derivatives, and
truncated dimension computation for completed path algebras modulo ideals.

Conventions
-----------
Paths are stored in traversal order: the first-traversed arrow comes first
in the tuple.  Textual display reverses the tuple, so products read
right-to-left like function composition.  All coefficients are exact
`fractions.Fraction`; there is no floating point anywhere in this package.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import BoundTooSmall, MalformedInput, NotAcyclic
from .quiver import Arrow, Quiver, is_acyclic

DEFAULT_TRUNCATION = 12

PathTuple = tuple[str, ...]


def path_ends(q: Quiver, arrows: PathTuple) -> tuple[int, int]:
    """(source, target) of a nonempty composable arrow tuple."""
    amap = q.arrow_map()
    for k in range(len(arrows) - 1):
        if amap[arrows[k]].target != amap[arrows[k + 1]].source:
            raise MalformedInput(f"arrows do not compose: {arrows[k]} then {arrows[k+1]}")
    return amap[arrows[0]].source, amap[arrows[-1]].target


def normalize_cycle(arrows: PathTuple) -> PathTuple:
    """Rotate a cyclic arrow tuple so the lexicographically smallest
    rotation comes first."""
    if not arrows:
        raise MalformedInput("empty cycle")
    rotations = [arrows[k:] + arrows[:k] for k in range(len(arrows))]
    return min(rotations)


def display(arrows: PathTuple) -> str:
    """Right-to-left product string, matching the usual written convention."""
    return "".join(reversed(arrows)) if arrows else "e"


@dataclass(frozen=True)
class Potential:
    """Finite rational combination of cycles modulo rotation.

    `terms` maps rotation-normalized cycles to nonzero coefficients; terms
    longer than `truncation` were dropped at construction and `lost` records
    that this happened.
    """

    terms: tuple[tuple[PathTuple, Fraction], ...]
    truncation: int = DEFAULT_TRUNCATION
    lost: bool = False

    def as_dict(self) -> dict[PathTuple, Fraction]:
        return dict(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def max_len(self) -> int:
        return max((len(c) for c, _ in self.terms), default=0)


def make_potential(
    q: Quiver,
    raw_terms,
    truncation: int = DEFAULT_TRUNCATION,
    lost: bool = False,
) -> Potential:
    """Build a Potential from (coefficient, cycle arrow tuple) pairs.

    Cycles are checked against the quiver, rotation-normalized, merged, and
    zero coefficients dropped; terms longer than the truncation order are
    discarded and flagged.
    """
    acc: dict[PathTuple, Fraction] = {}
    for coeff, arrows in raw_terms:
        arrows = tuple(arrows)
        if not arrows:
            raise MalformedInput("potential terms must have length >= 1")
        s, t = path_ends(q, arrows)
        if s != t:
            raise MalformedInput(f"term {arrows} is not a cycle")
        c = Fraction(coeff)
        if c == 0:
            continue
        if len(arrows) > truncation:
            lost = True
            continue
        key = normalize_cycle(arrows)
        acc[key] = acc.get(key, Fraction(0)) + c
    items = tuple(sorted((k, v) for k, v in acc.items() if v != 0))
    return Potential(items, truncation, lost)


@dataclass(frozen=True)
class AlgebraElement:
    """Rational combination of parallel paths: an element of e_t * kQ * e_s
    for fixed endpoints, truncated beyond `truncation`."""

    source: int
    target: int
    terms: tuple[tuple[PathTuple, Fraction], ...]
    truncation: int = DEFAULT_TRUNCATION

    def as_dict(self) -> dict[PathTuple, Fraction]:
        return dict(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def min_len(self) -> int:
        if not self.terms:
            raise MalformedInput("zero element has no minimal length")
        return min(len(p) for p, _ in self.terms)


def make_element(q: Quiver, source: int, target: int, raw_terms,
                 truncation: int = DEFAULT_TRUNCATION) -> AlgebraElement:
    acc: dict[PathTuple, Fraction] = {}
    for coeff, arrows in raw_terms:
        arrows = tuple(arrows)
        c = Fraction(coeff)
        if c == 0:
            continue
        if arrows:
            s, t = path_ends(q, arrows)
            if (s, t) != (source, target):
                raise MalformedInput(f"path {arrows} does not run {source}->{target}")
        elif source != target:
            raise MalformedInput("lazy path needs source == target")
        if len(arrows) > truncation:
            continue
        acc[arrows] = acc.get(arrows, Fraction(0)) + c
    items = tuple(sorted((k, v) for k, v in acc.items() if v != 0))
    return AlgebraElement(source, target, items, truncation)


def cyclic_derivative(q: Quiver, w: Potential, arrow_id: str) -> AlgebraElement:
    """Cut each cycle of `w` at every occurrence of the arrow and sum the
    remainders.  The result runs from the arrow's target to its source."""
    a = q.arrow(arrow_id)
    acc: dict[PathTuple, Fraction] = {}
    for cycle, coeff in w.terms:
        for k, x in enumerate(cycle):
            if x == arrow_id:
                rest = cycle[k + 1 :] + cycle[:k]
                acc[rest] = acc.get(rest, Fraction(0)) + coeff
    items = tuple(sorted((k, v) for k, v in acc.items() if v != 0))
    return AlgebraElement(a.target, a.source, items, w.truncation)


# ---------------------------------------------------------------------------
# sparse exact row reduction

PathKey = tuple


def _key(source: int, arrows: PathTuple):
    # ordering: shortest first, then lexicographic; lazy paths sort by vertex
    if arrows:
        return (len(arrows), 1, arrows)
    return (0, 0, (source,))


class SparseEliminator:
    """Incremental row echelon over the rationals on sparse vectors.

    Each stored row is normalized so its minimal key has coefficient 1, and
    contains no key smaller than its pivot.  Rows with distinct pivots are
    independent, so `rank` is exact.
    """

    def __init__(self):
        self.pivots: dict[PathKey, dict[PathKey, Fraction]] = {}

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def residue(self, row: dict[PathKey, Fraction]) -> dict[PathKey, Fraction]:
        row = {k: v for k, v in row.items() if v != 0}
        while row:
            low = min(row)
            piv = self.pivots.get(low)
            if piv is None:
                return row
            c = row[low]
            for k, v in piv.items():
                nv = row.get(k, Fraction(0)) - c * v
                if nv == 0:
                    row.pop(k, None)
                else:
                    row[k] = nv
        return row

    def insert(self, row: dict[PathKey, Fraction]) -> bool:
        """Reduce and, if independent, store.  Returns True when rank grew."""
        res = self.residue(row)
        if not res:
            return False
        low = min(res)
        inv = Fraction(1) / res[low]
        self.pivots[low] = {k: v * inv for k, v in res.items()}
        return True

    def contains(self, row: dict[PathKey, Fraction]) -> bool:
        return not self.residue(row)


# ---------------------------------------------------------------------------
# truncated quotient dimension


@dataclass(frozen=True)
class DimensionResult:
    """Finite(dim, certified_at) when the dimension stabilized under the
    nilpotency certificate, otherwise UnknownAtBound(dim_at_bound, bound)."""

    finite: bool
    dim: int
    bound: int

    def to_json(self) -> dict:
        if self.finite:
            return {"finite": True, "dim": self.dim}
        return {"finite": False, "dim_at_bound": self.dim, "bound": self.bound}


def enumerate_paths(q: Quiver, max_len: int) -> list[tuple[int, PathTuple]]:
    """All paths of length <= max_len as (source, arrow tuple), lazy paths
    included, in deterministic order."""
    out_by: dict[int, list[Arrow]] = {v: [] for v in q.vertices}
    for a in sorted(q.arrows, key=lambda a: a.id):
        out_by[a.source].append(a)
    paths: list[tuple[int, PathTuple]] = [(v, ()) for v in sorted(q.vertices)]
    frontier: list[tuple[int, int, PathTuple]] = [(v, v, ()) for v in sorted(q.vertices)]
    for _ in range(max_len):
        nxt = []
        for src, at, arrows in frontier:
            for a in out_by[at]:
                nxt.append((src, a.target, arrows + (a.id,)))
        frontier = nxt
        paths.extend((src, arrows) for src, at, arrows in frontier)
        if not frontier:
            break
    return paths


def _quotient_rank(
    q: Quiver,
    generators: list[AlgebraElement],
    bound: int,
    paths: list[tuple[int, PathTuple]],
) -> int:
    """Rank of span{ prefix * g * suffix truncated beyond `bound` } inside
    the space of paths of length <= bound."""
    amap = q.arrow_map()
    ends_at: dict[int, list[tuple[int, PathTuple]]] = {v: [] for v in q.vertices}
    starts_at: dict[int, list[tuple[int, PathTuple]]] = {v: [] for v in q.vertices}
    for src, arrows in paths:
        if len(arrows) > bound:
            continue
        tgt = amap[arrows[-1]].target if arrows else src
        ends_at[tgt].append((src, arrows))
        starts_at[src].append((tgt, arrows))

    elim = SparseEliminator()
    for g in generators:
        m = g.min_len()
        for pre_src, pre in ends_at[g.source]:
            room = bound - m - len(pre)
            if room < 0:
                continue
            for suf_tgt, suf in starts_at[g.target]:
                if len(suf) > room:
                    continue
                row: dict[PathKey, Fraction] = {}
                budget = bound - len(pre) - len(suf)
                for term, coeff in g.terms:
                    if len(term) > budget:
                        continue
                    whole = pre + term + suf
                    k = _key(pre_src, whole)
                    row[k] = row.get(k, Fraction(0)) + coeff
                if row:
                    elim.insert(row)
    return elim.rank


def truncated_quotient_dimension(
    q: Quiver, generators: list[AlgebraElement], bound: int
) -> DimensionResult:
    """Dimension of span(paths of length <= bound) modulo the two-sided
    ideal generated by `generators`, additionally truncated beyond `bound`.

    Returns Finite when the count agrees with the one at bound-1: then every
    path of length >= bound already lies in the ideal of the completed
    algebra and the figure is the true dimension.
    """
    if bound < 1:
        raise BoundTooSmall("bound must be >= 1")
    gens = list(generators)
    for g in gens:
        if g.is_zero():
            raise MalformedInput("zero generator has no minimal length")
        if g.min_len() < 1:
            raise MalformedInput("generators must have minimal path length >= 1")
    max_order = max((g.min_len() for g in gens), default=1)
    if bound < max_order:
        raise BoundTooSmall(f"bound {bound} below maximal generator order {max_order}")

    paths = enumerate_paths(q, bound)
    n_prev = sum(1 for _, arrows in paths if len(arrows) <= bound - 1)
    d_prev = n_prev - _quotient_rank(q, gens, bound - 1, paths)
    d_here = len(paths) - _quotient_rank(q, gens, bound, paths)
    if d_here == d_prev:
        return DimensionResult(True, d_here, bound)
    return DimensionResult(False, d_here, bound)


# ---------------------------------------------------------------------------
# preprojective presentation


def build_preprojective(q: Quiver) -> tuple[Quiver, list[AlgebraElement]]:
    """Double the quiver (a fresh reversed arrow `a*` per arrow) and return
    the per-vertex commutator relations generating the classical
    preprojective ideal."""
    if q.has_loop() or not is_acyclic(q):
        raise NotAcyclic("preprojective construction needs an acyclic, loop-free quiver")
    doubled = list(q.arrows)
    for a in q.arrows:
        doubled.append(Arrow(a.id + "*", a.target, a.source))
    dq = Quiver(q.vertices, tuple(doubled))

    relations = []
    for v in q.vertices:
        terms: list[tuple[Fraction, PathTuple]] = []
        for a in q.arrows:
            if a.target == v:
                terms.append((Fraction(1), (a.id + "*", a.id)))
            if a.source == v:
                terms.append((Fraction(-1), (a.id, a.id + "*")))
        if terms:
            relations.append(make_element(dq, v, v, terms))
    return dq, relations


def cycle_classes_up_to(q: Quiver, bound: int) -> list[PathTuple]:
    """All rotation classes of cycles of length 1..bound, deterministically
    ordered by (length, arrows)."""
    amap = q.arrow_map()
    seen: set[PathTuple] = set()
    for src, arrows in enumerate_paths(q, bound):
        if not arrows:
            continue
        if amap[arrows[-1]].target == src:
            seen.add(normalize_cycle(arrows))
    return sorted(seen, key=lambda c: (len(c), c))
