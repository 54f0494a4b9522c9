"""Quivers with potential: premutation, reduction by elimination of
2-cycles, full mutation, rigidity and Jacobi-finiteness tests.

Naming of fresh arrows is deterministic: the composite of x (into the
mutation vertex) followed by y (out of it) is called "[y|x]", the reversal
of z is "star(z)".  These names survive into the reduced output so results
can be compared against hand computations.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    BoundTooSmall,
    LoopAtVertex,
    TruncationOverflow,
    TwoCycleAtVertex,
    UnknownVertex,
)
from .paths import (
    AlgebraElement,
    DimensionResult,
    PathTuple,
    Potential,
    SparseEliminator,
    cycle_classes_up_to,
    cyclic_derivative,
    enumerate_paths,
    make_element,
    make_potential,
    normalize_cycle,
    truncated_quotient_dimension,
)
from .quiver import Arrow, Quiver


@dataclass(frozen=True)
class QP:
    quiver: Quiver
    potential: Potential

    @staticmethod
    def build(quiver: Quiver, raw_terms, truncation=None) -> QP:
        from .paths import DEFAULT_TRUNCATION

        n = DEFAULT_TRUNCATION if truncation is None else truncation
        return QP(quiver, make_potential(quiver, raw_terms, n))


@dataclass(frozen=True)
class ReductionReport:
    eliminated: tuple[tuple[str, str], ...]
    substitutions: tuple[tuple[str, AlgebraElement], ...]
    lost: bool


def composite_name(incoming: str, outgoing: str) -> str:
    return f"[{outgoing}|{incoming}]"


def star_name(arrow_id: str) -> str:
    return f"star({arrow_id})"


def _check_mutable(q: Quiver, i: int) -> None:
    if i not in q.vertices:
        raise UnknownVertex(f"vertex {i} not in quiver")
    for a in q.arrows:
        if a.source == a.target:
            raise LoopAtVertex(f"loop {a.id} at vertex {a.source}")
    if q.two_cycle_through(i):
        raise TwoCycleAtVertex(f"2-cycle through vertex {i}")


def _rewrite_cycle_through(cycle: PathTuple, q: Quiver, i: int) -> PathTuple:
    """Rotate so the cycle does not start at i, then fuse every passage
    (x into i, y out of i) into the composite arrow."""
    amap = q.arrow_map()
    rot = cycle
    for _ in range(len(cycle)):
        if amap[rot[0]].source != i:
            break
        rot = rot[1:] + rot[:1]
    out: list[str] = []
    k = 0
    while k < len(rot):
        a = rot[k]
        if amap[a].target == i:
            b = rot[(k + 1) % len(rot)]
            out.append(composite_name(a, b))
            k += 2
        else:
            out.append(a)
            k += 1
    return tuple(out)


def premutate(qp: QP, i: int) -> QP:
    """Steps (M1)+(M2) of mutation with the new potential [W] + sum of
    star(x)*[y|x]*star(y) cycles, one per passage pair through i."""
    q = qp.quiver
    _check_mutable(q, i)
    incoming = sorted(q.arrows_into(i), key=lambda a: a.id)
    outgoing = sorted(q.arrows_from(i), key=lambda a: a.id)

    arrows: list[Arrow] = []
    for a in q.arrows:
        if a.source == i or a.target == i:
            arrows.append(Arrow(star_name(a.id), a.target, a.source))
        else:
            arrows.append(a)
    for x in incoming:
        for y in outgoing:
            arrows.append(Arrow(composite_name(x.id, y.id), x.source, y.target))
    new_q = Quiver(q.vertices, tuple(arrows))

    terms: list[tuple[Fraction, PathTuple]] = []
    for cycle, coeff in qp.potential.terms:
        terms.append((coeff, _rewrite_cycle_through(cycle, q, i)))
    for x in incoming:
        for y in outgoing:
            delta = (star_name(x.id), composite_name(x.id, y.id), star_name(y.id))
            terms.append((Fraction(1), delta))
    return QP(new_q, make_potential(new_q, terms, qp.potential.truncation,
                                    lost=qp.potential.lost))


def _substitute(q: Quiver, w: Potential, arrow_id: str,
                replacement: list[tuple[Fraction, PathTuple]]) -> Potential:
    """Replace every occurrence of the arrow in every cycle by the given
    combination of parallel paths, re-expanding and truncating."""
    raw: list[tuple[Fraction, PathTuple]] = []
    lost = w.lost
    for cycle, coeff in w.terms:
        partial: list[tuple[PathTuple, Fraction]] = [((), coeff)]
        for arr in cycle:
            if arr != arrow_id:
                partial = [(p + (arr,), c) for p, c in partial]
            else:
                partial = [
                    (p + term, c * tc) for p, c in partial for tc, term in replacement
                ]
        for p, c in partial:
            if len(p) > w.truncation:
                lost = True
            else:
                raw.append((c, p))
    return make_potential(q, raw, w.truncation, lost=lost)


def _quadratic_classes(q: Quiver, w: Potential) -> dict[tuple[str, str], Fraction]:
    """Length-2 terms that are genuine 2-cycles (two opposite arrows between
    distinct vertices); loop squares are left untouched by reduction."""
    amap = q.arrow_map()
    out = {}
    for cycle, coeff in w.terms:
        if len(cycle) == 2 and cycle[0] != cycle[1]:
            a = amap[cycle[0]]
            if a.source != a.target:
                out[cycle] = coeff
    return out


def reduce_qp(qp: QP, truncation: int | None = None) -> tuple[QP, ReductionReport]:
    """Split off the trivial part of the potential.

    Step 1 Gaussian-eliminates the quadratic form by linear changes among
    parallel arrows, pinning disjoint pivot pairs; step 2 removes every
    other occurrence of pinned arrows by iterated substitutions whose tails
    strictly gain length.  Pinned pairs and their quadratic terms are then
    deleted.  The Jacobian dimension is preserved (covered by tests, not
    assumed here).
    """
    q = qp.quiver
    n = qp.potential.truncation if truncation is None else truncation
    w = make_potential(q, [(c, cy) for cy, c in qp.potential.terms], n,
                       lost=qp.potential.lost)
    sub_log: list[tuple[str, AlgebraElement]] = []
    amap = q.arrow_map()

    def record(arrow_id: str, replacement):
        a = amap[arrow_id]
        sub_log.append((arrow_id, make_element(q, a.source, a.target, replacement, n)))

    # step 1: diagonalize the quadratic part
    pinned: list[tuple[str, str, Fraction]] = []
    pinned_ids: set[str] = set()
    while True:
        quad = {
            pair: c
            for pair, c in _quadratic_classes(q, w).items()
            if pair[0] not in pinned_ids and pair[1] not in pinned_ids
        }
        if not quad:
            break
        a_id, b_id = min(quad)  # class reps are rotation-minimal, so sorted
        lam = quad[(a_id, b_id)]
        while True:
            quad = _quadratic_classes(q, w)
            cross = None
            for (u, v), c in sorted(quad.items()):
                if {u, v} == {a_id, b_id} or u in pinned_ids or v in pinned_ids:
                    continue
                if b_id in (u, v):
                    cross = (a_id, u if v == b_id else v, c)
                    break
                if a_id in (u, v):
                    cross = (b_id, u if v == a_id else v, c)
                    break
            if cross is None:
                break
            mine, other, mu = cross
            repl = [(Fraction(1), (mine,)), (-mu / lam, (other,))]
            w = _substitute(q, w, mine, repl)
            record(mine, repl)
        pinned.append((a_id, b_id, lam))
        pinned_ids.update((a_id, b_id))

    # step 2: push all other occurrences of pinned arrows beyond every length.
    # Each residual class is cut ONCE (not once per occurrence like the cyclic
    # derivative would): cutting any single occurrence yields the same class,
    # and the per-class count is what the cancellation in the pivot term
    # needs when an arrow repeats inside one cycle.
    def residual_cut(cut_at: str, pivot: tuple[str, str]) -> dict[PathTuple, Fraction]:
        out: dict[PathTuple, Fraction] = {}
        for cycle, coeff in w.terms:
            if cut_at not in cycle or cycle == pivot:
                continue
            k = cycle.index(cut_at)
            path = cycle[k + 1 :] + cycle[:k]
            out[path] = out.get(path, Fraction(0)) + coeff
        return {p: c for p, c in out.items() if c != 0}

    passes = 0
    while pinned:
        changed = False
        for a_id, b_id, lam in pinned:
            da = residual_cut(b_id, (a_id, b_id))
            if da:
                assert all(len(p) >= 2 for p in da), "step 1 left a stray 2-cycle"
                repl = [(Fraction(1), (a_id,))] + [(-c / lam, p) for p, c in sorted(da.items())]
                w = _substitute(q, w, a_id, repl)
                record(a_id, repl)
                changed = True
            db = residual_cut(a_id, (a_id, b_id))
            if db:
                assert all(len(p) >= 2 for p in db), "step 1 left a stray 2-cycle"
                repl = [(Fraction(1), (b_id,))] + [(-c / lam, p) for p, c in sorted(db.items())]
                w = _substitute(q, w, b_id, repl)
                record(b_id, repl)
                changed = True
        if not changed:
            break
        passes += 1
        if passes > 2 * n:
            raise TruncationOverflow(
                "reduction substitutions did not settle within the truncation order"
            )

    kept = tuple(a for a in q.arrows if a.id not in pinned_ids)
    new_q = Quiver(q.vertices, kept)
    final_terms = []
    for cy, c in w.terms:
        if len(cy) == 2 and cy[0] in pinned_ids and cy[1] in pinned_ids:
            continue
        assert not any(x in pinned_ids for x in cy), "residual pinned arrow"
        final_terms.append((c, cy))
    new_w = make_potential(new_q, final_terms, n, lost=w.lost)
    report = ReductionReport(
        tuple((a, b) for a, b, _ in pinned), tuple(sub_log), new_w.lost
    )
    return QP(new_q, new_w), report


def dwz_mutate(qp: QP, i: int, truncation: int | None = None) -> QP:
    """Premutation followed by reduction."""
    reduced, _ = reduce_qp(premutate(qp, i), truncation)
    return reduced


def jacobi_finite(qp: QP, bound: int) -> DimensionResult:
    """Truncated dimension of the path algebra modulo all cyclic
    derivatives of the potential."""
    gens = []
    for a in sorted(qp.quiver.arrows, key=lambda a: a.id):
        g = cyclic_derivative(qp.quiver, qp.potential, a.id)
        if not g.is_zero():
            gens.append(g)
    return truncated_quotient_dimension(qp.quiver, gens, bound)


@dataclass(frozen=True)
class RigidityResult:
    status: str  # "certified_rigid" | "not_rigid" | "unknown"
    bound: int
    witness: PathTuple | None = None

    def to_json(self) -> dict:
        out: dict = {"status": self.status, "bound": self.bound}
        if self.witness is not None:
            out["witness"] = list(self.witness)
        return out


def is_rigid(qp: QP, bound: int) -> RigidityResult:
    """Decide whether every cycle class of length <= bound lies in the span
    of the Jacobian ideal's cycle classes.

    A positive or negative answer is only certified when the Jacobi
    finiteness certificate holds at the same bound: then paths of length >=
    bound are in the ideal, so the bounded check settles all cycles.
    """
    if bound < 2:
        raise BoundTooSmall("rigidity bound must be >= 2")
    q = qp.quiver
    cert = jacobi_finite(qp, bound)
    classes = cycle_classes_up_to(q, bound)
    if not classes:
        if cert.finite:
            return RigidityResult("certified_rigid", bound)
        return RigidityResult("unknown", bound)

    amap = q.arrow_map()
    starts_at: dict[int, list[tuple[int, PathTuple]]] = {v: [] for v in q.vertices}
    for src, arrows in enumerate_paths(q, bound):
        tgt = amap[arrows[-1]].target if arrows else src
        starts_at[src].append((tgt, arrows))

    elim = SparseEliminator()
    for a in sorted(q.arrows, key=lambda a: a.id):
        g = cyclic_derivative(q, qp.potential, a.id)
        if g.is_zero():
            continue
        m = g.min_len()
        # one-sided products suffice: rotating p*g*q shows every ideal cycle
        # class arises as g followed by a path back to its source
        for tgt, r in starts_at[g.target]:
            if tgt != g.source or m + len(r) > bound:
                continue
            row: dict = {}
            for term, coeff in g.terms:
                if len(term) + len(r) > bound:
                    continue
                key = normalize_cycle(term + r)
                k = (len(key), key)
                row[k] = row.get(k, Fraction(0)) + coeff
            if row:
                elim.insert(row)

    missing = None
    for c in classes:
        if not elim.contains({(len(c), c): Fraction(1)}):
            missing = c
            break

    if missing is None:
        if cert.finite:
            return RigidityResult("certified_rigid", bound)
        return RigidityResult("unknown", bound)
    if cert.finite:
        return RigidityResult("not_rigid", bound, witness=missing)
    return RigidityResult("unknown", bound)
