"""Graded quivers with potential.

A grading assigns an integer degree to every arrow so the potential is
homogeneous of total degree 1.  Left and right mutation carry the grading
through premutation and reduction; a {0,1}-graded QP cuts back down to a
presented algebra (degree-0 subquiver plus one relation per degree-1
arrow).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import BadDegrees, HomogeneityViolation, MalformedInput, MalformedRelation
from .paths import (
    AlgebraElement,
    DEFAULT_TRUNCATION,
    cyclic_derivative,
    make_element,
    make_potential,
    normalize_cycle,
)
from .qp import QP, composite_name, premutate, reduce_qp, star_name
from .quiver import Arrow, Quiver


@dataclass(frozen=True)
class GradedQP:
    qp: QP
    degrees: tuple[tuple[str, int], ...]

    def degree_map(self) -> dict[str, int]:
        return dict(self.degrees)

    def __post_init__(self):
        dmap = self.degree_map()
        ids = {a.id for a in self.qp.quiver.arrows}
        if set(dmap) != ids:
            raise BadDegrees("degree map must cover exactly the arrow ids")
        for cycle, _ in self.qp.potential.terms:
            if sum(dmap[a] for a in cycle) != 1:
                raise HomogeneityViolation(
                    f"potential term {cycle} has total degree != 1"
                )


def make_graded(qp: QP, degrees: dict[str, int]) -> GradedQP:
    return GradedQP(qp, tuple(sorted(degrees.items())))


@dataclass(frozen=True)
class PresentedAlgebra:
    """Quiver plus a chosen minimal set of relations, each a rational
    combination of parallel paths of length >= 2."""

    quiver: Quiver
    relations: tuple[AlgebraElement, ...]

    def __post_init__(self):
        if self.quiver.has_loop():
            raise MalformedInput("presented algebras here are loop-free")
        for r in self.relations:
            if r.is_zero():
                raise MalformedRelation("zero relation")
            if r.min_len() < 2:
                raise MalformedRelation("relations must have minimal path length >= 2")


def qp_from_algebra(alg: PresentedAlgebra) -> GradedQP:
    """Add one degree-1 arrow t(r)->s(r) per relation and take the potential
    summing relation*arrow cycles; original arrows get degree 0."""
    q = alg.quiver
    taken = {a.id for a in q.arrows}
    arrows = list(q.arrows)
    degrees = {a.id: 0 for a in q.arrows}
    rel_names: list[str] = []
    for k, r in enumerate(alg.relations):
        name = f"r{k}"
        while name in taken:
            name += "'"
        taken.add(name)
        rel_names.append(name)
        arrows.append(Arrow(name, r.target, r.source))
        degrees[name] = 1
    new_q = Quiver(q.vertices, tuple(arrows))

    raw = []
    maxlen = 1
    for name, r in zip(rel_names, alg.relations):
        for path, coeff in r.terms:
            raw.append((coeff, path + (name,)))
            maxlen = max(maxlen, len(path) + 1)
    trunc = max(DEFAULT_TRUNCATION, maxlen)
    return make_graded(QP(new_q, make_potential(new_q, raw, trunc)), degrees)


def algebra_from_cut(g: GradedQP) -> PresentedAlgebra:
    """Inverse construction: degree-0 subquiver with one relation per
    degree-1 arrow, read off as that arrow's cyclic derivative."""
    dmap = g.degree_map()
    if any(d not in (0, 1) for d in dmap.values()):
        raise BadDegrees("cut extraction needs all degrees in {0, 1}")
    q = g.qp.quiver
    sub = Quiver(q.vertices, tuple(a for a in q.arrows if dmap[a.id] == 0))
    relations = []
    for a in sorted(q.arrows, key=lambda a: a.id):
        if dmap[a.id] != 1:
            continue
        der = cyclic_derivative(q, g.qp.potential, a.id)
        if der.is_zero():
            raise MalformedRelation(
                f"degree-1 arrow {a.id} has zero derivative, no relation to extract"
            )
        # degree counting forces derivative paths into the degree-0 part
        relations.append(
            make_element(sub, der.source, der.target,
                         [(c, p) for p, c in der.terms], der.truncation)
        )
    return PresentedAlgebra(sub, tuple(relations))


def _mutate_graded(g: GradedQP, i: int, truncation: int | None, left: bool) -> GradedQP:
    q = g.qp.quiver
    dmap = g.degree_map()
    new_deg: dict[str, int] = {}
    for a in q.arrows:
        if a.target == i:  # incoming
            new_deg[star_name(a.id)] = (1 - dmap[a.id]) if left else -dmap[a.id]
        elif a.source == i:  # outgoing
            new_deg[star_name(a.id)] = -dmap[a.id] if left else (1 - dmap[a.id])
        else:
            new_deg[a.id] = dmap[a.id]
    for x in q.arrows_into(i):
        for y in q.arrows_from(i):
            new_deg[composite_name(x.id, y.id)] = dmap[x.id] + dmap[y.id]

    reduced, _ = reduce_qp(premutate(g.qp, i), truncation)
    surviving = {a.id for a in reduced.quiver.arrows}
    out_deg = {k: v for k, v in new_deg.items() if k in surviving}
    try:
        return make_graded(reduced, out_deg)
    except HomogeneityViolation:
        raise
    except BadDegrees as exc:  # pragma: no cover - internal consistency
        raise HomogeneityViolation(str(exc))


def left_mutate(g: GradedQP, i: int, truncation: int | None = None) -> GradedQP:
    """Graded mutation where reversed incoming arrows absorb the degree
    shift: d(a*) = 1 - d(a) incoming, d(b*) = -d(b) outgoing."""
    return _mutate_graded(g, i, truncation, left=True)


def right_mutate(g: GradedQP, i: int, truncation: int | None = None) -> GradedQP:
    """Inverse of left mutation: d(a*) = -d(a) incoming, d(b*) = 1 - d(b)
    outgoing."""
    return _mutate_graded(g, i, truncation, left=False)


# ---------------------------------------------------------------------------
# isomorphism of (graded) QPs


def _canonical_key(quiver: Quiver, degrees: dict[str, int],
                   potential_terms, fix_vertices: bool = False) -> bytes:
    """Minimal serialization over vertex bijections (or the identity only,
    with `fix_vertices`) and all relabelings of arrows within (source,
    target, degree) classes.  Exact potential match is required, so equality
    of keys is equality up to arrow/vertex renaming only."""
    verts = sorted(quiver.vertices)
    n = len(verts)
    arrows = list(quiver.arrows)
    pot = [(cycle, coeff) for cycle, coeff in potential_terms]

    perms = [tuple(range(n))] if fix_vertices else itertools.permutations(range(n))
    best: bytes | None = None
    for perm in perms:
        vmap = {v: perm[k] for k, v in enumerate(verts)}
        groups: dict[tuple[int, int, int], list[str]] = {}
        for a in arrows:
            groups.setdefault((vmap[a.source], vmap[a.target], degrees[a.id]), []).append(a.id)
        keys = sorted(groups)
        arrow_sig = ";".join(f"{s}>{t}#{d}x{len(groups[(s,t,d)])}" for s, t, d in keys)
        if not pot:
            enc = f"V{n}|{arrow_sig}|[]".encode()
            if best is None or enc < best:
                best = enc
            continue

        def assignments(ks):
            if not ks:
                yield {}
                return
            head, *rest = ks
            ids = groups[head]
            for tail in assignments(rest):
                for order in itertools.permutations(ids):
                    m = dict(tail)
                    s, t, d = head
                    for k, old in enumerate(order):
                        m[old] = f"{s}>{t}#{d}@{k}"
                    yield m

        for rename in assignments(keys):
            pot_enc = sorted(
                (normalize_cycle(tuple(rename[a] for a in cycle)), str(coeff))
                for cycle, coeff in pot
            )
            enc = f"V{n}|{arrow_sig}|{pot_enc!r}".encode()
            if best is None or enc < best:
                best = enc
    if best is None:
        best = f"V{n}||".encode()
    return best


def graded_canonical_key(g: GradedQP) -> bytes:
    return _canonical_key(g.qp.quiver, g.degree_map(), g.qp.potential.terms)


def graded_state_key(g: GradedQP) -> bytes:
    """Vertex-label-preserving key: canonical in arrow names only.  Search
    frontiers dedup on this so recorded mutation sequences stay replayable
    (vertex indices in a path refer to actual labels)."""
    return _canonical_key(g.qp.quiver, g.degree_map(), g.qp.potential.terms,
                          fix_vertices=True)


def qp_canonical_key(qp: QP) -> bytes:
    return _canonical_key(qp.quiver, {a.id: 0 for a in qp.quiver.arrows},
                          qp.potential.terms)


def graded_iso(g1: GradedQP, g2: GradedQP) -> bool:
    """True iff some vertex+arrow bijection preserves sources, targets and
    degrees and maps the normalized potential of g1 exactly onto g2's."""
    return graded_canonical_key(g1) == graded_canonical_key(g2)


def qp_iso(qp1: QP, qp2: QP) -> bool:
    return qp_canonical_key(qp1) == qp_canonical_key(qp2)
