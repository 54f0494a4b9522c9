"""Combinatorial unpunctured triangulations and flips.

A triangulation is given purely by incidence: sides tagged arc or boundary,
and triangles as clockwise-ordered side triples.  Arcs sit in exactly two
triangles, boundary sides in exactly one.  No coordinates, no embedding.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import BoundarySide, InvalidTriangulation, SelfFoldedConfiguration
from .paths import make_potential
from .qp import QP
from .quiver import Arrow, Quiver


@dataclass(frozen=True)
class Side:
    id: str
    kind: str  # "arc" | "boundary"


@dataclass(frozen=True)
class Triangulation:
    sides: tuple[Side, ...]
    triangles: tuple[tuple[str, str, str], ...]

    def __post_init__(self):
        ids = [s.id for s in self.sides]
        if len(set(ids)) != len(ids):
            raise InvalidTriangulation("duplicate side ids")
        kinds = {s.id: s.kind for s in self.sides}
        if any(k not in ("arc", "boundary") for k in kinds.values()):
            raise InvalidTriangulation("side kind must be 'arc' or 'boundary'")
        counts: dict[str, int] = {i: 0 for i in ids}
        for tri in self.triangles:
            if len(tri) != 3:
                raise InvalidTriangulation("triangles are side triples")
            if len(set(tri)) != 3:
                raise SelfFoldedConfiguration(f"self-folded triangle {tri}")
            for s in tri:
                if s not in counts:
                    raise InvalidTriangulation(f"unknown side {s!r}")
                counts[s] += 1
        for s in self.sides:
            want = 2 if s.kind == "arc" else 1
            if counts[s.id] != want:
                raise InvalidTriangulation(
                    f"side {s.id} occurs {counts[s.id]} times, expected {want}"
                )
        if self.triangles and not self._connected():
            raise InvalidTriangulation("triangulation is not connected")

    def _connected(self) -> bool:
        adj: dict[str, set[int]] = {}
        for k, tri in enumerate(self.triangles):
            for s in tri:
                adj.setdefault(s, set()).add(k)
        seen = {0}
        stack = [0]
        while stack:
            k = stack.pop()
            for s in self.triangles[k]:
                for m in adj[s]:
                    if m not in seen:
                        seen.add(m)
                        stack.append(m)
        return len(seen) == len(self.triangles)

    def kind_of(self, side_id: str) -> str:
        for s in self.sides:
            if s.id == side_id:
                return s.kind
        raise InvalidTriangulation(f"unknown side {side_id!r}")

    def arcs(self) -> list[str]:
        return [s.id for s in self.sides if s.kind == "arc"]


def _vertex_of_arc(arcs: list[str]) -> dict[str, int]:
    if all(a.isdigit() for a in arcs):
        return {a: int(a) for a in arcs}
    return {a: k + 1 for k, a in enumerate(sorted(arcs))}


def quiver_from_triangulation(t: Triangulation) -> QP:
    """One quiver vertex per arc; an arrow s->t for every clockwise-
    consecutive arc pair (s followed by t) inside a triangle; the potential
    sums the clockwise 3-cycle of every triangle whose sides are all arcs."""
    arcs = t.arcs()
    vmap = _vertex_of_arc(arcs)
    arrows: list[Arrow] = []
    arrow_of: dict[tuple[int, str, str], str] = {}
    for k, tri in enumerate(t.triangles):
        for pos in range(3):
            s, u = tri[pos], tri[(pos + 1) % 3]
            if t.kind_of(s) == "arc" and t.kind_of(u) == "arc":
                name = f"t{k}:{s}>{u}"
                arrow_of[(k, s, u)] = name
                arrows.append(Arrow(name, vmap[s], vmap[u]))
    q = Quiver(tuple(sorted(vmap.values())), tuple(arrows))

    terms = []
    for k, tri in enumerate(t.triangles):
        if all(t.kind_of(s) == "arc" for s in tri):
            cycle = tuple(arrow_of[(k, tri[p], tri[(p + 1) % 3])] for p in range(3))
            terms.append((Fraction(1), cycle))
    return QP(q, make_potential(q, terms))


def normalized_triangles(t: Triangulation) -> tuple[tuple[str, str, str], ...]:
    """Triples rotated lex-smallest-first and sorted; rotation preserves the
    stored orientation, so this is the right equality normal form."""

    def rot(tri):
        k = tri.index(min(tri))
        return tri[k:] + tri[:k]

    return tuple(sorted(rot(tri) for tri in t.triangles))


def same_triangulation(t1: Triangulation, t2: Triangulation) -> bool:
    return set(t1.sides) == set(t2.sides) and normalized_triangles(
        t1
    ) == normalized_triangles(t2)


def flip(t: Triangulation, arc: str) -> Triangulation:
    """Replace the arc by the other diagonal of the quadrilateral formed by
    its two triangles; everything else is untouched."""
    if t.kind_of(arc) != "arc":
        raise BoundarySide(f"side {arc!r} is a boundary segment, not flippable")
    hits = [k for k, tri in enumerate(t.triangles) if arc in tri]
    assert len(hits) == 2, "validation guarantees two triangles per arc"
    k1, k2 = hits

    def rotated(tri):
        p = tri.index(arc)
        return tri[p:] + tri[:p]

    _, x, y = rotated(t.triangles[k1])
    _, z, w = rotated(t.triangles[k2])
    if len({x, y, z, w}) != 4:
        raise SelfFoldedConfiguration(
            f"the two triangles at {arc!r} do not form an embedded quadrilateral"
        )
    new_tris = list(t.triangles)
    new_tris[k1] = (arc, y, z)
    new_tris[k2] = (arc, w, x)
    return Triangulation(t.sides, tuple(new_tris))
