"""Quivers (finite directed multigraphs), Fomin-Zelevinsky mutation,
exchange matrices, and canonical forms.

A quiver is immutable after construction; every operation returns a new
value.  Arrow ids are strings, vertex ids positive integers.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import (
    IndexOutOfRange,
    LoopOrTwoCyclePresent,
    MalformedInput,
    UnknownVertex,
)

CANONICAL_BRUTE_FORCE_LIMIT = 8


@dataclass(frozen=True)
class Arrow:
    id: str
    source: int
    target: int


@dataclass(frozen=True)
class Quiver:
    vertices: tuple[int, ...]
    arrows: tuple[Arrow, ...]

    def __post_init__(self):
        seen_v = set(self.vertices)
        if len(seen_v) != len(self.vertices):
            raise MalformedInput("duplicate vertex ids")
        ids = [a.id for a in self.arrows]
        if len(set(ids)) != len(ids):
            raise MalformedInput("duplicate arrow ids")
        for a in self.arrows:
            if a.source not in seen_v or a.target not in seen_v:
                raise MalformedInput(f"arrow {a.id} references unknown vertex")

    @staticmethod
    def build(vertices, arrows) -> Quiver:
        """Convenience constructor: arrows as (id, source, target) triples."""
        return Quiver(tuple(vertices), tuple(Arrow(str(i), s, t) for i, s, t in arrows))

    def arrow(self, arrow_id: str) -> Arrow:
        for a in self.arrows:
            if a.id == arrow_id:
                return a
        from .errors import UnknownArrow

        raise UnknownArrow(f"no arrow {arrow_id!r}")

    def arrow_map(self) -> dict[str, Arrow]:
        return {a.id: a for a in self.arrows}

    def arrows_from(self, v: int) -> list[Arrow]:
        return [a for a in self.arrows if a.source == v]

    def arrows_into(self, v: int) -> list[Arrow]:
        return [a for a in self.arrows if a.target == v]

    def has_loop(self) -> bool:
        return any(a.source == a.target for a in self.arrows)

    def loops_at(self, v: int) -> list[Arrow]:
        return [a for a in self.arrows if a.source == a.target == v]

    def has_two_cycle(self) -> bool:
        pairs = {(a.source, a.target) for a in self.arrows}
        return any((t, s) in pairs for s, t in pairs if s != t)

    def two_cycle_through(self, v: int) -> bool:
        pairs = {(a.source, a.target) for a in self.arrows}
        return any(
            (t, s) in pairs for s, t in pairs if v in (s, t) and s != t
        )

    def edge_multiset(self) -> dict[tuple[int, int], int]:
        counts: dict[tuple[int, int], int] = {}
        for a in self.arrows:
            counts[(a.source, a.target)] = counts.get((a.source, a.target), 0) + 1
        return counts


def same_shape(q1: Quiver, q2: Quiver) -> bool:
    """Equality as labeled multigraphs: same vertices, same arrow multiset
    by (source, target).  Arrow ids are ignored."""
    return set(q1.vertices) == set(q2.vertices) and q1.edge_multiset() == q2.edge_multiset()


def is_acyclic(q: Quiver) -> bool:
    """True iff the quiver has no directed cycle (loops count as cycles)."""
    out: dict[int, list[int]] = {v: [] for v in q.vertices}
    for a in q.arrows:
        out[a.source].append(a.target)
    WHITE, GRAY, BLACK = 0, 1, 2
    color = {v: WHITE for v in q.vertices}

    for root in q.vertices:
        if color[root] != WHITE:
            continue
        stack: list[tuple[int, int]] = [(root, 0)]
        color[root] = GRAY
        while stack:
            v, i = stack[-1]
            if i < len(out[v]):
                stack[-1] = (v, i + 1)
                w = out[v][i]
                if color[w] == GRAY:
                    return False
                if color[w] == WHITE:
                    color[w] = GRAY
                    stack.append((w, 0))
            else:
                color[v] = BLACK
                stack.pop()
    return True


def _renumber(vertices, tagged_arrows) -> Quiver:
    """Final renumbering pass: dense integer ids (as strings), sorted by
    (source, target, provenance string)."""
    ordered = sorted(tagged_arrows, key=lambda st: (st[1], st[2], st[0]))
    arrows = tuple(
        Arrow(str(k + 1), s, t) for k, (_prov, s, t) in enumerate(ordered)
    )
    return Quiver(tuple(vertices), arrows)


def fz_mutate(q: Quiver, i: int) -> Quiver:
    """Fomin-Zelevinsky mutation at vertex i.

    (M1) add j->k for every pair j->i->k, (M2) reverse arrows incident with
    i, (M3) cancel a maximal set of disjoint 2-cycles.  The input must be
    loop-free and 2-cycle-free; so is the output.  Fresh dense ids are
    assigned sorted by (source, target, provenance).
    """
    if i not in q.vertices:
        raise UnknownVertex(f"vertex {i} not in quiver")
    if q.has_loop() or q.has_two_cycle():
        raise LoopOrTwoCyclePresent("fz_mutate requires a loop-free, 2-cycle-free quiver")

    incoming = q.arrows_into(i)
    outgoing = q.arrows_from(i)

    # (prov, source, target) with provenance strings per the naming scheme
    tagged: list[tuple[str, int, int]] = []
    for a in q.arrows:
        if a.source == i or a.target == i:
            tagged.append((f"star({a.id})", a.target, a.source))
        else:
            tagged.append((a.id, a.source, a.target))
    for a in incoming:
        for b in outgoing:
            tagged.append((f"[{b.id}|{a.id}]", a.source, b.target))

    # (M3): cancel min(#j->k, #k->j) in each direction, lowest provenance first
    by_pair: dict[tuple[int, int], list[tuple[str, int, int]]] = {}
    for t in tagged:
        by_pair.setdefault((t[1], t[2]), []).append(t)
    for lst in by_pair.values():
        lst.sort()
    kept: list[tuple[str, int, int]] = []
    done: set[tuple[int, int]] = set()
    for (s, t), lst in by_pair.items():
        if (s, t) in done:
            continue
        rev = by_pair.get((t, s), []) if s != t else []
        k = min(len(lst), len(rev))
        kept.extend(lst[k:])
        kept.extend(rev[k:])
        done.add((s, t))
        done.add((t, s))

    out = _renumber(q.vertices, kept)
    assert not out.has_loop() and not out.has_two_cycle()
    return out


@dataclass(frozen=True)
class ExchangeMatrix:
    """Skew-symmetric integer matrix B with B[j][k] = #(j->k) - #(k->j),
    together with the vertex ordering it was built from."""

    matrix: tuple[tuple[int, ...], ...]
    vertex_order: tuple[int, ...]

    def __post_init__(self):
        n = len(self.matrix)
        if len(self.vertex_order) != n or any(len(row) != n for row in self.matrix):
            raise MalformedInput("matrix shape does not match vertex order")
        for j in range(n):
            for k in range(n):
                if self.matrix[j][k] != -self.matrix[k][j]:
                    raise MalformedInput("matrix is not skew-symmetric")


def to_exchange_matrix(q: Quiver) -> ExchangeMatrix:
    if q.has_loop() or q.has_two_cycle():
        raise LoopOrTwoCyclePresent("exchange matrix is only defined without loops and 2-cycles")
    order = tuple(q.vertices)
    idx = {v: n for n, v in enumerate(order)}
    n = len(order)
    m = [[0] * n for _ in range(n)]
    for a in q.arrows:
        m[idx[a.source]][idx[a.target]] += 1
        m[idx[a.target]][idx[a.source]] -= 1
    return ExchangeMatrix(tuple(tuple(row) for row in m), order)


def quiver_from_matrix(b: ExchangeMatrix) -> Quiver:
    """Inverse of to_exchange_matrix up to arrow naming."""
    arrows = []
    n = len(b.vertex_order)
    k = 0
    for r in range(n):
        for c in range(n):
            for _ in range(max(0, b.matrix[r][c])):
                k += 1
                arrows.append(Arrow(str(k), b.vertex_order[r], b.vertex_order[c]))
    return Quiver(b.vertex_order, tuple(arrows))


def fz_mutate_matrix(b: ExchangeMatrix, i: int) -> ExchangeMatrix:
    """Matrix form of M1-M3:
    B'[j][k] = -B[j][k] if i in {j,k},
    else B[j][k] + sgn(B[j][i]) * max(0, B[j][i]*B[i][k])."""
    if i not in b.vertex_order:
        raise IndexOutOfRange(f"vertex {i} not in matrix ordering")
    p = b.vertex_order.index(i)
    n = len(b.vertex_order)
    m = b.matrix
    out = [[0] * n for _ in range(n)]
    for j in range(n):
        for k in range(n):
            if j == p or k == p:
                out[j][k] = -m[j][k]
            else:
                sgn = (m[j][p] > 0) - (m[j][p] < 0)
                out[j][k] = m[j][k] + sgn * max(0, m[j][p] * m[p][k])
    return ExchangeMatrix(tuple(tuple(row) for row in out), b.vertex_order)


def _encode(n: int, edges: list[tuple[int, int]]) -> bytes:
    body = ";".join(f"{s}>{t}" for s, t in sorted(edges))
    return f"V{n}|{body}".encode()


def _degree_partition(q: Quiver, idx: dict[int, int]) -> list[int]:
    """Iteratively refined in/out degree colouring (1-WL on the multigraph).
    Returns a colour per vertex position; isomorphism-invariant."""
    n = len(q.vertices)
    edges = [(idx[a.source], idx[a.target]) for a in q.arrows]
    color = [0] * n
    for _ in range(n):
        sig: list[tuple] = [((), ()) for _ in range(n)]
        outs: list[list[int]] = [[] for _ in range(n)]
        ins: list[list[int]] = [[] for _ in range(n)]
        for s, t in edges:
            outs[s].append(color[t])
            ins[t].append(color[s])
        sigs = [
            (color[v], tuple(sorted(outs[v])), tuple(sorted(ins[v]))) for v in range(n)
        ]
        ranking = {s: r for r, s in enumerate(sorted(set(sigs)))}
        new = [ranking[s] for s in sigs]
        if new == color:
            break
        color = new
    return color


def canonical_form(q: Quiver) -> bytes:
    """Canonical key equal for two quivers iff they are isomorphic directed
    multigraphs.  Brute-force minimum over vertex permutations for small
    quivers; colour-partition-restricted backtracking above that."""
    n = len(q.vertices)
    idx = {v: k for k, v in enumerate(sorted(q.vertices))}
    edges = [(idx[a.source], idx[a.target]) for a in q.arrows]

    if n <= CANONICAL_BRUTE_FORCE_LIMIT:
        perms = itertools.permutations(range(n))
    else:
        color = _degree_partition(q, idx)
        groups: dict[int, list[int]] = {}
        for v, c in enumerate(color):
            groups.setdefault(c, []).append(v)
        # positions are assigned class-contiguously: vertices of equal colour
        # may land anywhere inside their class's slot range
        ordered_classes = [groups[c] for c in sorted(groups)]
        slots: list[list[int]] = []
        start = 0
        for cls in ordered_classes:
            slots.append(list(range(start, start + len(cls))))
            start += len(cls)

        def gen():
            def rec(ci: int, acc: dict[int, int]):
                if ci == len(ordered_classes):
                    yield tuple(acc[v] for v in range(n))
                    return
                cls, slot = ordered_classes[ci], slots[ci]
                for assignment in itertools.permutations(slot):
                    for v, p in zip(cls, assignment):
                        acc[v] = p
                    yield from rec(ci + 1, acc)

            yield from rec(0, {})

        perms = gen()

    best: bytes | None = None
    for perm in perms:
        enc = _encode(n, [(perm[s], perm[t]) for s, t in edges])
        if best is None or enc < best:
            best = enc
    assert best is not None
    return best


def is_isomorphic(q1: Quiver, q2: Quiver) -> bool:
    return canonical_form(q1) == canonical_form(q2)
