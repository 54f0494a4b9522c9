"""Search layer: mutation-class enumeration, mutation-acyclicity,
acyclic-cluster-type certification, and bounded graded-mutation
equivalence search.

All searches are budgeted breadth-first explorations deduplicated by
canonical keys; a negative answer always means "not found within budget",
never a claim of non-existence.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .errors import PreconditionError
from .graded import (
    GradedQP,
    graded_iso,
    graded_state_key,
    left_mutate,
    right_mutate,
)
from .qp import QP, RigidityResult, is_rigid
from .quiver import Quiver, canonical_form, fz_mutate, is_acyclic

DEFAULT_MAX_QUIVERS = 50_000
DEFAULT_MAX_DEPTH = 32


def _labeled_key(q: Quiver) -> bytes:
    edges = sorted((a.source, a.target) for a in q.arrows)
    verts = ",".join(map(str, sorted(q.vertices)))
    body = ";".join(f"{s}>{t}" for s, t in edges)
    return f"L[{verts}]{body}".encode()


@dataclass
class MutationClass:
    members: dict[str, Quiver]
    edges: list[tuple[str, int, str]]
    truncated: bool
    depth_reached: int
    up_to_iso: bool


def _quiver_json(q: Quiver) -> dict:
    return {
        "vertices": sorted(q.vertices),
        "arrows": [
            {"id": a.id, "source": a.source, "target": a.target}
            for a in sorted(q.arrows, key=lambda a: a.id)
        ],
    }


def _quiver_from_json(obj: dict) -> Quiver:
    from .quiver import Arrow

    return Quiver(
        tuple(obj["vertices"]),
        tuple(Arrow(a["id"], a["source"], a["target"]) for a in obj["arrows"]),
    )


def mutation_class(
    q: Quiver,
    max_quivers: int = DEFAULT_MAX_QUIVERS,
    max_depth: int = DEFAULT_MAX_DEPTH,
    up_to_iso: bool = True,
    dump_path: str | Path | None = None,
) -> MutationClass:
    """BFS closure of FZ mutation at every vertex, deduplicated either up to
    isomorphism (default) or on labeled quivers.

    With `dump_path`, every expanded member streams to newline-delimited
    JSON; an existing dump is loaded first so interrupted runs resume.
    """
    keyf = (lambda x: canonical_form(x).hex()) if up_to_iso else (
        lambda x: _labeled_key(x).hex()
    )

    members: dict[str, Quiver] = {}
    expanded: set[str] = set()
    edges: list[tuple[str, int, str]] = []
    queue: list[tuple[str, Quiver, int]] = []
    out = None

    if dump_path is not None and Path(dump_path).exists():
        with open(dump_path) as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                rec = json.loads(line)
                quiver = _quiver_from_json(rec["quiver"])
                members[rec["key"]] = quiver
                expanded.add(rec["key"])
                edges.extend((rec["key"], v, k2) for v, k2 in rec["edges"])
        for key, quiver in list(members.items()):
            for v in quiver.vertices:
                nbr = fz_mutate(quiver, v)
                nk = keyf(nbr)
                if nk not in members:
                    members[nk] = nbr
                    queue.append((nk, nbr, 1))

    if not members:
        k0 = keyf(q)
        members[k0] = q
        queue.append((k0, q, 0))

    if dump_path is not None:
        out = open(dump_path, "a")

    truncated = False
    depth_reached = 0
    try:
        head = 0
        while head < len(queue):
            key, quiver, depth = queue[head]
            head += 1
            if key in expanded:
                continue
            depth_reached = max(depth_reached, depth)
            if depth >= max_depth:
                truncated = True
                continue
            my_edges = []
            for v in quiver.vertices:
                nbr = fz_mutate(quiver, v)
                nk = keyf(nbr)
                my_edges.append((v, nk))
                edges.append((key, v, nk))
                if nk not in members:
                    if len(members) >= max_quivers:
                        truncated = True
                        continue
                    members[nk] = nbr
                    queue.append((nk, nbr, depth + 1))
            expanded.add(key)
            if out is not None:
                out.write(
                    json.dumps(
                        {"key": key, "quiver": _quiver_json(quiver), "edges": my_edges},
                        sort_keys=True,
                    )
                    + "\n"
                )
    finally:
        if out is not None:
            out.close()
    return MutationClass(members, edges, truncated, depth_reached, up_to_iso)


@dataclass(frozen=True)
class AcyclicSearch:
    found: bool
    quiver: Quiver | None
    path: tuple[int, ...]
    depth: int
    states: int


def is_mutation_acyclic(
    q: Quiver,
    max_quivers: int = DEFAULT_MAX_QUIVERS,
    max_depth: int = DEFAULT_MAX_DEPTH,
) -> AcyclicSearch:
    """BFS over FZ mutation with early exit on the first acyclic quiver."""
    if is_acyclic(q):
        return AcyclicSearch(True, q, (), 0, 1)
    visited = {canonical_form(q).hex()}
    queue: list[tuple[Quiver, tuple[int, ...]]] = [(q, ())]
    head = 0
    while head < len(queue):
        quiver, path = queue[head]
        head += 1
        if len(path) >= max_depth:
            continue
        for v in quiver.vertices:
            nbr = fz_mutate(quiver, v)
            nk = canonical_form(nbr).hex()
            if nk in visited:
                continue
            if is_acyclic(nbr):
                return AcyclicSearch(True, nbr, path + (v,), len(path) + 1, len(visited) + 1)
            visited.add(nk)
            if len(visited) <= max_quivers:
                queue.append((nbr, path + (v,)))
    return AcyclicSearch(False, None, (), max_depth, len(visited))


@dataclass(frozen=True)
class Certification:
    certified: bool
    type_quiver: Quiver | None = None
    mutation_path: tuple[int, ...] = ()
    rigidity: RigidityResult | None = None
    reason: str | None = None


def acyclic_cluster_type(
    g: GradedQP | QP,
    rigidity_bound: int = 8,
    max_quivers: int = DEFAULT_MAX_QUIVERS,
    max_depth: int = DEFAULT_MAX_DEPTH,
) -> Certification:
    """Certified iff the quiver is mutation-acyclic within budget and the
    potential is certified rigid at the bound; the acyclic quiver found is
    reported as the type."""
    qp = g.qp if isinstance(g, GradedQP) else g
    hunt = is_mutation_acyclic(qp.quiver, max_quivers, max_depth)
    if not hunt.found:
        return Certification(
            False, reason=f"no acyclic quiver within budget ({hunt.states} classes seen)"
        )
    rig = is_rigid(qp, rigidity_bound)
    if rig.status == "certified_rigid":
        return Certification(True, hunt.quiver, hunt.path, rig)
    if rig.status == "not_rigid":
        return Certification(False, hunt.quiver, hunt.path, rig,
                             reason=f"potential not rigid, witness cycle {rig.witness}")
    return Certification(False, hunt.quiver, hunt.path, rig,
                         reason=f"rigidity unknown at bound {rig.bound}")


@dataclass(frozen=True)
class SearchOutcome:
    found: bool
    sequence: tuple[tuple[str, int], ...]
    depth: int
    states: int


_INV = {"L": "R", "R": "L"}


def _graded_moves(g: GradedQP):
    for v in g.qp.quiver.vertices:
        if g.qp.quiver.two_cycle_through(v) or g.qp.quiver.loops_at(v):
            continue
        for side in ("L", "R"):
            try:
                yield (side, v), (left_mutate if side == "L" else right_mutate)(g, v)
            except PreconditionError:
                continue


def replay(g: GradedQP, sequence) -> GradedQP:
    for side, v in sequence:
        g = left_mutate(g, v) if side == "L" else right_mutate(g, v)
    return g


def graded_equivalence_search(
    g1: GradedQP,
    g2: GradedQP,
    max_depth: int = 8,
    max_states: int = DEFAULT_MAX_QUIVERS,
) -> SearchOutcome:
    """Bidirectional BFS over left/right mutations at all vertices.

    States dedup on the vertex-label-preserving graded key; goal tests use
    full graded isomorphism.  Every candidate sequence is validated by
    replay from g1 before being returned, so a Found outcome is always a
    genuine witness; not finding one within budget never claims
    non-equivalence.
    """
    if graded_iso(g1, g2):
        return SearchOutcome(True, (), 0, 2)

    fwd: dict[bytes, tuple[GradedQP, tuple]] = {graded_state_key(g1): (g1, ())}
    bwd: dict[bytes, tuple[GradedQP, tuple]] = {graded_state_key(g2): (g2, ())}
    fwd_frontier = list(fwd)
    bwd_frontier = list(bwd)
    fwd_depth = bwd_depth = 0

    def invert(bpath) -> tuple:
        return tuple((_INV[s], v) for s, v in reversed(bpath))

    def validated(seq) -> SearchOutcome | None:
        if graded_iso(replay(g1, seq), g2):
            return SearchOutcome(True, tuple(seq), len(seq), len(fwd) + len(bwd))
        return None

    while fwd_frontier or bwd_frontier:
        if fwd_depth + bwd_depth >= max_depth:
            break
        if len(fwd) + len(bwd) > max_states:
            break
        expand_fwd = bool(fwd_frontier) and (
            not bwd_frontier or len(fwd_frontier) <= len(bwd_frontier)
        )
        ours, theirs = (fwd, bwd) if expand_fwd else (bwd, fwd)
        frontier = fwd_frontier if expand_fwd else bwd_frontier
        goal = g2 if expand_fwd else g1
        nxt = []
        for key in frontier:
            g, path = ours[key]
            for move, h in _graded_moves(g):
                hk = graded_state_key(h)
                if hk in ours:
                    continue
                ours[hk] = (h, path + (move,))
                nxt.append(hk)
                if graded_iso(h, goal):
                    seq = (path + (move,)) if expand_fwd else invert(path + (move,))
                    hit = validated(seq)
                    if hit:
                        return hit
                if hk in theirs:
                    fpath, bpath = (
                        (ours[hk][1], theirs[hk][1])
                        if expand_fwd
                        else (theirs[hk][1], ours[hk][1])
                    )
                    hit = validated(tuple(fpath) + invert(bpath))
                    if hit:
                        return hit
        if expand_fwd:
            fwd_frontier = nxt
            fwd_depth += 1
        else:
            bwd_frontier = nxt
            bwd_depth += 1

    return SearchOutcome(False, (), max_depth, len(fwd) + len(bwd))
