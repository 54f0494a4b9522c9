"""Acceptance suite: one test per shipped criterion, each printing a
PASS/FAIL line so a plain `pytest -s tests/test_acceptance.py` reads as a
checklist.  Tolerances are exact: everything here is integer or rational
arithmetic, so equality is equality.
"""

import io
import json
import random
import sys
import threading
import urllib.request
from contextlib import contextmanager
from fractions import Fraction

import pytest

from conftest import random_loopfree_quiver
from oracles import (
    dense_quotient_dimension,
    polygon_triangulations,
    triangulation_shape_key,
)
from qpmut import jsonio
from qpmut.cli import run as cli_run
from qpmut.explore import (
    acyclic_cluster_type,
    graded_equivalence_search,
    mutation_class,
)
from qpmut.graded import (
    PresentedAlgebra,
    algebra_from_cut,
    graded_iso,
    left_mutate,
    make_graded,
    qp_from_algebra,
    qp_iso,
    right_mutate,
)
from qpmut.paths import (
    build_preprojective,
    cycle_classes_up_to,
    cyclic_derivative,
    make_element,
    truncated_quotient_dimension,
)
from qpmut.qp import QP, dwz_mutate, is_rigid, jacobi_finite, premutate, reduce_qp
from qpmut.quiver import Quiver, fz_mutate, is_isomorphic, same_shape
from qpmut.service import make_server
from qpmut.surface import flip, quiver_from_triangulation


@contextmanager
def criterion(name):
    try:
        yield
    except BaseException:
        print(f"ACCEPTANCE FAIL  {name}")
        raise
    print(f"ACCEPTANCE PASS  {name}")


def edges(q):
    return sorted((a.source, a.target) for a in q.arrows)


# ---------------------------------------------------------------------------


def test_mutation_golden_chain_and_involution(a3_quiver):
    with criterion("quiver mutation golden chain + involution on 10000 random quivers"):
        q1 = fz_mutate(a3_quiver, 2)
        q2 = fz_mutate(q1, 1)
        q3 = fz_mutate(q2, 3)
        assert edges(q1) == [(1, 3), (2, 1), (3, 2)]
        assert edges(q2) == [(1, 2), (3, 1)]
        assert edges(q3) == [(1, 2), (1, 3)]

        rng = random.Random(20240)
        checked = 0
        while checked < 10_000:
            q = random_loopfree_quiver(rng, max_vertices=6, max_parallel=3, density=0.4)
            if q.has_two_cycle():
                continue
            v = rng.choice(q.vertices)
            assert same_shape(fz_mutate(fz_mutate(q, v), v), q)
            checked += 1


def test_dwz_worked_example_golden(four_vertex_qp):
    with criterion("worked 4-vertex QP mutation golden (premutation and reduced)"):
        pre = premutate(four_vertex_qp, 3)
        rename = {"a": "a", "[d|c]": "[dc]", "[d|b]": "[db]", "star(b)": "b*",
                  "star(c)": "c*", "star(d)": "d*", "e": "e"}
        got_arrows = sorted((rename[a.id], a.source, a.target) for a in pre.quiver.arrows)
        assert got_arrows == [
            ("[db]", 2, 4), ("[dc]", 1, 4), ("a", 1, 2), ("b*", 3, 2),
            ("c*", 3, 1), ("d*", 4, 3), ("e", 4, 1),
        ]
        got_cycles = {
            tuple(sorted(rename[x] for x in c)): co for c, co in pre.potential.terms
        }
        # e[dc] + d*[dc]c* + d*[db]b*, compared as cycle-arrow sets
        assert got_cycles == {
            ("[dc]", "e"): Fraction(1),
            ("[dc]", "c*", "d*"): Fraction(1),
            ("[db]", "b*", "d*"): Fraction(1),
        }

        red, report = reduce_qp(pre)
        assert sorted((rename[a.id], a.source, a.target) for a in red.quiver.arrows) == [
            ("[db]", 2, 4), ("a", 1, 2), ("b*", 3, 2), ("c*", 3, 1), ("d*", 4, 3),
        ]
        assert [tuple(rename[x] for x in c) for c, _ in red.potential.terms] == [
            ("[db]", "d*", "b*")
        ]
        assert report.eliminated == (("[d|c]", "e"),)


def test_jacobian_dimensions_against_oracle(a3_quiver, three_cycle_qp):
    with criterion("Jacobian dimensions 6 / 10 / 3 vs brute-force oracle"):
        res = jacobi_finite(three_cycle_qp, 3)
        gens = [
            cyclic_derivative(three_cycle_qp.quiver, three_cycle_qp.potential, x)
            for x in "abc"
        ]
        assert res.finite and res.dim == 6
        assert dense_quotient_dimension(three_cycle_qp.quiver, gens, 3) == 6

        dq, rels = build_preprojective(a3_quiver)
        res = truncated_quotient_dimension(dq, rels, 6)
        assert res.finite and res.dim == 10
        assert dense_quotient_dimension(dq, rels, 6) == 10

        a2 = Quiver.build([1, 2], [("a", 1, 2)])
        res = jacobi_finite(QP.build(a2, []), 2)
        assert res.finite and res.dim == 3
        assert dense_quotient_dimension(a2, [], 2) == 3


def _random_qp(rng) -> QP:
    n = rng.randint(2, 4)
    vertices = list(range(1, n + 1))
    arrows = []
    k = 0
    for s in vertices:
        for t in vertices:
            if s == t or k >= 6:
                continue
            if rng.random() < 0.6:
                for _ in range(rng.randint(1, 2)):
                    k += 1
                    arrows.append((f"x{k}", s, t))
    q = Quiver.build(vertices, arrows)
    terms = [
        (Fraction(rng.choice([-2, -1, 1, 2])), c)
        for c in cycle_classes_up_to(q, 3)
        if rng.random() < 0.8
    ]
    return QP.build(q, terms, truncation=10)


def test_reduction_preserves_dimension_and_double_mutation():
    with criterion("reduce preserves Jacobian dim + double mutation involution, 1000 QPs"):
        rng = random.Random(77)
        bound = 6
        accepted = skipped_second = 0
        while accepted < 1000:
            qp = _random_qp(rng)
            d0 = jacobi_finite(qp, bound)
            if not d0.finite:
                continue
            accepted += 1
            red, _ = reduce_qp(qp)
            d1 = jacobi_finite(red, bound)
            assert d1.finite and d1.dim == d0.dim

            legal = [
                v for v in red.quiver.vertices
                if not red.quiver.two_cycle_through(v) and not red.quiver.loops_at(v)
            ]
            if not legal:
                continue
            v = rng.choice(legal)
            once = dwz_mutate(red, v)
            if once.quiver.two_cycle_through(v):
                skipped_second += 1  # degenerate potential: vertex not remutable
                continue
            twice = dwz_mutate(once, v)
            assert is_isomorphic(twice.quiver, red.quiver)
            d2 = jacobi_finite(twice, bound)
            assert d2.finite and d2.dim == d0.dim
        assert skipped_second < accepted // 10


def _random_presented_algebra(rng) -> PresentedAlgebra:
    n = rng.randint(3, 5)
    vertices = list(range(1, n + 1))
    arrows = []
    k = 0
    for s in vertices:
        for t in vertices:
            if s >= t or rng.random() > 0.6:
                continue
            for _ in range(rng.randint(1, 2)):
                k += 1
                arrows.append((f"x{k}", s, t))
    q = Quiver.build(vertices, arrows)
    paths_by_ends = {}
    for a1 in q.arrows:
        for a2 in q.arrows:
            if a1.target == a2.source:
                paths_by_ends.setdefault((a1.source, a2.target), []).append((a1.id, a2.id))
    relations = []
    for ends, paths in sorted(paths_by_ends.items()):
        if rng.random() < 0.5:
            continue
        terms = [
            (Fraction(rng.choice([-2, -1, 1, 2, 3])), p)
            for p in paths
            if rng.random() < 0.7
        ]
        if terms:
            relations.append(make_element(q, ends[0], ends[1], terms))
    return PresentedAlgebra(q, tuple(relations))


def test_algebra_round_trip(triangle_algebra):
    with criterion("presented-algebra round trip on the triangle + 1000 random algebras"):
        assert algebra_from_cut(qp_from_algebra(triangle_algebra)) == triangle_algebra
        rng = random.Random(99)
        for _ in range(1000):
            alg = _random_presented_algebra(rng)
            back = algebra_from_cut(qp_from_algebra(alg))
            assert back.quiver == alg.quiver
            assert sorted(r.terms for r in back.relations) == sorted(
                r.terms for r in alg.relations
            )


def test_graded_goldens_and_search(triangle_graded):
    with criterion("graded mutation degree goldens + search connects displayed trio"):
        out = left_mutate(triangle_graded, 2)
        shapes = sorted(
            ((a.source, a.target), out.degree_map()[a.id]) for a in out.qp.quiver.arrows
        )
        assert shapes == [((1, 2), 0), ((1, 3), 0), ((2, 3), 1)]
        assert out.qp.potential.is_zero()

        tri = Quiver.build([1, 2, 3], [("p", 1, 2), ("q", 2, 3), ("s", 1, 3)])
        g1 = make_graded(QP.build(tri, []), {"p": 0, "q": 0, "s": 0})
        g2 = right_mutate(g1, 2)
        d2 = sorted(((a.source, a.target), g2.degree_map()[a.id]) for a in g2.qp.quiver.arrows)
        assert d2 == [((1, 3), 0), ((1, 3), 0), ((2, 1), 0), ((3, 2), 1)]
        g3 = left_mutate(g1, 2)
        d3 = sorted(((a.source, a.target), g3.degree_map()[a.id]) for a in g3.qp.quiver.arrows)
        assert d3 == [((1, 3), 0), ((1, 3), 0), ((2, 1), 1), ((3, 2), 0)]

        pairs = [(g1, g2), (g2, g3), (g1, g3)]
        for a, b in pairs:
            res = graded_equivalence_search(a, b, max_depth=4)
            assert res.found and len(res.sequence) <= 2
            # homogeneity of every intermediate state along the witness
            state = a
            for side, v in res.sequence:
                state = left_mutate(state, v) if side == "L" else right_mutate(state, v)
                dmap = state.degree_map()
                for cycle, _ in state.qp.potential.terms:
                    assert sum(dmap[x] for x in cycle) == 1
            assert graded_iso(state, b)


def test_cluster_type_certification(triangle_graded, markov_qp):
    with criterion("acyclic-cluster-type: triangle certified, torus QP refused"):
        cert = acyclic_cluster_type(triangle_graded, rigidity_bound=6)
        assert cert.certified
        assert cert.mutation_path == (2,)
        assert cert.rigidity.status == "certified_rigid"
        assert sorted(cert.type_quiver.edge_multiset()) == [(1, 2), (1, 3), (2, 3)]

        refused = acyclic_cluster_type(markov_qp, rigidity_bound=8,
                                       max_quivers=300, max_depth=8)
        assert not refused.certified
        assert is_rigid(markov_qp, 8).status == "not_rigid"


def test_surface_commutation(hexagon_fan):
    with criterion("flip/mutation commutation on all pentagon and hexagon triangulations"):
        pent = polygon_triangulations(5)
        hexa = polygon_triangulations(6)
        assert len({triangulation_shape_key(t) for t in pent}) == 5
        assert len({triangulation_shape_key(t) for t in hexa}) == 14
        for t in pent + hexa:
            qp = quiver_from_triangulation(t)
            vmap = dict(zip(sorted(t.arcs()), sorted(qp.quiver.vertices)))
            for arc in t.arcs():
                flipped = quiver_from_triangulation(flip(t, arc))
                assert qp_iso(dwz_mutate(qp, vmap[arc]), flipped)

        fan_qp = quiver_from_triangulation(hexagon_fan)
        assert edges(fan_qp.quiver) == [(1, 2), (2, 3)]
        assert fan_qp.potential.is_zero()


def test_mutation_classes(a3_quiver, markov_quiver):
    with criterion("mutation classes: A3 has 4 isomorphism classes, torus quiver 1"):
        mc = mutation_class(a3_quiver)
        assert len(mc.members) == 4 and not mc.truncated
        assert len(mutation_class(markov_quiver).members) == 1


def _cli(argv, payload):
    stdin = sys.stdin
    sys.stdin = io.StringIO(json.dumps(payload))
    out = io.StringIO()
    try:
        code = cli_run(argv, stdout=out, stderr=io.StringIO())
    finally:
        sys.stdin = stdin
    assert code == 0, argv
    return out.getvalue().strip()


def _http(base, method, path, body=None):
    data = json.dumps(body).encode() if body is not None else None
    req = urllib.request.Request(base + path, data=data, method=method)
    with urllib.request.urlopen(req) as resp:
        return json.loads(resp.read())


def test_cli_service_parity(a3_quiver, four_vertex_qp, triangle_graded, hexagon_fan):
    with criterion("CLI and HTTP sessions agree byte-for-byte on every golden"):
        server = make_server(0)
        thread = threading.Thread(target=server.serve_forever, daemon=True)
        thread.start()
        base = "http://%s:%s" % server.server_address
        try:
            goldens = [
                (jsonio.quiver_to_json(a3_quiver),
                 ["mutate", "--kind", "fz", "--vertex", "2"],
                 {"kind": "fz", "vertex": 2}),
                (jsonio.qp_to_json(four_vertex_qp),
                 ["mutate", "--kind", "dwz", "--vertex", "3"],
                 {"kind": "dwz", "vertex": 3}),
                (jsonio.graded_to_json(triangle_graded),
                 ["mutate", "--kind", "left", "--vertex", "2"],
                 {"kind": "left", "vertex": 2}),
                (jsonio.graded_to_json(right_mutate(triangle_graded, 2)),
                 ["mutate", "--kind", "right", "--vertex", "1"],
                 {"kind": "right", "vertex": 1}),
                (jsonio.triangulation_to_json(hexagon_fan),
                 ["flip", "--arc", "2"],
                 {"kind": "flip", "arc": "2"}),
            ]
            for payload, argv, mutate_body in goldens:
                via_cli = _cli(argv, payload)
                view = _http(base, "POST", "/sessions", payload)
                out = _http(base, "POST", f"/sessions/{view['id']}/mutate", mutate_body)
                via_http = jsonio.canonical_bytes(out["state"]).decode()
                assert via_cli == via_http, argv

            qp_json = {
                "vertices": [1, 2, 3],
                "arrows": [
                    {"id": "a", "source": 2, "target": 1},
                    {"id": "b", "source": 3, "target": 2},
                    {"id": "c", "source": 1, "target": 3},
                ],
                "potential": [{"coeff": "1", "cycle": ["c", "b", "a"]}],
            }
            dim_cli = json.loads(_cli(["jacobian-dim", "--bound", "3"], qp_json))
            rig_cli = json.loads(_cli(["rigid", "--bound", "4"], qp_json))
            view = _http(base, "POST", "/sessions", qp_json)
            analysis = _http(base, "GET", f"/sessions/{view['id']}/analysis?bound=4")
            assert analysis["jacobian"]["dim"] == dim_cli["dim"]
            assert analysis["rigidity"]["status"] == rig_cli["status"]
        finally:
            server.shutdown()
            server.server_close()
