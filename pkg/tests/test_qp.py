import random
from fractions import Fraction

import pytest

from conftest import random_loopfree_quiver
from qpmut.errors import LoopAtVertex, TwoCycleAtVertex
from qpmut.paths import display
from qpmut.qp import (
    QP,
    dwz_mutate,
    is_rigid,
    jacobi_finite,
    premutate,
    reduce_qp,
)
from qpmut.quiver import Quiver, fz_mutate, is_isomorphic, same_shape

MARKOV_DIM = 36  # frozen from this engine's first certified run at bound 8


def arrow_set(q):
    return sorted((a.id, a.source, a.target) for a in q.arrows)


class TestPremutate:
    def test_worked_four_vertex_example(self, four_vertex_qp):
        pre = premutate(four_vertex_qp, 3)
        assert arrow_set(pre.quiver) == [
            ("[d|b]", 2, 4),
            ("[d|c]", 1, 4),
            ("a", 1, 2),
            ("e", 4, 1),
            ("star(b)", 3, 2),
            ("star(c)", 3, 1),
            ("star(d)", 4, 3),
        ]
        cycles = {c: coeff for c, coeff in pre.potential.terms}
        # e[dc] + d*[dc]c* + d*[db]b*, stored rotation-normalized
        assert cycles == {
            ("[d|c]", "e"): Fraction(1),
            ("[d|c]", "star(d)", "star(c)"): Fraction(1),
            ("[d|b]", "star(d)", "star(b)"): Fraction(1),
        }

    def test_acyclic_delta_only(self, a3_quiver):
        qp = QP.build(a3_quiver, [])
        pre = premutate(qp, 2)
        assert arrow_set(pre.quiver) == [
            ("[b|a]", 1, 3),
            ("star(a)", 2, 1),
            ("star(b)", 3, 2),
        ]
        assert [(display(c), co) for c, co in pre.potential.terms] == [
            ("star(a)star(b)[b|a]", Fraction(1))
        ]

    def test_isolated_vertex(self):
        q = Quiver.build([1, 2, 3], [("a", 1, 2)])
        qp = QP.build(q, [])
        pre = premutate(qp, 3)
        assert pre.quiver == q and pre.potential.is_zero()

    def test_rejects_two_cycle_at_vertex(self):
        q = Quiver.build([1, 2, 3], [("a", 1, 2), ("b", 2, 1), ("c", 2, 3)])
        qp = QP.build(q, [])
        with pytest.raises(TwoCycleAtVertex):
            premutate(qp, 1)
        # but a vertex away from the 2-cycle is fine
        premutate(qp, 3)

    def test_rejects_loops(self):
        q = Quiver.build([1, 2], [("a", 1, 1), ("b", 1, 2)])
        with pytest.raises(LoopAtVertex):
            premutate(QP.build(q, []), 2)

    def test_cycle_through_vertex_twice(self):
        q = Quiver.build(
            [1, 2, 3, 4, 5],
            [("a", 1, 2), ("b", 2, 3), ("c", 3, 4), ("d", 4, 2), ("e", 2, 5), ("f", 5, 1)],
        )
        qp = QP.build(q, [(1, ("a", "b", "c", "d", "e", "f"))])
        pre = premutate(qp, 2)
        cycles = {c for c, _ in pre.potential.terms}
        # both passages through 2 are fused into composites
        from qpmut.paths import normalize_cycle

        assert normalize_cycle(("[b|a]", "c", "[e|d]", "f")) in cycles
        assert len(cycles) == 1 + 4  # rewritten term + one delta per in/out pair

    def test_term_count_preserved_through_rewriting(self, markov_qp):
        pre = premutate(markov_qp, 1)
        total_in = sum(co for _, co in markov_qp.potential.terms)
        rewritten = [
            (c, co) for c, co in pre.potential.terms if not any(x.startswith("star(") for x in c)
        ]
        assert sum(co for _, co in rewritten) == total_in


class TestReduce:
    def test_worked_four_vertex_example(self, four_vertex_qp):
        red, report = reduce_qp(premutate(four_vertex_qp, 3))
        assert arrow_set(red.quiver) == [
            ("[d|b]", 2, 4),
            ("a", 1, 2),
            ("star(b)", 3, 2),
            ("star(c)", 3, 1),
            ("star(d)", 4, 3),
        ]
        assert red.potential.terms == (
            (("[d|b]", "star(d)", "star(b)"), Fraction(1)),
        )
        assert report.eliminated == (("[d|c]", "e"),)
        assert not report.lost
        # the paper's right equivalence replaces e by -c*d*: check the log
        subs = dict(report.substitutions)
        assert subs["e"].as_dict() == {
            ("e",): Fraction(1),
            ("star(d)", "star(c)"): Fraction(-1),
        }

    def test_idempotent_on_reduced(self, three_cycle_qp):
        red, report = reduce_qp(three_cycle_qp)
        assert red == three_cycle_qp
        assert report.eliminated == () and report.substitutions == ()

    def test_pure_two_cycle(self):
        q = Quiver.build([1, 2], [("a", 1, 2), ("b", 2, 1)])
        qp = QP.build(q, [(1, ("a", "b"))])
        red, report = reduce_qp(qp)
        assert red.quiver.arrows == () and red.potential.is_zero()
        assert report.eliminated == (("a", "b"),)

    def test_untouched_two_cycle_without_term(self):
        # a 2-cycle absent from the potential is not the trivial part
        q = Quiver.build([1, 2], [("a", 1, 2), ("b", 2, 1)])
        qp = QP.build(q, [])
        red, _ = reduce_qp(qp)
        assert red == qp

    def test_cross_terms_diagonalized(self):
        # two parallel pairs with a full quadratic form
        q = Quiver.build(
            [1, 2], [("a1", 1, 2), ("a2", 1, 2), ("b1", 2, 1), ("b2", 2, 1)]
        )
        qp = QP.build(
            q,
            [(1, ("a1", "b1")), (1, ("a1", "b2")), (1, ("a2", "b1")), (3, ("a2", "b2"))],
        )
        red, report = reduce_qp(qp)
        assert red.quiver.arrows == () and red.potential.is_zero()
        assert len(report.eliminated) == 2

    def test_truncation_losses_reported(self):
        q = Quiver.build(
            [1, 2, 3, 4],
            [("a", 1, 2), ("b", 2, 1), ("c", 1, 3), ("d", 3, 2), ("e", 2, 4), ("f", 4, 1)],
        )
        # substituting a inside the (a,e,f) term would need length 4 > 3
        qp = QP.build(q, [(1, ("a", "b")), (1, ("b", "c", "d")), (1, ("a", "e", "f"))],
                      truncation=3)
        red, report = reduce_qp(qp)
        assert report.eliminated == (("a", "b"),)
        assert report.lost and red.potential.lost

    def test_repeated_arrow_in_residual_cycle(self):
        # the trivial pair sits inside a longer cycle that uses b twice;
        # a per-occurrence (derivative-style) substitution would ping-pong
        q = Quiver.build([1, 2], [("a", 1, 2), ("b", 2, 1), ("c", 1, 2)])
        qp = QP.build(q, [(1, ("a", "b")), (1, ("b", "c", "b", "c"))], truncation=8)
        d0 = jacobi_finite(qp, 5)
        red, report = reduce_qp(qp)
        assert report.eliminated == (("a", "b"),)
        assert sorted(a.id for a in red.quiver.arrows) == ["c"]
        assert red.potential.is_zero()
        d1 = jacobi_finite(red, 5)
        assert d0.finite and d1.finite and d0.dim == d1.dim == 3

    def test_dimension_preserved(self, four_vertex_qp):
        pre = premutate(four_vertex_qp, 3)
        red, _ = reduce_qp(pre)
        d_pre = jacobi_finite(pre, 6)
        d_red = jacobi_finite(red, 6)
        assert d_pre.finite and d_red.finite and d_pre.dim == d_red.dim


class TestDwzMutate:
    def test_worked_example(self, four_vertex_qp):
        out = dwz_mutate(four_vertex_qp, 3)
        assert sorted(out.quiver.edge_multiset()) == [(1, 2), (2, 4), (3, 1), (3, 2), (4, 3)]
        assert len(out.potential.terms) == 1

    def test_double_mutation_involution(self, four_vertex_qp):
        twice = dwz_mutate(dwz_mutate(four_vertex_qp, 3), 3)
        assert is_isomorphic(twice.quiver, four_vertex_qp.quiver)
        a, b = jacobi_finite(twice, 6), jacobi_finite(four_vertex_qp, 6)
        assert a.finite and b.finite and a.dim == b.dim

    def test_markov_quiver_stable(self, markov_qp):
        out = dwz_mutate(markov_qp, 1)
        assert is_isomorphic(out.quiver, markov_qp.quiver)

    def test_agrees_with_fz_on_zero_potential(self):
        rng = random.Random(23)
        checked = 0
        while checked < 40:
            q = random_loopfree_quiver(rng, max_vertices=4, max_parallel=2)
            if q.has_two_cycle():
                continue
            v = rng.choice(q.vertices)
            qp_out = dwz_mutate(QP.build(q, []), v)
            if qp_out.quiver.has_two_cycle():
                continue  # degenerate case: FZ cancellation differs
            assert same_shape(qp_out.quiver, fz_mutate(q, v))
            checked += 1


class TestJacobiFinite:
    def test_three_cycle(self, three_cycle_qp):
        res = jacobi_finite(three_cycle_qp, 3)
        assert res.finite and res.dim == 6

    def test_acyclic_zero_potential(self):
        q = Quiver.build([1, 2], [("a", 1, 2)])
        res = jacobi_finite(QP.build(q, []), 2)
        assert res.finite and res.dim == 3

    def test_markov(self, markov_qp):
        res = jacobi_finite(markov_qp, 8)
        assert res.finite and res.dim == MARKOV_DIM

    def test_four_vertex_relations(self, four_vertex_qp):
        # relations ed = ce = dc = 0 leave a 15-dimensional algebra
        res = jacobi_finite(four_vertex_qp, 6)
        assert res.finite and res.dim == 15


class TestRigidity:
    def test_three_cycle_rigid(self, three_cycle_qp):
        assert is_rigid(three_cycle_qp, 6).status == "certified_rigid"

    def test_acyclic_rigid(self):
        q = Quiver.build([1, 2, 3], [("a", 1, 2), ("b", 1, 3)])
        assert is_rigid(QP.build(q, []), 4).status == "certified_rigid"

    def test_markov_never_certified(self, markov_qp):
        for bound in (4, 6, 8):
            res = is_rigid(markov_qp, bound)
            assert res.status in ("not_rigid", "unknown")
        assert is_rigid(markov_qp, 8).status == "not_rigid"

    def test_rigidity_stable_under_mutation(self, three_cycle_qp, four_vertex_qp):
        for qp, v in ((three_cycle_qp, 1), (four_vertex_qp, 3)):
            assert is_rigid(qp, 6).status == "certified_rigid"
            assert is_rigid(dwz_mutate(qp, v), 6).status == "certified_rigid"

    def test_witness_is_outside_ideal(self, markov_qp):
        res = is_rigid(markov_qp, 8)
        assert res.witness is not None
        assert res.witness in {c for c, _ in markov_qp.potential.terms}
