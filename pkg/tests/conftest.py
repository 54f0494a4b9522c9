from __future__ import annotations

import random
import sys
from fractions import Fraction
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from qpmut.graded import PresentedAlgebra, qp_from_algebra
from qpmut.paths import make_element
from qpmut.qp import QP
from qpmut.quiver import Quiver
from qpmut.surface import Side, Triangulation


@pytest.fixture
def a3_quiver() -> Quiver:
    return Quiver.build([1, 2, 3], [("a", 1, 2), ("b", 2, 3)])


@pytest.fixture
def markov_quiver() -> Quiver:
    return Quiver.build(
        [1, 2, 3],
        [("a1", 1, 2), ("a2", 1, 2), ("b1", 2, 3), ("b2", 2, 3), ("c1", 3, 1), ("c2", 3, 1)],
    )


@pytest.fixture
def markov_qp(markov_quiver) -> QP:
    # cycles through both arrow families plus the length-6 correction term
    return QP.build(
        markov_quiver,
        [
            (1, ("a1", "b1", "c1")),
            (1, ("a2", "b2", "c2")),
            (1, ("a1", "b2", "c1", "a2", "b1", "c2")),
        ],
    )


@pytest.fixture
def three_cycle_qp() -> QP:
    q = Quiver.build([1, 2, 3], [("a", 2, 1), ("b", 3, 2), ("c", 1, 3)])
    return QP.build(q, [(1, ("c", "b", "a"))])


@pytest.fixture
def four_vertex_qp() -> QP:
    """The 4-vertex QP whose mutation at 3 is worked out arrow by arrow."""
    q = Quiver.build(
        [1, 2, 3, 4],
        [("a", 1, 2), ("b", 2, 3), ("c", 1, 3), ("d", 3, 4), ("e", 4, 1)],
    )
    return QP.build(q, [(1, ("c", "d", "e"))])


@pytest.fixture
def triangle_algebra() -> PresentedAlgebra:
    """Oriented triangle with the single length-2 zero relation."""
    q = Quiver.build([1, 2, 3], [("a", 2, 1), ("b", 3, 2), ("c", 1, 3)])
    rel = make_element(q, 3, 1, [(Fraction(1), ("b", "a"))])
    return PresentedAlgebra(q, (rel,))


@pytest.fixture
def triangle_graded(triangle_algebra):
    return qp_from_algebra(triangle_algebra)


@pytest.fixture
def hexagon_fan() -> Triangulation:
    sides = tuple(
        [Side(str(k), "arc") for k in (1, 2, 3)]
        + [Side(f"b{k}", "boundary") for k in range(1, 7)]
    )
    return Triangulation(
        sides,
        (("1", "b2", "b1"), ("2", "b3", "1"), ("3", "b4", "2"), ("b6", "b5", "3")),
    )


@pytest.fixture
def square_one_arc() -> Triangulation:
    return Triangulation(
        (
            Side("1", "arc"),
            Side("b1", "boundary"),
            Side("b2", "boundary"),
            Side("b3", "boundary"),
            Side("b4", "boundary"),
        ),
        (("b1", "b2", "1"), ("1", "b3", "b4")),
    )


def random_loopfree_quiver(rng: random.Random, max_vertices=6, max_parallel=3,
                           allow_two_cycles=False, density=0.5) -> Quiver:
    n = rng.randint(2, max_vertices)
    vertices = list(range(1, n + 1))
    arrows: list[tuple[str, int, int]] = []
    k = 0
    for s in vertices:
        for t in vertices:
            if s == t or rng.random() > density:
                continue
            if not allow_two_cycles and any(src == t and tgt == s for _, src, tgt in arrows):
                continue
            for _ in range(rng.randint(1, max_parallel)):
                k += 1
                arrows.append((f"x{k}", s, t))
    return Quiver.build(vertices, arrows)
