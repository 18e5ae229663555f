import random
from collections import Counter
from fractions import Fraction

import pytest

from threefold.complex import (
    ComplexError,
    VerificationError,
    build_complex,
    f_vector,
    is_orientable,
    verify_closed_3_manifold,
)
from threefold.constructions import barycentric_subdivision, moebius_torus, polygon, product, simplex_boundary
from threefold.flips import (
    BistellarMove,
    FlipState,
    IllegalMove,
    ReduceParams,
    apply_move,
    reduce,
    reduce_with_log,
    valid_moves,
)
from threefold.homology import homology


def test_sphere_has_only_insertions():
    moves = valid_moves(simplex_boundary(4))
    assert len(moves) == 5
    assert Counter(m.kind for m in moves) == {"1-4": 5}


def test_insertion_then_removal():
    K = simplex_boundary(4)
    m = BistellarMove((1, 2, 3, 4), (6,))
    L = apply_move(K, m)
    assert tuple(f_vector(L)) == (6, 14, 16, 8)
    # both the new vertex and vertex 5 now have a tetrahedral link
    removals = sorted(x for x in valid_moves(L) if x.kind == "4-1")
    assert removals == [BistellarMove((5,), (1, 2, 3, 4)), m.inverse()]
    assert apply_move(L, m.inverse()) == K
    assert tuple(f_vector(apply_move(L, removals[0]))) == (5, 10, 10, 5)


def test_two_three_and_back():
    K = apply_move(simplex_boundary(4), BistellarMove((1, 2, 3, 4), (6,)))
    m = next(x for x in sorted(valid_moves(K)) if x.kind == "2-3")
    L = apply_move(K, m)
    assert len(L.facets) == len(K.facets) + 1
    assert m.inverse() in valid_moves(L)
    assert apply_move(L, m.inverse()) == K


def test_every_move_has_inverse_round_trip():
    K = product(simplex_boundary(3), polygon(3))
    for m in sorted(valid_moves(K))[:40]:
        L = apply_move(K, m)
        assert apply_move(L, m.inverse()) == K


def test_illegal_moves():
    K = simplex_boundary(4)
    with pytest.raises(IllegalMove):
        apply_move(K, BistellarMove((1, 2, 3), (4, 5)))     # edge 45 already present
    with pytest.raises(IllegalMove):
        apply_move(K, BistellarMove((1, 2, 3, 4), (5,)))    # vertex 5 already present
    with pytest.raises(IllegalMove):
        apply_move(K, BistellarMove((1, 2), (3, 4)))        # wrong sizes
    with pytest.raises(IllegalMove):
        apply_move(K, BistellarMove((1,), (2, 3, 4, 5)))   # B is a facet


def test_valid_moves_rejects_non_manifold():
    with pytest.raises(VerificationError):
        valid_moves(build_complex([(1, 2, 3, 4)]))


def test_valid_moves_on_surface():
    # the 7-vertex torus is 2-neighborly, so only insertions are legal
    assert {m.kind for m in valid_moves(moebius_torus())} == {"1-3"}
    moves = valid_moves(barycentric_subdivision(simplex_boundary(3)))
    assert {m.kind for m in moves} == {"1-3", "2-2"}


def test_flip_state_matches_functional_moves():
    K = product(simplex_boundary(3), polygon(3))
    st = FlipState(K)
    rng = random.Random(5)
    cur = K
    for _ in range(60):
        m = rng.choice(sorted(valid_moves(cur, check=False)))
        if m.kind == "1-4":
            m = BistellarMove(m.face, (st.next_label,))
        st.apply(m)
        cur = apply_move(cur, m)
        assert st.complex() == cur
        assert st.f_vector() == tuple(f_vector(cur))


def test_flip_state_move_for_agrees():
    K = barycentric_subdivision(simplex_boundary(4))
    st = FlipState(K)
    expected = valid_moves(K)
    for k in range(1, 4):
        for F in K.faces(k):
            m = st.move_for(F)
            if m is not None:
                assert m in expected


def test_flip_state_needs_dimension_three():
    with pytest.raises(ComplexError):
        FlipState(moebius_torus())


def test_reduce_bary_sphere():
    K = reduce(barycentric_subdivision(simplex_boundary(4)))
    assert tuple(f_vector(K)) == (5, 10, 10, 5)


def test_reduce_deterministic():
    K = product(simplex_boundary(3), polygon(3))
    a = reduce_with_log(K, ReduceParams(seed=3, max_rounds=200))
    b = reduce_with_log(K, ReduceParams(seed=3, max_rounds=200))
    assert a.complex == b.complex
    assert [r.as_record() for r in a.log] == [r.as_record() for r in b.log]


def test_reduce_preserves_topology_checked():
    K = product(moebius_torus(), polygon(3))
    R = reduce(K, ReduceParams(seed=1, max_rounds=40, check=True))
    assert verify_closed_3_manifold(R).ok
    assert is_orientable(R)
    assert homology(R) == homology(K)
    assert f_vector(R)[0] <= f_vector(K)[0]
    assert sorted(R.vertices) == list(range(1, f_vector(R)[0] + 1))


def test_reduce_params_validation():
    with pytest.raises(ValueError):
        ReduceParams(heat=Fraction(1))
    with pytest.raises(ValueError):
        ReduceParams(max_rounds=0)
