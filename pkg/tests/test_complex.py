import random

import pytest
from hypothesis import given, settings, strategies as st

from threefold.complex import (
    ComplexError,
    DegenerateSimplex,
    DimensionMismatch,
    NotAFace,
    VerificationError,
    build_complex,
    classify_closed_surface,
    euler_characteristic,
    f_vector,
    format_tri,
    is_orientable,
    link,
    parse_tri,
    read_tri,
    read_tri_comments,
    verify_closed_3_manifold,
    write_tri,
)
from threefold.constructions import (
    klein_bottle_8_20,
    mapping_torus,
    moebius_torus,
    polygon,
    product,
    rp2_6,
    simplex_boundary,
    VertexAutomorphism,
)


def test_single_tetrahedron():
    K = build_complex([(1, 2, 3, 4)])
    assert K.dim == 3
    assert tuple(f_vector(K)) == (4, 6, 4, 1)


def test_boundary_of_4_simplex():
    K = simplex_boundary(4)
    assert len(K.facets) == 5
    assert tuple(f_vector(K)) == (5, 10, 10, 5)


def test_three_cycle():
    K = build_complex([(1, 2), (2, 3), (1, 3)])
    assert K.dim == 1
    assert tuple(f_vector(K)) == (3, 3)


def test_facets_sorted_and_deduplicated():
    K = build_complex([(3, 1, 2), (1, 2, 3), (2, 4, 3)])
    assert K.sorted_facets() == [(1, 2, 3), (2, 3, 4)]


def test_mixed_lengths_rejected():
    with pytest.raises(DimensionMismatch):
        build_complex([(1, 2, 3), (1, 2)])


def test_repeated_label_rejected():
    with pytest.raises(DegenerateSimplex):
        build_complex([(1, 1, 2)])


def test_moebius_f_vector():
    K = moebius_torus()
    assert tuple(f_vector(K)) == (7, 21, 14)
    assert euler_characteristic(K) == 0


def test_links_in_sphere():
    K = simplex_boundary(4)
    L = link(K, (1,))
    assert tuple(f_vector(L)) == (4, 6, 4)
    E = link(K, (1, 2))
    assert tuple(f_vector(E)) == (3, 3)


def test_link_of_missing_face():
    with pytest.raises(NotAFace):
        link(simplex_boundary(4), (1, 9))


def test_vertex_links_of_product_are_spheres():
    K = product(simplex_boundary(3), polygon(3))
    for v in K.vertices:
        s = classify_closed_surface(link(K, (v,)))
        assert s.orientable and s.genus == 0


@pytest.mark.parametrize("make, orientable, genus", [
    (lambda: simplex_boundary(3), True, 0),
    (moebius_torus, True, 1),
    (klein_bottle_8_20, False, 2),
    (rp2_6, False, 1),
])
def test_surface_classification(make, orientable, genus):
    s = classify_closed_surface(make())
    assert (s.orientable, s.genus) == (orientable, genus)


def test_rp2_f_vector():
    assert tuple(f_vector(rp2_6())) == (6, 15, 10)


def test_non_surface_rejected():
    with pytest.raises(VerificationError):
        classify_closed_surface(build_complex([(1, 2, 3), (1, 2, 4)]))


def test_verify_sphere_and_products():
    r = verify_closed_3_manifold(simplex_boundary(4))
    assert r.ok and r.orientable
    r = verify_closed_3_manifold(product(simplex_boundary(3), polygon(3)))
    assert r.ok and r.orientable


def test_verify_twisted_sphere_bundle():
    K = simplex_boundary(3)
    M = mapping_torus(K, VertexAutomorphism.from_cycles(K, [(1, 2)]))
    r = verify_closed_3_manifold(M)
    assert r.ok and not r.orientable


def test_verify_reports_witness():
    r = verify_closed_3_manifold(build_complex([(1, 2, 3, 4)]))
    assert not r.ok
    what, witness = r.failures[0]
    assert len(witness) == 3
    with pytest.raises(VerificationError):
        r.raise_if_failed()


def test_verify_detects_pinched_vertex():
    # two spheres sharing a vertex: triangles fine, vertex link disconnected
    A = simplex_boundary(4)
    B = build_complex([tuple(v + 4 if v > 1 else v for v in f) for f in A.facets])
    K = build_complex(list(A.facets) + list(B.facets))
    r = verify_closed_3_manifold(K)
    assert not r.ok


def test_manifold_face_identities():
    for K in (simplex_boundary(4), product(moebius_torus(), polygon(3))):
        f = f_vector(K)
        assert f[0] - f[1] + f[2] - f[3] == 0
        assert f[2] == 2 * f[3]


@settings(max_examples=25, deadline=None)
@given(st.randoms(use_true_random=False))
def test_surface_class_invariant_under_relabeling(rnd):
    for K in (moebius_torus(), klein_bottle_8_20()):
        labels = list(K.vertices)
        images = rnd.sample(range(1, 100), len(labels))
        L = K.relabel(dict(zip(labels, images)))
        assert classify_closed_surface(L) == classify_closed_surface(K)


def test_orientability_independent_of_facet_order():
    K = product(moebius_torus(), polygon(3))
    facets = list(K.facets)
    for seed in range(5):
        random.Random(seed).shuffle(facets)
        assert is_orientable(build_complex(facets))


def test_tri_round_trip(tmp_path):
    K = moebius_torus()
    p = tmp_path / "t.tri"
    write_tri(K, p, ["Moebius torus"])
    assert read_tri(p) == K
    assert read_tri_comments(p) == ["Moebius torus"]
    text = format_tri(K)
    lines = text.splitlines()[1:]
    assert lines == sorted(lines, key=lambda s: tuple(map(int, s.split())))


def test_tri_errors_have_line_numbers():
    with pytest.raises(ComplexError, match=":3:"):
        parse_tri("dim 2\n1 2 3\n1 x 3\n")
    with pytest.raises(ComplexError):
        parse_tri("1 2 3\n")


def test_rp3_fixture_reports_stored_counts():
    from threefold.catalog import rp3
    from importlib import resources

    text = resources.files("threefold.data").joinpath("rp3_11.tri").read_text()
    stored = next(line for line in text.splitlines() if line.startswith("# f-vector"))
    counts = tuple(int(x) for x in stored.split()[-1].split(","))
    assert tuple(f_vector(rp3())) == counts == (11, 51, 80, 40)
