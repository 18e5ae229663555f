import math
from fractions import Fraction
from itertools import combinations, product

import pytest
from hypothesis import given, settings, strategies as st

from threefold.seifert import (
    Geometry,
    InvalidFiber,
    SeifertError,
    SeifertInvariants,
    SeifertSyntaxError,
    bezout_pair,
    brieskorn_geometry,
    canonical_lens_q,
    canonical_name,
    euler_number,
    geometry,
    homology_sphere_identity,
    homology_sphere_invariants,
    is_small,
    lens_homeomorphic,
    lens_homotopy_equivalent,
    normalize,
    orbifold_euler_characteristic,
    parse,
    platonic_triple,
    recognize_spherical,
    render,
    reverse_orientation,
    same_fibration,
    sweep,
)

POINCARE = "{Oo,0|-1;(2,1),(3,1),(5,1)}"


def N(text):
    return normalize(parse(text))


# ------------------------------------------------------------ parsing

def test_parse_poincare():
    si = parse(POINCARE)
    assert (si.cls, si.g, si.b) == ("Oo", 0, -1)
    assert si.fibers == ((2, 1), (3, 1), (5, 1))


def test_parse_no_fibers():
    assert parse("{NnI,1|1}") == SeifertInvariants("NnI", 1, 1)
    assert parse("{Oo,0|0}") == SeifertInvariants("Oo", 0, 0)


def test_parse_whitespace_and_unicode():
    assert parse(" { Oo , 0 ∣ −1 ; (2, 1) , (3,1),(5 ,1) } ") == parse(POINCARE)


def test_parse_oni_alias():
    assert parse("{OnI,1|0;(2,1)}").cls == "On"


@pytest.mark.parametrize("text, pos", [
    ("{Oo,0|-1;(2,1)", 14),
    ("{Xx,0|0}", 1),
    ("{Oo,0,0}", 5),
    ("{Oo,0|0;(2,1)(3,1)}", 13),
    ("{Oo,0|0} extra", 9),
    ("{Oo,0|0;(2 1)}", 11),
])
def test_syntax_errors_have_positions(text, pos):
    with pytest.raises(SeifertSyntaxError) as info:
        parse(text)
    assert info.value.pos == pos
    assert info.value.caret().splitlines()[1] == " " * pos + "^"


def test_genus_constraint():
    with pytest.raises(SeifertError, match="NnIII"):
        parse("{NnIII,2|0}")
    with pytest.raises(SeifertError):
        parse("{NnII,1|0}")


def test_zero_alpha_rejected():
    with pytest.raises(SeifertError):
        parse("{Oo,0|0;(0,1)}")


def test_non_coprime_fiber():
    with pytest.raises(InvalidFiber):
        normalize(parse("{Oo,0|0;(4,2)}"))


# ------------------------------------------------------- normal forms

@pytest.mark.parametrize("raw, expected", [
    ("{Oo,0|0;(3,4)}", "{Oo,0|1;(3,1)}"),
    ("{Oo,0|2;(1,0)}", "{Oo,0|2}"),
    ("{Oo,0|-1;(2,-1)}", "{Oo,0|-2;(2,1)}"),
    ("{Oo,0|0;(5,1),(2,1)}", "{Oo,0|0;(2,1),(5,1)}"),
    ("{Oo,0|0;(1,3)}", "{Oo,0|3}"),
])
def test_normalize_examples(raw, expected):
    assert render(N(raw)) == expected


def test_nonorientable_normal_form():
    si = N("{NnI,1|0;(5,4)}")
    assert si.fibers == ((5, 1),) and si.b == 1
    # a fiber of multiplicity two forces b = 0
    assert N("{No,1|1;(2,1),(3,1)}").b == 0


def test_render_format():
    assert render(parse(POINCARE)) == POINCARE
    assert str(parse(POINCARE)) == POINCARE


def test_reverse_poincare():
    assert render(reverse_orientation(N(POINCARE))) == "{Oo,0|-2;(2,1),(3,2),(5,4)}"


def test_reverse_s2xs1_fixed():
    assert reverse_orientation(N("{Oo,0|0}")) == N("{Oo,0|0}")


def test_reverse_nonorientable_is_noop(caplog):
    si = N("{NnI,1|1}")
    assert reverse_orientation(si) == si
    assert "no-op" in caplog.text


# --------------------------------------------------------- arithmetic

def test_euler_poincare():
    si = N(POINCARE)
    assert euler_number(si) == Fraction(-1, 30)
    assert orbifold_euler_characteristic(si) == Fraction(1, 30)


def test_euler_torus_and_nonorientable():
    assert euler_number(N("{Oo,1|0}")) == 0
    assert orbifold_euler_characteristic(N("{Oo,1|0}")) == 0
    si = N("{NnI,1|1}")
    assert euler_number(si) == 0
    assert orbifold_euler_characteristic(si) == 1


def test_euler_number_is_exact():
    e = euler_number(N("{Oo,0|-2;(2,1),(3,2),(7,6)}"))
    assert isinstance(e, Fraction) and e == Fraction(-1, 42)


@pytest.mark.parametrize("text, geo", [
    (POINCARE, Geometry.S3),
    ("{Oo,1|0}", Geometry.E3),
    ("{Oo,1|2}", Geometry.NIL),
    ("{Oo,1|-1}", Geometry.NIL),
    ("{Oo,0|0}", Geometry.S2xR),
    ("{Oo,2|0}", Geometry.H2xR),
    ("{Oo,2|1}", Geometry.SL2),
    ("{Oo,0|-1;(2,1),(3,1),(7,1)}", Geometry.SL2),
    ("{Oo,0|-2;(2,1),(3,1),(6,1)}", Geometry.NIL),
    ("{NnI,2|0}", Geometry.E3),
])
def test_geometry_examples(text, geo):
    assert geometry(parse(text)) is geo


def test_geometry_labels():
    assert str(Geometry.SL2) == "SL2~" and str(Geometry.S2xR) == "S2xR"


@pytest.mark.parametrize("text, small", [
    ("{Oo,0|-2;(2,1),(2,1),(2,1),(2,1)}", True),
    ("{Oo,0|-1;(2,1),(3,1),(7,1)}", False),
    ("{NnII,2|0}", True),
    (POINCARE, True),
    ("{Oo,0|-1;(2,1),(2,1),(2,1),(3,1)}", False),
    ("{Oo,1|0;(2,1)}", False),
])
def test_is_small(text, small):
    assert is_small(parse(text)) is small


@pytest.mark.parametrize("triple, cls", [
    ((2, 2, 97), "(2,2,a)"), ((2, 3, 5), "(2,3,5)"), ((2, 3, 6), "none"),
    ((5, 3, 2), "(2,3,5)"), ((3, 3, 2), "(2,3,3)"), ((2, 4, 3), "(2,3,4)"), ((3, 3, 3), "none"),
])
def test_platonic_triple(triple, cls):
    assert platonic_triple(*triple) == cls


# --------------------------------------------------------- recognition

@pytest.mark.parametrize("text, name", [
    ("{Oo,0|3}", "L(3,1)"),
    ("{Oo,0|1;(3,2)}", "L(5,3)"),
    ("{Oo,0|-1;(2,1),(2,1),(3,1)}", "P(3)"),
    (POINCARE, "S3/I* (Poincaré)"),
    ("{Oo,0|-1;(2,1),(3,1),(4,1)}", "S3/O*"),
    ("{Oo,0|-1;(2,1),(3,1),(3,1)}", "S3/T*"),
    ("{Oo,0|1}", "S3"),
    ("{Oo,0|0}", "S2xS1"),
    ("{NnI,1|1}", "S2~S1"),
    ("{NnI,1|0}", "RP2xS1"),
    ("{On,1|0}", "RP3#RP3"),
])
def test_recognize(text, name):
    assert recognize_spherical(parse(text)) == name


def test_recognize_reversed_orientation():
    assert recognize_spherical(reverse_orientation(N(POINCARE))) == "S3/I* (Poincaré)"


def test_recognize_family_label():
    label = recognize_spherical(parse("{Oo,0|-2;(2,1),(3,1),(5,1)}"))
    assert label.startswith("generalized dodecahedral space")


def test_two_fiber_lens_rule():
    # S3 condition: coprime multiplicities and |b a1 a2 + a1 b2 + a2 b1| = 1
    assert recognize_spherical(parse("{Oo,0|-1;(2,1),(3,1)}")) == "S3"
    name = recognize_spherical(parse("{Oo,0|0;(2,1),(3,1)}"))
    p, q = map(int, name[2:-1].split(","))
    assert p == 5
    assert lens_homeomorphic(5, q, 1) or lens_homeomorphic(5, q, 2)


def test_bezout_pair():
    for alpha in range(2, 12):
        for c in range(-20, 21):
            if math.gcd(alpha, c) != 1:
                continue
            m, n = bezout_pair(alpha, c)
            assert m * alpha - n * c == 1 and 0 <= n < alpha


def test_canonical_name():
    assert canonical_name("L(5,3)") == "L(5,2)"
    assert canonical_name("L(7,6)") == "L(7,1)"
    assert canonical_name("P(3)") == "P(3)"
    assert canonical_lens_q(11, 7) == min(q for q in range(1, 11) if lens_homeomorphic(11, 7, q))


def test_same_fibration():
    assert same_fibration(POINCARE, "{Oo,0|-2;(2,1),(3,2),(5,4)}")
    assert not same_fibration(POINCARE, "{Oo,0|-1;(2,1),(3,1),(7,1)}")


# ---------------------------------------------------- homology spheres

def _brute_force_sphere(alphas):
    """All normalized (b, betas) with identity +1, by exhaustive search."""
    A = math.prod(alphas)
    hits = []
    for b in range(-len(alphas), 1):
        for betas in product(*(range(1, a) for a in alphas)):
            val = b * A + sum(c * (A // a) for a, c in zip(alphas, betas))
            if val == 1:
                hits.append(SeifertInvariants("Oo", 0, b, tuple(zip(alphas, betas))))
    return hits


def test_homology_sphere_examples():
    si = homology_sphere_invariants(2, 3, 5)
    assert render(si) == POINCARE
    assert homology_sphere_identity(si) == 1
    si = homology_sphere_invariants(2, 3, 7)
    assert render(si) == "{Oo,0|-2;(2,1),(3,2),(7,6)}"
    assert homology_sphere_invariants((2, 3, 7)) == si


@pytest.mark.parametrize("alphas", [(2, 3, 5), (2, 3, 7), (2, 5, 7), (3, 4, 5), (2, 3, 5, 7)])
def test_homology_sphere_brute_force(alphas):
    hits = _brute_force_sphere(alphas)
    assert hits == [homology_sphere_invariants(*alphas)]


def test_homology_sphere_needs_coprime():
    with pytest.raises(SeifertError, match="2 and 4 are not coprime"):
        homology_sphere_invariants(2, 3, 4)
    with pytest.raises(SeifertError):
        homology_sphere_invariants(2, 3)


# --------------------------------------------------------- lens spaces

def test_lens_examples():
    assert not lens_homotopy_equivalent(5, 1, 2)
    assert lens_homotopy_equivalent(7, 1, 2) and not lens_homeomorphic(7, 1, 2)
    for q in (1, 2, 3, 4):
        assert lens_homotopy_equivalent(5, q, q) and lens_homeomorphic(5, q, q)


def test_lens_bad_parameters():
    with pytest.raises(SeifertError):
        lens_homeomorphic(4, 1, 2)
    with pytest.raises(SeifertError):
        lens_homotopy_equivalent(1, 0, 0)


def test_lens_homeomorphic_implies_homotopy():
    for p in range(2, 51):
        qs = [q for q in range(1, p) if math.gcd(p, q) == 1]
        for q, q2 in product(qs, qs):
            if lens_homeomorphic(p, q, q2):
                assert lens_homotopy_equivalent(p, q, q2)


def test_lens_homeomorphism_is_equivalence_relation():
    for p in range(2, 30):
        qs = [q for q in range(1, p) if math.gcd(p, q) == 1]
        for a, b, c in product(qs, repeat=3):
            if lens_homeomorphic(p, a, b) and lens_homeomorphic(p, b, c):
                assert lens_homeomorphic(p, a, c)


# ----------------------------------------------------------- Brieskorn

@pytest.mark.parametrize("triple, order, name", [
    ((2, 3, 3), 8, "P(2)"), ((2, 3, 4), 24, "S3/T*"), ((2, 3, 5), 120, "S3/I*"),
    ((2, 2, 7), 7, "L(7,1)"), ((3, 2, 2), 3, "L(3,1)"),
])
def test_brieskorn_spherical(triple, order, name):
    rec = brieskorn_geometry(*triple)
    assert rec.geometry is Geometry.S3
    assert rec.order == order and rec.name == name


@pytest.mark.parametrize("triple", [(2, 3, 6), (2, 4, 4), (3, 3, 3)])
def test_brieskorn_nil(triple):
    rec = brieskorn_geometry(*triple)
    assert rec.geometry is Geometry.NIL and rec.order is None and rec.notes


def test_brieskorn_coincidence():
    a, b = brieskorn_geometry(2, 9, 18), brieskorn_geometry(3, 5, 15)
    assert a.geometry is b.geometry is Geometry.SL2
    assert "M(2,9,18) is homeomorphic to M(3,5,15)" in a.notes
    assert "M(3,5,15) is homeomorphic to M(2,9,18)" in b.notes


def test_brieskorn_order_is_integral_on_spherical_triples():
    for t in combinations(range(2, 40), 3):
        rec = brieskorn_geometry(*t)
        if rec.geometry is Geometry.S3:
            assert rec.order >= 1


# ---------------------------------------------------------- properties

fibers = st.lists(
    st.tuples(st.integers(1, 9), st.integers(-20, 20)).filter(lambda f: math.gcd(*f) == 1),
    max_size=4,
)
orientable = st.builds(SeifertInvariants, st.sampled_from(["Oo"]), st.integers(0, 3),
                       st.integers(-4, 4), fibers.map(tuple))
any_class = st.builds(
    lambda cls, extra, b, fib: SeifertInvariants(cls, {"Oo": 0, "On": 1, "No": 1, "NnI": 1, "NnII": 2, "NnIII": 3}[cls] + extra, b, tuple(fib)),
    st.sampled_from(["Oo", "On", "No", "NnI", "NnII", "NnIII"]), st.integers(0, 2), st.integers(-4, 4), fibers)


@settings(max_examples=200, deadline=None)
@given(any_class)
def test_normalize_idempotent_and_round_trip(si):
    n = normalize(si)
    assert normalize(n) == n
    assert parse(render(n)) == n
    for a, c in n.fibers:
        assert a > 1
        if n.orientable:
            assert 0 < c < a
        else:
            assert 0 < c <= a / 2
    if not n.orientable:
        assert n.b in (0, 1)


@settings(max_examples=200, deadline=None)
@given(orientable)
def test_normalize_preserves_euler_number(si):
    # e is invariant under beta shifts with b compensation
    raw = -(si.b + sum(Fraction(c, a) for a, c in si.fibers))
    assert euler_number(normalize(si)) == raw


@settings(max_examples=200, deadline=None)
@given(orientable)
def test_reversal_involution_and_sign(si):
    n = normalize(si)
    rev = reverse_orientation(n)
    assert reverse_orientation(rev) == n
    assert euler_number(rev) == -euler_number(n)
    assert geometry(rev) is geometry(n)


@settings(max_examples=100, deadline=None)
@given(orientable, st.randoms(use_true_random=False))
def test_geometry_invariant_under_fiber_order(si, rnd):
    fib = list(si.fibers)
    rnd.shuffle(fib)
    assert geometry(SeifertInvariants(si.cls, si.g, si.b, tuple(fib))) is geometry(si)


def test_sweep_reaches_all_six_geometries():
    seen = {geometry(si) for si in sweep()}
    assert seen == {Geometry.S2xR, Geometry.E3, Geometry.H2xR, Geometry.S3, Geometry.NIL, Geometry.SL2}


def test_brieskorn_lens_matches_builder_homology():
    from threefold.homology import homology
    from threefold.spaces import lens_space

    for r in (2, 3, 4, 5):
        rec = brieskorn_geometry(2, 2, r)
        H = homology(lens_space(r, 1))
        assert H.torsion[1] == (rec.order,)
