import json
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from folner_cycles import (Chain, Cocycle, DescriptorMismatch, MalformedInput, NotACycle,
                           boundary, canonicalize, chain_from_json, chain_to_json,
                           cocycle_catalogue, l1_norm, pair, parse_extension, parse_group,
                           pushforward, section_lift, torus_form)
from folner_cycles.chains import require_cycle

from conftest import GROUPS, cross_cycle, random_chain
from oracles import LAWS, naive_boundary


def test_canonicalize_examples(z2):
    out = canonicalize([z2.element(2, 3), z2.element(4, 4)])
    assert [g.coords for g in out] == [(0, 0), (2, 1)]
    t = (z2.element(0, 0), z2.element(1, 0))
    assert canonicalize(t) == t
    H = parse_group("Heis3")
    x = H.element(1, 0, 0)
    assert canonicalize([x, x]) == (H.identity(), H.identity())
    with pytest.raises(MalformedInput):
        canonicalize([])


def test_boundary_examples(z2):
    e, a, b, ab = (0, 0), (1, 0), (0, 1), (1, 1)
    for g in [(3, -1), (0, 0), (5, 5)]:
        assert boundary(Chain.simplex(z2, [e, g])).is_zero()
    c = Chain.simplex(z2, [e, a, ab])
    expected = Chain.from_terms(z2, [(1, [e, b]), (-1, [e, ab]), (1, [e, a])])
    assert boundary(c) == expected
    assert boundary(boundary(c)).is_zero()


def test_boundary_rejects_degree_zero(z2):
    with pytest.raises(MalformedInput):
        boundary(Chain.simplex(z2, [(0, 0)]))


def test_norm_examples(z2):
    c = Chain.from_terms(z2, [(2, [(0, 0), (1, 0)]), (-3, [(0, 0), (0, 1)])])
    assert l1_norm(c) == 5
    same = Chain.from_terms(z2, [(1, [(0, 0), (2, 0)]), (-1, [(1, 1), (3, 1)])])
    assert same.is_zero() and l1_norm(same) == 0


def test_torus_cycle(torus, torus_ext):
    assert l1_norm(torus) == 2
    assert torus.is_cycle()
    Q = torus_ext.quotient
    cbar = pushforward(torus_ext, torus)
    assert cbar == Chain.from_terms(Q, [(1, [(0,), (0,), (1,)]), (-1, [(0,), (1,), (1,)])])
    assert l1_norm(cbar) == 2
    assert pair(torus_form(), torus) == 1


def test_pushforward_examples(torus_ext, z2):
    c = Chain.simplex(z2, [(0, 0), (1, 2)])
    assert pushforward(torus_ext, c) == Chain.simplex(torus_ext.quotient, [(0,), (2,)])
    inside = Chain.from_terms(z2, [(2, [(0, 0), (3, 0), (-1, 0)]), (1, [(0, 0), (1, 0), (1, 0)])])
    assert pushforward(torus_ext, inside) == Chain.simplex(torus_ext.quotient, [(0,)] * 3, 3)
    with pytest.raises(DescriptorMismatch):
        pushforward(torus_ext, Chain.simplex(parse_group("Z"), [(0,), (1,)]))


def test_pair_examples(z2):
    f = Cocycle.homomorphism(z2, [1, 0])
    assert pair(f, Chain.simplex(z2, [(0, 0), (1, 2)])) == 1
    omega = torus_form()
    assert omega((1, 0), (0, 1)) == 1 and omega((0, 1), (1, 0)) == 0
    with pytest.raises(MalformedInput):
        pair(omega, Chain.simplex(z2, [(0, 0), (1, 2)]))


@pytest.mark.parametrize("spec", GROUPS)
def test_boundary_squared_zero(spec):
    G = parse_group(spec)
    rng = random.Random(11)
    for i in range(500):
        degree = 2 + i % 3
        c = random_chain(G, degree, rng, nterms=3)
        assert boundary(boundary(c)).is_zero()


@pytest.mark.parametrize("spec", GROUPS)
def test_boundary_matches_naive(spec):
    G = parse_group(spec)
    mul, inv = LAWS[spec]
    rng = random.Random(12)
    for i in range(100):
        c = random_chain(G, 1 + i % 3, rng)
        assert boundary(c).terms == naive_boundary(c.terms, mul, inv)


@pytest.mark.parametrize("spec", GROUPS)
def test_norm_axioms(spec):
    G = parse_group(spec)
    rng = random.Random(13)
    for _ in range(300):
        a, b = random_chain(G, 2, rng), random_chain(G, 2, rng)
        s = Fraction(rng.randint(-5, 5), rng.randint(1, 4))
        assert l1_norm(a + b) <= l1_norm(a) + l1_norm(b)
        assert l1_norm(s * a) == abs(s) * l1_norm(a)
        assert (l1_norm(a) == 0) == a.is_zero()


@pytest.mark.parametrize("spec, normal", [("Z^2", "*,0"), ("Heis3", "center"),
                                          ("Heis3", "0,*,*"), ("Z/2xZ", "*,0")])
def test_pushforward_chain_map_and_contraction(spec, normal):
    ext = parse_extension(spec, normal)
    rng = random.Random(14)
    for i in range(200):
        c = random_chain(ext.gamma, 1 + i % 3, rng)
        assert boundary(pushforward(ext, c)) == pushforward(ext, boundary(c))
        assert l1_norm(pushforward(ext, c)) <= l1_norm(c)


@pytest.mark.parametrize("spec, degree", [("Z^2", 1), ("Z^2", 2), ("Heis3", 1),
                                          ("Heis3", 2), ("Z/2xZ", 2), ("Z^3", 3)])
def test_catalogue_cocycles(spec, degree):
    G = parse_group(spec)
    rng = random.Random(15)
    cocycles = cocycle_catalogue(G, degree)
    assert cocycles
    for f in cocycles:
        for _ in range(1000 // len(cocycles) + 1):
            args = [G.random_coords(rng, 3) for _ in range(degree + 1)]
            assert f.coboundary_at(args) == 0
        for _ in range(20):
            b = random_chain(G, degree + 1, rng)
            assert pair(f, boundary(b)) == 0


def test_torus_form_is_cocycle(z2):
    omega = torus_form()
    rng = random.Random(16)
    for _ in range(1000):
        assert omega.coboundary_at([z2.random_coords(rng, 5) for _ in range(3)]) == 0


def test_homomorphism_rejects_torsion():
    with pytest.raises(MalformedInput):
        Cocycle.homomorphism(parse_group("Z/2xZ"), [1, 0])
    with pytest.raises(MalformedInput):
        Cocycle.homomorphism(parse_group("Heis3"), [0, 0, 1])


def test_cross_cycles_are_cycles(z2):
    rng = random.Random(17)
    for _ in range(100):
        x, y = z2.random_coords(rng, 4), z2.random_coords(rng, 4)
        c = cross_cycle(z2, x, y)
        assert c.is_cycle()
        assert pair(torus_form(), c) == x[0] * y[1] - y[0] * x[1]


def test_require_cycle_witness(z2):
    c = Chain.simplex(z2, [(0, 0), (1, 0), (1, 1)])
    with pytest.raises(NotACycle) as info:
        require_cycle(c)
    assert info.value.to_json()["error"] == "not_a_cycle"
    assert chain_from_json(info.value.details["witness"]) == boundary(c)


def test_section_lift_norm(torus_ext, torus):
    cbar = pushforward(torus_ext, torus)
    lift = section_lift(torus_ext, cbar)
    assert pushforward(torus_ext, lift) == cbar
    assert l1_norm(lift) == l1_norm(cbar)


def test_chain_validation(z2):
    with pytest.raises(MalformedInput):
        Chain.from_terms(z2, [(1, [(0, 0), (1, 0)]), (1, [(0, 0)])])
    with pytest.raises(MalformedInput):
        Chain.from_terms(z2, [(0.5, [(0, 0), (1, 0)])])
    with pytest.raises(MalformedInput):
        Chain.from_terms(z2, [(1, [(0, 0, 0), (1, 0)])])
    with pytest.raises(DescriptorMismatch):
        Chain.simplex(z2, [(0, 0), (1, 0)]) + Chain.simplex(parse_group("Z"), [(0,), (1,)])


def test_json_round_trip(rng):
    for spec in GROUPS:
        G = parse_group(spec)
        for _ in range(20):
            c = random_chain(G, 2, rng)
            data = json.loads(json.dumps(chain_to_json(c)))
            assert chain_from_json(data) == c
    empty = chain_from_json({"degree": 1, "group": "Z", "terms": []})
    assert empty.is_zero() and l1_norm(empty) == 0


def test_json_coefficients_are_exact_strings(z2):
    c = Chain.simplex(z2, [(0, 0), (1, 0)], Fraction(-2, 3))
    assert chain_to_json(c)["terms"][0]["coeff"] == "-2/3"


coords = st.tuples(st.integers(-3, 3), st.integers(-3, 3))


@settings(max_examples=200, deadline=None)
@given(st.lists(st.tuples(st.integers(-5, 5), st.lists(coords, min_size=3, max_size=3)), max_size=5),
       coords)
def test_orbit_representative_independence(items, shift):
    G = parse_group("Z^2")
    c = Chain.from_terms(G, items, degree=2)
    moved = Chain.from_terms(G, [(a, [G.mul(shift, x) for x in xs]) for a, xs in items], degree=2)
    assert c == moved
