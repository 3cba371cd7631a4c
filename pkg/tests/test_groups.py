import random

import pytest

from folner_cycles import (DescriptorMismatch, GroupElement, InconsistentGroups, MalformedInput,
                           compose, embed, enumerate_ball, identity, inverse, parse_extension,
                           parse_group, project, section)
from folner_cycles.groups import DirectProduct, FiniteCyclic, FreeAbelian, Heisenberg3

from oracles import heis_inv, heis_mul, words_ball

SPECS = ["Z", "Z^2", "Z/4", "Heis3", "Z/2xZ", "Z/3xHeis3", "ZxZ/6xZ"]


def test_compose_examples():
    Z2 = parse_group("Z^2")
    assert compose(Z2.element(2, 3), Z2.element(4, 4)).coords == (6, 7)
    H = parse_group("Heis3")
    assert compose(H.element(1, 0, 0), H.element(0, 1, 0)).coords == (1, 1, 1)
    C4 = parse_group("Z/4")
    assert compose(C4.element(3), C4.element(2)).coords == (1,)


def test_compose_rejects_mixed_groups():
    with pytest.raises(DescriptorMismatch):
        compose(parse_group("Z").element(1), parse_group("Z/2").element(1))


def test_cyclic_coordinates_are_reduced():
    assert parse_group("Z/4").element(7).coords == (3,)
    assert parse_group("Z/2xZ").element(-1, 5).coords == (1, 5)


def test_heisenberg_matches_matrix_law():
    rng = random.Random(3)
    H = parse_group("Heis3")
    for _ in range(300):
        x, y = H.random_coords(rng, 5), H.random_coords(rng, 5)
        assert H.mul(x, y) == heis_mul(x, y)
        assert H.inv(x) == heis_inv(x)


@pytest.mark.parametrize("spec", SPECS)
def test_group_axioms(spec):
    G = parse_group(spec)
    rng = random.Random(hash(spec) % 1000)
    e = G.identity_coords
    for _ in range(1000):
        x, y, z = (G.random_coords(rng, 4) for _ in range(3))
        assert G.mul(G.mul(x, y), z) == G.mul(x, G.mul(y, z))
        assert G.mul(x, e) == x == G.mul(e, x)
        assert G.mul(G.inv(x), x) == e == G.mul(x, G.inv(x))


def test_element_api():
    H = parse_group("Heis3")
    x = H.element(1, 2, 3)
    assert (x * inverse(x)) == identity(H)
    assert x.inverse() * x == H.identity()


@pytest.mark.parametrize("text, atoms", [
    ("Z^3", (("Z", 0),) * 3),
    ("Z/2xZ", (("C", 2), ("Z", 0))),
    ("Heis3", (("H", 0),)),
    ("ZxZ", (("Z", 0),) * 2),
])
def test_parse_group(text, atoms):
    assert tuple(parse_group(text).atoms()) == atoms


def test_parse_group_canonical_names():
    assert parse_group("ZxZ") == parse_group("Z^2") == FreeAbelian(2)
    assert parse_group("Z/2xZ") == DirectProduct((FiniteCyclic(2), FreeAbelian(1)))
    assert parse_group("Heis3") == Heisenberg3()
    assert parse_group("Z/2xZ").spec == "Z/2xZ"


@pytest.mark.parametrize("bad", ["", "Q", "Z^", "Z/0", "Zx", "Heis4"])
def test_parse_group_rejects(bad):
    with pytest.raises(MalformedInput):
        parse_group(bad)


def test_ball_examples():
    Z = parse_group("Z")
    ball = enumerate_ball(Z, [Z.element(1)], 2)
    assert sorted(x.coords[0] for x in ball) == [-2, -1, 0, 1, 2]
    Z2 = parse_group("Z^2")
    assert len(enumerate_ball(Z2, Z2.generators(), 1)) == 5
    assert enumerate_ball(Z2, Z2.generators(), 0) == {Z2.identity()}


def test_ball_empty_generating_set():
    Z = parse_group("Z")
    assert enumerate_ball(Z, [], 3) == {Z.identity()}


@pytest.mark.parametrize("radius", [0, 1, 2, 3, 4])
def test_heisenberg_ball_matches_word_enumeration(radius):
    H = parse_group("Heis3")
    gens = [H.element(1, 0, 0), H.element(0, 1, 0)]
    ours = {x.coords for x in enumerate_ball(H, gens, radius)}
    assert ours == words_ball([(1, 0, 0), (0, 1, 0)], radius, heis_mul, heis_inv, (0, 0, 0))


def test_heisenberg_ball_radius_two_size():
    # word enumeration: 1 + 4 + 12 distinct elements
    H = parse_group("Heis3")
    assert len(enumerate_ball(H, [H.element(1, 0, 0), H.element(0, 1, 0)], 2)) == 17


@pytest.mark.parametrize("spec", ["Z^2", "Heis3", "Z/2xZ"])
def test_ball_monotone(spec):
    G = parse_group(spec)
    balls = [enumerate_ball(G, G.generators(), r) for r in range(4)]
    for a, b in zip(balls, balls[1:]):
        assert a <= b


# -- extensions ---------------------------------------------------------------

EXTENSIONS = [
    ("Z^2", "*,0"), ("Z^2", "0,*"), ("Z^2", "whole"), ("Z^2", "trivial"),
    ("Heis3", "center"), ("Heis3", "whole"), ("Heis3", "0,*,*"), ("Heis3", "*,0,*"),
    ("Z/2xZ", "*,0"), ("Z/2xZ", "0,*"), ("Z", "2"), ("Z/6", "3"), ("Z/4xZ^2", "2,*,0"),
]


def test_projection_examples():
    ext = parse_extension("Z^2", "*,0", "Z")
    G = ext.gamma
    assert project(ext, G.element(3, 5)).coords == (5,)
    assert project(ext, G.identity()) == ext.quotient.identity()
    hx = parse_extension("Heis3", "center", "Z^2")
    assert project(hx, hx.gamma.element(1, 2, 7)).coords == (1, 2)
    assert hx.is_central


def test_section_and_embed_examples():
    ext = parse_extension("Heis3", "center")
    assert section(ext, ext.quotient.element(4, -1)).coords == (4, -1, 0)
    assert embed(ext, ext.normal.element(5)).coords == (0, 0, 5)
    e2 = parse_extension("Z", "2")
    assert e2.quotient.spec == "Z/2"
    assert e2.embed_coords((3,)) == (6,)
    assert e2.restrict_coords((5,)) is None


@pytest.mark.parametrize("spec, normal", EXTENSIONS)
def test_extension_invariants(spec, normal):
    ext = parse_extension(spec, normal)
    G, N, Q = ext.gamma, ext.normal, ext.quotient
    rng = random.Random(17)
    for _ in range(1000):
        g, h = G.random_coords(rng, 4), G.random_coords(rng, 4)
        n = N.random_coords(rng, 4)
        q = Q.random_coords(rng, 4)
        assert ext.project_coords(ext.embed_coords(n)) == Q.identity_coords
        assert ext.project_coords(ext.section_coords(q)) == q
        assert ext.project_coords(G.mul(g, h)) == Q.mul(ext.project_coords(g), ext.project_coords(h))
        conj = G.mul(G.mul(g, ext.embed_coords(n)), G.inv(g))
        assert ext.restrict_coords(conj) is not None
        assert ext.restrict_coords(ext.embed_coords(n)) == n
        # membership in N is exactly the kernel of the projection
        assert (ext.restrict_coords(g) is not None) == (ext.project_coords(g) == Q.identity_coords)


def test_embed_is_homomorphism():
    ext = parse_extension("Heis3", "0,*,*")
    N, G = ext.normal, ext.gamma
    rng = random.Random(5)
    for _ in range(200):
        a, b = N.random_coords(rng), N.random_coords(rng)
        assert ext.embed_coords(N.mul(a, b)) == G.mul(ext.embed_coords(a), ext.embed_coords(b))


def test_extension_errors():
    with pytest.raises(InconsistentGroups):
        parse_extension("Z^2", "*")
    with pytest.raises(InconsistentGroups):
        parse_extension("Z^2", "*,0", "Z^2")
    with pytest.raises(InconsistentGroups):
        parse_extension("Heis3", "*,*,0")
    with pytest.raises(InconsistentGroups):
        parse_extension("Z/6", "4")
    with pytest.raises(MalformedInput):
        parse_extension("Z", "x")
    ext = parse_extension("Z^2", "*,0")
    with pytest.raises(DescriptorMismatch):
        project(ext, parse_group("Z").element(1))


def test_elements_sort_lexicographically():
    G = parse_group("Z^2")
    xs = [G.element(1, 0), G.element(0, 5), G.element(0, -1)]
    assert [x.coords for x in sorted(xs)] == [(0, -1), (0, 5), (1, 0)]
    assert GroupElement(G, (0, 0)) == G.identity()
