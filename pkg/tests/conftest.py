import random
from fractions import Fraction

import pytest

from folner_cycles import Chain, parse_extension, parse_group

GROUPS = ["Z^2", "Heis3", "Z/2xZ"]


def random_chain(group, degree, rng, nterms=3, bound=2, module=None):
    items = []
    for _ in range(nterms):
        entries = [group.identity_coords] + [group.random_coords(rng, bound) for _ in range(degree)]
        if module is None:
            coeff = Fraction(rng.randint(-4, 4), rng.randint(1, 3))
        else:
            coeff = [Fraction(rng.randint(-3, 3), rng.randint(1, 2)) for _ in range(module.dimension)]
        items.append((coeff, entries))
    return Chain.from_terms(group, items, degree=degree, module=module)


def random_subset(ext, rng, size, bound=2):
    N = ext.normal
    out = {N.identity_coords}
    for _ in range(50):
        if len(out) >= size:
            break
        out.add(N.random_coords(rng, bound))
    return [ext.embed_coords(x) for x in sorted(out)]


def cross_cycle(group, x, y, coeff=1):
    """[e, x, xy] - [e, y, xy] for commuting x, y: a cycle."""
    xy = group.mul(x, y)
    e = group.identity_coords
    return Chain.from_terms(group, [(coeff, [e, x, xy]), (-coeff, [e, y, xy])])


def torus_chain():
    G = parse_group("Z^2")
    return cross_cycle(G, (1, 0), (0, 1))


@pytest.fixture
def rng():
    return random.Random(20240601)


@pytest.fixture
def z2():
    return parse_group("Z^2")


@pytest.fixture
def torus_ext():
    return parse_extension("Z^2", "*,0", "Z")


@pytest.fixture
def torus():
    return torus_chain()
