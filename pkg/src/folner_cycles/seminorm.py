"""Fillings and l1-seminorm upper bounds over a truncated chain basis."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from .chains import Chain, boundary, chain_to_json, l1_norm, require_cycle
from .errors import MalformedInput
from .groups import enumerate_ball, same_group
from .lp import l1_minimize, min_l1_solution, solve_linear


class Truncation:
    """Canonical tuples (e, g_1, ..., g_n) with every g_i in a word-metric ball."""

    def __init__(self, generating_set, radius):
        gens = list(generating_set)
        if not gens:
            raise MalformedInput("a truncation needs a non-empty generating set")
        if radius < 0:
            raise MalformedInput("radius must be non-negative")
        self.group = gens[0].group
        self.generating_set = gens
        self.radius = radius
        self.ball = sorted(x.coords for x in enumerate_ball(self.group, gens, radius))

    @classmethod
    def standard(cls, group, radius):
        return cls(group.generators(), radius)

    def basis(self, degree):
        ident = self.group.identity_coords
        return [(ident,) + rest for rest in product(self.ball, repeat=degree)]

    def __repr__(self):
        return f"Truncation({self.group.spec}, radius={self.radius}, |ball|={len(self.ball)})"


def _slots(module):
    return [None] if module is None else list(range(module.dimension))


def _unit(module, slot):
    if module is None:
        return Fraction(1)
    v = [Fraction(0)] * module.dimension
    v[slot] = Fraction(1)
    return tuple(v)


def _columns(t, degree, module):
    """Boundaries of the basis chains of the given degree, as sparse dicts."""
    cols, labels = [], []
    for key in t.basis(degree):
        for slot in _slots(module):
            b = Chain(t.group, degree, {key: _unit(module, slot)}, module, _trusted=True)
            cols.append(_flatten(boundary(b)))
            labels.append((key, slot))
    return cols, labels


def _flatten(c):
    if c.module is None:
        return dict(c.terms)
    out = {}
    for key, v in c.terms.items():
        for i, x in enumerate(v):
            if x:
                out[(key, i)] = x
    return out


def _assemble(t, degree, module, labels, y):
    acc = {}
    for (key, slot), coef in zip(labels, y):
        if not coef:
            continue
        if module is None:
            acc[key] = acc.get(key, 0) + coef
        else:
            v = list(acc.get(key, module.zero))
            v[slot] += coef
            acc[key] = tuple(v)
    return Chain(t.group, degree, acc, module)


def _check(c, t):
    if not same_group(c.group, t.group):
        raise MalformedInput(f"chain over {c.group.spec}, truncation over {t.group.spec}")
    if c.module is not None and not hasattr(c.module, "dimension"):
        raise MalformedInput("the oracle works with l1 coefficient modules only")


def fill_boundary(z, t, minimal=True):
    """A chain b in the truncation with boundary exactly z, or None.

    With ``minimal`` the filling of least l1 norm is returned.
    """
    _check(z, t)
    require_cycle(z, "chain to fill")
    degree = z.degree + 1
    cols, labels = _columns(t, degree, z.module)
    target = _flatten(z)
    if not target:
        return Chain.zero(t.group, degree, z.module)
    y = solve_linear(cols, target)
    if y is None:
        return None
    if minimal:
        y = min_l1_solution(cols, target)
    b = _assemble(t, degree, z.module, labels, y)
    assert boundary(b) == z
    return b


@dataclass
class SeminormBound:
    value: Fraction
    witness: Chain
    radius: int

    def to_json(self):
        return {"value": str(self.value), "radius": self.radius,
                "witness": chain_to_json(self.witness)}


def seminorm_upper_bound(c, t):
    """min over b in the truncation of |c + boundary(b)|_1, with a minimizing b."""
    _check(c, t)
    require_cycle(c, "chain")
    degree = c.degree + 1
    cols, labels = _columns(t, degree, c.module)
    value, y = l1_minimize(cols, _flatten(c))
    w = _assemble(t, degree, c.module, labels, y)
    assert l1_norm(c + boundary(w)) == value
    return SeminormBound(value, w, t.radius)
