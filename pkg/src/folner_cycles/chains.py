"""Exact-rational chains in the coinvariants of the simplicial resolution.

A chain of degree n over a group G is a finite combination of diagonal
G-orbits of (n+1)-tuples.  Each orbit is stored through its canonical
representative, the unique tuple whose first entry is the identity, so two
chains are equal exactly when their term dictionaries are equal.

Coefficients are ``Fraction`` for real coefficients.  When a chain carries a
``module`` (see :mod:`folner_cycles.twisted`), coefficients are tuples of
Fractions in that module and canonicalization also moves the coefficient by
the inverse of the first entry.
"""

from __future__ import annotations

import json
from fractions import Fraction
from itertools import product

from .errors import DescriptorMismatch, MalformedInput, NotACycle
from .groups import GroupElement, parse_group, same_group

ZERO = Fraction(0)


def as_fraction(x):
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise MalformedInput("floating point coefficients are not accepted; use 'p/q' strings")
    try:
        return Fraction(x)
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise MalformedInput(f"bad rational {x!r}") from exc


def _coords(group, g):
    if isinstance(g, GroupElement):
        if not same_group(g.group, group):
            raise DescriptorMismatch(f"element {g} is not in {group.spec}")
        return g.coords
    return group.reduce(g)


def canonical_key(group, entries):
    """Left-translate raw coordinate tuples so the first entry is the identity."""
    first = entries[0]
    if first == group.identity_coords:
        return tuple(entries)
    left = group.inv(first)
    return tuple(group.mul(left, g) for g in entries)


def canonicalize(entries):
    """Canonical representative of the diagonal orbit of ``entries``."""
    entries = list(entries)
    if not entries:
        raise MalformedInput("cannot canonicalize an empty tuple")
    group = entries[0].group
    raw = [_coords(group, g) for g in entries]
    return tuple(GroupElement(group, c) for c in canonical_key(group, raw))


class Chain:
    """Immutable finite combination of canonical tuples."""

    __slots__ = ("group", "degree", "terms", "module")

    def __init__(self, group, degree, terms=None, module=None, *, _trusted=False):
        self.group = group
        self.degree = degree
        self.module = module
        if _trusted:
            self.terms = terms
            return
        if degree < 0:
            raise MalformedInput("degree must be non-negative")
        acc = {}
        for key, coeff in (terms or {}).items():
            raw = [_coords(group, g) for g in key]
            if len(raw) != degree + 1:
                raise MalformedInput(f"tuple of length {len(raw)} in a degree-{degree} chain")
            _accumulate(acc, group, module, raw, _coerce(module, coeff))
        self.terms = acc

    # -- construction -----------------------------------------------------
    @classmethod
    def zero(cls, group, degree, module=None):
        return cls(group, degree, {}, module, _trusted=True)

    @classmethod
    def from_terms(cls, group, items, degree=None, module=None):
        """Build from ``(coeff, [entry, ...])`` pairs; entries may be raw coordinates."""
        items = list(items)
        if degree is None:
            if not items:
                raise MalformedInput("degree needed for an empty chain")
            degree = len(items[0][1]) - 1
        acc = {}
        for coeff, entries in items:
            raw = [_coords(group, g) for g in entries]
            if len(raw) != degree + 1:
                raise MalformedInput(f"tuple of length {len(raw)} in a degree-{degree} chain")
            _accumulate(acc, group, module, raw, _coerce(module, coeff))
        return cls(group, degree, acc, module, _trusted=True)

    @classmethod
    def simplex(cls, group, entries, coeff=1, module=None):
        return cls.from_terms(group, [(coeff, entries)], module=module)

    # -- algebra ------------------------------------------------------------
    def _compatible(self, other):
        if not same_group(self.group, other.group) or self.degree != other.degree:
            raise DescriptorMismatch(
                f"cannot add a degree-{other.degree} chain over {other.group.spec} "
                f"to a degree-{self.degree} chain over {self.group.spec}")
        if self.module != other.module:
            raise DescriptorMismatch("chains have different coefficient modules")

    def __add__(self, other):
        self._compatible(other)
        acc = dict(self.terms)
        for key, coeff in other.terms.items():
            _add_at(acc, self.module, key, coeff)
        return Chain(self.group, self.degree, acc, self.module, _trusted=True)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, s):
        s = as_fraction(s)
        if s == 0:
            return Chain.zero(self.group, self.degree, self.module)
        if self.module is None:
            terms = {k: s * v for k, v in self.terms.items()}
        else:
            terms = {k: tuple(s * x for x in v) for k, v in self.terms.items()}
        return Chain(self.group, self.degree, terms, self.module, _trusted=True)

    def __rmul__(self, s):
        return self.scale(s)

    def __eq__(self, other):
        if not isinstance(other, Chain):
            return NotImplemented
        return (same_group(self.group, other.group) and self.degree == other.degree
                and self.module == other.module and self.terms == other.terms)

    def __hash__(self):
        return hash((self.degree, frozenset(self.terms.items())))

    def __len__(self):
        return len(self.terms)

    def __bool__(self):
        return bool(self.terms)

    def __repr__(self):
        body = " + ".join(f"{_fmt(v)}*{[list(g) for g in k]}" for k, v in self.items()) or "0"
        return f"Chain[{self.group.spec}, deg {self.degree}]({body})"

    def items(self):
        """Terms in lexicographic order of canonical tuples."""
        return sorted(self.terms.items())

    def is_zero(self):
        return not self.terms

    def coefficient(self, entries):
        key = canonical_key(self.group, [_coords(self.group, g) for g in entries])
        return self.terms.get(key, ZERO if self.module is None else self.module.zero)

    # -- operations -------------------------------------------------------
    def boundary(self):
        return boundary(self)

    def l1_norm(self):
        return l1_norm(self)

    def is_cycle(self):
        return self.degree == 0 or boundary(self).is_zero()

    def right_translate(self, sigma):
        """Entrywise right multiplication by a tuple ``sigma`` (raw coordinates)."""
        g = self.group
        sigma = [_coords(g, s) for s in sigma]
        acc = {}
        for key, coeff in self.terms.items():
            raw = [g.mul(x, s) for x, s in zip(key, sigma)]
            _accumulate(acc, g, self.module, raw, coeff)
        return Chain(g, self.degree, acc, self.module, _trusted=True)


def _coerce(module, coeff):
    if module is None:
        return as_fraction(coeff)
    return module.coerce(coeff)


def _fmt(v):
    if isinstance(v, tuple):
        return "(" + ",".join(str(x) for x in v) + ")"
    return str(v)


def _add_at(acc, module, key, coeff):
    old = acc.get(key)
    if old is None:
        new = coeff
    elif module is None:
        new = old + coeff
    else:
        new = module.add(old, coeff)
    if (new == 0) if module is None else module.is_zero(new):
        acc.pop(key, None)
    else:
        acc[key] = new


def _accumulate(acc, group, module, raw, coeff):
    first = raw[0]
    if first != group.identity_coords:
        left = group.inv(first)
        raw = [group.mul(left, x) for x in raw]
        if module is not None:
            coeff = module.act(group, left, coeff)
    _add_at(acc, module, tuple(raw), coeff)


def boundary(c):
    """Alternating sum of face deletions, re-canonicalized."""
    if c.degree == 0:
        raise MalformedInput("the boundary of a degree-0 chain is not defined here")
    g = c.group
    acc = {}
    module = c.module
    for key, coeff in c.terms.items():
        neg = _negate(module, coeff)
        for j in range(c.degree + 1):
            face = key[:j] + key[j + 1:]
            _accumulate(acc, g, module, list(face), coeff if j % 2 == 0 else neg)
    return Chain(g, c.degree - 1, acc, module, _trusted=True)


def _negate(module, coeff):
    if module is None:
        return -coeff
    return tuple(-x for x in coeff)


def l1_norm(c):
    if c.module is None:
        return sum((abs(v) for v in c.terms.values()), ZERO)
    return sum((c.module.norm(v) for v in c.terms.values()), ZERO)


def pushforward(ext, c):
    """Entrywise image under the projection onto the quotient."""
    if not same_group(c.group, ext.gamma):
        raise DescriptorMismatch(f"chain over {c.group.spec}, extension over {ext.gamma.spec}")
    if c.module is not None:
        from .twisted import twisted_pushforward
        return twisted_pushforward(ext, c)
    q = ext.quotient
    acc = {}
    for key, coeff in c.terms.items():
        img = tuple(ext.project_coords(x) for x in key)
        _add_at(acc, None, img, coeff)
    return Chain(q, c.degree, acc, None, _trusted=True)


def section_lift(ext, z):
    """Lift a chain over the quotient entrywise through the section."""
    if not same_group(z.group, ext.quotient):
        raise DescriptorMismatch(f"chain over {z.group.spec}, quotient is {ext.quotient.spec}")
    if z.module is not None:
        raise MalformedInput("section_lift takes real coefficients; use twisted lifts for modules")
    acc = {}
    for key, coeff in z.terms.items():
        _accumulate(acc, ext.gamma, None, [ext.section_coords(x) for x in key], coeff)
    return Chain(ext.gamma, z.degree, acc, None, _trusted=True)


def require_cycle(c, what="chain"):
    if c.degree == 0:
        return
    d = boundary(c)
    if not d.is_zero():
        raise NotACycle(f"{what} is not a cycle", witness=chain_to_json(d))


# -- cocycles --------------------------------------------------------------

class Cocycle:
    """Real-valued group cocycle in inhomogeneous coordinates.

    ``evaluate`` takes ``degree`` raw coordinate tuples.  Pairing with the
    canonical tuple (e, g1, ..., gn) evaluates on (g1, g1^-1 g2, ...).
    """

    def __init__(self, group, degree, evaluate, name="cocycle"):
        self.group = group
        self.degree = degree
        self.evaluate = evaluate
        self.name = name

    def __repr__(self):
        return f"Cocycle({self.name}, deg {self.degree})"

    def __call__(self, *args):
        return self.evaluate(*[_coords(self.group, a) for a in args])

    def coboundary_at(self, args):
        """(delta f)(g_1, ..., g_{n+1}); zero for a cocycle."""
        g = self.group
        args = [_coords(g, a) for a in args]
        n = self.degree
        total = Fraction(self.evaluate(*args[1:]))
        for i in range(n):
            merged = args[:i] + [g.mul(args[i], args[i + 1])] + args[i + 2:]
            total += (-1) ** (i + 1) * self.evaluate(*merged)
        total += (-1) ** (n + 1) * self.evaluate(*args[:n])
        return total

    @classmethod
    def homomorphism(cls, group, weights, name=None):
        """Homomorphism to R given by integer/rational weights on coordinates."""
        weights = [as_fraction(w) for w in weights]
        if len(weights) != group.dim:
            raise MalformedInput(f"{group.spec} needs {group.dim} weights")
        if any(weights[i] for i in _torsion_coordinates(group)):
            raise MalformedInput(
                "homomorphisms to R vanish on finite cyclic coordinates and the Heisenberg center")
        support = [(i, w) for i, w in enumerate(weights) if w]

        def f(x):
            return sum((w * x[i] for i, w in support), ZERO)
        return cls(group, 1, f, name or f"hom{[str(w) for w in weights]}")

    @classmethod
    def cup(cls, *factors):
        group = factors[0].group
        degs = [f.degree for f in factors]

        def ev(*args):
            out = Fraction(1)
            pos = 0
            for f, d in zip(factors, degs):
                out *= f.evaluate(*args[pos:pos + d])
                pos += d
                if not out:
                    return ZERO
            return out
        return cls(group, sum(degs), ev, "∪".join(f.name for f in factors))

    @classmethod
    def bilinear(cls, group, matrix, name="bilinear"):
        """omega(x, y) = sum_ij M_ij x_i y_j over coordinates admitting homomorphisms."""
        m = [[as_fraction(v) for v in row] for row in matrix]
        entries = [(i, j, v) for i, row in enumerate(m) for j, v in enumerate(row) if v]
        banned = _torsion_coordinates(group)
        if any(i in banned or j in banned for i, j, _ in entries):
            raise MalformedInput("bilinear forms must vanish on torsion and central coordinates")

        def ev(x, y):
            return sum((v * x[i] * y[j] for i, j, v in entries), ZERO)
        return cls(group, 2, ev, name)


def _torsion_coordinates(group):
    cyclic, heis, _ = group._layout
    return {i for i, _ in cyclic} | {o + 2 for o in heis}


def torus_form(group=None):
    """omega((a,b),(c,d)) = a*d on Z^2."""
    from .groups import FreeAbelian
    group = group or FreeAbelian(2)
    return Cocycle.bilinear(group, [[0, 1], [0, 0]], name="omega")


def cocycle_catalogue(group, degree):
    """Coordinate homomorphisms and their cup products in the given degree."""
    banned = _torsion_coordinates(group)
    homs = []
    for i in range(group.dim):
        if i in banned:
            continue
        w = [0] * group.dim
        w[i] = 1
        homs.append(Cocycle.homomorphism(group, w, name=f"x{i}"))
    if degree == 0:
        return [Cocycle(group, 0, lambda: Fraction(1), "unit")]
    return [Cocycle.cup(*fs) if len(fs) > 1 else fs[0] for fs in product(homs, repeat=degree)]


def inhomogeneous(group, key):
    out = []
    for a, b in zip(key, key[1:]):
        out.append(group.mul(group.inv(a), b))
    return out


def pair(f, c):
    """Evaluate a cocycle on a chain with real coefficients."""
    if f.degree != c.degree:
        raise MalformedInput(f"cannot pair a degree-{f.degree} cocycle with a degree-{c.degree} chain")
    if c.module is not None:
        raise MalformedInput("pairing is defined for real coefficients only")
    g = c.group
    total = ZERO
    for key, coeff in c.terms.items():
        total += coeff * f.evaluate(*inhomogeneous(g, key))
    return total


# -- JSON ------------------------------------------------------------------

def chain_to_json(c):
    out = {"degree": c.degree, "group": c.group.spec}
    if c.module is not None:
        out["module"] = c.module.to_json()
    terms = []
    for key, coeff in c.items():
        value = [str(x) for x in coeff] if isinstance(coeff, tuple) else str(coeff)
        terms.append({"coeff": value, "tuple": [list(g) for g in key]})
    out["terms"] = terms
    return out


def chain_from_json(data, group=None, module=None):
    if not isinstance(data, dict) or "terms" not in data:
        raise MalformedInput("chain JSON needs 'degree', 'group' and 'terms'")
    if group is None:
        if "group" not in data:
            raise MalformedInput("chain JSON needs a 'group'")
        group = parse_group(data["group"])
    elif "group" in data and not same_group(parse_group(data["group"]), group):
        from .errors import InconsistentGroups
        raise InconsistentGroups(f"chain is over {data['group']}, expected {group.spec}")
    if module is None and data.get("module") is not None:
        from .twisted import NormedModule
        module = NormedModule.from_json(data["module"], group)
    try:
        items = [(t["coeff"], t["tuple"]) for t in data["terms"]]
    except (KeyError, TypeError) as exc:
        raise MalformedInput("each term needs 'coeff' and 'tuple'") from exc
    degree = data.get("degree")
    if degree is None:
        if not items:
            raise MalformedInput("an empty chain needs an explicit degree")
        degree = len(items[0][1]) - 1
    return Chain.from_terms(group, items, degree=int(degree), module=module)


def dump_chain(c, **extra):
    data = chain_to_json(c)
    data.update(extra)
    return json.dumps(data, indent=1, sort_keys=False)


def load_chain(path, group=None):
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise MalformedInput(f"{path}: {exc}") from exc
    return chain_from_json(data, group)
