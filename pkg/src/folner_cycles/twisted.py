"""Twisted coefficients: signed-permutation modules through a cyclic quotient.

A :class:`NormedModule` is R^d with the l1 norm, on which Gamma acts through
a homomorphism ``phi: Gamma -> Z/m`` followed by powers of one signed
permutation.  Signed permutations are l1 isometries, so this is a normed
module in the required sense, and the finite image keeps the coinvariants
A_N and their quotient seminorm exactly computable.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product
from math import gcd

from .chains import Chain, _accumulate, _add_at, as_fraction
from .errors import MalformedInput
from .groups import parse_group, same_group
from .lp import l1_minimize, row_reduce, solve_linear

ZERO = Fraction(0)


def _apply(perm, v):
    out = [ZERO] * len(v)
    for i, p in enumerate(perm):
        x = v[i]
        if x:
            out[abs(p) - 1] += x if p > 0 else -x
    return tuple(out)


def _compose(p, q):
    """Signed permutation ``p o q`` in the same +-(index+1) notation."""
    out = []
    for qi in q:
        target = p[abs(qi) - 1]
        out.append(target if qi > 0 else -target)
    return tuple(out)


class NormedModule:
    def __init__(self, group, dimension, modulus, weights, action, labels=None):
        self.group = group
        self.dimension = int(dimension)
        self.modulus = int(modulus)
        self.weights = tuple(int(w) % self.modulus for w in weights)
        self.action = tuple(int(a) for a in action)
        self.labels = tuple(labels) if labels else tuple(f"e{i}" for i in range(self.dimension))
        d, m = self.dimension, self.modulus
        if d < 1 or m < 1:
            raise MalformedInput("module dimension and quotient order must be positive")
        if len(self.weights) != group.dim:
            raise MalformedInput(f"module map needs {group.dim} weights for {group.spec}")
        if sorted(abs(a) for a in self.action) != list(range(1, d + 1)):
            raise MalformedInput(f"{list(self.action)} is not a signed permutation of {d} letters")
        cyclic, heis, _ = group._layout
        for i, n in cyclic:
            if (self.weights[i] * n) % m:
                raise MalformedInput(f"coordinate {i} has order {n}; its image must have order dividing it")
        for o in heis:
            if self.weights[o + 2]:
                raise MalformedInput("the Heisenberg center must map to 0 (it is a commutator)")
        powers = [tuple(range(1, d + 1))]
        for _ in range(m):
            powers.append(_compose(self.action, powers[-1]))
        if powers[m] != powers[0]:
            raise MalformedInput(f"the action generator does not have order dividing {m}; "
                                 "the action would not factor through Z/{m}")
        self._powers = powers[:m]
        self.zero = (ZERO,) * d

    @classmethod
    def trivial(cls, group):
        return cls(group, 1, 1, [0] * group.dim, [1])

    @classmethod
    def from_json(cls, data, group):
        try:
            quotient = parse_group(data.get("quotient", "Z/1"))
            if quotient.is_finite and len(quotient.atoms()) == 1:
                modulus = quotient.order
            else:
                raise MalformedInput("module quotient must be a finite cyclic group Z/m")
            return cls(group, data["dimension"], modulus, data.get("map", [0] * group.dim),
                       data["action"], data.get("labels"))
        except (KeyError, TypeError) as exc:
            raise MalformedInput(f"bad module spec: {exc}") from exc

    def to_json(self):
        return {"dimension": self.dimension, "quotient": f"Z/{self.modulus}",
                "map": list(self.weights), "action": list(self.action),
                "labels": list(self.labels)}

    def __eq__(self, other):
        return (isinstance(other, NormedModule) and same_group(self.group, other.group)
                and (self.dimension, self.modulus, self.weights, self.action)
                == (other.dimension, other.modulus, other.weights, other.action))

    def __hash__(self):
        return hash((self.dimension, self.modulus, self.weights, self.action))

    def __repr__(self):
        return f"NormedModule(dim={self.dimension}, Z/{self.modulus}, map={list(self.weights)})"

    def phi(self, g):
        return sum(w * x for w, x in zip(self.weights, g)) % self.modulus

    def act(self, group, g, v):
        j = self.phi(g)
        return v if j == 0 else _apply(self._powers[j], v)

    def act_power(self, j, v):
        return _apply(self._powers[j % self.modulus], v)

    def coerce(self, v):
        if not isinstance(v, (list, tuple)):
            v = [v]
        if len(v) != self.dimension:
            raise MalformedInput(f"module element needs {self.dimension} entries")
        return tuple(as_fraction(x) for x in v)

    def add(self, a, b):
        return tuple(x + y for x, y in zip(a, b))

    def is_zero(self, a):
        return not any(a)

    def norm(self, a):
        return sum((abs(x) for x in a), ZERO)


class CoinvariantModule:
    """A_N over Q = Gamma/N with the quotient seminorm.

    Classes are stored by their canonical representative: the vector reduced
    against an echelon basis of W = span{a - nu.a : nu in N}.
    """

    def __init__(self, base, ext):
        if not same_group(base.group, ext.gamma):
            raise MalformedInput("module group and extension group differ")
        self.base = base
        self.ext = ext
        self.group = ext.quotient
        m = base.modulus
        images = [base.phi(g.coords) for g in ext.normal_generators()]
        step = m
        for im in images:
            step = gcd(step, im)
        self.step = step % m if m else 0  # image of N in Z/m is generated by `step`
        self.nu = _preimage(ext, base, images, self.step)
        d = base.dimension
        if self.step == 0:
            spanning = []
        else:
            spanning = []
            for b in range(d):
                e = [ZERO] * d
                e[b] = Fraction(1)
                moved = base.act_power(self.step, tuple(e))
                spanning.append(tuple(x - y for x, y in zip(e, moved)))
        self.spanning = spanning
        self.echelon = row_reduce(spanning)
        self.zero = (ZERO,) * d
        self._norms = {}

    def __eq__(self, other):
        return (isinstance(other, CoinvariantModule) and self.base == other.base
                and self.ext == other.ext)

    def __hash__(self):
        return hash((self.base, self.ext))

    def to_json(self):
        out = self.base.to_json()
        out["coinvariants_of"] = self.ext.normal_spec if isinstance(self.ext.normal_spec, str) \
            else ",".join(self.ext.normal_spec)
        return out

    def reduce(self, v):
        v = list(v)
        for p, row in self.echelon:
            f = v[p]
            if f:
                v = [a - f * b for a, b in zip(v, row)]
        return tuple(v)

    def coerce(self, v):
        return self.reduce(self.base.coerce(v))

    def act(self, group, q, v):
        return self.reduce(self.base.act(self.ext.gamma, self.ext.section_coords(q), v))

    def add(self, a, b):
        return tuple(x + y for x, y in zip(a, b))

    def is_zero(self, a):
        return not any(a)

    def minimal_representative(self, v):
        """(seminorm, representative in A of the class of v attaining it)."""
        v = tuple(Fraction(x) for x in v)
        if not self.spanning:
            return self.base.norm(v), v
        cols = [{i: x for i, x in enumerate(w) if x} for w in self.spanning]
        value, y = l1_minimize(cols, {i: x for i, x in enumerate(v) if x})
        rep = list(v)
        for coef, w in zip(y, self.spanning):
            if coef:
                rep = [a + coef * b for a, b in zip(rep, w)]
        return value, tuple(rep)

    def norm(self, a):
        a = tuple(a)
        if a not in self._norms:
            self._norms[a] = self.minimal_representative(a)[0]
        return self._norms[a]

    def express(self, w):
        """y with (I - P^step) y = w, for w in W; None when w is not in W."""
        if not any(w):
            return self.zero
        if not self.spanning:
            return None
        d = self.base.dimension
        cols = [{i: x for i, x in enumerate(s) if x} for s in self.spanning]
        y = solve_linear(cols, {i: x for i, x in enumerate(w) if x})
        if y is None:
            return None
        return tuple(y[:d])


def _preimage(ext, module, images, step):
    """An element of N (Gamma coordinates) whose image in Z/m is ``step``."""
    G = ext.gamma
    if step == 0:
        return G.identity_coords
    m = module.modulus
    gens = [g.coords for g in ext.normal_generators()]
    for exps in product(range(m), repeat=len(gens)):
        if sum(e * im for e, im in zip(exps, images)) % m == step:
            out = G.identity_coords
            for e, g in zip(exps, gens):
                for _ in range(e):
                    out = G.mul(out, g)
            return out
    raise AssertionError("image generator not hit by N")


def coinvariant_seminorm(m, ext, module):
    """Quotient seminorm of the class of ``m`` in the N-coinvariants."""
    return CoinvariantModule(module, ext).norm(module.coerce(m))


def twisted_chain(module, items, degree=None):
    """Chain with coefficients in ``module`` from ``(vector, entries)`` pairs."""
    return Chain.from_terms(module.group, items, degree=degree, module=module)


def twisted_average(c, F, ext):
    from .averaging import average
    return average(c, F, ext)


def twisted_pushforward(ext, c):
    """Project tuples to Q and coefficients to their coinvariant classes."""
    if not same_group(c.group, ext.gamma):
        from .errors import DescriptorMismatch
        raise DescriptorMismatch(f"chain over {c.group.spec}, extension over {ext.gamma.spec}")
    target = CoinvariantModule(c.module, ext)
    acc = {}
    for key, coeff in c.terms.items():
        img = tuple(ext.project_coords(x) for x in key)
        _add_at(acc, target, img, target.reduce(coeff))
    return Chain(ext.quotient, c.degree, acc, target, _trusted=True)


def twisted_lift(ext, z):
    """Lift a chain over Q with A_N coefficients, choosing norm-minimal representatives."""
    coeffs = z.module
    acc = {}
    for key, cls in z.terms.items():
        _, rep = coeffs.minimal_representative(cls)
        _accumulate(acc, ext.gamma, coeffs.base, [ext.section_coords(x) for x in key], rep)
    return Chain(ext.gamma, z.degree, acc, coeffs.base, _trusted=True)
