"""Canonical-form arithmetic for a closed catalogue of finitely generated groups.

Every group is a product of *atoms*: infinite cyclic coordinates ``Z``,
finite cyclic coordinates ``Z/m`` and copies of the integral Heisenberg
group.  Elements are stored as flat integer tuples, one integer per
coordinate, so equality and ordering are plain tuple equality and
lexicographic order.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass
from functools import cached_property
from itertools import product

from .errors import DescriptorMismatch, InconsistentGroups, MalformedInput

Coords = tuple  # tuple[int, ...]


class GroupDescriptor:
    """Base class; subclasses only declare their atoms."""

    def atoms(self):
        raise NotImplementedError

    # -- derived layout --------------------------------------------------
    @cached_property
    def dim(self):
        return sum(3 if kind == "H" else 1 for kind, _ in self.atoms())

    @cached_property
    def _layout(self):
        cyclic, heis, free = [], [], []
        pos = 0
        for kind, m in self.atoms():
            if kind == "Z":
                free.append(pos)
                pos += 1
            elif kind == "C":
                cyclic.append((pos, m))
                pos += 1
            else:
                heis.append(pos)
                pos += 3
        return tuple(cyclic), tuple(heis), tuple(free)

    @property
    def is_abelian(self):
        return not self._layout[1]

    @property
    def is_finite(self):
        return all(kind == "C" for kind, _ in self.atoms())

    @property
    def order(self):
        if not self.is_finite:
            return None
        n = 1
        for _, m in self.atoms():
            n *= m
        return n

    # -- group law on raw coordinates -------------------------------------
    @cached_property
    def identity_coords(self):
        return (0,) * self.dim

    def mul(self, x, y):
        cyclic, heis, _ = self._layout
        if not cyclic and not heis:
            return tuple([a + b for a, b in zip(x, y)])
        z = [a + b for a, b in zip(x, y)]
        for i, m in cyclic:
            z[i] %= m
        for o in heis:
            z[o + 2] += x[o] * y[o + 1]
        return tuple(z)

    def inv(self, x):
        cyclic, heis, _ = self._layout
        z = [-a for a in x]
        for i, m in cyclic:
            z[i] %= m
        for o in heis:
            z[o + 2] = -x[o + 2] + x[o] * x[o + 1]
        return tuple(z)

    def reduce(self, coords):
        coords = tuple(int(a) for a in coords)
        if len(coords) != self.dim:
            raise MalformedInput(
                f"{self.spec} expects {self.dim} coordinates, got {len(coords)}",
                coords=list(coords))
        cyclic = self._layout[0]
        if cyclic:
            z = list(coords)
            for i, m in cyclic:
                z[i] %= m
            coords = tuple(z)
        return coords

    def element(self, *coords):
        if len(coords) == 1 and not isinstance(coords[0], int):
            coords = coords[0]
        return GroupElement(self, self.reduce(coords))

    def identity(self):
        return GroupElement(self, self.identity_coords)

    def generators(self):
        """Unit coordinate vectors; they generate every group in the catalogue."""
        out = []
        for i in range(self.dim):
            v = [0] * self.dim
            v[i] = 1
            out.append(self.element(v))
        return out

    def random_coords(self, rng, bound=3):
        cyclic, heis, _ = self._layout
        mods = dict(cyclic)
        return tuple(rng.randrange(mods[i]) if i in mods else rng.randint(-bound, bound)
                     for i in range(self.dim))

    def random_element(self, rng=None, bound=3):
        rng = rng or random.Random()
        return GroupElement(self, self.random_coords(rng, bound))

    def elements(self):
        if not self.is_finite:
            raise ValueError(f"{self.spec} is infinite")
        return [GroupElement(self, c) for c in product(*(range(m) for _, m in self.atoms()))]

    @property
    def spec(self):
        return format_atoms(self.atoms())

    def __str__(self):
        return self.spec


@dataclass(frozen=True, eq=True)
class FreeAbelian(GroupDescriptor):
    rank: int

    def __post_init__(self):
        if self.rank < 1:
            raise MalformedInput(f"rank must be positive, got {self.rank}")

    def atoms(self):
        return (("Z", 0),) * self.rank


@dataclass(frozen=True, eq=True)
class FiniteCyclic(GroupDescriptor):
    modulus: int

    def __post_init__(self):
        if self.modulus < 1:
            raise MalformedInput(f"modulus must be >= 1, got {self.modulus}")

    def atoms(self):
        return (("C", self.modulus),)


@dataclass(frozen=True, eq=True)
class Heisenberg3(GroupDescriptor):
    """Integral Heisenberg group, (a,b,c)(a',b',c') = (a+a', b+b', c+c'+ab')."""

    def atoms(self):
        return (("H", 0),)


@dataclass(frozen=True, eq=True)
class DirectProduct(GroupDescriptor):
    factors: tuple

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(self.factors))
        if not self.factors:
            raise MalformedInput("a direct product needs at least one factor")

    def atoms(self):
        return tuple(a for f in self.factors for a in f.atoms())


TRIVIAL = FiniteCyclic(1)


@dataclass(frozen=True)
class GroupElement:
    group: GroupDescriptor
    coords: tuple

    def __mul__(self, other):
        return compose(self, other)

    def inverse(self):
        return inverse(self)

    def __repr__(self):
        return f"{self.group.spec}{list(self.coords)}"

    def __lt__(self, other):
        return self.coords < other.coords


def _check_same(x, y):
    if x.group != y.group and not same_group(x.group, y.group):
        raise DescriptorMismatch(f"cannot combine elements of {x.group} and {y.group}")


def compose(x, y):
    _check_same(x, y)
    return GroupElement(x.group, x.group.mul(x.coords, y.coords))


def inverse(x):
    return GroupElement(x.group, x.group.inv(x.coords))


def identity(group):
    return group.identity()


# -- spec strings ----------------------------------------------------------

_ATOM_RE = re.compile(r"^(?:Z(?:\^(\d+))?|Z/(\d+)|Heis3)$")


def format_atoms(atoms):
    parts = []
    run = 0
    for kind, m in list(atoms) + [("END", 0)]:
        if kind == "Z":
            run += 1
            continue
        if run:
            parts.append("Z" if run == 1 else f"Z^{run}")
            run = 0
        if kind == "C":
            parts.append(f"Z/{m}")
        elif kind == "H":
            parts.append("Heis3")
    return "x".join(parts) if parts else "Z/1"


def parse_group(text):
    """Parse ``Z^d``, ``Z/m``, ``Heis3`` and products joined by ``x``."""
    if not isinstance(text, str) or not text.strip():
        raise MalformedInput(f"bad group spec {text!r}")
    factors = []
    for token in text.replace(" ", "").split("x"):
        match = _ATOM_RE.match(token)
        if not match:
            raise MalformedInput(f"bad group factor {token!r} in {text!r}")
        if token == "Heis3":
            factors.append(Heisenberg3())
        elif match.group(2) is not None:
            factors.append(FiniteCyclic(int(match.group(2))))
        else:
            factors.append(FreeAbelian(int(match.group(1) or 1)))
    atoms = [a for f in factors for a in f.atoms()]
    return from_atoms(atoms)


def from_atoms(atoms):
    """Smallest descriptor with the given atom sequence (runs of Z merged)."""
    factors = []
    run = 0
    for kind, m in list(atoms) + [("END", 0)]:
        if kind == "Z":
            run += 1
            continue
        if run:
            factors.append(FreeAbelian(run))
            run = 0
        if kind == "C":
            factors.append(FiniteCyclic(m))
        elif kind == "H":
            factors.append(Heisenberg3())
    if not factors:
        return TRIVIAL
    return factors[0] if len(factors) == 1 else DirectProduct(tuple(factors))


def same_group(g, h):
    """Descriptors describing the same atom sequence (``Z^2`` == ``ZxZ``)."""
    return tuple(g.atoms()) == tuple(h.atoms())


# -- balls -----------------------------------------------------------------

def enumerate_ball(group, generating_set, radius):
    """All products of at most ``radius`` generators or their inverses."""
    if radius < 0:
        raise MalformedInput("radius must be non-negative")
    steps = set()
    for g in generating_set:
        if not same_group(g.group, group):
            raise DescriptorMismatch(f"generator {g} is not in {group}")
        steps.add(g.coords)
        steps.add(group.inv(g.coords))
    seen = {group.identity_coords}
    frontier = [group.identity_coords]
    for _ in range(radius):
        nxt = []
        for x in frontier:
            for s in steps:
                y = group.mul(x, s)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return frozenset(GroupElement(group, c) for c in seen)


# -- extensions ------------------------------------------------------------

class _AbelianPart:
    """One Z or Z/n coordinate; N meets it in ``scale``-multiples (0: trivially)."""

    def __init__(self, pos, modulus, scale):
        self.pos, self.modulus, self.scale = pos, modulus, scale
        if scale == 0:
            self.n_atoms = ()
            self.q_atoms = (("Z", 0),) if modulus == 0 else (("C", modulus),)
        else:
            if modulus and modulus % scale:
                raise InconsistentGroups(f"{scale} does not divide {modulus}")
            self.n_atoms = (("Z", 0),) if modulus == 0 else (("C", modulus // scale),)
            self.q_atoms = () if scale == 1 else (("C", scale),)
        self.central = True

    def project(self, x, out):
        if self.scale == 0:
            out.append(x[self.pos])
        elif self.scale > 1:
            out.append(x[self.pos] % self.scale)

    def section(self, q, qi, out):
        if self.q_atoms:
            out.append(q[qi])
            return qi + 1
        out.append(0)
        return qi

    def embed(self, n, ni, out):
        if self.scale == 0:
            out.append(0)
            return ni
        v = n[ni] * self.scale
        out.append(v % self.modulus if self.modulus else v)
        return ni + 1

    def restrict(self, x, out):
        v = x[self.pos]
        if self.scale == 0:
            return v == 0
        if v % self.scale:
            return False
        out.append(v // self.scale)
        return True


_HEIS_KINDS = {
    ("0", "0", "0"): "trivial",
    ("0", "0", "*"): "center",
    ("*", "*", "*"): "whole",
    ("0", "*", "*"): "kernel_a",
    ("*", "0", "*"): "kernel_b",
}


class _HeisPart:
    def __init__(self, pos, kind):
        self.pos, self.kind = pos, kind
        self.n_atoms, self.q_atoms = {
            "trivial": ((), (("H", 0),)),
            "center": ((("Z", 0),), (("Z", 0), ("Z", 0))),
            "whole": ((("H", 0),), ()),
            "kernel_a": ((("Z", 0), ("Z", 0)), (("Z", 0),)),
            "kernel_b": ((("Z", 0), ("Z", 0)), (("Z", 0),)),
        }[kind]
        self.central = kind in ("trivial", "center")

    def project(self, x, out):
        a, b, c = x[self.pos:self.pos + 3]
        if self.kind == "trivial":
            out.extend((a, b, c))
        elif self.kind == "center":
            out.extend((a, b))
        elif self.kind == "kernel_a":
            out.append(a)
        elif self.kind == "kernel_b":
            out.append(b)

    def section(self, q, qi, out):
        k = self.kind
        if k == "trivial":
            out.extend(q[qi:qi + 3])
            return qi + 3
        if k == "center":
            out.extend((q[qi], q[qi + 1], 0))
            return qi + 2
        if k == "kernel_a":
            out.extend((q[qi], 0, 0))
            return qi + 1
        if k == "kernel_b":
            out.extend((0, q[qi], 0))
            return qi + 1
        out.extend((0, 0, 0))
        return qi

    def embed(self, n, ni, out):
        k = self.kind
        if k == "trivial":
            out.extend((0, 0, 0))
            return ni
        if k == "center":
            out.extend((0, 0, n[ni]))
            return ni + 1
        if k == "whole":
            out.extend(n[ni:ni + 3])
            return ni + 3
        if k == "kernel_a":
            out.extend((0, n[ni], n[ni + 1]))
        else:
            out.extend((n[ni], 0, n[ni + 1]))
        return ni + 2

    def restrict(self, x, out):
        a, b, c = x[self.pos:self.pos + 3]
        k = self.kind
        if k == "trivial":
            return a == b == c == 0
        if k == "center":
            if a or b:
                return False
            out.append(c)
        elif k == "whole":
            out.extend((a, b, c))
        elif k == "kernel_a":
            if a:
                return False
            out.extend((b, c))
        else:
            if b:
                return False
            out.extend((a, c))
        return True


class AmenableExtension:
    """A normal subgroup N of Gamma with quotient Q, plus projection and section.

    N and Q are built coordinate-by-coordinate from a normal-subgroup spec;
    the section is the idempotent lift that inserts zeros in the coordinates
    killed by the projection.
    """

    def __init__(self, gamma, normal_spec):
        self.gamma = gamma
        self.normal_spec = normal_spec
        tokens = _normal_tokens(gamma, normal_spec)
        parts = []
        pos = 0
        ti = 0
        for kind, m in gamma.atoms():
            if kind == "H":
                key = tuple(tokens[ti:ti + 3])
                if key not in _HEIS_KINDS:
                    raise InconsistentGroups(
                        f"{','.join(key)} is not a supported normal subgroup of Heis3")
                parts.append(_HeisPart(pos, _HEIS_KINDS[key]))
                pos += 3
                ti += 3
            else:
                tok = tokens[ti]
                scale = 0 if tok == "0" else 1 if tok == "*" else int(tok)
                parts.append(_AbelianPart(pos, m if kind == "C" else 0, scale))
                pos += 1
                ti += 1
        self._parts = parts
        self.normal = from_atoms([a for p in parts for a in p.n_atoms])
        self.quotient = from_atoms([a for p in parts for a in p.q_atoms])
        self.is_central = all(p.central for p in parts)

    def __repr__(self):
        return f"AmenableExtension({self.gamma.spec}, N={self.normal.spec}, Q={self.quotient.spec})"

    def __eq__(self, other):
        return (isinstance(other, AmenableExtension) and self.gamma == other.gamma
                and _normal_tokens(self.gamma, self.normal_spec)
                == _normal_tokens(other.gamma, other.normal_spec))

    def __hash__(self):
        return hash((self.gamma, tuple(_normal_tokens(self.gamma, self.normal_spec))))

    # raw coordinate maps
    def project_coords(self, x):
        out = []
        for p in self._parts:
            p.project(x, out)
        if not out:
            return self.quotient.identity_coords
        return self.quotient.reduce(out)

    def section_coords(self, q):
        out = []
        qi = 0
        for p in self._parts:
            qi = p.section(q, qi, out)
        return tuple(out)

    def embed_coords(self, n):
        out = []
        ni = 0
        for p in self._parts:
            ni = p.embed(n, ni, out)
        return self.gamma.reduce(out)

    def restrict_coords(self, x):
        """Coordinates in N of ``x``, or None when ``x`` is not in N."""
        out = []
        for p in self._parts:
            if not p.restrict(x, out):
                return None
        return self.normal.reduce(out) if out else self.normal.identity_coords

    def contains(self, x):
        coords = x.coords if isinstance(x, GroupElement) else x
        return self.restrict_coords(coords) is not None

    def normal_generators(self):
        return [GroupElement(self.gamma, self.embed_coords(g.coords))
                for g in self.normal.generators()]

    def check_quotient(self, quotient):
        if quotient is not None and not same_group(quotient, self.quotient):
            raise InconsistentGroups(
                f"quotient {quotient.spec} does not match Gamma/N = {self.quotient.spec}")


def _normal_tokens(gamma, spec):
    if isinstance(spec, (list, tuple)):
        tokens = [str(t).strip() for t in spec]
    else:
        spec = str(spec).strip()
        if spec in ("trivial", "whole", "center"):
            tokens = []
            for kind, _ in gamma.atoms():
                if kind == "H":
                    tokens += {"trivial": ["0"] * 3, "whole": ["*"] * 3,
                               "center": ["0", "0", "*"]}[spec]
                else:
                    tokens.append("0" if spec == "trivial" else "*")
        else:
            tokens = [t.strip() for t in spec.split(",")]
    if len(tokens) != gamma.dim:
        raise InconsistentGroups(
            f"normal subgroup spec {spec!r} has {len(tokens)} tokens, {gamma.spec} has {gamma.dim} coordinates")
    for t in tokens:
        if t not in ("0", "*") and not (t.isdigit() and int(t) >= 1):
            raise MalformedInput(f"bad normal subgroup token {t!r}")
    return ["*" if t == "1" else t for t in tokens]


def parse_extension(group, normal, quotient=None):
    gamma = parse_group(group) if isinstance(group, str) else group
    ext = AmenableExtension(gamma, normal)
    if quotient is not None:
        ext.check_quotient(parse_group(quotient) if isinstance(quotient, str) else quotient)
    return ext


def _need(ext, x, group, what):
    if x.group != group and not same_group(x.group, group):
        raise DescriptorMismatch(f"{what} expects an element of {group.spec}, got {x.group.spec}")


def project(ext, g):
    _need(ext, g, ext.gamma, "project")
    return GroupElement(ext.quotient, ext.project_coords(g.coords))


def section(ext, q):
    _need(ext, q, ext.quotient, "section")
    return GroupElement(ext.gamma, ext.section_coords(q.coords))


def embed(ext, n):
    _need(ext, n, ext.normal, "embed")
    return GroupElement(ext.gamma, ext.embed_coords(n.coords))
