"""Averaging over finite subsets of N, Følner sequences and S-boundaries.

``average`` evaluates

    (g_0, ..., g_n)  ->  |F|^-(n+1) * sum over eta in F^(n+1) of (g_0 eta_0, ..., g_n eta_n)

on canonical tuples.  Two evaluation routes exist:

* ``brute``: the literal sum over F^(n+1); always available and used as the
  cross-check oracle.
* ``convolution``: when N is central in Gamma the canonical form of a
  translated tuple is (e, g_1 (eta_1 eta_0^-1), ..., g_n (eta_n eta_0^-1)),
  so the output is the input convolved with the law of the differences
  eta_i eta_0^-1.  That law is computed once per F (in closed form for boxes
  of intervals) instead of once per term.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import prod

import numpy as np

from .chains import Chain, _accumulate, _add_at, l1_norm, pushforward
from .errors import MalformedInput, NotInSubgroup
from .groups import GroupElement, same_group

BRUTE_LIMIT = 10 ** 5


# -- finite subsets ----------------------------------------------------------

def _subset_coords(F, ext, gamma):
    """Gamma-coordinates of F; elements may be given in N or in Gamma."""
    out = []
    for f in F:
        if isinstance(f, GroupElement):
            if same_group(f.group, gamma):
                out.append(f.coords)
            elif ext is not None and same_group(f.group, ext.normal):
                out.append(ext.embed_coords(f.coords))
            else:
                raise MalformedInput(f"{f} is neither in Gamma nor in N")
        else:
            out.append(gamma.reduce(f))
    out = sorted(set(out))
    if not out:
        raise MalformedInput("cannot average over an empty set")
    if ext is not None:
        for x in out:
            if ext.restrict_coords(x) is None:
                raise NotInSubgroup(f"{list(x)} is not in the normal subgroup",
                                    element=list(x))
    return out


def s_boundary(F, S, ambient=None):
    """{eta in F : sigma eta not in F for some sigma in S or S^-1}."""
    F = list(F)
    S = list(S)
    if not F:
        return frozenset()
    group = ambient or F[0].group
    fset = {f.coords for f in F}
    steps = set()
    for s in S:
        steps.add(s.coords)
        steps.add(group.inv(s.coords))
    out = set()
    for x in fset:
        for s in steps:
            if group.mul(s, x) not in fset:
                out.add(x)
                break
    return frozenset(GroupElement(group, x) for x in out)


def boundary_ratio(F, S, ambient=None):
    F = list(F)
    return Fraction(len(s_boundary(F, S, ambient)), len(F))


# -- the law of differences ----------------------------------------------------

def _box_shape(ncoords, normal):
    """Per-N-coordinate (lo, length) when the set is a box of intervals in Z^r."""
    if not ncoords or any(kind != "Z" for kind, _ in normal.atoms()):
        return None
    r = len(ncoords[0])
    lo = [min(x[c] for x in ncoords) for c in range(r)]
    hi = [max(x[c] for x in ncoords) for c in range(r)]
    lengths = [h - l + 1 for l, h in zip(lo, hi)]
    if prod(lengths) != len(ncoords):
        return None
    return lo, lengths


def _box_law(lengths, n):
    """mu[d] = #{x in box : x + d_i in box for all i}, axes ordered (i, coordinate)."""
    r = len(lengths)
    shape = []
    for _ in range(n):
        for c in range(r):
            shape.append(2 * lengths[c] - 1)
    mu = np.ones(shape, dtype=np.int64)
    for c, k in enumerate(lengths):
        hi = np.zeros([1] * len(shape), dtype=np.int64)
        lo = np.zeros([1] * len(shape), dtype=np.int64)
        for i in range(n):
            ax = i * r + c
            view = [1] * len(shape)
            view[ax] = 2 * k - 1
            d = np.arange(-(k - 1), k, dtype=np.int64).reshape(view)
            hi = np.maximum(hi, d)
            lo = np.minimum(lo, d)
        mu = mu * np.maximum(0, k - (hi - lo))
    return mu


def _difference_law(ncoords, normal, n):
    """Counter over tuples (d_1..d_n) of N-coordinates for the generic central case."""
    law = Counter()
    inv = {x: normal.inv(x) for x in ncoords}
    for eta0 in ncoords:
        left = inv[eta0]
        diffs = [normal.mul(x, left) for x in ncoords]
        for ds in product(diffs, repeat=n):
            law[ds] += 1
    return law


# -- averaging ----------------------------------------------------------------

def average(c, F, ext=None, method="auto"):
    """Average ``c`` over right translations by tuples in F^(n+1).

    With ``ext`` given, F must lie in its normal subgroup.  ``method`` is
    ``"auto"``, ``"brute"`` or ``"convolution"``.
    """
    gamma = c.group
    if ext is not None and not same_group(ext.gamma, gamma):
        raise MalformedInput(f"chain over {gamma.spec}, extension over {ext.gamma.spec}")
    Fc = _subset_coords(F, ext, gamma)
    central = ext is not None and ext.is_central
    if method == "auto":
        method = "convolution" if central and c.module is None and c.degree > 0 else "brute"
    if method == "convolution":
        if not central:
            raise MalformedInput("the convolution route needs a central normal subgroup")
        return _average_central(c, Fc, ext)
    if method != "brute":
        raise MalformedInput(f"unknown averaging method {method!r}")
    return _average_brute(c, Fc)


def _average_brute(c, Fc):
    g = c.group
    n = c.degree
    module = c.module
    size = len(Fc)
    weight = Fraction(1, size ** (n + 1))
    acc = {}
    for key, coeff in c.terms.items():
        for eta0 in Fc:
            left = g.inv(eta0)
            rows = [[g.mul(left, g.mul(key[i], eta)) for eta in Fc] for i in range(1, n + 1)]
            counts = Counter(product(*rows))
            if module is None:
                for tail, cnt in counts.items():
                    _add_at(acc, None, (g.identity_coords,) + tail, coeff * weight * cnt)
            else:
                moved = module.act(g, left, coeff)
                for tail, cnt in counts.items():
                    s = weight * cnt
                    _add_at(acc, module, (g.identity_coords,) + tail, tuple(s * x for x in moved))
    return Chain(g, n, acc, module, _trusted=True)


def _average_central(c, Fc, ext):
    g = c.group
    n = c.degree
    normal = ext.normal
    if n == 0:
        return c
    ncoords = [ext.restrict_coords(x) for x in Fc]
    weight = Fraction(1, len(Fc) ** (n + 1))
    box = _box_shape(ncoords, normal)
    if box is not None:
        lengths = box[1]
        mu = _box_law(lengths, n)
        r = len(lengths)
        idx = np.nonzero(mu)
        offsets = [np.asarray(a) - (lengths[ax % r] - 1) for ax, a in enumerate(idx)]
        counts = mu[idx].tolist()
        diffs = list(zip(*[o.tolist() for o in offsets])) if offsets else []
        law = [(tuple(tuple(d[i * r:(i + 1) * r]) for i in range(n)), cnt)
               for d, cnt in zip(diffs, counts)]
    else:
        law = list(_difference_law(ncoords, normal, n).items())
    embedded = {}
    for ds, _ in law:
        for d in ds:
            if d not in embedded:
                embedded[d] = ext.embed_coords(d)
    acc = {}
    ident = g.identity_coords
    for key, coeff in c.terms.items():
        base = coeff * weight
        tails = key[1:]
        for ds, cnt in law:
            out = (ident,) + tuple(g.mul(t, embedded[d]) for t, d in zip(tails, ds))
            _add_at(acc, None, out, base * cnt)
    return Chain(g, n, acc, None, _trusted=True)


def averaged_norm(c, F, ext=None):
    """|average(c, F)|_1, on integer grids when N is central and F is a box."""
    gamma = c.group
    Fc = _subset_coords(F, ext, gamma)
    n = c.degree
    if (ext is None or not ext.is_central or c.module is not None or n == 0):
        return l1_norm(average(c, Fc, ext))
    ncoords = [ext.restrict_coords(x) for x in Fc]
    box = _box_shape(ncoords, ext.normal)
    if box is None:
        return l1_norm(average(c, Fc, ext))
    lengths = box[1]
    r = len(lengths)
    mu = _box_law(lengths, n)
    groups = {}
    for key, coeff in c.terms.items():
        img = tuple(ext.project_coords(x) for x in key[1:])
        groups.setdefault(img, []).append((key, coeff))
    denom = 1
    for coeff in c.terms.values():
        denom = denom * coeff.denominator // _gcd(denom, coeff.denominator)
    total = 0
    for members in groups.values():
        base = members[0][0]
        offs = []
        for key, coeff in members:
            o = []
            for b, x in zip(base[1:], key[1:]):
                o.extend(ext.restrict_coords(gamma.mul(gamma.inv(b), x)))
            offs.append((o, int(coeff * denom)))
        axes = n * r
        lo = [min(o[ax] for o, _ in offs) for ax in range(axes)]
        hi = [max(o[ax] for o, _ in offs) for ax in range(axes)]
        shape = [hi[ax] - lo[ax] + mu.shape[ax] for ax in range(axes)]
        cells = prod(shape)
        bound = sum(abs(a) for _, a in offs) * int(mu.max())
        if cells > 6 * 10 ** 7:
            sub = Chain(gamma, n, {k: v for k, v in members}, None, _trusted=True)
            total += l1_norm(_average_central(sub, Fc, ext)) * denom * len(Fc) ** (n + 1)
            continue
        grid = np.zeros(shape, dtype=np.int64 if bound < 2 ** 62 else object)
        for o, a in offs:
            sl = tuple(slice(o[ax] - lo[ax], o[ax] - lo[ax] + mu.shape[ax]) for ax in range(axes))
            grid[sl] += a * mu
        total += int(np.abs(grid).sum())
    return Fraction(total) / (denom * len(Fc) ** (n + 1))


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


@dataclass(frozen=True)
class AveragingReport:
    chain: Chain
    F: tuple
    output: Chain
    input_norm: Fraction
    output_norm: Fraction

    @property
    def contracted(self):
        return self.output_norm <= self.input_norm


def average_report(c, F, ext=None, method="auto"):
    out = average(c, F, ext, method)
    return AveragingReport(c, tuple(F), out, l1_norm(c), l1_norm(out))


# -- Følner sequences -----------------------------------------------------------

FOLNER_KINDS = ("interval", "box", "heisenberg_box", "whole", "adaptive")


class FolnerSequence:
    """Finite subsets F_k of N, k = 1, 2, ... .

    interval: {0..k-1} in N = Z.  box: {0..k-1} in every Z coordinate of N and
    all of every finite cyclic coordinate.  heisenberg_box: 0 <= a, b < k,
    0 <= c < k^2 in N = Heis3.  whole: F_k = N for finite N.  adaptive: a box
    in a lattice basis of the subgroup generated by a finite set S of N.
    """

    def __init__(self, ext, kind, lattice=None):
        self.ext = ext
        self.kind = kind
        N = ext.normal
        atoms = N.atoms()
        if kind == "interval":
            if tuple(atoms) != (("Z", 0),):
                raise MalformedInput(f"interval Følner sets need N = Z, got {N.spec}")
        elif kind == "box":
            if any(a == "H" for a, _ in atoms):
                raise MalformedInput(f"box Følner sets need an abelian N, got {N.spec}")
        elif kind == "heisenberg_box":
            if tuple(atoms) != (("H", 0),):
                raise MalformedInput(f"heisenberg_box needs N = Heis3, got {N.spec}")
        elif kind == "whole":
            if not N.is_finite:
                raise MalformedInput(f"whole-group Følner sets need a finite N, got {N.spec}")
        elif kind == "adaptive":
            if lattice is None:
                raise MalformedInput("adaptive Følner sets need a lattice basis")
        else:
            raise MalformedInput(f"unknown Følner kind {kind!r}; expected one of {FOLNER_KINDS}")
        self.lattice = lattice

    @classmethod
    def adaptive(cls, ext, S):
        """Boxes inside the subgroup of N generated by S (N must be free abelian)."""
        N = ext.normal
        if any(a != "Z" for a, _ in N.atoms()):
            raise MalformedInput(f"adaptive mode needs N free abelian, got {N.spec}")
        probe = cls(ext, "adaptive", lattice=[])
        basis = lattice_basis([s.coords for s in probe.to_normal(S)])
        return cls(ext, "adaptive", lattice=basis)

    def normal_coords(self, k):
        """F_k as coordinate tuples of N, sorted."""
        if k < 1:
            raise MalformedInput("Følner index starts at 1")
        N = self.ext.normal
        if self.kind == "interval":
            pts = [(i,) for i in range(k)]
        elif self.kind == "box":
            ranges = [range(k) if kind == "Z" else range(m) for kind, m in N.atoms()]
            pts = list(product(*ranges))
        elif self.kind == "heisenberg_box":
            pts = [(a, b, c) for a in range(k) for b in range(k) for c in range(k * k)]
        elif self.kind == "whole":
            pts = [e.coords for e in N.elements()]
        else:
            if not self.lattice:
                pts = [N.identity_coords]
            else:
                pts = []
                for xs in product(range(k), repeat=len(self.lattice)):
                    v = [0] * N.dim
                    for x, b in zip(xs, self.lattice):
                        for c in range(N.dim):
                            v[c] += x * b[c]
                    pts.append(tuple(v))
        return sorted(set(pts))

    def normal_set(self, k):
        N = self.ext.normal
        return [GroupElement(N, x) for x in self.normal_coords(k)]

    def __call__(self, k):
        """F_k embedded in Gamma."""
        G = self.ext.gamma
        return [GroupElement(G, self.ext.embed_coords(x)) for x in self.normal_coords(k)]

    def size(self, k):
        return len(self.normal_coords(k))

    def ratio(self, k, S):
        """|boundary_S F_k| / |F_k| computed in N."""
        N = self.ext.normal
        return boundary_ratio(self.normal_set(k), self.to_normal(S), N)

    def to_normal(self, S):
        """Elements of S as elements of N; Gamma elements are restricted."""
        N = self.ext.normal
        out = []
        for s in S:
            if same_group(s.group, self.ext.gamma):
                x = self.ext.restrict_coords(s.coords)
                if x is None:
                    raise NotInSubgroup(f"{s} is not in the normal subgroup",
                                        element=list(s.coords))
                out.append(GroupElement(N, x))
            elif same_group(s.group, N):
                out.append(s)
            else:
                raise MalformedInput(f"{s} is neither in Gamma nor in N")
        return out

    def describe(self):
        out = {"kind": self.kind}
        if self.lattice is not None:
            out["lattice"] = [list(b) for b in self.lattice]
        return out


def lattice_basis(vectors):
    """Integer row echelon basis of the lattice spanned by ``vectors``."""
    rows = [list(v) for v in vectors if any(v)]
    if not rows:
        return []
    dim = len(rows[0])
    basis = []
    col = 0
    while rows and col < dim:
        rows = [r for r in rows if any(r)]
        live = [r for r in rows if r[col]]
        if not live:
            col += 1
            continue
        while len(live) > 1:
            live.sort(key=lambda r: abs(r[col]))
            p = live[0]
            rest = []
            for r in live[1:]:
                q = r[col] // p[col]
                r2 = [a - q * b for a, b in zip(r, p)]
                if r2[col]:
                    rest.append(r2)
                elif any(r2):
                    rows.append(r2)
            rows = [r for r in rows if r not in live]
            live = [p] + rest
            rows.extend(live)
        p = live[0]
        if p[col] < 0:
            p = [-a for a in p]
        basis.append(tuple(p))
        rows = [r for r in rows if r is not live[0] and r != live[0] and r[col] == 0 and any(r)]
        col += 1
    return basis


# -- finite normal subgroups -----------------------------------------------------

def transfer_finite(ext, z, section=None):
    """Chain map C_*(Q) -> C_*(Gamma) averaging lifts over all of a finite N.

    ``section`` (raw coordinates Q -> Gamma) defaults to the extension's own;
    the result does not depend on it.
    """
    N = ext.normal
    if not N.is_finite:
        raise MalformedInput(f"transfer needs a finite normal subgroup, got {N.spec}")
    if not same_group(z.group, ext.quotient):
        raise MalformedInput(f"chain over {z.group.spec}, quotient is {ext.quotient.spec}")
    if z.module is not None:
        raise MalformedInput("transfer is implemented for real coefficients")
    sec = section or ext.section_coords
    G = ext.gamma
    etas = [ext.embed_coords(e.coords) for e in N.elements()]
    n = z.degree
    weight = Fraction(1, len(etas) ** (n + 1))
    acc = {}
    for key, coeff in z.terms.items():
        lifts = [sec(q) for q in key]
        rows = [[G.mul(s, eta) for eta in etas] for s in lifts]
        for entries in product(*rows):
            _accumulate(acc, G, None, list(entries), coeff * weight)
    return Chain(G, n, acc, None, _trusted=True)


def check_pushforward_invariance(c, F, ext):
    """pushforward(average(c)) == pushforward(c); true whenever F lies in N."""
    return pushforward(ext, average(c, F, ext)) == pushforward(ext, c)
