"""Epsilon-splitting, sigma-decompositions and the push-forward estimate.

A chain ``c`` over Gamma splits as ``c0 + c1`` where ``c0`` is a lift of the
push-forward of least possible norm and ``c1`` pushes forward to zero.  A
null-pushforward chain is rewritten as ``sum_j c(j) - c(j).sigma(j)`` with
``sigma(j)`` in N^(n+1) acting by entrywise right multiplication; the
entries of the sigmas form S, and averaging over F costs at most
``2 (n+1) |c(j)|_1 |boundary_S F| / |F|`` per summand.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .averaging import _subset_coords, averaged_norm, boundary_ratio
from .chains import Chain, chain_to_json, l1_norm, pushforward, section_lift
from .errors import MalformedInput, NonzeroPushforward
from .groups import GroupElement, same_group

ZERO = Fraction(0)


def epsilon_split(ext, c):
    """(c0, c1) with c = c0 + c1, pushforward(c0) = pushforward(c) and pushforward(c1) = 0.

    c0 is the section lift of the push-forward; with twisted coefficients each
    coefficient class is lifted to a representative of least norm.  Either way
    |c0|_1 equals the norm of the push-forward exactly.
    """
    cbar = pushforward(ext, c)
    if c.module is None:
        c0 = section_lift(ext, cbar)
    else:
        from .twisted import twisted_lift
        c0 = twisted_lift(ext, cbar)
    return c0, c - c0


@dataclass
class SigmaDecomposition:
    ext: object
    chain: Chain
    terms: list  # (c(j), sigma(j)) with sigma(j) a tuple of Gamma coordinates in N
    S: frozenset  # elements of N
    K: Fraction
    K_sum: Fraction
    head: Chain | None = None
    epsilon: Fraction = ZERO
    epsilon_achieved: Fraction = ZERO

    @property
    def degree(self):
        return self.chain.degree

    def reconstruct(self):
        """sum_j c(j) - c(j).sigma(j); equals the decomposed null part."""
        total = Chain.zero(self.chain.group, self.chain.degree, self.chain.module)
        for cj, sigma in self.terms:
            total = total + cj - cj.right_translate(sigma)
        return total

    def tail(self):
        return self.chain if self.head is None else self.chain - self.head

    def to_json(self):
        return {
            "terms": [{"c": chain_to_json(cj), "sigma": [list(s) for s in sigma]}
                      for cj, sigma in self.terms],
            "S": [list(s.coords) for s in sorted(self.S)],
            "K": str(self.K),
            "K_sum": str(self.K_sum),
            "epsilon": str(self.epsilon),
            "epsilon_achieved": str(self.epsilon_achieved),
        }


def _orbits(ext, c):
    groups = {}
    for key, coeff in c.terms.items():
        img = tuple(ext.project_coords(x) for x in key)
        groups.setdefault(img, []).append((key, coeff))
    return groups


def sigma_decompose(ext, c, head=None, epsilon=ZERO, epsilon_achieved=ZERO):
    """Decompose ``c - head`` (``head`` defaults to nothing) into sigma-differences.

    The chain being decomposed must push forward to zero; otherwise
    NonzeroPushforward names the first orbit whose coefficients do not cancel.
    """
    if not same_group(c.group, ext.gamma):
        raise MalformedInput(f"chain over {c.group.spec}, extension over {ext.gamma.spec}")
    target = c if head is None else c - head
    G = ext.gamma
    n = target.degree
    module = target.module
    coinv = None
    if module is not None:
        from .twisted import CoinvariantModule
        coinv = CoinvariantModule(module, ext)
    terms = []
    for img, members in sorted(_orbits(ext, target).items()):
        members.sort()
        base, _ = members[0]
        if module is None:
            total = sum((a for _, a in members), ZERO)
            if total != 0:
                raise NonzeroPushforward(
                    "chain does not push forward to zero",
                    orbit=[list(q) for q in img], total=str(total))
        else:
            total = module.zero
            for _, a in members:
                total = module.add(total, a)
            y = coinv.express(total)
            if y is None:
                raise NonzeroPushforward(
                    "chain does not push forward to zero",
                    orbit=[list(q) for q in img], total=[str(x) for x in total])
        for key, a in members[1:]:
            sigma = tuple(G.mul(G.inv(b), t) for b, t in zip(base, key))
            neg = -a if module is None else tuple(-x for x in a)
            terms.append((Chain(G, n, {base: neg}, module, _trusted=True), sigma))
        if module is not None and any(y):
            # y - nu.y = total, realised by sigma = (mu, t_1^-1 mu t_1, ...) with mu = nu^-1
            mu = G.inv(coinv.nu)
            sigma = tuple(G.mul(G.inv(b), G.mul(mu, b)) for b in base)
            terms.append((Chain(G, n, {base: tuple(y)}, module, _trusted=True), sigma))
    S = set()
    for _, sigma in terms:
        for s in sigma:
            S.add(GroupElement(ext.normal, ext.restrict_coords(s)))
    norms = [l1_norm(cj) for cj, _ in terms]
    K = 2 * (n + 1) * max(norms, default=ZERO)
    K_sum = 2 * (n + 1) * sum(norms, ZERO)
    return SigmaDecomposition(ext, c, terms, frozenset(S), Fraction(K), Fraction(K_sum),
                              head, Fraction(epsilon), Fraction(epsilon_achieved))


def split_and_decompose(ext, c, epsilon=None):
    """epsilon-split followed by a decomposition of the null part.

    For real coefficients epsilon is 0 (the section lift is exact).  With
    twisted coefficients the caller's epsilon (default 1/1000) is recorded
    next to the epsilon actually achieved by the minimal-norm lift.
    """
    c0, _ = epsilon_split(ext, c)
    achieved = l1_norm(c0) - l1_norm(pushforward(ext, c))
    if epsilon is None:
        epsilon = ZERO if c.module is None else Fraction(1, 1000)
    epsilon = Fraction(epsilon)
    if epsilon < 0:
        raise MalformedInput("epsilon must be non-negative")
    return sigma_decompose(ext, c, head=c0, epsilon=epsilon, epsilon_achieved=achieved)


@dataclass
class EstimateCertificate:
    epsilon: Fraction
    S: list
    K: Fraction
    F_size: int
    lhs: Fraction
    pushforward_norm: Fraction
    ratio: Fraction
    rhs: Fraction
    holds: bool
    K_sum: Fraction
    rhs_sound: Fraction
    holds_sound: bool
    remark_rhs: Fraction | None = None
    remark_holds: bool | None = None
    extra: dict = field(default_factory=dict)

    def to_json(self):
        out = {
            "epsilon": str(self.epsilon),
            "S": [list(s.coords) for s in self.S],
            "K": str(self.K),
            "F_size": self.F_size,
            "lhs": str(self.lhs),
            "pushforward_norm": str(self.pushforward_norm),
            "ratio": str(self.ratio),
            "rhs": str(self.rhs),
            "holds": self.holds,
            "K_sum": str(self.K_sum),
            "rhs_sound": str(self.rhs_sound),
            "holds_sound": self.holds_sound,
        }
        if self.remark_rhs is not None:
            out["remark_rhs"] = str(self.remark_rhs)
            out["remark_holds"] = self.remark_holds
        out.update(self.extra)
        return out


def estimate_bound(decomp, F):
    """Evaluate both sides of the push-forward estimate for a finite F in N.

    ``rhs`` uses K = 2(n+1) max_j |c(j)|_1; ``rhs_sound`` uses the sum over j,
    which bounds every chain.  For real coefficients ``remark_rhs`` is
    |cbar|_1 + 2(n+1) |c1|_1 ratio, the single-constant bound scaled by the
    norm of the null part.
    """
    ext = decomp.ext
    c = decomp.chain
    coords = _subset_coords(F, ext, ext.gamma)
    Fn = [GroupElement(ext.normal, ext.restrict_coords(x)) for x in coords]
    ratio = boundary_ratio(Fn, sorted(decomp.S), ext.normal)
    lhs = averaged_norm(c, coords, ext)
    cbar = l1_norm(pushforward(ext, c))
    rhs = cbar + decomp.epsilon + decomp.K * ratio
    rhs_sound = cbar + decomp.epsilon + decomp.K_sum * ratio
    remark_rhs = remark_holds = None
    if c.module is None:
        n = c.degree
        remark_rhs = cbar + 2 * (n + 1) * l1_norm(decomp.tail()) * ratio
        remark_holds = lhs <= remark_rhs
    return EstimateCertificate(
        epsilon=decomp.epsilon, S=sorted(decomp.S), K=decomp.K, F_size=len(coords),
        lhs=lhs, pushforward_norm=cbar, ratio=ratio, rhs=rhs, holds=lhs <= rhs,
        K_sum=decomp.K_sum, rhs_sound=rhs_sound, holds_sound=lhs <= rhs_sound,
        remark_rhs=remark_rhs, remark_holds=remark_holds)


def certify(ext, c, F, epsilon=None):
    return estimate_bound(split_and_decompose(ext, c, epsilon), F)
