"""The efficient-cycle recipe and the convergence experiment.

Given a cycle c over Gamma, cycles z_m over Q and chains b_m over Gamma with
pushforward(boundary(b_m)) = z_m - pushforward(c), the cycles

    c_{k,m} = average(c + boundary(b_m), F_k)

stay in the class of c while their norms approach |z_m|_1 at the rate
controlled by the push-forward estimate.
"""

from __future__ import annotations

import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from .averaging import FolnerSequence, average, averaged_norm, boundary_ratio
from .chains import (Chain, boundary, chain_from_json, chain_to_json, l1_norm,
                     pushforward, require_cycle, section_lift)
from .errors import FillingMismatch, Infeasible, MalformedInput
from .estimate import split_and_decompose
from .groups import GroupElement, parse_extension, parse_group
from .seminorm import Truncation, fill_boundary, seminorm_upper_bound

ZERO = Fraction(0)


@dataclass
class RecipeInput:
    ext: object
    c: Chain
    z_sequence: list
    fillings: list
    folner: FolnerSequence | None = None
    epsilon: Fraction | None = None

    def __post_init__(self):
        require_cycle(self.c, "input chain")
        if len(self.z_sequence) != len(self.fillings):
            raise MalformedInput("need exactly one filling per z_m")
        cbar = pushforward(self.ext, self.c)
        for m, (z, b) in enumerate(zip(self.z_sequence, self.fillings)):
            if b.degree != self.c.degree + 1:
                raise MalformedInput(f"filling b_{m} must have degree {self.c.degree + 1}")
            residual = pushforward(self.ext, boundary(b)) - z + cbar
            if not residual.is_zero():
                raise FillingMismatch(
                    f"pushforward(boundary(b_{m})) differs from z_{m} - pushforward(c)",
                    m=m, residual=chain_to_json(residual))

    def corrected(self, m):
        if not 0 <= m < len(self.fillings):
            raise MalformedInput(f"no filling with index {m}")
        return self.c + boundary(self.fillings[m])


def efficient_cycle(inp, k, m=0):
    """c_{k,m} = average(c + boundary(b_m), F_k)."""
    if k < 1:
        raise MalformedInput("k must be at least 1")
    if inp.folner is None:
        raise MalformedInput("no Følner sequence configured")
    return average(inp.corrected(m), inp.folner(k), inp.ext)


@dataclass(frozen=True)
class ConvergenceRow:
    k: int
    F_size: int
    ratio: Fraction
    norm: Fraction
    bound: Fraction

    @property
    def holds(self):
        return self.norm <= self.bound

    def as_strings(self):
        return [str(self.k), str(self.F_size), str(self.ratio), str(self.norm), str(self.bound)]


@dataclass
class Experiment:
    rows: list
    decomposition: object
    folner: FolnerSequence
    constant: Fraction
    extra: dict = field(default_factory=dict)


def _row(job):
    ext, x, folner, S, base, K, k = job
    Fn = folner.normal_set(k)
    ratio = boundary_ratio(Fn, S, ext.normal)
    norm = averaged_norm(x, folner(k), ext)
    return ConvergenceRow(k, len(Fn), ratio, norm, base + K * ratio)


def convergence_experiment(inp, k_max, m=0, epsilon=None, adaptive=False, constant="max",
                           ks=None, workers=None):
    """Rows (k, |F_k|, ratio, |c_{k,m}|_1, bound) for k = 1..k_max.

    S and K come from one decomposition of c + boundary(b_m) minus its
    minimal lift.  ``constant`` picks K = 2(n+1) max_j |c(j)|_1 ("max") or
    the sum over j ("sum"), which bounds every chain.  With ``workers`` > 1
    the rows are computed in a process pool; the output is the same.
    """
    if k_max < 1:
        raise MalformedInput("k_max must be at least 1")
    x = inp.corrected(m)
    eps = epsilon if epsilon is not None else inp.epsilon
    decomp = split_and_decompose(inp.ext, x, eps)
    if constant not in ("max", "sum"):
        raise MalformedInput(f"constant must be 'max' or 'sum', not {constant!r}")
    K = decomp.K if constant == "max" else decomp.K_sum
    if adaptive:
        folner = FolnerSequence.adaptive(inp.ext, sorted(decomp.S))
    elif inp.folner is not None:
        folner = inp.folner
    else:
        raise MalformedInput("no Følner sequence configured")
    S = sorted(decomp.S)
    base = l1_norm(pushforward(inp.ext, x)) + decomp.epsilon
    jobs = [(inp.ext, x, folner, S, base, K, k)
            for k in (ks if ks is not None else range(1, k_max + 1))]
    if workers and workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            rows = list(pool.map(_row, jobs, chunksize=8))
    else:
        rows = [_row(j) for j in jobs]
    return Experiment(rows, decomp, folner, K)


def rows_to_csv(rows):
    lines = ["k,F_size,ratio,norm,bound"]
    lines.extend(",".join(r.as_strings()) for r in rows)
    return "\n".join(lines) + "\n"


def rows_to_json(rows):
    return [{"k": r.k, "F_size": r.F_size, "ratio": str(r.ratio), "norm": str(r.norm),
             "bound": str(r.bound)} for r in rows]


# -- fillings ------------------------------------------------------------------

def auto_filling(ext, c, radius=1):
    """(z, b) for the recipe when none are supplied.

    Real coefficients: if -pushforward(c) is a boundary inside the truncation
    then z = 0; otherwise z is the seminorm oracle's best cycle c̄ + ∂w.
    Twisted coefficients: z = c̄ and b = 0.
    """
    cbar = pushforward(ext, c)
    if c.module is not None:
        return cbar, Chain.zero(ext.gamma, c.degree + 1, c.module)
    t = Truncation.standard(ext.quotient, radius)
    w = fill_boundary(-cbar, t)
    if w is not None:
        return Chain.zero(ext.quotient, c.degree), section_lift(ext, w)
    bound = seminorm_upper_bound(cbar, t)
    w = bound.witness
    return cbar + boundary(w), section_lift(ext, w)


def require_filling(ext, z, radius=1):
    """A filling of a cycle z over Q, or Infeasible."""
    b = fill_boundary(z, Truncation.standard(ext.quotient, radius))
    if b is None:
        raise Infeasible(f"no filling within radius {radius}", radius=radius)
    return b


# -- configs ----------------------------------------------------------------------

@dataclass
class Config:
    inp: RecipeInput
    radius: int
    raw: dict
    kmax: int | None = None
    adaptive: bool = False


def _load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise MalformedInput(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise MalformedInput(f"{path}: invalid JSON ({exc.msg})") from exc


def _resolve(value, base_dir):
    if isinstance(value, str):
        path = value if os.path.isabs(value) else os.path.join(base_dir, value)
        return _load_json(path)
    return value


def _as_list(value):
    if value is None:
        return None
    if isinstance(value, list):
        return value
    return [value]


def folner_from_json(ext, spec):
    if spec is None:
        return None
    if isinstance(spec, str):
        spec = {"kind": spec}
    kind = spec.get("kind")
    params = spec.get("params") or {}
    if kind == "adaptive":
        S = params.get("S")
        if S is None:
            return None  # built from the decomposition later
        return FolnerSequence.adaptive(ext, [GroupElement(ext.normal, ext.normal.reduce(s)) for s in S])
    return FolnerSequence(ext, kind)


def load_config(source):
    """Build a Config from a path or an already-parsed dict."""
    if isinstance(source, (str, os.PathLike)):
        base_dir = os.path.dirname(os.path.abspath(source))
        data = _load_json(source)
    else:
        base_dir = os.getcwd()
        data = source
    if not isinstance(data, dict):
        raise MalformedInput("config must be a JSON object")
    for key in ("group", "normal", "chain"):
        if key not in data:
            raise MalformedInput(f"config is missing {key!r}")
    gamma = parse_group(data["group"])
    ext = parse_extension(gamma, data["normal"], data.get("quotient"))
    module = None
    if data.get("module") is not None:
        from .twisted import NormedModule
        module = NormedModule.from_json(_resolve(data["module"], base_dir), gamma)
    c = chain_from_json(_resolve(data["chain"], base_dir), gamma, module)
    radius = int(data.get("radius", 1))
    epsilon = data.get("epsilon")
    epsilon = Fraction(str(epsilon)) if epsilon is not None else None
    zs = _as_list(data.get("z"))
    bs = _as_list(data.get("b"))
    require_cycle(c, "input chain")
    if zs is None and bs is None:
        z, b = auto_filling(ext, c, radius)
        z_seq, b_seq = [z], [b]
    else:
        if zs is None or bs is None:
            raise MalformedInput("config must give both 'z' and 'b' or neither")
        qmodule = None
        if module is not None:
            from .twisted import CoinvariantModule
            qmodule = CoinvariantModule(module, ext)
        z_seq = [_chain_or_zero(_resolve(z, base_dir), ext.quotient, c.degree, qmodule) for z in zs]
        b_seq = [_chain_or_zero(_resolve(b, base_dir), gamma, c.degree + 1, module) for b in bs]
    folner_spec = data.get("folner")
    adaptive = isinstance(folner_spec, dict) and folner_spec.get("kind") == "adaptive" \
        or folner_spec == "adaptive"
    folner = folner_from_json(ext, folner_spec)
    inp = RecipeInput(ext, c, z_seq, b_seq, folner, epsilon)
    return Config(inp, radius, data, data.get("kmax"), adaptive and folner is None)


def _chain_or_zero(data, group, degree, module):
    if data == 0 or data == "0" or data is None:
        return Chain.zero(group, degree, module)
    if isinstance(data, dict) and "degree" not in data:
        data = dict(data, degree=degree)
    return chain_from_json(data, group, module)
