import os
from fractions import Fraction

import pytest

from folner_cycles import (Chain, FillingMismatch, FolnerSequence, MalformedInput, NotACycle,
                           RecipeInput, average, boundary, convergence_experiment, efficient_cycle,
                           l1_norm, load_config, pair, parse_extension, pushforward,
                           section_lift, torus_form)
from folner_cycles.pipeline import rows_to_csv

from conftest import torus_chain

CONFIGS = os.path.join(os.path.dirname(__file__), os.pardir, "configs")


def spec_filling(ext):
    Q = ext.quotient
    bbar = Chain.from_terms(Q, [(1, [(0,), (0,), (0,), (1,)]), (1, [(0,), (1,), (1,), (1,)])])
    return -section_lift(ext, bbar)


@pytest.fixture
def torus_input():
    ext = parse_extension("Z^2", "*,0", "Z")
    z = Chain.zero(ext.quotient, 2)
    return RecipeInput(ext, torus_chain(), [z], [spec_filling(ext)], FolnerSequence(ext, "interval"))


def test_recipe_input_validation(torus_input):
    ext = torus_input.ext
    with pytest.raises(FillingMismatch) as info:
        RecipeInput(ext, torus_chain(), [Chain.zero(ext.quotient, 2)], [Chain.zero(ext.gamma, 3)])
    assert info.value.details["residual"]["terms"]
    with pytest.raises(NotACycle):
        RecipeInput(ext, Chain.simplex(ext.gamma, [(0, 0), (1, 0), (1, 1)]), [], [])
    with pytest.raises(MalformedInput):
        RecipeInput(ext, torus_chain(), [Chain.zero(ext.quotient, 2)], [])


def test_torus_efficient_cycles(torus_input):
    for k in (1, 2, 5, 10):
        c = efficient_cycle(torus_input, k)
        assert c.is_cycle()
        assert pair(torus_form(), c) == 1


def test_trivial_normal_subgroup_is_identity():
    ext = parse_extension("Z^2", "trivial")
    c = torus_chain()
    b = Chain.from_terms(ext.gamma, [(1, [(0, 0), (1, 0), (0, 1), (1, 1)])])
    z = pushforward(ext, c + boundary(b))
    inp = RecipeInput(ext, c, [z], [b], FolnerSequence(ext, "whole"))
    for k in (1, 3):
        assert efficient_cycle(inp, k) == c + boundary(b)


def test_z_equals_cbar_gives_plain_average():
    ext = parse_extension("Z^2", "*,0")
    c = torus_chain()
    fs = FolnerSequence(ext, "interval")
    inp = RecipeInput(ext, c, [pushforward(ext, c)], [Chain.zero(ext.gamma, 3)], fs)
    assert efficient_cycle(inp, 4) == average(c, fs(4), ext)


def test_convergence_rows(torus_input):
    exp = convergence_experiment(torus_input, 40)
    assert exp.decomposition.K == 6
    assert len(exp.rows) == 40
    for row in exp.rows:
        assert row.holds
        assert row.F_size == row.k
        if row.k >= 2:
            assert row.ratio == Fraction(2, row.k)
    row10 = exp.rows[9]
    assert row10.bound == 6 * Fraction(2, 10)
    assert row10.norm == l1_norm(efficient_cycle(torus_input, 10))


def test_convergence_finite_normal_subgroup():
    cfg = load_config(os.path.join(CONFIGS, "finite.json"))
    exp = convergence_experiment(cfg.inp, 4)
    z = cfg.inp.z_sequence[0]
    for row in exp.rows:
        assert row.ratio == 0
        assert row.norm <= l1_norm(z) == row.bound


def test_adaptive_mode(torus_input):
    exp = convergence_experiment(torus_input, 6, adaptive=True)
    assert exp.folner.kind == "adaptive"
    assert all(r.holds for r in exp.rows)


def test_sum_constant(torus_input):
    exp = convergence_experiment(torus_input, 5, constant="sum")
    assert exp.constant == exp.decomposition.K_sum
    with pytest.raises(MalformedInput):
        convergence_experiment(torus_input, 5, constant="median")


def test_config_autofill_torus():
    cfg = load_config(os.path.join(CONFIGS, "torus.json"))
    inp = cfg.inp
    assert inp.z_sequence[0].is_zero()
    bbar = pushforward(inp.ext, inp.fillings[0])
    assert boundary(bbar) == -pushforward(inp.ext, inp.c)
    assert l1_norm(bbar) <= 2


def test_config_explicit_matches_spec_filling():
    cfg = load_config(os.path.join(CONFIGS, "torus_explicit.json"))
    assert cfg.inp.fillings[0] == spec_filling(cfg.inp.ext)


@pytest.mark.parametrize("name", ["torus", "torus_explicit", "finite", "heisenberg", "twisted"])
def test_configs_run(name):
    cfg = load_config(os.path.join(CONFIGS, f"{name}.json"))
    exp = convergence_experiment(cfg.inp, 12)
    assert all(r.holds for r in exp.rows)


def test_twisted_config_converges():
    cfg = load_config(os.path.join(CONFIGS, "twisted.json"))
    exp = convergence_experiment(cfg.inp, 24)
    norms = [r.norm for r in exp.rows]
    assert norms[0] == 2 and norms[-1] < Fraction(1, 4)


def test_config_errors(tmp_path):
    with pytest.raises(MalformedInput):
        load_config({"group": "Z^2"})
    with pytest.raises(MalformedInput):
        load_config(str(tmp_path / "missing.json"))
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(MalformedInput):
        load_config(str(bad))


def test_csv_is_deterministic(torus_input):
    a = rows_to_csv(convergence_experiment(torus_input, 16).rows)
    b = rows_to_csv(convergence_experiment(torus_input, 16).rows)
    assert a == b
    assert a.splitlines()[0] == "k,F_size,ratio,norm,bound"


def test_parallel_rows_match(torus_input):
    serial = convergence_experiment(torus_input, 20).rows
    assert convergence_experiment(torus_input, 20, workers=2).rows == serial
