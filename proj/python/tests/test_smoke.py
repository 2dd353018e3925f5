import json
import math

import pytest

import _skewsim as sk


def test_default_system_conditions_pass():
    sys = sk.make_default_step_system()
    report = json.loads(sk.check_conditions(sys, 2000))
    assert report["all_pass"] is True
    assert report["covering"]["pass"] is True


def test_graph_value_constant_window():
    sys = sk.make_default_step_system()
    w = sk.SymbolWindow.constant(2, 1)
    cls = sk.graph_value(sys, w, 500, 1e-10)
    assert cls["kind"] == "point"
    assert abs(cls["value"] - 0.7) < 1e-10


def test_bony_all_zero_window_is_a_bone():
    sys = sk.make_bony_perturbation(sk.make_default_step_system(), 2)
    cls = sk.graph_value(sys, sk.SymbolWindow.constant(2, 0), 1000, 1e-10)
    assert cls["kind"] == "bone"
    assert 0.08 <= cls["width"] <= 0.12


def test_hutchinson_closed_form():
    mu = sk.DiscreteMeasure.point_mass(0.2)
    nu = sk.DiscreteMeasure.point_mass(0.5)
    assert sk.hutchinson_distance(mu, nu) == pytest.approx(0.3, abs=1e-15)


def test_single_map_exponent():
    f1 = json.dumps({"kind": "affine", "p": 0.7, "c": 0.6})
    sys = sk.SkewSystem.from_json(
        json.dumps({"k": 2, "rule": {"kind": "step", "maps": [json.loads(f1)] * 2}})
    )
    value, std_error = sk.sup_norm_exponent(sys, 100, 16, 5, 1)
    assert value == pytest.approx(math.log(0.6), abs=1e-12)
    assert std_error < 1e-12


def test_stationary_measure_residual():
    sys = sk.make_default_step_system()
    mu, iterations = sk.stationary_measure(sys, 200, 1e-6, 5000)
    assert iterations > 1
    out = sk.transfer_apply(mu, sys)
    assert sk.hutchinson_distance(mu, out) < 1e-2


def test_graph_distance_of_shifted_family():
    f = sk.make_default_step_system()
    g = sk.make_shifted_step_system(0.02)
    lower, upper = sk.graph_distance(f, g, 300, 150, 7)
    assert 0.0 <= lower <= upper + 1e-12
    assert upper < 0.04


def test_sampling_is_deterministic():
    w1 = sk.sample_bernoulli(2, 10, 10, 42)
    w2 = sk.sample_bernoulli(2, 10, 10, 42)
    assert w1.digest() == w2.digest()
    assert w1.at(-3) == w2.at(-3)
