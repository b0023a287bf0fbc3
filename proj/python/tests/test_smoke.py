import math

import pytest

import ringld


def test_models_and_mgf():
    exp = ringld.MessageLengthModel.parse("exp:c=1")
    mix = ringld.MessageLengthModel.mixture(1.0, 0.5)
    det = ringld.MessageLengthModel.deterministic(1.0)
    assert exp.mgf(0.0) == 1.0
    assert mix.mgf(0.25) == pytest.approx(1.6, abs=1e-12)
    assert det.mgf(1.0) == pytest.approx(math.e, abs=1e-12)
    assert mix.hat_lambda() == pytest.approx(0.75, abs=1e-12)
    with pytest.raises(ValueError):
        exp.mgf(1.0)


def test_rates_and_scenario():
    exp = ringld.MessageLengthModel.exponential(1.0)
    assert ringld.solve_theta_l(exp, 0.5, 1) == pytest.approx(0.75, abs=1e-9)
    params = ringld.NetworkParams(3, 0.25, 1.0, exp)
    assert ringld.rate_J(params, 1) == pytest.approx(1.75, abs=1e-9)
    assert ringld.rate_J(params, 3) == pytest.approx(2.25, abs=1e-9)
    assert ringld.scenario(params).l_opt == 1
    prof = ringld.optimal_profile(ringld.NetworkParams(3, 0.5, 1.0, exp), 1)
    assert prof.load_slope * prof.duration - prof.duration == pytest.approx(1.0, rel=1e-9)


def test_critical_rates():
    det = ringld.MessageLengthModel.deterministic(1.0)
    mix = ringld.MessageLengthModel.mixture(1.0, 0.5)
    golden = (1 + 5**0.5) / 2
    assert ringld.lambda_l2l1(det, 2, 1).lambda_ == pytest.approx(
        3 * math.log(golden) / golden, abs=1e-9
    )
    assert ringld.lambda_star_kl(mix, 3, 1).lambda_ == pytest.approx(0.4029132, abs=1e-6)
    exp = ringld.MessageLengthModel.exponential(1.0)
    assert ringld.lambda_lower(exp, 5) == pytest.approx(0.75, abs=1e-9)
    assert ringld.lambda_upper(exp, 5) == pytest.approx(0.75, abs=1e-9)
    with pytest.raises(ArithmeticError):
        ringld.lambda_star_kl(exp, 3, 2)


def test_routing():
    sol = ringld.solve_ring([8.0, 0.5, 0.5])
    assert sol.imbalance == pytest.approx(6.0, abs=1e-9)
    assert sum(sol.server_loads) == pytest.approx(9.0, abs=1e-12)
    arc = ringld.solve_arc([2.0, 2.0])
    assert arc.imbalance == pytest.approx(0.0, abs=1e-9)
    assert arc.server_loads == pytest.approx([4.0 / 3.0] * 3, abs=1e-9)
    sets = ringld.maximal_balanced_sets(ringld.Configuration([8.0, 0.5, 0.5, 0.5], 1.0))
    assert [(s.first, s.length) for s in sets] == [(0, 1)]


def test_simulation_deterministic_and_unbiased_smoke():
    exp = ringld.MessageLengthModel.exponential(1.0)
    params = ringld.NetworkParams(3, 0.3, 1.0, exp)
    cfg = ringld.SimConfig(params, n=2, trials=4000, seed=99, tilt=ringld.TiltConfig(1))
    a = ringld.estimate_overload(cfg)
    b = ringld.estimate_overload(cfg)
    assert a.p_hat == b.p_hat and a.hits == b.hits
    assert 0.0 < a.p_hat < 1.0
    plain = ringld.estimate_overload(ringld.SimConfig(params, n=2, trials=20000, seed=100))
    gap = abs(plain.p_hat - a.p_hat)
    assert gap <= 3.0 * (plain.p_hat * plain.rel_se + a.p_hat * a.rel_se)
