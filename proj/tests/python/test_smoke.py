import math

import pytest

import fdw


def test_ml_classical():
    for x in (0.0, 1.0, 7.5):
        assert abs(fdw.ml_eval(1.0, 1.0, -x).value - math.exp(-x)) < 1e-12
    assert abs(fdw.ml_eval(2.0, 1.0, -4.0).value - math.cos(2.0)) < 1e-12


def test_forward_and_round_trip():
    alpha = 1 / math.sqrt(2)
    op = fdw.SpectralOperator.dirichlet_laplacian_1d(1.0, 2)
    mu = fdw.SourceProfile.constant(1.0, 1.0)
    spec = fdw.ProblemSpec(alpha, op, [1.0, 0.5], [], [1.0, -0.5], mu)
    obs = fdw.observe(fdw.ForwardModel(spec), 0.2, 0.5, fdw.log_spaced(8.0, 2048.0, 80))
    r = fdw.reconstruct(obs, alpha, op, mu, M=2)
    assert r.a_hat == pytest.approx([1.0, 0.5], rel=1e-3)
    assert r.f_hat == pytest.approx([1.0, -0.5], rel=1e-3)
    assert [s.stage for s in r.stages][0] == "peel"


def test_zero_observations():
    times = fdw.log_spaced(8.0, 2048.0, 80)
    points = [0.1, 0.15, 0.2]
    obs = fdw.ObservationSet(points, times, [0.0] * (len(points) * len(times)))
    op = fdw.SpectralOperator.dirichlet_laplacian_1d(0.5, 3)
    r = fdw.reconstruct(obs, 1.3, op, fdw.SourceProfile.constant(1.0, 1.0), M=3)
    assert max(map(abs, r.a_hat + r.b_hat + r.f_hat)) < 1e-8


def test_scaling_ratio():
    alpha = 1 / math.sqrt(2)
    op = fdw.SpectralOperator.dirichlet_laplacian_1d(0.5, 2)
    mu = fdw.SourceProfile.constant(1.0, 1.0)
    times = fdw.log_spaced(8.0, 2048.0, 80)
    s1 = fdw.ProblemSpec(alpha, op, [1.0, 0.5], [], [1.0, -0.5], mu)
    s2 = fdw.ProblemSpec(alpha, op, [1.0, 0.5], [], [2.0, -1.0], mu.scaled(0.5))
    o1 = fdw.observe(fdw.ForwardModel(s1), 0.1, 0.25, times)
    o2 = fdw.observe(fdw.ForwardModel(s2), 0.1, 0.25, times)
    assert max(abs(u - v) for u, v in zip(o1.values, o2.values)) <= 1e-12
    r = fdw.simultaneous_reconstruct(o1, o2, alpha, op, mu, mu.scaled(0.5), M=2)
    assert r.f_ratio == pytest.approx(2.0, abs=1e-3)


def test_excluded_order_raises():
    assert not fdw.admissible_alpha(0.5, 0).admissible
    obs = fdw.ObservationSet([0.2, 0.4], [10.0, 100.0], [0.0] * 4)
    op = fdw.SpectralOperator.dirichlet_laplacian_1d(1.0, 2)
    with pytest.raises(fdw.Error, match="InadmissibleAlpha"):
        fdw.reconstruct(obs, 0.5, op, fdw.SourceProfile.constant(1.0, 1.0), M=2)


def test_witness_and_scalar_recovery():
    w = fdw.nonuniqueness_witness(fdw.WitnessOrder.One, 1.0, 1.0)
    assert abs(fdw.witness_solution(w, 1.0, 3.0)) < 1e-12
    assert abs(fdw.witness_solution(w, 1 / math.sqrt(2), 3.0)) > 1e-3
    mu = fdw.SourceProfile([(0.0, 1.0, [1.0, -2.0])], 1.0)
    t = fdw.log_spaced(8.0, 2048.0, 80)
    y = [fdw.solve_scalar(0.6, 2.0, 1.0, 0.0, mu, s) for s in t]
    r = fdw.recover_scalar(t, y, 0.6, 2.0, 1.0)
    assert r.a_hat == pytest.approx(1.0, abs=1e-3)
    assert r.moments[1] == pytest.approx(1 / 6, abs=1e-3)


def test_validation_error():
    with pytest.raises(fdw.ValidationError):
        fdw.FractionalOrder(2.5)
