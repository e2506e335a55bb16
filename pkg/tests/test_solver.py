import numpy as np
import pytest
import sys
sys.path.append('..')

from fttrpca.decomp import ttnn
from fttrpca.exceptions import DimensionMismatch, InvalidArgument
from fttrpca.harness import SyntheticSpec, gen_synthetic, given_rank, rse, corrupt
from fttrpca.solver import *

# Below sides of about 20, the default tau has to be doubled for exact
# recovery (see DESIGN.md).
DESK_TAU_SCALE = 2


def _instance(dims, tt_rank, nr = 0.05, seed = 0):
    return gen_synthetic(SyntheticSpec(dims, tt_rank, nr, seed = seed))


def _fttnn_config(spec, q = 1.2, **kwargs):
    return SolverConfig(rank = tuple(given_rank(spec.tt_rank, q, spec.dims)), **kwargs)


def _assert_feasible(result, Y, tol = 1e-6):
    scale = np.linalg.norm(Y)
    assert np.linalg.norm(Y - result.X - result.S) <= tol * scale
    if result.tucker is not None:
        assert np.linalg.norm(result.X - result.tucker.full()) <= tol * scale


def test_default_tau():
    assert default_tau((30, 30, 30, 30)) == pytest.approx(0.01517, abs = 1e-5)
    assert default_tau((100, 100)) == pytest.approx(0.1)
    with pytest.raises(DimensionMismatch):
        default_tau((5,))


def test_resolved_fills_defaults():
    cfg = SolverConfig().resolved((30, 30, 30, 30))
    assert cfg.tau == pytest.approx(default_tau((30, 30, 30, 30)))
    assert cfg.alpha == pytest.approx((1/32, 15/16, 1/32))
    cfg = SolverConfig(tau = 0.5, alpha = (1, 0)).resolved((4, 5, 6))
    assert cfg.tau == 0.5
    assert cfg.alpha == (1.0, 0.0)


def test_tau_scale():
    dims = (8, 8, 8)
    cfg = SolverConfig(tau_scale = 2).resolved(dims)
    assert cfg.tau == pytest.approx(2 * default_tau(dims))
    assert SolverConfig(tau = 0.3, tau_scale = 2).resolved(dims).tau == 0.3
    with pytest.raises(InvalidArgument):
        SolverConfig(tau_scale = 0).resolved(dims)


def test_resolved_rejects_bad_values():
    dims = (4, 5, 6)
    with pytest.raises(InvalidArgument):
        SolverConfig(tau = -1).resolved(dims)
    with pytest.raises(InvalidArgument):
        SolverConfig(mu0 = 1e3, mu_max = 1e2).resolved(dims)
    with pytest.raises(InvalidArgument):
        SolverConfig(max_iters = 0).resolved(dims)
    with pytest.raises(DimensionMismatch):
        SolverConfig(alpha = (1, 1, 1)).resolved(dims)
    with pytest.raises(InvalidArgument):
        SolverConfig().resolved(dims, need_rank = True)
    with pytest.raises(DimensionMismatch):
        SolverConfig(rank = (2, 2)).resolved(dims, need_rank = True)
    with pytest.raises(InvalidArgument):
        SolverConfig(rank = (2, 6, 2)).resolved(dims, need_rank = True)


def test_zero_input():
    for solve, cfg in [(fttnn_solve, SolverConfig(rank = (2, 2, 2))),
                       (ttnn_solve, SolverConfig())]:
        result = solve(np.zeros((4, 5, 6)), cfg)
        assert not np.any(result.X) and not np.any(result.S)
        assert result.report.iters == 1
        assert result.report.converged


def test_non_finite_input():
    y = np.ones((3, 3, 3))
    y[1, 1, 1] = np.nan
    with pytest.raises(InvalidArgument):
        ttnn_solve(y, SolverConfig())


def test_report_contents():
    instance = _instance((6, 6, 6), (2, 2))
    result = ttnn_solve(instance.Y, SolverConfig(max_iters = 15))
    report = result.report
    assert report.solver == 'ttnn'
    assert report.iters == 15
    assert not report.converged
    assert len(report.rel_change_x) == len(report.rel_change_s) == 15
    assert len(report.residual) == 15
    assert report.wall_time > 0
    summary = report.to_dict()
    assert set(summary) == {'solver', 'iters', 'converged', 'wall_time_s',
                            'tau', 'alpha', 'rank'}
    assert summary['tau'] == pytest.approx(default_tau((6, 6, 6)))
    assert summary['rank'] is None


def test_no_stop_while_constraints_are_violated():
    # Early on, thresholding zeroes M and S and X settles at Y/3: X and S
    # stop changing while Y = X + S is far from holding.
    instance = _instance((8, 8, 8), (2, 2))
    report = ttnn_solve(instance.Y, SolverConfig(max_iters = 30)).report
    assert report.iters == 30
    assert not report.converged
    assert report.residual[1] > 0.1


def test_fttnn_is_deterministic():
    instance = _instance((6, 7, 8), (2, 2))
    cfg = _fttnn_config(instance.spec, max_iters = 30, seed = 3)
    first = fttnn_solve(instance.Y, cfg)
    second = fttnn_solve(instance.Y, cfg)
    assert np.array_equal(first.X, second.X)
    assert np.array_equal(first.S, second.S)
    assert first.report.rank == cfg.rank


def test_fttnn_factors_stay_orthonormal():
    instance = _instance((6, 7, 8), (2, 2))
    result = fttnn_solve(instance.Y, _fttnn_config(instance.spec, max_iters = 20))
    assert result.tucker.rank == result.report.rank
    for u in result.tucker.factors:
        assert np.allclose(u.T @ u, np.eye(u.shape[1]))


def test_fttnn_rank_wider_than_unfolding():
    y = np.random.default_rng(4).standard_normal((6, 2, 2))
    result = fttnn_solve(y, SolverConfig(rank = (5, 2, 2), max_iters = 3))
    u = result.tucker.factors[0]
    assert u.shape == (6, 5)
    assert np.allclose(u.T @ u, np.eye(5))


def test_fttnn_recovery():
    instance = _instance((12, 12, 12, 12), (3, 3, 3))
    cfg = _fttnn_config(instance.spec, tau_scale = DESK_TAU_SCALE)
    result = fttnn_solve(instance.Y, cfg)
    report = result.report
    assert report.converged
    assert report.iters <= 500
    assert report.wall_time < 60
    assert rse(result.X, instance.X0) <= 1e-5
    assert rse(result.S, instance.S0) <= 1e-5
    _assert_feasible(result, instance.Y)


def test_fttnn_solution_properties():
    instance = _instance((12, 12, 12, 12), (3, 3, 3), seed = 1)
    cfg = _fttnn_config(instance.spec, tau_scale = DESK_TAU_SCALE)
    result = fttnn_solve(instance.Y, cfg)
    assert result.report.converged
    # The TT nuclear norm of X is carried by the core.
    full_norm = ttnn(result.X, result.report.alpha)
    core_norm = ttnn(result.tucker.core, result.report.alpha)
    assert abs(full_norm - core_norm) <= 1e-6 * full_norm
    assert np.array_equal(np.abs(result.S) > 1e-6, instance.S0 != 0)


def test_small_instance_recovery_by_both_solvers():
    instance = _instance((8, 8, 8), (2, 2))
    fast = fttnn_solve(instance.Y, _fttnn_config(instance.spec,
                                                 tau_scale = DESK_TAU_SCALE))
    baseline = ttnn_solve(instance.Y, SolverConfig(tau_scale = DESK_TAU_SCALE))
    assert fast.report.converged
    assert fast.report.iters <= 300
    assert baseline.report.converged
    for result in [fast, baseline]:
        assert rse(result.X, instance.X0) <= 1e-5
        assert np.array_equal(np.abs(result.S) > 1e-6, instance.S0 != 0)
        _assert_feasible(result, instance.Y)


def test_too_small_rank_fails_to_recover():
    instance = _instance((12, 12, 12, 12), (3, 3, 3))
    cfg = _fttnn_config(instance.spec, q = 0.7, tau_scale = DESK_TAU_SCALE)
    result = fttnn_solve(instance.Y, cfg)
    assert result.report.rank == (2, 6, 6, 2)
    assert rse(result.X, instance.X0) >= 1e-2


@pytest.mark.slow
@pytest.mark.parametrize('q', [1.0, 1.2, 1.5])
def test_recovery_is_stable_in_rank(q):
    instance = _instance((12, 12, 12, 12), (3, 3, 3))
    cfg = _fttnn_config(instance.spec, q = q, tau_scale = DESK_TAU_SCALE)
    result = fttnn_solve(instance.Y, cfg)
    assert rse(result.X, instance.X0) <= 1e-4


@pytest.mark.slow
def test_full_size_recovery_and_speedup():
    instance = _instance((30, 30, 30, 30), (3, 3, 3))
    fast = fttnn_solve(instance.Y, _fttnn_config(instance.spec))
    baseline = ttnn_solve(instance.Y, SolverConfig())
    assert rse(fast.X, instance.X0) <= 1e-7
    assert rse(baseline.X, instance.X0) <= 1e-5
    assert fast.report.wall_time <= 0.7 * baseline.report.wall_time


def test_denoising_image_stack():
    rng = np.random.default_rng(11)
    grid = np.linspace(0, 1, 16)
    stack = np.einsum('i,j,k,l->ijkl', np.sin(np.pi * grid), 1 - grid / 2,
                      [0.9, 0.6, 0.3], rng.uniform(0.5, 1.0, size = 6))
    stack += np.einsum('i,j,k,l->ijkl', grid, grid**2, [0.2, 0.5, 0.9],
                       rng.uniform(0.5, 1.0, size = 6))
    stack *= 255 / stack.max()
    noisy, _ = corrupt(stack, 0.2, rng, kind = 'uniform')
    cfg = SolverConfig(rank = (4, 4, 3, 4), tau_scale = DESK_TAU_SCALE)
    result = fttnn_solve(noisy, cfg)
    assert rse(result.X, stack) < rse(noisy, stack)
