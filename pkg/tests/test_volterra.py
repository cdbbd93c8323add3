"""Direct integro-differential solver used as the independent numeric oracle."""

import math

import numpy as np
import pytest

from entdyn.reservoir import AmplitudeFn, BandGapDip, DetunedLorentzian, kernel
from entdyn.volterra import (
    GridAmplitude,
    SolverConfig,
    StepTooLarge,
    richardson_order,
    solve,
)

LORENTZ_D0 = DetunedLorentzian(gamma=1.0, lam=0.1, delta=0.0)
FIG2_G1 = BandGapDip(gamma1=1.0, gamma2=1.0, lam1=50.0, lam2=5.0)


def lorentz_kernel(tau):
    return kernel(LORENTZ_D0, tau)


def pbg_kernel(tau):
    return kernel(FIG2_G1, tau)


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(step=0.0, t_max=1.0),
        dict(step=-0.1, t_max=1.0),
        dict(step=2.0, t_max=1.0),
        dict(step=float("nan"), t_max=1.0),
        dict(step=1e-9, t_max=1e3),  # ratio guard
        dict(step=0.1, t_max=1.0, scheme="rk4"),
    ],
)
def test_solver_config_rejects_invalid(kwargs):
    with pytest.raises(ValueError):
        SolverConfig(**kwargs)


@pytest.mark.parametrize(
    "times,values",
    [
        (np.array([0.0]), np.array([1.0 + 0j])),
        (np.array([0.0, 1.0]), np.array([0.5 + 0j, 0.4 + 0j])),
        (np.array([0.0, 0.0]), np.array([1.0 + 0j, 1.0 + 0j])),
    ],
)
def test_grid_amplitude_rejects_invalid(times, values):
    with pytest.raises(ValueError):
        GridAmplitude(times=times, values=values)


def test_zero_kernel_keeps_amplitude_one():
    grid = solve(lambda tau: 0.0j, SolverConfig(step=0.01, t_max=2.0))
    assert np.max(np.abs(grid.values - 1.0)) == 0.0


def test_constant_kernel_gives_cosine():
    """f = c reduces the memory equation to qddot = -c q, so q = cos(sqrt(c) t)."""
    h = 1e-3
    grid = solve(lambda tau: 1.0 + 0.0j, SolverConfig(step=h, t_max=0.5 * math.pi))
    want = np.cos(grid.times)
    assert np.max(np.abs(grid.values - want)) < 5e-7
    # the quarter-period zero is resolved to the scheme's accuracy
    assert abs(grid.value_at(0.5 * math.pi)) <= 2.0 * h**2


def test_matches_analytic_lorentzian_amplitude():
    amp = AmplitudeFn(LORENTZ_D0)
    grid = solve(lorentz_kernel, SolverConfig(step=1e-3, t_max=5.0))
    assert np.max(np.abs(grid.values - amp(grid.times))) <= 1e-4


def test_value_at_interpolates():
    grid = solve(lorentz_kernel, SolverConfig(step=1e-2, t_max=1.0))
    amp = AmplitudeFn(LORENTZ_D0)
    assert abs(grid.value_at(0.555) - amp(0.555)) < 1e-3


@pytest.mark.parametrize(
    "kern,coarse,fine,t_max",
    [
        (lorentz_kernel, 8e-3, 4e-3, 15.0),
        (pbg_kernel, 2e-3, 1e-3, 1.0),
    ],
)
def test_halving_the_step_quarters_the_error(kern, coarse, fine, t_max):
    """Max-norm deviation from the closed form drops by ~4 per halving."""
    model = LORENTZ_D0 if kern is lorentz_kernel else FIG2_G1
    amp = AmplitudeFn(model)
    devs = []
    for h in (coarse, fine):
        grid = solve(kern, SolverConfig(step=h, t_max=t_max))
        devs.append(np.max(np.abs(grid.values - amp(grid.times))))
    ratio = devs[0] / devs[1]
    assert 3.4 <= ratio <= 4.6


@pytest.mark.parametrize(
    "kern,step,t_max",
    [
        (lorentz_kernel, 8e-3, 15.0),
        (pbg_kernel, 1e-3, 0.5),
    ],
)
def test_richardson_order_is_second(kern, step, t_max):
    order = richardson_order(kern, SolverConfig(step=step, t_max=t_max))
    assert 1.7 <= order <= 2.3


def test_richardson_order_undefined_for_zero_kernel():
    order = richardson_order(lambda tau: 0.0j, SolverConfig(step=0.01, t_max=1.0))
    assert math.isnan(order)


@pytest.mark.parametrize(
    "kern,step,t_max",
    [
        (lorentz_kernel, 1e-2, 15.0),
        (pbg_kernel, 1e-3, 5.0),
    ],
)
def test_amplitude_stays_contractive(kern, step, t_max):
    grid = solve(kern, SolverConfig(step=step, t_max=t_max))
    assert np.max(np.abs(grid.values)) <= 1.0 + 5.0 * step**2


def test_unstable_growth_raises_step_too_large():
    # a negative constant kernel turns the dynamics into qddot = +|c| q
    with pytest.raises(StepTooLarge):
        solve(lambda tau: -25.0 + 0.0j, SolverConfig(step=0.01, t_max=3.0))


def test_strong_kernel_with_large_step_raises():
    strong = BandGapDip(gamma1=100.0, gamma2=100.0, lam1=50.0, lam2=5.0)
    with pytest.raises(StepTooLarge):
        solve(lambda tau: kernel(strong, tau), SolverConfig(step=0.1, t_max=1.0))
