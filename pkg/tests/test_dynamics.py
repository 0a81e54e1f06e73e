import math

import numpy as np
import pytest

from core import DensityState, VParams
from conftest import DELTA_GRID, GAMMA_D_GRID, NBAR_GRID
from dynamics import (REL_TOL, STIFFNESS_RATIO, classify_regime, eigen_analysis, equilibration_time, propagate,
                      propagate_exact, quasi_steady_lifetime, select_method, steady_state_horizon, stiffness_ratio)
from enums import ErrorCode, Regime
from exceptions import InvalidParameterError
from generator import build_general, build_symmetric
from steadystate import closed_form

# Long-time propagation oracle tolerances; the final state must match the
# closed form to relative 1e-8
ORACLE_REL_TOL = 1e-12
ORACLE_ABS_TOL = 1e-16


@pytest.mark.parametrize(
    "nbar,delta,regime",
    [
        (1e-3, 0.1, Regime.Overdamped),
        (1e-3, 10.0, Regime.Underdamped),
        (1e3, 100.0, Regime.Overdamped),
        (1e2, 200.0, Regime.Underdamped),
    ],
)
def test_classify_regime(nbar, delta, regime):
    assert classify_regime(VParams.symmetric(nbar=nbar, delta=delta)) == regime


def test_eigen_analysis_reports_slowest_timescale():
    gen = build_symmetric(VParams.symmetric(nbar=1.0, delta=1.0))
    spectrum = eigen_analysis(gen)

    assert len(spectrum.eigenvalues) == 3
    assert np.all(spectrum.eigenvalues.real < 0.0)
    assert spectrum.slowest_timescale == pytest.approx(1.0 / np.min(np.abs(spectrum.eigenvalues.real)))
    assert steady_state_horizon(gen) == pytest.approx(40.0 * spectrum.slowest_timescale)


@pytest.mark.parametrize("delta,expected", [(0.5, 8.0), (1.0, 2.0), (0.1, 200.0)])
def test_quasi_steady_lifetime(delta, expected):
    assert quasi_steady_lifetime(VParams.symmetric(nbar=1e-3, delta=delta)) == pytest.approx(expected)


def test_quasi_steady_lifetime_edge_cases():
    assert math.isinf(quasi_steady_lifetime(VParams.symmetric(nbar=1e-3, delta=0.0)))

    with pytest.raises(InvalidParameterError) as exc_info:
        quasi_steady_lifetime(VParams.symmetric(nbar=1e-3, delta=2.0))
    assert exc_info.value.code == ErrorCode.RegimeMismatch

    with pytest.raises(InvalidParameterError) as exc_info:
        quasi_steady_lifetime(VParams(gamma_a=1.0, gamma_b=2.0, delta=0.5))
    assert exc_info.value.code == ErrorCode.AsymmetricInput


@pytest.mark.parametrize("gamma_d", GAMMA_D_GRID)
def test_long_time_propagation_converges_to_closed_form(gamma_d):
    mismatches = []
    for nbar in NBAR_GRID:
        for delta in DELTA_GRID:
            params = VParams.symmetric(nbar=float(nbar), delta=float(delta), gamma_d=gamma_d)
            series = propagate(build_symmetric(params), n_points=2,
                               rel_tol=ORACLE_REL_TOL, abs_tol=ORACLE_ABS_TOL)
            ss = closed_form(params)
            expected = np.array([ss.rho_aa, ss.re_ab, ss.im_ab])
            error = float(np.max(np.abs(series.vectors[-1] / expected - 1.0)))
            if error > 1e-8:
                mismatches.append((float(nbar), float(delta), series.metadata['method'], error))

    assert mismatches == []


def test_stiff_generator_is_integrated_implicitly():
    stiff = build_symmetric(VParams.symmetric(nbar=1e3, delta=1e-2))
    mild = build_symmetric(VParams.symmetric(nbar=1.0, delta=1.0))

    assert stiffness_ratio(stiff) > STIFFNESS_RATIO
    assert select_method(stiff) == 'LSODA'
    assert select_method(mild) == 'DOP853'
    assert propagate(stiff, t_end=1.0, n_points=3).metadata['method'] == 'LSODA'
    assert propagate(mild, t_end=1.0, n_points=3, method='RK45').metadata['method'] == 'RK45'


@pytest.mark.parametrize("nbar,delta", [(1e-3, 0.1), (1e-3, 10.0), (1.0, 1.0), (100.0, 200.0), (1e3, 1.0)])
def test_halving_tolerance_moves_final_state_less_than_tolerance(nbar, delta):
    gen = build_symmetric(VParams.symmetric(nbar=nbar, delta=delta))
    coarse = propagate(gen, n_points=2)
    fine = propagate(gen, n_points=2, rel_tol=0.5 * REL_TOL)

    assert np.max(np.abs(fine.vectors[-1] - coarse.vectors[-1])) < REL_TOL


def test_propagation_starts_in_ground_state_and_keeps_trace():
    series = propagate(build_symmetric(VParams.symmetric(nbar=1.0, delta=1.0)), t_end=5.0, n_points=51)

    assert series.states[0] == DensityState.ground()
    assert len(series.times) == 51
    assert series.times[-1] == 5.0
    for state in series.states:
        assert state.trace == pytest.approx(1.0, abs=1e-12)
    assert series.metadata['method'] == 'DOP853'
    assert series.metadata['nfev'] > 0


@pytest.mark.parametrize("nbar,delta", [(1e-3, 10.0), (1.0, 1.0), (10.0, 0.1)])
def test_integrator_matches_matrix_exponential(nbar, delta):
    gen = build_symmetric(VParams.symmetric(nbar=nbar, delta=delta))
    integrated = propagate(gen, t_end=10.0, n_points=101)
    exact = propagate_exact(gen, t_end=10.0, n_points=101)

    np.testing.assert_allclose(integrated.vectors, exact.vectors, atol=1e-9)


def test_implicit_method_receives_jacobian():
    gen = build_symmetric(VParams.symmetric(nbar=1e3, delta=100.0))
    stiff = propagate(gen, t_end=1.0, n_points=11, method='Radau')
    exact = propagate_exact(gen, t_end=1.0, n_points=11)

    np.testing.assert_allclose(stiff.vectors, exact.vectors, atol=1e-8)


def test_general_and_symmetric_trajectories_coincide():
    params = VParams.symmetric(nbar=0.5, delta=3.0, gamma_d=1.0)
    symmetric = propagate_exact(build_symmetric(params), t_end=8.0, n_points=41)
    general = propagate_exact(build_general(params), t_end=8.0, n_points=41)

    np.testing.assert_allclose(general.vectors[:, 0], general.vectors[:, 1], atol=1e-12)
    np.testing.assert_allclose(general.vectors[:, [0, 2, 3]], symmetric.vectors, atol=1e-12)


def test_asymmetric_initial_state_needs_general_generator():
    initial = DensityState(rho_gg=0.5, rho_aa=0.3, rho_bb=0.2)
    params = VParams.symmetric(nbar=1.0, delta=1.0)

    with pytest.raises(InvalidParameterError) as exc_info:
        propagate(build_symmetric(params), initial=initial, t_end=1.0)
    assert exc_info.value.code == ErrorCode.AsymmetricState

    series = propagate(build_general(params), initial=initial, t_end=1.0, n_points=11)
    assert series.states[0].rho_aa == 0.3


@pytest.mark.parametrize("t_end,n_points", [(0.0, 11), (-1.0, 11), (1.0, 1)])
def test_invalid_time_grid_is_rejected(t_end, n_points):
    gen = build_symmetric(VParams.symmetric(nbar=1.0, delta=1.0))

    with pytest.raises(InvalidParameterError) as exc_info:
        propagate(gen, t_end=t_end, n_points=n_points)
    assert exc_info.value.code == ErrorCode.InvalidInitial


def test_invalid_initial_state_is_rejected():
    gen = build_symmetric(VParams.symmetric(nbar=1.0, delta=1.0))

    with pytest.raises(InvalidParameterError) as exc_info:
        propagate(gen, initial=DensityState(rho_gg=0.0, rho_aa=0.6, rho_bb=0.6), t_end=1.0)
    assert exc_info.value.code == ErrorCode.InvalidInitial


@pytest.mark.parametrize("nbar,delta", [(1e-3, 0.1), (1e-3, 10.0), (1e3, 100.0), (1e2, 200.0)])
def test_trajectories_stay_physical(nbar, delta):
    series = propagate(build_symmetric(VParams.symmetric(nbar=nbar, delta=delta)), n_points=501)

    for state in series.states:
        assert abs(state.trace - 1.0) <= 1e-8
        assert state.coherence_modulus_sq <= state.rho_aa * state.rho_bb + 1e-8


@pytest.mark.parametrize("nbar", [1e-3, 1e-2])
@pytest.mark.parametrize("delta", [1e-2, 0.1, 1.0, 10.0, 100.0])
def test_weak_pumping_equilibrates_within_horizon(nbar, delta):
    gen = build_symmetric(VParams.symmetric(nbar=nbar, delta=delta))
    ratio = equilibration_time(gen) / eigen_analysis(gen).slowest_timescale

    assert 5.0 <= ratio <= 40.0


@pytest.mark.parametrize("nbar", [1.0, 100.0])
@pytest.mark.parametrize("delta", [1e-2, 1.0, 100.0])
def test_equilibration_never_exceeds_horizon(nbar, delta):
    gen = build_symmetric(VParams.symmetric(nbar=nbar, delta=delta))

    assert equilibration_time(gen) <= steady_state_horizon(gen)
