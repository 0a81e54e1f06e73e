import logging
from dataclasses import dataclass, field
from typing import Any, Final, Optional

import numpy as np
from scipy.integrate import solve_ivp
from scipy.linalg import expm

from core import DensityState, VParams, validate
from enums import ErrorCode, Regime
from exceptions import IntegrationError, InvalidParameterError
from generator import Generator

REL_TOL: Final[float] = 1e-10
ABS_TOL: Final[float] = 1e-12
METHOD: Final[str] = 'auto'
EXPLICIT_METHOD: Final[str] = 'DOP853'
STIFF_METHOD: Final[str] = 'LSODA'
# max|Re λ| / min|Re λ| above which the explicit method is stability-limited
STIFFNESS_RATIO: Final[float] = 100.0
HORIZON_FACTOR: Final[float] = 40.0

_IMPLICIT_METHODS: Final[frozenset[str]] = frozenset({'Radau', 'BDF', 'LSODA'})


@dataclass(frozen=True, eq=False)
class TimeSeries:
    times: np.ndarray
    vectors: np.ndarray
    states: list[DensityState]
    basis_labels: tuple[str, ...]
    params: Optional[VParams] = None
    metadata: dict[str, Any] = field(default_factory=dict)

    @property
    def final(self) -> DensityState:
        return self.states[-1]

    def column(self, name: str) -> np.ndarray:
        return np.array([getattr(s, name) for s in self.states])


@dataclass(frozen=True, eq=False)
class Spectrum:
    eigenvalues: np.ndarray
    slowest_timescale: float
    regime: Regime


def classify_regime(params: VParams) -> Regime:
    """Underdamped when the splitting exceeds r + gamma."""
    params = validate(params)
    gamma = 0.5 * (params.gamma_a + params.gamma_b)
    if params.delta > params.nbar * gamma + gamma:
        return Regime.Underdamped
    return Regime.Overdamped


def eigen_analysis(gen: Generator) -> Spectrum:
    eigenvalues = np.linalg.eigvals(gen.a_matrix)
    slowest_rate = float(np.min(np.abs(eigenvalues.real)))
    timescale = 1.0 / slowest_rate if slowest_rate > 0.0 else np.inf

    if gen.params is not None:
        regime = classify_regime(gen.params)
    else:
        # No parameter echo (e.g. a transport generator): decide from the spectrum.
        oscillating = np.abs(eigenvalues.imag) > np.abs(eigenvalues.real)
        regime = Regime.Underdamped if bool(np.any(oscillating)) else Regime.Overdamped

    return Spectrum(eigenvalues=eigenvalues, slowest_timescale=timescale, regime=regime)


def steady_state_horizon(gen: Generator, factor: float = HORIZON_FACTOR) -> float:
    return factor * eigen_analysis(gen).slowest_timescale


def stiffness_ratio(gen: Generator) -> float:
    decay = np.abs(np.linalg.eigvals(gen.a_matrix).real)
    slowest = float(np.min(decay))
    return float(np.max(decay)) / slowest if slowest > 0.0 else np.inf


def select_method(gen: Generator) -> str:
    """DOP853 unless the decay rates span more than STIFFNESS_RATIO, then LSODA."""
    return STIFF_METHOD if stiffness_ratio(gen) > STIFFNESS_RATIO else EXPLICIT_METHOD


def quasi_steady_lifetime(params: VParams) -> float:
    """Transient coherence lifetime (2/gamma)(delta/gamma)^-2 of an isotropically driven system.

    Only an estimate for polarized driving; defined for delta <= gamma.
    """
    params = validate(params)
    if not params.is_symmetric:
        raise InvalidParameterError(ErrorCode.AsymmetricInput,
                                    'lifetime estimate needs gamma_a == gamma_b')
    gamma = params.gamma_a
    if params.delta > gamma:
        raise InvalidParameterError(ErrorCode.RegimeMismatch,
                                    f'delta={params.delta} > gamma={gamma}: no quasi-steady plateau')
    if params.delta == 0.0:
        return np.inf
    return 2.0 * gamma / params.delta ** 2


def _initial_vector(gen: Generator, initial: Optional[DensityState]) -> np.ndarray:
    state = initial if initial is not None else DensityState.ground()
    return state.check().to_vector(gen.dim)


def _check_grid(t_end: float, n_points: int) -> None:
    if not t_end > 0.0:
        raise InvalidParameterError(ErrorCode.InvalidInitial, f't_end={t_end} must be positive')
    if n_points < 2:
        raise InvalidParameterError(ErrorCode.InvalidInitial, f'n_points={n_points} must be at least 2')


def _series(gen: Generator, times: np.ndarray, vectors: np.ndarray,
            metadata: dict[str, Any]) -> TimeSeries:
    states = [DensityState.from_vector(x) for x in vectors]
    return TimeSeries(times=times, vectors=vectors, states=states,
                      basis_labels=gen.basis_labels, params=gen.params, metadata=metadata)


def propagate(gen: Generator,
              initial: Optional[DensityState] = None,
              t_end: Optional[float] = None,
              n_points: int = 201,
              rel_tol: float = REL_TOL,
              abs_tol: float = ABS_TOL,
              method: str = METHOD) -> TimeSeries:
    """Integrate x' = A x + d from `initial` (ground state by default).

    `t_end=None` runs to the steady-state horizon, 40 slowest relaxation times.
    method='auto' picks the explicit DOP853 integrator, or LSODA with the
    constant Jacobian A for stiff generators (large pumping near degeneracy).
    """
    if t_end is None:
        t_end = steady_state_horizon(gen)
    if method == METHOD:
        method = select_method(gen)
    _check_grid(t_end, n_points)
    x0 = _initial_vector(gen, initial)

    logging.info(f'Propagating {gen.dim}-state system to t={t_end} with {method}')

    options: dict[str, Any] = {}
    if method in _IMPLICIT_METHODS:
        options['jac'] = gen.jacobian

    sol = solve_ivp(gen.rhs, (0.0, t_end), x0, method=method, rtol=rel_tol, atol=abs_tol,
                    dense_output=True, **options)
    if not sol.success:
        raise IntegrationError(f'{method} failed at t={sol.t[-1]}: {sol.message}')

    times = np.linspace(0.0, t_end, n_points)
    vectors = np.asarray(sol.sol(times)).T
    vectors[0] = x0

    metadata = {
        'method': method,
        'rel_tol': rel_tol,
        'abs_tol': abs_tol,
        'n_steps': len(sol.t) - 1,
        'nfev': int(sol.nfev),
    }
    logging.debug(f'Propagation finished: {metadata}')
    return _series(gen, times, vectors, metadata)


def propagate_exact(gen: Generator,
                    initial: Optional[DensityState] = None,
                    t_end: Optional[float] = None,
                    n_points: int = 201) -> TimeSeries:
    """Closed-form solution x(t) = x_s + exp(A t) (x0 - x_s) on a uniform grid."""
    if t_end is None:
        t_end = steady_state_horizon(gen)
    _check_grid(t_end, n_points)
    x0 = _initial_vector(gen, initial)
    x_s = gen.fixed_point()

    times = np.linspace(0.0, t_end, n_points)
    displacement = x0 - x_s
    vectors = np.array([x_s + expm(gen.a_matrix * t) @ displacement for t in times])
    vectors[0] = x0

    return _series(gen, times, vectors, {'method': 'expm'})


def equilibration_time(gen: Generator,
                       initial: Optional[DensityState] = None,
                       threshold: float = 1e-6,
                       n_points: int = 4001) -> float:
    """First time ||x(t) - x_s|| drops below threshold * ||x_s||.

    Resolved on a uniform grid over the steady-state horizon; returns inf when
    the threshold is not reached inside it.
    """
    series = propagate_exact(gen, initial=initial, n_points=n_points)
    x_s = gen.fixed_point()
    scale = float(np.linalg.norm(x_s))
    bound = threshold * scale if scale > 0.0 else threshold

    distances = np.linalg.norm(series.vectors - x_s, axis=1)
    below = np.flatnonzero(distances <= bound)
    if len(below) == 0:
        return np.inf
    return float(series.times[below[0]])
