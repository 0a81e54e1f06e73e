"""Fluorescence emitted by the driven V-system.

Intensities are expressed in units of the prefactor i0, which lumps together
the refractive index, the transition frequency and the detector distance.
"""
import logging
import math
from dataclasses import dataclass, field
from typing import Any, Final, Optional

import numpy as np
from scipy.integrate import dblquad

from core import DensityState, STATE_TOL, VParams, validate
from dynamics import TimeSeries, propagate, steady_state_horizon
from enums import ErrorCode
from exceptions import IdentityViolationError, InvalidParameterError
from generator import SYMMETRIC_LABELS, Generator, build_symmetric
from steadystate import IDENTITY_TOL, canonical_population, closed_form

QUADRATURE_TOL: Final[float] = 1e-12


@dataclass(frozen=True)
class EmissionConfig:
    i0: float = 1.0
    theta: float = 0.0
    phi: float = 0.0

    def __post_init__(self) -> None:
        if not (math.isfinite(self.i0) and self.i0 > 0.0):
            raise InvalidParameterError(ErrorCode.NonpositiveIntensity, f'i0={self.i0} must be positive')
        if not 0.0 <= self.theta <= math.pi:
            raise InvalidParameterError(ErrorCode.ConfigMismatch, f'theta={self.theta} outside [0, pi]')
        if not 0.0 <= self.phi < 2.0 * math.pi:
            raise InvalidParameterError(ErrorCode.ConfigMismatch, f'phi={self.phi} outside [0, 2 pi)')


@dataclass(frozen=True, eq=False)
class FluorescenceTrace:
    """Polarized-drive intensity over the coherence-free reference along t."""
    times: np.ndarray
    polarized: np.ndarray
    reference: np.ndarray
    ratio: np.ndarray
    params: VParams
    metadata: dict[str, Any] = field(default_factory=dict)


def _pattern(state: DensityState, theta: float, phi: float) -> float:
    sin_sq = math.sin(theta) ** 2
    return (0.5 * (1.0 + math.cos(theta) ** 2) * (state.rho_aa + state.rho_bb)
            + sin_sq * (math.cos(2.0 * phi) * state.re_ab - math.sin(2.0 * phi) * state.im_ab))


def angular_intensity(state: DensityState, cfg: EmissionConfig) -> float:
    return cfg.i0 * _pattern(state, cfg.theta, cfg.phi)


def total_intensity(state: DensityState, i0: float = 1.0) -> float:
    """Intensity 16 pi / 3 * i0 * rho_aa integrated over all directions."""
    if abs(state.rho_aa - state.rho_bb) > STATE_TOL:
        raise InvalidParameterError(ErrorCode.AsymmetricState,
                                    f'rho_aa={state.rho_aa} differs from rho_bb={state.rho_bb}')
    return 16.0 * math.pi / 3.0 * i0 * state.rho_aa


def integrated_intensity(state: DensityState, i0: float = 1.0) -> float:
    """Sphere quadrature of the angular intensity; valid for any state."""
    value, error = dblquad(lambda theta, phi: _pattern(state, theta, phi) * math.sin(theta),
                           0.0, 2.0 * math.pi, 0.0, math.pi,
                           epsabs=QUADRATURE_TOL, epsrel=QUADRATURE_TOL)
    logging.debug(f'Sphere quadrature {value} (error estimate {error:.1e})')
    return i0 * value


def relative_intensity_difference(params: VParams, tol: float = IDENTITY_TOL) -> float:
    """Fractional fluorescence suppression (rho_c - rho_aa) / rho_c under polarized drive.

    Equals the steady-state coherence re_ab for a purely radiative system; a
    mismatch beyond tol raises IdentityViolationError.
    """
    params = validate(params)
    if not params.is_radiative_only:
        raise InvalidParameterError(ErrorCode.ConfigMismatch,
                                    'intensity difference equals re_ab only for gamma_rel = gamma_d = 0')
    if params.nbar == 0.0:
        return 0.0

    rho_c = canonical_population(params)
    ss = closed_form(params)
    difference = (rho_c - ss.rho_aa) / rho_c
    if abs(difference - ss.re_ab) > tol:
        raise IdentityViolationError(
            f'intensity difference {difference!r} != re_ab {ss.re_ab!r} at {params}')
    return difference


def reference_generator(params: VParams, isotropic_rate_factor: float = 1.0) -> Generator:
    """Symmetric generator with every coherence source removed.

    rho_aa' = -(3r' + gamma + gamma_rel) rho_aa + r' with r' = factor * r; the
    coherences only decay. Its steady state is the canonical population when
    the factor is 1 and gamma_rel = 0.
    """
    params = validate(params)
    if not params.is_symmetric:
        raise InvalidParameterError(ErrorCode.AsymmetricInput, 'the reference needs gamma_a == gamma_b')
    if not isotropic_rate_factor > 0.0:
        raise InvalidParameterError(ErrorCode.NegativeRate,
                                    f'isotropic_rate_factor={isotropic_rate_factor} must be positive')

    r = isotropic_rate_factor * params.r_a
    gamma = params.gamma_a
    coherence_decay = r + gamma + params.gamma_d
    a_matrix = np.array([
        [-(3.0 * r + gamma + params.gamma_rel), 0.0, 0.0],
        [0.0, -coherence_decay, params.delta],
        [0.0, -params.delta, -coherence_decay],
    ])
    return Generator(a_matrix=a_matrix, drive=np.array([r, 0.0, 0.0]),
                     basis_labels=SYMMETRIC_LABELS, params=params)


def coherence_free_reference(params: VParams,
                             initial: Optional[DensityState] = None,
                             t_end: Optional[float] = None,
                             n_points: int = 201,
                             isotropic_rate_factor: float = 1.0) -> TimeSeries:
    gen = reference_generator(params, isotropic_rate_factor)
    if t_end is None:
        t_end = steady_state_horizon(build_symmetric(params))
    return propagate(gen, initial=initial, t_end=t_end, n_points=n_points)


def fluorescence_ratio(params: VParams,
                       t_end: Optional[float] = None,
                       n_points: int = 201,
                       isotropic_rate_factor: float = 1.0) -> FluorescenceTrace:
    """Ratio of total emitted intensity, polarized over coherence-free drive, from the ground state.

    Both runs start with no excitation, so the ratio is set to 1 where the
    reference intensity vanishes. Only the long-time limit, 1 - re_ab, is
    model independent.
    """
    gen = build_symmetric(params)
    if t_end is None:
        t_end = steady_state_horizon(gen)

    logging.info(f'Fluorescence ratio for {gen.params} up to t={t_end}')
    polarized_run = propagate(gen, t_end=t_end, n_points=n_points)
    reference_run = coherence_free_reference(params, t_end=t_end, n_points=n_points,
                                             isotropic_rate_factor=isotropic_rate_factor)

    polarized = 2.0 * polarized_run.column('rho_aa')
    reference = 2.0 * reference_run.column('rho_aa')
    ratio = np.ones_like(polarized)
    np.divide(polarized, reference, out=ratio, where=reference > 0.0)

    metadata = {'isotropic_rate_factor': isotropic_rate_factor, **polarized_run.metadata}
    return FluorescenceTrace(times=polarized_run.times, polarized=polarized, reference=reference,
                             ratio=ratio, params=validate(params), metadata=metadata)
