"""Two coupled qubits between a hot and a cold bath.

In the single-excitation eigenbasis the dimer is a V-system: the hot (L) bath
pumps it, the cold (R) bath only adds spontaneous emission. Bath spectra are
flat, so every rate is evaluated once and the transition frequencies only fix
the splitting delta = eps_a - eps_b = 2 g.
"""
import logging
import math
from dataclasses import dataclass, fields
from typing import Final, NamedTuple, Optional

import numpy as np

from core import DensityState, VParams, validate
from enums import ErrorCode
from exceptions import InvalidParameterError
from generator import GENERAL_LABELS, Generator, build_general
from steadystate import solve_linear

SPLITTING_TOL: Final[float] = 1e-12


@dataclass(frozen=True)
class TwoBathParams:
    eps_a: float
    eps_b: float
    g: float
    nbar_L: float
    nbar_R: float
    gamma_L_aa: float
    gamma_L_bb: float
    gamma_R_aa: float
    gamma_R_bb: float
    f_L: float = 1.0
    f_R: float = 0.0
    # Interference weight of the vacuum (spontaneous) part of both baths;
    # zero for orthogonal transition dipoles.
    f_spont: float = 0.0

    @classmethod
    def from_splitting(cls, delta: float, nbar_L: float, gamma_L: tuple[float, float],
                       gamma_R: tuple[float, float], nbar_R: float = 0.0, f_L: float = 1.0,
                       f_R: float = 0.0, eps_b: float = 0.0) -> 'TwoBathParams':
        return validate_two_bath(cls(eps_a=eps_b + delta, eps_b=eps_b, g=0.5 * delta,
                                     nbar_L=nbar_L, nbar_R=nbar_R,
                                     gamma_L_aa=gamma_L[0], gamma_L_bb=gamma_L[1],
                                     gamma_R_aa=gamma_R[0], gamma_R_bb=gamma_R[1],
                                     f_L=f_L, f_R=f_R))

    @property
    def delta(self) -> float:
        return self.eps_a - self.eps_b

    def cross_spectrum(self, bath: str) -> float:
        """Real cross spectrum sqrt(f) * sqrt(gamma_aa gamma_bb) of bath 'L' or 'R'."""
        if bath == 'L':
            return math.sqrt(self.f_L * self.gamma_L_aa * self.gamma_L_bb)
        if bath == 'R':
            return math.sqrt(self.f_R * self.gamma_R_aa * self.gamma_R_bb)
        raise ValueError(f'Unknown bath {bath!r}')


class DissipationRates(NamedTuple):
    """Absorption (plus) and emission (minus) rates for the aa, bb and ab channels."""
    plus_aa: float
    plus_bb: float
    plus_ab: float
    minus_aa: float
    minus_bb: float
    minus_ab: float


def validate_two_bath(tp: TwoBathParams) -> TwoBathParams:
    for f in fields(tp):
        value: float = getattr(tp, f.name)
        if not math.isfinite(value):
            raise InvalidParameterError(ErrorCode.NonFinite, f'{f.name}={value} is not finite')

    for name in ('g', 'nbar_L', 'nbar_R', 'gamma_L_aa', 'gamma_L_bb', 'gamma_R_aa', 'gamma_R_bb'):
        if getattr(tp, name) < 0.0:
            raise InvalidParameterError(ErrorCode.NegativeRate, f'{name}={getattr(tp, name)} must be non-negative')

    for name in ('f_L', 'f_R', 'f_spont'):
        if not 0.0 <= getattr(tp, name) <= 1.0:
            raise InvalidParameterError(ErrorCode.ConfigMismatch, f'{name}={getattr(tp, name)} outside [0, 1]')

    if tp.delta < 0.0 or abs(tp.delta - 2.0 * tp.g) > SPLITTING_TOL * max(1.0, tp.delta):
        raise InvalidParameterError(
            ErrorCode.ConfigMismatch,
            f'splitting eps_a - eps_b = {tp.delta} must be non-negative and equal 2 g = {2.0 * tp.g}')

    for level in ('aa', 'bb'):
        if getattr(tp, f'gamma_L_{level}') + getattr(tp, f'gamma_R_{level}') <= 0.0:
            raise InvalidParameterError(ErrorCode.NonpositiveDecay,
                                        f'level {level[0]} has no decay channel')
    return tp


def dissipation_rates(tp: TwoBathParams) -> DissipationRates:
    tp = validate_two_bath(tp)
    vacuum = math.sqrt(tp.f_spont)
    root_L = math.sqrt(tp.gamma_L_aa * tp.gamma_L_bb)
    root_R = math.sqrt(tp.gamma_R_aa * tp.gamma_R_bb)

    def plus(gamma_L: float, gamma_R: float) -> float:
        return 0.5 * gamma_L * tp.nbar_L + 0.5 * gamma_R * tp.nbar_R

    def minus(gamma_L: float, gamma_R: float) -> float:
        return 0.5 * gamma_L * (tp.nbar_L + 1.0) + 0.5 * gamma_R * (tp.nbar_R + 1.0)

    plus_ab = 0.5 * root_L * math.sqrt(tp.f_L) * tp.nbar_L + 0.5 * root_R * math.sqrt(tp.f_R) * tp.nbar_R
    minus_ab = plus_ab + 0.5 * vacuum * (root_L + root_R)

    return DissipationRates(plus_aa=plus(tp.gamma_L_aa, tp.gamma_R_aa),
                            plus_bb=plus(tp.gamma_L_bb, tp.gamma_R_bb),
                            plus_ab=plus_ab,
                            minus_aa=minus(tp.gamma_L_aa, tp.gamma_R_aa),
                            minus_bb=minus(tp.gamma_L_bb, tp.gamma_R_bb),
                            minus_ab=minus_ab)


def build_transport_generator(tp: TwoBathParams) -> Generator:
    """Trace-eliminated dynamics over [rho_aa, rho_bb, re_ab, im_ab].

    The coherence precesses as -i delta rho_ab, the sign used by the V-system
    generator, so that the reduced model coincides with it entry by entry.
    """
    tp = validate_two_bath(tp)
    rates = dissipation_rates(tp)
    delta = tp.delta
    coherence_decay = rates.minus_aa + rates.minus_bb
    pump_aa, pump_bb, pump_ab = 2.0 * rates.plus_aa, 2.0 * rates.plus_bb, 2.0 * rates.plus_ab

    a_matrix = np.array([
        [-pump_aa - 2.0 * rates.minus_aa, -pump_aa, -2.0 * rates.minus_ab, 0.0],
        [-pump_bb, -pump_bb - 2.0 * rates.minus_bb, -2.0 * rates.minus_ab, 0.0],
        [-pump_ab - rates.minus_ab, -pump_ab - rates.minus_ab, -coherence_decay, delta],
        [0.0, 0.0, -delta, -coherence_decay],
    ])
    drive = np.array([pump_aa, pump_bb, pump_ab, 0.0])

    reduced: Optional[VParams] = None
    try:
        reduced = reduce_to_vsystem(tp)
    except InvalidParameterError:
        logging.debug('Transport configuration has no V-system counterpart')

    return Generator(a_matrix=a_matrix, drive=drive, basis_labels=GENERAL_LABELS, params=reduced)


def reduce_to_vsystem(tp: TwoBathParams) -> VParams:
    """Map the polarized-drive configuration (f_L=1, f_R=0, nbar_R=0) onto V-system parameters.

    gamma_i = gamma_L_ii + gamma_R_ii and r_i = nbar_L gamma_L_ii, so the
    effective n̄ = r_i / gamma_i falls below nbar_L whenever the cold bath
    contributes to the decay.
    """
    tp = validate_two_bath(tp)
    if tp.f_L != 1.0 or tp.f_R != 0.0 or tp.nbar_R != 0.0 or tp.f_spont != 0.0:
        raise InvalidParameterError(
            ErrorCode.ConfigMismatch,
            f'reduction needs f_L=1, f_R=0, nbar_R=0, f_spont=0; got f_L={tp.f_L}, f_R={tp.f_R}, '
            f'nbar_R={tp.nbar_R}, f_spont={tp.f_spont}')

    gamma_a = tp.gamma_L_aa + tp.gamma_R_aa
    gamma_b = tp.gamma_L_bb + tp.gamma_R_bb
    nbar_a = tp.nbar_L * tp.gamma_L_aa / gamma_a
    nbar_b = tp.nbar_L * tp.gamma_L_bb / gamma_b
    if abs(nbar_a - nbar_b) > SPLITTING_TOL * max(1.0, nbar_a):
        raise InvalidParameterError(
            ErrorCode.ConfigMismatch,
            f'levels see different pump-to-decay ratios {nbar_a} and {nbar_b}')

    return validate(VParams(gamma_a=gamma_a, gamma_b=gamma_b, nbar=nbar_a, delta=tp.delta))


def from_vsystem(params: VParams, nbar_L: Optional[float] = None) -> TwoBathParams:
    """Two-bath parameters whose transport generator equals the V-system one.

    The hot bath carries gamma_L_ii = r_i / nbar_L and the cold bath the rest
    of the decay, which needs nbar_L >= n̄ (default 2 n̄, an even split).
    """
    params = validate(params)
    if not params.is_radiative_only:
        raise InvalidParameterError(ErrorCode.ConfigMismatch,
                                    'the two-bath model has no relaxation or dephasing channel')
    if params.nbar == 0.0:
        nbar_L = 0.0
        gamma_L = (0.5 * params.gamma_a, 0.5 * params.gamma_b)
    else:
        nbar_L = 2.0 * params.nbar if nbar_L is None else nbar_L
        if nbar_L < params.nbar:
            raise InvalidParameterError(ErrorCode.ConfigMismatch,
                                        f'nbar_L={nbar_L} must not be below nbar={params.nbar}')
        gamma_L = (params.r_a / nbar_L, params.r_b / nbar_L)

    gamma_R = (params.gamma_a - gamma_L[0], params.gamma_b - gamma_L[1])
    return TwoBathParams.from_splitting(params.delta, nbar_L=nbar_L, gamma_L=gamma_L,
                                        gamma_R=(max(gamma_R[0], 0.0), max(gamma_R[1], 0.0)))


def heat_flux(state: DensityState, g: float) -> float:
    """Energy current 4 g Im(rho_ab) from the hot qubit to the cold one."""
    return 4.0 * g * state.im_ab


def steady_state_flux(tp: TwoBathParams) -> float:
    ss = solve_linear(build_transport_generator(tp))
    return heat_flux(ss.state, tp.g)


def generator_deviation(params: VParams, nbar_L: Optional[float] = None) -> float:
    """Largest entry-wise gap between the V-system generator and its two-bath counterpart.

    Entries are compared relative to max(1, |entry|) over both the matrix and
    the drive vector.
    """
    reference = build_general(params)
    transport = build_transport_generator(from_vsystem(params, nbar_L=nbar_L))
    gaps = [np.abs(transport.a_matrix - reference.a_matrix) / np.maximum(1.0, np.abs(reference.a_matrix)),
            np.abs(transport.drive - reference.drive) / np.maximum(1.0, np.abs(reference.drive))]
    return float(max(np.max(gap) for gap in gaps))
