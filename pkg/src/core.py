"""Domain types shared by every module.

All rates and the splitting are dimensionless multiples of the reference
decay rate gamma, which also fixes the time unit 1/gamma (hbar = 1).
"""
import math
from dataclasses import dataclass, fields
from typing import Final

import numpy as np
from scipy import constants

from enums import ErrorCode
from exceptions import InvalidParameterError

STATE_TOL: Final[float] = 1e-9


@dataclass(frozen=True)
class VParams:
    gamma_a: float = 1.0
    gamma_b: float = 1.0
    nbar: float = 0.0
    delta: float = 0.0
    gamma_rel: float = 0.0
    gamma_d: float = 0.0

    @classmethod
    def symmetric(cls, nbar: float, delta: float, gamma_rel: float = 0.0,
                  gamma_d: float = 0.0, gamma: float = 1.0) -> 'VParams':
        return validate(cls(gamma_a=gamma, gamma_b=gamma, nbar=nbar, delta=delta,
                            gamma_rel=gamma_rel, gamma_d=gamma_d))

    @property
    def r_a(self) -> float:
        return self.nbar * self.gamma_a

    @property
    def r_b(self) -> float:
        return self.nbar * self.gamma_b

    @property
    def is_symmetric(self) -> bool:
        return self.gamma_a == self.gamma_b

    @property
    def is_radiative_only(self) -> bool:
        return self.gamma_rel == 0.0 and self.gamma_d == 0.0

    def as_dict(self) -> dict[str, float]:
        return {f.name: float(getattr(self, f.name)) for f in fields(self)}


@dataclass(frozen=True)
class DensityState:
    rho_gg: float
    rho_aa: float
    rho_bb: float
    re_ab: float = 0.0
    im_ab: float = 0.0

    @classmethod
    def ground(cls) -> 'DensityState':
        return cls(rho_gg=1.0, rho_aa=0.0, rho_bb=0.0)

    @classmethod
    def from_vector(cls, x: np.ndarray) -> 'DensityState':
        """Rebuild the state from a Liouville vector.

        Three components are [rho_aa, re_ab, im_ab] of the symmetric system
        (rho_bb = rho_aa); four are [rho_aa, rho_bb, re_ab, im_ab].
        """
        if len(x) == 3:
            rho_aa, re_ab, im_ab = (float(v) for v in x)
            rho_bb = rho_aa
        elif len(x) == 4:
            rho_aa, rho_bb, re_ab, im_ab = (float(v) for v in x)
        else:
            raise InvalidParameterError(ErrorCode.InvalidInitial,
                                        f'Liouville vector must have 3 or 4 components, got {len(x)}')
        return cls(rho_gg=1.0 - rho_aa - rho_bb, rho_aa=rho_aa, rho_bb=rho_bb,
                   re_ab=re_ab, im_ab=im_ab)

    def to_vector(self, dim: int) -> np.ndarray:
        if dim == 3:
            if abs(self.rho_aa - self.rho_bb) > STATE_TOL:
                raise InvalidParameterError(ErrorCode.AsymmetricState,
                                            f'rho_aa={self.rho_aa} differs from rho_bb={self.rho_bb}')
            return np.array([self.rho_aa, self.re_ab, self.im_ab])
        if dim == 4:
            return np.array([self.rho_aa, self.rho_bb, self.re_ab, self.im_ab])
        raise InvalidParameterError(ErrorCode.InvalidInitial, f'Unsupported state dimension {dim}')

    @property
    def trace(self) -> float:
        return self.rho_gg + self.rho_aa + self.rho_bb

    @property
    def coherence_modulus_sq(self) -> float:
        return self.re_ab ** 2 + self.im_ab ** 2

    def violations(self, tol: float = STATE_TOL) -> list[str]:
        problems: list[str] = []
        if abs(self.trace - 1.0) > tol:
            problems.append(f'trace {self.trace} != 1')
        for name in ('rho_gg', 'rho_aa', 'rho_bb'):
            value: float = getattr(self, name)
            if value < -tol or value > 1.0 + tol:
                problems.append(f'{name}={value} outside [0, 1]')
        if self.coherence_modulus_sq > self.rho_aa * self.rho_bb + tol:
            problems.append(
                f'|rho_ab|^2={self.coherence_modulus_sq} exceeds rho_aa*rho_bb={self.rho_aa * self.rho_bb}')
        return problems

    def check(self, tol: float = STATE_TOL) -> 'DensityState':
        problems = self.violations(tol)
        if problems:
            raise InvalidParameterError(ErrorCode.InvalidInitial, '; '.join(problems))
        return self

    def as_dict(self) -> dict[str, float]:
        return {f.name: float(getattr(self, f.name)) for f in fields(self)}


def validate(params: VParams) -> VParams:
    values = params.as_dict()

    for name, value in values.items():
        if not math.isfinite(value):
            raise InvalidParameterError(ErrorCode.NonFinite, f'{name}={value} is not finite')

    for name in ('gamma_a', 'gamma_b'):
        if values[name] <= 0.0:
            raise InvalidParameterError(ErrorCode.NonpositiveDecay,
                                        f'{name}={values[name]} must be positive')

    for name in ('nbar', 'delta', 'gamma_rel', 'gamma_d'):
        if values[name] < 0.0:
            raise InvalidParameterError(ErrorCode.NegativeRate,
                                        f'{name}={values[name]} must be non-negative')

    return VParams(**values)


def planck_occupancy(x: float) -> float:
    """Mean occupation 1/(exp(x) - 1) for x = hbar*omega/kT > 0."""
    if x <= 0.0:
        raise InvalidParameterError(ErrorCode.NonpositiveFrequency,
                                    f'hbar*omega/kT={x} must be positive')
    return math.exp(-x) / -math.expm1(-x)


def nbar_from_temperature(omega: float, temperature: float) -> float:
    """Planck occupancy of a mode of angular frequency omega (rad/s) at temperature (K)."""
    if not omega > 0.0:
        raise InvalidParameterError(ErrorCode.NonpositiveFrequency,
                                    f'omega={omega} must be positive')
    if temperature < 0.0:
        raise InvalidParameterError(ErrorCode.NegativeRate,
                                    f'temperature={temperature} must be non-negative')
    if temperature == 0.0:
        return 0.0

    return planck_occupancy(constants.hbar * omega / (constants.k * temperature))
