"""Non-equilibrium steady states of the polarized-driven V-system.

Two independent routes are kept: the linear solve x_s = -A^-1 d for any
generator, and the closed forms for the symmetric system with relaxation
(gamma_rel) and dephasing (gamma_d). Tests cross-check one against the other.
"""
import logging
from dataclasses import dataclass
from typing import Final, NamedTuple, Optional

import numpy as np

from core import DensityState, VParams, validate
from enums import ErrorCode, SteadyStateMethod
from exceptions import InvalidParameterError, SingularGeneratorError
from generator import Generator, build_general, build_symmetric, determinant, determinant_of

IDENTITY_TOL: Final[float] = 1e-12

_LOCKED_STATE_HINT: Final[str] = (
    'the steady state is not unique: for vanishing splitting and strong pumping the '
    'system settles into population-locked states that depend on the initial condition')


@dataclass(frozen=True)
class SteadyState:
    rho_aa: float
    rho_bb: float
    re_ab: float
    im_ab: float
    rho_gg: float
    residual: float
    method: SteadyStateMethod

    @property
    def state(self) -> DensityState:
        return DensityState(rho_gg=self.rho_gg, rho_aa=self.rho_aa, rho_bb=self.rho_bb,
                            re_ab=self.re_ab, im_ab=self.im_ab)

    def vector(self, dim: int = 3) -> np.ndarray:
        return self.state.to_vector(dim)


class CoherenceDerivatives(NamedTuple):
    d_nbar: float
    d_delta: float


def _require_symmetric(params: VParams) -> VParams:
    params = validate(params)
    if not params.is_symmetric:
        raise InvalidParameterError(ErrorCode.AsymmetricInput,
                                    f'closed forms need gamma_a == gamma_b, got {params.gamma_a}, {params.gamma_b}')
    return params


def _require_radiative(params: VParams, what: str) -> VParams:
    params = _require_symmetric(params)
    if not params.is_radiative_only:
        raise InvalidParameterError(ErrorCode.ConfigMismatch,
                                    f'{what} holds only for gamma_rel = gamma_d = 0')
    return params


def solve_linear(gen: Generator) -> SteadyState:
    report = determinant_of(gen)
    if report.singular:
        raise SingularGeneratorError(
            f'normalized det(A)={report.normalized:.3e}: {_LOCKED_STATE_HINT}')

    x_s = np.linalg.solve(gen.a_matrix, -gen.drive)
    state = DensityState.from_vector(x_s)
    residual = gen.residual(x_s)
    logging.debug(f'Linear-solve steady state {x_s} with residual {residual:.3e}')

    return SteadyState(rho_aa=state.rho_aa, rho_bb=state.rho_bb, re_ab=state.re_ab,
                       im_ab=state.im_ab, rho_gg=state.rho_gg, residual=residual,
                       method=SteadyStateMethod.LinearSolve)


def closed_form(params: VParams) -> SteadyState:
    params = _require_symmetric(params)
    report = determinant(params)
    if report.singular:
        raise SingularGeneratorError(
            f'normalized det(A)={report.normalized:.3e}: {_LOCKED_STATE_HINT}')

    gamma, r, delta = params.gamma_a, params.r_a, params.delta
    relax, dephase = params.gamma_rel, params.gamma_d
    decay = r + gamma + dephase

    denominator = (3.0 * r + gamma + relax) * (delta ** 2 + decay ** 2) - 3.0 * r ** 2 * decay
    rho_aa = r * (delta ** 2 + (gamma + dephase) * decay) / denominator
    re_ab = r * (gamma + relax) * decay / denominator
    im_ab = -delta / decay * re_ab

    x_s = np.array([rho_aa, re_ab, im_ab])
    residual = build_symmetric(params).residual(x_s)

    return SteadyState(rho_aa=rho_aa, rho_bb=rho_aa, re_ab=re_ab, im_ab=im_ab,
                       rho_gg=1.0 - 2.0 * rho_aa, residual=residual,
                       method=SteadyStateMethod.ClosedForm)


def steady_state(params: VParams) -> SteadyState:
    params = validate(params)
    if params.is_symmetric:
        return closed_form(params)
    return solve_linear(build_general(params))


def canonical_population(params: VParams) -> float:
    """Excited population r/(3r + gamma) of coherence-free thermal equilibrium."""
    params = _require_symmetric(params)
    r = params.r_a
    return r / (3.0 * r + params.gamma_a)


def population_coherence_identity(params: VParams) -> float:
    """|re_ab - (rho_c - rho_aa)/rho_c|, zero up to rounding."""
    params = _require_radiative(params, 'the population-coherence identity')
    if params.nbar == 0.0:
        return 0.0

    ss = closed_form(params)
    rho_c = canonical_population(params)
    return abs(ss.re_ab - (rho_c - ss.rho_aa) / rho_c)


def c_ratio(params: VParams) -> float:
    """Coherence-to-population ratio re_ab / rho_aa of the steady state.

    Written as (gamma + Gamma) s / (delta^2 + (gamma + gamma_d) s) with
    s = r + gamma + gamma_d, which stays defined in the n̄ -> 0 limit.
    """
    params = _require_symmetric(params)
    gamma, delta = params.gamma_a, params.delta
    decay = params.r_a + gamma + params.gamma_d
    return (gamma + params.gamma_rel) * decay / (delta ** 2 + (gamma + params.gamma_d) * decay)


def c_ratio_max(params: VParams) -> Optional[float]:
    """Ratio reached at the optimal dephasing rate, None when no optimum exists."""
    params = _require_symmetric(params)
    optimum = optimal_dephasing(params)
    if optimum is None:
        return None
    gamma = params.gamma_a
    return 1.0 / (1.0 + optimum / gamma + (params.r_a + gamma + optimum) / gamma)


def derivatives(params: VParams) -> CoherenceDerivatives:
    """Partial derivatives of re_ab with respect to n̄ and delta/gamma."""
    params = _require_radiative(params, 'the coherence derivative formulas')
    n = params.nbar
    x = params.delta / params.gamma_a

    denominator = ((3.0 * n + 1.0) * x ** 2 + (4.0 * n ** 2 + 5.0 * n + 1.0)) ** 2
    d_nbar = ((3.0 * n ** 2 + 2.0 * n + 1.0) * x ** 2 + (n ** 2 + 2.0 * n + 1.0)) / denominator
    d_delta = -2.0 * n * (n + 1.0) * (3.0 * n + 1.0) * x / denominator
    return CoherenceDerivatives(d_nbar=d_nbar, d_delta=d_delta)


def dephasing_roots(params: VParams) -> tuple[float, float]:
    """Both stationary points (+delta - r - gamma, -delta - r - gamma) of re_ab in gamma_d."""
    params = _require_symmetric(params)
    base = params.r_a + params.gamma_a
    return params.delta - base, -params.delta - base


def optimal_dephasing(params: VParams) -> Optional[float]:
    """Dephasing rate delta - r - gamma maximizing re_ab; None unless strictly positive."""
    root, _ = dephasing_roots(params)
    if root > 0.0:
        return root
    return None


def coherence_dimensionless(nbar: float, delta_tilde: float, gamma_d_tilde: float) -> float:
    """re_ab as a function of n̄, delta/gamma and gamma_d/gamma alone (gamma_rel = 0)."""
    decay = nbar + 1.0 + gamma_d_tilde
    return nbar * decay / ((3.0 * nbar + 1.0) * (delta_tilde ** 2 + decay ** 2) - 3.0 * nbar ** 2 * decay)
