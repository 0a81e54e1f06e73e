import math
from typing import Callable, Optional

from core import VParams
from generator import determinant
from observables import relative_intensity_difference
from steadystate import SteadyState, c_ratio, canonical_population, optimal_dephasing
from transport import heat_flux

Observable = Callable[[VParams, SteadyState], float]

# Sweepable VParams fields, keyed by axis name.
axis_to_field_map: dict[str, str] = {
    'nbar': 'nbar',
    'delta': 'delta',
    'gamma_d': 'gamma_d',
    'gamma_rel': 'gamma_rel',
}


def _optimal_gamma_d(params: VParams, _: SteadyState) -> float:
    optimum: Optional[float] = optimal_dephasing(params)
    return math.nan if optimum is None else optimum


# Every observable is evaluated from the parameters and the steady state of one
# grid point; the steady state is solved once per point by the dispatcher.
observable_map: dict[str, Observable] = {
    'rho_aa': lambda params, ss: ss.rho_aa,
    'rho_bb': lambda params, ss: ss.rho_bb,
    'rho_gg': lambda params, ss: ss.rho_gg,
    're_ab': lambda params, ss: ss.re_ab,
    'im_ab': lambda params, ss: ss.im_ab,
    'c_ratio': lambda params, ss: c_ratio(params),
    'canonical': lambda params, ss: canonical_population(params),
    'rel_intensity_diff': lambda params, ss: relative_intensity_difference(params),
    # qubit coupling g = delta / 2
    'flux': lambda params, ss: heat_flux(ss.state, 0.5 * params.delta),
    'optimal_gamma_d': _optimal_gamma_d,
    'det_normalized': lambda params, ss: determinant(params).normalized,
}


def get_axis_field(name: str) -> Optional[str]:
    return axis_to_field_map.get(name)


def get_observable(name: str) -> Optional[Observable]:
    return observable_map.get(name)
