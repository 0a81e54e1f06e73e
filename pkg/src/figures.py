"""Tables behind the standard figure panels, one file per panel.

Panel parameters are fixed here so that regression tests pin exactly the
plotted cases. Times are in units of 1/gamma with gamma = 1.
"""
import logging
import os
from typing import Callable, Final, Optional

from core import VParams
from dynamics import propagate
from enums import ErrorCode, OutputFormat
from exceptions import InvalidParameterError
from generator import build_symmetric
from observables import fluorescence_ratio
from report import Table, format_table, grid_table, series_table, write_text
from steadystate import closed_form, optimal_dephasing
from sweep import Axis, run_sweep

NBAR_AXIS: Final[Axis] = Axis.log('nbar', 1e-3, 1e3, 61)
DELTA_AXIS: Final[Axis] = Axis.log('delta', 1e-2, 1e2, 61)
GAMMA_D_AXIS: Final[Axis] = Axis.linear('gamma_d', 0.0, 20.0, 81)

TRANSIENT_POINTS: Final[int] = 2001
TRACE_POINTS: Final[int] = 401

# (nbar, delta) pairs
TRANSIENT_PANELS: Final[dict[str, tuple[float, float]]] = {
    'transient-overdamped': (1e-3, 0.1),
    'transient-underdamped': (1e-3, 10.0),
    'transient-strong': (1e3, 100.0),
    'transient-strong-wide': (1e2, 200.0),
}
CRATIO_CURVES: Final[list[tuple[float, float]]] = [(0.01, 10.0), (100.0, 200.0), (0.01, 0.5), (100.0, 0.5)]
FLUORESCENCE_TRACES: Final[list[tuple[float, float]]] = [(1e-2, 0.1), (1e-2, 10.0), (1e3, 10.0), (10.0, 100.0)]

Panel = Callable[[Optional[int]], Table]


def _transient(nbar: float, delta: float) -> Panel:
    def panel(threads: Optional[int]) -> Table:
        params = VParams.symmetric(nbar=nbar, delta=delta)
        series = propagate(build_symmetric(params), n_points=TRANSIENT_POINTS)
        ss = closed_form(params)
        steady_columns = {'rho_aa_ss': ss.rho_aa, 're_ab_ss': ss.re_ab, 'im_ab_ss': ss.im_ab}
        return series_table(series, extra_columns=steady_columns)
    return panel


def _grid(base: VParams, axes: list[Axis], observables: list[str]) -> Panel:
    def panel(threads: Optional[int]) -> Table:
        return grid_table(run_sweep(base, axes, observables, threads=threads))
    return panel


def cratio_axis(nbar: float, delta: float) -> Axis:
    """Dephasing axis wide enough to show the optimum, at least [0, 20]."""
    optimum = optimal_dephasing(VParams.symmetric(nbar=nbar, delta=delta)) or 0.0
    return Axis.linear('gamma_d', 0.0, max(20.0, 2.0 * optimum), 81)


def _cratio_curves(threads: Optional[int]) -> Table:
    observables = ['c_ratio', 're_ab', 'optimal_gamma_d']
    table = Table(headers=['nbar', 'delta', 'gamma_d'] + observables, rows=[],
                  metadata={'gamma_a': 1.0, 'gamma_b': 1.0, 'gamma_rel': 0.0})
    for nbar, delta in CRATIO_CURVES:
        axes = [Axis.of('nbar', [nbar]), Axis.of('delta', [delta]), cratio_axis(nbar, delta)]
        table.extend(grid_table(run_sweep(VParams.symmetric(nbar, delta), axes, observables, threads=threads)))
    return table


def _fluorescence_traces(threads: Optional[int]) -> Table:
    table = Table(headers=['nbar', 'delta', 't', 'polarized', 'reference', 'ratio'], rows=[],
                  metadata={'gamma_a': 1.0, 'gamma_b': 1.0, 'isotropic_rate_factor': 1.0})
    for nbar, delta in FLUORESCENCE_TRACES:
        trace = fluorescence_ratio(VParams.symmetric(nbar=nbar, delta=delta), n_points=TRACE_POINTS)
        for row in zip(trace.times, trace.polarized, trace.reference, trace.ratio):
            table.rows.append([nbar, delta] + [float(v) for v in row])
    return table


figure_map: dict[str, Panel] = {
    **{name: _transient(*point) for name, point in TRANSIENT_PANELS.items()},
    'coherence-vs-nbar': _grid(VParams.symmetric(0.0, 0.0),
                               [Axis.of('delta', [0.01, 0.1, 1.0, 10.0, 100.0]), NBAR_AXIS],
                               ['re_ab', 'rho_aa']),
    'coherence-vs-splitting': _grid(VParams.symmetric(0.0, 0.0),
                                    [Axis.of('nbar', [0.01, 1.0, 100.0]), DELTA_AXIS],
                                    ['re_ab', 'rho_aa']),
    'coherence-map': _grid(VParams.symmetric(0.0, 0.0), [NBAR_AXIS, DELTA_AXIS],
                           ['re_ab', 'rho_aa', 'c_ratio']),
    'dephasing-map-weak': _grid(VParams.symmetric(0.01, 0.0), [DELTA_AXIS, GAMMA_D_AXIS], ['re_ab']),
    'dephasing-map-strong': _grid(VParams.symmetric(100.0, 0.0), [DELTA_AXIS, GAMMA_D_AXIS], ['re_ab']),
    'dephasing-vs-nbar': _grid(VParams.symmetric(0.0, 10.0), [GAMMA_D_AXIS, NBAR_AXIS], ['re_ab']),
    'cratio-vs-dephasing': _cratio_curves,
    'fluorescence-ratio': _fluorescence_traces,
}

# Short figure numbers, one per panel
figure_aliases: dict[str, str] = {
    'fig2a': 'transient-overdamped',
    'fig2b': 'transient-underdamped',
    'fig2c': 'transient-strong',
    'fig2d': 'transient-strong-wide',
    'fig3a': 'coherence-vs-nbar',
    'fig3b': 'coherence-vs-splitting',
    'fig3c': 'coherence-map',
    'fig4a': 'dephasing-map-weak',
    'fig4b': 'dephasing-map-strong',
    'fig4c': 'dephasing-vs-nbar',
    'fig5': 'cratio-vs-dephasing',
    'fig6': 'fluorescence-ratio',
}


def get_panel_id(figure_id: str) -> str:
    """Panel name for a panel name or a short figure number."""
    panel_id = figure_aliases.get(figure_id, figure_id)
    if panel_id not in figure_map:
        raise InvalidParameterError(
            ErrorCode.UnknownFigure,
            f'{figure_id!r} is not a figure panel ({", ".join(list(figure_map) + list(figure_aliases))})')
    return panel_id


def figure_table(figure_id: str, threads: Optional[int] = None) -> Table:
    panel_id = get_panel_id(figure_id)
    logging.info(f'Building figure panel {panel_id}')
    table = figure_map[panel_id](threads)
    table.metadata = {'panel': panel_id, **table.metadata}
    return table


def figure_driver(figure_id: str, out_dir: str, threads: Optional[int] = None,
                  fmt: OutputFormat = OutputFormat.Csv) -> list[str]:
    """Write the panel table(s) for figure_id, or every panel for 'all'; returns the paths."""
    ids = list(figure_map) if figure_id == 'all' else [get_panel_id(figure_id)]
    paths: list[str] = []
    for panel_id in ids:
        table = figure_table(panel_id, threads=threads)
        path = os.path.join(out_dir, f'{panel_id}.{fmt.value}')
        write_text(path, format_table(table, fmt))
        paths.append(path)
    return paths
