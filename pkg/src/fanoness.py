#! /usr/bin/env python3
# -*- coding: UTF-8 -*-
#
# fanoness: steady-state Fano coherences of a V-system driven by polarized
# incoherent light. Propagation, steady states, two-bath transport, parameter
# sweeps and figure tables.


import argparse
import dataclasses
import logging
import math
import os
import sys
from typing import Any, Final, Optional

import colorama
import numpy as np

import fanoutils
from config import RunConfiguration
from core import DensityState, VParams
from dynamics import eigen_analysis, propagate, propagate_exact
from enums import ErrorCode, ExitCode, OutputFormat
from exceptions import FanoException, IdentityViolationError, InvalidParameterError
from figures import figure_aliases, figure_driver, figure_map
from generator import build
from observables import relative_intensity_difference
from report import Table, grid_table, record_table, series_table, write_table
from steadystate import SteadyState, c_ratio, canonical_population, solve_linear, steady_state
from sweep import Axis, run_sweep
from transport import (TwoBathParams, build_transport_generator, from_vsystem, generator_deviation,
                       heat_flux, reduce_to_vsystem, validate_two_bath)

APP_NAME: Final[str] = 'fanoness'
APP_VERSION: Final[str] = '1.0'

# Tolerance of the invariant check applied before a record is emitted.
RECORD_TOL: Final[float] = 1e-8
EQUIVALENCE_TOL: Final[float] = 1e-14


def steady_record(params: VParams) -> dict[str, Any]:
    ss: SteadyState = steady_state(params)
    record: dict[str, Any] = {
        'rho_aa': ss.rho_aa,
        'rho_bb': ss.rho_bb,
        're_ab': ss.re_ab,
        'im_ab': ss.im_ab,
        'rho_gg': ss.rho_gg,
    }
    if params.is_symmetric:
        rho_c = canonical_population(params)
        record['c_ratio'] = c_ratio(params)
        record['canonical'] = rho_c
        if params.is_radiative_only:
            record['rel_intensity_diff'] = relative_intensity_difference(params)
        else:
            record['rel_intensity_diff'] = (rho_c - ss.rho_aa) / rho_c if rho_c > 0.0 else 0.0
    else:
        record['c_ratio'] = ss.re_ab / ss.rho_aa if ss.rho_aa > 0.0 else math.nan
        record['canonical'] = math.nan
        record['rel_intensity_diff'] = math.nan
    record['method'] = ss.method.value
    record['residual'] = ss.residual

    _check_state(ss.state, 'steady state')
    return record


def _check_state(state: DensityState, what: str) -> None:
    problems = state.violations(RECORD_TOL)
    if problems:
        raise IdentityViolationError(f'{what} is not a density matrix: {"; ".join(problems)}')


def _parse_initial(text: Optional[str]) -> Optional[DensityState]:
    if text is None:
        return None
    try:
        values = [float(v) for v in text.split(',')]
    except ValueError:
        raise InvalidParameterError(ErrorCode.InvalidInitial, f'cannot read initial state {text!r}')
    return DensityState.from_vector(np.array(values)).check()


def cmd_steady(args: argparse.Namespace) -> Table:
    params = RunConfiguration().params()
    logging.info(f'Steady state for {params}')
    return record_table(steady_record(params), metadata=params.as_dict())


def cmd_evolve(args: argparse.Namespace) -> Table:
    config = RunConfiguration()
    params = config.params()
    gen = build(params)
    initial = _parse_initial(args.initial)

    if args.exact:
        series = propagate_exact(gen, initial=initial, t_end=config.t_end, n_points=config.n_points)
    else:
        series = propagate(gen, initial=initial, t_end=config.t_end, n_points=config.n_points,
                           rel_tol=config.rel_tol, abs_tol=config.abs_tol, method=args.method)

    for t, state in zip(series.times, series.states):
        _check_state(state, f'state at t={t}')

    spectrum = eigen_analysis(gen)
    return series_table(series, metadata={'regime': spectrum.regime.value,
                                          'slowest_timescale': spectrum.slowest_timescale})


def cmd_sweep(args: argparse.Namespace) -> Table:
    config = RunConfiguration()
    axes = [Axis.parse(text) for text in args.axis or []]
    observables = [name.strip() for text in (args.observables or ['re_ab']) for name in text.split(',')]

    grid = run_sweep(config.params(), axes, observables, threads=config.threads)
    if grid.failures and not args.quiet:
        print(colorama.Fore.YELLOW + f'{len(grid.failures)} grid point evaluation(s) failed, see the log'
              + colorama.Style.RESET_ALL, file=sys.stderr)
    return grid_table(grid)


def _two_bath_from_args(args: argparse.Namespace) -> TwoBathParams:
    params = RunConfiguration().params()
    if args.nbar_L is None:
        return from_vsystem(params)

    gamma_L = args.gamma_L or [0.5 * params.gamma_a, 0.5 * params.gamma_b]
    gamma_R = args.gamma_R or [params.gamma_a - gamma_L[0], params.gamma_b - gamma_L[1]]
    tp = TwoBathParams.from_splitting(params.delta, nbar_L=args.nbar_L, gamma_L=(gamma_L[0], gamma_L[1]),
                                      gamma_R=(gamma_R[0], gamma_R[1]), nbar_R=args.nbar_R,
                                      f_L=args.f_L, f_R=args.f_R)
    return validate_two_bath(dataclasses.replace(tp, f_spont=args.f_spont))


def cmd_transport(args: argparse.Namespace) -> Table:
    if args.check_equivalence:
        rng = np.random.default_rng(args.seed)
        deviation = 0.0
        for _ in range(args.draws):
            gamma = float(rng.uniform(0.5, 2.0))
            params = VParams.symmetric(nbar=float(10.0 ** rng.uniform(-3.0, 3.0)),
                                       delta=float(10.0 ** rng.uniform(-2.0, 2.0)), gamma=gamma)
            deviation = max(deviation, generator_deviation(params))
        logging.info(f'Transport equivalence over {args.draws} draws: {deviation}')
        if deviation > EQUIVALENCE_TOL:
            raise IdentityViolationError(f'transport generator deviates by {deviation!r}')
        return record_table({'draws': args.draws, 'seed': args.seed, 'max_deviation': deviation})

    tp = _two_bath_from_args(args)
    ss = solve_linear(build_transport_generator(tp))
    _check_state(ss.state, 'transport steady state')

    record: dict[str, Any] = {
        'flux': heat_flux(ss.state, tp.g),
        'rho_aa': ss.rho_aa,
        'rho_bb': ss.rho_bb,
        're_ab': ss.re_ab,
        'im_ab': ss.im_ab,
        'rho_gg': ss.rho_gg,
        'residual': ss.residual,
    }
    try:
        reduced = reduce_to_vsystem(tp)
        record['reduced_nbar'] = reduced.nbar
    except FanoException:
        record['reduced_nbar'] = math.nan
    return record_table(record, metadata=dataclasses.asdict(tp))


def cmd_figures(args: argparse.Namespace) -> Table:
    config = RunConfiguration()
    out_dir = config.output or os.path.join(os.getcwd(), 'figures')
    paths = figure_driver(args.figure, out_dir, threads=config.threads, fmt=config.format)
    return Table(headers=['path'], rows=[[p] for p in paths], metadata={'figure': args.figure})


def display_record(table: Table) -> None:
    for row in table.rows:
        for header, value in zip(table.headers, row):
            print(colorama.Fore.WHITE + f'{header:>20}: ' + colorama.Fore.YELLOW + str(value))
    print(colorama.Style.RESET_ALL, end='')


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--nbar', type=float, help='mean thermal photon number n̄')
    common.add_argument('--delta', type=float, help='excited-state splitting in units of gamma')
    common.add_argument('--gamma-a', dest='gamma_a', type=float, help='decay rate of level a (default 1)')
    common.add_argument('--gamma-b', dest='gamma_b', type=float, help='decay rate of level b (default gamma_a)')
    common.add_argument('--gamma-rel', dest='gamma_rel', type=float, help='population relaxation rate')
    common.add_argument('--gamma-d', dest='gamma_d', type=float, help='pure dephasing rate')
    common.add_argument('-C', dest='config', help='configuration file to use')
    common.add_argument('-o', dest='output', help='output file (figures: output directory)')
    common.add_argument('-f', '--format', dest='format', choices=[f.value for f in OutputFormat],
                        help='output format')
    common.add_argument('--threads', type=int, help=f'sweep worker threads (env {fanoutils.THREADS_ENV})')
    common.add_argument('-q', dest='quiet', action='store_true', default=False, help='No terminal output')
    common.add_argument('-v', dest='verbose', action='store_true', default=False, help='Verbose logging')

    arg_parser = argparse.ArgumentParser(
        prog=APP_NAME,
        description=f'fanoness v{APP_VERSION}: Fano coherences of an incoherently driven V-system.')
    commands = arg_parser.add_subparsers(dest='command', required=True)

    commands.add_parser('steady', parents=[common], help='steady state and derived quantities')

    evolve = commands.add_parser('evolve', parents=[common], help='time evolution from the ground state')
    evolve.add_argument('--t-end', dest='t_end', type=float, help='final time in 1/gamma (default 40 relaxation times)')
    evolve.add_argument('--n-points', dest='n_points', type=int, help='output samples')
    evolve.add_argument('--rel-tol', dest='rel_tol', type=float, help='integrator relative tolerance')
    evolve.add_argument('--abs-tol', dest='abs_tol', type=float, help='integrator absolute tolerance')
    evolve.add_argument('--method', default='auto',
                        help='scipy solve_ivp method; auto picks DOP853, or LSODA for stiff systems')
    evolve.add_argument('--initial', help='initial rho_aa,rho_bb,re_ab,im_ab')
    evolve.add_argument('--exact', action='store_true', default=False, help='matrix exponential instead of the integrator')

    sweep = commands.add_parser('sweep', parents=[common], help='observables over a parameter grid')
    sweep.add_argument('-a', '--axis', action='append', help='name:start:stop:count[:log] or name=v1,v2,...')
    sweep.add_argument('-O', '--observable', dest='observables', action='append',
                       help='observable name(s), comma separated')

    transport = commands.add_parser('transport', parents=[common], help='two-qubit heat transport')
    transport.add_argument('--nbar-L', dest='nbar_L', type=float, help='hot bath occupancy (default 2 n̄)')
    transport.add_argument('--nbar-R', dest='nbar_R', type=float, default=0.0, help='cold bath occupancy')
    transport.add_argument('--gamma-L', dest='gamma_L', type=float, nargs=2, help='hot bath gamma_aa gamma_bb')
    transport.add_argument('--gamma-R', dest='gamma_R', type=float, nargs=2, help='cold bath gamma_aa gamma_bb')
    transport.add_argument('--f-L', dest='f_L', type=float, default=1.0, help='hot bath interference weight')
    transport.add_argument('--f-R', dest='f_R', type=float, default=0.0, help='cold bath interference weight')
    transport.add_argument('--f-spont', dest='f_spont', type=float, default=0.0,
                           help='spontaneous emission interference weight')
    transport.add_argument('--check-equivalence', dest='check_equivalence', action='store_true', default=False,
                           help='compare reduced transport and V-system generators on random draws')
    transport.add_argument('--draws', type=int, default=20, help='random draws for --check-equivalence')
    transport.add_argument('--seed', type=int, default=0, help='random seed for --check-equivalence')

    figures = commands.add_parser('figures', parents=[common], help='write figure panel tables')
    figures.add_argument('figure', choices=['all'] + list(figure_map) + list(figure_aliases),
                         help='panel name or short figure number (fig2a ... fig6)')

    return arg_parser


def run(argv: Optional[list[str]] = None) -> int:
    """Parse argv, run the subcommand and return the process exit code."""
    args: argparse.Namespace = build_parser().parse_args(argv)

    handlers = {
        'steady': cmd_steady,
        'evolve': cmd_evolve,
        'sweep': cmd_sweep,
        'transport': cmd_transport,
        'figures': cmd_figures,
    }

    try:
        RunConfiguration.reset()
        config = RunConfiguration()
        if args.config:
            config.with_file(config_file=args.config)
        config.with_args(nbar=args.nbar, delta=args.delta, gamma_a=args.gamma_a, gamma_b=args.gamma_b,
                         gamma_rel=args.gamma_rel, gamma_d=args.gamma_d, output=args.output,
                         format=args.format, threads=args.threads, verbose=args.verbose or None,
                         t_end=getattr(args, 't_end', None), n_points=getattr(args, 'n_points', None),
                         rel_tol=getattr(args, 'rel_tol', None), abs_tol=getattr(args, 'abs_tol', None))
        if config.verbose:
            logging.getLogger().setLevel(logging.DEBUG)

        table: Table = handlers[args.command](args)

        if args.command == 'figures':
            if not args.quiet:
                for row in table.rows:
                    print(colorama.Fore.WHITE + f'Panel written to {row[0]}' + colorama.Style.RESET_ALL)
        elif config.output is not None:
            write_table(table, config.output, config.format)
            if not args.quiet:
                print(colorama.Fore.WHITE + f'Report written to {config.output}' + colorama.Style.RESET_ALL)
        elif not args.quiet:
            if len(table.rows) == 1 and config.format == OutputFormat.Csv:
                display_record(table)
            else:
                write_table(table, None, config.format)
    except FanoException as ex:
        if not args.quiet:
            print(colorama.Fore.RED + f'ERROR: {ex}' + colorama.Style.RESET_ALL, file=sys.stderr)
        return ex.exit_code.value

    return ExitCode.Success.value


def main(argv: Optional[list[str]] = None) -> int:

    logging.basicConfig(filename=os.path.join(fanoutils.get_root_dir(), f'{APP_NAME}.log'),
                        encoding='utf-8',
                        format='%(asctime)s:%(levelname)s:%(message)s',
                        datefmt="%Y-%m-%dT%H:%M:%S%z",
                        level=logging.INFO)

    logging.info('Starting')
    colorama.init()

    return run(argv)


if __name__ == "__main__":
    try:
        exit_code = main()
        logging.info('Exiting')
        sys.exit(exit_code)
    except KeyboardInterrupt:
        print('Cancelled by user.')
        logging.error("Cancelled by user.")
        logging.info('Exiting')
        try:
            sys.exit(0)
        except SystemExit:
            os._exit(0)
    except Exception as ex:
        print('ERROR: ' + str(ex))
        logging.exception(ex)
        logging.info('Exiting')
        try:
            sys.exit(ExitCode.Failure.value)
        except SystemExit:
            os._exit(ExitCode.Failure.value)
