"""Steady-state observables over a product grid of V-system parameters."""
import dataclasses
import itertools
import logging
from dataclasses import dataclass, field
from typing import Iterator, Optional

import numpy as np

import mappings
from core import VParams, validate
from dispatcher import Dispatcher, PointFailure
from enums import ErrorCode, Spacing
from exceptions import InvalidParameterError
from fanoutils import get_thread_count
from job import Job, JobQueue


@dataclass(frozen=True)
class Axis:
    name: str
    start: float
    stop: float
    count: int
    spacing: Spacing = Spacing.Linear
    # Explicit point list; start/stop/count then only describe it.
    explicit: Optional[tuple[float, ...]] = None

    def __post_init__(self) -> None:
        if mappings.get_axis_field(self.name) is None:
            raise InvalidParameterError(
                ErrorCode.UnknownAxis,
                f'{self.name!r} is not a sweepable parameter ({", ".join(mappings.axis_to_field_map)})')
        if self.explicit is not None:
            return
        if self.count < 1 or (self.count == 1 and self.start != self.stop):
            raise InvalidParameterError(ErrorCode.InvalidInitial,
                                        f'axis {self.name} needs at least 2 points, got {self.count}')
        if self.spacing == Spacing.Log and not (self.start > 0.0 and self.stop > 0.0):
            raise InvalidParameterError(ErrorCode.NegativeRate,
                                        f'log axis {self.name} needs positive bounds, got [{self.start}, {self.stop}]')

    @classmethod
    def linear(cls, name: str, start: float, stop: float, count: int) -> 'Axis':
        return cls(name=name, start=start, stop=stop, count=count, spacing=Spacing.Linear)

    @classmethod
    def log(cls, name: str, start: float, stop: float, count: int) -> 'Axis':
        return cls(name=name, start=start, stop=stop, count=count, spacing=Spacing.Log)

    @classmethod
    def of(cls, name: str, values: list[float]) -> 'Axis':
        if len(values) == 0:
            raise InvalidParameterError(ErrorCode.InvalidInitial, f'axis {name} has no values')
        return cls(name=name, start=min(values), stop=max(values), count=len(values),
                   explicit=tuple(float(v) for v in values))

    @classmethod
    def parse(cls, text: str) -> 'Axis':
        """Read `name:start:stop:count[:linear|log]` or `name=v1,v2,...`."""
        try:
            if '=' in text:
                name, values = text.split('=', 1)
                return cls.of(name.strip(), [float(v) for v in values.split(',')])
            parts = text.split(':')
            if len(parts) not in (4, 5):
                raise ValueError(text)
            spacing = Spacing(parts[4].strip().lower()) if len(parts) == 5 else Spacing.Linear
            return cls(name=parts[0].strip(), start=float(parts[1]), stop=float(parts[2]),
                       count=int(parts[3]), spacing=spacing)
        except ValueError:
            raise InvalidParameterError(ErrorCode.InvalidInitial,
                                        f'cannot read axis {text!r}; use name:start:stop:count[:log] or name=v1,v2')

    @property
    def values(self) -> np.ndarray:
        if self.explicit is not None:
            return np.array(self.explicit)
        if self.count == 1:
            return np.array([float(self.start)])
        if self.spacing == Spacing.Log:
            return np.geomspace(self.start, self.stop, self.count)
        return np.linspace(self.start, self.stop, self.count)

    def __len__(self) -> int:
        return self.count


@dataclass(frozen=True, eq=False)
class SweepGrid:
    """Observable table, one row per grid point in axis order (last axis fastest)."""
    base: VParams
    axes: list[Axis]
    observables: list[str]
    points: np.ndarray
    values: np.ndarray
    failures: list[PointFailure] = field(default_factory=list)

    @property
    def headers(self) -> list[str]:
        return [axis.name for axis in self.axes] + list(self.observables)

    def rows(self) -> Iterator[list[float]]:
        for point, row in zip(self.points, self.values):
            yield [float(v) for v in point] + [float(v) for v in row]

    def column(self, name: str) -> np.ndarray:
        if name in self.observables:
            return self.values[:, self.observables.index(name)]
        axis_names = [axis.name for axis in self.axes]
        if name in axis_names:
            return self.points[:, axis_names.index(name)]
        raise KeyError(name)

    def reshaped(self, name: str) -> np.ndarray:
        """Observable column as an array of shape (len(axis_0), len(axis_1), ...)."""
        return self.column(name).reshape([len(axis) for axis in self.axes])


def _check_observables(observables: list[str]) -> None:
    if not observables:
        raise InvalidParameterError(ErrorCode.UnknownObservable, 'no observables requested')
    for name in observables:
        if mappings.get_observable(name) is None:
            raise InvalidParameterError(
                ErrorCode.UnknownObservable,
                f'{name!r} is not a registered observable ({", ".join(mappings.observable_map)})')


def grid_params(base: VParams, axes: list[Axis]) -> tuple[np.ndarray, list[VParams]]:
    fields = [mappings.axis_to_field_map[axis.name] for axis in axes]
    combos = list(itertools.product(*(axis.values for axis in axes)))
    points = np.array(combos, dtype=float).reshape(len(combos), len(axes))

    params: list[VParams] = []
    for point in points:
        overrides = {f: float(v) for f, v in zip(fields, point)}
        params.append(dataclasses.replace(base, **overrides))
    return points, params


def run_sweep(base: VParams,
              axes: list[Axis],
              observables: list[str],
              threads: Optional[int] = None) -> SweepGrid:
    """Evaluate the observables at every point of the axis product.

    Points whose steady state or observable cannot be evaluated hold NaN and
    are listed in SweepGrid.failures.
    """
    base = validate(base)
    _check_observables(observables)
    names = [axis.name for axis in axes]
    if len(set(names)) != len(names):
        raise InvalidParameterError(ErrorCode.UnknownAxis, f'axis repeated in {names}')

    points, params = grid_params(base, axes)
    thread_count = get_thread_count(threads)
    logging.info(f'Sweeping {len(params)} points over {names} for {observables} on {thread_count} thread(s)')

    job_queue = JobQueue()
    for index, p in enumerate(params):
        job_queue.enqueue(Job(index=index, params=p))
    job_queue.mark_input_complete()

    dispatcher = Dispatcher(job_queue, list(observables))
    dispatcher.start(thread_count)
    dispatcher.wait()

    values = np.array([dispatcher.results[i] for i in range(len(params))], dtype=float)
    values = values.reshape(len(params), len(observables))
    if dispatcher.failures:
        logging.warning(f'{len(dispatcher.failures)} grid point evaluation(s) failed')
    logging.info(f'Sweep finished: {job_queue.processed} points')

    return SweepGrid(base=base, axes=list(axes), observables=list(observables),
                     points=points, values=values, failures=dispatcher.failures)
