"""Affine Liouville-space dynamics x' = A x + d of the driven V-system."""
import logging
import math
from dataclasses import dataclass, field
from typing import Final, Optional

import numpy as np

from core import VParams, validate
from enums import ErrorCode
from exceptions import InvalidParameterError

SYMMETRIC_LABELS: Final[tuple[str, ...]] = ('rho_aa', 're_ab', 'im_ab')
GENERAL_LABELS: Final[tuple[str, ...]] = ('rho_aa', 'rho_bb', 're_ab', 'im_ab')

# Threshold on |det A| / ||A||_2^dim, see DeterminantReport.
SINGULAR_TOL: Final[float] = 1e-7


@dataclass(frozen=True, eq=False)
class Generator:
    a_matrix: np.ndarray
    drive: np.ndarray
    basis_labels: tuple[str, ...]
    params: Optional[VParams] = field(default=None)

    def __post_init__(self) -> None:
        if self.a_matrix.shape != (self.dim, self.dim) or self.drive.shape != (self.dim,):
            raise ValueError(
                f'Inconsistent generator shapes {self.a_matrix.shape}, {self.drive.shape} for {self.basis_labels}')
        if not np.all(np.isfinite(self.a_matrix)):
            raise ValueError('Generator matrix has non-finite entries')
        self.a_matrix.setflags(write=False)
        self.drive.setflags(write=False)

    @property
    def dim(self) -> int:
        return len(self.basis_labels)

    def rhs(self, t: float, x: np.ndarray) -> np.ndarray:
        return self.a_matrix @ x + self.drive

    def jacobian(self, t: float, x: np.ndarray) -> np.ndarray:
        return self.a_matrix

    def residual(self, x: np.ndarray) -> float:
        return float(np.linalg.norm(self.a_matrix @ x + self.drive))

    def fixed_point(self) -> np.ndarray:
        return np.linalg.solve(self.a_matrix, -self.drive)


@dataclass(frozen=True)
class DeterminantReport:
    """det(A) and whether the steady state is considered uniquely defined.

    `normalized` is |det A| / ||A||_2^dim, so the flag does not depend on the
    overall rate scale. `closed_form` is only set for the symmetric system
    without relaxation and dephasing.
    """
    value: float
    normalized: float
    singular: bool
    closed_form: Optional[float] = None


def build_symmetric(params: VParams) -> Generator:
    params = validate(params)
    if not params.is_symmetric:
        raise InvalidParameterError(
            ErrorCode.AsymmetricInput,
            f'gamma_a={params.gamma_a} != gamma_b={params.gamma_b}; use build_general')

    gamma: float = params.gamma_a
    r: float = params.r_a
    delta: float = params.delta
    coherence_decay: float = r + gamma + params.gamma_d

    a_matrix = np.array([
        [-(3.0 * r + gamma + params.gamma_rel), -r, 0.0],
        [-3.0 * r, -coherence_decay, delta],
        [0.0, -delta, -coherence_decay],
    ])
    drive = np.array([r, r, 0.0])

    logging.debug(f'Built symmetric generator for {params}')
    return Generator(a_matrix=a_matrix, drive=drive, basis_labels=SYMMETRIC_LABELS, params=params)


def build_general(params: VParams) -> Generator:
    params = validate(params)

    r_a, r_b = params.r_a, params.r_b
    gamma_a, gamma_b = params.gamma_a, params.gamma_b
    relax: float = params.gamma_rel
    cross: float = math.sqrt(r_a * r_b)
    coherence_decay: float = 0.5 * (r_a + r_b + gamma_a + gamma_b) + params.gamma_d
    delta: float = params.delta

    # rho_gg = 1 - rho_aa - rho_bb eliminated
    a_matrix = np.array([
        [-(2.0 * r_a + gamma_a + relax), -r_a, -cross, 0.0],
        [-r_b, -(2.0 * r_b + gamma_b + relax), -cross, 0.0],
        [-1.5 * cross, -1.5 * cross, -coherence_decay, delta],
        [0.0, 0.0, -delta, -coherence_decay],
    ])
    drive = np.array([r_a, r_b, cross, 0.0])

    logging.debug(f'Built general generator for {params}')
    return Generator(a_matrix=a_matrix, drive=drive, basis_labels=GENERAL_LABELS, params=params)


def build(params: VParams) -> Generator:
    if validate(params).is_symmetric:
        return build_symmetric(params)
    return build_general(params)


def determinant_of(gen: Generator, singular_tol: float = SINGULAR_TOL) -> DeterminantReport:
    value = float(np.linalg.det(gen.a_matrix))
    return _report(gen, value, singular_tol)


def determinant(params: VParams, singular_tol: float = SINGULAR_TOL) -> DeterminantReport:
    gen: Generator = build(params)
    params = validate(params)
    if not (params.is_symmetric and params.is_radiative_only):
        return determinant_of(gen, singular_tol)

    gamma, r, delta = params.gamma_a, params.r_a, params.delta
    closed = 3.0 * r ** 2 * (r + gamma) - (3.0 * r + gamma) * (delta ** 2 + (r + gamma) ** 2)
    return _report(gen, closed, singular_tol, closed_form=closed)


def _report(gen: Generator, value: float, singular_tol: float,
            closed_form: Optional[float] = None) -> DeterminantReport:
    scale = float(np.linalg.norm(gen.a_matrix, 2)) ** gen.dim
    normalized = abs(value) / scale if scale > 0.0 else 0.0
    return DeterminantReport(value=value, normalized=normalized,
                             singular=normalized < singular_tol, closed_form=closed_form)
