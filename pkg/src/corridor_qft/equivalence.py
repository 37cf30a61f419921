"""Finite-epsilon source term versus the Gaussian measurement corridor.

Adding ``f(J) = i J^2 / 2 eps`` to the complex-mass Lagrangian completes the
square, and with ``J = -i eps phi_cl`` the source-coupled partition function
becomes the corridor-weighted one with width parameter ``alpha = eps``.

Both sides are evaluated here by unrelated routes:

* ``log Z'`` factorises the complex kernel (LU solve, complex eigenvalues
  for the determinant);
* ``log Z_M`` assembles the corridor exponent directly and integrates it
  mode by mode in the eigenbasis of the real operator ``K + m^2``.

Sign convention: ``J`` and ``f(J)`` enter the exponent as
``+i dv J.phi - i dv sum f(J)``.  This is the only placement for which the
pointwise exponent identity holds with the printed ``f`` and ``J``; see
:func:`exponent_source_side` / :func:`exponent_corridor_side`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import gaussian
from .gaussian import GaussianEvaluation, SourceShift, log_partition, source_coefficient
from .lattice import (
    ClassicalField,
    LatticeSpec,
    ModelParams,
    SourceField,
    build_kernel,
    build_laplacian,
)

__all__ = [
    "CorridorParams",
    "MenskyWeight",
    "EquivalenceReport",
    "shift_term",
    "shifted_log_partition",
    "complete_square",
    "source_from_classical",
    "mensky_log_partition",
    "equivalence_check",
    "exponent_source_side",
    "exponent_corridor_side",
    "REALITY_TOL",
    "EQUIVALENCE_RTOL",
]

REALITY_TOL = 1e-12
EQUIVALENCE_RTOL = 1e-10


@dataclass(frozen=True)
class CorridorParams:
    alpha: float

    def __post_init__(self):
        if not (np.isfinite(self.alpha) and self.alpha > 0):
            raise ValueError(f"alpha must be > 0, got {self.alpha}")


@dataclass(frozen=True)
class MenskyWeight:
    params: CorridorParams
    center: ClassicalField

    @property
    def alpha(self) -> float:
        return self.params.alpha


@dataclass(frozen=True)
class EquivalenceReport:
    lhs: complex
    rhs: complex
    abs_gap: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.abs_gap <= self.tolerance


def shift_coefficient(dv: float) -> complex:
    """Factor multiplying ``sum_x f(J(x))`` in the exponent.

    Tied to :func:`gaussian.source_coefficient`: the shift lives in the same
    Lagrangian as ``-J phi``, so it carries the opposite sign.
    """
    return -source_coefficient(dv)


def shift_term(lattice: LatticeSpec, J, shift: SourceShift) -> complex:
    values = J.values if isinstance(J, SourceField) else np.asarray(J, dtype=complex)
    if values.shape != (lattice.n_sites,):
        raise ValueError(f"source has shape {values.shape}, lattice needs ({lattice.n_sites},)")
    return complex(shift_coefficient(lattice.volume_element) * np.sum(shift(values)))


def shifted_log_partition(ev: GaussianEvaluation, J, shift: SourceShift) -> complex:
    """``log Z'(J)`` for the Lagrangian with ``f(J)`` added sitewise."""
    return log_partition(ev, J) + shift_term(ev.kernel.lattice, J, shift)


def complete_square(params: ModelParams, J: SourceField) -> MenskyWeight:
    """Corridor equivalent to source ``J``: ``alpha = eps``, ``phi_cl = i J / eps``."""
    phi = 1j * J.values / params.epsilon
    if np.max(np.abs(phi.imag), initial=0.0) > REALITY_TOL:
        raise ValueError("source must be purely imaginary for a real corridor centre")
    center = ClassicalField(J.lattice, phi.real)
    return MenskyWeight(CorridorParams(params.epsilon), center)


def source_from_classical(params: ModelParams, center: ClassicalField) -> SourceField:
    return SourceField(center.lattice, -1j * params.epsilon * center.values)


def mensky_log_partition(lattice: LatticeSpec, mass: float, weight: MenskyWeight) -> complex:
    """log of  int dphi exp(i dv/2 phi^T (K+m^2) phi - alpha dv/2 |phi - phi_cl|^2).

    Diagonalises the real symmetric ``K + m^2`` and integrates each mode as a
    one-dimensional complex Gaussian.  Same dropped measure constant as
    :func:`gaussian.log_partition`.
    """
    if weight.center.lattice != lattice:
        raise ValueError("corridor centre lives on a different lattice")
    alpha = weight.alpha
    if not alpha > 0:
        raise ValueError("alpha must be > 0")
    dv = lattice.volume_element
    H = build_laplacian(lattice) + mass**2 * np.eye(lattice.n_sites)
    lam, U = np.linalg.eigh(H)
    # exponent -1/2 sum_j a_j y_j^2 + c_j y_j + const in mode coordinates y = U^T phi
    a = dv * (alpha - 1j * lam)
    phi_cl = weight.center.values
    c = alpha * dv * (U.T @ phi_cl)
    const = -0.5 * alpha * dv * float(phi_cl @ phi_cl)
    return complex(np.sum(-0.5 * np.log(a) + 0.5 * c * c / a) + const)


def equivalence_check(lattice: LatticeSpec, params: ModelParams, center: ClassicalField,
                      rtol: float = EQUIVALENCE_RTOL) -> EquivalenceReport:
    ev = gaussian.evaluate(build_kernel(lattice, params))
    J = source_from_classical(params, center)
    lhs = shifted_log_partition(ev, J, SourceShift.completing_square(params.epsilon))
    weight = MenskyWeight(CorridorParams(params.epsilon), center)
    rhs = mensky_log_partition(lattice, params.mass, weight)
    gap = abs(lhs - rhs)
    return EquivalenceReport(lhs, rhs, gap, rtol * max(1.0, abs(lhs)))


def exponent_source_side(lattice: LatticeSpec, params: ModelParams, phi, J) -> complex:
    """Action exponent with complex mass, source ``J`` and the completing shift."""
    dv = lattice.volume_element
    phi = np.asarray(phi, dtype=float)
    J = np.asarray(J, dtype=complex)
    K = build_laplacian(lattice)
    kinetic = 0.5 * phi @ K @ phi + 0.5 * params.mass**2 * phi @ phi
    return complex(
        1j * dv * kinetic
        - 0.5 * params.epsilon * dv * phi @ phi
        + source_coefficient(dv) * J @ phi
        + shift_coefficient(dv) * np.sum(SourceShift.completing_square(params.epsilon)(J))
    )


def exponent_corridor_side(lattice: LatticeSpec, mass: float, alpha: float, phi, phi_cl) -> complex:
    """Free-action exponent times the Gaussian corridor weight."""
    dv = lattice.volume_element
    phi = np.asarray(phi, dtype=float)
    d = phi - np.asarray(phi_cl, dtype=float)
    K = build_laplacian(lattice)
    kinetic = 0.5 * phi @ K @ phi + 0.5 * mass**2 * phi @ phi
    return complex(1j * dv * kinetic - 0.5 * alpha * dv * d @ d)
