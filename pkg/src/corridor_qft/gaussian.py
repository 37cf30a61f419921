"""Exact evaluation of the complex Gaussian integral over lattice fields.

For the exponent ``-1/2 phi^T A phi + b^T phi`` the integral is

    log Z = -1/2 log det A + 1/2 b^T A^{-1} b  (+ dropped measure constant)

The measure constant ``(N/2) log 2 pi`` is dropped everywhere; only
differences and derivatives of ``log Z`` are ever reported.

Derivatives are taken with respect to the sitewise value ``J(x)``, so the
two-point function picks up ``(i dv)^2 = -dv^2`` from the source coupling.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

import numpy as np
import scipy.linalg

from .lattice import ComplexKernel, SourceField

__all__ = [
    "GaussianEvaluation",
    "PropagatorValue",
    "SourceShift",
    "evaluate",
    "source_coefficient",
    "linear_coefficient",
    "log_partition",
    "two_point",
    "two_point_matrix",
    "fd_derivative",
    "central_difference",
    "wick_n_point",
    "all_pairings",
    "log_det_principal",
]

MAX_WICK_POINTS = 8


def source_coefficient(dv: float) -> complex:
    """Factor multiplying ``J^T phi`` in the exponent.

    The single place the source-sign convention lives: the exponent carries
    ``+i dv J^T phi``, the sign under which ``J = -i eps phi_cl`` centres the
    corridor on ``+phi_cl``.
    """
    return 1j * dv


def linear_coefficient(kernel: ComplexKernel, J) -> np.ndarray:
    values = J.values if isinstance(J, SourceField) else np.asarray(J, dtype=complex)
    if isinstance(J, SourceField) and J.lattice != kernel.lattice:
        raise ValueError("source lives on a different lattice than the kernel")
    if values.shape != (kernel.n_sites,):
        raise ValueError(f"source has shape {values.shape}, kernel needs ({kernel.n_sites},)")
    return source_coefficient(kernel.volume_element) * values


def log_det_principal(A: np.ndarray) -> complex:
    """``log det A`` as the sum of principal logs of the eigenvalues.

    Valid branch for matrices whose eigenvalues all have positive real part,
    i.e. the analytic continuation of the real positive-definite case.
    """
    lam = np.linalg.eigvals(A)
    if np.any(lam.real <= 0):
        raise ValueError("kernel has an eigenvalue with non-positive real part")
    return complex(np.sum(np.log(lam)))


@dataclass(frozen=True)
class GaussianEvaluation:
    kernel: ComplexKernel
    log_z0: complex
    _lu: tuple = field(repr=False)

    def solve(self, rhs) -> np.ndarray:
        return scipy.linalg.lu_solve(self._lu, np.asarray(rhs, dtype=complex))

    @property
    def inverse(self) -> np.ndarray:
        return self.solve(np.eye(self.kernel.n_sites))


@dataclass(frozen=True)
class PropagatorValue:
    x1: int
    x2: int
    value: complex


@dataclass(frozen=True)
class SourceShift:
    """Sitewise shift ``f(J) = c J^2`` added to the Lagrangian."""

    coefficient: complex

    def __post_init__(self):
        if not np.isfinite(self.coefficient):
            raise ValueError("shift coefficient must be finite")
        object.__setattr__(self, "coefficient", complex(self.coefficient))

    def __call__(self, J):
        return self.coefficient * np.asarray(J) ** 2

    def second_derivative(self) -> complex:
        return 2 * self.coefficient

    @classmethod
    def completing_square(cls, epsilon: float) -> "SourceShift":
        """``f(J) = i J^2 / (2 eps)``, the shift that completes the square."""
        return cls(1j / (2 * epsilon))


def evaluate(kernel: ComplexKernel) -> GaussianEvaluation:
    A = kernel.matrix
    lu = scipy.linalg.lu_factor(A)
    log_z0 = -0.5 * log_det_principal(A)
    return GaussianEvaluation(kernel, log_z0, lu)


def log_partition(ev: GaussianEvaluation, J) -> complex:
    b = linear_coefficient(ev.kernel, J)
    return ev.log_z0 + 0.5 * complex(b @ ev.solve(b))


def two_point_matrix(ev: GaussianEvaluation) -> np.ndarray:
    c = source_coefficient(ev.kernel.volume_element)
    return c * c * ev.inverse


def two_point(ev: GaussianEvaluation, x1: int, x2: int) -> PropagatorValue:
    lat = ev.kernel.lattice
    x1, x2 = lat.check_site(x1), lat.check_site(x2)
    e = np.zeros(lat.n_sites, dtype=complex)
    e[x2] = 1.0
    c = source_coefficient(ev.kernel.volume_element)
    return PropagatorValue(x1, x2, complex(c * c * ev.solve(e)[x1]))


def all_pairings(items):
    """Yield every perfect pairing of ``items`` as a list of 2-tuples."""
    items = list(items)
    if not items:
        yield []
        return
    first = items[0]
    rest = items[1:]
    for i, other in enumerate(rest):
        for tail in all_pairings(rest[:i] + rest[i + 1:]):
            yield [(first, other)] + tail


def wick_n_point(ev: GaussianEvaluation, sites) -> complex:
    """n-point moment of ``Z/Z0`` at ``J=0``: sum over pairings of two-point products."""
    sites = [ev.kernel.lattice.check_site(s) for s in sites]
    n = len(sites)
    if n > MAX_WICK_POINTS:
        raise ValueError(f"at most {MAX_WICK_POINTS} points supported, got {n}")
    if n % 2:
        return 0j
    D = two_point_matrix(ev)
    total = 0j
    for pairing in all_pairings(sites):
        term = 1 + 0j
        for a, b in pairing:
            term *= D[a, b]
        total += term
    return complex(total)


def _default_step(ev: GaussianEvaluation, order: int, target: str) -> float:
    # source scale at which the quadratic form is O(1)
    scale = np.linalg.norm(two_point_matrix(ev), 1)
    unit = 1.0 / np.sqrt(scale)
    if order <= 2:
        return 1e-3 * max(1.0, unit) if target == "log" else 1e-3 * min(1.0, unit)
    # roundoff grows like h**-order; log Z is exactly quadratic so a wide step is free
    return 0.1 * unit if target == "log" else 0.05 * min(1.0, unit)


def _nested_central(func, n_sites: int, sites, h: float) -> complex:
    # product of central differences, one per listed site, each with half-steps
    total = 0j
    for signs in product((1.0, -1.0), repeat=len(sites)):
        J = np.zeros(n_sites, dtype=complex)
        for s, sign in zip(sites, signs):
            J[s] += sign * h / 2
        total += np.prod(signs) * func(J)
    return total / h ** len(sites)


def fd_derivative(ev: GaussianEvaluation, sites, step: float | None = None,
                  target: str = "log") -> tuple[complex, float]:
    """Central finite-difference estimate of a mixed source derivative at ``J=0``.

    ``target="log"`` differentiates ``log Z(J)``; ``target="z"`` differentiates
    the normalised ``Z(J)/Z(0)``, whose derivatives are the moments.  The
    estimate is Richardson-extrapolated over steps ``h`` and ``h/2``; the
    returned error is the size of that correction.

    Only ``log_partition`` is called, so this is independent of the
    inverse-kernel route used by :func:`two_point` and :func:`wick_n_point`.
    """
    lat = ev.kernel.lattice
    sites = [lat.check_site(s) for s in sites]
    if not 1 <= len(sites) <= 4:
        raise ValueError("fd_derivative supports 1 to 4 sites")
    if target not in ("log", "z"):
        raise ValueError(f"unknown target {target!r}")
    if step is None:
        step = _default_step(ev, len(sites), target)
    if not step > 1e-8:
        raise ValueError(f"step must exceed 1e-8, got {step}")

    if target == "log":
        def func(J):
            return log_partition(ev, J)
    else:
        def func(J):
            return np.exp(log_partition(ev, J) - ev.log_z0)

    return central_difference(func, lat.n_sites, sites, step)


def central_difference(func, n_sites: int, sites, step: float) -> tuple[complex, float]:
    """Richardson-extrapolated nested central difference of ``func`` at ``J=0``."""
    coarse = _nested_central(func, n_sites, sites, step)
    fine = _nested_central(func, n_sites, sites, step / 2)
    estimate = fine + (fine - coarse) / 3
    return complex(estimate), float(abs(fine - coarse) / 3)
