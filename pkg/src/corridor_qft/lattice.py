"""Periodic hypercubic lattices, field configurations and the complex action kernel.

The discretized action exponent for a free scalar with finite ``epsilon`` is

    -1/2 phi^T A phi + b^T phi

with the kernel

    A = -i dv (K + m^2) + epsilon dv Id

where ``K`` is the nearest-neighbour lattice Laplacian (positive semidefinite)
and ``dv = a**d`` the cell volume.  ``Re(A) = epsilon dv Id`` is positive
definite for every ``epsilon > 0``, which is what makes the Gaussian integral
converge.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import prod

import numpy as np

__all__ = [
    "LatticeSpec",
    "FieldConfiguration",
    "SourceField",
    "ClassicalField",
    "ModelParams",
    "ComplexKernel",
    "build_lattice",
    "build_laplacian",
    "build_kernel",
]


@dataclass(frozen=True)
class LatticeSpec:
    dims: tuple[int, ...]
    spacing: float = 1.0

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        if not 1 <= len(dims) <= 4:
            raise ValueError(f"lattice needs 1 to 4 axes, got {len(dims)}")
        if any(d < 1 for d in dims):
            raise ValueError(f"every lattice extent must be >= 1, got {dims}")
        if not (np.isfinite(self.spacing) and self.spacing > 0):
            raise ValueError(f"spacing must be positive, got {self.spacing}")
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "spacing", float(self.spacing))

    @property
    def ndim(self) -> int:
        return len(self.dims)

    @property
    def n_sites(self) -> int:
        return prod(self.dims)

    @property
    def volume_element(self) -> float:
        return self.spacing**self.ndim

    def index(self, coords) -> int:
        """Row-major site index of a coordinate tuple (wrapped periodically)."""
        coords = tuple(c % d for c, d in zip(coords, self.dims))
        return int(np.ravel_multi_index(coords, self.dims))

    def coords(self, site: int) -> tuple[int, ...]:
        self.check_site(site)
        return tuple(int(c) for c in np.unravel_index(site, self.dims))

    def check_site(self, site: int) -> int:
        if not 0 <= site < self.n_sites:
            raise IndexError(f"site {site} out of range [0, {self.n_sites})")
        return int(site)

    def neighbors(self, site: int) -> list[int]:
        """Forward and backward periodic neighbours of ``site``, one slot per link.

        On an axis of extent 2 both slots point at the same site (the doubled
        link); on an axis of extent 1 both slots are the site itself and cancel
        in the Laplacian.
        """
        c = self.coords(site)
        out = []
        for axis in range(self.ndim):
            for step in (1, -1):
                shifted = list(c)
                shifted[axis] += step
                out.append(self.index(shifted))
        return out

    def displacement(self, x1: int, x2: int) -> tuple[int, ...]:
        c1, c2 = self.coords(x1), self.coords(x2)
        return tuple((a - b) % d for a, b, d in zip(c1, c2, self.dims))


def _as_vector(lattice: LatticeSpec, values, dtype) -> np.ndarray:
    arr = np.array(values, dtype=dtype).reshape(-1)
    if arr.shape[0] != lattice.n_sites:
        raise ValueError(
            f"expected {lattice.n_sites} values for lattice {lattice.dims}, got {arr.shape[0]}"
        )
    if not np.all(np.isfinite(arr)):
        raise ValueError("field values must be finite")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class FieldConfiguration:
    lattice: LatticeSpec
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "values", _as_vector(self.lattice, self.values, float))


@dataclass(frozen=True)
class SourceField:
    """Complex source ``J(x)``; imaginary values are allowed."""

    lattice: LatticeSpec
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "values", _as_vector(self.lattice, self.values, complex))

    @classmethod
    def zeros(cls, lattice: LatticeSpec) -> "SourceField":
        return cls(lattice, np.zeros(lattice.n_sites, dtype=complex))


@dataclass(frozen=True)
class ClassicalField:
    """Real corridor centre ``phi_cl(x)``."""

    lattice: LatticeSpec
    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values)
        if np.iscomplexobj(vals):
            if np.max(np.abs(vals.imag), initial=0.0) > 1e-12:
                raise ValueError("classical field must be real")
            vals = vals.real
        object.__setattr__(self, "values", _as_vector(self.lattice, vals, float))

    @classmethod
    def zeros(cls, lattice: LatticeSpec) -> "ClassicalField":
        return cls(lattice, np.zeros(lattice.n_sites))


@dataclass(frozen=True)
class ModelParams:
    mass: float
    epsilon: float

    def __post_init__(self):
        if not (np.isfinite(self.mass) and self.mass >= 0):
            raise ValueError(f"mass must be >= 0, got {self.mass}")
        if not (np.isfinite(self.epsilon) and self.epsilon > 0):
            raise ValueError(f"epsilon must be > 0, got {self.epsilon}")
        object.__setattr__(self, "mass", float(self.mass))
        object.__setattr__(self, "epsilon", float(self.epsilon))


@dataclass(frozen=True)
class ComplexKernel:
    lattice: LatticeSpec
    params: ModelParams
    matrix: np.ndarray = field(repr=False)
    laplacian: np.ndarray = field(repr=False)

    @property
    def volume_element(self) -> float:
        return self.lattice.volume_element

    @property
    def n_sites(self) -> int:
        return self.lattice.n_sites


def build_lattice(dims, spacing: float = 1.0) -> LatticeSpec:
    if dims is None or len(dims) == 0:
        raise ValueError("dims must be a non-empty list")
    return LatticeSpec(tuple(dims), spacing)


def build_laplacian(lattice: LatticeSpec) -> np.ndarray:
    """Nearest-neighbour periodic Laplacian, ``K[x,x] = links/a^2``, ``K[x,y] = -mult/a^2``.

    Self-links (axes of extent 1) contribute to both entries and cancel.
    """
    n = lattice.n_sites
    K = np.zeros((n, n))
    for x in range(n):
        for y in lattice.neighbors(x):
            K[x, x] += 1.0
            K[x, y] -= 1.0
    K /= lattice.spacing**2
    K.setflags(write=False)
    return K


def build_kernel(lattice: LatticeSpec, params: ModelParams) -> ComplexKernel:
    if params.epsilon <= 0:
        raise ValueError("epsilon must be > 0")
    dv = lattice.volume_element
    K = build_laplacian(lattice)
    eye = np.eye(lattice.n_sites)
    A = -1j * dv * (K + params.mass**2 * eye) + params.epsilon * dv * eye
    # Re(A) = eps*dv*Id, so every eigenvalue has real part eps*dv > 0
    if not np.all(np.isfinite(A)):
        raise ValueError("kernel has non-finite entries")
    A.setflags(write=False)
    return ComplexKernel(lattice, params, A, K)
