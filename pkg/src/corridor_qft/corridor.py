"""Corridor weight over a small volume and the resulting field resolution.

The weight ``exp(-eps dphi^2 dv / 2)`` is a centred Gaussian in ``dphi`` with
standard deviation ``1/sqrt(eps dv)``.  The resolution
``Delta phi = sqrt(2 / (eps dv))`` is the 1/e half-width of that weight,
larger than the Gaussian sigma by sqrt(2); both are reported.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import optimize, special

__all__ = [
    "VolumeElement",
    "CorridorStats",
    "weight_small_volume",
    "delta_phi_formula",
    "delta_phi_from_lifetime",
    "gaussian_sigma",
    "half_width_1e",
    "corridor_normals",
    "sample_corridor",
    "MIN_SAMPLES",
]

MIN_SAMPLES = 10_000


@dataclass(frozen=True)
class VolumeElement:
    dv: float

    def __post_init__(self):
        if not (np.isfinite(self.dv) and self.dv > 0):
            raise ValueError(f"dv must be > 0, got {self.dv}")
        object.__setattr__(self, "dv", float(self.dv))


@dataclass(frozen=True)
class CorridorStats:
    sigma_sample: float
    sigma_true: float
    half_width_1e: float
    predicted_delta_phi: float
    n_samples: int
    seed: int

    @property
    def standard_error(self) -> float:
        """Large-n standard error of a Gaussian sample standard deviation."""
        return self.sigma_true / math.sqrt(2 * self.n_samples)

    @property
    def sigma_band(self) -> float:
        return 3 * self.standard_error


def _dv(dv) -> float:
    return dv.dv if isinstance(dv, VolumeElement) else VolumeElement(dv).dv


def _positive(**kw):
    for name, value in kw.items():
        if not (np.isfinite(value) and value > 0):
            raise ValueError(f"{name} must be > 0, got {value}")


def weight_small_volume(epsilon: float, delta_phi: float, dv) -> float:
    _positive(epsilon=epsilon)
    return math.exp(-epsilon * delta_phi**2 * _dv(dv) / 2)


def delta_phi_formula(epsilon: float, dv) -> float:
    _positive(epsilon=epsilon)
    return math.sqrt(2 / (epsilon * _dv(dv)))


def delta_phi_from_lifetime(tau: float, m: float, dv) -> float:
    """Resolution expressed through the rest-frame lifetime, ``eps = 4 m / tau``."""
    _positive(tau=tau, m=m)
    return math.sqrt(tau / (2 * m * _dv(dv)))


def gaussian_sigma(epsilon: float, dv) -> float:
    _positive(epsilon=epsilon)
    return 1 / math.sqrt(epsilon * _dv(dv))


def half_width_1e(epsilon: float, dv) -> float:
    """Locate ``dphi > 0`` with weight ``1/e`` by root finding on the weight itself."""
    target = math.exp(-1)
    hi = 1.0
    while weight_small_volume(epsilon, hi, dv) > target:
        hi *= 2
    return optimize.brentq(lambda x: weight_small_volume(epsilon, x, dv) - target,
                           0.0, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=200)


def corridor_normals(seed: int, start: int, count: int) -> np.ndarray:
    """Standard normals for sample indices ``[start, start + count)``.

    Sample ``i`` is the inverse normal CDF of the ``i``-th double drawn from a
    Philox stream keyed by ``seed``, so any sharding of the index range gives
    bitwise-identical draws.
    """
    bitgen = np.random.Philox(key=seed)
    # one Philox counter step yields four doubles
    start, count = int(start), int(count)
    bitgen.advance(start // 4)
    skip = start % 4
    u = np.random.Generator(bitgen).random(skip + count)[skip:]
    # random() is in [0, 1); exclude the 0 endpoint
    u = np.where(u == 0.0, np.finfo(float).tiny, u)
    return special.ndtri(u)


def sample_corridor(epsilon: float, dv, n_samples: int, seed: int,
                    n_shards: int = 1) -> CorridorStats:
    _positive(epsilon=epsilon)
    dv = _dv(dv)
    if n_samples < MIN_SAMPLES:
        raise ValueError(f"n_samples must be >= {MIN_SAMPLES}, got {n_samples}")
    if n_shards < 1:
        raise ValueError("n_shards must be >= 1")
    sigma = gaussian_sigma(epsilon, dv)
    bounds = np.linspace(0, n_samples, n_shards + 1).astype(int)
    z = np.concatenate([corridor_normals(seed, a, b - a) for a, b in zip(bounds[:-1], bounds[1:])])
    sample = sigma * z
    return CorridorStats(
        sigma_sample=float(np.std(sample, ddof=1)),
        sigma_true=sigma,
        half_width_1e=half_width_1e(epsilon, dv),
        predicted_delta_phi=delta_phi_formula(epsilon, dv),
        n_samples=int(n_samples),
        seed=int(seed),
    )
