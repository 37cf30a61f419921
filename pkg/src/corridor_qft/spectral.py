"""Single-mode frequency integral with a finite imaginary mass shift.

    I(t) = int_{-inf}^{inf} dw exp(-i w t) / (w^2 - w_k^2 - i eps)

Three evaluations are provided: direct real-axis quadrature, the exact
residue closed form ``(pi i / s) exp(i |t| s)`` with ``s = sqrt(w_k^2 + i eps)``
(principal root), and the first-order expansion of the exponent,
``(pi i / s) exp(i w_k |t|) exp(-eps |t| / 2 w_k)``.  No 2*pi normalisation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy import integrate, special

__all__ = [
    "Method",
    "SpectralQuery",
    "PropagatorSample",
    "DecayFit",
    "LifetimeResult",
    "QuadratureError",
    "omega_integral_quadrature",
    "omega_integral_residue",
    "omega_integral_approx",
    "evaluate",
    "exact_decay_rate",
    "approx_decay_rate",
    "approx_gap",
    "in_quadratic_regime",
    "fit_decay_envelope",
    "lifetime",
    "lifetime_boosted",
    "MAX_QUADRATURE_T",
]

MAX_QUADRATURE_T = 50.0


class Method(str, Enum):
    QUADRATURE = "quadrature"
    RESIDUE = "residue"
    APPROX = "approx"


class QuadratureError(RuntimeError):
    pass


@dataclass(frozen=True)
class SpectralQuery:
    omega_k: float
    epsilon: float
    t: float

    def __post_init__(self):
        if not (np.isfinite(self.omega_k) and self.omega_k > 0):
            raise ValueError(f"omega_k must be > 0, got {self.omega_k}")
        if not (np.isfinite(self.epsilon) and self.epsilon > 0):
            raise ValueError(f"epsilon must be > 0, got {self.epsilon}")
        if not np.isfinite(self.t):
            raise ValueError("t must be finite")

    @property
    def root(self) -> complex:
        return complex(np.sqrt(complex(self.omega_k**2, self.epsilon)))


@dataclass(frozen=True)
class PropagatorSample:
    query: SpectralQuery
    value: complex
    method: Method
    error: float = 0.0


@dataclass(frozen=True)
class DecayFit:
    rate: float
    intercept: float
    residual: float


@dataclass(frozen=True)
class LifetimeResult:
    tau: float
    tau_rest: float
    gamma: float


def omega_integral_residue(q: SpectralQuery) -> PropagatorSample:
    s = q.root
    value = np.pi * 1j / s * np.exp(1j * abs(q.t) * s)
    return PropagatorSample(q, complex(value), Method.RESIDUE)


def omega_integral_approx(q: SpectralQuery) -> PropagatorSample:
    s = q.root
    at = abs(q.t)
    value = np.pi * 1j / s * np.exp(1j * q.omega_k * at) * np.exp(-q.epsilon * at / (2 * q.omega_k))
    return PropagatorSample(q, complex(value), Method.APPROX)


def approx_gap(q: SpectralQuery, relative: bool = False) -> float:
    """Distance between the first-order and exact forms, optionally relative to the exact one."""
    exact = omega_integral_residue(q).value
    gap = abs(omega_integral_approx(q).value - exact)
    return gap / abs(exact) if relative else gap


def in_quadratic_regime(q: SpectralQuery) -> bool:
    """Whether halving eps should cut the absolute approx gap by about 4.

    The absolute gap carries the envelope ``exp(-eps |t| / 2 w_k)`` itself, so
    each halving multiplies the ratio by ``exp(-eps |t| / 4 w_k)``; that drift
    stays small only while ``eps |t| <= w_k``.  The relative gap has no such
    restriction.
    """
    return q.epsilon <= 0.1 * q.omega_k**2 and q.epsilon * abs(q.t) <= q.omega_k


def _cos_over_w2_tail(t: float, cutoff: float) -> float:
    """int_cutoff^inf cos(t w) / w^2 dw."""
    if t == 0:
        return 1.0 / cutoff
    si, _ = special.sici(abs(t) * cutoff)
    return math.cos(t * cutoff) / cutoff - abs(t) * (math.pi / 2 - si)


def _quad_complex(f_re, f_im, a, b, t, tol, **kw):
    total, err = 0j, 0.0
    for part, f in ((1.0, f_re), (1j, f_im)):
        if t == 0:
            val, e = integrate.quad(f, a, b, epsabs=tol, epsrel=0, limit=500, **kw)
        else:
            val, e = integrate.quad(f, a, b, weight="cos", wvar=t, epsabs=tol, epsrel=0, limit=500)
        total += part * val
        err += e
    return total, err


def omega_integral_quadrature(q: SpectralQuery, tol: float = 1e-6) -> PropagatorSample:
    """Real-axis quadrature of the frequency integral.

    The integrand's even part is integrated on ``[0, cutoff]`` in three
    panels, with a narrow panel around the near-axis pole at ``w_k`` whose
    width follows the pole offset ``eps / 2 w_k``.  The ``1/w^2`` part of the
    tail beyond the cutoff is added in closed form (sine/cosine integrals);
    the cutoff is chosen so the remaining tail, bounded by
    ``4 |w_k^2 + i eps| / (3 cutoff^3)``, stays below ``tol / 2``.
    """
    if not 1e-10 <= tol <= 1e-3:
        raise ValueError(f"tol must lie in [1e-10, 1e-3], got {tol}")
    if abs(q.t) > MAX_QUADRATURE_T:
        raise QuadratureError(
            f"|t| = {abs(q.t)} exceeds {MAX_QUADRATURE_T}; use the residue form"
        )
    wk, eps, t = q.omega_k, q.epsilon, abs(q.t)
    s2 = abs(complex(wk**2, eps))
    cutoff = max((8 * s2 / (3 * tol)) ** (1 / 3), 2 * (wk + 1), math.sqrt(2 * s2))

    def f_re(w):
        d = w * w - wk * wk
        return d / (d * d + eps * eps)

    def f_im(w):
        d = w * w - wk * wk
        return eps / (d * d + eps * eps)

    half_width = min(wk / 2, max(50 * eps / (2 * wk), 1e-3))
    lo, hi = wk - half_width, wk + half_width
    panel_tol = tol / 20
    # near-pole panel: Lorentzian of width eps/2w_k, no oscillatory weight
    def g_re(w):
        return f_re(w) * math.cos(t * w)

    def g_im(w):
        return f_im(w) * math.cos(t * w)

    parts = [
        _quad_complex(f_re, f_im, 0.0, lo, t, panel_tol),
        _quad_complex(g_re, g_im, lo, hi, 0, panel_tol, points=[wk]),
        _quad_complex(f_re, f_im, hi, cutoff, t, panel_tol),
    ]
    value = 2 * sum(p[0] for p in parts)
    err = 2 * sum(p[1] for p in parts)
    value += 2 * _cos_over_w2_tail(t, cutoff)
    err += 4 * s2 / (3 * cutoff**3)
    if not np.isfinite(value) or err > tol:
        raise QuadratureError(f"quadrature error estimate {err:.3g} exceeds tol {tol:.3g}")
    return PropagatorSample(q, complex(value), Method.QUADRATURE, err)


def evaluate(q: SpectralQuery, method: Method | str, tol: float = 1e-6) -> PropagatorSample:
    method = Method(method)
    if method is Method.QUADRATURE:
        return omega_integral_quadrature(q, tol)
    if method is Method.RESIDUE:
        return omega_integral_residue(q)
    return omega_integral_approx(q)


def exact_decay_rate(omega_k: float, epsilon: float) -> float:
    """``Im sqrt(w_k^2 + i eps)``, the exact envelope rate of the residue form."""
    return float(np.sqrt(complex(omega_k**2, epsilon)).imag)


def approx_decay_rate(omega_k: float, epsilon: float) -> float:
    return epsilon / (2 * omega_k)


def fit_decay_envelope(queries, method: Method | str = Method.RESIDUE,
                       tol: float = 1e-6) -> DecayFit:
    """Least-squares line through ``log|I|`` against ``|t|``; rate is minus the slope."""
    queries = list(queries)
    if len(queries) < 8:
        raise ValueError("need at least 8 samples")
    if len({(q.omega_k, q.epsilon) for q in queries}) != 1:
        raise ValueError("queries must share omega_k and epsilon")
    at = np.array([abs(q.t) for q in queries])
    if np.ptp(at) == 0:
        raise ValueError("degenerate t grid")
    logs = np.array([math.log(abs(evaluate(q, method, tol).value)) for q in queries])
    X = np.column_stack([np.ones_like(at), at])
    coef, *_ = np.linalg.lstsq(X, logs, rcond=None)
    residual = float(np.sqrt(np.mean((X @ coef - logs) ** 2)))
    rate = -float(coef[1])
    if not rate > 0:
        raise ValueError(f"fitted rate {rate} is not positive")
    return DecayFit(rate, float(coef[0]), residual)


def lifetime(omega_k: float, epsilon: float) -> float:
    """Total lifetime ``4 w_k / eps``: twice the per-direction 1/e amplitude time."""
    if not (omega_k > 0 and epsilon > 0):
        raise ValueError("omega_k and epsilon must be positive")
    return 4 * omega_k / epsilon


def lifetime_boosted(m: float, epsilon: float, gamma: float) -> LifetimeResult:
    if not (m > 0 and epsilon > 0):
        raise ValueError("m and epsilon must be positive")
    if not gamma >= 1:
        raise ValueError(f"gamma must be >= 1, got {gamma}")
    tau_rest = 4 * m / epsilon
    return LifetimeResult(gamma * tau_rest, tau_rest, float(gamma))
