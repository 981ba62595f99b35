"""Lowest eigenvalue lambda(n, beta) of the fiber operators and the
global ground state of the magnetic Neumann Laplacian on the unit disk.

For beta > 0 the eigenvalues are the roots in eta of the Neumann
boundary condition written through Kummer functions,

    (n+1)(n - x) M(nu, n+1, x) + 2 x nu M(nu+1, n+2, x) = 0,
    nu = (1 - eta)/2,  x = beta/2,

whose residual is evaluated here in the O(1), overflow-free scaled form.
For beta = 0 the problem degenerates to the free Neumann Laplacian and
is handled through the first zero of the Bessel derivative J_n'.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.optimize import brentq
from scipy.special import jnp_zeros

from .config import DEFAULT_CONFIG, SolverConfig
from .errors import BracketFailure, InvalidParams
from .kummer import kummer_m, kummer_ratio_shift_b
from .scaled import ScaledReal

_BRENTQ_RTOL = 4.0 * np.finfo(float).eps


@dataclass(frozen=True)
class EigenPoint:
    """One point (n, beta) on an eigenvalue curve.

    ``eta`` is lambda/beta, the field-normalized eigenvalue; it is NaN
    at beta = 0 where the ratio is undefined.
    """

    n: int
    beta: float
    lam: float
    eta: float

    def __post_init__(self) -> None:
        if self.n < 0:
            raise InvalidParams("angular mode n must be >= 0")
        if self.beta < 0.0:
            raise InvalidParams("beta must be >= 0")
        if self.lam < 0.0:
            raise InvalidParams("eigenvalue must be >= 0")


@dataclass(frozen=True)
class EigenfunctionHandle:
    """Normalized radial ground state of one fiber operator.

    ``norm_const`` is the multiplicative normalization of the raw Kummer
    form; it routinely spans e^{+-200} so it is kept as a ScaledReal.
    ``log_norm_integral`` caches ln of the squared-norm integral of the
    raw form, which :meth:`evaluate` needs.
    """

    point: EigenPoint
    norm_const: ScaledReal
    boundary_trace: float
    log_norm_integral: float

    def evaluate(self, r) -> np.ndarray:
        """Normalized f(r) on 0 <= r <= 1 (vectorized)."""
        r = np.asarray(r, dtype=float)
        out = np.zeros_like(r)
        nz = r > 0.0
        point = self.point
        nu = 0.5 * (1.0 - point.eta)
        for idx in np.ndindex(r.shape):
            if not nz[idx]:
                out[idx] = 0.0 if point.n > 0 else math.exp(
                    -0.5 * self.log_norm_integral)
                continue
            ri = float(r[idx])
            m = kummer_m(nu, point.n + 1.0, 0.5 * point.beta * ri * ri)
            log_f = (point.n * math.log(ri) - 0.25 * point.beta * ri * ri
                     + m.log_mag - 0.5 * self.log_norm_integral)
            out[idx] = m.sign * math.exp(log_f)
        return out


@lru_cache(maxsize=None)
def bessel_jnp_first_zero(n: int) -> float:
    """First positive zero of J_n', the Neumann eigenvalue root at beta = 0."""
    if n < 1:
        raise InvalidParams("first J_n' zero used only for n >= 1")
    return float(jnp_zeros(n, 1)[0])


def boundary_residual(n: int, beta: float, eta_trial: float,
                      config: SolverConfig = DEFAULT_CONFIG) -> float:
    """Scaled Neumann boundary residual at trial ratio eta.

    The raw condition is divided by (n+1) max(1, x) M(nu, n+1, x), which
    keeps the value O(1) and sign-accurate: below the lowest eigenvalue
    the denominator Kummer function is strictly positive (the first
    Dirichlet eigenvalue lies above the first Neumann one), so the first
    sign change in an upward eta scan is the ground state.
    """
    if beta <= 0.0:
        raise InvalidParams("boundary residual needs beta > 0")
    x = 0.5 * beta
    nu = 0.5 * (1.0 - eta_trial)
    ratio = kummer_ratio_shift_b(nu, n + 1.0, x, config)
    scale = max(1.0, x)
    return (n - x) / scale + 2.0 * nu * x * ratio / ((n + 1.0) * scale)


def _eta_scan_limit(n: int, beta: float) -> float:
    # boundary value of the rescaled potential, plus margin
    limit = max(2.0, (n / math.sqrt(beta) - 0.5 * math.sqrt(beta)) ** 2 + 5.0)
    if n > 0 and beta <= 2.0 * n:
        # lambda(n, .) decreases on (0, 2n], so lambda(n, 0) caps eta there
        limit = max(limit, 1.05 * bessel_jnp_first_zero(n) ** 2 / beta + 5.0)
    return limit


@lru_cache(maxsize=None)
def _lowest_eigenvalue_cached(n: int, beta: float,
                              config: SolverConfig) -> EigenPoint:
    if beta == 0.0:
        lam = 0.0 if n == 0 else bessel_jnp_first_zero(n) ** 2
        return EigenPoint(n, 0.0, lam, math.nan)

    def residual(eta: float) -> float:
        return boundary_residual(n, beta, eta, config)

    step = config.eta_scan_step
    eta_max = _eta_scan_limit(n, beta)
    lo = 0.0
    f_lo = residual(lo)
    hi = lo
    while hi < eta_max:
        hi = lo + step
        if beta > 2.0 * n and lo < 1.0 < hi:
            # pin a node at eta = 1 exactly: for beta > 2n the residual
            # there is (n-x)/max(1,x) < 0 while the Dirichlet pole sits
            # strictly above 1, so the ground state cannot slip through
            # even when its distance to 1 is below float resolution
            hi = 1.0
        f_hi = residual(hi)
        if f_lo == 0.0:
            return EigenPoint(n, beta, beta * lo, lo)
        if f_lo * f_hi < 0.0:
            break
        lo, f_lo = hi, f_hi
    else:
        raise BracketFailure(
            f"no residual sign change for n={n}, beta={beta} on (0, {eta_max:.3g})")
    eta = brentq(residual, lo, hi, xtol=1e-100, rtol=_BRENTQ_RTOL)
    return EigenPoint(n, beta, beta * eta, eta)


def lowest_eigenvalue(n: int, beta: float,
                      config: SolverConfig = DEFAULT_CONFIG) -> EigenPoint:
    """Lowest eigenvalue of the fiber operator at angular mode n.

    Scans eta upward from 0 in fixed steps until the boundary residual
    changes sign, then refines the bracket; results are memoized.
    """
    return _lowest_eigenvalue_cached(int(n), float(beta), config)


def _graded_mesh(beta: float) -> np.ndarray:
    """Cell edges on [0, 1], refined toward r = 1 at the boundary-layer scale."""
    width = min(0.25, 1.0 / math.sqrt(max(beta, 16.0)))
    edges = [1.0]
    pos = 1.0
    step = 0.5 * width  # 8-point cells -> 16 nodes per layer width
    layer_left = 1.0 - 12.0 * width
    while pos > 0.0:
        if pos <= layer_left:
            step *= 1.8
        pos = max(0.0, pos - step)
        edges.append(pos)
    return np.array(edges[::-1])


_GL_NODES, _GL_WEIGHTS = leggauss(8)


def eigenfunction(point: EigenPoint,
                  config: SolverConfig = DEFAULT_CONFIG) -> EigenfunctionHandle:
    """Normalize the Kummer-form eigenfunction and take its boundary trace.

    The squared-norm integral is evaluated in log space on a mesh graded
    toward r = 1 (composite 8-point Gauss-Legendre), because the raw
    integrand spans hundreds of orders of magnitude at large beta.
    """
    if point.beta <= 0.0:
        raise InvalidParams("eigenfunction normalization needs beta > 0")
    n, beta, eta = point.n, point.beta, point.eta
    nu = 0.5 * (1.0 - eta)

    edges = _graded_mesh(beta)
    log_vals = []
    weights = []
    for a, b in zip(edges[:-1], edges[1:]):
        mid, rad = 0.5 * (a + b), 0.5 * (b - a)
        for xg, wg in zip(_GL_NODES, _GL_WEIGHTS):
            r = mid + rad * xg
            if r <= 0.0:
                continue
            m = kummer_m(nu, n + 1.0, 0.5 * beta * r * r, config)
            g = n * math.log(r) - 0.25 * beta * r * r + m.log_mag
            log_vals.append(2.0 * g + math.log(r))
            weights.append(rad * wg)
    log_vals = np.array(log_vals)
    weights = np.array(weights)
    top = float(log_vals.max())
    log_norm = top + math.log(float(np.sum(weights * np.exp(log_vals - top))))

    m1 = kummer_m(nu, n + 1.0, 0.5 * beta, config)
    trace = m1.sign * math.exp(-0.25 * beta + m1.log_mag - 0.5 * log_norm)
    return EigenfunctionHandle(
        point=point,
        norm_const=ScaledReal(-0.5 * log_norm, 1),
        boundary_trace=trace,
        log_norm_integral=log_norm,
    )


def ground_state(beta: float,
                 config: SolverConfig = DEFAULT_CONFIG) -> tuple[EigenPoint, int]:
    """Global ground state lambda(beta) = min_n lambda(n, beta) and its mode.

    For fixed beta the map n -> lambda(n, beta) decreases then increases,
    so a downhill walk from the boundary-layer estimate of the minimizing
    mode finds the minimum; ties at crossing points report the smaller n.
    """
    if beta <= 0.0:
        raise InvalidParams("ground state scan needs beta > 0")
    tie_rel = 10.0 * config.eig_rel_tol

    def lam(m: int) -> float:
        return lowest_eigenvalue(m, beta, config).lam

    k = max(0, round(0.5 * beta - 0.768 * math.sqrt(beta)))
    here = lam(k)
    while k > 0:
        below = lam(k - 1)
        if below < here * (1.0 - tie_rel):
            k, here = k - 1, below
        else:
            break
    while True:
        above = lam(k + 1)
        if above < here * (1.0 - tie_rel):
            k, here = k + 1, above
        else:
            break
    return lowest_eigenvalue(k, beta, config), k
