"""Crossing points of consecutive eigenvalue curves.

At the unique beta_n where lambda(n, .) and lambda(n+1, .) intersect,
the pair (x, nu) = (beta/2, (1-eta)/2) solves the two-equation Kummer
system; eliminating the Kummer functions through their contiguous
recurrences yields the closed-form Saint-James relation

    beta = 2 eta + 2n + 1 + sqrt((2 eta + 1)^2 + 8 n eta).

Three independent routes to (beta_n, eta_n*) are implemented:

* root of beta -> lambda(n, beta) - lambda(n+1, beta) (curve intersection),
* damped Newton on the scaled two-equation system,
* substitution of the Saint-James x(nu) into the first equation, leaving
  a single implicit equation in nu.

All three agree to ~1e-12 relative; the residuals stored on each
CrossingPoint make the agreement auditable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .config import DEFAULT_CONFIG, SolverConfig
from .errors import BracketFailure, NewtonDivergence
from .kummer import kummer_ratio_shift_b
from .spectrum import eigenfunction, lowest_eigenvalue

_BRENTQ_RTOL = 4.0 * np.finfo(float).eps
_XI0_NUMERIC = -0.768  # seed-quality value; solvers do not depend on its digits


@dataclass(frozen=True)
class CrossingPoint:
    """Intersection of the n-th and (n+1)-th eigenvalue curves.

    sys_residuals holds the scaled residuals of both boundary equations
    at the returned point; sj_residual is |beta_n - SJ(n, eta_star)|.
    """

    n: int
    beta_n: float
    eta_star: float
    lambda_star: float
    sj_residual: float
    sys_residuals: tuple[float, float]
    method: str

    def __post_init__(self) -> None:
        if self.method not in ("curve_intersection", "kummer_system", "implicit_phi"):
            raise ValueError(f"unknown method {self.method!r}")


def saint_james_beta(n: int, eta: float) -> float:
    """The crossing field strength as a function of the crossing ratio.

    Larger root of beta^2 - 2(2 eta + 2n + 1) beta + 4 n (n+1) = 0; for
    n = 0 the radical collapses and the formula reduces to 4 eta + 2.
    """
    return 2.0 * eta + 2.0 * n + 1.0 + math.sqrt(
        (2.0 * eta + 1.0) ** 2 + 8.0 * n * eta)


def _system_residuals(n: int, x: float, nu: float,
                      config: SolverConfig) -> tuple[float, float]:
    """Scaled residuals of the two Neumann conditions at (x, nu)."""
    scale = max(1.0, x)
    r1 = kummer_ratio_shift_b(nu, n + 1.0, x, config)
    r2 = kummer_ratio_shift_b(nu, n + 2.0, x, config)
    f1 = (n - x) / scale + 2.0 * nu * x * r1 / ((n + 1.0) * scale)
    f2 = (n + 1.0 - x) / scale + 2.0 * nu * x * r2 / ((n + 2.0) * scale)
    return f1, f2


def _guess(n: int) -> tuple[float, float]:
    """Asymptotic seed (x, nu): beta from the crossing expansion, eta by
    inverting the Saint-James quadratic at that beta."""
    beta = max(2.0 * n + 2.0 ** 1.5 * abs(_XI0_NUMERIC) * math.sqrt(n) + 2.0,
               2.0 * n + 3.0)
    eta = (beta * beta - 2.0 * (2.0 * n + 1.0) * beta + 4.0 * n * (n + 1.0)) \
        / (4.0 * beta)
    eta = min(max(eta, 0.05), 0.95)
    return 0.5 * beta, 0.5 * (1.0 - eta)


def _make_point(n: int, x: float, nu: float, method: str,
                config: SolverConfig) -> CrossingPoint:
    beta = 2.0 * x
    eta = 1.0 - 2.0 * nu
    return CrossingPoint(
        n=n,
        beta_n=beta,
        eta_star=eta,
        lambda_star=beta * eta,
        sj_residual=abs(beta - saint_james_beta(n, eta)),
        sys_residuals=_system_residuals(n, x, nu, config),
        method=method,
    )


def crossing_by_system(n: int, config: SolverConfig = DEFAULT_CONFIG,
                       seed: tuple[float, float] | None = None) -> CrossingPoint:
    """Damped Newton on the scaled two-equation system in (x, nu).

    The Jacobian comes from forward differences of the scaled residuals;
    steps are halved until the residual norm decreases.  Falls back to
    the bracketed curve intersection if Newton diverges.
    """
    x, nu = seed if seed is not None else _guess(n)
    f1, f2 = _system_residuals(n, x, nu, config)
    norm = max(abs(f1), abs(f2))
    for _ in range(config.newton_max_iter):
        if norm < 1e-15:
            break
        hx = 1e-7 * max(1.0, x)
        hn = 1e-7 * max(0.05, abs(nu))
        g1x, g2x = _system_residuals(n, x + hx, nu, config)
        g1n, g2n = _system_residuals(n, x, nu + hn, config)
        j11, j21 = (g1x - f1) / hx, (g2x - f2) / hx
        j12, j22 = (g1n - f1) / hn, (g2n - f2) / hn
        det = j11 * j22 - j12 * j21
        if det == 0.0:
            raise NewtonDivergence(f"singular Jacobian at n={n}")
        dx = -(j22 * f1 - j12 * f2) / det
        dn = -(j11 * f2 - j21 * f1) / det
        step = 1.0
        for _ in range(30):
            x_new = x + step * dx
            nu_new = min(max(nu + step * dn, 1e-12), 0.5 - 1e-12)
            x_new = max(x_new, n + 1.0 + 1e-9)
            t1, t2 = _system_residuals(n, x_new, nu_new, config)
            if max(abs(t1), abs(t2)) < norm:
                x, nu, f1, f2 = x_new, nu_new, t1, t2
                norm = max(abs(f1), abs(f2))
                break
            step *= 0.5
        else:
            if norm < max(1e-11, config.cross_rel_tol):
                break  # stagnated at the residual's noise floor: done
            return _fallback_to_curves(n, config)
    else:
        if norm >= max(1e-11, config.cross_rel_tol):
            return _fallback_to_curves(n, config)
    return _make_point(n, x, nu, "kummer_system", config)


def _fallback_to_curves(n: int, config: SolverConfig) -> CrossingPoint:
    point = crossing_by_curves(n, config)
    return point


def crossing_by_curves(n: int, config: SolverConfig = DEFAULT_CONFIG) -> CrossingPoint:
    """Bracketed root of beta -> lambda(n, beta) - lambda(n+1, beta).

    The bracket [2(n+1), SJ(n, 0.99) + 10] is guaranteed by the crossing
    theory: the crossing lies above 2(n+1), and eta_star is well below
    0.99, so the Saint-James value at 0.99 overshoots it.
    """

    def gap(beta: float) -> float:
        return lowest_eigenvalue(n, beta, config).lam \
            - lowest_eigenvalue(n + 1, beta, config).lam

    lo = 2.0 * (n + 1.0) + 1e-9
    hi = saint_james_beta(n, 0.99) + 10.0
    if not gap(lo) < 0.0 < gap(hi):
        raise BracketFailure(
            f"crossing bracket sign pattern violated at n={n} "
            f"(gap({lo:.3f})={gap(lo):.3e}, gap({hi:.3f})={gap(hi):.3e})")
    beta = brentq(gap, lo, hi, xtol=1e-100, rtol=_BRENTQ_RTOL)
    eta = lowest_eigenvalue(n, beta, config).eta
    return _make_point(n, 0.5 * beta, 0.5 * (1.0 - eta),
                       "curve_intersection", config)


def _x_of_nu(n: int, nu: float) -> float:
    """Saint-James x(nu) substituted into the crossing system."""
    return (1.0 - 2.0 * nu + n + 0.5) + 0.5 * math.sqrt(
        (3.0 - 4.0 * nu) ** 2 + 8.0 * (1.0 - 2.0 * nu) * n)


def crossing_by_phi(n: int, config: SolverConfig = DEFAULT_CONFIG) -> CrossingPoint:
    """Root of the single implicit equation Phi(nu, n) = 0 in nu.

    Phi is the scaled first boundary equation with x eliminated through
    the Saint-James relation; any algebraically equivalent form has the
    same roots, and the scaled form stays O(1).
    """

    def phi(nu: float) -> float:
        return _system_residuals(n, _x_of_nu(n, nu), nu, config)[0]

    _, nu_seed = _guess(n)
    width = 0.02
    lo = max(1e-12, nu_seed - width)
    hi = min(0.5 - 1e-12, nu_seed + width)
    while phi(lo) * phi(hi) > 0.0:
        width *= 2.0
        lo = max(1e-12, nu_seed - width)
        hi = min(0.5 - 1e-12, nu_seed + width)
        if width > 1.0:
            raise BracketFailure(f"no Phi sign change in (0, 1/2) for n={n}")
    nu = brentq(phi, lo, hi, xtol=1e-100, rtol=_BRENTQ_RTOL)
    return _make_point(n, _x_of_nu(n, nu), nu, "implicit_phi", config)


def crossings_range(n_max: int, config: SolverConfig = DEFAULT_CONFIG) -> list[CrossingPoint]:
    """Crossings for n = 0 .. n_max via the Kummer system, with each
    solution seeding the next (linear extrapolation of eta_star)."""
    points: list[CrossingPoint] = []
    for n in range(n_max + 1):
        if len(points) >= 2:
            eta_seed = 2.0 * points[-1].eta_star - points[-2].eta_star
            x_seed = 0.5 * saint_james_beta(n, eta_seed)
            seed = (x_seed, 0.5 * (1.0 - eta_seed))
        elif points:
            eta_seed = points[-1].eta_star
            seed = (0.5 * saint_james_beta(n, eta_seed), 0.5 * (1.0 - eta_seed))
        else:
            seed = None
        points.append(crossing_by_system(n, config, seed=seed))
    return points


def eta_prime(n: int, beta: float, config: SolverConfig = DEFAULT_CONFIG) -> float:
    """d eta / d beta from the boundary-trace (Dauge-Helffer) formula."""
    point = lowest_eigenvalue(n, beta, config)
    trace = eigenfunction(point, config).boundary_trace
    boundary_q = (n / math.sqrt(beta) - 0.5 * math.sqrt(beta)) ** 2
    return 0.5 * (trace ** 2 / beta) * (boundary_q - point.eta)


def interlacing_check(n: int, config: SolverConfig = DEFAULT_CONFIG,
                      crossing: CrossingPoint | None = None) -> tuple[float, float]:
    """(eta'(n, beta_n), eta'(n+1, beta_n)): positive and negative at a
    crossing, which is what forces beta_min(n) < beta_n < beta_min(n+1)."""
    point = crossing if crossing is not None else crossing_by_system(n, config)
    return (eta_prime(n, point.beta_n, config),
            eta_prime(n + 1, point.beta_n, config))
