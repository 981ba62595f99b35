"""De Gennes constants and the second-order perturbation profile.

The half-line Neumann oscillator h0(xi) = -d^2/dt^2 + (t+xi)^2 has a
unique non-degenerate minimum of its ground energy over xi; the minimum
value is the De Gennes constant Theta0, the minimizer xi0 satisfies
Theta0 = xi0^2, and the normalized ground state u0 fixes C1 = u0(0)^2/3.

The boundary-layer expansion of the disk eigenvalues is driven by the
operator family h0 + b^{-1/2} h1 + b^{-1} h2 with

    h1 = d/dt + 2 (t+xi0)(delta - t^2/2) + 2 t (t+xi0)^2,
    h2 = t d/dt + (delta - t^2/2)^2 + 4 t (t+xi0)(delta - t^2/2)
         + 3 t^2 (t+xi0)^2.

Second-order perturbation theory in b^{-1/2} gives a quadratic-in-delta
coefficient lambda2(delta); its vertex delta0 and offset C0 are computed
here by solving the regularized-resolvent equation for the first
corrector u1 on the finite-difference grid, with the orthogonality
constraint handled by a bordered (arrowhead) linear solve.

Everything is reported through the same two-grid Richardson policy as
the underlying eigensolves.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from .config import DEFAULT_CONFIG, SolverConfig
from .errors import IllConditioned, InvalidParams, MinimizationFailure
from .fd import Grid1D, assemble_degennes_system, solve_smallest

_XI_BRACKET = (-2.0, 0.0)  # Theta0 = xi0^2 in (0,1) forces xi0 in (-1, 0)
_XI_XATOL = 1e-8


@dataclass(frozen=True)
class DeGennesConstants:
    """Computed constants of the half-line model problem.

    delta0_formula is the closed-form value (1/2) Theta0^{-1/2} C1 coming
    from matching the crossing asymptotics with the Saint-James relation;
    delta0_fit and c0_fit are read off the quadratic fit of the computed
    lambda2 profile.  Unfilled fields are NaN.
    """

    theta0: float = math.nan
    xi0: float = math.nan
    c1: float = math.nan
    u0_trace: float = math.nan
    delta0_formula: float = math.nan
    delta0_fit: float = math.nan
    c0_fit: float = math.nan
    lambda1_check: float = math.nan

    def validate(self, const_tol: float) -> None:
        if not 0.0 < self.theta0 < 1.0 or not self.xi0 < 0.0:
            raise InvalidParams("constants out of theoretical range")
        if abs(self.theta0 - self.xi0 ** 2) > const_tol:
            raise InvalidParams(
                f"Theta0 - xi0^2 = {self.theta0 - self.xi0**2:.2e} beyond tolerance")
        if math.isfinite(self.delta0_fit):
            if abs(self.delta0_fit - self.delta0_formula) > const_tol:
                raise InvalidParams(
                    f"delta0 fit {self.delta0_fit:.6f} vs formula "
                    f"{self.delta0_formula:.6f} disagree")


def _grid_pair(config: SolverConfig) -> tuple[Grid1D, Grid1D]:
    coarse = Grid1D(0.0, config.degennes_L, config.degennes_grid_count)
    return coarse, coarse.refined()


def _richardson(fine: float, coarse: float) -> float:
    return fine + (fine - coarse) / 3.0


def lambda_dg(xi: float, config: SolverConfig = DEFAULT_CONFIG) -> float:
    """Ground energy of the half-line Neumann oscillator at shift xi."""
    coarse, fine = _grid_pair(config)
    lam_c, _ = solve_smallest(assemble_degennes_system(xi, coarse))
    lam_f, _ = solve_smallest(assemble_degennes_system(xi, fine))
    return _richardson(lam_f, lam_c)


def _stationarity(xi: float, config: SolverConfig) -> float:
    """<u0(xi), (t+xi) u0(xi)> = (1/2) d lambda_dg / d xi (Feynman-Hellmann)."""
    out = []
    for grid in _grid_pair(config):
        _, u0 = solve_smallest(assemble_degennes_system(xi, grid))
        t = grid.nodes()[:-1]
        mass = np.full_like(t, grid.spacing)
        mass[0] = 0.5 * grid.spacing
        out.append(float(np.sum(u0 * (t + xi) * u0 * mass)))
    return _richardson(out[1], out[0])


def minimize_theta0(config: SolverConfig = DEFAULT_CONFIG) -> DeGennesConstants:
    """Minimize xi -> lambda_dg(xi); fill theta0, xi0, u0(0), C1, delta0.

    The scalar minimizer only localizes the flat quadratic minimum to
    ~1e-5, so its output is polished by a root solve of the first-order
    stationarity condition, which has an O(1) slope.
    """
    res = minimize_scalar(lambda xi: lambda_dg(xi, config), bounds=_XI_BRACKET,
                          method="bounded", options={"xatol": _XI_XATOL})
    xi_rough = float(res.x)
    if min(xi_rough - _XI_BRACKET[0], _XI_BRACKET[1] - xi_rough) < 10.0 * _XI_XATOL:
        raise MinimizationFailure(f"minimizer {xi_rough} stuck at bracket endpoint")
    halfwidth = 1e-3
    while _stationarity(xi_rough - halfwidth, config) \
            * _stationarity(xi_rough + halfwidth, config) > 0.0:
        halfwidth *= 4.0
        if halfwidth > 0.5:
            raise MinimizationFailure("stationarity polish lost its bracket")
    xi0 = float(brentq(lambda xi: _stationarity(xi, config),
                       xi_rough - halfwidth, xi_rough + halfwidth, xtol=1e-12))
    theta0 = lambda_dg(xi0, config)

    coarse, fine = _grid_pair(config)
    _, u_c = solve_smallest(assemble_degennes_system(xi0, coarse))
    _, u_f = solve_smallest(assemble_degennes_system(xi0, fine))
    u0_trace = float(_richardson(u_f[0], u_c[0]))
    c1 = u0_trace ** 2 / 3.0
    return DeGennesConstants(
        theta0=theta0,
        xi0=xi0,
        c1=c1,
        u0_trace=u0_trace,
        delta0_formula=0.5 * c1 / math.sqrt(theta0),
    )


def _derivative(u: np.ndarray, h: float) -> np.ndarray:
    """du/dt: central interior, second-order one-sided at the endpoints."""
    du = np.empty_like(u)
    du[1:-1] = (u[2:] - u[:-2]) / (2.0 * h)
    du[0] = (-3.0 * u[0] + 4.0 * u[1] - u[2]) / (2.0 * h)
    du[-1] = (3.0 * u[-1] - 4.0 * u[-2] + u[-3]) / (2.0 * h)
    return du


def _apply_h1(u: np.ndarray, t: np.ndarray, h: float, xi: float,
              delta: float) -> np.ndarray:
    shifted = t + xi
    pot = 2.0 * shifted * (delta - 0.5 * t * t) + 2.0 * t * shifted ** 2
    return _derivative(u, h) + pot * u


def _apply_h2(u: np.ndarray, t: np.ndarray, h: float, xi: float,
              delta: float) -> np.ndarray:
    shifted = t + xi
    well = delta - 0.5 * t * t
    pot = well ** 2 + 4.0 * t * shifted * well + 3.0 * t * t * shifted ** 2
    return t * _derivative(u, h) + pot * u


def _on_grids(config: SolverConfig, xi: float, func):
    """Richardson-combine func(t, h, u0, mass) over the two-grid pair."""
    out = []
    for grid in _grid_pair(config):
        _, u0 = solve_smallest(assemble_degennes_system(xi, grid))
        t = grid.nodes()[:-1]
        h = grid.spacing
        mass = np.full_like(t, h)
        mass[0] = 0.5 * h
        out.append(func(t, h, u0, mass))
    return _richardson(out[1], out[0])


def stationarity_check(constants: DeGennesConstants,
                       config: SolverConfig = DEFAULT_CONFIG,
                       xi: float | None = None) -> float:
    """<u0, (t+xi) u0>: vanishes at xi0 by first-order stationarity."""
    xi = constants.xi0 if xi is None else xi
    return _on_grids(
        config, xi,
        lambda t, h, u0, mass: float(np.sum(u0 * (t + xi) * u0 * mass)))


def lambda1_check(constants: DeGennesConstants,
                  config: SolverConfig = DEFAULT_CONFIG,
                  delta: float = 0.0) -> float:
    """<u0, h1 u0>; equals -C1, independently of delta (stationarity)."""
    xi = constants.xi0
    return _on_grids(
        config, xi,
        lambda t, h, u0, mass: float(
            np.sum(u0 * _apply_h1(u0, t, h, xi, delta) * mass)))


def boundary_pairing_check(constants: DeGennesConstants,
                           config: SolverConfig = DEFAULT_CONFIG) -> tuple[float, float]:
    """(<u0, u0'>, -u0(0)^2/2): equal by integration by parts."""
    lhs = _on_grids(
        config, constants.xi0,
        lambda t, h, u0, mass: float(np.sum(u0 * _derivative(u0, h) * mass)))
    return lhs, -0.5 * constants.u0_trace ** 2


class _BorderedSolver:
    """O(N) solver for [[K, c], [c^T, 0]] [u; mu] = [f; 0], K tridiagonal.

    K = A - lam0 M is singular exactly along the ground state, but its
    leading principal minors are positive (strict Cauchy interlacing of
    tridiagonal eigenvalues), so unpivoted elimination is stable through
    column N-2; the near-singular corner is solved as a pivoted 2x2
    block together with the border row.  This realizes the regularized
    resolvent with the orthogonality constraint exactly.
    """

    def __init__(self, kd: np.ndarray, ke: np.ndarray, c: np.ndarray):
        size = len(kd)
        dhat = np.empty(size)
        chat = np.empty(size)
        mults = np.zeros(size)
        dhat[0] = kd[0]
        chat[0] = c[0]
        for i in range(1, size):
            m = ke[i - 1] / dhat[i - 1]
            mults[i] = m
            dhat[i] = kd[i] - m * ke[i - 1]
            chat[i] = c[i] - m * chat[i - 1]
        # eliminate the border row against pivots 0 .. N-2
        bmults = np.empty(size - 1)
        s = 0.0
        b_cur = c[0]
        for i in range(size - 1):
            m = b_cur / dhat[i]
            bmults[i] = m
            s -= m * chat[i]
            b_cur = c[i + 1] - m * ke[i]
        self.ke = ke
        self.dhat = dhat
        self.chat = chat
        self.mults = mults
        self.bmults = bmults
        self.corner = (dhat[-1], chat[-1], b_cur, s)

    def solve(self, f: np.ndarray) -> tuple[np.ndarray, float]:
        size = len(f)
        fhat = np.empty(size)
        fhat[0] = f[0]
        mults = self.mults
        for i in range(1, size):
            fhat[i] = f[i] - mults[i] * fhat[i - 1]
        g = -float(np.dot(self.bmults, fhat[:-1]))
        # pivoted 2x2 in (u_{N-1}, mu)
        a11, a12, a21, a22 = self.corner
        det = a11 * a22 - a12 * a21
        if det == 0.0:
            raise IllConditioned("bordered system exactly singular")
        u_last = (a22 * fhat[-1] - a12 * g) / det
        mu = (a11 * g - a21 * fhat[-1]) / det
        u = np.empty(size)
        u[-1] = u_last
        dhat, chat, ke = self.dhat, self.chat, self.ke
        for i in range(size - 2, -1, -1):
            u[i] = (fhat[i] - ke[i] * u[i + 1] - chat[i] * mu) / dhat[i]
        return u, mu


class _PerturbationWorkspace:
    """Per-grid state shared by all delta values of the lambda2 profile."""

    def __init__(self, xi: float, grid: Grid1D):
        self.system = assemble_degennes_system(xi, grid)
        self.lam0, self.u0 = solve_smallest(self.system)
        self.t = grid.nodes()[:-1]
        self.h = grid.spacing
        self.mass = self.system.mass
        self.xi = xi
        kd = self.system.diag - self.lam0 * self.mass
        self.bordered = _BorderedSolver(kd, self.system.offdiag, self.mass * self.u0)

    def solve_corrector(self, rhs: np.ndarray) -> np.ndarray:
        """u1 with (h0 - lam0) u1 = rhs, <u0, u1> = 0; residual-checked."""
        mrhs = self.mass * rhs
        u1, mu = self.bordered.solve(mrhs)
        residual = (self.system.diag - self.lam0 * self.mass) * u1 \
            + mu * self.mass * self.u0 - mrhs
        residual[:-1] += self.system.offdiag * u1[1:]
        residual[1:] += self.system.offdiag * u1[:-1]
        rel = np.linalg.norm(residual) / max(np.linalg.norm(mrhs), 1e-300)
        if rel > 1e-8:
            raise IllConditioned(f"bordered corrector solve residual {rel:.2e}")
        return u1

    def lambda2(self, delta: float) -> float:
        u0, t, h, xi, mass = self.u0, self.t, self.h, self.xi, self.mass
        h1_u0 = _apply_h1(u0, t, h, xi, delta)
        lam1 = float(np.sum(u0 * h1_u0 * mass))
        u1 = self.solve_corrector(-(h1_u0 - lam1 * u0))
        lam21 = float(np.sum(u0 * _apply_h2(u0, t, h, xi, delta) * mass))
        lam22 = float(np.sum(u0 * (_apply_h1(u1, t, h, xi, delta) - lam1 * u1) * mass))
        return lam21 + lam22


@dataclass(frozen=True)
class Lambda2Fit:
    """Quadratic fit lambda2(delta) ~ leading * ((delta - delta0)^2 + c0)."""

    delta0_fit: float
    c0_fit: float
    leading_coeff: float
    deltas: tuple[float, ...]
    values: tuple[float, ...]
    values_coarse: tuple[float, ...]


def lambda2_profile(delta_grid, constants: DeGennesConstants,
                    config: SolverConfig = DEFAULT_CONFIG) -> Lambda2Fit:
    """Second-order coefficient lambda2(delta) on a delta grid, plus the fit.

    The corrector u1 is recomputed at every delta (its delta-dependence
    matters for the quadratic).  Values are two-grid Richardson combined
    before the least-squares fit.
    """
    deltas = np.asarray(list(delta_grid), dtype=float)
    if len(deltas) < 5 or deltas.min() > -1.0 or deltas.max() < 1.0:
        raise InvalidParams("delta grid needs >= 5 points spanning [-1, 1]")
    coarse, fine = _grid_pair(config)
    work_c = _PerturbationWorkspace(constants.xi0, coarse)
    work_f = _PerturbationWorkspace(constants.xi0, fine)
    vals_c = np.array([work_c.lambda2(d) for d in deltas])
    vals_f = np.array([work_f.lambda2(d) for d in deltas])
    vals = _richardson(vals_f, vals_c)

    c2, c1_coef, c0_coef = np.polyfit(deltas, vals, 2)
    delta0_fit = -c1_coef / (2.0 * c2)
    c0_fit = c0_coef / c2 - delta0_fit ** 2
    return Lambda2Fit(
        delta0_fit=float(delta0_fit),
        c0_fit=float(c0_fit),
        leading_coeff=float(c2),
        deltas=tuple(float(d) for d in deltas),
        values=tuple(float(v) for v in vals),
        values_coarse=tuple(float(v) for v in vals_c),
    )


def compute_constants(config: SolverConfig = DEFAULT_CONFIG,
                      delta_grid=None) -> DeGennesConstants:
    """Full constants record: minimization, lambda1 check and lambda2 fit."""
    constants = minimize_theta0(config)
    fit = lambda2_profile(
        delta_grid if delta_grid is not None else np.linspace(-1.0, 1.0, 9),
        constants, config)
    constants = replace(
        constants,
        delta0_fit=fit.delta0_fit,
        c0_fit=fit.c0_fit,
        lambda1_check=float(lambda1_check(constants, config)),
    )
    constants.validate(config.const_tol)
    return constants
