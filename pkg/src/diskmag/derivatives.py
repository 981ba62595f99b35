"""Derivatives of the eigenvalue curves and the conjecture scans.

The Feynman-Hellmann route expresses the beta-derivative through the
boundary trace of the normalized eigenfunction,

    lambda'(n, beta) = lambda/beta
        - (lambda - (n - beta/2)^2) f_{n,beta}(1)^2 / (2 beta),

which costs one eigensolve plus one normalization integral and is
cross-checked against a central difference of lambda(n, .).  At a
crossing the left/right derivatives of the ground-state envelope are
the two branch derivatives; their large-n limits are Theta0 +- (3/2)
C1 |xi0|, which the four-fold Richardson extrapolation verifies.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .config import DEFAULT_CONFIG, SolverConfig
from .crossings import CrossingPoint, crossing_by_system, crossings_range
from .degennes import DeGennesConstants
from .errors import InsufficientData
from .richardson import HalfPowerSequence, richardson_iterate
from .spectrum import eigenfunction, ground_state, lowest_eigenvalue


@dataclass(frozen=True)
class DerivativeRecord:
    """lambda'(n, beta) with its cross-validation gap.

    ``fh_vs_fd_gap`` is |formula - central difference|; NaN when the
    caller skipped the finite-difference check.
    """

    n: int
    beta: float
    dlambda: float
    boundary_trace_sq: float
    fh_vs_fd_gap: float


def lambda_prime(n: int, beta: float, config: SolverConfig = DEFAULT_CONFIG,
                 cross_check: bool = True) -> DerivativeRecord:
    """Feynman-Hellmann derivative of lambda(n, .) at beta."""
    point = lowest_eigenvalue(n, beta, config)
    trace_sq = eigenfunction(point, config).boundary_trace ** 2
    dlam = point.lam / beta \
        - (point.lam - (n - 0.5 * beta) ** 2) * trace_sq / (2.0 * beta)
    gap = math.nan
    if cross_check:
        h = 1e-5 * max(1.0, beta)
        fd = (lowest_eigenvalue(n, beta + h, config).lam
              - lowest_eigenvalue(n, beta - h, config).lam) / (2.0 * h)
        gap = abs(dlam - fd)
    return DerivativeRecord(n, beta, dlam, trace_sq, gap)


def one_sided_derivatives(n: int, config: SolverConfig = DEFAULT_CONFIG,
                          crossing: CrossingPoint | None = None,
                          cross_check: bool = False) -> tuple[float, float]:
    """(lambda'_-, lambda'_+) of the ground-state envelope at beta_n.

    The left derivative is the outgoing branch lambda'(n, beta_n), the
    right one the incoming branch lambda'(n+1, beta_n); monotonicity of
    the envelope needs the right one positive.
    """
    if crossing is None:
        crossing = crossing_by_system(n, config)
    left = lambda_prime(n, crossing.beta_n, config, cross_check).dlambda
    right = lambda_prime(n + 1, crossing.beta_n, config, cross_check).dlambda
    return left, right


@dataclass(frozen=True)
class ScanItem:
    """One conjecture-scan verdict with its extremal witness."""

    name: str
    passed: bool
    extremal: float
    witness: float


@dataclass(frozen=True)
class ConjectureReport:
    items: tuple[ScanItem, ...]

    @property
    def all_passed(self) -> bool:
        return all(item.passed for item in self.items)

    def item(self, name: str) -> ScanItem:
        for it in self.items:
            if it.name == name:
                return it
        raise KeyError(name)


def conjecture_scan(beta_grid, n_max: int, theta0: float,
                    config: SolverConfig = DEFAULT_CONFIG,
                    crossings: list[CrossingPoint] | None = None) -> ConjectureReport:
    """Finite-range evidence for the three open conjectures.

    (a) eta(beta) < Theta0 on the grid; (b) the crossing ratios eta_n*
    increase; (c) the right derivative at every crossing is positive
    (the only candidates for envelope non-monotonicity, since each
    branch is analytic between crossings); (d) the coarse finite
    difference of lambda(beta) on the grid is positive throughout.
    """
    betas = sorted(float(b) for b in beta_grid)
    if len(betas) < 2 or betas[0] <= 0.0:
        raise InsufficientData("beta grid needs >= 2 positive points")
    if crossings is None:
        crossings = crossings_range(n_max, config)

    lams = []
    worst_eta, worst_eta_at = -math.inf, math.nan
    for beta in betas:
        point, _ = ground_state(beta, config)
        lams.append(point.lam)
        gap = point.eta - theta0
        if gap > worst_eta:
            worst_eta, worst_eta_at = gap, beta
    item_a = ScanItem("eta_below_theta0", worst_eta < 0.0, worst_eta, worst_eta_at)

    steps = [(q.eta_star - p.eta_star, p.n)
             for p, q in zip(crossings, crossings[1:])]
    min_step, min_step_at = min(steps)
    item_b = ScanItem("eta_star_increasing", min_step > 0.0, min_step, min_step_at)

    rights = [(lambda_prime(p.n + 1, p.beta_n, config, cross_check=False).dlambda,
               p.n) for p in crossings]
    min_right, min_right_at = min(rights)
    item_c = ScanItem("right_derivative_positive", min_right > 0.0,
                      min_right, min_right_at)

    slopes = [((l2 - l1) / (b2 - b1), 0.5 * (b1 + b2))
              for (b1, l1), (b2, l2) in zip(zip(betas, lams),
                                            zip(betas[1:], lams[1:]))]
    min_slope, min_slope_at = min(slopes)
    item_d = ScanItem("lambda_slope_positive", min_slope > 0.0,
                      min_slope, min_slope_at)

    return ConjectureReport((item_a, item_b, item_c, item_d))


@dataclass(frozen=True)
class DerivativeLimits:
    """R4 limits of the one-sided derivative sequences vs their targets."""

    r4_left: HalfPowerSequence
    r4_right: HalfPowerSequence
    left_limit: float
    right_limit: float
    left_target: float
    right_target: float


def derivative_limits_check(n_list, constants: DeGennesConstants,
                            config: SolverConfig = DEFAULT_CONFIG,
                            crossings: list[CrossingPoint] | None = None,
                            ) -> DerivativeLimits:
    """Extrapolate lambda'(n, beta_n) and lambda'(n+1, beta_n) over n_list
    and compare with Theta0 +- (3/2) C1 |xi0|."""
    indices = sorted(set(int(n) for n in n_list))
    if len(indices) < 2 ** 4 + 1:
        raise InsufficientData(f"need >= 17 indices, got {len(indices)}")
    by_n = {p.n: p for p in crossings} if crossings else {}
    left_pairs, right_pairs = [], []
    for n in indices:
        if n < 1:
            continue
        crossing = by_n.get(n)
        left, right = one_sided_derivatives(n, config, crossing=crossing)
        left_pairs.append((n, left))
        right_pairs.append((n, right))
    r4_left = richardson_iterate(HalfPowerSequence.from_pairs(left_pairs), 4)
    r4_right = richardson_iterate(HalfPowerSequence.from_pairs(right_pairs), 4)
    spread = 1.5 * constants.c1 * abs(constants.xi0)
    return DerivativeLimits(
        r4_left=r4_left,
        r4_right=r4_right,
        left_limit=r4_left.last()[1],
        right_limit=r4_right.last()[1],
        left_target=constants.theta0 + spread,
        right_target=constants.theta0 - spread,
    )
