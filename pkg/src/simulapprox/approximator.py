"""One polynomial whose derivatives up to order m track those of u on [0,1]^N.

For every collapsed flip term t with weight w_t and multiplicity c_t:

    g_t = D^beta[w_t u]              (Leibniz, exact weight derivatives)
    Q_t = B_n[g_t]                   (Bernstein, order-0 approximation)
    P_t = solve(t, Q_t)              so that D^beta[w_t P_t] = Q_t
    P   = sum_t c_t w_t P_t

Since sum_t c_t w_t = 1, u - P = sum_t c_t w_t (u - P_t), and each summand has
D^beta equal to g_t - Q_t while vanishing to the right order on the faces.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import bernstein
from .dbeta_solver import beta_index, solve
from .errors import ConfigurationError, InputError, NumericalFailure
from .grid import GridSpec, default_grid, evaluate_on_grid
from .oracles import DerivativeOracle, covers, weighted
from .polyalgebra import MultiIndex, Polynomial, differentiate, linear_combination, mul, multi_indices
from .sigma_partition import SigmaTerm, enumerate_sigma, weight_polynomial

MAX_ORDER = 3


@dataclass(frozen=True)
class ApproxConfig:
    m: int
    dimension: int
    degree: int
    grid: GridSpec | None = None
    exact: bool = True

    def __post_init__(self):
        if not 1 <= self.m <= MAX_ORDER:
            raise ConfigurationError(f"order m={self.m} outside [1, {MAX_ORDER}]")
        if not 1 <= self.dimension <= bernstein.MAX_DIMENSION:
            raise ConfigurationError(f"dimension {self.dimension} outside [1, {bernstein.MAX_DIMENSION}]")
        if not 1 <= self.degree <= bernstein.MAX_DEGREE:
            raise ConfigurationError(f"degree {self.degree} outside [1, {bernstein.MAX_DEGREE}]")

    @property
    def report_grid(self) -> GridSpec:
        return self.grid or default_grid(self.dimension)


@dataclass
class ErrorReport:
    """Grid sup errors of D^alpha(u - P) for |alpha| <= m, plus per-term Bernstein errors."""

    alpha_errors: dict[MultiIndex, float]
    sigma_errors: dict[tuple[int, ...], float] = field(default_factory=dict)

    @property
    def max_error(self) -> float:
        return max(self.alpha_errors.values())

    @property
    def max_sigma_error(self) -> float:
        return max(self.sigma_errors.values(), default=0.0)

    def to_json(self) -> dict:
        return {
            "alpha_errors": [{"alpha": list(a), "sup_error": e} for a, e in self.alpha_errors.items()],
            "sigma": [{"retention": list(k), "bernstein_error": e} for k, e in self.sigma_errors.items()],
        }


@dataclass(frozen=True)
class SigmaPart:
    term: SigmaTerm
    target: Polynomial       # Q_t
    solution: Polynomial     # P_t
    bernstein_error: float   # grid sup |g_t - Q_t|


def g_sigma(t: SigmaTerm, u: DerivativeOracle):
    """x -> D^beta[w_t u](x) as a vectorized evaluatable."""
    beta = beta_index(t.m, t.dimension)
    if u.dimension != t.dimension:
        raise InputError("oracle and term dimensions differ")
    if not covers(u, beta):
        raise InputError(f"{u.name} supplies order {u.max_order}, pipeline needs {sum(beta)}")
    return weighted(weight_polynomial(t), u).partial(beta)


def sigma_part(t: SigmaTerm, u: DerivativeOracle, cfg: ApproxConfig) -> SigmaPart:
    g = g_sigma(t, u)
    q = bernstein.bernstein_approximate(g, cfg.degree, cfg.dimension, exact=cfg.exact)
    try:
        p = solve(t, q)
    except NumericalFailure as exc:
        exc.sigma = t.retention
        raise
    err = bernstein.sup_error(g, q, cfg.report_grid)
    return SigmaPart(t, q, p, err)


def assemble(solutions: list[tuple[SigmaTerm, Polynomial]]) -> Polynomial:
    """sum_t multiplicity(t) * w_t * P_t."""
    dim = solutions[0][0].dimension
    return linear_combination(
        ((t.multiplicity, mul(weight_polynomial(t), p)) for t, p in solutions), dim)


def error_report(u: DerivativeOracle, p: Polynomial, m: int, grid: GridSpec) -> ErrorReport:
    if u.dimension != p.dimension:
        raise InputError("oracle and polynomial dimensions differ")
    pts = grid.points(p.dimension)
    errors = {}
    for alpha in multi_indices(p.dimension, m):
        diff = u.eval(alpha, pts) - evaluate_on_grid(differentiate(p, alpha), grid)
        errors[alpha] = float(np.max(np.abs(diff)))
    return ErrorReport(errors)


def approximate_parts(u: DerivativeOracle, cfg: ApproxConfig) -> tuple[Polynomial, list[SigmaPart]]:
    if u.dimension != cfg.dimension:
        raise InputError(f"oracle dimension {u.dimension} != configured {cfg.dimension}")
    parts = [sigma_part(t, u, cfg) for t in enumerate_sigma(cfg.m, cfg.dimension)]
    return assemble([(s.term, s.solution) for s in parts]), parts


def approximate(u: DerivativeOracle, cfg: ApproxConfig) -> tuple[Polynomial, ErrorReport]:
    p, parts = approximate_parts(u, cfg)
    report = error_report(u, p, cfg.m, cfg.report_grid)
    report.sigma_errors = {s.term.retention: s.bernstein_error for s in parts}
    return p, report


def domination_constant(report: ErrorReport) -> float:
    """Observed max_alpha error / max_t Bernstein error; nan when both vanish."""
    if report.max_sigma_error == 0.0:
        return float("nan") if report.max_error == 0.0 else float("inf")
    return report.max_error / report.max_sigma_error
