"""Grid-level checks of Poincare-type inequalities on the unit cube.

These test, they do not prove: grid sup norms and trapezoidal L^1/L^2 norms are
finite shadows of the true norms, so equality cases are guarded by a relative
slack of ``EQUALITY_SLACK``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError, PreconditionError
from .grid import GridSpec
from .oracles import DerivativeOracle, polynomial_oracle
from .polyalgebra import MultiIndex, Polynomial, multi_index, multi_indices, mul, unit
from .sigma_partition import SigmaTerm, enumerate_sigma, weight_polynomial

EQUALITY_SLACK = 1e-6
TRACE_TOL = 1e-10

P_VALUES = (1, 2, math.inf)


def parse_p(value) -> float:
    if value in ("inf", "Inf", "infinity", math.inf):
        return math.inf
    p = int(value)
    if p not in (1, 2):
        raise ConfigurationError(f"p must be 1, 2 or inf, got {value!r}")
    return p


def lp_norm(f, p, grid: GridSpec, dimension: int) -> float:
    """Grid max for p = inf, tensor trapezoid rule of |f|^p otherwise."""
    p = parse_p(p)
    vals = np.abs(np.asarray(f(grid.points(dimension)), dtype=float))
    if p == math.inf:
        return float(np.max(vals))
    return float((grid.trapezoid_weights(dimension) @ vals ** p) ** (1.0 / p))


def _check_vanishing(u: DerivativeOracle, gamma, grid: GridSpec, axis: int, face: int, **where) -> None:
    pts = grid.points(u.dimension)
    mask = grid.boundary_mask(u.dimension, axis, face)
    vals = np.abs(u.eval(gamma, pts[mask]))
    if vals.size and np.max(vals) > TRACE_TOL:
        i = int(np.argmax(vals))
        raise PreconditionError(
            f"D^{tuple(gamma)} u does not vanish on face x{axis + 1}={face}: "
            f"|value| {vals[i]:.3e} at {tuple(pts[mask][i])}",
            node=tuple(pts[mask][i]), axis=axis, face=face, gamma=tuple(gamma), **where)


@dataclass(frozen=True)
class OrderOneResult:
    lhs: float
    rhs: float
    holds: bool


def check_order_one(u: DerivativeOracle, p, grid: GridSpec) -> OrderOneResult:
    """||u||_p <= ||D_1 u||_p for u vanishing on the face x_1 = 0."""
    dim = u.dimension
    zero = (0,) * dim
    _check_vanishing(u, zero, grid, 0, 0)
    lhs = lp_norm(u.partial(zero), p, grid, dim)
    rhs = lp_norm(u.partial(unit(0, dim)), p, grid, dim)
    return OrderOneResult(lhs, rhs, lhs <= rhs * (1 + EQUALITY_SLACK))


@dataclass(frozen=True)
class TraceChain:
    """gamma_t < gamma_{t+1} < ... < gamma_m with unit steps and one face per step.

    ``faces[i]`` (0 or 1) belongs to the step from ``indices[i]`` to ``indices[i+1]``.
    """

    indices: tuple[MultiIndex, ...]
    faces: tuple[int, ...]

    def __post_init__(self):
        if len(self.indices) < 2 or len(self.faces) != len(self.indices) - 1:
            raise ConfigurationError("a chain needs >= 2 indices and one face per step")
        for a, b in zip(self.indices, self.indices[1:]):
            diff = [y - x for x, y in zip(a, b)]
            if sorted(diff) != [0] * (len(diff) - 1) + [1]:
                raise ConfigurationError(f"{a} -> {b} is not a unit step")
        if any(f not in (0, 1) for f in self.faces):
            raise ConfigurationError("faces must be 0 or 1")

    @classmethod
    def build(cls, start, steps) -> "TraceChain":
        """From a start index and (axis, face) steps."""
        cur = multi_index(start)
        indices, faces = [cur], []
        for axis, face in steps:
            cur = tuple(c + (1 if j == axis else 0) for j, c in enumerate(cur))
            indices.append(cur)
            faces.append(face)
        return cls(tuple(indices), tuple(faces))

    @property
    def low(self) -> MultiIndex:
        return self.indices[0]

    @property
    def high(self) -> MultiIndex:
        return self.indices[-1]

    def links(self):
        """(lower index, axis, face) for every step."""
        for a, b, face in zip(self.indices, self.indices[1:], self.faces):
            axis = next(j for j, (x, y) in enumerate(zip(a, b)) if y != x)
            yield a, axis, face


@dataclass
class ConstantTracker:
    """Running maximum of observed ratios per (N, m, t, p) configuration."""

    maxima: dict = field(default_factory=dict)

    def observe(self, key, ratio: float) -> float:
        if math.isfinite(ratio):
            self.maxima[key] = max(self.maxima.get(key, 0.0), ratio)
        return self.maxima.get(key, math.nan)


@dataclass(frozen=True)
class DetailedResult:
    lhs: float
    rhs: float
    ratio: float
    constant: float
    degenerate: bool = False


def check_detailed(u: DerivativeOracle, chain: TraceChain, p, grid: GridSpec,
                   tracker: ConstantTracker | None = None) -> DetailedResult:
    """Ratio ||D^low u||_p / ||D^high u||_p under the chain's face conditions.

    Each step of the chain applies the order-one inequality to D^gamma u along
    the step's axis, so D^gamma u for the lower end of every step must vanish
    on the declared face.
    """
    tracker = tracker if tracker is not None else ConstantTracker()
    dim = u.dimension
    for i, (gamma, axis, face) in enumerate(chain.links()):
        _check_vanishing(u, gamma, grid, axis, face, link=i)
    num = lp_norm(u.partial(chain.low), p, grid, dim)
    den = lp_norm(u.partial(chain.high), p, grid, dim)
    key = (dim, sum(chain.high), sum(chain.low), parse_p(p))
    if den == 0.0:
        return DetailedResult(num, den, math.nan, tracker.maxima.get(key, math.nan), degenerate=True)
    ratio = num / den
    return DetailedResult(num, den, ratio, tracker.observe(key, ratio))


def weight_chain(t: SigmaTerm, alpha) -> TraceChain:
    """A chain from alpha up to (m,...,m) whose face conditions hold for w_t * q.

    w_t vanishes to order k_j on x_j = 0 and m - k_j on x_j = 1, so a step on
    axis j from order r needs r < k_j (face 0) or r < m - k_j (face 1).
    """
    alpha = multi_index(alpha)
    steps = []
    for j, (a, k) in enumerate(zip(alpha, t.retention)):
        for r in range(a, t.m):
            if r < k:
                steps.append((j, 0))
            elif r < t.m - k:
                steps.append((j, 1))
            else:
                raise PreconditionError(
                    f"retention {t.retention}: no vanishing face for order {r} on axis {j + 1}",
                    axis=j, order=r)
    return TraceChain.build(alpha, steps)


@dataclass(frozen=True)
class StandardResult:
    lhs: float
    rhs: float
    ratio: float
    degenerate: bool = False


def check_standard(u: DerivativeOracle, m: int, p, grid: GridSpec) -> StandardResult:
    """sum_{|a|<m} ||D^a u||_p against sum_{|a|=m} ||D^a u||_p."""
    dim = u.dimension
    for gamma in multi_indices(dim, m - 1):
        for axis in range(dim):
            for face in (0, 1):
                _check_vanishing(u, gamma, grid, axis, face)
    lower = [a for a in multi_indices(dim, m) if sum(a) < m]
    top = [a for a in multi_indices(dim, m) if sum(a) == m]
    lhs = sum(lp_norm(u.partial(a), p, grid, dim) for a in lower)
    rhs = sum(lp_norm(u.partial(a), p, grid, dim) for a in top)
    if rhs == 0.0:
        return StandardResult(lhs, rhs, math.nan, degenerate=True)
    return StandardResult(lhs, rhs, lhs / rhs)


# -- randomized sweeps --------------------------------------------------------

def random_polynomial(rng: np.random.Generator, dimension: int, degree: int) -> Polynomial:
    """Coefficients uniform in [-1, 1] on every monomial of total degree <= degree."""
    exps = multi_indices(dimension, degree)
    return Polynomial(dimension, dict(zip(exps, rng.uniform(-1.0, 1.0, len(exps)).tolist())))


def case_rng(seed: int, case_id: int) -> np.random.Generator:
    return np.random.default_rng([seed, case_id])


def sweep_order_one(cases: int, p, dimension: int, grid: GridSpec, seed: int = 0,
                    degree: int = 5) -> list[OrderOneResult]:
    """u = x_1 * q for random q of degree <= ``degree``."""
    x1 = Polynomial.variable(0, dimension)
    out = []
    for i in range(cases):
        q = random_polynomial(case_rng(seed, i), dimension, degree)
        out.append(check_order_one(polynomial_oracle(mul(x1, q)), p, grid))
    return out


def sweep_standard(cases: int, m: int, p, dimension: int, grid: GridSpec, seed: int = 0,
                   degree: int = 3) -> list[StandardResult]:
    """u = (prod_j x_j (1 - x_j))^m * q for random q."""
    bubble = Polynomial.constant(1, dimension)
    for j in range(dimension):
        x = Polynomial.variable(j, dimension)
        bubble = mul(bubble, x - mul(x, x))
    base = bubble ** m
    out = []
    for i in range(cases):
        q = random_polynomial(case_rng(seed, i), dimension, degree)
        out.append(check_standard(polynomial_oracle(mul(base, q)), m, p, grid))
    return out


def feasible_weight_chains(m: int, dimension: int) -> list[tuple[SigmaTerm, TraceChain]]:
    """Every (term, chain from alpha to (m,...,m)) with |alpha| <= m whose faces exist."""
    out = []
    for t in enumerate_sigma(m, dimension):
        for alpha in multi_indices(dimension, m):
            if alpha == (m,) * dimension:
                continue
            try:
                out.append((t, weight_chain(t, alpha)))
            except PreconditionError:
                continue
    return out


def sweep_detailed(cases: int, m: int, p, dimension: int, grid: GridSpec, seed: int = 0,
                   degree: int = 3, tracker: ConstantTracker | None = None) -> list[DetailedResult]:
    """u = w_t * q for random q, on a randomly drawn feasible (term, chain) pair."""
    tracker = tracker if tracker is not None else ConstantTracker()
    pairs = feasible_weight_chains(m, dimension)
    out = []
    for i in range(cases):
        rng = case_rng(seed, i)
        t, chain = pairs[int(rng.integers(len(pairs)))]
        q = random_polynomial(rng, dimension, degree)
        u = polynomial_oracle(mul(weight_polynomial(t), q))
        out.append(check_detailed(u, chain, p, grid, tracker))
    return out
