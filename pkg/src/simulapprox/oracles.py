"""Derivative oracles: functions that supply D^gamma u at arbitrary points.

An oracle is evaluated on arrays of points of shape (M, N) and returns (M,)
values.  Finite differences are useless at the orders the pipeline needs
(up to N*m), so every built-in function ships closed-form mixed partials.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import InputError
from .polyalgebra import MultiIndex, Polynomial, differentiate, evaluate_many, multi_index

DerivativeFn = Callable[[MultiIndex, np.ndarray], np.ndarray]


@dataclass(frozen=True)
class DerivativeOracle:
    """u together with D^gamma u for every |gamma| <= max_order (None: unlimited)."""

    dimension: int
    fn: DerivativeFn
    max_order: int | None = None
    name: str = "oracle"

    def supports(self, gamma) -> bool:
        return self.max_order is None or sum(gamma) <= self.max_order

    def eval(self, gamma, points) -> np.ndarray:
        gamma = multi_index(gamma)
        if len(gamma) != self.dimension:
            raise InputError(f"derivative {gamma} for a {self.dimension}-dimensional oracle")
        if not self.supports(gamma):
            raise InputError(f"{self.name} provides derivatives up to order {self.max_order}, "
                             f"asked for {gamma}")
        pts = np.asarray(points, dtype=float)
        flat = pts.reshape(-1, self.dimension)
        out = np.asarray(self.fn(gamma, flat), dtype=float)
        return np.broadcast_to(out, flat.shape[:1]).reshape(pts.shape[:-1])

    def __call__(self, points) -> np.ndarray:
        return self.eval((0,) * self.dimension, points)

    def partial(self, gamma) -> Callable[[np.ndarray], np.ndarray]:
        """The derivative D^gamma u as a plain evaluatable."""
        gamma = multi_index(gamma)
        return lambda pts: self.eval(gamma, pts)


# -- combinators ------------------------------------------------------------

def polynomial_oracle(p: Polynomial, name: str = "polynomial") -> DerivativeOracle:
    cache: dict = {}

    def fn(gamma, pts):
        if gamma not in cache:
            cache[gamma] = differentiate(p, gamma)
        return evaluate_many(cache[gamma], pts)

    return DerivativeOracle(p.dimension, fn, None, name)


def linear_combination(pairs, name: str = "combination") -> DerivativeOracle:
    """sum_i c_i u_i for (c_i, u_i) pairs over a common dimension."""
    pairs = list(pairs)
    dim = pairs[0][1].dimension
    orders = [u.max_order for _, u in pairs if u.max_order is not None]

    def fn(gamma, pts):
        return sum(c * u.eval(gamma, pts) for c, u in pairs)

    return DerivativeOracle(dim, fn, min(orders) if orders else None, name)


def weighted(w: Polynomial, u: DerivativeOracle, name: str = "weighted") -> DerivativeOracle:
    """w * u with derivatives by the Leibniz rule; w's derivatives are exact."""
    if w.dimension != u.dimension:
        raise InputError("weight and oracle dimensions differ")
    wcache: dict = {}

    def dw(delta):
        if delta not in wcache:
            wcache[delta] = differentiate(w, delta)
        return wcache[delta]

    def fn(gamma, pts):
        total = np.zeros(len(pts))
        for delta in np.ndindex(*(g + 1 for g in gamma)):
            wd = dw(delta)
            if wd.is_zero():
                continue
            rest = tuple(g - d for g, d in zip(gamma, delta))
            coef = math.prod(math.comb(g, d) for g, d in zip(gamma, delta))
            total += coef * evaluate_many(wd, pts) * u.eval(rest, pts)
        return total

    return DerivativeOracle(u.dimension, fn, u.max_order, name)


# -- built-in suite ---------------------------------------------------------

def constant(value: float, dimension: int) -> DerivativeOracle:
    def fn(gamma, pts):
        return np.full(len(pts), float(value) if not any(gamma) else 0.0)
    return DerivativeOracle(dimension, fn, None, f"constant({value})")


def exp_sum(dimension: int) -> DerivativeOracle:
    """exp(x_1 + ... + x_N); every partial equals the function."""
    return DerivativeOracle(dimension, lambda gamma, pts: np.exp(pts.sum(axis=1)), None, "exp-sum")


def sin_sum(dimension: int) -> DerivativeOracle:
    """sin(pi/2 * (x_1 + ... + x_N))."""
    def fn(gamma, pts):
        k = sum(gamma)
        return (math.pi / 2) ** k * np.sin(math.pi / 2 * pts.sum(axis=1) + k * math.pi / 2)
    return DerivativeOracle(dimension, fn, None, "sin-sum")


def reciprocal_product(dimension: int) -> DerivativeOracle:
    """prod_j 1/(1 + x_j)."""
    def fn(gamma, pts):
        out = np.ones(len(pts))
        for j, k in enumerate(gamma):
            out = out * (-1) ** k * math.factorial(k) / (1.0 + pts[:, j]) ** (k + 1)
        return out
    return DerivativeOracle(dimension, fn, None, "product")


def kink(dimension: int, m: int, center: float = 0.4) -> DerivativeOracle:
    """sum_j |x_j - center|^(m + 1/2): C^m on the cube but not C^(m+1)."""
    a = m + 0.5

    def fn(gamma, pts):
        active = [j for j, k in enumerate(gamma) if k]
        if len(active) > 1:
            return np.zeros(len(pts))
        if not active:
            return np.sum(np.abs(pts - center) ** a, axis=1)
        j = active[0]
        k = gamma[j]
        d = pts[:, j] - center
        falling = math.prod(a - i for i in range(k))
        return falling * np.abs(d) ** (a - k) * np.sign(d) ** k

    return DerivativeOracle(dimension, fn, m, f"kink(m={m})")


def coordinate(axis: int, dimension: int) -> DerivativeOracle:
    return polynomial_oracle(Polynomial.variable(axis, dimension), f"x{axis + 1}")


def bubble(dimension: int) -> DerivativeOracle:
    """prod_j x_j (1 - x_j), zero on the whole boundary of the cube."""
    p = Polynomial.constant(1, dimension)
    for j in range(dimension):
        x = Polynomial.variable(j, dimension)
        p = p * (x - x * x)
    return polynomial_oracle(p, "bubble")


BUILTINS = ("zero", "one", "x1", "x1x2", "bubble", "exp-sum", "sin-sum", "product", "kink")


def builtin(name: str, dimension: int, m: int = 1) -> DerivativeOracle:
    """Look up a built-in oracle; ``m`` only matters for ``kink``."""
    if name == "zero":
        return constant(0.0, dimension)
    if name == "one":
        return constant(1.0, dimension)
    if name == "x1":
        return coordinate(0, dimension)
    if name == "x1x2":
        if dimension < 2:
            raise InputError("x1x2 needs dimension >= 2")
        return polynomial_oracle(Polynomial.monomial((1, 1) + (0,) * (dimension - 2)), "x1x2")
    if name == "bubble":
        return bubble(dimension)
    if name == "exp-sum":
        return exp_sum(dimension)
    if name == "sin-sum":
        return sin_sum(dimension)
    if name == "product":
        return reciprocal_product(dimension)
    if name == "kink":
        return kink(dimension, m)
    raise InputError(f"unknown function {name!r}; choose from {', '.join(BUILTINS)}")


def covers(u: DerivativeOracle, beta) -> bool:
    """True when u supplies every gamma <= beta."""
    return u.max_order is None or u.max_order >= sum(beta)

