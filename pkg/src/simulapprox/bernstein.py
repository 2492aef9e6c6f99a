"""Bernstein operator on [0,1]^N, expanded to the monomial basis.

B_n[f](x) = sum_k f(k/n) prod_j C(n,k_j) x_j^k_j (1-x_j)^(n-k_j)

The basis change uses exact integer binomials.  With ``exact=True`` (default)
samples enter as their exact binary values and the result carries ``Fraction``
coefficients; this is what keeps degrees beyond ~30 usable, because rounding
noise in the samples is amplified by roughly 3^n in monomial coefficients.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Callable

import numpy as np

from .errors import ConfigurationError, InputError
from .grid import GridSpec, evaluate_on_grid
from .polyalgebra import Polynomial

MAX_DEGREE = 64
MAX_DIMENSION = 3

Evaluatable = Callable[[np.ndarray], np.ndarray]


@lru_cache(maxsize=None)
def _basis_change(n: int) -> tuple[tuple[int, ...], ...]:
    # row k: monomial coefficients of C(n,k) x^k (1-x)^(n-k)
    rows = []
    for k in range(n + 1):
        row = [0] * (n + 1)
        for j in range(k, n + 1):
            row[j] = math.comb(n, k) * math.comb(n - k, j - k) * (-1) ** (j - k)
        rows.append(tuple(row))
    return tuple(rows)


def basis_change_matrix(n: int, dtype=object) -> np.ndarray:
    return np.array(_basis_change(n), dtype=dtype)


def sample_nodes(n: int, dimension: int) -> np.ndarray:
    return GridSpec(n + 1).points(dimension)


def _check(n: int, dimension: int, max_degree: int) -> None:
    if not 1 <= n <= max_degree:
        raise ConfigurationError(f"Bernstein degree {n} outside [1, {max_degree}]")
    if not 1 <= dimension <= MAX_DIMENSION:
        raise ConfigurationError(f"dimension {dimension} outside [1, {MAX_DIMENSION}]")


def bernstein_approximate(f: Evaluatable, n: int, dimension: int, *,
                          exact: bool = True, max_degree: int = MAX_DEGREE) -> Polynomial:
    """Monomial-form B_n[f] for f vectorized over points of shape (M, N)."""
    _check(n, dimension, max_degree)
    values = np.asarray(f(sample_nodes(n, dimension)), dtype=float).reshape((n + 1,) * dimension)
    if not np.all(np.isfinite(values)):
        raise InputError("non-finite sample value in Bernstein operator")
    return from_samples(values, exact=exact)


def from_samples(values: np.ndarray, *, exact: bool = True) -> Polynomial:
    """Monomial-form Bernstein polynomial from a sample tensor of shape (n+1,)*N."""
    dimension = values.ndim
    n = values.shape[0] - 1
    if exact:
        ratios = [v.as_integer_ratio() for v in values.ravel().tolist()]
        shift = max(d.bit_length() - 1 for _, d in ratios)
        ints = np.empty(len(ratios), dtype=object)
        for i, (num, den) in enumerate(ratios):
            ints[i] = num << (shift - (den.bit_length() - 1))
        coef = ints.reshape(values.shape)
        change = basis_change_matrix(n)
    else:
        coef = values.astype(float)
        change = basis_change_matrix(n, dtype=float)
    for _ in range(dimension):
        coef = np.tensordot(coef, change, axes=([0], [0]))
    terms = {}
    scale = 1 << shift if exact else None
    for e in np.ndindex(coef.shape):
        c = coef[e]
        if c == 0:
            continue
        terms[e] = Fraction(int(c), scale) if exact else float(c)
    return Polynomial(dimension, terms)


def sup_error(f: Evaluatable, p: Polynomial, grid: GridSpec) -> float:
    """Grid max of |f - p|; a lower bound for the sup norm on the cube."""
    pts = grid.points(p.dimension)
    diff = np.asarray(f(pts), dtype=float) - evaluate_on_grid(p, grid)
    return float(np.max(np.abs(diff)))
