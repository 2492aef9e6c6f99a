"""The flip set S and its partition identity.

Each element of S replaces every linear factor x_j of x^beta, beta = (m,...,m),
by x_j or 1 - x_j.  Elements that keep the same number of unflipped factors on
every axis give the same product, so S is stored collapsed: one ``SigmaTerm``
per retention vector k in {0..m}^N with multiplicity prod_j C(m, k_j).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache

from .errors import ConfigurationError
from .polyalgebra import Polynomial, mul

MAX_TERMS = 4096


@dataclass(frozen=True)
class SigmaTerm:
    retention: tuple[int, ...]
    m: int

    def __post_init__(self):
        if self.m < 1:
            raise ConfigurationError("order m must be >= 1")
        if not self.retention or any(not 0 <= k <= self.m for k in self.retention):
            raise ConfigurationError(f"retention {self.retention} outside [0, {self.m}]")

    @property
    def dimension(self) -> int:
        return len(self.retention)

    @property
    def multiplicity(self) -> int:
        return math.prod(math.comb(self.m, k) for k in self.retention)


def enumerate_sigma(m: int, dimension: int, max_terms: int = MAX_TERMS) -> list[SigmaTerm]:
    if m < 1 or dimension < 1:
        raise ConfigurationError("need m >= 1 and dimension >= 1")
    if (m + 1) ** dimension > max_terms:
        raise ConfigurationError(f"(m+1)^N = {(m + 1) ** dimension} exceeds limit {max_terms}")
    return [SigmaTerm(k, m) for k in itertools.product(range(m + 1), repeat=dimension)]


def _axis_factor(axis: int, dimension: int, flipped: bool) -> Polynomial:
    x = Polynomial.variable(axis, dimension)
    return 1 - x if flipped else x


@lru_cache(maxsize=None)
def weight_polynomial(t: SigmaTerm) -> Polynomial:
    """prod_j x_j^k_j (1-x_j)^(m-k_j), multiplicity not included."""
    out = Polynomial.constant(1, t.dimension)
    for j, k in enumerate(t.retention):
        out = mul(out, _axis_factor(j, t.dimension, False) ** k)
        out = mul(out, _axis_factor(j, t.dimension, True) ** (t.m - k))
    return out


def collapsed_sum(m: int, dimension: int) -> Polynomial:
    out = Polynomial.zero(dimension)
    for t in enumerate_sigma(m, dimension):
        out = out + weight_polynomial(t).scale(t.multiplicity)
    return out


def raw_sum(m: int, dimension: int) -> Polynomial:
    """Sum over all 2^(Nm) flip patterns, one linear factor at a time."""
    out = Polynomial.zero(dimension)
    slots = [j for j in range(dimension) for _ in range(m)]
    for pattern in itertools.product((False, True), repeat=len(slots)):
        prod = Polynomial.constant(1, dimension)
        for axis, flipped in zip(slots, pattern):
            prod = mul(prod, _axis_factor(axis, dimension, flipped))
        out = out + prod
    return out


def verify_identity(m: int, dimension: int) -> float:
    """Max-abs coefficient residual of (sum_S sigma(x^beta)) - 1."""
    return (collapsed_sum(m, dimension) - 1).coefficient_norm()
