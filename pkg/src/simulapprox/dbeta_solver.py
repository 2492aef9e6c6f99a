"""Solve D^beta[w_t * P] = Q for P by eliminating the top monomial first.

For a weight w_t = prod_j x_j^k_j (1-x_j)^(m-k_j) and beta = (m,...,m),

    D^beta[w_t x^gamma] = lc(t, gamma) x^gamma + (terms x^e with e < gamma),

lc(t, gamma) = prod_j (-1)^(m-k_j) (m+gamma_j)!/gamma_j!, so the operator is
triangular in graded-lex order with a nonzero diagonal.
"""

from __future__ import annotations

import heapq
import math
from fractions import Fraction
from functools import lru_cache

from .errors import InputError, NumericalFailure
from .polyalgebra import MultiIndex, Polynomial, differentiate, multi_index, mul
from .sigma_partition import SigmaTerm, weight_polynomial

MAX_EXPONENT = 170
SOLVE_RTOL = 1e-8


def beta_index(m: int, dimension: int) -> MultiIndex:
    return (m,) * dimension


def apply_dbeta_w(t: SigmaTerm, p: Polynomial) -> Polynomial:
    """D^beta of w_t * p by plain multiplication and differentiation."""
    return differentiate(mul(weight_polynomial(t), p), beta_index(t.m, t.dimension))


def leading_constant(t: SigmaTerm, gamma) -> int:
    gamma = multi_index(gamma)
    if len(gamma) != t.dimension:
        raise InputError(f"gamma {gamma} has wrong dimension for {t}")
    if max(gamma) > MAX_EXPONENT:
        raise InputError(f"exponent {max(gamma)} exceeds cap {MAX_EXPONENT}")
    return math.prod((-1) ** (t.m - k) * math.perm(t.m + g, t.m)
                     for k, g in zip(t.retention, gamma))


@lru_cache(maxsize=None)
def _image_1d(k: int, m: int, g: int) -> tuple[tuple[int, int], ...]:
    # D^m [x^(g+k) (1-x)^(m-k)] as (exponent, coefficient) pairs
    out = []
    for i in range(m - k + 1):
        e = g + k + i
        if e >= m:
            out.append((e - m, math.comb(m - k, i) * (-1) ** i * math.perm(e, m)))
    return tuple(out)


def _image(t: SigmaTerm, gamma: MultiIndex) -> list[tuple[MultiIndex, int]]:
    terms = [((), 1)]
    for k, g in zip(t.retention, gamma):
        terms = [(e + (a,), c * b) for e, c in terms for a, b in _image_1d(k, t.m, g)]
    return terms


def _heap_key(e: MultiIndex):
    return (-sum(e), tuple(-x for x in e))


def solve(t: SigmaTerm, q: Polynomial, rtol: float = SOLVE_RTOL) -> Polynomial:
    """Return P with D^beta[w_t P] = q.

    The residual is swept from its graded-lex top monomial downwards.  The result
    is then checked against an independent multiply-and-differentiate pass;
    a relative residual above ``rtol`` raises NumericalFailure.
    """
    if q.dimension != t.dimension:
        raise InputError(f"polynomial dimension {q.dimension} != term dimension {t.dimension}")
    if max(q.axis_degrees()) > MAX_EXPONENT:
        raise InputError(f"degree exceeds cap {MAX_EXPONENT}")
    residual = dict(q.items())
    heap = [_heap_key(e) for e in residual]
    heapq.heapify(heap)
    solution = {}
    while heap:
        key = heapq.heappop(heap)
        gamma = tuple(-x for x in key[1])
        c = residual.pop(gamma, 0)
        if c == 0:
            continue
        lead = leading_constant(t, gamma)
        coef = Fraction(c, lead) if not isinstance(c, float) else c / lead
        solution[gamma] = coef
        for e, v in _image(t, gamma):
            if e == gamma:
                continue
            if e not in residual:
                heapq.heappush(heap, _heap_key(e))
                residual[e] = 0
            residual[e] -= coef * v
    p = Polynomial(t.dimension, solution)
    check = (apply_dbeta_w(t, p) - q).coefficient_norm()
    if check > rtol * q.coefficient_norm():
        raise NumericalFailure(
            f"solver residual {check:.3e} exceeds tolerance for retention {t.retention}",
            residual=check, sigma=t.retention)
    return p
