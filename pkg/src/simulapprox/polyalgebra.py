"""Sparse multivariate polynomials in the monomial basis.

A polynomial maps exponent tuples (multi-indices) to coefficients.  Coefficients
may be Python ``int``/``Fraction`` (exact) or ``float``.  Exact coefficients stay
exact through add, mul, differentiate and affine substitution; mixing in a float
demotes the result to float, as plain Python arithmetic does.

Canonical form drops exact zeros, and for float coefficients anything below
``PRUNE_RTOL`` times the largest coefficient magnitude of the operation.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np

from .errors import DimensionMismatch, InputError

PRUNE_RTOL = 1e-14

MultiIndex = tuple[int, ...]


# -- multi-indices ----------------------------------------------------------

def multi_index(orders: Iterable[int]) -> MultiIndex:
    """Validate and freeze a multi-index."""
    idx = tuple(int(o) for o in orders)
    if any(o < 0 for o in idx):
        raise InputError(f"multi-index entries must be non-negative, got {idx}")
    return idx


def unit(axis: int, dimension: int) -> MultiIndex:
    return tuple(1 if j == axis else 0 for j in range(dimension))


def leq(alpha: Sequence[int], beta: Sequence[int]) -> bool:
    """Componentwise partial order alpha <= beta."""
    return all(a <= b for a, b in zip(alpha, beta))


def lt(alpha: Sequence[int], beta: Sequence[int]) -> bool:
    """Strict componentwise order: alpha <= beta and alpha != beta."""
    return leq(alpha, beta) and tuple(alpha) != tuple(beta)


def grlex_key(exp: MultiIndex) -> tuple:
    """Sort key for graded-lex order; sort with ``reverse=True`` for highest first."""
    return (sum(exp), exp)


def multi_indices(dimension: int, max_total: int) -> list[MultiIndex]:
    """All multi-indices with total order <= max_total, lowest total first."""
    out = [e for e in itertools.product(range(max_total + 1), repeat=dimension)
           if sum(e) <= max_total]
    out.sort(key=lambda e: (sum(e), tuple(-x for x in e)))
    return out


def box(upper: Sequence[int]) -> Iterator[MultiIndex]:
    """Every multi-index gamma with gamma <= upper componentwise."""
    return itertools.product(*(range(u + 1) for u in upper))


# -- coefficients -----------------------------------------------------------

def _is_float(c) -> bool:
    return isinstance(c, (float, np.floating))


def _clean_scalar(c):
    if isinstance(c, np.integer):
        return int(c)
    if isinstance(c, np.floating):
        return float(c)
    if isinstance(c, (int, float, Fraction)):
        return c
    if isinstance(c, Rational):
        return Fraction(c)
    raise InputError(f"unsupported coefficient type {type(c).__name__}")


def _canonical(raw: Mapping[MultiIndex, object], scale=None) -> dict:
    """Drop zeros; floats below PRUNE_RTOL * scale count as zero."""
    if scale is None:
        scale = max((abs(c) for c in raw.values() if _is_float(c)), default=0.0)
    cut = PRUNE_RTOL * float(scale)
    out = {}
    for e, c in raw.items():
        if c == 0:
            continue
        if _is_float(c) and abs(c) <= cut:
            continue
        out[e] = c
    return out


class Polynomial:
    """Immutable sparse polynomial in ``dimension`` variables."""

    __slots__ = ("_dim", "_terms")

    def __init__(self, dimension: int, terms: Mapping | None = None):
        if dimension < 1:
            raise InputError("dimension must be positive")
        raw = {}
        for e, c in (terms or {}).items():
            e = multi_index(e)
            if len(e) != dimension:
                raise DimensionMismatch(
                    f"exponent {e} has length {len(e)}, expected {dimension}")
            raw[e] = raw.get(e, 0) + _clean_scalar(c)
        self._dim = dimension
        self._terms = _canonical(raw)

    @classmethod
    def _trusted(cls, dimension: int, terms: dict) -> "Polynomial":
        # Caller guarantees canonical form and clean keys.
        p = object.__new__(cls)
        p._dim = dimension
        p._terms = terms
        return p

    # constructors
    @classmethod
    def zero(cls, dimension: int) -> "Polynomial":
        return cls._trusted(dimension, {})

    @classmethod
    def constant(cls, value, dimension: int) -> "Polynomial":
        return cls(dimension, {(0,) * dimension: value})

    @classmethod
    def monomial(cls, exp: Sequence[int], coef=1) -> "Polynomial":
        exp = multi_index(exp)
        return cls(len(exp), {exp: coef})

    @classmethod
    def variable(cls, axis: int, dimension: int) -> "Polynomial":
        return cls.monomial(unit(axis, dimension))

    # accessors
    @property
    def dimension(self) -> int:
        return self._dim

    @property
    def terms(self) -> Mapping[MultiIndex, object]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def __len__(self) -> int:
        return len(self._terms)

    def __iter__(self):
        return iter(self._terms)

    def coefficient(self, exp: Sequence[int]):
        return self._terms.get(tuple(exp), 0)

    def is_zero(self) -> bool:
        return not self._terms

    @property
    def is_exact(self) -> bool:
        return not any(_is_float(c) for c in self._terms.values())

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self._terms), default=-1)

    def axis_degrees(self) -> MultiIndex:
        if not self._terms:
            return (0,) * self._dim
        return tuple(max(e[j] for e in self._terms) for j in range(self._dim))

    def sorted_terms(self) -> list[tuple[MultiIndex, object]]:
        """Terms in graded-lex order, highest first."""
        return sorted(self._terms.items(), key=lambda kv: grlex_key(kv[0]), reverse=True)

    def coefficient_norm(self) -> float:
        """Max-abs coefficient norm."""
        return float(max((abs(c) for c in self._terms.values()), default=0))

    def to_floats(self) -> "Polynomial":
        return Polynomial(self._dim, {e: float(c) for e, c in self._terms.items()})

    # arithmetic
    def __add__(self, other):
        return add(self, _coerce(other, self._dim))

    __radd__ = __add__

    def __sub__(self, other):
        return add(self, -_coerce(other, self._dim))

    def __rsub__(self, other):
        return add(_coerce(other, self._dim), -self)

    def __neg__(self):
        return Polynomial._trusted(self._dim, {e: -c for e, c in self._terms.items()})

    def __mul__(self, other):
        if isinstance(other, Polynomial):
            return mul(self, other)
        return self.scale(other)

    __rmul__ = __mul__

    def scale(self, factor) -> "Polynomial":
        factor = _clean_scalar(factor)
        raw = {e: factor * c for e, c in self._terms.items()}
        return Polynomial._trusted(self._dim, _canonical(raw))

    def __pow__(self, k: int) -> "Polynomial":
        if k < 0:
            raise InputError("negative powers are not polynomials")
        out = Polynomial.constant(1, self._dim)
        base = self
        while k:
            if k & 1:
                out = mul(out, base)
            base = mul(base, base)
            k >>= 1
        return out

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self._dim == other._dim and self._terms == other._terms

    def __hash__(self):
        return hash((self._dim, frozenset(self._terms.items())))

    def __call__(self, x):
        return evaluate(self, x)

    def __repr__(self):
        if not self._terms:
            return f"Polynomial({self._dim}, 0)"
        parts = []
        for e, c in self.sorted_terms():
            mono = "*".join(f"x{j + 1}^{k}" if k > 1 else f"x{j + 1}"
                            for j, k in enumerate(e) if k)
            parts.append(f"{c}*{mono}" if mono else f"{c}")
        return f"Polynomial({self._dim}, {' + '.join(parts)})"

    # serialization
    def to_json(self) -> dict:
        return {
            "dimension": self._dim,
            "terms": [{"exp": list(e), "coef": float(c)} for e, c in self.sorted_terms()],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "Polynomial":
        dim = int(data["dimension"])
        return cls(dim, {tuple(t["exp"]): float(t["coef"]) for t in data["terms"]})


def _coerce(value, dimension: int) -> Polynomial:
    if isinstance(value, Polynomial):
        return value
    return Polynomial.constant(value, dimension)


def _check_dims(p: Polynomial, q: Polynomial) -> None:
    if p.dimension != q.dimension:
        raise DimensionMismatch(f"dimension {p.dimension} != {q.dimension}")


# -- operations -------------------------------------------------------------

def add(p: Polynomial, q: Polynomial) -> Polynomial:
    _check_dims(p, q)
    raw = dict(p._terms)
    for e, c in q._terms.items():
        raw[e] = raw.get(e, 0) + c
    scale = max(p.coefficient_norm(), q.coefficient_norm())
    return Polynomial._trusted(p.dimension, _canonical(raw, scale))


def linear_combination(pairs: Iterable[tuple[object, Polynomial]], dimension: int) -> Polynomial:
    """Sum of c_i * p_i accumulated in one pass."""
    raw: dict = {}
    scale = 0.0
    for c, p in pairs:
        if p.dimension != dimension:
            raise DimensionMismatch(f"dimension {p.dimension} != {dimension}")
        for e, v in p._terms.items():
            t = c * v
            raw[e] = raw.get(e, 0) + t
            if _is_float(t):
                scale = max(scale, abs(t))
    return Polynomial._trusted(dimension, _canonical(raw, scale))


def mul(p: Polynomial, q: Polynomial) -> Polynomial:
    _check_dims(p, q)
    if len(p) < len(q):
        p, q = q, p
    raw: dict = {}
    scale = 0.0
    for eq, cq in q._terms.items():
        for ep, cp in p._terms.items():
            e = tuple(a + b for a, b in zip(ep, eq))
            t = cp * cq
            raw[e] = raw.get(e, 0) + t
            if _is_float(t):
                scale = max(scale, abs(t))
    return Polynomial._trusted(p.dimension, _canonical(raw, scale))


def differentiate(p: Polynomial, gamma: Sequence[int]) -> Polynomial:
    """Exact partial derivative D^gamma p."""
    gamma = multi_index(gamma)
    if len(gamma) != p.dimension:
        raise DimensionMismatch(f"derivative order {gamma} vs dimension {p.dimension}")
    if not any(gamma):
        return p
    raw = {}
    for e, c in p._terms.items():
        if any(k < g for k, g in zip(e, gamma)):
            continue
        factor = math.prod(math.perm(k, g) for k, g in zip(e, gamma))
        raw[tuple(k - g for k, g in zip(e, gamma))] = factor * c
    return Polynomial._trusted(p.dimension, _canonical(raw))


def evaluate(p: Polynomial, x) -> float:
    """Value of p at one point.

    Exact coefficients are evaluated in rational arithmetic at the exact binary
    value of ``x`` and rounded once, so heavy cancellation does not leak in.
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if x.shape != (p.dimension,):
        raise DimensionMismatch(f"point of shape {x.shape} for dimension {p.dimension}")
    if p.is_exact:
        xs = [Fraction(float(v)) for v in x]
        total = Fraction(0)
        for e, c in p._terms.items():
            term = Fraction(c)
            for v, k in zip(xs, e):
                if k:
                    term *= v ** k
            total += term
        return float(total)
    total = 0.0
    for e, c in p._terms.items():
        total += c * math.prod(float(v) ** k for v, k in zip(x, e))
    return float(total)


def evaluate_many(p: Polynomial, points) -> np.ndarray:
    """Float evaluation at an array of points of shape (..., N).

    Intended for small, well-conditioned polynomials such as weight factors.
    """
    pts = np.asarray(points, dtype=float)
    if pts.shape[-1] != p.dimension:
        raise DimensionMismatch(f"points of shape {pts.shape} for dimension {p.dimension}")
    out = np.zeros(pts.shape[:-1])
    if not p._terms:
        return out
    deg = p.axis_degrees()
    powers = [pts[..., j, None] ** np.arange(deg[j] + 1) for j in range(p.dimension)]
    for e, c in p._terms.items():
        term = np.full(pts.shape[:-1], float(c))
        for j, k in enumerate(e):
            if k:
                term = term * powers[j][..., k]
        out += term
    return out


def affine_substitute(p: Polynomial, axis: int, a, b) -> Polynomial:
    """Replace x_axis (0-based) by a*x_axis + b and re-expand."""
    if not 0 <= axis < p.dimension:
        raise InputError(f"axis {axis} out of range for dimension {p.dimension}")
    a, b = _clean_scalar(a), _clean_scalar(b)
    raw: dict = {}
    scale = 0.0
    for e, c in p._terms.items():
        k = e[axis]
        for i in range(k + 1):
            t = c * math.comb(k, i) * a ** i * b ** (k - i)
            ne = e[:axis] + (i,) + e[axis + 1:]
            raw[ne] = raw.get(ne, 0) + t
            if _is_float(t):
                scale = max(scale, abs(t))
    return Polynomial._trusted(p.dimension, _canonical(raw, scale))
