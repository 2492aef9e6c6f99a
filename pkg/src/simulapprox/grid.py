"""Uniform tensor grids on [0,1]^N and polynomial evaluation over them.

Grid sup norms are lower bounds of the true sup norm on the cube.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce

import numpy as np

from .errors import ConfigurationError
from .polyalgebra import Polynomial


@dataclass(frozen=True)
class GridSpec:
    """``nodes`` uniform nodes per axis, endpoints 0 and 1 included."""

    nodes: int = 101

    def __post_init__(self):
        if self.nodes < 2:
            raise ConfigurationError("a grid needs at least 2 nodes per axis")

    def axis(self) -> np.ndarray:
        return np.linspace(0.0, 1.0, self.nodes)

    def points(self, dimension: int) -> np.ndarray:
        """All nodes as an array of shape (nodes**dimension, dimension), C order."""
        mesh = np.meshgrid(*([self.axis()] * dimension), indexing="ij")
        return np.stack([m.ravel() for m in mesh], axis=-1)

    def trapezoid_weights(self, dimension: int) -> np.ndarray:
        w = np.full(self.nodes, 1.0 / (self.nodes - 1))
        w[0] = w[-1] = 0.5 / (self.nodes - 1)
        out = w
        for _ in range(dimension - 1):
            out = np.multiply.outer(out, w)
        return out.ravel()

    def boundary_mask(self, dimension: int, axis: int | None = None, face: int | None = None) -> np.ndarray:
        """Mask over ``points(dimension)`` selecting a face, or the whole boundary."""
        pts = self.points(dimension)
        if axis is None:
            return np.any((pts == 0.0) | (pts == 1.0), axis=1)
        return pts[:, axis] == float(face)


def default_grid(dimension: int) -> GridSpec:
    return GridSpec(101 if dimension <= 2 else 21)


def evaluate_on_grid(p: Polynomial, grid: GridSpec) -> np.ndarray:
    """Values of p at ``grid.points(p.dimension)``, flattened in the same order.

    Exact polynomials are evaluated in integer arithmetic at the rational nodes
    k/(nodes-1) and rounded once per node; float polynomials use float tensor
    contraction.
    """
    dim = p.dimension
    size = grid.nodes ** dim
    if p.is_zero():
        return np.zeros(size)
    deg = p.axis_degrees()
    shape = tuple(d + 1 for d in deg)
    if not p.is_exact:
        coef = np.zeros(shape)
        for e, c in p.items():
            coef[e] = c
        x = grid.axis()
        for j in range(dim):
            vander = x[:, None] ** np.arange(shape[j])
            # contract the leading coefficient axis, appending the node axis last
            coef = np.tensordot(coef, vander, axes=([0], [1]))
        return coef.ravel()

    fracs = {e: Fraction(c) for e, c in p.items()}
    lcm = reduce(math.lcm, (f.denominator for f in fracs.values()), 1)
    coef = np.zeros(shape, dtype=object)
    coef[...] = 0
    for e, f in fracs.items():
        coef[e] = f.numerator * (lcm // f.denominator)
    d = grid.nodes - 1
    ks = range(grid.nodes)
    for j in range(dim):
        D = deg[j]
        # node k/d: sum_a c_a (k/d)^a = d^-D * sum_a c_a k^a d^(D-a)
        vander = np.array([[k ** a * d ** (D - a) for a in range(D + 1)] for k in ks], dtype=object)
        coef = np.tensordot(coef, vander, axes=([0], [1]))
    denom = lcm * d ** sum(deg)
    return np.array([int(v) / denom for v in coef.ravel()], dtype=float)
