"""Dilation plus convolution with a compactly supported polynomial bump.

Turns a C^m oracle into one that also supplies derivatives beyond order m.
The cube is dilated about its centre by s = 1 - 1/(n+1), which leaves a margin
(1-s)/2 = 1/(2(n+1)) on every face; a kernel of radius 1/lambda_n with
lambda_n >= 2(n+1) then only ever samples u inside [0,1]^N.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import ConfigurationError, InputError
from .grid import GridSpec
from .oracles import DerivativeOracle
from .polyalgebra import MultiIndex, Polynomial, differentiate, evaluate_many, multi_indices

CHUNK = 2048


@dataclass(frozen=True)
class BumpKernel:
    """Psi(r) = c_s (1 - r^2)^s on the unit ball, normalized to unit mass."""

    smoothness: int
    dimension: int

    def __post_init__(self):
        if self.smoothness < 1:
            raise ConfigurationError("kernel smoothness must be >= 1")

    @property
    def normalization(self) -> float:
        s, n = self.smoothness, self.dimension
        # integral over the unit ball of (1-|x|^2)^s is pi^(N/2) s! / Gamma(s+1+N/2)
        return math.gamma(s + 1 + n / 2) / (math.pi ** (n / 2) * math.gamma(s + 1))

    def profile(self, r) -> np.ndarray:
        r = np.asarray(r, dtype=float)
        return np.where(r < 1.0, self.normalization * np.clip(1.0 - r * r, 0.0, None) ** self.smoothness, 0.0)

    def scaled_polynomial(self, scale: float) -> Polynomial:
        """lambda^N Psi(lambda |y|) inside its support, as a polynomial in y."""
        dim = self.dimension
        r2 = sum((Polynomial.variable(j, dim) ** 2 for j in range(dim)), Polynomial.zero(dim))
        inner = 1 - r2.scale(scale * scale)
        return (inner ** self.smoothness).scale(scale ** dim * self.normalization)


@dataclass(frozen=True)
class MollifierConfig:
    step: int
    scale: float | None = None
    quad_nodes: int = 24

    def __post_init__(self):
        if self.step < 1:
            raise ConfigurationError("dilation step must be >= 1")
        if self.quad_nodes < 2:
            raise ConfigurationError("need at least 2 quadrature nodes per axis")
        if self.scale is not None and self.scale < 2 * (self.step + 1):
            raise ConfigurationError(
                f"scale {self.scale} < 2(n+1) = {2 * (self.step + 1)}: kernel leaves the dilation margin")

    @property
    def lam(self) -> float:
        return float(self.scale) if self.scale is not None else 2.0 * (self.step + 1)

    @property
    def factor(self) -> float:
        return 1.0 - 1.0 / (self.step + 1)


def dilate(u: DerivativeOracle, n: int, center: float = 0.0) -> DerivativeOracle:
    """x -> u(c + s(x - c)) with s = 1 - 1/(n+1); derivatives pick up s^|gamma|.

    ``center=0`` dilates about the origin; ``smooth`` uses the cube centre 1/2.
    """
    if n < 1:
        raise InputError("dilation step must be >= 1")
    s = 1.0 - 1.0 / (n + 1)

    def fn(gamma, pts):
        return s ** sum(gamma) * u.eval(gamma, center + s * (pts - center))

    return DerivativeOracle(u.dimension, fn, u.max_order, f"dilate({u.name}, {n})")


def ball_quadrature(dimension: int, radius: float, nodes: int) -> tuple[np.ndarray, np.ndarray]:
    """Points and weights integrating over the ball |y| <= radius.

    Gauss-Legendre in the radius times equispaced angles (and Gauss-Legendre
    in cos(theta) for N = 3); in 1D plain Gauss-Legendre on [-radius, radius].
    """
    x, w = np.polynomial.legendre.leggauss(nodes)
    if dimension == 1:
        return (radius * x)[:, None], radius * w
    rho = 0.5 * radius * (x + 1.0)
    wr = 0.5 * radius * w
    nphi = 2 * nodes
    phi = 2 * math.pi * np.arange(nphi) / nphi
    wphi = np.full(nphi, 2 * math.pi / nphi)
    if dimension == 2:
        R, P = np.meshgrid(rho, phi, indexing="ij")
        W = np.outer(wr * rho, wphi)
        pts = np.stack([R * np.cos(P), R * np.sin(P)], axis=-1)
        return pts.reshape(-1, 2), W.ravel()
    if dimension == 3:
        ct, wt = x, w
        R, C, P = np.meshgrid(rho, ct, phi, indexing="ij")
        S = np.sqrt(1.0 - C * C)
        W = np.einsum("i,j,k->ijk", wr * rho ** 2, wt, wphi)
        pts = np.stack([R * S * np.cos(P), R * S * np.sin(P), R * C], axis=-1)
        return pts.reshape(-1, 3), W.ravel()
    raise ConfigurationError("ball quadrature supports dimension 1..3")


def split_order(gamma: MultiIndex, m: int) -> tuple[MultiIndex, MultiIndex]:
    """gamma = kernel part + function part, function part maximal with order <= m.

    The function part is filled from the first axis onward.
    """
    budget = m
    on_u = []
    for g in gamma:
        take = min(g, budget)
        on_u.append(take)
        budget -= take
    on_kernel = tuple(g - a for g, a in zip(gamma, on_u))
    return on_kernel, tuple(on_u)


@dataclass(frozen=True)
class SmoothedOracle:
    """v = Psi_n * u_dilated, evaluated by quadrature; see ``smooth``."""

    source: DerivativeOracle
    config: MollifierConfig
    kernel: BumpKernel
    target_order: int
    _cache: dict = field(default_factory=dict, compare=False, repr=False)

    @cached_property
    def dilated(self) -> DerivativeOracle:
        return dilate(self.source, self.config.step, center=0.5)

    @cached_property
    def quadrature(self):
        return ball_quadrature(self.kernel.dimension, 1.0 / self.config.lam, self.config.quad_nodes)

    @cached_property
    def kernel_polynomial(self) -> Polynomial:
        return self.kernel.scaled_polynomial(self.config.lam)

    def _kernel_weights(self, on_kernel: MultiIndex) -> np.ndarray:
        nodes, weights = self.quadrature
        return weights * evaluate_many(differentiate(self.kernel_polynomial, on_kernel), nodes)

    def values(self, gamma: MultiIndex, pts: np.ndarray) -> np.ndarray:
        key = (gamma, pts.shape, pts.tobytes())
        if key in self._cache:
            return self._cache[key]
        m = self.source.max_order if self.source.max_order is not None else sum(gamma)
        on_kernel, on_u = split_order(gamma, m)
        nodes, _ = self.quadrature
        kw = self._kernel_weights(on_kernel)
        out = np.empty(len(pts))
        for start in range(0, len(pts), CHUNK):
            block = pts[start:start + CHUNK]
            shifted = block[:, None, :] - nodes[None, :, :]
            vals = self.dilated.eval(on_u, shifted.reshape(-1, block.shape[1]))
            out[start:start + CHUNK] = vals.reshape(len(block), -1) @ kw
        self._cache[key] = out
        return out

    def as_oracle(self) -> DerivativeOracle:
        return DerivativeOracle(self.kernel.dimension, self.values, self.target_order,
                                f"smooth({self.source.name}, n={self.config.step})")


def smooth(u: DerivativeOracle, cfg: MollifierConfig, target_order: int,
           smoothness: int | None = None) -> DerivativeOracle:
    """Mollified oracle supplying derivatives up to ``target_order``.

    Derivative orders beyond u's own ``max_order`` m are moved onto the kernel,
    whose smoothness defaults to the minimum target_order - m + 1.
    """
    m = u.max_order if u.max_order is not None else target_order
    s = smoothness if smoothness is not None else max(1, target_order - m + 1)
    if target_order > m + s - 1:
        raise ConfigurationError(
            f"target order {target_order} exceeds m + s - 1 = {m + s - 1} for kernel smoothness {s}")
    kernel = BumpKernel(s, u.dimension)
    return SmoothedOracle(u, cfg, kernel, target_order).as_oracle()


def sobolev_grid_distance(v: DerivativeOracle, u: DerivativeOracle, m: int, grid: GridSpec) -> float:
    """max over |alpha| <= m of the grid sup |D^alpha v - D^alpha u|."""
    pts = grid.points(u.dimension)
    return max(float(np.max(np.abs(v.eval(a, pts) - u.eval(a, pts))))
               for a in multi_indices(u.dimension, m))


def convergence_table(u: DerivativeOracle, steps, target_order: int, grid: GridSpec,
                      smoothness: int | None = None, quad_nodes: int = 24) -> list[tuple[int, float]]:
    """(n, W^{m,inf}-grid distance between smooth(u, n) and u) for each step n."""
    m = u.max_order
    if m is None:
        raise InputError("convergence table needs an oracle with a finite max_order")
    rows = []
    for n in steps:
        v = smooth(u, MollifierConfig(n, quad_nodes=quad_nodes), target_order, smoothness)
        rows.append((n, sobolev_grid_distance(v, u, m, grid)))
    return rows


def kernel_mass(kernel: BumpKernel, nodes: int = 24) -> float:
    """Quadrature check of the unit-mass normalization."""
    pts, w = ball_quadrature(kernel.dimension, 1.0, nodes)
    return float(w @ kernel.profile(np.linalg.norm(pts, axis=1)))

