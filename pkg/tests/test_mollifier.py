import math

import numpy as np
import pytest

from simulapprox.errors import ConfigurationError
from simulapprox.grid import GridSpec
from simulapprox.mollifier import (
    BumpKernel, MollifierConfig, ball_quadrature, convergence_table, dilate, kernel_mass, smooth, split_order,
)
from simulapprox.oracles import DerivativeOracle, builtin, constant, kink, polynomial_oracle
from simulapprox.poincare import random_polynomial
from simulapprox.polyalgebra import Polynomial, multi_indices

X = Polynomial.variable(0, 1)
PTS1 = np.linspace(0, 1, 13)[:, None]


def capped(u, order):
    """Same function, but claims derivatives only up to ``order``."""
    return DerivativeOracle(u.dimension, u.fn, order, f"capped({u.name})")


def test_dilate_examples():
    x = polynomial_oracle(X)
    d = dilate(x, 1)
    assert d(np.array([[0.0]]))[0] == 0.0
    assert np.allclose(d(PTS1), 0.5 * PTS1[:, 0])
    sq = dilate(polynomial_oracle(X * X), 1)
    assert np.allclose(sq(PTS1), PTS1[:, 0] ** 2 / 4)
    assert np.allclose(sq.eval((1,), PTS1), PTS1[:, 0] / 2)


def test_dilate_about_centre_fixes_centre():
    d = dilate(polynomial_oracle(X), 3, center=0.5)
    assert d(np.array([[0.5]]))[0] == 0.5
    assert d(np.array([[0.0]]))[0] == pytest.approx(0.125)


@pytest.mark.parametrize("dim", [1, 2, 3])
@pytest.mark.parametrize("s", [1, 2, 4])
def test_kernel_unit_mass(dim, s):
    assert kernel_mass(BumpKernel(s, dim)) == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("dim", [1, 2, 3])
def test_ball_quadrature_volume(dim):
    _, w = ball_quadrature(dim, 0.3, 8)
    volume = math.pi ** (dim / 2) / math.gamma(dim / 2 + 1) * 0.3 ** dim
    assert w.sum() == pytest.approx(volume, rel=1e-12)


def test_constants_preserved():
    for dim in (1, 2):
        v = smooth(constant(2.5, dim), MollifierConfig(3), 2)
        pts = GridSpec(7).points(dim)
        assert np.allclose(v(pts), 2.5, atol=1e-12)
        assert np.allclose(v.eval((1,) + (0,) * (dim - 1), pts), 0.0, atol=1e-12)


def test_linear_reproduced_as_dilation():
    u = polynomial_oracle(X)
    v = smooth(u, MollifierConfig(4), 1)
    s = 1 - 1 / 5
    assert np.allclose(v(PTS1), 0.5 + s * (PTS1[:, 0] - 0.5), atol=1e-12)
    assert np.allclose(v.eval((1,), PTS1), s, atol=1e-12)


@pytest.mark.parametrize("dim", [1, 2])
def test_order_exchange_on_polynomials(dim):
    # pushing derivatives onto the kernel must agree with taking them on u
    u = polynomial_oracle(random_polynomial(np.random.default_rng(dim), dim, 3))
    cfg = MollifierConfig(3, quad_nodes=16)
    full = smooth(u, cfg, 3, smoothness=3)
    moved = smooth(capped(u, 1), cfg, 3, smoothness=3)
    pts = np.random.default_rng(0).uniform(0, 1, size=(15, dim))
    for gamma in multi_indices(dim, 3):
        assert np.allclose(moved.eval(gamma, pts), full.eval(gamma, pts), atol=1e-5)


def test_derivatives_match_differences():
    u = kink(1, 1)
    v = smooth(u, MollifierConfig(3), 2)
    # away from the dilated kink, where the integrand is smooth
    pts = np.array([[0.1], [0.2], [0.6], [0.8]])
    h = 1e-5
    fd = (v.eval((1,), pts + h) - v.eval((1,), pts - h)) / (2 * h)
    assert np.allclose(v.eval((2,), pts), fd, rtol=1e-4, atol=1e-4)


def test_kink_convergence_one_dimension():
    rows = convergence_table(kink(1, 1), [4, 8, 16], 1, GridSpec(201), smoothness=2)
    errs = [e for _, e in rows]
    assert errs[0] > errs[1] > errs[2]


def test_smooth_exceeds_source_order():
    v = smooth(builtin("kink", 2, m=1), MollifierConfig(2, quad_nodes=12), 2)
    pts = np.array([[0.3, 0.6]])
    assert np.isfinite(v.eval((1, 1), pts)).all()


def test_rejections():
    with pytest.raises(ConfigurationError):
        MollifierConfig(3, scale=7.0)
    MollifierConfig(3, scale=8.0)
    with pytest.raises(ConfigurationError):
        smooth(kink(1, 1), MollifierConfig(2), 3, smoothness=2)
    with pytest.raises(ConfigurationError):
        MollifierConfig(0)


def test_split_order():
    assert split_order((2, 1), 1) == ((1, 1), (1, 0))
    assert split_order((1, 1), 3) == ((0, 0), (1, 1))
    assert split_order((0, 3), 2) == ((0, 1), (0, 2))
