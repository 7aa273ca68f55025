"""Finite-difference oracle: forms from positions, surface operators."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from mkdvsurf import diffgeo as dg
from mkdvsurf.immersion import preset, three_param_providers

X1, T1 = np.meshgrid(np.linspace(-1, 1, 9), np.linspace(-1, 1, 9))


def plane(x, t):
    return np.stack([x, t, 0.3 * x + 0.1 * t], axis=-1)


def sphere(x, t):
    # unit sphere, x = polar angle offset from equator, t = azimuth
    return np.stack(
        [np.cos(x) * np.cos(t), np.cos(x) * np.sin(t), np.sin(x)], axis=-1
    )


def sphere_metric(x, t):
    return np.ones_like(x), np.zeros_like(x), np.cos(x) ** 2


def test_stencil_validation():
    with pytest.raises(ValueError):
        dg.Stencil(h_x=1e-9)
    with pytest.raises(ValueError):
        dg.Stencil(h_t=0.1)
    with pytest.raises(ValueError):
        dg.Stencil(order=3)
    s = dg.Stencil(h_x=1e-3, h_t=1e-3, order=2, richardson=True)
    assert s.order == 2


def test_derivative_on_polynomial():
    f = lambda x, t: x ** 3 + 2 * t ** 2 * x
    s = dg.Stencil(order=4)
    got = dg.derivative(f, X1, T1, s, axis=0, nth=1)
    assert np.allclose(got, 3 * X1 ** 2 + 2 * T1 ** 2, atol=1e-9)
    got2 = dg.derivative(f, X1, T1, s, axis=1, nth=2)
    assert np.allclose(got2, 4 * X1, atol=1e-5)


def test_mixed_derivative():
    f = lambda x, t: np.sin(x) * np.cos(2 * t)
    got = dg.mixed_derivative(f, X1, T1, dg.Stencil(order=4))
    assert np.allclose(got, -2 * np.cos(X1) * np.sin(2 * T1), atol=1e-8)


def test_fd_forms_plane():
    f = dg.fd_forms(plane, X1, T1)
    assert np.allclose(f.g11, 1.09, atol=1e-9)
    assert np.allclose(f.g12, 0.03, atol=1e-9)
    assert np.allclose(f.g22, 1.01, atol=1e-9)
    for name in ("h11", "h12", "h22"):
        assert np.max(np.abs(getattr(f, name))) < 1e-7


def test_fd_forms_sphere_curvatures():
    from mkdvsurf.deformation import curvatures_from_forms

    f = dg.fd_forms(sphere, X1, T1)
    cur = curvatures_from_forms(f)
    assert np.allclose(cur.K, 1.0, atol=1e-7)
    assert np.allclose(np.abs(cur.H), 1.0, atol=1e-7)


def test_fd_forms_degenerate_point_raises():
    collapsed = lambda x, t: np.stack([x, x, np.zeros_like(x)], axis=-1)
    with pytest.raises(dg.SingularPointError):
        dg.fd_forms(collapsed, 0.0, 0.0)
    out = dg.fd_forms(collapsed, np.array([0.0, 0.1]), np.array([0.0, 0.0]))
    assert np.isnan(out.h11).all()


def test_laplace_beltrami_flat():
    metric = lambda x, t: (np.ones_like(x), np.zeros_like(x), np.ones_like(x))
    f = lambda x, t: x ** 2 + t ** 2
    got = dg.laplace_beltrami(f, metric, X1, T1)
    assert np.allclose(got, 4.0, atol=1e-8)


def test_laplace_beltrami_sphere_eigenfunction():
    # f = sin(polar) has eigenvalue -2 on the unit sphere
    f = lambda x, t: np.sin(x)
    got = dg.laplace_beltrami(f, sphere_metric, X1, T1)
    assert np.allclose(got, -2.0 * np.sin(X1), atol=1e-8)


def test_laplace_convergence_order():
    f = lambda x, t: np.sin(x) * np.cos(t)
    metric = lambda x, t: (np.ones_like(x), np.zeros_like(x), np.ones_like(x))
    exact = -2.0 * np.sin(X1) * np.cos(T1)
    errs = []
    for h in (4e-3, 2e-3):
        s = dg.Stencil(h_x=h, h_t=h, order=2, richardson=False)
        errs.append(np.max(np.abs(dg.laplace_beltrami(f, metric, X1, T1, s) - exact)))
    ratio = errs[0] / errs[1]
    assert 3.0 < ratio < 5.0  # second order: halving h -> ~4x


@settings(max_examples=10, deadline=None)
@given(st.floats(-2, 2), st.floats(-2, 2))
def test_operator_linearity(a, b):
    metric = lambda x, t: (np.ones_like(x) * 2.0, np.zeros_like(x), np.ones_like(x))
    f = lambda x, t: np.sin(x) + t ** 2
    g = lambda x, t: np.cos(t) * x
    combo = lambda x, t: a * f(x, t) + b * g(x, t)
    lhs = dg.laplace_beltrami(combo, metric, X1, T1)
    rhs = a * dg.laplace_beltrami(f, metric, X1, T1) + b * dg.laplace_beltrami(
        g, metric, X1, T1
    )
    assert np.max(np.abs(lhs - rhs)) < 1e-8 * (1 + abs(a) + abs(b))


def test_nabla_dot_bar_reduces_to_laplacian_on_unit_sphere():
    # K = 1 and h = g on the unit sphere, so the operator equals the Laplacian
    f = lambda x, t: np.sin(x)
    second = sphere_metric
    k_of = lambda x, t: np.ones_like(x)
    got = dg.nabla_dot_bar(f, sphere_metric, k_of, second, X1, T1)
    lap = dg.laplace_beltrami(f, sphere_metric, X1, T1)
    assert np.allclose(got, lap, atol=1e-7)


def test_near_singular_mask():
    h11 = np.array([1.0, 1.0, 1e-7])
    h12 = np.array([0.0, 1.0, 0.0])
    h22 = np.array([1.0, 1.0, 1e-7])
    mask = dg.near_singular_mask(h11, h12, h22)
    assert mask.tolist() == [False, True, False]


def test_willmore_residual_shapes_and_scale():
    pre = preset("ex2")
    prov = three_param_providers(pre.params)
    x, t = np.meshgrid(np.linspace(-0.5, 0.5, 5), np.linspace(-0.5, 0.5, 5))
    res, scale = dg.willmore_like_residual(prov, 4.0 / 9.0, 1.0, x, t)
    assert res.shape == x.shape
    assert np.all(scale > 0)
    assert np.max(np.abs(res) / scale) < 1e-4


class _ConstLagrangian:
    p = 0.0

    def eval(self, h, k):
        return np.ones_like(np.asarray(h, dtype=float))

    def dH(self, h, k):
        return np.zeros_like(np.asarray(h, dtype=float))

    dK = dH

    def depends_on_k(self):
        return False


class _H2Lagrangian(_ConstLagrangian):
    def eval(self, h, k):
        return np.asarray(h, dtype=float) ** 2

    def dH(self, h, k):
        return 2.0 * np.asarray(h, dtype=float)

    def dK(self, h, k):
        return np.zeros_like(np.asarray(h, dtype=float))


def test_shape_residual_constant_energy_is_minus_4h():
    prov = three_param_providers(preset("ex2").params)
    x, t = np.meshgrid(np.linspace(-0.4, 0.4, 5), np.linspace(-0.4, 0.4, 5))
    res, _ = dg.shape_equation_residual(prov, _ConstLagrangian(), x, t)
    h = prov.mean_curvature(x, t)
    assert np.allclose(res, -4.0 * h, atol=1e-10)


def test_shape_residual_h2_is_willmore_operator():
    prov = three_param_providers(preset("ex2").params)
    x, t = np.meshgrid(np.linspace(-0.4, 0.4, 5), np.linspace(-0.4, 0.4, 5))
    res, _ = dg.shape_equation_residual(prov, _H2Lagrangian(), x, t)
    h = prov.mean_curvature(x, t)
    k = prov.gauss_curvature(x, t)
    lap = dg.laplace_beltrami(prov.mean_curvature, prov.metric, x, t)
    assert np.allclose(res, 2 * lap + 4 * h ** 3 - 4 * k * h, atol=1e-7)


def test_shape_residual_cmc_balance():
    # on a constant-H surface with E = 1 the residual is -4H + 2p, zero at p = 2H
    class Pressurized(_ConstLagrangian):
        def __init__(self, p):
            self.p = p

    def sphere_providers():
        def curvatures(x, t):
            from mkdvsurf.deformation import CurvaturePair

            one = np.ones_like(np.asarray(x, dtype=float))
            return CurvaturePair(K=one, H=one)

        return dg.SurfaceProviders(
            position=sphere,
            metric=sphere_metric,
            second_form=sphere_metric,
            curvatures=curvatures,
        )

    prov = sphere_providers()
    res, _ = dg.shape_equation_residual(prov, Pressurized(2.0), X1, T1)
    assert np.max(np.abs(res)) < 1e-12
