"""Finite-difference differential-geometry oracle.

Everything here works directly on an immersion callable (x, t) -> R^3 or on
scalar/metric provider callables, with no knowledge of closed forms: first
and second fundamental forms by central differences, the surface Laplacian
and the curvature-weighted divergence operator in nested flux form, and the
residuals of the Willmore-like and generalized shape equations.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .deformation import CurvaturePair, Forms, SingularPointError

STEP_MIN = 1e-8
STEP_MAX = 1e-2


@dataclass(frozen=True)
class Stencil:
    """Central-difference configuration: steps, order, Richardson flag."""

    h_x: float = 1e-4
    h_t: float = 1e-4
    order: int = 4
    richardson: bool = False

    def __post_init__(self):
        for name, h in (("h_x", self.h_x), ("h_t", self.h_t)):
            if not (STEP_MIN <= h <= STEP_MAX):
                raise ValueError(
                    f"{name} = {h} outside [{STEP_MIN}, {STEP_MAX}]"
                )
        if self.order not in (2, 4):
            raise ValueError(f"order must be 2 or 4, got {self.order}")


# derivatives of smooth fields: small step, order 4
DERIVATIVE_STENCIL = Stencil(h_x=1e-4, h_t=1e-4, order=4, richardson=False)
# nested divergence-form operators: larger step plus one Richardson level
OPERATOR_STENCIL = Stencil(h_x=1e-3, h_t=1e-3, order=4, richardson=True)


def _shift(f, x, t, d, axis):
    if axis == 0:
        return f(x + d, t)
    return f(x, t + d)


def _d1_once(f, x, t, h, order, axis):
    if order == 2:
        return (_shift(f, x, t, h, axis) - _shift(f, x, t, -h, axis)) / (2.0 * h)
    return (
        8.0 * (_shift(f, x, t, h, axis) - _shift(f, x, t, -h, axis))
        - (_shift(f, x, t, 2 * h, axis) - _shift(f, x, t, -2 * h, axis))
    ) / (12.0 * h)


def _d2_once(f, x, t, h, order, axis):
    f0 = f(x, t)
    fp = _shift(f, x, t, h, axis)
    fm = _shift(f, x, t, -h, axis)
    if order == 2:
        return (fp - 2.0 * f0 + fm) / (h * h)
    fpp = _shift(f, x, t, 2 * h, axis)
    fmm = _shift(f, x, t, -2 * h, axis)
    return (-30.0 * f0 + 16.0 * (fp + fm) - (fpp + fmm)) / (12.0 * h * h)


def _richardson(coarse, fine, order):
    fac = 2.0 ** order
    return (fac * fine - coarse) / (fac - 1.0)


def derivative(f, x, t, s: Stencil, axis: int, nth: int = 1):
    """nth (1 or 2) central derivative of f along axis (0 = x, 1 = t)."""
    h = s.h_x if axis == 0 else s.h_t
    base = _d1_once if nth == 1 else _d2_once
    if nth not in (1, 2):
        raise ValueError("nth must be 1 or 2")
    d = base(f, x, t, h, s.order, axis)
    if not s.richardson:
        return d
    return _richardson(d, base(f, x, t, h / 2.0, s.order, axis), s.order)


def mixed_derivative(f, x, t, s: Stencil):
    """d^2 f / dx dt by nesting the one-dimensional stencils."""

    def ft(xx, tt):
        return derivative(f, xx, tt, s, axis=1, nth=1)

    return derivative(ft, x, t, s, axis=0, nth=1)


DEGENERATE_CROSS_TOL = 1e-12


def fd_forms(immersion, x, t, s: Stencil | None = None) -> Forms:
    """Fundamental forms of an immersion callable by central differences.

    The unit normal is cross(y_t, y_x)/|cross(y_t, y_x)|, matching the
    orientation of the frame construction used throughout the package.
    Scalar input at a degenerate point raises; array input yields NaN there.
    """
    if s is None:
        s = DERIVATIVE_STENCIL
    x = np.asarray(x, dtype=float)
    t = np.asarray(t, dtype=float)
    yx = derivative(immersion, x, t, s, axis=0, nth=1)
    yt = derivative(immersion, x, t, s, axis=1, nth=1)
    yxx = derivative(immersion, x, t, s, axis=0, nth=2)
    ytt = derivative(immersion, x, t, s, axis=1, nth=2)
    yxt = mixed_derivative(immersion, x, t, s)
    g11 = np.einsum("...k,...k->...", yx, yx)
    g12 = np.einsum("...k,...k->...", yx, yt)
    g22 = np.einsum("...k,...k->...", yt, yt)
    n = np.cross(yt, yx)
    norm = np.linalg.norm(n, axis=-1)
    degenerate = norm < DEGENERATE_CROSS_TOL
    if np.ndim(degenerate) == 0:
        if degenerate:
            raise SingularPointError(
                f"degenerate parametrization: |y_x x y_t| = {float(norm)}"
            )
    else:
        norm = np.where(degenerate, np.nan, norm)
    n = n / norm[..., None]
    return Forms(
        g11=g11,
        g12=g12,
        g22=g22,
        h11=np.einsum("...k,...k->...", yxx, n),
        h12=np.einsum("...k,...k->...", yxt, n),
        h22=np.einsum("...k,...k->...", ytt, n),
    )


MetricProvider = Callable[[np.ndarray, np.ndarray], tuple]


def _det_sqrt(g11, g12, g22, scalar_ok: bool):
    det = g11 * g22 - g12 ** 2
    bad = ~(det > 0.0)
    if np.ndim(bad) == 0:
        if bad and scalar_ok:
            raise SingularPointError(f"metric not positive definite: det g = {det}")
    with np.errstate(invalid="ignore"):
        return det, np.sqrt(np.where(det > 0.0, det, np.nan))


def laplace_beltrami(f, metric: MetricProvider, x, t, s: Stencil | None = None):
    """Surface Laplacian: (1/sqrt(det g)) d_i(sqrt(det g) g^{ij} d_j f).

    Evaluated in nested flux form: the bracketed flux is itself a field
    whose divergence is taken by the same central stencils.
    """
    if s is None:
        s = OPERATOR_STENCIL
    x = np.asarray(x, dtype=float)
    t = np.asarray(t, dtype=float)

    def flux(xx, tt, row):
        g11, g12, g22 = metric(xx, tt)
        det, sq = _det_sqrt(g11, g12, g22, scalar_ok=False)
        fx = derivative(f, xx, tt, s, axis=0, nth=1)
        ft = derivative(f, xx, tt, s, axis=1, nth=1)
        if row == 0:
            return sq * (g22 * fx - g12 * ft) / det
        return sq * (-g12 * fx + g11 * ft) / det

    div = derivative(lambda a, b: flux(a, b, 0), x, t, s, axis=0, nth=1)
    div = div + derivative(lambda a, b: flux(a, b, 1), x, t, s, axis=1, nth=1)
    g11, g12, g22 = metric(x, t)
    det, sq = _det_sqrt(g11, g12, g22, scalar_ok=True)
    return div / sq


def nabla_dot_bar(
    f,
    metric: MetricProvider,
    curvature_k,
    second_form,
    x,
    t,
    s: Stencil | None = None,
):
    """Curvature-weighted operator: (1/sqrt(det g)) d_i(sqrt(det g) K h^{ij} d_j f).

    h^{ij} is the inverse of the second fundamental form; points where it is
    singular propagate as non-finite values (see near_singular_mask).
    """
    if s is None:
        s = OPERATOR_STENCIL
    x = np.asarray(x, dtype=float)
    t = np.asarray(t, dtype=float)

    def flux(xx, tt, row):
        g11, g12, g22 = metric(xx, tt)
        det, sq = _det_sqrt(g11, g12, g22, scalar_ok=False)
        h11, h12, h22 = second_form(xx, tt)
        deth = h11 * h22 - h12 ** 2
        kk = curvature_k(xx, tt)
        fx = derivative(f, xx, tt, s, axis=0, nth=1)
        ft = derivative(f, xx, tt, s, axis=1, nth=1)
        with np.errstate(invalid="ignore", divide="ignore"):
            if row == 0:
                return sq * kk * (h22 * fx - h12 * ft) / deth
            return sq * kk * (-h12 * fx + h11 * ft) / deth

    div = derivative(lambda a, b: flux(a, b, 0), x, t, s, axis=0, nth=1)
    div = div + derivative(lambda a, b: flux(a, b, 1), x, t, s, axis=1, nth=1)
    g11, g12, g22 = metric(x, t)
    det, sq = _det_sqrt(g11, g12, g22, scalar_ok=True)
    return div / sq


NEAR_SINGULAR_RTOL = 1e-10


def near_singular_mask(h11, h12, h22, rtol: float = NEAR_SINGULAR_RTOL):
    """Points where the second fundamental form is numerically singular."""
    det = h11 * h22 - h12 ** 2
    trace = h11 + h22
    return np.abs(det) < rtol * trace ** 2


@dataclass(frozen=True)
class SurfaceProviders:
    """Callable bundle describing one surface: position, forms, curvatures.

    Each callable takes broadcastable (x, t) arrays; metric and second_form
    return coefficient triples, curvatures returns a CurvaturePair.
    """

    position: Callable[[np.ndarray, np.ndarray], np.ndarray]
    metric: MetricProvider
    second_form: Callable[[np.ndarray, np.ndarray], tuple]
    curvatures: Callable[[np.ndarray, np.ndarray], CurvaturePair]

    def mean_curvature(self, x, t):
        return self.curvatures(x, t).H

    def gauss_curvature(self, x, t):
        return self.curvatures(x, t).K


def willmore_like_residual(
    providers: SurfaceProviders, a: float, b: float, x, t, s: Stencil | None = None
):
    """Residual of the surface equation Lap(H) + a H^3 + b H K.

    Returns (residual, scale) where scale is the pointwise magnitude of the
    largest algebraic term, suitable for relative comparisons.
    """
    lap_h = laplace_beltrami(providers.mean_curvature, providers.metric, x, t, s)
    cur = providers.curvatures(np.asarray(x, float), np.asarray(t, float))
    t_a = a * cur.H ** 3
    t_b = b * cur.H * cur.K
    scale = np.maximum(np.maximum(np.abs(t_a), np.abs(t_b)), 1e-30)
    return lap_h + t_a + t_b, scale


def shape_equation_residual(
    providers: SurfaceProviders,
    lagrangian,
    x,
    t,
    s: Stencil | None = None,
):
    """Residual of the generalized shape equation for a polynomial energy.

    (Lap + 4H^2 - 2K) dE/dH + 2 (div-bar + 2KH) dE/dK - 4 H E + 2p,
    where div-bar is the curvature-weighted operator.  Returns
    (residual, scale) with scale the largest of the four term magnitudes.
    """
    x = np.asarray(x, dtype=float)
    t = np.asarray(t, dtype=float)

    def field_eh(xx, tt):
        c = providers.curvatures(xx, tt)
        return lagrangian.dH(c.H, c.K)

    def field_ek(xx, tt):
        c = providers.curvatures(xx, tt)
        return lagrangian.dK(c.H, c.K)

    cur = providers.curvatures(x, t)
    h_, k_ = cur.H, cur.K
    term1 = laplace_beltrami(field_eh, providers.metric, x, t, s) + (
        4.0 * h_ ** 2 - 2.0 * k_
    ) * lagrangian.dH(h_, k_)
    # energies with no K-dependence contribute nothing through h^{ij}
    if getattr(lagrangian, "depends_on_k", lambda: True)():
        nabla_term = nabla_dot_bar(
            field_ek,
            providers.metric,
            lambda a, b: providers.curvatures(a, b).K,
            providers.second_form,
            x,
            t,
            s,
        )
    else:
        nabla_term = np.zeros_like(h_)
    term2 = 2.0 * (nabla_term + 2.0 * k_ * h_ * lagrangian.dK(h_, k_))
    term3 = -4.0 * h_ * lagrangian.eval(h_, k_)
    term4 = 2.0 * lagrangian.p + np.zeros_like(term3)
    scale = np.maximum.reduce(
        [np.abs(term1), np.abs(term2), np.abs(term3), np.abs(term4), np.full_like(term3, 1e-30)]
    )
    return term1 + term2 + term3 + term4, scale
