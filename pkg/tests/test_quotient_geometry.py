import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from lomse.errors import DomainError, NotAGraph
from lomse.params import LomseTriple, derive_params
from lomse.quotient_geometry import (
    PlaneCurve,
    QuotientMetric,
    adaptive_gauss_legendre,
    curve_length,
    loc_length_constant,
    require_graph,
    sphere_volume,
)

REPS = [(3, 2, 2), (3, 2, 4), (5, 4, 6), (7, 4, 2)]


def metric(t, **kw):
    return QuotientMetric(derive_params(LomseTriple(*t)), **kw)


def test_sphere_volumes():
    assert sphere_volume(1) == pytest.approx(2 * math.pi, rel=1e-15)
    assert sphere_volume(2) == pytest.approx(4 * math.pi, rel=1e-15)
    assert sphere_volume(3) == pytest.approx(2 * math.pi ** 2, rel=1e-15)


def test_cone_constants():
    assert loc_length_constant(derive_params(LomseTriple(3, 2, 2))) == pytest.approx(2.25, rel=1e-15)
    L = metric((3, 2, 4)).loc_arclength(1.0)
    assert L == pytest.approx(11 * math.sqrt(11) / 4, rel=1e-15)


def test_sigma0_scaling():
    M0, M1 = metric((3, 2, 2)), metric((3, 2, 2), include_sigma0=True)
    r, rho = 0.7, 0.3
    assert M1.conformal_factor(r, rho) == pytest.approx(M0.conformal_factor(r, rho) * (2 * math.pi ** 2) ** 2)


def test_domain():
    M = metric((3, 2, 2))
    with pytest.raises(DomainError):
        M.conformal_factor(0.0, 1.0)
    with pytest.raises(DomainError):
        M.gaussian_curvature(-1.0, 0.0)


@pytest.mark.parametrize("t", REPS)
def test_curvature_along_ray(t):
    M = metric(t)
    P = M.params
    r = np.geomspace(0.1, 10, 21)
    prod = M.gaussian_curvature(r, P.tan_theta * r) * M.loc_arclength(r) ** 2
    assert np.allclose(prod, float(P.a_coeff), rtol=1e-12, atol=0)


@pytest.mark.parametrize("t", REPS)
def test_christoffel_finite_differences(t):
    M = metric(t)
    r, rho, h = 0.8, 0.45, 1e-6
    A, B = M.christoffel_AB(r, rho)
    lu = lambda x, y: 0.5 * math.log(M.conformal_factor(x, y))  # noqa: E731
    assert A == pytest.approx((lu(r + h, rho) - lu(r - h, rho)) / (2 * h), rel=1e-8)
    assert B == pytest.approx((lu(r, rho + h) - lu(r, rho - h)) / (2 * h), rel=1e-8)


def test_quadrature_known_integral():
    assert adaptive_gauss_legendre(np.sin, [0, math.pi], atol=0, rtol=1e-14) == pytest.approx(2, rel=1e-14)
    assert adaptive_gauss_legendre(np.exp, [1, 0], atol=0, rtol=1e-14) == pytest.approx(1 - math.e, rel=1e-14)


def test_cone_segment_length_from_origin():
    M = metric((3, 2, 2))
    r = np.linspace(0, 1, 101)
    c = PlaneCurve.graph(r, M.params.tan_theta * r)
    assert curve_length(M, c, atol=0, rtol=1e-13) == pytest.approx(2.25, rel=1e-12)


def test_cone_length_swept_volume():
    M = metric((3, 2, 2), include_sigma0=True)
    r = np.linspace(0, 1, 101)
    c = PlaneCurve.graph(r, M.params.tan_theta * r)
    assert curve_length(M, c, atol=0, rtol=1e-13) == pytest.approx(2.25 * 2 * math.pi ** 2, rel=1e-12)


def test_graph_checks():
    c = PlaneCurve(np.arange(4.0), np.array([1, 2, 1.5, 3.0]), np.zeros(4), kind="arclength")
    with pytest.raises(NotAGraph):
        require_graph(c)
    with pytest.raises(ValueError):
        PlaneCurve(np.array([0.0, 0.0, 1.0]), np.ones(3), np.arange(3.0))


def _wave(amp, freq):
    r = np.linspace(0.2, 1.5, 301)
    return PlaneCurve.graph(r, 0.5 * r + amp * np.sin(freq * r))


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(REPS), st.floats(0.0, 0.2), st.floats(0.5, 6.0), st.floats(0.3, 3.0))
def test_dilation_covariance(t, amp, freq, c):
    M = metric(t)
    curve = _wave(amp, freq)
    L = curve_length(M, curve, atol=0, rtol=1e-12)
    Lc = curve_length(M, curve.dilated(c), atol=0, rtol=1e-12)
    assert Lc == pytest.approx(c ** (M.params.n + 1) * L, rel=1e-9)


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(REPS), st.floats(0.0, 0.2), st.floats(0.5, 6.0))
def test_reversal_invariance(t, amp, freq):
    M = metric(t)
    curve = _wave(amp, freq)
    a = curve_length(M, curve, atol=0, rtol=1e-12)
    b = curve_length(M, curve.reversed(), atol=0, rtol=1e-12)
    assert b == pytest.approx(a, rel=1e-10)


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(REPS), st.floats(0.3, 3.0), st.floats(-2.0, 2.0), st.floats(0.2, 5.0))
def test_conformal_factor_homogeneity(t, r, rho, c):
    M = metric(t)
    n = M.params.n
    assert M.conformal_factor(c * r, c * rho) == pytest.approx(c ** (2 * n) * M.conformal_factor(r, rho), rel=1e-12)
