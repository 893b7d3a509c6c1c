"""Conformal geometry of the quotient half plane {(r, rho): r > 0}.

The metric is ``u(r, rho) * (dr^2 + drho^2)`` with

    u = (r^2 + lambda^2 rho^2)^p * r^(2(n-p)),

optionally multiplied by sigma0^2 (the volume of the unit n-sphere squared).
With sigma0 included, the length of a curve is the n+1 dimensional volume of
the hypersurface it sweeps out upstairs.  All functions accept numpy arrays.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import DomainError, NotAGraph
from .params import LomseParams

# returns r, rho, dr/dparam, drho/dparam
CurveEvaluator = Callable[[np.ndarray], tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]]

PARAM_KINDS = ("graph", "arclength", "log-radius")


def sphere_volume(n: int) -> float:
    """Volume of the unit n-sphere in R^(n+1)."""
    return 2.0 * math.pi ** ((n + 1) / 2) / math.gamma((n + 1) / 2)


def _check_r(r):
    r = np.asarray(r, dtype=float)
    if np.any(~(r > 0)):
        raise DomainError("quotient geometry is only defined for r > 0")
    return r


def _scalar(x):
    return float(x) if np.ndim(x) == 0 else x


@dataclass(frozen=True)
class QuotientMetric:
    params: LomseParams
    include_sigma0: bool = False

    @property
    def sigma0(self) -> float:
        return sphere_volume(self.params.n)

    @property
    def _scale(self) -> float:
        return self.sigma0 if self.include_sigma0 else 1.0

    def conformal_factor(self, r, rho):
        r = _check_r(r)
        rho = np.asarray(rho, dtype=float)
        P = self.params
        u = (r * r + float(P.lambda_sq) * rho * rho) ** P.p * r ** (2 * (P.n - P.p))
        return _scalar(u * self._scale ** 2)

    def slice_volume(self, r, rho):
        """Volume of the n-dimensional orbit over (r, rho); always carries sigma0."""
        r = _check_r(r)
        rho = np.asarray(rho, dtype=float)
        P = self.params
        v = (r * r + float(P.lambda_sq) * rho * rho) ** (P.p / 2) * r ** (P.n - P.p)
        return _scalar(self.sigma0 * v)

    def christoffel_AB(self, r, rho):
        """A = (log u)_r / 2 and B = (log u)_rho / 2."""
        r = _check_r(r)
        rho = np.asarray(rho, dtype=float)
        P = self.params
        l2 = float(P.lambda_sq)
        q = l2 * rho * rho + r * r
        A = ((P.n - P.p) * l2 * rho * rho + P.n * r * r) / (q * r)
        B = P.p * l2 * rho / q
        return _scalar(A), _scalar(B)

    def gaussian_curvature(self, r, rho):
        """Curvature of the metric without the sigma0 factor."""
        r = _check_r(r)
        rho = np.asarray(rho, dtype=float)
        P = self.params
        l2 = float(P.lambda_sq)
        q = r * r + l2 * rho * rho
        u = q ** P.p * r ** (2 * (P.n - P.p))
        K = ((P.n - P.p) / (r * r) - P.p * (l2 - 1) * (r * r - l2 * rho * rho) / (q * q)) / u
        return _scalar(K)

    def loc_arclength(self, r):
        """Arclength from the origin along rho = tan(theta) r, without sigma0."""
        r = _check_r(r)
        return _scalar(loc_length_constant(self.params) * r ** (self.params.n + 1))

    def metric_speed(self, r, rho, dr, drho):
        """sqrt(u) * |velocity|, the length integrand (respects include_sigma0)."""
        P = self.params
        l2 = float(P.lambda_sq)
        root_u = (r * r + l2 * rho * rho) ** (P.p / 2) * np.abs(r) ** (P.n - P.p)
        return self._scale * root_u * np.hypot(dr, drho)


def loc_length_constant(params: LomseParams) -> float:
    """c with s(r) = c r^(n+1) along the cone ray."""
    t2 = float(params.tan_theta_sq)
    l2 = float(params.lambda_sq)
    return math.sqrt(1 + t2) * (1 + l2 * t2) ** (params.p / 2) / (params.n + 1)


@dataclass(frozen=True, eq=False)
class PlaneCurve:
    """Sampled curve in the (r, rho) half plane.

    ``param`` is strictly monotone.  An optional ``evaluator`` gives exact
    positions and velocities at arbitrary parameters (dense output from an
    integrator); otherwise a cubic spline through the samples is used.
    ``jet``, when present, holds exact (rho_r, rho_rr) at the samples.
    """

    param: np.ndarray
    r: np.ndarray
    rho: np.ndarray
    kind: str = "graph"
    evaluator: CurveEvaluator | None = None
    jet: tuple[np.ndarray, np.ndarray] | None = None
    tail_length: Callable[["QuotientMetric"], float] | None = field(default=None, repr=False)

    def __post_init__(self):
        param = np.asarray(self.param, dtype=float)
        r = np.asarray(self.r, dtype=float)
        rho = np.asarray(self.rho, dtype=float)
        if not (param.shape == r.shape == rho.shape) or param.ndim != 1:
            raise ValueError("param, r and rho must be 1-d arrays of equal length")
        if param.size < 2:
            raise ValueError("a curve needs at least two samples")
        if self.kind not in PARAM_KINDS:
            raise ValueError(f"unknown parameterization {self.kind!r}")
        dp = np.diff(param)
        if not (np.all(dp > 0) or np.all(dp < 0)):
            raise ValueError("curve parameter must be strictly monotone")
        if np.any(~(r[1:-1] > 0)):
            raise DomainError("interior samples must have r > 0")
        if np.any((np.diff(r) == 0) & (np.diff(rho) == 0)):
            raise ValueError("consecutive samples coincide")
        object.__setattr__(self, "param", param)
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "rho", rho)

    @classmethod
    def graph(cls, r, rho, **kw) -> "PlaneCurve":
        r = np.asarray(r, dtype=float)
        return cls(r.copy(), r, rho, kind="graph", **kw)

    def __len__(self):
        return self.param.size

    def reversed(self) -> "PlaneCurve":
        ev = self.evaluator
        rev_ev = None
        if ev is not None:
            def rev_ev(s):
                r, rho, dr, drho = ev(-s)
                return r, rho, -dr, -drho
        jet = None if self.jet is None else (self.jet[0][::-1], self.jet[1][::-1])
        return PlaneCurve(-self.param[::-1], self.r[::-1], self.rho[::-1], self.kind,
                          rev_ev, jet, self.tail_length)

    def dilated(self, c: float) -> "PlaneCurve":
        """The image under (r, rho) -> (c r, c rho); the parameter is unchanged."""
        if not c > 0:
            raise DomainError("dilation factor must be positive")
        # a graph stays parameterized by r; other kinds keep their parameter
        pc = c if self.kind == "graph" else 1.0
        ev = self.evaluator
        dil_ev = None
        if ev is not None:
            def dil_ev(s):
                r, rho, dr, drho = ev(s / pc)
                return c * r, c * rho, c / pc * dr, c / pc * drho
        jet = None if self.jet is None else (self.jet[0], self.jet[1] / c)
        tail = self.tail_length
        dil_tail = None
        if tail is not None:
            def dil_tail(metric):
                return c ** (metric.params.n + 1) * tail(metric)
        return PlaneCurve(pc * self.param, c * self.r, c * self.rho, self.kind,
                          dil_ev, jet, dil_tail)

    def spline_evaluator(self) -> CurveEvaluator:
        from scipy.interpolate import CubicSpline

        order = np.argsort(self.param)
        s = self.param[order]
        sr = CubicSpline(s, self.r[order])
        srho = CubicSpline(s, self.rho[order])
        dsr, dsrho = sr.derivative(), srho.derivative()

        def ev(x):
            return sr(x), srho(x), dsr(x), dsrho(x)

        return ev


# -- adaptive composite Gauss-Legendre ------------------------------------

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(10)


def _gl_panels(f, a, b):
    """10-point Gauss-Legendre on each panel [a_i, b_i] (vectorized)."""
    mid = 0.5 * (a + b)
    half = 0.5 * (b - a)
    x = mid[:, None] + half[:, None] * _GL_NODES[None, :]
    vals = np.asarray(f(x.ravel()), dtype=float).reshape(x.shape)
    return half * (vals @ _GL_WEIGHTS)


def adaptive_gauss_legendre(f, breakpoints, atol=1e-10, rtol=1e-10, max_panels=200_000):
    """Integrate a vectorized ``f`` over [breakpoints[0], breakpoints[-1]].

    Each panel is accepted when its 10-point estimate agrees with the sum over
    its two halves within its share of ``max(atol, rtol * |I|)``; rejected
    panels are bisected.
    """
    bp = np.asarray(breakpoints, dtype=float)
    sign = 1.0
    if bp[0] > bp[-1]:
        bp, sign = bp[::-1], -1.0
    width = bp[-1] - bp[0]
    if width == 0:
        return 0.0
    a, b = bp[:-1], bp[1:]
    keep = b > a
    a, b = a[keep], b[keep]
    coarse = _gl_panels(f, a, b)
    total_done = 0.0
    n_panels = a.size
    while a.size:
        m = 0.5 * (a + b)
        left = _gl_panels(f, a, m)
        right = _gl_panels(f, m, b)
        fine = left + right
        estimate = abs(total_done + fine.sum())
        budget = max(atol, rtol * estimate) * (b - a) / width
        ok = np.abs(fine - coarse) <= budget
        total_done += fine[ok].sum()
        bad = ~ok
        if not bad.any():
            break
        n_panels += int(bad.sum())
        if n_panels > max_panels:
            raise RuntimeError("adaptive quadrature exceeded its panel budget")
        a, m_, b = a[bad], m[bad], b[bad]
        a, b = np.concatenate([a, m_]), np.concatenate([m_, b])
        coarse = np.concatenate([left[bad], right[bad]])
    return sign * total_done


def curve_length(metric: QuotientMetric, curve: PlaneCurve, atol=1e-10, rtol=1e-10) -> float:
    """Length of ``curve`` in the quotient metric (the swept volume with sigma0).

    An endpoint at r = 0 on a graph curve is handled in the variable
    sigma = r^(n+1), where the integrand is bounded.  ``curve.tail_length``
    adds a known contribution beyond the first sample (e.g. from the origin).
    """
    if np.any(curve.r < 0):
        raise DomainError("curve leaves the half plane r >= 0")
    ev = curve.evaluator or curve.spline_evaluator()
    s = curve.param
    n = metric.params.n

    def integrand(x):
        r, rho, dr, drho = ev(x)
        return metric.metric_speed(r, rho, dr, drho)

    zero_end = [i for i in (0, -1) if curve.r[i] == 0]
    if zero_end and curve.kind != "graph":
        raise DomainError("only graph curves may touch r = 0 at an endpoint")
    lo, hi = 0, s.size - 1
    total = 0.0
    for i in zero_end:
        # first/last panel in sigma = |r|^(n+1) so the integrand stays bounded
        near = 1 if i == 0 else s.size - 2
        r_near = abs(s[near])
        sig = r_near ** (n + 1)

        def sub(x, sgn=np.sign(s[near] - s[i])):
            rr = sgn * x ** (1.0 / (n + 1))
            drds = np.abs(rr) / ((n + 1) * np.maximum(x, 1e-300))
            return integrand(rr) * drds

        total += adaptive_gauss_legendre(sub, np.linspace(0.0, sig, 9), atol, rtol)
        if i == 0:
            lo = 1
        else:
            hi = s.size - 2
    if hi > lo:
        total += abs(adaptive_gauss_legendre(integrand, s[lo:hi + 1], atol, rtol))
    if curve.tail_length is not None:
        total += curve.tail_length(metric)
    return total


def require_graph(curve: PlaneCurve):
    dr = np.diff(curve.r)
    if not (np.all(dr > 0) or np.all(dr < 0)):
        raise NotAGraph("r is not strictly monotone along the curve")
