"""The (phi, psi) system in t = log r and everything built on its orbits.

With phi = rho/r and psi = phi_t the minimal graph equation for rho(r)
becomes an autonomous planar system with stationary points at the origin
and at the cone point (tan theta, 0).

Orbits that spiral into the cone point shrink far below the resolution of
phi itself, so integration switches to the deviation ``dev = phi - tan theta``
once phi is comparable to tan theta.  The right-hand side is written so that
its cone-point term is an explicit multiple of ``dev``:

    n - p + (1 - lambda^2) p / q  ==  (n - p) lambda^2 (phi^2 - tan^2 theta) / q,

with q = 1 + lambda^2 phi^2, which keeps every quantity relatively accurate
in both charts.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import brentq

from .errors import (
    Divergence,
    MonotonicityViolation,
    NotAGraph,
    NotOscillating,
    StepSizeUnderflow,
    WrongType,
)
from .params import (
    ConeType,
    LomseParams,
    fixed_point_eigenvalues_exact,
    origin_eigenvalues_exact,
)
from .quotient_geometry import (
    PlaneCurve,
    QuotientMetric,
    curve_length,
    loc_length_constant,
    require_graph,
)
from .surd import Surd


@dataclass(frozen=True)
class PhaseState:
    t: float
    phi: float
    psi: float

    def __post_init__(self):
        if not all(math.isfinite(v) for v in (self.t, self.phi, self.psi)):
            raise ValueError("phase state must be finite")


class EventKind(str, enum.Enum):
    LOC_CROSSING = "loc_crossing"
    AXIS_CROSSING = "axis_crossing"
    FIXED_POINT_ENTRY = "fixed_point_entry"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class OrbitEvent:
    t: float
    kind: EventKind
    phi: float
    psi: float
    dev: float


@dataclass(frozen=True)
class Tolerances:
    """Integrator and event settings.

    ``atol`` is a floor only; orbits decay over many orders of magnitude and
    the error control is effectively relative.
    """

    rtol: float = 1e-12
    atol: float = 1e-200
    first_step: float = 1e-3
    max_radius: float = 1e3
    entry_radius: float = 1e-10

    def __post_init__(self):
        for name in ("rtol", "atol", "first_step", "max_radius", "entry_radius"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")


class _Field:
    """Float constants of the vector field for one parameter set."""

    def __init__(self, params: LomseParams):
        self.n = params.n
        self.p = params.p
        self.l2 = float(params.lambda_sq)
        self.phi0 = params.tan_theta
        self.cone_coeff = (params.n - params.p) * self.l2

    def dpsi(self, phi, dev, psi):
        q = 1.0 + self.l2 * phi * phi
        bracket = ((self.n - self.p + self.p / q) * psi
                   + self.cone_coeff * dev * (phi + self.phi0) * phi / q)
        return -psi - bracket * (1.0 + (phi + psi) ** 2)


def vector_field(params: LomseParams, state: PhaseState) -> tuple[float, float]:
    """(phi_t, psi_t) at ``state``."""
    f = _Field(params)
    dev = state.phi - f.phi0
    return state.psi, float(f.dpsi(state.phi, dev, state.psi))


def vector_field_dev(params: LomseParams, dev: float, psi: float) -> tuple[float, float]:
    """Same field with the cone-point deviation given exactly."""
    f = _Field(params)
    return psi, float(f.dpsi(f.phi0 + dev, dev, psi))


@dataclass(frozen=True, eq=False)
class _Segment:
    chart: str  # "origin": y = (phi, psi); "center": y = (dev, psi)
    t0: float
    t1: float
    sol: object  # scipy OdeSolution, or None for a constant segment
    y0: tuple[float, float] = (0.0, 0.0)

    def raw(self, t):
        if self.sol is None:
            t = np.asarray(t, dtype=float)
            return np.full_like(t, self.y0[0]), np.full_like(t, self.y0[1])
        y = self.sol(t)
        return y[0], y[1]


@dataclass(frozen=True, eq=False)
class Orbit:
    """Dense trajectory of the (phi, psi) system.

    ``t``, ``phi``, ``psi`` and ``dev`` hold the integrator's accepted steps;
    :meth:`evaluate` interpolates between them with the dense output.
    """

    params: LomseParams
    t: np.ndarray
    phi: np.ndarray
    psi: np.ndarray
    dev: np.ndarray
    events: tuple[OrbitEvent, ...]
    segments: tuple[_Segment, ...] = field(repr=False)
    stop_reason: str = "t_end"
    tolerances: Tolerances = Tolerances()
    meta: dict = field(default_factory=dict)

    @property
    def states(self) -> list[PhaseState]:
        return [PhaseState(float(a), float(b), float(c))
                for a, b, c in zip(self.t, self.phi, self.psi)]

    @property
    def t_start(self) -> float:
        return float(self.t[0])

    @property
    def t_stop(self) -> float:
        return float(self.t[-1])

    def events_of(self, kind: EventKind) -> list[OrbitEvent]:
        return [e for e in self.events if e.kind == kind]

    def evaluate(self, t):
        """(phi, dev, psi) at times inside the orbit's range (vectorized)."""
        t = np.asarray(t, dtype=float)
        scalar = t.ndim == 0
        t = np.atleast_1d(t)
        phi = np.empty_like(t)
        dev = np.empty_like(t)
        psi = np.empty_like(t)
        phi0 = self.params.tan_theta
        edges = np.array([s.t1 for s in self.segments[:-1]])
        which = np.searchsorted(edges, t, side="left")
        for i, seg in enumerate(self.segments):
            mask = which == i
            if not mask.any():
                continue
            a, b = seg.raw(t[mask])
            if seg.chart == "origin":
                phi[mask], dev[mask] = a, a - phi0
            else:
                phi[mask], dev[mask] = phi0 + a, a
            psi[mask] = b
        if scalar:
            return float(phi[0]), float(dev[0]), float(psi[0])
        return phi, dev, psi

    def resample(self, dt: float, t_lo: float | None = None, t_hi: float | None = None):
        """Uniform grid on [t_lo, t_hi] with spacing at most ``dt``."""
        t_lo = self.t_start if t_lo is None else t_lo
        t_hi = self.t_stop if t_hi is None else t_hi
        n = max(2, int(math.ceil((t_hi - t_lo) / dt)) + 1)
        return np.linspace(t_lo, t_hi, n)


# -- integration ---------------------------------------------------------

_SWITCH_UP = 0.6
_SWITCH_DOWN = 0.4


def _make_events(f: _Field, chart: str, tol: Tolerances):
    phi0 = f.phi0

    if chart == "origin":
        def to_pdp(y):
            return y[0], y[0] - phi0
    else:
        def to_pdp(y):
            return phi0 + y[0], y[0]

    def loc(t, y):
        return to_pdp(y)[1]

    def axis(t, y):
        return y[1]

    def entry(t, y):
        return math.hypot(to_pdp(y)[1], y[1]) - tol.entry_radius
    entry.direction = -1

    def diverge(t, y):
        return math.hypot(to_pdp(y)[0], y[1]) - tol.max_radius
    diverge.direction = 1
    diverge.terminal = True

    if chart == "origin":
        def switch(t, y):
            return y[0] - _SWITCH_UP * phi0
        switch.direction = 1
    else:
        def switch(t, y):
            return y[0] + (1 - _SWITCH_DOWN) * phi0
        switch.direction = -1
    switch.terminal = True
    return loc, axis, entry, diverge, switch


def _rhs(f: _Field, chart: str):
    phi0 = f.phi0
    if chart == "origin":
        def rhs(t, y):
            return [y[1], f.dpsi(y[0], y[0] - phi0, y[1])]
    else:
        def rhs(t, y):
            return [y[1], f.dpsi(phi0 + y[0], y[0], y[1])]
    return rhs


def _constant_orbit(params, start, t_end, tol, dev):
    chart = "center" if start.phi > _SWITCH_UP * params.tan_theta else "origin"
    y0 = (dev, start.psi) if chart == "center" else (start.phi, start.psi)
    seg = _Segment(chart, start.t, t_end, None, y0)
    t = np.array(sorted([start.t, t_end]))
    return Orbit(params, t, np.full(2, start.phi), np.full(2, start.psi), np.full(2, dev),
                 (), (seg,), "stationary", tol)


def integrate(params: LomseParams, start: PhaseState, t_end: float,
              tolerances: Tolerances | None = None, *, start_dev: float | None = None,
              stop_at_entry: bool = False, max_crossings: int | None = None) -> Orbit:
    """Integrate from ``start`` to ``t_end`` (forward only) with event detection.

    Events: ``loc_crossing`` (phi = tan theta), ``axis_crossing`` (psi = 0)
    and ``fixed_point_entry`` (distance to the cone point drops below
    ``entry_radius``).  Integration stops early after ``max_crossings`` loc
    crossings or, with ``stop_at_entry``, at the first entry.

    ``start_dev`` supplies phi - tan(theta) exactly for starts close to the
    cone point.
    """
    tol = tolerances or Tolerances()
    if not t_end > start.t:
        raise ValueError("t_end must exceed the start time")
    f = _Field(params)
    phi0 = f.phi0
    dev = start.phi - phi0 if start_dev is None else float(start_dev)
    if (dev == 0.0 and start.psi == 0.0) or (start.phi == 0.0 and start.psi == 0.0):
        return _constant_orbit(params, start, t_end, tol, dev)

    chart = "center" if start.phi > _SWITCH_UP * phi0 else "origin"
    y = np.array([dev if chart == "center" else start.phi, start.psi])
    t = start.t
    segments, events = [], []
    ts, phis, psis, devs = [], [], [], []
    crossings_left = max_crossings
    stop_reason = "t_end"

    while True:
        loc, axis, entry, diverge, switch = _make_events(f, chart, tol)
        g_loc = loc(t, y)
        if crossings_left is not None:
            loc.terminal = crossings_left + (1 if g_loc == 0 else 0)
        if stop_at_entry:
            entry.terminal = True
        sol = solve_ivp(_rhs(f, chart), (t, t_end), y, method="DOP853",
                        rtol=tol.rtol, atol=tol.atol, dense_output=True,
                        first_step=min(tol.first_step, 0.5 * (t_end - t)),
                        events=(loc, axis, entry, diverge, switch))
        if sol.status == -1:
            raise StepSizeUnderflow(f"integrator stalled at t={sol.t[-1]:.6g}: {sol.message}")
        if not np.all(np.isfinite(sol.y)):
            raise Divergence("non-finite state encountered")
        seg = _Segment(chart, float(sol.t[0]), float(sol.t[-1]), sol.sol)
        segments.append(seg)

        a, b = sol.y
        if chart == "origin":
            p_, d_ = a, a - phi0
        else:
            p_, d_ = phi0 + a, a
        first = 0 if not ts else 1
        ts.append(sol.t[first:])
        phis.append(p_[first:])
        devs.append(d_[first:])
        psis.append(b[first:])

        kinds = (EventKind.LOC_CROSSING, EventKind.AXIS_CROSSING, EventKind.FIXED_POINT_ENTRY)
        seg_events = []
        for kind, te, ye in zip(kinds, sol.t_events[:3], sol.y_events[:3]):
            for tt, yy in zip(te, ye):
                if tt <= t:
                    continue
                if chart == "origin":
                    ev = OrbitEvent(float(tt), kind, float(yy[0]), float(yy[1]), float(yy[0] - phi0))
                else:
                    ev = OrbitEvent(float(tt), kind, float(phi0 + yy[0]), float(yy[1]), float(yy[0]))
                seg_events.append(ev)
        seg_events.sort(key=lambda e: e.t)
        events.extend(seg_events)

        if len(sol.t_events[3]):
            raise Divergence(f"|state| exceeded {tol.max_radius} at t={sol.t_events[3][0]:.6g}")
        if crossings_left is not None:
            crossings_left -= sum(e.kind == EventKind.LOC_CROSSING for e in seg_events)
        if sol.status == 0:
            break
        if crossings_left is not None and crossings_left <= 0:
            stop_reason = "crossings"
            break
        if stop_at_entry and any(e.kind == EventKind.FIXED_POINT_ENTRY for e in seg_events):
            stop_reason = "fixed_point_entry"
            break
        # chart switch
        t = float(sol.t[-1])
        if chart == "origin":
            y = np.array([sol.y[0, -1] - phi0, sol.y[1, -1]])
            chart = "center"
        else:
            y = np.array([phi0 + sol.y[0, -1], sol.y[1, -1]])
            chart = "origin"

    t_arr = np.concatenate(ts)
    return Orbit(params, t_arr, np.concatenate(phis), np.concatenate(psis), np.concatenate(devs),
                 tuple(events), tuple(segments), stop_reason, tol)


def origin_unstable_mu(params: LomseParams) -> Surd:
    """Positive root of mu^2 + (n+1) mu - (p lambda^2 - n)."""
    return origin_eigenvalues_exact(params)[0]


def origin_unstable_orbit(params: LomseParams, epsilon: float = 1e-8, *,
                          n_crossings: int | None = None, t_max: float = 400.0,
                          tolerances: Tolerances | None = None) -> Orbit:
    """The orbit leaving the origin along its unstable eigendirection.

    Launched at t = 0 from epsilon * (1, mu_plus).  Without ``n_crossings`` it
    stops at fixed-point entry; with it, it runs until that many loc crossings
    (Type II only, where crossings never end).
    """
    if not 0 < epsilon < 1e-2:
        raise ValueError("epsilon must be small and positive")
    mu = float(origin_unstable_mu(params))
    start = PhaseState(0.0, epsilon, epsilon * mu)
    if n_crossings is None:
        orbit = integrate(params, start, t_max, tolerances, stop_at_entry=True)
    else:
        orbit = integrate(params, start, t_max, tolerances, max_crossings=n_crossings)
    orbit.meta.update(epsilon=epsilon, mu_plus=mu, launch="origin")
    return orbit


def launch_sensitivity(params: LomseParams, epsilon: float = 1e-8, n_crossings: int = 3,
                       tolerances: Tolerances | None = None) -> float:
    """Max relative change of psi at the first loc crossings when epsilon is halved.

    The unstable manifold is one orbit, so launching at epsilon/2 must only
    shift time; a large value flags a bad linear launch.
    """
    a = origin_unstable_orbit(params, epsilon, n_crossings=n_crossings, tolerances=tolerances)
    b = origin_unstable_orbit(params, epsilon / 2, n_crossings=n_crossings, tolerances=tolerances)
    ca = a.events_of(EventKind.LOC_CROSSING)
    cb = b.events_of(EventKind.LOC_CROSSING)
    m = min(len(ca), len(cb))
    if m == 0:
        raise NotOscillating("no loc crossings to compare")
    return max(abs(x.psi - y.psi) / abs(x.psi) for x, y in zip(ca[:m], cb[:m]))


def origin_exponent_fit(params: LomseParams, epsilon: float = 1e-12,
                        band: tuple[float, float] = (1e-10, 1e-7)) -> float:
    """Growth rate of log phi for a generic small perturbation of the origin.

    The orbit starts at (epsilon, 0), off the eigendirection.  The fit uses
    the stretch where phi lies in ``band``: late enough for the stable
    component to have died out, early enough to stay linear.
    """
    orbit = _until_amplitude(params, PhaseState(0.0, epsilon, 0.0), band[1])
    ts = np.linspace(orbit.t_start, orbit.t_stop, 2001)
    phi = orbit.evaluate(ts)[0]
    keep = (phi >= band[0]) & (phi <= band[1])
    if keep.sum() < 10:
        raise NotOscillating("perturbation never reached the fitting band")
    return float(np.polyfit(ts[keep], np.log(phi[keep]), 1)[0])


def _until_amplitude(params, start, level):
    f = _Field(params)

    def hit(t, y):
        return y[0] - level
    hit.terminal = True
    hit.direction = 1
    sol = solve_ivp(_rhs(f, "origin"), (start.t, start.t + 200.0), [start.phi, start.psi],
                    method="DOP853", rtol=1e-12, atol=1e-200, first_step=1e-3,
                    dense_output=True, events=hit)
    if sol.status != 1:
        raise NotOscillating("perturbation did not grow")
    seg = _Segment("origin", float(sol.t[0]), float(sol.t[-1]), sol.sol)
    return Orbit(params, sol.t, sol.y[0], sol.y[1], sol.y[0] - f.phi0, (), (seg,), "amplitude")


# -- solution family -----------------------------------------------------

@dataclass(frozen=True, eq=False)
class SolutionCurve:
    """One analytic Dirichlet solution: the orbit cut at a loc crossing and rescaled.

    ``length`` comes from the dilation identity evaluated at the endpoint
    (see :func:`endpoint_length`); ``deficit`` = L_LOC - length is computed
    without cancellation.  ``quadrature_length`` integrates the metric along
    ``curve`` independently.
    """

    crossing_index: int
    crossing_t: float
    rescale_factor: float
    curve: PlaneCurve
    length: float
    deficit: float
    quadrature_length: float
    endpoint_error: float
    psi_at_end: float


def endpoint_length(params: LomseParams, phi: float, psi: float) -> float:
    """Length of the orbit from the origin up to state (phi, psi), rescaled to r = 1.

    The metric is homogeneous of degree n+1 under dilations, which in t = log r
    gives d/dt[e^((n+1)t) (F - psi F_psi)] = (n+1) e^((n+1)t) F along solutions,
    F = (1 + lambda^2 phi^2)^(p/2) sqrt(1 + (phi + psi)^2).  Integrating from
    the origin leaves only the endpoint term.
    """
    l2 = float(params.lambda_sq)
    x = phi + psi
    return ((1 + l2 * phi * phi) ** (params.p / 2) * (1 + phi * x)
            / math.sqrt(1 + x * x) / (params.n + 1))


def crossing_deficit(params: LomseParams, psi: float) -> float:
    """L_LOC - endpoint_length(tan theta, psi), free of cancellation."""
    phi0 = params.tan_theta
    l2 = float(params.lambda_sq)
    x = phi0 + psi
    c0 = (1 + l2 * phi0 * phi0) ** (params.p / 2) / (params.n + 1)
    root = math.sqrt(1 + x * x)
    return c0 * psi * psi / (root * (math.sqrt(1 + phi0 * phi0) * root + 1 + phi0 * x))


def _orbit_curve(params: LomseParams, orbit: Orbit, t_cut: float, dt: float) -> PlaneCurve:
    """Orbit on [t_start, t_cut] as a log-radius curve rescaled so r(t_cut) = 1."""
    f = _Field(params)
    ts = orbit.resample(dt, orbit.t_start, t_cut)
    phi, dev, psi = orbit.evaluate(ts)
    tau = ts - t_cut
    r = np.exp(tau)
    rho = phi * r
    dpsi = f.dpsi(phi, dev, psi)
    jet = (phi + psi, (psi + dpsi) / r)

    def evaluator(s):
        s = np.asarray(s, dtype=float)
        ph, _, ps = orbit.evaluate(s + t_cut)
        rr = np.exp(s)
        return rr, ph * rr, rr, (ph + ps) * rr

    # origin -> launch point: phi is O(epsilon) there, so the integrand is
    # e^((n+1) tau) to relative O(epsilon^2)
    r_launch = float(r[0])
    n = params.n

    def tail(metric: QuotientMetric) -> float:
        scale = metric.sigma0 if metric.include_sigma0 else 1.0
        return scale * r_launch ** (n + 1) / (n + 1)

    return PlaneCurve(tau, r, rho, kind="log-radius", evaluator=evaluator, jet=jet,
                      tail_length=tail)


def solution_family(params: LomseParams, m_max: int, epsilon: float = 1e-8, *,
                    dt: float = 0.01, tolerances: Tolerances | None = None,
                    quad_tol: float = 1e-12) -> list[SolutionCurve]:
    """Solutions connecting the origin to (1, tan theta), ordered by crossing index.

    Type II: one curve per loc crossing m = 1..m_max.  Type I has no
    crossings; the single non-oscillating solution (the origin orbit cut at
    fixed-point entry) is returned.
    """
    if m_max < 1:
        raise ValueError("m_max must be positive")
    metric = QuotientMetric(params)
    L_loc = metric.loc_arclength(1.0)
    out = []
    if params.cone_type is ConeType.TYPE_I:
        orbit = origin_unstable_orbit(params, epsilon, tolerances=tolerances)
        entries = orbit.events_of(EventKind.FIXED_POINT_ENTRY)
        if not entries:
            raise NotOscillating("origin orbit never entered the cone point")
        ev = entries[0]
        cuts = [(1, ev)]
    else:
        orbit = origin_unstable_orbit(params, epsilon, n_crossings=m_max, tolerances=tolerances)
        crossings = orbit.events_of(EventKind.LOC_CROSSING)
        if len(crossings) < m_max:
            raise NotOscillating(
                f"found {len(crossings)} loc crossings, {m_max} requested")
        cuts = list(enumerate(crossings[:m_max], start=1))

    for m, ev in cuts:
        curve = _orbit_curve(params, orbit, ev.t, dt)
        if params.cone_type is ConeType.TYPE_II:
            deficit = crossing_deficit(params, ev.psi)
            length = L_loc - deficit
        else:
            length = endpoint_length(params, ev.phi, ev.psi)
            deficit = L_loc - length
        qlen = curve_length(metric, curve, atol=0.0, rtol=quad_tol)
        out.append(SolutionCurve(m, ev.t, math.exp(-ev.t), curve, length, deficit, qlen,
                                 abs(ev.dev), ev.psi))
    return out


# -- equation residuals on sampled curves ---------------------------------

def _local_derivatives(x, y, half_width=4, degree=6):
    """First and second derivatives of samples y(x) by local least-squares polynomials."""
    n = x.size
    w = 2 * half_width + 1
    if n < w:
        w = n
        degree = min(degree, n - 1)
        half_width = (w - 1) // 2
    centers = np.arange(n)
    lo = np.clip(centers - half_width, 0, n - w)
    idx = lo[:, None] + np.arange(w)[None, :]
    dx = x[idx] - x[:, None]
    scale = np.max(np.abs(dx), axis=1, keepdims=True)
    z = dx / scale
    V = z[..., None] ** np.arange(degree + 1)
    coef = np.einsum("nij,nj->ni", np.linalg.pinv(V), y[idx])
    s = scale[:, 0]
    return coef[:, 1] / s, 2.0 * coef[:, 2] / s ** 2


def _graph_jet(curve: PlaneCurve, method: str):
    require_graph(curve)
    if method == "auto":
        method = "jet" if curve.jet is not None else "samples"
    if method == "jet":
        if curve.jet is None:
            raise ValueError("curve carries no derivative data")
        rho_r, rho_rr = curve.jet
        sl = slice(1, -1)
        return curve.r[sl], curve.rho[sl], rho_r[sl], rho_rr[sl]
    if method != "samples":
        raise ValueError(f"unknown method {method!r}")
    s = curve.param
    r1, r2 = _local_derivatives(s, curve.r)
    q1, q2 = _local_derivatives(s, curve.rho)
    rho_r = q1 / r1
    rho_rr = (q2 * r1 - q1 * r2) / r1 ** 3
    sl = slice(1, -1)
    return curve.r[sl], curve.rho[sl], rho_r[sl], rho_rr[sl]


def ode1_residual(params: LomseParams, curve: PlaneCurve, method: str = "auto", *,
                  normalized: bool = False) -> float:
    """Max |lhs| of the minimal-graph equation for rho(r) over interior samples.

    ``method="samples"`` differentiates the samples with local polynomials;
    ``"jet"`` uses derivative data carried by the curve; ``"auto"`` prefers
    the jet when present.  The terms grow like 1/r, so near the origin the
    absolute residual is bounded below by rounding; ``normalized=True``
    divides pointwise by the sum of the term magnitudes instead.
    """
    r, rho, rho_r, rho_rr = _graph_jet(curve, method)
    n, p, l2 = params.n, params.p, float(params.lambda_sq)
    terms = (rho_rr / (1 + rho_r ** 2), (n - p) * rho_r / r,
             p * (rho_r / r - l2 * rho / r ** 2) / (1 + l2 * rho ** 2 / r ** 2))
    return _max_residual(terms, normalized)


def _max_residual(terms, normalized: bool) -> float:
    res = np.abs(sum(terms))
    if normalized:
        scale = sum(np.abs(t) for t in terms)
        res = np.divide(res, scale, out=np.zeros_like(res), where=scale > 0)
    return float(np.max(res))


def geodesic_equivalence_check(params: LomseParams, curve: PlaneCurve,
                               method: str = "auto", *, normalized: bool = False) -> float:
    """Max |rho_rr - (1 + rho_r^2)(B - A rho_r)| with the conformal Christoffels A, B."""
    r, rho, rho_r, rho_rr = _graph_jet(curve, method)
    A, B = QuotientMetric(params).christoffel_AB(r, rho)
    w = 1 + rho_r ** 2
    return _max_residual((rho_rr, -w * B, w * A * rho_r), normalized)


def loc_ray_curve(params: LomseParams, r_lo: float = 0.1, r_hi: float = 1.0,
                  n: int = 201) -> PlaneCurve:
    r = np.linspace(r_lo, r_hi, n)
    return PlaneCurve.graph(r, params.tan_theta * r)


# -- Type I foliation ----------------------------------------------------

@dataclass(frozen=True, eq=False)
class FoliationReport:
    """Numerical certificate that dilates of gamma_1, gamma_2 foliate the sector.

    In (t, phi) coordinates a dilation by c is the shift t -> t + log c, so
    two leaves from the same orbit cross iff phi(t - a) - phi(t - b) changes
    sign; ``min_leaf_gap`` is the smallest |difference| seen over all sampled
    pairs, and ``leaf_order_consistent`` records that no sign change occurred.
    """

    params: LomseParams
    phi1: float
    l_slopes: tuple[Surd, Surd]
    gamma1: Orbit
    gamma2: Orbit
    gamma1_monotone: bool
    gamma2_monotone: bool
    gamma1_below_axis: bool
    gamma2_above_axis: bool
    leaf_order_consistent: bool
    min_leaf_gap: float
    min_euclidean_gap: float
    coverage_residual: float
    n_test_points: int
    coverage_tol: float

    @property
    def passed(self) -> bool:
        return (self.gamma1_monotone and self.gamma2_monotone and self.gamma1_below_axis
                and self.gamma2_above_axis and self.leaf_order_consistent
                and self.min_leaf_gap > 0 and self.min_euclidean_gap > 0
                and self.coverage_residual <= self.coverage_tol)


def l_line_slopes(params: LomseParams) -> tuple[Surd, Surd]:
    """Slopes (-(n+1) -/+ sqrt(disc))/2 of L_1, L_2 through the cone point."""
    lam_plus, lam_minus = fixed_point_eigenvalues_exact(params)
    return lam_minus, lam_plus


def _leaf_pairs(t, phi, shifts, grid_n=400):
    """Sign consistency and min gap of phi(t - a) - phi(t - b) over shift pairs."""
    consistent = True
    gap = math.inf
    for i in range(len(shifts)):
        for j in range(i + 1, len(shifts)):
            a, b = shifts[i], shifts[j]
            lo = max(t[0] + a, t[0] + b)
            hi = min(t[-1] + a, t[-1] + b)
            if hi <= lo:
                continue
            tg = np.linspace(lo, hi, grid_n)
            d = np.interp(tg - a, t, phi) - np.interp(tg - b, t, phi)
            if not (np.all(d > 0) or np.all(d < 0)):
                consistent = False
            gap = min(gap, float(np.min(np.abs(d))))
    return consistent, gap


def _min_polyline_distance(curves):
    from scipy.spatial import cKDTree

    best = math.inf
    for i in range(len(curves)):
        tree = cKDTree(curves[i])
        for j in range(i + 1, len(curves)):
            d, _ = tree.query(curves[j])
            best = min(best, float(d.min()))
    return best


def foliation_check(params: LomseParams, phi1: float, *, n_scales: int = 9,
                    log_scale_span: float = 2.0, n_angles: int = 24, n_radii: int = 9,
                    epsilon: float = 1e-8, coverage_tol: float = 1e-6,
                    tolerances: Tolerances | None = None) -> FoliationReport:
    """Build gamma_1, gamma_2 and certify the homothetic foliation on finite grids.

    gamma_1 starts at (phi1, 0) and must fall into the cone point below the
    phi-axis with phi strictly decreasing; gamma_2 is the origin orbit with
    phi strictly increasing.  Raises :class:`MonotonicityViolation` if either
    fails, :class:`WrongType` for Type II.
    """
    if params.cone_type is not ConeType.TYPE_I:
        raise WrongType("the sector foliation exists only for Type I")
    phi0 = params.tan_theta
    if not phi1 > phi0:
        raise ValueError("phi1 must exceed tan(theta)")

    g1 = integrate(params, PhaseState(0.0, phi1, 0.0), 400.0, tolerances,
                   start_dev=phi1 - phi0, stop_at_entry=True)
    g2 = origin_unstable_orbit(params, epsilon, tolerances=tolerances)
    if g1.stop_reason != "fixed_point_entry" or g2.stop_reason != "fixed_point_entry":
        raise MonotonicityViolation("a boundary orbit did not reach the cone point")

    g1_mono = bool(np.all(np.diff(g1.dev) < 0))
    g1_below = bool(np.all(g1.psi[1:] < 0) and np.all(g1.dev > 0))
    g2_mono = bool(np.all(np.diff(g2.phi) > 0))
    g2_above = bool(np.all(g2.psi > 0) and np.all(g2.dev < 0))
    if not (g1_mono and g2_mono and g1_below and g2_above):
        raise MonotonicityViolation(
            f"gamma_1 monotone={g1_mono} below={g1_below}, "
            f"gamma_2 monotone={g2_mono} above={g2_above}")

    shifts = np.linspace(-log_scale_span, log_scale_span, n_scales)
    c1, gap1 = _leaf_pairs(g1.t, g1.dev, shifts)
    c2, gap2 = _leaf_pairs(g2.t, g2.phi, shifts)

    # Euclidean separation of sampled dilates inside a fixed annulus
    polylines = []
    for g in (g1, g2):
        for a in shifts:
            r = np.exp(g.t + a)
            keep = (r > 0.05) & (r < 20.0)
            if keep.sum() >= 2:
                polylines.append(np.column_stack([r[keep], g.phi[keep] * r[keep]]))
    euclid = _min_polyline_distance(polylines)

    # every test point of the sector lies on the dilate of exactly one leaf
    angles = np.linspace(0.0, phi1, n_angles + 2)[1:]
    radii = np.geomspace(0.1, 10.0, n_radii)
    worst = 0.0
    count = 0
    for ang in angles:
        if abs(ang - phi0) < 1e-6:
            continue
        if ang < phi0:
            g, key = g2, g2.phi
        else:
            g, key = g1, g1.phi[::-1]
        if not (key[0] <= ang <= key[-1]):
            worst = math.inf
            continue
        t_sorted = g.t if g is g2 else g.t[::-1]
        j = int(np.clip(np.searchsorted(key, ang), 1, key.size - 1))
        lo_t, hi_t = sorted((t_sorted[j - 1], t_sorted[j]))
        t_hit = brentq(lambda tt: g.evaluate(tt)[0] - ang, lo_t, hi_t, xtol=1e-15, rtol=1e-15)
        ph_hit = g.evaluate(t_hit)[0]
        for rad in radii:
            # dilate the leaf point at t_hit by c so that it lands at radius rad
            c = rad / math.exp(t_hit)
            point = np.array([c * math.exp(t_hit), c * ph_hit * math.exp(t_hit)])
            target = np.array([rad, ang * rad])
            worst = max(worst, float(np.linalg.norm(point - target) / rad))
            count += 1

    return FoliationReport(params, phi1, l_line_slopes(params), g1, g2, g1_mono, g2_mono,
                           g1_below, g2_above, c1 and c2, min(gap1, gap2), euclid, worst,
                           count, coverage_tol)
