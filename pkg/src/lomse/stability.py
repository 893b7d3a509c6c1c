"""Jacobi fields along the cone ray and the stability verdict.

Along rho = tan(theta) r, parameterized by quotient arclength s, the
curvature is K = a / s^2, so normal Jacobi fields solve the Euler equation

    J'' + a J / s^2 = 0,   J = s^l,   l (l - 1) + a = 0.

Real exponents (a < 1/4) give fields with at most one zero; complex ones
give sqrt(s) sin(omega log s + c), whose zeros accumulate at s = 0.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import brentq

from .errors import DomainError, InternalInconsistency
from .params import (
    ConeType,
    LomseParams,
    fixed_point_eigenvalues_exact,
    jacobi_coefficient,
)
from .quotient_geometry import QuotientMetric
from .surd import Surd, conjugate_pair


class BasisKind(str, enum.Enum):
    DISTINCT_REAL = "distinct_real"
    REPEATED_LOG = "repeated_log"
    OSCILLATORY = "oscillatory"

    def __str__(self):
        return self.value


class Verdict(str, enum.Enum):
    STABLE = "Stable"
    UNSTABLE = "Unstable"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class JacobiSolution:
    """Closed-form solutions of J'' + (a/s^2) J = 0.

    ``exponents`` are the roots (1 +/- sqrt(1 - 4a))/2 as exact surds, the
    ``+`` root first.
    """

    params: LomseParams
    exponents: tuple[Surd, Surd]
    basis_kind: BasisKind

    @property
    def a(self) -> Fraction:
        return jacobi_coefficient(self.params)

    @property
    def omega(self) -> float:
        """sqrt(4a - 1)/2, the frequency in log s (oscillatory case only)."""
        if self.basis_kind is not BasisKind.OSCILLATORY:
            raise ValueError("only oscillatory fields have a frequency")
        return math.sqrt(-self.params.jacobi_disc) / 2

    def basis(self, s):
        """Two real basis solutions and their s-derivatives at ``s``."""
        s = np.asarray(s, dtype=float)
        if np.any(~(s > 0)):
            raise DomainError("Jacobi fields live on s > 0")
        u = np.log(s)
        if self.basis_kind is BasisKind.DISTINCT_REAL:
            l1, l2 = (float(e) for e in self.exponents)
            f1, f2 = np.exp(l1 * u), np.exp(l2 * u)
            return (f1, f2), (l1 * f1 / s, l2 * f2 / s)
        root = np.sqrt(s)
        if self.basis_kind is BasisKind.REPEATED_LOG:
            f1, f2 = root, root * u
            return (f1, f2), (0.5 * f1 / s, (0.5 * u + 1) * root / s)
        w = self.omega
        c, sn = np.cos(w * u), np.sin(w * u)
        f1, f2 = root * c, root * sn
        return (f1, f2), ((0.5 * c - w * sn) * root / s, (0.5 * sn + w * c) * root / s)

    def coefficients(self, s0: float, J0: float, dJ0: float) -> tuple[float, float]:
        """(C1, C2) of the solution with J(s0) = J0, J'(s0) = dJ0."""
        (f1, f2), (d1, d2) = self.basis(s0)
        M = np.array([[f1, f2], [d1, d2]], dtype=float)
        c1, c2 = np.linalg.solve(M, [J0, dJ0])
        return float(c1), float(c2)

    def field(self, s0: float, J0: float, dJ0: float):
        """The solution with the given data at s0, as a vectorized callable."""
        c1, c2 = self.coefficients(s0, J0, dJ0)

        def J(s):
            (f1, f2), _ = self.basis(s)
            return c1 * f1 + c2 * f2

        return J


def closed_form_jacobi(params: LomseParams) -> JacobiSolution:
    disc = params.jacobi_disc
    exps = conjugate_pair(Fraction(1, 2), disc / 4)
    if disc > 0:
        kind = BasisKind.DISTINCT_REAL
    elif disc == 0:
        kind = BasisKind.REPEATED_LOG
    else:
        kind = BasisKind.OSCILLATORY
    return JacobiSolution(params, exps, kind)


def vieta_check(sol: JacobiSolution) -> bool:
    """l1 + l2 = 1 and l1 l2 = a, exactly."""
    l1, l2 = sol.exponents
    total = l1 + l2
    # (r + q)(r - q) = r^2 - q^2 for the shared radicand q^2
    product = l1.rational ** 2 - l1.square
    return total == Surd(1) and product == sol.a


# -- conjugate points ----------------------------------------------------

@dataclass(frozen=True)
class ConjugatePointList:
    """Zeros below ``s_anchor`` of the Jacobi field vanishing at ``s_anchor``.

    For Type I ``zeros`` is empty and ``certificate`` holds the smallest
    normalized 2x2 determinant over the sampled pairs.
    """

    s_anchor: float
    zeros: tuple[float, ...]
    count_requested: int
    ratio: float | None = None
    max_closed_form_error: float = 0.0
    certificate: dict | None = None


def _type1_certificate(sol: JacobiSolution, s_anchor: float, decades: int = 6,
                       per_decade: int = 10) -> dict:
    """min over s1 < s2 of |s1^l1 s2^l2 - s1^l2 s2^l1| / (s1^l1 s2^l2).

    A nonzero minimum means no nontrivial combination of s^l1, s^l2 vanishes
    at two sampled points.
    """
    l1, l2 = (float(e) for e in sol.exponents)
    grid = s_anchor * np.logspace(-decades, 0, decades * per_decade + 1)
    s1, s2 = np.meshgrid(grid, grid, indexing="ij")
    mask = s1 < s2
    u1, u2 = np.log(s1[mask]), np.log(s2[mask])
    # det / (s1^l1 s2^l2) = 1 - (s1/s2)^(l2 - l1), computed without overflow
    rel = -np.expm1((l2 - l1) * (u1 - u2))
    return {"pairs": int(mask.sum()), "decades": decades,
            "min_normalized_det": float(np.min(np.abs(rel)))}


def conjugate_points(params: LomseParams, s_anchor: float, count: int) -> ConjugatePointList:
    """The ``count`` largest conjugate points below ``s_anchor``.

    Zeros of sqrt(s) sin(omega log(s/s_anchor)) are bracketed on a grid in
    log s and refined by ``brentq``; each is then compared with the closed
    form s_anchor exp(-m pi/omega).
    """
    if not s_anchor > 0:
        raise DomainError("anchor must be positive")
    if count < 0:
        raise ValueError("count must be non-negative")
    sol = closed_form_jacobi(params)
    if sol.basis_kind is not BasisKind.OSCILLATORY:
        return ConjugatePointList(s_anchor, (), count,
                                  certificate=_type1_certificate(sol, s_anchor))
    w = sol.omega
    ua = math.log(s_anchor)

    def g(u):
        return math.sin(w * (u - ua))

    h = math.pi / (8 * w)
    zeros = []
    hi = ua - h / 2
    while len(zeros) < count:
        lo = hi - h
        if g(lo) * g(hi) < 0:
            zeros.append(brentq(g, lo, hi, xtol=1e-14, rtol=1e-15))
        hi = lo
    s_zeros = tuple(math.exp(u) for u in zeros)
    worst = 0.0
    for m, s in enumerate(s_zeros, start=1):
        expected = s_anchor * math.exp(-m * math.pi / w)
        worst = max(worst, abs(s - expected) / expected)
    if worst > 1e-10:
        raise InternalInconsistency(
            f"conjugate points off the geometric sequence by {worst:.3e}")
    return ConjugatePointList(s_anchor, s_zeros, count, math.exp(math.pi / w), worst)


def zero_ratio(params: LomseParams) -> float:
    """exp(2 pi / sqrt(4a - 1)): ratio of consecutive conjugate points."""
    return math.exp(2 * math.pi / math.sqrt(-params.jacobi_disc))


# -- numerical Jacobi fields ---------------------------------------------

@dataclass(frozen=True, eq=False)
class NumericJacobi:
    s: np.ndarray
    J: np.ndarray
    dJ: np.ndarray
    s0: float
    boundary: tuple[float, float]
    _pieces: tuple = field(repr=False, default=())

    def __call__(self, s):
        s = np.asarray(s, dtype=float)
        out = np.empty_like(s)
        below = s < self.s0
        for piece, mask in zip(self._pieces, (below, ~below)):
            if piece is not None and mask.any():
                out[mask] = piece(s[mask])[0]
        return out


def numeric_jacobi(params: LomseParams, s_range: tuple[float, float],
                   boundary: tuple[float, float], s0: float | None = None, *,
                   rtol: float = 1e-12, atol: float = 1e-14, n_samples: int = 401) -> NumericJacobi:
    """Integrate J'' = -a J / s^2 from data (J, J') at s0 across ``s_range``.

    ``s0`` defaults to the left end; interior values integrate both ways.
    """
    lo, hi = map(float, s_range)
    if not 0 < lo < hi:
        raise DomainError("s_range must be an increasing interval in (0, inf)")
    s0 = lo if s0 is None else float(s0)
    if not lo <= s0 <= hi:
        raise ValueError("s0 must lie in s_range")
    a = float(jacobi_coefficient(params))

    def rhs(s, y):
        return [y[1], -a * y[0] / (s * s)]

    pieces = []
    for end in (lo, hi):
        if end == s0:
            pieces.append(None)
            continue
        sol = solve_ivp(rhs, (s0, end), list(boundary), method="DOP853", rtol=rtol,
                        atol=atol, dense_output=True)
        if not sol.success:
            raise RuntimeError(sol.message)
        pieces.append(sol.sol)
    s = np.geomspace(lo, hi, n_samples)
    J = np.empty_like(s)
    dJ = np.empty_like(s)
    below = s < s0
    for piece, mask in zip(pieces, (below, ~below)):
        if mask.any():
            if piece is None:
                J[mask], dJ[mask] = boundary
            else:
                y = piece(s[mask])
                J[mask], dJ[mask] = y[0], y[1]
    return NumericJacobi(s, J, dJ, s0, tuple(boundary), tuple(pieces))


def jacobi_discrepancy(params: LomseParams, numeric: NumericJacobi) -> float:
    """max |J_numeric - J_closed| / max |J_closed| over the samples.

    Errors are normalized by the sup norm because oscillatory fields vanish
    and a pointwise ratio is meaningless near their zeros.
    """
    exact = closed_form_jacobi(params).field(numeric.s0, *numeric.boundary)(numeric.s)
    return float(np.max(np.abs(numeric.J - exact)) / np.max(np.abs(exact)))


# -- verdict ---------------------------------------------------------------

SCAN_DEPTH = 500.0


def scan_conjugate_points(params: LomseParams, depth: float = SCAN_DEPTH,
                          chunk: float = 100.0, max_zeros: int = 8) -> list[float]:
    """Zeros in log(s_anchor/s) of the field vanishing at the anchor, found numerically.

    In u = log s the Jacobi equation becomes y'' = y' - a y.  The field with
    y(0) = 0, y'(0) = 1 is integrated towards u = -depth in chunks and
    renormalized between chunks; sign changes are recorded as zeros.  Uses
    neither the exponents nor the cone type.
    """
    a = float(jacobi_coefficient(params))

    def rhs(u, y):
        return [y[1], y[1] - a * y[0]]

    def crossing(u, y):
        return y[0]

    y = np.array([0.0, 1.0])
    u = 0.0
    found = []
    while u > -depth and len(found) < max_zeros:
        u_next = max(u - chunk, -depth)
        sol = solve_ivp(rhs, (u, u_next), y, method="DOP853", rtol=1e-11, atol=1e-300, first_step=1e-3,
                        events=crossing)
        if not sol.success:
            raise RuntimeError(sol.message)
        found.extend(-float(t) for t in sol.t_events[0] if t < u)
        y = sol.y[:, -1]
        y = y / np.max(np.abs(y))
        u = u_next
    return found[:max_zeros]


@dataclass(frozen=True)
class StabilityReport:
    params: LomseParams
    verdict: Verdict
    s_anchor: float
    exponents: tuple[Surd, Surd]
    basis_kind: BasisKind
    scan_zeros_log: tuple[float, ...]
    conjugate: ConjugatePointList
    scan_depth: float


def stability_verdict(params: LomseParams, count: int = 3) -> StabilityReport:
    """Stable iff no conjugate point lies on the segment (0, loc_arclength(1)).

    The numeric scan decides the verdict; it must agree with the cone type,
    otherwise :class:`InternalInconsistency` is raised.
    """
    s_anchor = float(QuotientMetric(params).loc_arclength(1.0))
    zeros = scan_conjugate_points(params, max_zeros=count)
    verdict = Verdict.STABLE if not zeros else Verdict.UNSTABLE
    expected = Verdict.STABLE if params.cone_type is ConeType.TYPE_I else Verdict.UNSTABLE
    if verdict is not expected:
        raise InternalInconsistency(
            f"{params.triple}: conjugate-point scan says {verdict}, classification says {expected}")
    sol = closed_form_jacobi(params)
    cp = conjugate_points(params, s_anchor, count if zeros else 0)
    return StabilityReport(params, verdict, s_anchor, sol.exponents, sol.basis_kind,
                           tuple(zeros), cp, SCAN_DEPTH)


# -- exponent translation ------------------------------------------------

def r_form_residual(params: LomseParams, F, r) -> float:
    """Relative residual of r^2 F'' - n r F' + a (n+1)^2 F = 0 by finite differences.

    Central differences at steps h and h/2 are Richardson-combined; the
    residual is normalized by the sum of the three term magnitudes.
    """
    r = np.asarray(r, dtype=float)
    n = params.n
    c = float(jacobi_coefficient(params)) * (n + 1) ** 2

    def derivs(h):
        fp, f0, fm = F(r + h), F(r), F(r - h)
        return (fp - fm) / (2 * h), (fp - 2 * f0 + fm) / (h * h)

    h = 1e-3 * r
    d1a, d2a = derivs(h)
    d1b, d2b = derivs(h / 2)
    d1 = (4 * d1b - d1a) / 3
    d2 = (4 * d2b - d2a) / 3
    f = F(r)
    terms = (r * r * d2, -n * r * d1, c * f)
    res = np.abs(sum(terms)) / (sum(np.abs(t) for t in terms))
    return float(np.max(res))


@dataclass(frozen=True)
class TranslationReport:
    """Bookkeeping between the arclength and the log-radius descriptions.

    ``our_cal`` are the exponents of the Jacobi field in r, ((n+1) +/- sqrt(D))/2
    with D = dyn_disc; ``b4_cal`` are the eigenvalues of the phase-plane
    linearization, (-(n+1) +/- sqrt(D))/2.
    """

    params: LomseParams
    radicand: Fraction
    radicand_matches: bool
    our_cal: tuple[Surd, Surd]
    b4_cal: tuple[Surd, Surd]
    shift_is_n_plus_1: bool
    s_exponents_scaled: tuple[Surd, Surd]
    s_to_r_exact: bool
    s_to_r_float_error: float
    modulus_exponent: Fraction | None
    frequency_sq: Fraction | None
    frequency: float | None
    frequency_from_s: float | None
    basis_residual: float | None
    wronskian_at_1: float | None

    @property
    def passed(self) -> bool:
        ok = self.radicand_matches and self.shift_is_n_plus_1 and self.s_to_r_exact
        ok = ok and self.s_to_r_float_error < 1e-12
        if self.frequency is not None:
            ok = ok and abs(self.frequency - self.frequency_from_s) <= 1e-12 * self.frequency
            ok = ok and self.basis_residual < 1e-8 and self.wronskian_at_1 != 0
        return ok

    def field_string(self) -> str | None:
        """The oscillating field in r, e.g. ``r^3 sin(sqrt(1/6) log r)``."""
        if self.frequency_sq is None:
            return None
        return f"r^{self.modulus_exponent} sin(sqrt({self.frequency_sq}) log r)"


def exponent_translation(params: LomseParams) -> TranslationReport:
    n, k = params.n, params.k
    n1 = n + 1
    radicand = n1 ** 2 + 8 * n * (Fraction(n, k * (n + k - 1)) - 1)
    our = conjugate_pair(Fraction(n1, 2), radicand / 4)
    b4 = fixed_point_eigenvalues_exact(params)
    shift = all(o - b == Surd(n1) for o, b in zip(our, b4))
    s_exp = closed_form_jacobi(params).exponents
    scaled = tuple(e * n1 for e in s_exp)
    exact = scaled == our
    ferr = max(abs(complex(x) - complex(y)) / abs(complex(y)) for x, y in zip(scaled, our))

    mod = freq_sq = freq = freq_s = resid = wr = None
    if radicand < 0:
        mod = our[0].rational
        freq_sq = our[0].imag_square
        freq = math.sqrt(freq_sq)
        freq_s = n1 * math.sqrt(-params.jacobi_disc) / 2
        m = float(mod)

        def F_sin(r):
            return r ** m * np.sin(freq * np.log(r))

        def F_cos(r):
            return r ** m * np.cos(freq * np.log(r))

        rs = np.geomspace(0.2, 5.0, 41)
        resid = max(r_form_residual(params, F_sin, rs), r_form_residual(params, F_cos, rs))
        # W(F_cos, F_sin) at r = 1 from central differences
        h = 1e-5
        dcos = (F_cos(1 + h) - F_cos(1 - h)) / (2 * h)
        dsin = (F_sin(1 + h) - F_sin(1 - h)) / (2 * h)
        wr = float(F_cos(1.0) * dsin - F_sin(1.0) * dcos)
    return TranslationReport(params, radicand, radicand == params.dyn_disc, our, b4, shift,
                             scaled, exact, ferr, mod, freq_sq, freq, freq_s, resid, wr)
