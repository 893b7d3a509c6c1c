"""Parameter algebra for (n, p, k)-type Lawson-Osserman maps.

Everything here is exact rational arithmetic.  The Type I / Type II
boundary sits at ``a = 1/4`` and must be decided without rounding; floats
appear only through the convenience properties of :class:`LomseParams`.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import DegenerateAngle, InadmissibleTriple, InternalInconsistency
from .surd import Surd, conjugate_pair

Matrix2 = tuple[tuple[Fraction, Fraction], tuple[Fraction, Fraction]]


class ConeType(enum.Enum):
    TYPE_I = "I"
    TYPE_II = "II"

    def __str__(self):
        return self.value


def hopf_family(n: int, p: int) -> str | None:
    """Name of the Hopf fibration S^n -> P^p, or None if there is none."""
    if n >= 3 and n % 2 == 1 and p == n - 1:
        return "complex"
    if n >= 7 and n % 4 == 3 and p == n - 3:
        return "quaternionic"
    if (n, p) == (15, 8):
        return "octonionic"
    return None


def hopf_pairs(n_max: int) -> list[tuple[int, int]]:
    """All admissible (n, p) with n <= n_max, sorted lexicographically."""
    pairs = []
    for n in range(3, n_max + 1, 2):
        for p in range(1, n):
            if hopf_family(n, p) is not None:
                pairs.append((n, p))
    return pairs


@dataclass(frozen=True, order=True)
class LomseTriple:
    """Source sphere dimension n, projective dimension p, harmonic degree k."""

    n: int
    p: int
    k: int

    def __post_init__(self):
        for name in ("n", "p", "k"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, int):
                raise InadmissibleTriple(f"{name} must be an integer, got {value!r}")
        if self.n < 3 or self.n % 2 == 0:
            raise InadmissibleTriple(f"n must be odd and >= 3, got {self.n}")
        if self.k < 2 or self.k % 2 == 1:
            raise InadmissibleTriple(f"k must be even and >= 2, got {self.k}")
        if hopf_family(self.n, self.p) is None:
            raise InadmissibleTriple(
                f"(n, p) = ({self.n}, {self.p}) is not a Hopf fibration")

    def __iter__(self):
        return iter((self.n, self.p, self.k))

    def __str__(self):
        return f"({self.n},{self.p},{self.k})"

    @classmethod
    def parse(cls, text: str) -> "LomseTriple":
        """Parse ``"n,p,k"`` (parentheses optional)."""
        parts = text.strip().strip("()").split(",")
        try:
            n, p, k = (int(s) for s in parts)
        except ValueError:
            raise InadmissibleTriple(f"cannot parse triple {text!r}") from None
        return cls(n, p, k)


@dataclass(frozen=True)
class LomseParams:
    """Derived constants of one admissible triple, all exact.

    Attributes
    ----------
    lambda_sq : lambda^2 = k(k+n-1)/p, the squared nonzero singular value.
    tan_theta_sq : tan^2 of the cone angle.
    a_coeff : the constant a in K(s) = a/s^2 along the cone ray.
    jacobi_disc : 1 - 4a.
    dyn_disc : discriminant of the linearization at the spiral/node point.
    """

    triple: LomseTriple
    lambda_sq: Fraction
    tan_theta_sq: Fraction
    a_coeff: Fraction
    jacobi_disc: Fraction
    dyn_disc: Fraction
    cone_type: ConeType

    @property
    def n(self) -> int:
        return self.triple.n

    @property
    def p(self) -> int:
        return self.triple.p

    @property
    def k(self) -> int:
        return self.triple.k

    @property
    def lam(self) -> float:
        return math.sqrt(self.lambda_sq)

    @property
    def tan_theta(self) -> float:
        return math.sqrt(self.tan_theta_sq)

    @property
    def cos_theta_sq(self) -> Fraction:
        return 1 / (1 + self.tan_theta_sq)

    @property
    def sin_theta_sq(self) -> Fraction:
        return self.tan_theta_sq / (1 + self.tan_theta_sq)


def eqnk_polynomial(n: int, k: int) -> int:
    """(n^2-6n+1)k^2 + k(n-1)(n^2-6n+1) + 8n^2; positive exactly for Type I."""
    c = n * n - 6 * n + 1
    return c * k * k + k * (n - 1) * c + 8 * n * n


def _a_coeff(n: int, k: int) -> Fraction:
    return Fraction(2 * (k * k + k * n - k - n) * n, (k + n - 1) * k * (n + 1) ** 2)


def _dyn_disc(n: int, k: int) -> Fraction:
    return (n + 1) ** 2 + 8 * n * (Fraction(n, k * (n + k - 1)) - 1)


def singular_value_sum(params: LomseParams) -> Fraction:
    """(n-p)/cos^2 + p/(cos^2 + lambda^2 sin^2); equals n for a genuine LOMSE."""
    c2, s2 = params.cos_theta_sq, params.sin_theta_sq
    return (params.n - params.p) / c2 + params.p / (c2 + params.lambda_sq * s2)


def derive_params(triple: LomseTriple) -> LomseParams:
    """Compute every derived constant of ``triple`` in exact arithmetic."""
    n, p, k = triple
    lambda_sq = Fraction(k * (k + n - 1), p)
    if p * lambda_sq <= n:
        raise DegenerateAngle(f"p*lambda^2 = {p * lambda_sq} <= n = {n}")
    if p == n:
        raise InadmissibleTriple("p = n is outside every Hopf family")
    tan_theta_sq = (p * lambda_sq - n) / ((n - p) * lambda_sq)

    # the angle must satisfy (n-p)(1 + lambda^2 tan^2) = p(lambda^2 - 1)
    if (n - p) * (1 + lambda_sq * tan_theta_sq) != p * (lambda_sq - 1):
        raise InternalInconsistency(f"tan^2 theta fails the angle relation for {triple}")

    a = _a_coeff(n, k)
    jacobi_disc = 1 - 4 * a
    dyn_disc = _dyn_disc(n, k)
    if dyn_disc != (n + 1) ** 2 * jacobi_disc:
        raise InternalInconsistency(f"discriminant bridge broken for {triple}")
    if jacobi_disc == 0:
        raise InternalInconsistency(f"a = 1/4 reached at {triple}")
    cone_type = ConeType.TYPE_I if jacobi_disc > 0 else ConeType.TYPE_II
    params = LomseParams(triple, lambda_sq, tan_theta_sq, a, jacobi_disc, dyn_disc, cone_type)
    if singular_value_sum(params) != n:
        raise InternalInconsistency(f"singular value identity fails for {triple}")
    return params


def jacobi_coefficient(params: LomseParams) -> Fraction:
    return _a_coeff(params.n, params.k)


def classify(triple: LomseTriple) -> ConeType:
    """Type I iff the eqnk polynomial is positive; cross-checked against 1 - 4a."""
    poly = eqnk_polynomial(triple.n, triple.k)
    disc = 1 - 4 * _a_coeff(triple.n, triple.k)
    if poly == 0 or disc == 0:
        raise InternalInconsistency(f"a = 1/4 reached at {triple}")
    by_poly = ConeType.TYPE_I if poly > 0 else ConeType.TYPE_II
    by_disc = ConeType.TYPE_I if disc > 0 else ConeType.TYPE_II
    if by_poly is not by_disc:
        raise InternalInconsistency(f"eqnk and 1-4a disagree at {triple}")
    return by_poly


def enumerate_admissible(n_max: int, k_max: int) -> list[tuple[LomseTriple, ConeType]]:
    """Every admissible triple with n <= n_max and k <= k_max, lexicographic."""
    out = []
    for n, p in hopf_pairs(n_max):
        for k in range(2, k_max + 1, 2):
            triple = LomseTriple(n, p, k)
            out.append((triple, classify(triple)))
    return out


def linearization_matrix(params: LomseParams) -> Matrix2:
    """Jacobian of the (phi, psi) system at the cone point (tan theta, 0)."""
    n, k = params.n, params.k
    lower_left = 2 * n * (Fraction(n, k * (k + n - 1)) - 1)
    return ((Fraction(0), Fraction(1)), (lower_left, Fraction(-(n + 1))))


def fixed_point_eigenvalues_exact(params: LomseParams) -> tuple[Surd, Surd]:
    if params.dyn_disc == 0:
        raise InternalInconsistency(f"repeated eigenvalue at {params.triple}")
    return conjugate_pair(Fraction(-(params.n + 1), 2), params.dyn_disc / 4)


def fixed_point_eigenvalues(params: LomseParams) -> tuple[complex, complex]:
    """The two eigenvalues at the cone point; a conjugate pair iff Type II."""
    lam1, lam2 = fixed_point_eigenvalues_exact(params)
    return complex(lam1), complex(lam2)


def origin_linearization(params: LomseParams) -> Matrix2:
    """Jacobian of the (phi, psi) system at the origin."""
    n, p = params.n, params.p
    return ((Fraction(0), Fraction(1)), (p * params.lambda_sq - n, Fraction(-(n + 1))))


def origin_eigenvalues_exact(params: LomseParams) -> tuple[Surd, Surd]:
    """Roots of mu^2 + (n+1) mu - (p lambda^2 - n); the first is the unstable one."""
    n = params.n
    quarter_disc = Fraction((n + 1) ** 2, 4) + (params.p * params.lambda_sq - n)
    return conjugate_pair(Fraction(-(n + 1), 2), quarter_disc)


def rational_str(q: Fraction) -> str:
    """Serialize an exact rational as ``"num/den"``; integers print bare."""
    return str(Fraction(q))
