"""Parity-case quadratic polynomials of mu*T(r,m) + nu*T(s,n) and their invariants.

Substituting m = 2x or 2x+1 and n = 2y or 2y+1 turns the combination into
four integer quadratics P(x, y) = a x^2 + b xy + c y^2 + e x + f y + g.
Whether such a polynomial hits N/log N or N/(log N)^{3/2} primes up to N is
decided by its discriminant, the invariant D, and its content.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from itertools import product
from math import gcd, isqrt
from typing import NamedTuple

from .errors import InvalidArgument


class QuadraticForm(NamedTuple):
    """Integer coefficients of a x^2 + b xy + c y^2 + e x + f y + g.

    ``x_origin`` / ``y_origin`` give the smallest admitted value of each
    variable when the form is enumerated.
    """

    a: int
    b: int
    c: int
    e: int
    f: int
    g: int
    x_origin: int = 0
    y_origin: int = 0

    @property
    def coefficients(self) -> tuple[int, int, int, int, int, int]:
        return self[:6]

    @property
    def origins(self) -> tuple[int, int]:
        return (self.x_origin, self.y_origin)

    def __call__(self, x: int, y: int) -> int:
        return (self.a * x * x + self.b * x * y + self.c * y * y
                + self.e * x + self.f * y + self.g)

    def __str__(self) -> str:
        terms = []
        for coef, mono in zip(self.coefficients, ("x^2", "xy", "y^2", "x", "y", "")):
            if coef == 0:
                continue
            mag = abs(coef)
            body = f"{mag}{mono}" if (mag != 1 or not mono) else mono
            sign = "-" if coef < 0 else "+"
            terms.append((sign, body))
        if not terms:
            return "0"
        first_sign, first = terms[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in terms[1:]:
            out += sign + body
        return out


@dataclass(frozen=True)
class CombinationSpec:
    """mu*T(r, m) + nu*T(s, n) with r, s >= 3 and coprime mu, nu >= 1."""

    r: int
    s: int
    mu: int = 1
    nu: int = 1

    def __post_init__(self) -> None:
        if self.r < 3 or self.s < 3:
            raise InvalidArgument(f"r and s must be >= 3, got r={self.r}, s={self.s}")
        if self.mu < 1 or self.nu < 1:
            raise InvalidArgument(f"mu and nu must be >= 1, got mu={self.mu}, nu={self.nu}")
        if gcd(self.mu, self.nu) != 1:
            raise InvalidArgument(f"mu and nu must be coprime, got gcd({self.mu}, {self.nu}) = "
                                  f"{gcd(self.mu, self.nu)}")


class ParityCase(enum.Enum):
    """Parity of (m, n): E = even, O = odd."""

    EE = "EE"
    EO = "EO"
    OE = "OE"
    OO = "OO"

    @property
    def m_odd(self) -> bool:
        return self is ParityCase.OE or self is ParityCase.OO

    @property
    def n_odd(self) -> bool:
        return self is ParityCase.EO or self is ParityCase.OO


# identity tests against these avoid Enum's Python-level __hash__ in hot loops
_EE, _EO, _OE, _OO = ParityCase.EE, ParityCase.EO, ParityCase.OE, ParityCase.OO


class Regime(enum.IntEnum):
    """Prime density class; ordered so that max() picks the densest."""

    Negligible = 0
    Sparse = 1
    Dense = 2

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class CaseReport:
    case: ParityCase
    form: QuadraticForm
    delta: int
    big_d: int
    alpha: int
    beta: int
    content: int
    primitive: bool
    irreducible_over_Z: bool
    regime: Regime


class CombinationReport(NamedTuple):
    overall: Regime
    cases: tuple[CaseReport, ...]


def parity_polynomial(spec: CombinationSpec, case: ParityCase) -> QuadraticForm:
    """Substitute the parity case into mu*T(r,m) + nu*T(s,n).

    Even indices use origin 1 (m = 2x, x >= 1) and odd ones origin 0
    (m = 2x + 1, x >= 0), so the four forms together cover exactly m, n >= 1.
    """
    r, s, mu, nu = spec.r, spec.s, spec.mu, spec.nu
    a = 2 * mu * (r - 2)
    c = 2 * nu * (s - 2)
    m_odd = case is _OE or case is _OO
    n_odd = case is _EO or case is _OO
    # T(r, 2x) = 2(r-2)x^2 + (4-r)x ; T(r, 2x+1) = 2(r-2)x^2 + r x + 1
    if m_odd:
        e, g_m, x0 = mu * r, mu, 0
    else:
        e, g_m, x0 = mu * (4 - r), 0, 1
    if n_odd:
        f, g_n, y0 = nu * s, nu, 0
    else:
        f, g_n, y0 = nu * (4 - s), 0, 1
    return QuadraticForm(a, 0, c, e, f, g_m + g_n, x0, y0)


def discriminant(q: QuadraticForm) -> int:
    return q.b * q.b - 4 * q.a * q.c


def invariant_D(q: QuadraticForm) -> int:
    """af^2 - bef + ce^2 + g*discriminant."""
    a, b, c, e, f, g = q[:6]
    return a * f * f - b * e * f + c * e * e + g * (b * b - 4 * a * c)


def closed_form_D(spec: CombinationSpec) -> int:
    """invariant_D shared by all four parity forms of ``spec``."""
    r, s, mu, nu = spec.r, spec.s, spec.mu, spec.nu
    return 2 * mu * nu ** 2 * (r - 2) * (4 - s) ** 2 + 2 * mu ** 2 * nu * (s - 2) * (4 - r) ** 2


def alpha_beta(q: QuadraticForm) -> tuple[int, int]:
    return (q.b * q.f - 2 * q.c * q.e, q.b * q.e - 2 * q.a * q.f)


def partials_independent(q: QuadraticForm) -> bool:
    """True unless dP/dx and dP/dy are linearly dependent.

    Dependence holds exactly when the discriminant, alpha and beta all vanish.
    """
    alpha, beta = alpha_beta(q)
    return not (discriminant(q) == 0 and alpha == 0 and beta == 0)


def content(q: QuadraticForm) -> int:
    """gcd of the coefficients."""
    g = gcd(q.a, q.b, q.c, q.e, q.f, q.g)
    if g == 0:
        raise InvalidArgument("content of the zero polynomial is undefined")
    return g


def content_closed_form(spec: CombinationSpec, case: ParityCase) -> int:
    r, s, mu, nu = spec.r, spec.s, spec.mu, spec.nu
    if case is _EE:
        return gcd(4, mu * r, nu * s)
    if case is _EO:
        return gcd(4, r, nu)
    if case is _OE:
        return gcd(4, s, mu)
    return gcd(4, r, s, mu + nu)


def _divisor_candidates(k: int, bound: int) -> list[int]:
    if k == 0:
        return list(range(-bound, bound + 1))
    k = abs(k)
    divs = [d for d in range(1, isqrt(k) + 1) if k % d == 0]
    divs += [k // d for d in divs]
    return sorted({s * d for d in divs for s in (1, -1)})


def _linear_cofactor(q: QuadraticForm, a1: int, b1: int, c1: int) -> tuple[int, int, int] | None:
    """Return (a2, b2, c2) with q == (a1x+b1y+c1)(a2x+b2y+c2) over Z, if any."""
    if a1 != 0:
        if q.a % a1:
            return None
        a2 = q.a // a1
        if (q.b - a2 * b1) % a1 or (q.e - a2 * c1) % a1:
            return None
        b2 = (q.b - a2 * b1) // a1
        c2 = (q.e - a2 * c1) // a1
    elif b1 != 0:
        if q.c % b1 or q.b % b1:
            return None
        b2 = q.c // b1
        a2 = q.b // b1
        if (q.f - b2 * c1) % b1:
            return None
        c2 = (q.f - b2 * c1) // b1
    else:
        return None
    product_ = QuadraticForm(a1 * a2, a1 * b2 + a2 * b1, b1 * b2,
                             a1 * c2 + a2 * c1, b1 * c2 + b2 * c1, c1 * c2)
    if product_.coefficients != q.coefficients:
        return None
    return (a2, b2, c2)


def find_linear_factorization(q: QuadraticForm) -> tuple[tuple[int, int, int], tuple[int, int, int]] | None:
    """Search for q = (a1x+b1y+c1)(a2x+b2y+c2) with integer coefficients.

    a1, b1, c1 must divide a, c, g when those are nonzero. For the first zero
    among a, c, g one factor's coefficient is zero, and swapping the factors
    makes it the first one; any further zero coefficient is searched over
    [-B, B] with B the largest |coefficient| of q.
    """
    bound = max(abs(k) for k in q.coefficients)
    ranges = []
    pinned = False
    for k in (q.a, q.c, q.g):
        if k == 0 and not pinned:
            ranges.append([0])
            pinned = True
        else:
            ranges.append(_divisor_candidates(k, bound))
    for a1, b1, c1 in product(*ranges):
        if a1 == 0 and b1 == 0:
            continue
        other = _linear_cofactor(q, a1, b1, c1)
        if other is not None:
            return (a1, b1, c1), other
    return None


def irreducible_over_Z(q: QuadraticForm) -> bool:
    """Decide irreducibility of a degree-2 form in Z[x, y].

    With b = 0 and a, c > 0 any rational factorization would need
    k^2 = -a/c < 0 for the ratio k of linear coefficients, so the form is
    irreducible over Q and, by Gauss's lemma, over Z iff it is primitive.
    Other forms fall back to an exhaustive linear-factor search.
    """
    if q.a == 0 and q.b == 0 and q.c == 0:
        raise InvalidArgument("irreducibility is only decided for forms of total degree 2")
    if content(q) != 1:
        return False
    if q.b == 0 and q.a > 0 and q.c > 0:
        return True
    return find_linear_factorization(q) is None


def represents_odd_values(q: QuadraticForm) -> bool:
    """True iff q takes odd values on some parity class of (x, y).

    With a, c > 0 an odd-valued parity class gives arbitrarily large odd values.
    """
    if q.a <= 0 or q.c <= 0:
        raise InvalidArgument("represents_odd_values needs a > 0 and c > 0")
    return any(q(q.x_origin + dx, q.y_origin + dy) % 2 == 1
               for dx, dy in product((0, 1), repeat=2))


def is_perfect_square(n: int) -> bool:
    return n >= 0 and isqrt(n) ** 2 == n


def _check_parity_shape(q: QuadraticForm) -> None:
    if q.b != 0 or q.a <= 0 or q.c <= 0:
        raise InvalidArgument("classify_regime expects a parity form (b = 0, a > 0, c > 0)")


def classify_regime(q: QuadraticForm) -> Regime:
    _check_parity_shape(q)
    if content(q) > 1 or not represents_odd_values(q):
        return Regime.Negligible
    if is_perfect_square(discriminant(q)) or invariant_D(q) == 0:
        return Regime.Dense
    return Regime.Sparse


def case_report(spec: CombinationSpec, case: ParityCase) -> CaseReport:
    q = parity_polynomial(spec, case)
    alpha, beta = alpha_beta(q)
    g = content(q)
    return CaseReport(
        case=case,
        form=q,
        delta=discriminant(q),
        big_d=invariant_D(q),
        alpha=alpha,
        beta=beta,
        content=g,
        primitive=g == 1,
        irreducible_over_Z=irreducible_over_Z(q),
        regime=classify_regime(q),
    )


def classify_combination(spec: CombinationSpec) -> CombinationReport:
    """Classify each parity case; the overall regime is the densest one."""
    if gcd(spec.mu, spec.nu) != 1:
        raise InvalidArgument("mu and nu must be coprime")
    cases = tuple(case_report(spec, case) for case in ParityCase)
    return CombinationReport(max(c.regime for c in cases), cases)
