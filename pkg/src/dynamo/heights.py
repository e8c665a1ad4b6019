"""Certified canonical heights over Q and the preperiodicity decision procedure.

The canonical height of x under a degree-d map f is the limit of
h(f^n(x))/d^n, where h is the Weil height log max(|p|,|q|) on coprime
integer representatives.  Working on coprime representatives accounts for
every non-archimedean place at once, so a single exact orbit computation
yields a certified two-sided interval: one orbit step changes the height by
at most a constant C computed from the lift's coefficients and its Bezout
certificate, giving |canonical - h(f^N x)/d^N| <= C/(d^N (d-1)).
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

from .projective import (
    DEFAULT_DIGIT_CAP,
    ProjectivePoint,
    RationalMapLift,
    check_cap,
    evaluate,
    form_eval,
    point_from_rational,
)


def log_int(n: int) -> float:
    """log of a positive integer of arbitrary size."""
    if n <= 0:
        raise ValueError("log_int needs a positive integer")
    bits = n.bit_length()
    if bits <= 900:
        return math.log(n)
    top = n >> (bits - 64)
    return math.log(top) + (bits - 64) * math.log(2.0)


@dataclass(frozen=True)
class Place:
    """An absolute value class on Q: the archimedean place or a prime p."""

    p: int | None = None  # None marks the archimedean place

    @property
    def is_archimedean(self) -> bool:
        return self.p is None

    def abs_log(self, q: Fraction) -> float:
        """log |q|_v for nonzero q."""
        if q == 0:
            raise ValueError("|0|_v is not defined here")
        if self.p is None:
            return log_int(abs(q.numerator)) - log_int(q.denominator)
        vp = _padic_valuation(q, self.p)
        return -vp * math.log(self.p)


def _padic_valuation(q: Fraction, p: int) -> int:
    v = 0
    n = q.numerator
    while n % p == 0:
        n //= p
        v += 1
    m = q.denominator
    while m % p == 0:
        m //= p
        v -= 1
    return v


def factorize(n: int) -> dict[int, int]:
    """Prime factorization by trial division with a Pollard rho fallback."""
    n = abs(n)
    out: dict[int, int] = {}
    for p in (2, 3, 5):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    f = 7
    steps = (4, 2, 4, 2, 4, 6, 2, 6)
    i = 0
    while f * f <= n and f < 10**7:
        while n % f == 0:
            out[f] = out.get(f, 0) + 1
            n //= f
        f += steps[i % 8]
        i += 1
    if n > 1:
        if f * f > n:
            out[n] = out.get(n, 0) + 1
        else:
            for p, e in _rho_factor(n).items():
                out[p] = out.get(p, 0) + e
    return out


def _rho_factor(n: int) -> dict[int, int]:
    if n == 1:
        return {}
    if _is_probable_prime(n):
        return {n: 1}
    d = n
    c = 1
    while d == n:
        d = _rho_step(n, c)
        c += 1
    left = _rho_factor(d)
    right = _rho_factor(n // d)
    for p, e in right.items():
        left[p] = left.get(p, 0) + e
    return left


def _rho_step(n: int, c: int) -> int:
    x = y = 2
    d = 1
    while d == 1:
        x = (x * x + c) % n
        y = (y * y + c) % n
        y = (y * y + c) % n
        d = math.gcd(abs(x - y), n)
    return d


def _is_probable_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


# ---------------------------------------------------------------------------
# heights
# ---------------------------------------------------------------------------

def weil_height(p: ProjectivePoint) -> float:
    """log max(|x|, |y|) on the coprime representative; 0 at infinity and units."""
    return log_int(max(abs(p.x), abs(p.y)))


def _l1(coeffs) -> int:
    return sum(abs(c) for c in coeffs)


def step_bound_int(F: RationalMapLift) -> int:
    """Integer K with |h(f(x)) - d h(x)| <= log K for all rational x.

    Upper side: max of the coefficient L1 norms of F0, F1.  Lower side: the
    Bezout identities give |Res| M^(2d-1) <= B' M^(d-1) ||F(x,y)|| with B' the
    worst identity's summed cofactor L1 norms, and gcd(F0,F1)(x,y) divides Res,
    so h(f(x)) >= d h(x) - log B'.
    """
    cert = F.certificate()
    upper = max(_l1(F.f0), _l1(F.f1))
    lower = max(_l1(cert.g0x) + _l1(cert.g1x), _l1(cert.g0y) + _l1(cert.g1y))
    return max(upper, lower, 1)


def height_step_bound(F: RationalMapLift) -> float:
    """The constant C >= sup |h(f(x)) - d h(x)|, as a float."""
    return log_int(step_bound_int(F))


@dataclass(frozen=True)
class CanonicalHeightResult:
    value: float
    error_radius: float
    iterations: int
    height_step_bound: float
    local_breakdown: dict = field(default_factory=dict, compare=False)


@dataclass(frozen=True)
class PreperiodicityVerdict:
    preperiodic: bool
    tail: int | None = None
    period: int | None = None
    height_lower_bound: float | None = None
    certificate_index: int | None = None  # orbit index witnessing h > C/(d-1)


def _orbit_step(F: RationalMapLift, p: ProjectivePoint, cap_digits: int):
    """One exact orbit step, returning (next point, discarded gcd)."""
    check_cap(max(abs(p.x), abs(p.y)), cap_digits, "orbit coordinate")
    x0 = form_eval(F.f0, p.x, p.y)
    x1 = form_eval(F.f1, p.x, p.y)
    g = math.gcd(abs(x0), abs(x1))
    return ProjectivePoint(x0, x1), g


def canonical_height(F: RationalMapLift, p, target_error: float = 1e-6,
                     cap_digits: int = DEFAULT_DIGIT_CAP,
                     diagnostics: bool = False) -> CanonicalHeightResult:
    """Certified canonical height: value within target_error of the true height.

    The point may be a ProjectivePoint, Fraction, int, or 'p/q' string.  An
    exact orbit collision short-circuits to height 0 with radius 0.  When
    diagnostics is requested, the result carries a per-place breakdown
    (archimedean escape-rate part plus one entry per prime absorbed by the
    gcd normalization); the parts sum to the value.
    """
    if target_error <= 0:
        raise ValueError("target_error must be positive")
    if F.degree < 2:
        raise ValueError("canonical heights need degree >= 2")
    p = point_from_rational(p)
    d = F.degree
    bound_k = step_bound_int(F)
    c_const = log_int(bound_k)
    n_steps = 0
    while c_const / (d ** n_steps * (d - 1)) > target_error:
        n_steps += 1
    seen = {p: 0}
    cur = p
    gcd_log_sum = 0.0
    gcds: list[int] = []
    for k in range(n_steps):
        cur, g = _orbit_step(F, cur, cap_digits)
        gcds.append(g)
        gcd_log_sum += log_int(g) / d ** (k + 1) if g > 1 else 0.0
        if cur in seen:
            return CanonicalHeightResult(0.0, 0.0, k + 1, c_const,
                                         {"collision": True} if diagnostics else {})
        seen[cur] = k + 1
    value = weil_height(cur) / d ** n_steps
    radius = c_const / (d ** n_steps * (d - 1))
    breakdown: dict = {}
    if diagnostics:
        breakdown = _place_breakdown(F, value, gcds, d)
    return CanonicalHeightResult(value, radius, n_steps, c_const, breakdown)


def _place_breakdown(F, value, gcds, d):
    """Split value into archimedean and per-prime parts (diagnostics only)."""
    res_primes = sorted(factorize(F.res)) if F.res > 1 else []
    per_prime: dict[int, float] = {}
    for k, g in enumerate(gcds):
        if g <= 1:
            continue
        for prime in res_primes:
            e = 0
            while g % prime == 0:
                g //= prime
                e += 1
            if e:
                per_prime[prime] = per_prime.get(prime, 0.0) - e * math.log(prime) / d ** (k + 1)
        if g > 1:  # gcd prime outside Res cannot happen; keep the sum honest anyway
            per_prime[-1] = per_prime.get(-1, 0.0) - log_int(g) / d ** (k + 1)
    arch = value - sum(per_prime.values())
    out = {"archimedean": arch}
    out.update({f"p={p}": v for p, v in sorted(per_prime.items())})
    return out


def canonical_height_functoriality_check(F: RationalMapLift, p,
                                         target_error: float = 1e-3) -> bool:
    """Check |h(f(x)) - d h(x)| <= combined certified radii (plus float slack)."""
    p = point_from_rational(p)
    h_x = canonical_height(F, p, target_error)
    h_fx = canonical_height(F, evaluate(F, p), target_error)
    lhs = abs(h_fx.value - F.degree * h_x.value)
    rhs = h_fx.error_radius + F.degree * h_x.error_radius
    slack = 1e-12 * max(1.0, abs(h_fx.value), F.degree * abs(h_x.value))
    return lhs <= rhs + slack


def product_formula_check(q) -> float:
    """Sum of log|q|_v over all places; exactly 0 for every nonzero rational.

    Computed exactly: |q| * prod p^(-v_p(q)) over primes dividing q must be
    the rational 1; the returned float is log of that rational.
    """
    q = Fraction(q)
    if q == 0:
        raise ValueError("the product formula concerns nonzero rationals")
    residual = abs(q)
    for prime, _ in {**factorize(q.numerator), **factorize(q.denominator)}.items():
        v = _padic_valuation(q, prime)
        residual *= Fraction(prime) ** (-v)
    if residual == 1:
        return 0.0
    return log_int(residual.numerator) - log_int(residual.denominator)


def decide_preperiodic(F: RationalMapLift, p,
                       cap_digits: int = DEFAULT_DIGIT_CAP) -> PreperiodicityVerdict:
    """Terminating preperiodicity decision by exact orbit + height certificate.

    Iterate the exact orbit with cycle detection.  If an iterate's Weil
    height exceeds C/(d-1) (checked as the integer comparison
    max(|p|,|q|)^(d-1) > K), the canonical height is certifiably positive and
    the orbit diverges; otherwise the orbit lives among the finitely many
    rationals of bounded height and must revisit a point.
    """
    if F.degree < 2:
        raise ValueError("preperiodicity needs degree >= 2")
    p = point_from_rational(p)
    d = F.degree
    bound_k = step_bound_int(F)
    c_const = log_int(bound_k)
    orbit = {p: 0}
    cur = p
    n = 0
    while True:
        m = max(abs(cur.x), abs(cur.y))
        if m ** (d - 1) > bound_k:
            # canonical height of cur exceeds h(cur) - C/(d-1) > 0
            lower = (log_int(m) - c_const / (d - 1)) / d ** n
            return PreperiodicityVerdict(False, height_lower_bound=lower,
                                         certificate_index=n)
        cur, _ = _orbit_step(F, cur, cap_digits)
        n += 1
        if cur in orbit:
            tail = orbit[cur]
            return PreperiodicityVerdict(True, tail=tail, period=n - tail)
        orbit[cur] = n


def rational_preperiodic_points(F: RationalMapLift, box: int = 100,
                                include_infinity: bool = True) -> list[ProjectivePoint]:
    """All rational preperiodic points with max(|p|,|q|) <= box.

    Preperiodic points satisfy max(|p|,|q|)^(d-1) <= K exactly, which prunes
    the search box to the provably possible region before deciding each
    candidate.
    """
    bound_k = step_bound_int(F)
    d = F.degree
    m_max = 1
    while (m_max + 1) ** (d - 1) <= bound_k:
        m_max += 1
    m_max = min(m_max, box)
    out = []
    if include_infinity and decide_preperiodic(F, ProjectivePoint(1, 0)).preperiodic:
        out.append(ProjectivePoint(1, 0))
    for q in range(1, m_max + 1):
        for pnum in range(-m_max, m_max + 1):
            if math.gcd(abs(pnum), q) != 1:
                continue
            pt = ProjectivePoint(pnum, q)
            if decide_preperiodic(F, pt).preperiodic:
                out.append(pt)
    return out


def random_rational(rng: random.Random, box: int = 1000) -> Fraction:
    """A random nonzero-denominator rational with entries up to box."""
    num = rng.randint(-box, box)
    den = rng.randint(1, box)
    return Fraction(num, den)
