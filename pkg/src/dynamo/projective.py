"""Exact projective arithmetic on P^1 over Q.

Points are coprime integer pairs [x : y] with a fixed sign convention, and
rational self-maps are homogeneous lifts F = (F0, F1): a pair of integer
binary forms of the same degree with nonzero resultant.  Binary forms are
stored as coefficient tuples in ascending X-power, i.e. coeffs[i] is the
coefficient of X^i Y^(d-i).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import DegenerateMap, OverflowPolicy, ZeroPoint

#: default cap on exact coefficient/coordinate size, in decimal digits
DEFAULT_DIGIT_CAP = 10**6

_LOG10_2 = math.log10(2.0)


def digits_of(n: int) -> int:
    """Approximate decimal digit count of |n| (exact enough for cap checks)."""
    return int(n.bit_length() * _LOG10_2) + 1


def check_cap(n: int, cap_digits: int, what: str = "coefficient") -> None:
    if digits_of(n) > cap_digits:
        raise OverflowPolicy(
            f"{what} exceeds {cap_digits} decimal digits; raise the cap or relax the target"
        )


# ---------------------------------------------------------------------------
# points
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ProjectivePoint:
    """A point of P^1(Q) as a coprime integer pair [x : y].

    Normalization: gcd(|x|,|y|) = 1 and either y > 0, or y = 0 and x > 0.
    Two points are equal iff their normalized fields are equal.
    """

    x: int
    y: int

    def __post_init__(self):
        x, y = self.x, self.y
        if x == 0 and y == 0:
            raise ZeroPoint("(0, 0) is not a projective point")
        g = math.gcd(abs(x), abs(y))
        if g > 1:
            x //= g
            y //= g
        if y < 0 or (y == 0 and x < 0):
            x, y = -x, -y
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    @property
    def is_infinity(self) -> bool:
        return self.y == 0

    def as_fraction(self) -> Fraction | None:
        """Affine value x/y, or None for the point at infinity."""
        if self.y == 0:
            return None
        return Fraction(self.x, self.y)

    def __str__(self) -> str:
        if self.y == 0:
            return "inf"
        if self.y == 1:
            return str(self.x)
        return f"{self.x}/{self.y}"


INFINITY = ProjectivePoint(1, 0)


def normalize(x, y) -> ProjectivePoint:
    """Build the normalized projective point for a raw coordinate pair.

    Accepts integers or Fractions; Fractions are cleared to integers first.
    """
    if isinstance(x, Fraction) or isinstance(y, Fraction):
        fx, fy = Fraction(x), Fraction(y)
        m = fx.denominator * fy.denominator
        x, y = int(fx * m), int(fy * m)
    return ProjectivePoint(int(x), int(y))


def point_from_rational(q) -> ProjectivePoint:
    """Point for an affine rational value (int, Fraction, or 'p/q'/'inf' string)."""
    if isinstance(q, ProjectivePoint):
        return q
    if isinstance(q, str):
        s = q.strip().lower()
        if s in ("inf", "infinity", "oo"):
            return INFINITY
        q = Fraction(s)
    q = Fraction(q)
    return ProjectivePoint(q.numerator, q.denominator)


# ---------------------------------------------------------------------------
# numeric projective points (complex, sup-norm normalized)
# ---------------------------------------------------------------------------

class CPoint:
    """Numeric point of P^1(C) as a sup-norm-normalized complex pair."""

    __slots__ = ("x", "y")

    def __init__(self, x: complex, y: complex):
        m = max(abs(x), abs(y))
        if m == 0.0:
            raise ZeroPoint("(0, 0) is not a projective point")
        self.x = complex(x) / m
        self.y = complex(y) / m

    @classmethod
    def from_affine(cls, z: complex) -> "CPoint":
        return cls(complex(z), 1.0)

    @classmethod
    def at_infinity(cls) -> "CPoint":
        return cls(1.0, 0.0)

    @classmethod
    def from_exact(cls, p: ProjectivePoint) -> "CPoint":
        # huge integer coordinates overflow float(); scale through the gcd-free pair
        b = max(abs(p.x), abs(p.y)).bit_length()
        shift = max(0, b - 500)
        return cls(float(p.x >> shift) if shift else float(p.x),
                   float(p.y >> shift) if shift else float(p.y))

    @property
    def is_infinity(self) -> bool:
        return abs(self.y) < 1e-14

    def affine(self) -> complex:
        """Affine value x/y; infinite points map to a huge float, use charts instead."""
        if self.y == 0:
            return complex("inf")
        return self.x / self.y

    def chordal(self, other: "CPoint") -> float:
        """Chordal distance |x1 y2 - x2 y1| / (|p1| |p2|) with 2-norms."""
        num = abs(self.x * other.y - other.x * self.y)
        den = math.hypot(abs(self.x), abs(self.y)) * math.hypot(abs(other.x), abs(other.y))
        return num / den

    def sphere(self) -> tuple[float, float, float]:
        """Image on the unit sphere under the stereographic embedding."""
        n2 = abs(self.x) ** 2 + abs(self.y) ** 2
        w = self.x * self.y.conjugate()
        return (2.0 * w.real / n2, 2.0 * w.imag / n2, (abs(self.x) ** 2 - abs(self.y) ** 2) / n2)

    def __repr__(self) -> str:
        return f"CPoint({self.x!r}, {self.y!r})"


# ---------------------------------------------------------------------------
# binary forms (coefficient tuples, ascending X-power)
# ---------------------------------------------------------------------------

def form_eval(coeffs, x, y):
    """Evaluate sum coeffs[i] * x^i * y^(d-i); exact for ints/Fractions, numeric for complex."""
    d = len(coeffs) - 1
    acc = 0 * x
    for i in range(d, -1, -1):
        acc = acc * x + coeffs[i] * y ** (d - i)
    return acc


def form_derivative_x(coeffs) -> tuple:
    """d/dX of the form; degree drops by one."""
    return tuple(i * coeffs[i] for i in range(1, len(coeffs)))


def form_derivative_y(coeffs) -> tuple:
    """d/dY of the form; degree drops by one."""
    d = len(coeffs) - 1
    return tuple((d - i) * coeffs[i] for i in range(d))


def poly_mul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                if bj:
                    out[i + j] += ai * bj
    return out


def form_compose(coeffs, a, b):
    """Substitute the degree-e pair (A, B) for (X, Y) in a degree-d form.

    Returns the coefficient list of the degree d*e form sum c_i A^i B^(d-i).
    """
    d = len(coeffs) - 1
    pow_a = [[1]]
    pow_b = [[1]]
    for _ in range(d):
        pow_a.append(poly_mul(pow_a[-1], a))
        pow_b.append(poly_mul(pow_b[-1], b))
    size = d * (len(a) - 1) + 1
    out = [0] * size
    for i, c in enumerate(coeffs):
        if c == 0:
            continue
        term = poly_mul(pow_a[i], pow_b[d - i])
        for k, t in enumerate(term):
            out[k] += c * t
    return out


def content(coeffs) -> int:
    g = 0
    for c in coeffs:
        g = math.gcd(g, abs(c))
    return g


# ---------------------------------------------------------------------------
# Sylvester resultants and Bezout certificates
# ---------------------------------------------------------------------------

def _bareiss_det(rows) -> int:
    """Exact integer determinant (fraction-free Gaussian elimination)."""
    m = [list(r) for r in rows]
    n = len(m)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def sylvester_matrix(f0, f1):
    """Sylvester matrix of two binary forms of equal formal degree d (size 2d)."""
    d = len(f0) - 1
    n = 2 * d
    rows = []
    rev0 = list(reversed(f0))
    rev1 = list(reversed(f1))
    for s in range(d):
        rows.append([0] * s + rev0 + [0] * (n - d - 1 - s))
    for s in range(d):
        rows.append([0] * s + rev1 + [0] * (n - d - 1 - s))
    return rows


def sylvester_resultant(f0, f1) -> int:
    return _bareiss_det(sylvester_matrix(f0, f1))


@dataclass(frozen=True)
class BezoutCertificate:
    """Cofactor forms certifying g0x*F0 + g1x*F1 = res*X^(2d-1) and the Y analogue.

    The cofactors have degree d-1; both identities are re-expanded and checked
    exactly at construction time, so holding a certificate is proof.
    """

    g0x: tuple
    g1x: tuple
    g0y: tuple
    g1y: tuple
    res: int


def _solve_fraction_system(mat, rhs):
    """Solve an integer linear system exactly over Fraction; None if singular."""
    n = len(mat)
    a = [[Fraction(v) for v in row] + [Fraction(rhs[i])] for i, row in enumerate(mat)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            return None
        a[col], a[piv] = a[piv], a[col]
        pv = a[col][col]
        a[col] = [v / pv for v in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [vr - f * vc for vr, vc in zip(a[r], a[col])]
    return [a[r][n] for r in range(n)]


def bezout_certificate(f0, f1, res: int) -> BezoutCertificate:
    """Compute and verify cofactor forms for the two Bezout identities."""
    d = len(f0) - 1
    e = 2 * d - 1
    # columns of the transposed Sylvester system: unknown cofactor coefficients
    # (u has degree d-1, paired with f0; v has degree d-1, paired with f1)
    # equation: sum_j u_j x^j f0 + sum_j v_j x^j f1 = res * x^target (affine, y = 1)
    a0 = list(f0)
    a1 = list(f1)
    mat = [[0] * (2 * d) for _ in range(2 * d)]
    for j in range(d):
        for i, c in enumerate(a0):
            mat[i + j][j] += c
        for i, c in enumerate(a1):
            mat[i + j][d + j] += c
    out = []
    for target in (e, 0):
        rhs = [0] * (2 * d)
        rhs[target] = res
        sol = _solve_fraction_system(mat, rhs)
        if sol is None:
            raise DegenerateMap("resultant vanished while solving for Bezout cofactors")
        ints = []
        for v in sol:
            if v.denominator != 1:
                # adjugate entries are integers; a non-integer means res was wrong
                raise DegenerateMap("non-integral Bezout cofactor; inconsistent resultant")
            ints.append(int(v))
        out.append((tuple(ints[:d]), tuple(ints[d:])))
    (g0x, g1x), (g0y, g1y) = out
    cert = BezoutCertificate(g0x, g1x, g0y, g1y, res)
    _verify_certificate(f0, f1, cert)
    return cert


def _verify_certificate(f0, f1, cert: BezoutCertificate) -> None:
    d = len(f0) - 1
    e = 2 * d - 1
    for gs, target_idx in (((cert.g0x, cert.g1x), e), ((cert.g0y, cert.g1y), 0)):
        total = [0] * (e + 1)
        for g, f in zip(gs, (f0, f1)):
            prod = poly_mul(list(g), list(f))
            for i, c in enumerate(prod):
                total[i] += c
        expect = [0] * (e + 1)
        expect[target_idx] = cert.res
        if total != expect:
            raise DegenerateMap("Bezout identity failed exact verification")


# ---------------------------------------------------------------------------
# rational map lifts
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RationalMapLift:
    """Homogeneous lift (F0, F1) of a rational self-map of P^1.

    Coefficient tuples are jointly content-normalized with a canonical joint
    sign (the top nonzero coefficient of F0 positive, falling back to F1).
    res caches the nonzero Sylvester resultant, so every constructed lift is
    a morphism.
    """

    f0: tuple
    f1: tuple
    degree: int
    res: int

    @classmethod
    def make(cls, f0, f1, res: int | None = None) -> "RationalMapLift":
        f0 = tuple(int(c) for c in f0)
        f1 = tuple(int(c) for c in f1)
        if len(f0) != len(f1) or len(f0) < 2:
            raise DegenerateMap("lift components must share a degree >= 1")
        d = len(f0) - 1
        g = math.gcd(content(f0), content(f1))
        if g == 0:
            raise DegenerateMap("zero lift")
        scaled = g > 1
        if scaled:
            f0 = tuple(c // g for c in f0)
            f1 = tuple(c // g for c in f1)
        lead = next((c for c in reversed(f0) if c != 0), 0) or \
            next(c for c in reversed(f1) if c != 0)
        if lead < 0:
            f0 = tuple(-c for c in f0)
            f1 = tuple(-c for c in f1)
        if res is None:
            res = sylvester_resultant(f0, f1)
        elif scaled:
            q, r = divmod(res, g ** (2 * d))
            if r != 0:
                raise DegenerateMap("cached resultant inconsistent with content")
            res = q
        res = abs(res)
        if res == 0:
            raise DegenerateMap("resultant is zero: F0 and F1 share a projective root")
        return cls(f0, f1, d, res)

    @property
    def is_polynomial(self) -> bool:
        """True when F1 is a multiple of Y^d (the map fixes infinity as a polynomial)."""
        return all(c == 0 for c in self.f1[1:])

    def certificate(self) -> BezoutCertificate:
        return _certificate_cached(self.f0, self.f1, self.res)

    def affine_str(self) -> str:
        def side(cs):
            terms = []
            for i, c in enumerate(cs):
                if c:
                    terms.append(f"{c}*z^{i}" if i else f"{c}")
            return " + ".join(reversed(terms)) or "0"

        return f"({side(self.f0)}) / ({side(self.f1)})"


@lru_cache(maxsize=256)
def _certificate_cached(f0, f1, res):
    return bezout_certificate(f0, f1, res)


def evaluate(F: RationalMapLift, p: ProjectivePoint) -> ProjectivePoint:
    """Exact image of a rational point; the resultant guarantees a nonzero pair."""
    x0 = form_eval(F.f0, p.x, p.y)
    x1 = form_eval(F.f1, p.x, p.y)
    return ProjectivePoint(x0, x1)


def evaluate_cpoint(F: RationalMapLift, p: CPoint) -> CPoint:
    return CPoint(form_eval(F.f0, p.x, p.y), form_eval(F.f1, p.x, p.y))


def compose(F: RationalMapLift, G: RationalMapLift,
            cap_digits: int = DEFAULT_DIGIT_CAP) -> RationalMapLift:
    """Lift of f∘g; degree multiplies, content renormalized, resultant by multiplicativity."""
    a = list(G.f0)
    b = list(G.f1)
    h0 = form_compose(F.f0, a, b)
    h1 = form_compose(F.f1, a, b)
    biggest = max(abs(c) for c in h0 + h1)
    check_cap(biggest, cap_digits)
    # Res(F∘G) = Res(F)^deg(G) * Res(G)^(deg(F)^2); make() divides out the
    # content power when the composed pair is not primitive.
    res = F.res ** G.degree * G.res ** (F.degree ** 2)
    return RationalMapLift.make(h0, h1, res=res)


def iterate_lift(F: RationalMapLift, n: int, cap_digits: int = DEFAULT_DIGIT_CAP) -> RationalMapLift:
    """Lift of the n-th iterate (n >= 1)."""
    if n < 1:
        raise ValueError("iterate count must be >= 1")
    out = F
    for _ in range(n - 1):
        out = compose(F, out, cap_digits=cap_digits)
    return out


def resultant(F: RationalMapLift) -> tuple[int, BezoutCertificate]:
    """Cached resultant together with its verified Bezout certificate."""
    return F.res, F.certificate()


def wronskian(F: RationalMapLift) -> tuple:
    """The degree 2d-2 critical form F0_X F1_Y - F0_Y F1_X."""
    ax = form_derivative_x(F.f0)
    ay = form_derivative_y(F.f0)
    bx = form_derivative_x(F.f1)
    by = form_derivative_y(F.f1)
    w = [0] * (2 * F.degree - 1)
    for i, c in enumerate(poly_mul(list(ax), list(by))):
        w[i] += c
    for i, c in enumerate(poly_mul(list(ay), list(bx))):
        w[i] -= c
    return tuple(w)


def critical_points(F: RationalMapLift, tol: float = 1e-12):
    """All 2d-2 critical points with multiplicity, plus the exact rational ones.

    Returns (points, rational) where points is a list of (CPoint, multiplicity,
    exact ProjectivePoint or None) and rational collects the exact sublist.
    """
    from .roots import binary_form_roots  # local import to avoid a cycle

    if F.degree < 2:
        raise DegenerateMap("critical points need degree >= 2")
    pts = binary_form_roots(wronskian(F), tol=tol)
    total = sum(m for _, m, _ in pts)
    assert total == 2 * F.degree - 2, "critical form root count must be 2d-2"
    rational = [ex for _, _, ex in pts if ex is not None]
    return pts, rational


def mobius_conjugate(F: RationalMapLift, m) -> RationalMapLift:
    """Conjugate the lift by an invertible integer Möbius map (a b / c d)."""
    a, b, c, d = (int(v) for v in m)
    det = a * d - b * c
    if det == 0:
        raise DegenerateMap("Möbius matrix must be invertible")
    fwd0, fwd1 = (b, a), (d, c)       # (X, Y) -> (aX + bY, cX + dY), ascending X-power
    t0 = form_compose(F.f0, list(fwd0), list(fwd1))
    t1 = form_compose(F.f1, list(fwd0), list(fwd1))
    # the inverse acts on the value side through the adjugate matrix
    g0 = [d * u - b * v for u, v in zip(t0, t1)]
    g1 = [-c * u + a * v for u, v in zip(t0, t1)]
    return RationalMapLift.make(g0, g1)


# ---------------------------------------------------------------------------
# JSON interface: {"num": [...], "den": [...]} with rationals as "p/q" strings
# ---------------------------------------------------------------------------

def map_from_json(obj) -> RationalMapLift:
    """Build a lift from the affine numerator/denominator JSON description."""
    if isinstance(obj, str):
        obj = json.loads(obj)
    num = [Fraction(str(c)) for c in obj["num"]]
    den = [Fraction(str(c)) for c in obj.get("den", [1])]
    scale = 1
    for c in num + den:
        scale = scale * c.denominator // math.gcd(scale, c.denominator)
    inum = [int(c * scale) for c in num]
    iden = [int(c * scale) for c in den]
    d = max(len(inum), len(iden)) - 1
    f0 = inum + [0] * (d + 1 - len(inum))
    f1 = iden + [0] * (d + 1 - len(iden))
    return RationalMapLift.make(f0, f1)


def map_to_json(F: RationalMapLift) -> dict:
    return {"num": [str(c) for c in F.f0], "den": [str(c) for c in F.f1]}


def load_map(path) -> RationalMapLift:
    with open(path, "r", encoding="utf-8") as fh:
        return map_from_json(json.load(fh))
