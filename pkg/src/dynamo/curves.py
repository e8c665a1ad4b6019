"""Images and orbits of plane curves under split endomorphisms of P^1 x P^1.

The image of a curve C under (f, g) is computed by projective resultant
elimination against the graph forms V*F0(X1,Y1) - U*F1(X1,Y1) and
T*G0(X2,Y2) - S*G1(X2,Y2): resultants of binary forms with formal degrees
vanish exactly on the image (points at infinity included), so the only
post-processing needed is content/monomial bookkeeping and squarefree
reduction.  Every pushforward is verified by mapping sampled points of C
through (f, g) and checking they annihilate the output form.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import CapExceeded, EliminationFailure
from .hypersurface import Hypersurface
from .mpoly import MPoly, bivar_squarefree, resultant_formal
from .projective import (
    DEFAULT_DIGIT_CAP,
    CPoint,
    RationalMapLift,
    digits_of,
    evaluate_cpoint,
)
from .roots import roots_batch

#: a curve in P^1 x P^1 is a two-block hypersurface with canonical normalization
Curve2 = Hypersurface


def make_curve(terms, bidegree) -> Curve2:
    return Hypersurface.make(2, bidegree, terms)


def _curve_to_mpoly(C: Curve2) -> MPoly:
    # slots: (0, 1, 2) = (x1, x2, parameter)
    return MPoly(3, {(e[0], e[1], 0): c for e, c in C.terms})


def _graph_mpoly(F: RationalMapLift) -> MPoly:
    # F0(t) - p * F1(t) in slots (t, unused, p): the dehomogenized graph form
    terms = {}
    for i, c in enumerate(F.f0):
        if c:
            terms[(i, 0, 0)] = terms.get((i, 0, 0), 0) + c
    for i, c in enumerate(F.f1):
        if c:
            terms[(i, 0, 1)] = terms.get((i, 0, 1), 0) - c
    return MPoly(3, terms)


def _permute(p: MPoly, perm) -> MPoly:
    return MPoly(3, {tuple(e[perm[k]] for k in range(3)): c for e, c in p.terms.items()})


def _reduce_to_curve(affine: MPoly, formal_u: int, formal_s: int,
                     cap_digits: int) -> Curve2:
    """Monomial bookkeeping + squarefree reduction + canonical normalization.

    affine holds the eliminated form in slots (u, s, 0) with formal block
    degrees (formal_u, formal_s); monomial factors (fibers over 0 and
    infinity) are reduced to multiplicity one like every other factor.
    """
    if affine.is_zero:
        raise EliminationFailure("resultant vanished identically")
    terms = {(e[0], e[1]): c for e, c in affine.terms.items()}
    min_u = min(e[0] for e in terms)
    min_s = min(e[1] for e in terms)
    terms = {(e[0] - min_u, e[1] - min_s): c for e, c in terms.items()}
    act_u = max(e[0] for e in terms)
    act_s = max(e[1] for e in terms)
    gap_u = formal_u - min_u - act_u  # multiplicity of the Y_U factor
    gap_s = formal_s - min_s - act_s
    core = MPoly(2, {e: c for e, c in terms.items()})
    biggest = max(abs(c) for c in core.terms.values())
    if digits_of(biggest) > cap_digits:
        raise CapExceeded("curve coefficients exceeded the digit cap")
    sf = bivar_squarefree(core, 0, 1)
    sf_u = max(e[0] for e in sf.terms)
    sf_s = max(e[1] for e in sf.terms)
    # reattach one copy of each monomial-type factor: U (fiber u=0), V (u=inf),
    # S, T likewise; affine exponents shift only for U/S, bidegree for all
    du = sf_u + (1 if min_u else 0) + (1 if gap_u > 0 else 0)
    ds = sf_s + (1 if min_s else 0) + (1 if gap_s > 0 else 0)
    shift_u = 1 if min_u else 0
    shift_s = 1 if min_s else 0
    out = {(e[0] + shift_u, e[1] + shift_s): c for e, c in sf.terms.items()}
    return Hypersurface.make(2, (du, ds), out)


def _sample_curve_points(C: Curve2, count: int, rng: np.random.Generator):
    """Numeric points on C: random x1 values, x2 from the fiber roots."""
    pts = []
    guard = 0
    d2 = C.multidegree[1]
    while len(pts) < count and guard < 40 * count:
        guard += 1
        z = complex(rng.normal(), rng.normal())
        p1 = CPoint.from_affine(z)
        if d2 == 0:
            # the form does not involve block 2 (union of vertical lines):
            # x1 ranges over the roots and x2 is free
            for r in _roots_of_row(_fiber_complex(C, 1, p1)):
                if len(pts) < count:
                    pts.append((_chartpoint(r), p1))
            continue
        coeffs = _fiber_complex(C, 2, p1)
        if max(abs(c) for c in coeffs) < 1e-12:
            continue
        for r in _roots_of_row(coeffs):
            if len(pts) < count:
                pts.append((p1, _chartpoint(r)))
    if len(pts) < count:
        raise EliminationFailure("could not sample enough numeric points on the curve")
    return pts


def _fiber_complex(C: Curve2, axis: int, p: CPoint) -> list[complex]:
    m = C.multidegree[axis - 1]
    out = [0j] * (m + 1)
    for e, c in C.terms:
        if axis == 2:
            w = c * p.x ** e[0] * p.y ** (C.multidegree[0] - e[0])
            out[e[1]] += w
        else:
            w = c * p.x ** e[1] * p.y ** (C.multidegree[1] - e[1])
            out[e[0]] += w
    return out


def _roots_of_row(coeffs: list[complex]):
    row = np.array([coeffs], dtype=complex)
    scale = np.max(np.abs(row))
    roots = roots_batch(row / scale)[0]
    return [r for r in roots]


def _chartpoint(r: complex) -> CPoint:
    if not np.isfinite(r):
        return CPoint.at_infinity()
    return CPoint.from_affine(complex(r))


def curve_pushforward(C: Curve2, f: RationalMapLift, g: RationalMapLift,
                      tol: float = 1e-8, samples: int = 20,
                      cap_digits: int = DEFAULT_DIGIT_CAP,
                      rng: np.random.Generator | None = None) -> Curve2:
    """The image curve (f, g)(C), squarefree and canonically normalized.

    Verified on `samples` numeric points of C: their images must annihilate
    the output form to relative tolerance tol (EliminationFailure otherwise).
    """
    d1, d2 = C.multidegree
    c_mp = _curve_to_mpoly(C)
    gamma_f = _graph_mpoly(f)
    r1 = resultant_formal(c_mp.coeff_list(0, formal=d1),
                          gamma_f.coeff_list(0, formal=f.degree),
                          d1, f.degree)
    if r1.is_zero:
        raise EliminationFailure("first elimination vanished identically")
    # r1 lives in slots (0, x2, u); move to (x2, u, 0) for the second stage
    r1 = _permute(r1, (1, 2, 0))
    formal_x2 = f.degree * d2
    gamma_g = _graph_mpoly(g)
    r2 = resultant_formal(r1.coeff_list(0, formal=formal_x2),
                          gamma_g.coeff_list(0, formal=g.degree),
                          formal_x2, g.degree)
    if r2.is_zero:
        raise EliminationFailure("second elimination vanished identically")
    # r2 lives in slots (0, u, s); shift down to (u, s, 0)
    r2 = _permute(r2, (1, 2, 0))
    image = _reduce_to_curve(r2, f.degree * d1, g.degree * d2, cap_digits)
    _verify_pushforward(C, image, f, g, tol, samples, rng)
    return image


def _verify_pushforward(C, image, f, g, tol, samples, rng=None) -> None:
    rng = rng or np.random.default_rng(20240808)
    pts = _sample_curve_points(C, samples, rng)
    scaled = image.scaled_coefficients()
    d1, d2 = image.multidegree
    residuals = []
    for p1, p2 in pts:
        u = evaluate_cpoint(f, p1)
        s = evaluate_cpoint(g, p2)
        val = 0j
        for (e1, e2), c in scaled.items():
            val += c * u.x**e1 * u.y ** (d1 - e1) * s.x**e2 * s.y ** (d2 - e2)
        residuals.append(abs(val))
    worst = max(residuals)
    if worst > tol:
        raise EliminationFailure(
            f"pushforward verification failed: worst residual {worst:.3e} over "
            f"{len(residuals)} sampled points (tol {tol:.0e})")


@dataclass(frozen=True)
class CurveOrbitOutcome:
    """Exact repetition of normalized forms, or the observed bidegree growth."""

    preperiodic: bool
    tail: int | None = None
    period: int | None = None
    bidegrees: tuple = ()
    curves: tuple = field(default=(), repr=False)


def curve_orbit(C: Curve2, f: RationalMapLift, g: RationalMapLift,
                max_iter: int = 8, tol: float = 1e-8,
                cap_digits: int = DEFAULT_DIGIT_CAP,
                max_bidegree: int = 64) -> CurveOrbitOutcome:
    """Iterate curve_pushforward with canonical normalization and detect repeats.

    Preperiodic orbits have bounded bidegree, so growth past max_bidegree ends
    the iteration early with the growth log (the not-detected outcome).
    """
    seen = {C: 0}
    chain = [C]
    cur = C
    for k in range(1, max_iter + 1):
        worst_next = max(f.degree * cur.multidegree[0], g.degree * cur.multidegree[1])
        if worst_next > max_bidegree and k > 1:
            break
        cur = curve_pushforward(cur, f, g, tol=tol, cap_digits=cap_digits)
        if cur in seen:
            tail = seen[cur]
            return CurveOrbitOutcome(True, tail=tail, period=k - tail,
                                     bidegrees=tuple(c.multidegree for c in chain),
                                     curves=tuple(chain))
        seen[cur] = k
        chain.append(cur)
    return CurveOrbitOutcome(False,
                             bidegrees=tuple(c.multidegree for c in chain),
                             curves=tuple(chain))
