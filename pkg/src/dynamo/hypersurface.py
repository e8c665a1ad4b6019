"""Multihomogeneous hypersurfaces in (P^1)^n: dominance and fiber solving.

A hypersurface is a primitive integer form, separately homogeneous of degree
multidegree[k] in each coordinate pair (X_k : Y_k).  Terms are stored by
affine exponent tuple: exps[k] is the X_k power, the Y_k power being implied
by the multidegree.  The projection forgetting axis i is dominant exactly
when multidegree[i] > 0, and its generic fiber has that many points.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import DegenerateFiber
from .projective import ProjectivePoint
from .roots import binary_form_roots, poly_gcd_q, poly_trim


@dataclass(frozen=True)
class Hypersurface:
    """Primitive multihomogeneous integer form on (P^1)^n."""

    n: int
    multidegree: tuple
    terms: tuple  # sorted tuple of (exps, int coefficient)

    @classmethod
    def make(cls, n: int, multidegree, terms) -> "Hypersurface":
        multidegree = tuple(int(m) for m in multidegree)
        if len(multidegree) != n:
            raise ValueError("multidegree length must match n")
        collected: dict = {}
        denom = 1
        items = terms.items() if isinstance(terms, dict) else terms
        frs = []
        for exps, coeff in items:
            exps = tuple(int(e) for e in exps)
            if len(exps) != n:
                raise ValueError("exponent tuple length must match n")
            for k, e in enumerate(exps):
                if e < 0 or e > multidegree[k]:
                    raise ValueError(f"exponent {e} outside multidegree {multidegree[k]}")
            c = Fraction(coeff)
            denom = denom * c.denominator // math.gcd(denom, c.denominator)
            frs.append((exps, c))
        for exps, c in frs:
            collected[exps] = collected.get(exps, 0) + int(c * denom)
        collected = {e: c for e, c in collected.items() if c}
        if not collected:
            raise ValueError("the zero form is not a hypersurface")
        g = 0
        for c in collected.values():
            g = math.gcd(g, abs(c))
        if g > 1:
            collected = {e: c // g for e, c in collected.items()}
        first = min(collected)
        if collected[first] < 0:
            collected = {e: -c for e, c in collected.items()}
        return cls(n, multidegree, tuple(sorted(collected.items())))

    def term_dict(self) -> dict:
        return dict(self.terms)

    # -- dominance -----------------------------------------------------------

    def dominance(self) -> dict:
        """Per-axis dominance of the projection forgetting that axis.

        Forgetting axis i is dominant iff the form has positive degree in
        block i; also reports whether the form depends on exactly two blocks
        (the two-block pair-curve shape).
        """
        per_axis = {i: self.multidegree[i - 1] > 0 for i in range(1, self.n + 1)}
        active = [i for i in range(1, self.n + 1) if self.multidegree[i - 1] > 0]
        return {
            "axis": per_axis,
            "active_blocks": active,
            "pair_form_candidate": len(active) == 2,
        }

    # -- fibers ---------------------------------------------------------------

    def fiber_form_exact(self, i: int, values: dict[int, ProjectivePoint]) -> list:
        """Binary form in block i after exact substitution of the other blocks.

        values maps axis index (1-based, != i) to a projective point; returns
        integer coefficients [c_0..c_m] of sum c_k X_i^k Y_i^(m-k).
        """
        m = self.multidegree[i - 1]
        out = [0] * (m + 1)
        for exps, coeff in self.terms:
            val = coeff
            for j in range(1, self.n + 1):
                if j == i:
                    continue
                p = values[j]
                e = exps[j - 1]
                val *= p.x ** e * p.y ** (self.multidegree[j - 1] - e)
            out[exps[i - 1]] += val
        return out

    def fiber_coeff_matrix(self, i: int, pairs: dict[int, tuple], n_rows: int) -> np.ndarray:
        """Vectorized complex fiber coefficients for many samples at once.

        pairs maps axis j != i to (x_j, y_j) arrays of length n_rows; returns
        an (n_rows, multidegree[i]+1) complex matrix.
        """
        m = self.multidegree[i - 1]
        out = np.zeros((n_rows, m + 1), dtype=complex)
        for exps, coeff in self.terms:
            val = np.full(n_rows, float(coeff), dtype=complex)
            for j in range(1, self.n + 1):
                if j == i:
                    continue
                xj, yj = pairs[j]
                e = exps[j - 1]
                if e:
                    val = val * xj**e
                rest = self.multidegree[j - 1] - e
                if rest:
                    val = val * yj**rest
            out[:, exps[i - 1]] += val
        return out

    def evaluate_exact(self, points: dict[int, ProjectivePoint]) -> int:
        acc = 0
        for exps, coeff in self.terms:
            val = coeff
            for j in range(1, self.n + 1):
                p = points[j]
                e = exps[j - 1]
                val *= p.x ** e * p.y ** (self.multidegree[j - 1] - e)
            acc += val
        return acc

    def evaluate_complex(self, pairs: dict[int, tuple]) -> complex:
        acc = 0j
        for exps, coeff in self.terms:
            val = complex(coeff)
            for j in range(1, self.n + 1):
                x, y = pairs[j]
                e = exps[j - 1]
                val *= x**e * y ** (self.multidegree[j - 1] - e)
            acc += val
        return acc

    def coefficient_norm(self) -> float:
        try:
            return float(max(abs(c) for _, c in self.terms))
        except OverflowError:
            return math.inf

    def scaled_coefficients(self) -> dict:
        """Terms divided exactly by the max |coefficient|; floats in [-1, 1]."""
        m = max(abs(c) for _, c in self.terms)
        return {e: float(Fraction(c, m)) for e, c in self.terms}

    # -- heuristic irreducibility probes --------------------------------------

    def irreducibility_warnings(self, trials: int = 3) -> list[str]:
        """Cheap soundness probes: repeated factors along random specializations.

        These cannot prove irreducibility (the caller asserts it); they catch
        obvious squares and content issues and return human-readable warnings.
        """
        import random

        warnings = []
        rng = random.Random(2024)
        for i in range(1, self.n + 1):
            if self.multidegree[i - 1] < 2:
                continue
            for _ in range(trials):
                values = {}
                for j in range(1, self.n + 1):
                    if j != i:
                        values[j] = ProjectivePoint(rng.randint(-20, 20), rng.randint(1, 20))
                coeffs = self.fiber_form_exact(i, values)
                affine = poly_trim(coeffs)
                if len(affine) < 2:
                    continue
                deriv = [k * affine[k] for k in range(1, len(affine))]
                g = poly_gcd_q(affine, deriv)
                if len(poly_trim(g)) > 1:
                    warnings.append(
                        f"specialized fiber in block {i} has a repeated factor; "
                        "the form may be non-reduced or non-irreducible")
                    break
        return warnings


def dominance_check(H: Hypersurface) -> dict:
    """Per-axis dominance booleans plus the two-block candidate flag."""
    return H.dominance()


def fiber_solve(H: Hypersurface, i: int, values: dict[int, ProjectivePoint],
                tol: float = 1e-12):
    """All projective roots of the fiber through exact constrained values.

    Returns [(CPoint, mult, exact-or-None), ...]; DegenerateFiber if the
    substituted form vanishes identically.
    """
    dom = H.dominance()
    if not dom["axis"][i]:
        raise ValueError(f"projection forgetting axis {i} is not dominant")
    coeffs = H.fiber_form_exact(i, values)
    if all(c == 0 for c in coeffs):
        raise DegenerateFiber(f"fiber over {values} vanishes identically")
    return binary_form_roots(coeffs, tol=tol)


# ---------------------------------------------------------------------------
# JSON interface: {"n":3, "multidegree":[...], "terms":[{"exps":[...],"coeff":"p/q"}]}
# ---------------------------------------------------------------------------

def hypersurface_from_json(obj) -> Hypersurface:
    if isinstance(obj, str):
        obj = json.loads(obj)
    n = int(obj["n"])
    multidegree = obj["multidegree"]
    terms = [(t["exps"], Fraction(str(t["coeff"]))) for t in obj["terms"]]
    return Hypersurface.make(n, multidegree, terms)


def hypersurface_to_json(H: Hypersurface) -> dict:
    return {
        "n": H.n,
        "multidegree": list(H.multidegree),
        "terms": [{"exps": list(e), "coeff": str(c)} for e, c in H.terms],
    }


def load_hypersurface(path) -> Hypersurface:
    with open(path, "r", encoding="utf-8") as fh:
        return hypersurface_from_json(json.load(fh))


# -- convenient builders used across tests and the CLI -----------------------

def diagonal_surface(n: int = 2, i: int = 1, j: int = 2) -> Hypersurface:
    """x_i = x_j pulled back to (P^1)^n: X_i Y_j - X_j Y_i."""
    md = [0] * n
    md[i - 1] = md[j - 1] = 1
    e1 = [0] * n
    e1[i - 1] = 1
    e2 = [0] * n
    e2[j - 1] = 1
    return Hypersurface.make(n, md, [(tuple(e1), 1), (tuple(e2), -1)])


def graph_surface(coeffs_num, coeffs_den=None) -> Hypersurface:
    """The graph {x_2 = p(x_1)/q(x_1)} in (P^1)^2 as a bihomogeneous form.

    coeffs ascending; e.g. graph_surface([0, 0, 1]) is x_2 = x_1^2, i.e.
    X_2 Y_1^2 - X_1^2 Y_2 after homogenization.
    """
    num = [Fraction(str(c)) for c in coeffs_num]
    den = [Fraction(str(c)) for c in (coeffs_den or [1])]
    d = max(len(num), len(den)) - 1
    num += [Fraction(0)] * (d + 1 - len(num))
    den += [Fraction(0)] * (d + 1 - len(den))
    terms = []
    for k in range(d + 1):
        if den[k]:
            terms.append(((k, 1), den[k]))   # X1^k Y1^(d-k) X2
        if num[k]:
            terms.append(((k, 0), -num[k]))  # X1^k Y1^(d-k) Y2
    return Hypersurface.make(2, (d, 1), terms)
