"""Archimedean escape-rate potentials and Monte-Carlo invariant measures.

The maximal-entropy measure of a degree-d rational map is approximated by
backward iteration: repeatedly pull a start point back through uniformly
chosen preimage branches and keep the endpoints.  Product measures sample
factors independently; hypersurface pullbacks solve the fiber equation per
sample and pick one of the deg roots uniformly, realizing the normalized
pullback measure.

Points live in one of two charts (z, or w = 1/z when |z| > 1) so nothing
degrades near infinity.  The fixed comparison family for discrepancy tests
is 64 spherical caps of aperture cos(rho) = 0.5 centered on a Fibonacci
sphere net, plus 64 equal arcs for angular statistics on the circle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import RootFindingFailure
from .projective import RationalMapLift, form_eval
from .roots import roots_batch

CAP_COUNT = 64
CAP_COS = 0.5  # aperture: points within 60 degrees of the center


@dataclass(frozen=True)
class GreenValue:
    """Truncated escape-rate potential log||F^n(z,1)|| / d^n."""

    value: float
    iterations: int


@dataclass(frozen=True)
class EmpiricalMeasure:
    """Equal-weight point cloud; column k is the k-th coordinate of each sample.

    values[i, k] is the chart coordinate and inverted[i, k] says whether it is
    w = 1/z.  Reproducible from (seed, depth, sample count).
    """

    values: np.ndarray
    inverted: np.ndarray
    seed: int
    depth: int

    @property
    def size(self) -> int:
        return self.values.shape[0]

    @property
    def width(self) -> int:
        return self.values.shape[1]

    @property
    def weights(self) -> np.ndarray:
        return np.full(self.size, 1.0 / self.size)

    def affine(self, col: int = 0) -> np.ndarray:
        """Affine complex values of one column; inverted entries become 1/w."""
        v = self.values[:, col]
        inv = self.inverted[:, col]
        out = v.copy()
        with np.errstate(divide="ignore", invalid="ignore"):
            out[inv] = np.where(v[inv] != 0, 1.0 / v[inv], np.inf)
        return out

    def sphere(self, col: int = 0) -> np.ndarray:
        return sphere_embed(self.values[:, col], self.inverted[:, col])


def green(F: RationalMapLift, z: complex, n: int) -> GreenValue:
    """log max(|F0^n(z,1)|, |F1^n(z,1)|) / d^n with per-step renormalization.

    The discarded scale factor is carried exactly in the accumulator:
    acc_(k+1) = d * acc_k + log||F(x_k, y_k)|| with (x_k, y_k) renormalized
    to sup-norm 1 after every step.
    """
    if n < 1:
        raise ValueError("green needs n >= 1")
    d = F.degree
    x, y = complex(z), 1.0 + 0j
    m = max(abs(x), abs(y))
    x, y = x / m, y / m
    acc = math.log(m)
    for _ in range(n):
        x, y = form_eval(F.f0, x, y), form_eval(F.f1, x, y)
        m = max(abs(x), abs(y))
        if m == 0.0:
            raise RootFindingFailure("lift evaluated to the zero pair numerically")
        x, y = x / m, y / m
        acc = d * acc + math.log(m)
    return GreenValue(acc / d**n, n)


# ---------------------------------------------------------------------------
# backward-orbit sampling
# ---------------------------------------------------------------------------

def _preimages(F: RationalMapLift, values: np.ndarray, inverted: np.ndarray):
    """All d preimages (with multiplicity) of each point; rows sorted canonically.

    Returns (vals, invs) of shape (N, d): the fiber form is
    F0(X, Y) * ty - F1(X, Y) * tx with (tx, ty) the target pair.
    """
    n = values.shape[0]
    d = F.degree
    tx = np.where(inverted, 1.0 + 0j, values)
    ty = np.where(inverted, values, 1.0 + 0j)
    coeffs = np.empty((n, d + 1), dtype=complex)
    for i in range(d + 1):
        coeffs[:, i] = F.f0[i] * ty - F.f1[i] * tx
    roots = roots_batch(coeffs)
    with np.errstate(divide="ignore", invalid="ignore"):
        vals = np.where(np.abs(roots) > 1.0, 1.0 / roots, roots)
    invs = np.abs(roots) > 1.0
    vals = np.where(np.isfinite(roots), vals, 0.0)
    invs = np.where(np.isfinite(roots), invs, True)
    # canonical in-row order so branch indices are reproducible
    order = np.lexsort((vals.imag.round(9), vals.real.round(9), invs), axis=1)
    rows = np.arange(n)[:, None]
    return vals[rows, order], invs[rows, order]


def _start_point(F: RationalMapLift, rng: np.random.Generator) -> complex:
    """A start point whose two-step preimage set is provably non-degenerate."""
    for _ in range(16):
        z0 = complex(0.4 + rng.random(), 0.3 + rng.random())
        vals = np.array([[z0]], dtype=complex)
        invs = np.array([[False]])
        v1, i1 = _preimages(F, vals[:, 0], invs[:, 0])
        v2list = []
        for k in range(v1.shape[1]):
            v2, i2 = _preimages(F, v1[:, k], i1[:, k])
            for j in range(v2.shape[1]):
                v2list.append((complex(v2[0, j]), bool(i2[0, j])))
        distinct = set()
        for v, inv in v2list:
            distinct.add((round(v.real, 6), round(v.imag, 6), inv))
        if len(distinct) >= 2:
            return z0
    raise RootFindingFailure("could not find a non-exceptional backward start point")


def sample_invariant_measure(F: RationalMapLift, n_samples: int, depth: int,
                             seed: int = 0) -> EmpiricalMeasure:
    """Endpoints of n_samples independent uniform backward orbits of length depth."""
    if F.degree < 2:
        raise ValueError("invariant measures need degree >= 2")
    if n_samples < 1 or depth < 1:
        raise ValueError("n_samples and depth must be >= 1")
    rng = np.random.default_rng(np.random.SeedSequence([seed & 0xFFFFFFFF]))
    z0 = _start_point(F, rng)
    branches = rng.integers(0, F.degree, size=(depth, n_samples))
    vals = np.full(n_samples, z0, dtype=complex)
    invs = np.zeros(n_samples, dtype=bool)
    rows = np.arange(n_samples)
    for step in range(depth):
        pv, pi = _preimages(F, vals, invs)
        pick = branches[step]
        vals = pv[rows, pick]
        invs = pi[rows, pick]
    return EmpiricalMeasure(vals[:, None], invs[:, None], seed, depth)


def sample_product_measure(maps, skip: int, n_samples: int, depth: int,
                           seed: int = 0) -> EmpiricalMeasure:
    """Independent coordinatewise samples of the product measure skipping index `skip`.

    `skip` is 1-based to match coordinate-axis numbering; columns keep the
    order of the remaining maps.
    """
    cols_v = []
    cols_i = []
    for j, F in enumerate(maps, start=1):
        if j == skip:
            continue
        sub = sample_invariant_measure(F, n_samples, depth, seed=_substream(seed, j))
        cols_v.append(sub.values[:, 0])
        cols_i.append(sub.inverted[:, 0])
    if not cols_v:
        raise ValueError("product over an empty index set")
    return EmpiricalMeasure(np.stack(cols_v, axis=1), np.stack(cols_i, axis=1),
                            seed, depth)


def _substream(seed: int, tag: int) -> int:
    return (seed * 1_000_003 + tag * 7919 + 17) & 0x7FFFFFFF


# ---------------------------------------------------------------------------
# hypersurface pullback
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PullbackSample:
    measure: EmpiricalMeasure
    discarded: int


def pullback_to_hypersurface(H, maps, i: int, n_samples: int, depth: int,
                             seed: int = 0) -> PullbackSample:
    """Sample the normalized pullback of the product measure through axis i.

    For each product-measure sample of the coordinates != i, the fiber binary
    form in block i is solved and one of its multidegree[i] roots is chosen
    uniformly; identically-vanishing fibers are discarded and counted.
    """
    if H.multidegree[i - 1] <= 0:
        raise ValueError(f"H does not project dominantly when forgetting axis {i}")
    base = sample_product_measure(maps, i, n_samples, depth, seed=seed)
    others = [j for j in range(1, H.n + 1) if j != i]
    deg = H.multidegree[i - 1]
    n = base.size
    pairs = {}
    for col, j in enumerate(others):
        v = base.values[:, col]
        inv = base.inverted[:, col]
        pairs[j] = (np.where(inv, 1.0 + 0j, v), np.where(inv, v, 1.0 + 0j))
    coeffs = H.fiber_coeff_matrix(i, pairs, n)
    scale = np.max(np.abs(coeffs), axis=1)
    good = scale > 1e-13
    discarded = int(np.sum(~good))
    coeffs = coeffs[good]
    rng = np.random.default_rng(np.random.SeedSequence([_substream(seed, 971 + i)]))
    picks = rng.integers(0, deg, size=coeffs.shape[0])
    roots = roots_batch(coeffs / scale[good, None])
    order = np.lexsort((roots.imag.round(9), roots.real.round(9)), axis=1)
    rows = np.arange(coeffs.shape[0])[:, None]
    roots = roots[rows, order]
    chosen = roots[np.arange(coeffs.shape[0]), picks]
    with np.errstate(divide="ignore", invalid="ignore"):
        vals_i = np.where(np.abs(chosen) > 1.0, 1.0 / chosen, chosen)
    invs_i = np.abs(chosen) > 1.0
    vals_i = np.where(np.isfinite(chosen), vals_i, 0.0)
    invs_i = np.where(np.isfinite(chosen), invs_i, True)
    width = H.n
    out_v = np.empty((coeffs.shape[0], width), dtype=complex)
    out_i = np.empty((coeffs.shape[0], width), dtype=bool)
    for col, j in enumerate(others):
        out_v[:, j - 1] = base.values[good, col]
        out_i[:, j - 1] = base.inverted[good, col]
    out_v[:, i - 1] = vals_i
    out_i[:, i - 1] = invs_i
    return PullbackSample(EmpiricalMeasure(out_v, out_i, seed, depth), discarded)


# ---------------------------------------------------------------------------
# spherical caps and discrepancy statistics
# ---------------------------------------------------------------------------

def sphere_embed(values: np.ndarray, inverted: np.ndarray) -> np.ndarray:
    """Stereographic embedding into S^2; works in both charts without overflow."""
    v = np.asarray(values)
    inv = np.asarray(inverted, dtype=bool)
    n2 = np.abs(v) ** 2
    denom = 1.0 + n2
    x = 2.0 * v.real / denom
    y = 2.0 * v.imag / denom
    z = (n2 - 1.0) / denom
    out = np.stack([x, y, z], axis=-1)
    # w-chart: z = 1/w maps to (2 Re w, -2 Im w, 1 - |w|^2) / (1 + |w|^2)
    out[inv, 1] *= -1.0
    out[inv, 2] *= -1.0
    return out


def fibonacci_caps(count: int = CAP_COUNT) -> np.ndarray:
    """Fixed cap centers: the Fibonacci sphere net (documented comparison family)."""
    k = np.arange(count)
    z = 1.0 - (2.0 * k + 1.0) / count
    phi = k * math.pi * (3.0 - math.sqrt(5.0))
    r = np.sqrt(np.maximum(0.0, 1.0 - z * z))
    return np.stack([r * np.cos(phi), r * np.sin(phi), z], axis=1)


def cap_fractions(points_xyz: np.ndarray, centers: np.ndarray | None = None,
                  cos_aperture: float = CAP_COS) -> np.ndarray:
    """Fraction of points inside each cap {p : <p, c> >= cos_aperture}."""
    if centers is None:
        centers = fibonacci_caps()
    dots = points_xyz @ centers.T
    return np.mean(dots >= cos_aperture, axis=0)


def cap_discrepancy(a_xyz: np.ndarray, b_xyz: np.ndarray) -> float:
    """Max over the fixed cap family of the empirical mass difference."""
    return float(np.max(np.abs(cap_fractions(a_xyz) - cap_fractions(b_xyz))))


def arc_fractions(angles: np.ndarray, bins: int = CAP_COUNT) -> np.ndarray:
    """Fraction of angles in each of `bins` equal arcs of the circle."""
    idx = np.floor((np.mod(angles, 2.0 * math.pi)) / (2.0 * math.pi) * bins).astype(int)
    idx = np.clip(idx, 0, bins - 1)
    return np.bincount(idx, minlength=bins) / len(angles)


def arc_discrepancy_uniform(angles: np.ndarray, bins: int = CAP_COUNT) -> float:
    """Max deviation of arc masses from the uniform 1/bins."""
    return float(np.max(np.abs(arc_fractions(angles, bins) - 1.0 / bins)))


def clt_threshold(n_samples: int, caps: int = CAP_COUNT) -> float:
    """The documented heuristic threshold tau = 3 sqrt(ln(caps) / N)."""
    return 3.0 * math.sqrt(math.log(caps) / n_samples)


def segment_distance(values: np.ndarray, lo: float = -2.0, hi: float = 2.0) -> np.ndarray:
    """Euclidean distance from complex samples to the real segment [lo, hi]."""
    v = np.asarray(values)
    dx = np.maximum(np.maximum(lo - v.real, v.real - hi), 0.0)
    return np.hypot(dx, v.imag)
