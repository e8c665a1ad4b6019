"""Joint-preperiodicity evidence on hypersurfaces of (P^1)^n.

For a hypersurface carrying a dense set of jointly preperiodic points under
split non-exceptional maps, several necessary conditions must hold: fibers
over preperiodic tuples consist of preperiodic points, the pulled-back
measures through every coordinate projection agree, and two-block forms come
from a preperiodic plane curve under iterates of matching degree.  mm_verify
runs all of these and reports which (if any) fail, with concrete witnesses.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

import numpy as np

from .curves import Curve2, CurveOrbitOutcome, curve_orbit
from .errors import InsufficientPreperiodicSupply
from .exceptional import classify
from .heights import decide_preperiodic, rational_preperiodic_points
from .hypersurface import Hypersurface, fiber_solve
from .measure import (
    cap_fractions,
    clt_threshold,
    green,
    pullback_to_hypersurface,
)
from .projective import iterate_lift


# ---------------------------------------------------------------------------
# fiberwise preperiodicity test
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FiberWitness:
    assignment: dict
    root: object
    preperiodic: bool | None  # None marks uncertified numeric roots
    detail: str


@dataclass(frozen=True)
class FiberTestResult:
    passes: int
    fails: int
    uncertified: int
    degenerate: int
    witnesses: tuple

    @property
    def all_certified_pass(self) -> bool:
        return self.fails == 0


def fiber_preperiodicity_test(H: Hypersurface, maps, i: int, trials: int = 100,
                              seed: int = 0, supply_box: int = 100) -> FiberTestResult:
    """Solve fibers over random preperiodic tuples; decide each rational root.

    Constrained coordinates j != i draw uniformly from the rational
    preperiodic set of map j; exact rational roots of the fiber get the exact
    preperiodicity decision, numeric roots an uncertified escape-rate
    estimate.  A certified non-preperiodic rational root is a fail witness.
    """
    dom = H.dominance()
    if not dom["axis"][i]:
        raise ValueError(f"projection forgetting axis {i} is not dominant")
    supplies = {}
    for j, F in enumerate(maps, start=1):
        if j == i:
            continue
        pts = rational_preperiodic_points(F, box=supply_box)
        if not pts:
            raise InsufficientPreperiodicSupply(
                f"map {j} has no rational preperiodic points in the search box")
        supplies[j] = pts
    rng = random.Random(seed)
    passes = fails = uncertified = degenerate = 0
    witnesses = []
    for _ in range(trials):
        assignment = {j: rng.choice(pts) for j, pts in supplies.items()}
        try:
            roots = fiber_solve(H, i, assignment)
        except Exception as exc:  # DegenerateFiber
            from .errors import DegenerateFiber

            if isinstance(exc, DegenerateFiber):
                degenerate += 1
                continue
            raise
        for cp, _mult, exact in roots:
            if exact is not None:
                verdict = decide_preperiodic(maps[i - 1], exact)
                if verdict.preperiodic:
                    passes += 1
                else:
                    fails += 1
                    witnesses.append(FiberWitness(
                        {k: str(v) for k, v in assignment.items()}, str(exact), False,
                        f"certified canonical height >= {verdict.height_lower_bound:.6g}"))
            else:
                uncertified += 1
                est = green(maps[i - 1], cp.affine(), 30).value if not cp.is_infinity else 0.0
                witnesses.append(FiberWitness(
                    {k: str(v) for k, v in assignment.items()},
                    repr(cp.affine()), None,
                    f"numeric root; uncertified escape-rate estimate {est:.6g}"))
    return FiberTestResult(passes, fails, uncertified, degenerate, tuple(witnesses))


# ---------------------------------------------------------------------------
# equal-measure diagnostic
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MeasureCompareResult:
    statistic: float
    threshold: float
    per_chart: tuple
    n_samples: int
    discarded: tuple
    slice_statistic: float | None = None

    @property
    def equal_within_noise(self) -> bool:
        return self.statistic < self.threshold


def measure_compare(H: Hypersurface, maps, i: int, j: int, n_samples: int = 10_000,
                    depth: int = 30, seed: int = 0,
                    slice_axis: int | None = None, slice_center: complex = 0.0,
                    slice_width: float = 0.5) -> MeasureCompareResult:
    """Cap discrepancy between the pullback measures through axes i and j.

    D is the maximum over coordinate charts and the fixed 64-cap family of
    the empirical mass difference; tau = 3 sqrt(ln 64 / N) is the documented
    CLT heuristic.  D and tau are reported, never upgraded to a proof.
    Sampling seeds depend on (seed, axis) only, so D_ij = D_ji exactly.

    Slice mode (optional): restrict both samples to a tube |x_a - c| < width
    around a value of one coordinate and compare the remaining 1-D caps.
    """
    out_i = pullback_to_hypersurface(H, maps, i, n_samples, depth, seed=seed)
    out_j = pullback_to_hypersurface(H, maps, j, n_samples, depth, seed=seed)
    per_chart = []
    stat = 0.0
    for axis in range(H.n):
        fr_i = cap_fractions(out_i.measure.sphere(axis))
        fr_j = cap_fractions(out_j.measure.sphere(axis))
        d_axis = float(np.max(np.abs(fr_i - fr_j)))
        per_chart.append(d_axis)
        stat = max(stat, d_axis)
    slice_stat = None
    if slice_axis is not None:
        keep_i = np.abs(out_i.measure.affine(slice_axis - 1) - slice_center) < slice_width
        keep_j = np.abs(out_j.measure.affine(slice_axis - 1) - slice_center) < slice_width
        slice_stat = 0.0
        for axis in range(H.n):
            if axis == slice_axis - 1:
                continue
            if keep_i.sum() < 50 or keep_j.sum() < 50:
                continue
            fr_i = cap_fractions(out_i.measure.sphere(axis)[keep_i])
            fr_j = cap_fractions(out_j.measure.sphere(axis)[keep_j])
            slice_stat = max(slice_stat, float(np.max(np.abs(fr_i - fr_j))))
    return MeasureCompareResult(stat, clt_threshold(n_samples), tuple(per_chart),
                                n_samples, (out_i.discarded, out_j.discarded),
                                slice_stat)


# ---------------------------------------------------------------------------
# two-block (pair-curve) form check
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PairFormCertificate:
    pair: tuple
    exponents: tuple
    curve: Curve2
    orbit: CurveOrbitOutcome


@dataclass(frozen=True)
class PairFormReport:
    certificate: PairFormCertificate | None
    reason: str


def ms_form_check(H: Hypersurface, maps, exponent_bound: int = 6,
                  max_iter: int = 8, max_bidegree: int = 64) -> PairFormReport:
    """If H depends on exactly two blocks, certify the pair-curve structure.

    Searches the lexicographically minimal (l_i, l_j) with
    deg(f_i)^l_i = deg(f_j)^l_j up to the bound, extracts the plane curve,
    and runs its orbit under the matching iterates.
    """
    dom = H.dominance()
    active = dom["active_blocks"]
    if len(active) != 2:
        return PairFormReport(None, f"depends on {len(active)} blocks")
    i, j = active
    di, dj = maps[i - 1].degree, maps[j - 1].degree
    found = None
    for li in range(1, exponent_bound + 1):
        for lj in range(1, exponent_bound + 1):
            if di**li == dj**lj:
                found = (li, lj)
                break
        if found:
            break
    if found is None:
        return PairFormReport(None,
                              f"no iterate degrees match up to exponent bound {exponent_bound}")
    li, lj = found
    curve = _restrict_to_pair(H, i, j)
    fi = iterate_lift(maps[i - 1], li)
    fj = iterate_lift(maps[j - 1], lj)
    orbit = curve_orbit(curve, fi, fj, max_iter=max_iter, max_bidegree=max_bidegree)
    cert = PairFormCertificate((i, j), (li, lj), curve, orbit)
    if orbit.preperiodic:
        return PairFormReport(cert, "pair curve is preperiodic under the matched iterates")
    return PairFormReport(cert, "pair curve not detected preperiodic within the budget")


def _restrict_to_pair(H: Hypersurface, i: int, j: int) -> Curve2:
    terms = {}
    for exps, c in H.terms:
        terms[(exps[i - 1], exps[j - 1])] = c
    return Hypersurface.make(2, (H.multidegree[i - 1], H.multidegree[j - 1]), terms)


# ---------------------------------------------------------------------------
# the full report
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MMConfig:
    samples: int = 10_000
    depth: int = 30
    trials: int = 100
    seed: int = 7
    exponent_bound: int = 6
    max_curve_iter: int = 6
    max_bidegree: int = 40
    supply_box: int = 100


@dataclass(frozen=True)
class MMReport:
    dominance: dict
    classifications: tuple
    fiber_tests: dict
    measure_tests: dict
    pair_form: PairFormReport
    threshold: float
    failed_conditions: tuple
    verdict: str
    warnings: tuple = ()


def mm_verify(H: Hypersurface, maps, config: MMConfig = MMConfig()) -> MMReport:
    """Run every necessary-condition test and assemble the evidence report.

    For a hypersurface genuinely carrying dense joint preperiodicity under
    non-exceptional maps, all sub-tests would pass and (for n > 2 dominant
    forms) contradict the classification theory, so some failure is expected
    on any other input; the report names the failures with witnesses.
    """
    if len(maps) != H.n:
        raise ValueError("one map per coordinate axis is required")
    dom = H.dominance()
    warnings = tuple(H.irreducibility_warnings())
    classifications = tuple(classify(F) for F in maps)
    failed = []
    fiber_tests = {}
    for i in range(1, H.n + 1):
        if not dom["axis"][i]:
            continue
        res = fiber_preperiodicity_test(H, maps, i, trials=config.trials,
                                        seed=config.seed + i, supply_box=config.supply_box)
        fiber_tests[i] = res
        if res.fails:
            failed.append(f"fiber test on axis {i}: {res.fails} certified "
                          f"non-preperiodic witnesses")
    measure_tests = {}
    axes = [i for i in range(1, H.n + 1) if dom["axis"][i]]
    for a in range(len(axes)):
        for b in range(a + 1, len(axes)):
            i, j = axes[a], axes[b]
            res = measure_compare(H, maps, i, j, n_samples=config.samples,
                                  depth=config.depth, seed=config.seed)
            measure_tests[(i, j)] = res
            if not res.equal_within_noise:
                failed.append(
                    f"measure comparison ({i},{j}): D = {res.statistic:.4f} "
                    f"exceeds tau = {res.threshold:.4f}")
    pair = ms_form_check(H, maps, exponent_bound=config.exponent_bound,
                         max_iter=config.max_curve_iter,
                         max_bidegree=config.max_bidegree)
    all_non_exceptional = all(c.verdict == "NonExceptional" for c in classifications)
    if pair.certificate is not None and pair.certificate.orbit.preperiodic:
        verdict = ("two-block form certified preperiodic: consistent with the "
                   "pair-curve shape of joint preperiodicity")
    elif failed:
        verdict = ("evidence against dense joint preperiodicity: " + failed[0])
    elif all_non_exceptional and all(dom["axis"].values()) and H.n > 2:
        verdict = ("all necessary conditions passed with non-exceptional maps on a "
                   "dominant hypersurface: dense joint preperiodicity here would "
                   "contradict the classification of such hypersurfaces; expect a "
                   "failed sub-test at higher sample sizes")
    else:
        verdict = "no necessary condition failed at the tested resolution"
    return MMReport(dominance=dom, classifications=classifications,
                    fiber_tests=fiber_tests, measure_tests=measure_tests,
                    pair_form=pair, threshold=clt_threshold(config.samples),
                    failed_conditions=tuple(failed), verdict=verdict,
                    warnings=warnings)
