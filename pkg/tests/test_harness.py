"""Verifier pipeline: fiber tests, measure comparison, pair-form certificates."""

import pytest

from dynamo.harness import (
    MMConfig,
    fiber_preperiodicity_test,
    measure_compare,
    mm_verify,
    ms_form_check,
)
from dynamo.hypersurface import Hypersurface, diagonal_surface, graph_surface


def linear_sum_surface():
    return Hypersurface.make(3, (1, 1, 1),
                             [((1, 0, 0), 1), ((0, 1, 0), 1), ((0, 0, 1), 1)])


def pulled_back_diagonal():
    """pi_12^{-1}(diagonal) in (P^1)^3."""
    return Hypersurface.make(3, (1, 1, 0), [((1, 0, 0), 1), ((0, 1, 0), -1)])


# -- fiber tests ----------------------------------------------------------------

def test_fiber_diagonal_passes(basilica):
    res = fiber_preperiodicity_test(diagonal_surface(), [basilica, basilica], 2,
                                    trials=50, seed=1)
    assert res.fails == 0
    assert res.passes == 50


def test_fiber_square_graph_passes(sq):
    H = graph_surface([0, 0, 1])
    res = fiber_preperiodicity_test(H, [sq, sq], 2, trials=100, seed=2)
    assert res.fails == 0 and res.passes == 100


def test_fiber_shift_graph_fails(sq):
    H = graph_surface([1, 1])
    res = fiber_preperiodicity_test(H, [sq, sq], 2, trials=100, seed=3)
    assert res.fails > 0
    w = next(w for w in res.witnesses if w.preperiodic is False)
    assert "canonical height" in w.detail


def test_fiber_invariant_graph_never_fails(basilica):
    # the graph {x2 = f(x1)} with both maps equal: preperiodic inputs map to
    # preperiodic outputs, so every certified trial passes
    H = graph_surface([-1, 0, 1])
    res = fiber_preperiodicity_test(H, [basilica, basilica], 2, trials=100, seed=4)
    assert res.fails == 0


# -- measure comparison ----------------------------------------------------------

def test_measure_compare_diagonal_same_maps(sq):
    res = measure_compare(diagonal_surface(), [sq, sq], 1, 2,
                          n_samples=4000, depth=25, seed=5)
    assert res.equal_within_noise, (res.statistic, res.threshold)


def test_measure_compare_diagonal_different_maps(sq, basilica):
    res = measure_compare(diagonal_surface(), [sq, basilica], 1, 2,
                          n_samples=10_000, depth=30, seed=5)
    assert not res.equal_within_noise
    assert res.statistic > 2 * res.threshold  # macroscopic, not borderline


def test_measure_compare_symmetric(sq, basilica):
    a = measure_compare(diagonal_surface(), [sq, basilica], 1, 2,
                        n_samples=2000, depth=20, seed=9)
    b = measure_compare(diagonal_surface(), [sq, basilica], 2, 1,
                        n_samples=2000, depth=20, seed=9)
    assert a.statistic == b.statistic


def test_measure_compare_invariant_graph(sq):
    # {x2 = x1^2} is invariant under (z^2, z^2): both pullbacks agree
    res = measure_compare(graph_surface([0, 0, 1]), [sq, sq], 1, 2,
                          n_samples=6000, depth=25, seed=11)
    assert res.equal_within_noise, (res.statistic, res.threshold)


def test_measure_compare_slice_mode(sq):
    res = measure_compare(diagonal_surface(), [sq, sq], 1, 2,
                          n_samples=4000, depth=25, seed=13,
                          slice_axis=1, slice_center=1.0, slice_width=0.7)
    assert res.slice_statistic is not None


# -- pair-form check --------------------------------------------------------------

def test_ms_form_pulled_back_diagonal(sq, basilica):
    rep = ms_form_check(pulled_back_diagonal(), [sq, sq, basilica])
    assert rep.certificate is not None
    cert = rep.certificate
    assert cert.pair == (1, 2)
    assert cert.exponents == (1, 1)
    assert cert.orbit.preperiodic and (cert.orbit.tail, cert.orbit.period) == (0, 1)


def test_ms_form_three_blocks_none(sq):
    rep = ms_form_check(linear_sum_surface(), [sq, sq, sq])
    assert rep.certificate is None
    assert rep.reason == "depends on 3 blocks"


def test_ms_form_exponent_search():
    from dynamo.exceptional import power_map

    # d1 = 2, d2 = 4: minimal exponents (2, 1)
    H = diagonal_surface()
    rep = ms_form_check(H, [power_map(2), power_map(4)])
    assert rep.certificate is not None
    assert rep.certificate.exponents == (2, 1)


def test_ms_form_no_matching_degrees(sq):
    from dynamo.exceptional import power_map

    rep = ms_form_check(diagonal_surface(), [power_map(2), power_map(3)], exponent_bound=4)
    assert rep.certificate is None
    assert "no iterate degrees match" in rep.reason


# -- the full pipeline -------------------------------------------------------------

def test_mm_verify_diagonal_same_maps(sq):
    cfg = MMConfig(samples=4000, depth=25, trials=40, seed=7)
    rep = mm_verify(diagonal_surface(), [sq, sq], cfg)
    assert rep.failed_conditions == ()
    assert rep.pair_form.certificate is not None
    assert rep.pair_form.certificate.orbit.preperiodic
    assert "certified preperiodic" in rep.verdict


def test_mm_verify_diagonal_different_maps(sq, basilica):
    cfg = MMConfig(samples=10_000, depth=30, trials=30, seed=7)
    rep = mm_verify(diagonal_surface(), [sq, basilica], cfg)
    assert any("measure comparison" in f for f in rep.failed_conditions)


def test_mm_verify_shift_graph(sq):
    cfg = MMConfig(samples=3000, depth=20, trials=60, seed=7)
    rep = mm_verify(graph_surface([1, 1]), [sq, sq], cfg)
    assert any("fiber test" in f for f in rep.failed_conditions)


def test_mm_verify_linear_sum_nonexceptional(basilica):
    cfg = MMConfig(samples=3000, depth=20, trials=60, seed=7)
    rep = mm_verify(linear_sum_surface(), [basilica, basilica, basilica], cfg)
    assert rep.pair_form.certificate is None
    assert rep.pair_form.reason == "depends on 3 blocks"
    assert rep.failed_conditions  # fiber witnesses force at least one failure


def test_mm_verify_requires_matching_maps(sq):
    with pytest.raises(ValueError):
        mm_verify(diagonal_surface(), [sq], MMConfig())


def test_insufficient_preperiodic_supply():
    from dynamo.errors import InsufficientPreperiodicSupply
    from dynamo.projective import RationalMapLift

    # (z^2+2)/(z^2-2) has no rational preperiodic points at all (even the
    # orbit of infinity diverges), so fiber trials cannot be seeded
    F = RationalMapLift.make([2, 0, 1], [-2, 0, 1])
    with pytest.raises(InsufficientPreperiodicSupply):
        fiber_preperiodicity_test(diagonal_surface(), [F, F], 2, trials=5, seed=1)
