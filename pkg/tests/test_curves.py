"""Curve pushforward by resultant elimination, and curve orbits."""

from dynamo.curves import curve_orbit, curve_pushforward, make_curve
from dynamo.hypersurface import diagonal_surface, graph_surface

def test_diagonal_invariant_under_square(sq):
    D = diagonal_surface()
    image = curve_pushforward(D, sq, sq)
    assert image == D


def test_square_graph_invariant(sq):
    C = graph_surface([0, 0, 1])  # x2 = x1^2
    image = curve_pushforward(C, sq, sq)
    assert image == C


def test_shift_graph_image_oracle(sq):
    # {x2 = x1 + 1} maps to (v - u - 1)^2 = 4u: eliminating x from u = x^2,
    # v = (x + 1)^2 by hand gives
    #   u^2 - 2uv + v^2 - 2u - 2v + 1
    C = graph_surface([1, 1])
    image = curve_pushforward(C, sq, sq)
    expect = make_curve({(2, 0): 1, (1, 1): -2, (0, 2): 1,
                         (1, 0): -2, (0, 1): -2, (0, 0): 1}, (2, 2))
    assert image == expect


def test_diagonal_under_mixed_maps(sq, basilica):
    # (z^2, z^2-1)(diagonal) = {(x^2, x^2 - 1)} = the line v = u - 1
    img = curve_pushforward(diagonal_surface(), sq, basilica)
    expect = make_curve({(0, 1): 1, (1, 0): -1, (0, 0): 1}, (1, 1))
    assert img == expect


def test_pushforward_squarefree_collapse(sq):
    # the diagonal image under (z^2, z^2) arrives as (u - v)^2 before
    # reduction; the result must be the reduced diagonal, not its square
    D = diagonal_surface()
    image = curve_pushforward(D, sq, sq)
    assert image.multidegree == (1, 1)


def test_curve_orbit_diagonal_fixed(sq):
    out = curve_orbit(diagonal_surface(), sq, sq, max_iter=2)
    assert out.preperiodic and (out.tail, out.period) == (0, 1)


def test_curve_orbit_square_graph_fixed(sq):
    out = curve_orbit(graph_surface([0, 0, 1]), sq, sq, max_iter=2)
    assert out.preperiodic and (out.tail, out.period) == (0, 1)


def test_curve_orbit_diagonal_fixed_all_powers():
    from dynamo.exceptional import power_map

    for d in range(2, 6):
        F = power_map(d)
        out = curve_orbit(diagonal_surface(), F, F, max_iter=1)
        assert out.preperiodic and (out.tail, out.period) == (0, 1)


def test_curve_orbit_shift_graph_grows(sq):
    out = curve_orbit(graph_surface([1, 1]), sq, sq, max_iter=5)
    assert not out.preperiodic
    degs = out.bidegrees
    assert len(degs) == 6  # the start curve plus five images
    for a, b in zip(degs, degs[1:]):
        assert b[0] > a[0] and b[1] > a[1]


def test_vertical_line_pushforward(sq):
    # {x1 = 2} maps to {x1 = 4}
    line = make_curve({(1, 0): 1, (0, 0): -2}, (1, 0))
    image = curve_pushforward(line, sq, sq)
    assert image == make_curve({(1, 0): 1, (0, 0): -4}, (1, 0))


def test_basilica_pair_graph(basilica):
    # the graph {x2 = f(x1)} maps onto {x2 = f(x1)} under (f, f): invariance
    C = graph_surface([-1, 0, 1])
    out = curve_orbit(C, basilica, basilica, max_iter=2)
    assert out.preperiodic and (out.tail, out.period) == (0, 1)
