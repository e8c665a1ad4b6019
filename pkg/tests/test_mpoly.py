"""Exact polynomial toolkit: resultants vs a Sylvester oracle, gcd, squarefree."""

import random

from dynamo.mpoly import MPoly, mp_gcd, resultant_formal, squarefree_part
from dynamo.projective import _bareiss_det


def _sylvester_det(p, q, m, n):
    """Oracle: integer Sylvester determinant for formal degrees (m, n)."""
    p = list(p) + [0] * (m + 1 - len(p))
    q = list(q) + [0] * (n + 1 - len(q))
    size = m + n
    rows = []
    for s in range(n):
        rows.append([0] * s + list(reversed(p)) + [0] * (size - m - 1 - s))
    for s in range(m):
        rows.append([0] * s + list(reversed(q)) + [0] * (size - n - 1 - s))
    if size == 0:
        return 1
    return _bareiss_det(rows)


def _lift_const_list(ints, arity=3):
    return [MPoly.const(arity, c) for c in ints]


def test_resultant_matches_sylvester_exact_degrees():
    rng = random.Random(31)
    for _ in range(60):
        m = rng.randint(1, 5)
        n = rng.randint(1, 5)
        p = [rng.randint(-5, 5) for _ in range(m + 1)]
        q = [rng.randint(-5, 5) for _ in range(n + 1)]
        p[m] = p[m] or 1
        q[n] = q[n] or 1
        got = resultant_formal(_lift_const_list(p), _lift_const_list(q), m, n)
        want = _sylvester_det(p, q, m, n)
        got_int = got.terms.get((0, 0, 0), 0)
        assert got_int == want, (p, q, m, n)


def test_resultant_matches_sylvester_formal_degrees():
    # vanishing top coefficients exercise the formal-degree correction
    rng = random.Random(77)
    for _ in range(60):
        m = rng.randint(1, 5)
        n = rng.randint(1, 5)
        p = [rng.randint(-4, 4) for _ in range(m + 1)]
        q = [rng.randint(-4, 4) for _ in range(n + 1)]
        drop_p = rng.random() < 0.5
        if drop_p:
            p[m] = 0
        else:
            q[n] = 0
        if all(c == 0 for c in p) or all(c == 0 for c in q):
            continue
        got = resultant_formal(_lift_const_list(p), _lift_const_list(q), m, n)
        want = _sylvester_det(p, q, m, n)
        got_int = got.terms.get((0, 0, 0), 0)
        assert got_int == want, (p, q, m, n)


def test_resultant_with_parameter_specializes():
    # Res_x(c(x,y), x^2 - u) as a polynomial identity in (y, u): check by
    # specializing both sides at integer points (oracle: Sylvester on ints)
    rng = random.Random(5)
    arity = 3  # slots: x-coeff placeholder unused, y = 0, u = 1 (arity padding)
    y, u = 0, 1
    for _ in range(20):
        # c(x, y) = sum over i,j <= 2 of random x^i y^j: coefficients in y
        cmat = [[rng.randint(-3, 3) for _ in range(3)] for _ in range(3)]
        if all(c == 0 for c in cmat[2]):
            cmat[2][0] = 1
        P = [MPoly(arity, {(j, 0, 0): cmat[i][j] for j in range(3)}) for i in range(3)]
        Q = [MPoly(arity, {(0, 1, 0): -1}), MPoly.zero(arity), MPoly.const(arity, 1)]
        R = resultant_formal(P, Q, 2, 2)
        for _ in range(6):
            yv = rng.randint(-4, 4)
            uv = rng.randint(-4, 4)
            p_spec = [sum(cmat[i][j] * yv**j for j in range(3)) for i in range(3)]
            q_spec = [-uv, 0, 1]
            want = _sylvester_det(p_spec, q_spec, 2, 2)
            got = R.substitute({y: yv, u: uv}).terms.get((0, 0, 0), 0)
            assert got == want


def test_diagonal_pushforward_core_identity():
    # Res_x(x - y, x^2 - u) = y^2 - u up to sign: the elimination workhorse
    arity = 3
    y_slot, u_slot = 1, 2
    P = [MPoly(arity, {(0, 1, 0): -1}), MPoly.const(arity, 1)]           # x - y
    Q = [MPoly(arity, {(0, 0, 1): -1}), MPoly.zero(arity), MPoly.const(arity, 1)]  # x^2 - u
    R = resultant_formal(P, Q, 1, 2)
    expect = MPoly(arity, {(0, 2, 0): 1, (0, 0, 1): -1})  # y^2 - u
    assert R == expect or R == -1 * expect


def test_gcd_bivariate():
    arity = 2
    x, y = 0, 1
    a = MPoly(arity, {(1, 0): 1, (0, 1): -1})          # x - y
    b = MPoly(arity, {(1, 0): 1, (0, 1): 1})           # x + y
    p = a * a * b
    q = a * b * b
    g = mp_gcd(p, q, [x, y])
    assert g == a * b or g == -1 * (a * b)


def test_gcd_coprime_is_constant():
    arity = 2
    a = MPoly(arity, {(1, 0): 1, (0, 1): -1})
    b = MPoly(arity, {(1, 0): 1, (0, 1): 1})
    g = mp_gcd(a, b, [0, 1])
    assert all(g.degree_in(i) == 0 for i in (0, 1))


def test_squarefree_part_bivariate():
    arity = 2
    a = MPoly(arity, {(1, 0): 1, (0, 1): -1})      # x - y
    b = MPoly(arity, {(1, 0): 2, (0, 1): 3})       # 2x + 3y
    p = a * a * a * b
    sf = squarefree_part(p, [0, 1])
    assert sf == (a * b).primitive() or sf == (-1 * (a * b)).primitive()


def test_exact_div_round_trip():
    rng = random.Random(13)
    arity = 2
    for _ in range(30):
        a = MPoly(arity, {(rng.randint(0, 2), rng.randint(0, 2)): rng.randint(-4, 4)
                          for _ in range(3)})
        b = MPoly(arity, {(rng.randint(0, 2), rng.randint(0, 2)): rng.randint(-4, 4)
                          for _ in range(3)})
        if a.is_zero or b.is_zero:
            continue
        assert (a * b).exact_div(b) == a
