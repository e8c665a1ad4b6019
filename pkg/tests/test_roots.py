"""Root finding: squarefree structure, rational extraction, Aberth iteration."""

import random
from fractions import Fraction

import numpy as np

from dynamo.roots import (
    aberth,
    binary_form_roots,
    poly_roots_exact,
    roots_batch,
    yun_squarefree,
)


def _expand(root_list):
    """Oracle: expand prod (x - r)^m from (root, mult) pairs over Q."""
    coeffs = [Fraction(1)]
    for r, m in root_list:
        for _ in range(m):
            nxt = [Fraction(0)] * (len(coeffs) + 1)
            for i, c in enumerate(coeffs):
                nxt[i + 1] += c
                nxt[i] -= c * r
            coeffs = nxt
    return coeffs


def test_yun_squarefree_structure():
    # (x-1)^2 (x+2)^3, expanded by the oracle
    coeffs = _expand([(Fraction(1), 2), (Fraction(-2), 3)])
    parts = dict()
    for fac, mult in yun_squarefree(coeffs):
        parts[mult] = fac
    assert set(parts) == {2, 3}
    assert parts[2] in ([-1, 1], [1, -1]) or parts[2] == [-1, 1]
    assert parts[3] in ([2, 1],)


def test_poly_roots_exact_rational_and_multiplicity():
    # (2x - 3)^2 (x + 1) = expand
    coeffs = _expand([(Fraction(3, 2), 2), (Fraction(-1), 1)])
    found = poly_roots_exact([int(c * 4) for c in coeffs])
    as_set = {(str(ex), m) for _, m, ex in found if ex is not None}
    assert as_set == {("3/2", 2), ("-1", 1)}


def test_aberth_agrees_with_numpy():
    rng = random.Random(9)
    for _ in range(10):
        coeffs = [rng.randint(-9, 9) for _ in range(6)]
        if coeffs[-1] == 0:
            coeffs[-1] = 1
        mine = sorted(aberth(coeffs), key=lambda z: (round(z.real, 6), round(z.imag, 6)))
        ref = sorted(np.roots(list(reversed(coeffs))),
                     key=lambda z: (round(z.real, 6), round(z.imag, 6)))
        for a, b in zip(mine, ref):
            assert abs(a - b) < 1e-7


def test_aberth_high_degree_cyclotomic_like():
    # x^32 - 1: all roots on the unit circle
    coeffs = [-1] + [0] * 31 + [1]
    roots = aberth(coeffs)
    assert len(roots) == 32
    for z in roots:
        assert abs(abs(z) - 1.0) < 1e-9
        assert abs(z**32 - 1.0) < 1e-7


def test_binary_form_roots_counts_infinity():
    # X Y (X - Y)^2: formal degree 4, roots 0, inf, and 1 (double)
    # expand (x)(x-1)^2 -> affine part; coefficient of X^4 is 0 so inf once
    affine = _expand([(Fraction(0), 1), (Fraction(1), 2)])
    coeffs = [int(c) for c in affine] + [0]
    out = binary_form_roots(coeffs)
    assert sum(m for _, m, _ in out) == 4
    eqs = {(str(ex), m) for _, m, ex in out if ex is not None}
    assert eqs == {("0", 1), ("inf", 1), ("1", 2)}


def test_binary_form_roots_huge_coefficients():
    # rational extraction must not attempt to factor huge coefficients; small
    # rational roots are still recovered exactly next to enormous ones
    big = 10**40 + 7
    # (2x - 3)(x + big) = 2x^2 + (2 big - 3)x - 3 big
    coeffs = [-3 * big, 2 * big - 3, 2]
    out = binary_form_roots(coeffs)
    exacts = {str(ex) for _, _, ex in out if ex is not None}
    assert "3/2" in exacts


def test_binary_form_roots_large_integer_root_within_float_precision():
    big = 2**40 + 5
    coeffs = [-big, big - 1, 1]  # (x + big)(x - 1) has roots 1 and -big
    out = binary_form_roots(coeffs)
    exacts = {str(ex) for _, _, ex in out if ex is not None}
    assert exacts == {"1", str(-big)}


def test_roots_batch_quadratics():
    rng = np.random.default_rng(4)
    rows = rng.normal(size=(50, 3)) + 1j * rng.normal(size=(50, 3))
    roots = roots_batch(rows)
    vals = rows[:, 0, None] + rows[:, 1, None] * roots + rows[:, 2, None] * roots**2
    assert np.all(np.abs(vals) < 1e-8)


def test_roots_batch_quartics():
    rng = np.random.default_rng(12)
    rows = rng.normal(size=(20, 5)) + 1j * rng.normal(size=(20, 5))
    roots = roots_batch(rows)
    horner = np.zeros_like(roots)
    for k in range(4, -1, -1):
        horner = horner * roots + rows[:, k][:, None]
    assert np.all(np.abs(horner) < 1e-6)


def test_roots_batch_linear_degenerate_quadratic():
    rows = np.array([[2.0, 1.0, 0.0], [1.0, 0.0, 1.0]], dtype=complex)
    roots = roots_batch(rows)
    assert np.isinf(np.abs(roots[0])).any()
    finite0 = roots[0][np.isfinite(roots[0])]
    assert np.allclose(finite0, [-2.0])
    assert np.allclose(np.sort_complex(roots[1]), [-1j, 1j])
