import itertools
import random
from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from distrecon import (
    PointConfig,
    RigidMotion,
    apply_rigid_motion,
    eval_g,
    eval_g_det,
    eval_gm,
    eval_I,
    is_symmetric_distribution,
    orientation_distribution,
    signed_area,
)
from distrecon.geometry import pair_distances
from distrecon.invariants import OrientationDistribution, relation_layout

G_TEXT = ("2*U**2*Z + 2*U*V*X - 2*U*V*Y - 2*U*V*Z - 2*U*X*W - 2*U*X*Z + 2*U*Y*W "
          "- 2*U*Y*Z - 2*U*W*Z + 2*U*Z**2 + 2*V**2*Y - 2*V*X*Y - 2*V*X*W + 2*V*Y**2 "
          "- 2*V*Y*W - 2*V*Y*Z + 2*V*W*Z + 2*X**2*W - 2*X*Y*W + 2*X*Y*Z + 2*X*W**2 - 2*X*W*Z")
SYMS = sympy.symbols("U V W X Y Z")
G_SYMPY = sympy.sympify(G_TEXT, locals=dict(zip("UVWXYZ", SYMS)))


def sympy_g(args):
    return G_SYMPY.subs(dict(zip(SYMS, [sympy.Rational(a) for a in args])))


def random_tuple(rng, lo=-40, hi=40):
    return [rng.randint(lo, hi) for _ in range(6)]


def calibrate(f, g, rng, trials=3):
    """Constant c with f = c * g, from a few random integer arguments."""
    ratios = set()
    while len(ratios) < 1 or trials > 0:
        args = random_tuple(rng)
        gv = g(args)
        if gv == 0:
            continue
        ratios.add(Fraction(f(args), gv))
        trials -= 1
    assert len(ratios) == 1, ratios
    return ratios.pop()


def test_g_polynomial_matches_printed_text():
    assert len(G_SYMPY.as_ordered_terms()) == 22
    assert sympy.Poly(G_SYMPY, *SYMS).is_homogeneous
    rng = random.Random(1)
    for _ in range(200):
        args = random_tuple(rng)
        assert eval_g(args) == sympy_g(args)


def test_g_examples():
    assert eval_g((1, 2, 1, 1, 2, 1)) == 0
    # oracle: sum of coefficients of the printed polynomial
    coeff_sum = sum(sympy.Poly(G_SYMPY, *SYMS).coeffs())
    assert coeff_sum == -4
    assert eval_g((1,) * 6) == coeff_sum
    assert eval_g((0,) * 6) == 0


def test_det_constant_and_proportionality():
    rng = random.Random(7)
    c = calibrate(eval_g_det, eval_g, rng)
    assert c == 1
    for _ in range(1000):
        args = [Fraction(rng.randint(-99, 99), rng.randint(1, 9)) for _ in range(6)]
        assert eval_g_det(args) == c * eval_g(args)
    assert eval_g_det((1,) * 6) == c * -4
    assert eval_g_det((0,) * 6) == 0


def test_det_vanishes_on_planar_four_points():
    rng = random.Random(3)
    for _ in range(200):
        P = PointConfig.from_points([(rng.randint(-50, 50), rng.randint(-50, 50)) for _ in range(4)])
        assert eval_g_det(pair_distances(P).tolist()) == 0


def test_g2_proportional_with_constant():
    rng = random.Random(8)
    c2 = calibrate(lambda a: eval_gm(2, a), eval_g, rng)
    assert c2 != 0
    for _ in range(300):
        args = random_tuple(rng)
        assert eval_gm(2, args) == c2 * eval_g(args)


def test_g3_simplex_nonzero():
    # restricted matrix is -(I + J) for unit distances; eigenvalues of I + J are 1,1,1,5
    assert eval_gm(3, [1] * 10) == 5


def test_gm_zero_on_points_in_r3():
    rng = random.Random(4)
    for _ in range(100):
        P = PointConfig.from_points([[rng.randint(-30, 30) for _ in range(3)] for _ in range(5)])
        assert eval_gm(3, pair_distances(P).tolist()) == 0


def test_gm_gram_oracle_float():
    # det equals (-2)^(m+1) times the Gram determinant of p_v - p_0
    rng = np.random.default_rng(0)
    for m in (2, 3, 4):
        pts = rng.random((m + 2, m + 1))
        P = PointConfig.from_points(pts.tolist())
        V = pts[1:] - pts[0]
        expected = (-2.0) ** (m + 1) * np.linalg.det(V @ V.T)
        assert eval_gm(m, pair_distances(P).tolist()) == pytest.approx(expected, rel=1e-9, abs=1e-12)


def test_gm_wrong_length():
    with pytest.raises(ValueError):
        eval_gm(3, [1] * 9)


def test_relation_layout_shapes():
    eidx, perms, signs = relation_layout(3)
    assert eidx.shape == (4, 4, 3) and perms.shape == (24, 4)
    assert sorted(signs.tolist()).count(1) == 12


def test_signed_area():
    assert signed_area((1, 0), (0, 1), (0, 0)) == 1
    assert signed_area((0, 0), (1, 1), (2, 2)) == 0
    assert signed_area((0, 1), (1, 0), (0, 0)) == -1
    with pytest.raises(ValueError):
        signed_area((0, 0, 0), (1, 0, 0), (0, 1, 0))


def test_I_vanishes_on_repeated_point():
    assert eval_I((0, 0), (3, 1), (2, 5), (2, 5)) == 0


def test_I_invariance_and_reflection():
    rng = random.Random(9)
    for _ in range(100):
        q = [(rng.randint(-20, 20), rng.randint(-20, 20)) for _ in range(4)]
        v = eval_I(*q)
        assert all(eval_I(*(q[i] for i in p)) == v for p in itertools.permutations(range(4)))
        assert eval_I(*((x, -y) for x, y in q)) == -v
        assert eval_I(*((x + 7, y - 3) for x, y in q)) == v


@settings(max_examples=60, deadline=None)
@given(st.lists(st.tuples(st.integers(-100, 100), st.integers(-100, 100)), min_size=4, max_size=4))
def test_g_identity_property(points):
    P = PointConfig.from_points(points)
    assert eval_g(pair_distances(P).tolist()) == 0


@settings(max_examples=100, deadline=None)
@given(st.lists(st.fractions(-50, 50, max_denominator=20), min_size=6, max_size=6),
       st.fractions(-10, 10, max_denominator=20))
def test_g_homogeneity(args, lam):
    assert eval_g([lam * a for a in args]) == lam ** 3 * eval_g(args)


def test_orientation_distribution_basic():
    P = PointConfig.from_points([(0, 0), (4, 1), (1, 3), (5, 7)])
    D = orientation_distribution(P)
    assert D.total == 1 and D.values[0] == eval_I(*P.coords.tolist())
    Q = PointConfig.from_points([(0, 0), (4, 1), (1, 3), (5, 7), (-2, 6), (3, -4)])
    DQ = orientation_distribution(Q)
    assert DQ.total == 15
    rot = apply_rigid_motion(Q, RigidMotion.exact2d(5, 12, shift=(3, 1)))
    assert orientation_distribution(rot) == DQ
    refl = apply_rigid_motion(Q, RigidMotion.exact2d(5, 12, reflect=True))
    assert orientation_distribution(refl) == DQ.negated()
    with pytest.raises(ValueError):
        orientation_distribution(PointConfig.from_points([(0, 0), (1, 0), (0, 1)]))
    with pytest.raises(ValueError):
        orientation_distribution(PointConfig.from_points([[0, 0, 0]] * 4))


def test_symmetric_distribution():
    assert is_symmetric_distribution(OrientationDistribution((0, 0, 0), True))
    assert is_symmetric_distribution(OrientationDistribution((-5, 5), True))
    assert not is_symmetric_distribution(OrientationDistribution((-5, 4), True))
    rng = random.Random(12)
    while True:
        P = PointConfig.from_points([(rng.randint(-9, 9), rng.randint(-9, 9)) for _ in range(5)])
        D = orientation_distribution(P)
        if any(v != 0 for v in D.values):
            break
    assert not is_symmetric_distribution(D)


def test_I_float_rotation_relative():
    rng = np.random.default_rng(1)
    q = rng.random((4, 2))
    v = eval_I(*q.tolist())
    P = PointConfig.from_points(q.tolist())
    for _ in range(20):
        Q = apply_rigid_motion(P, RigidMotion.rotation2d(rng.uniform(0, 6.3), rng.random(2)))
        assert eval_I(*Q.coords.tolist()) == pytest.approx(v, rel=1e-9, abs=1e-9 * abs(v))
