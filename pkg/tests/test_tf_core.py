"""传递函数核心运算测试"""
import math

import numpy as np
import pytest

from app.exceptions import CancellationRequired, DegreeUnsupported, EvalAtPole, InvalidParameter
from app.utils.search import golden_section_search
from app.utils.tf_core import (
    Polynomial,
    RationalTF,
    poly_add,
    poly_backward_error,
    poly_eval,
    poly_mul,
    poly_roots,
    tf_cancel,
    tf_eval,
    tf_eval_many,
    tf_series,
    tf_unity_feedback,
)


def _sorted(roots):
    return sorted(roots, key=lambda z: (z.real, z.imag))


class TestPolynomial:
    """多项式构造与运算"""

    def test_trailing_zeros_trimmed(self):
        """高次零系数被去掉"""
        p = Polynomial((1.0, 2.0, 0.0, 0.0))
        assert p.degree == 1
        assert p.coeffs == (1.0, 2.0)

    def test_zero_polynomial(self):
        assert Polynomial((0.0, 0.0)).is_zero
        assert Polynomial(()).is_zero

    def test_non_finite_rejected(self):
        with pytest.raises(InvalidParameter):
            Polynomial((1.0, float('nan')))

    def test_mul_and_add(self):
        """(1+s)^2 = 1 + 2s + s^2"""
        a = Polynomial((1.0, 1.0))
        assert poly_mul(a, a).coeffs == (1.0, 2.0, 1.0)
        assert poly_add(a, Polynomial((0.0, -1.0))).coeffs == (1.0,)

    def test_eval_complex(self):
        """s^2 + 1 在 s = j 处为零"""
        assert poly_eval(Polynomial((1.0, 0.0, 1.0)), 1j) == 0

    def test_backward_error_of_exact_root(self):
        assert poly_backward_error(Polynomial((2.0, 3.0, 1.0)), -1.0) == 0.0
        assert poly_backward_error(Polynomial((2.0, 3.0, 1.0)), 0.0) > 0.1


class TestPolyRoots:
    """1~3 阶多项式求根"""

    @pytest.mark.parametrize('coeffs', [(5.0,), (1.0, 1.0, 1.0, 1.0, 1.0)])
    def test_unsupported_degree(self, coeffs):
        with pytest.raises(DegreeUnsupported):
            poly_roots(Polynomial(coeffs))

    def test_linear(self):
        assert poly_roots(Polynomial((3.0, 2.0))) == [complex(-1.5)]

    def test_complex_pair(self):
        """s^2 + 2s + 5 的根为 -1 ± 2j"""
        roots = _sorted(poly_roots(Polynomial((5.0, 2.0, 1.0))))
        assert roots[0] == pytest.approx(-1 - 2j, abs=1e-14)
        assert roots[1] == pytest.approx(-1 + 2j, abs=1e-14)

    def test_double_root_exact(self):
        """(s+2)^2 给出两个完全相等的实根"""
        roots = poly_roots(Polynomial((4.0, 4.0, 1.0)))
        assert roots == [complex(-2.0), complex(-2.0)]

    def test_widely_separated_quadratic(self):
        """根相差很大时小根不受相消误差影响"""
        roots = _sorted(poly_roots(Polynomial((1.0, 1e8 + 1e-8, 1.0))))
        assert roots[1].real == pytest.approx(-1e-8, rel=1e-12)

    def test_triple_root(self):
        """(s+1)^3"""
        roots = poly_roots(Polynomial((1.0, 3.0, 3.0, 1.0)))
        assert roots == [complex(-1.0)] * 3

    def test_distinct_cubic(self):
        """(s+1)(s+2)(s+3)"""
        roots = _sorted(poly_roots(Polynomial((6.0, 11.0, 6.0, 1.0))))
        for root, expected in zip(roots, (-3.0, -2.0, -1.0)):
            assert root == pytest.approx(expected, abs=1e-12)

    def test_cubic_against_numpy(self):
        """随机三次式的根与 numpy 结果一致"""
        rng = np.random.default_rng(20240611)
        for _ in range(50):
            coeffs = rng.uniform(-5.0, 5.0, size=4)
            coeffs[-1] = rng.uniform(0.5, 2.0)
            ours = np.sort_complex(np.array(poly_roots(Polynomial(tuple(coeffs)))))
            ref = np.sort_complex(np.polynomial.polynomial.polyroots(coeffs))
            np.testing.assert_allclose(ours, ref, rtol=1e-6, atol=1e-8)

    def test_random_real_cubics_residual_and_vieta(self):
        """根在 [-10, -0.01] 的首一三次式：残差有界且能重建系数"""
        rng = np.random.default_rng(31)
        for _ in range(2000):
            expected = -10.0 ** rng.uniform(-2.0, 1.0, size=3)
            coeffs = np.polynomial.polynomial.polyfromroots(expected)
            p = Polynomial(tuple(coeffs))
            scale = max(abs(c) for c in coeffs)
            roots = poly_roots(p)
            assert len(roots) == 3
            for r in roots:
                assert abs(poly_eval(p, r)) <= 1e-9 * scale * max(1.0, abs(r)) ** 3
            rebuilt = np.polynomial.polynomial.polyfromroots(roots)
            assert np.max(np.abs(rebuilt - coeffs)) <= 1e-8 * scale

    def test_tuned_loop_double_pole(self):
        """(s + 1)(s + 1/3)^2 的二重根"""
        coeffs = np.polynomial.polynomial.polyfromroots([-1.0, -1.0 / 3.0, -1.0 / 3.0])
        roots = _sorted(poly_roots(Polynomial(tuple(coeffs))))
        assert roots[0] == pytest.approx(-1.0, rel=1e-12)
        for r in roots[1:]:
            assert abs(r + 1.0 / 3.0) <= 1e-8 / 3.0


class TestRationalTF:
    """传递函数求值与组合"""

    def test_zero_denominator_rejected(self):
        with pytest.raises(InvalidParameter):
            RationalTF.from_coeffs((1.0,), (0.0,))

    def test_strictly_proper(self):
        assert RationalTF.from_coeffs((1.0,), (1.0, 1.0)).is_strictly_proper
        assert not RationalTF.from_coeffs((1.0, 1.0), (1.0, 1.0)).is_strictly_proper

    def test_eval_first_order(self):
        """1/(1+s) 在 omega = 1 处为 (1 - j)/2"""
        g = RationalTF.from_coeffs((1.0,), (1.0, 1.0))
        assert tf_eval(g, 1.0) == pytest.approx(0.5 - 0.5j)

    def test_eval_at_integrator_pole(self):
        g = RationalTF.from_coeffs((1.0,), (0.0, 1.0))
        with pytest.raises(EvalAtPole):
            tf_eval(g, 0.0)
        with pytest.raises(EvalAtPole):
            tf_eval_many(g, [0.0, 1.0])

    def test_eval_many_matches_scalar(self):
        g = RationalTF.from_coeffs((2.0, 1.0), (1.0, 3.0, 2.0))
        omegas = np.geomspace(0.01, 100.0, 7)
        values = tf_eval_many(g, omegas)
        for w, v in zip(omegas, values):
            assert v == pytest.approx(tf_eval(g, w))

    def test_series_keeps_common_factor(self):
        """串联不做约分"""
        a = RationalTF.from_coeffs((1.0, 1.0), (0.0, 1.0))
        b = RationalTF.from_coeffs((1.0,), (1.0, 1.0))
        g = tf_series(a, b)
        assert g.num.coeffs == (1.0, 1.0)
        assert g.den.coeffs == (0.0, 1.0, 1.0)

    def test_series_eval_is_product(self):
        """串联在任意频率上的值等于两者之积"""
        rng = np.random.default_rng(5)
        for _ in range(200):
            a = RationalTF.from_coeffs(rng.uniform(0.5, 2.0, size=2), rng.uniform(0.5, 2.0, size=3))
            b = RationalTF.from_coeffs(rng.uniform(0.5, 2.0, size=1), rng.uniform(0.5, 2.0, size=2))
            g = tf_series(a, b)
            for w in np.geomspace(1e-2, 1e2, 9):
                expected = tf_eval(a, w) * tf_eval(b, w)
                assert abs(tf_eval(g, w) - expected) <= 1e-12 * abs(expected)

    def test_unity_feedback(self):
        """1/s 闭环为 1/(s+1)"""
        g = tf_unity_feedback(RationalTF.from_coeffs((1.0,), (0.0, 1.0)))
        assert g.num.coeffs == (1.0,)
        assert g.den.coeffs == (1.0, 1.0)

    def test_cancel_common_root(self):
        """(s+1)/((s+1)(s+2)) 约化为 1/(s+2)"""
        g = RationalTF.from_coeffs((1.0, 1.0), (2.0, 3.0, 1.0))
        reduced = tf_cancel(g, -1.0)
        assert reduced.num.coeffs == pytest.approx((1.0,))
        assert reduced.den.coeffs == pytest.approx((2.0, 1.0))

    def test_cancel_requires_common_root(self):
        g = RationalTF.from_coeffs((1.0, 1.0), (6.0, 5.0, 1.0))
        with pytest.raises(CancellationRequired):
            tf_cancel(g, -1.0)


class TestGoldenSection:
    """黄金分割搜索"""

    def test_finds_minimum(self):
        lo, hi = golden_section_search(lambda x: (x - 2.0) ** 2, 0.0, 5.0, tol=1e-9)
        assert hi - lo <= 1e-9
        assert 0.5 * (lo + hi) == pytest.approx(2.0, abs=1e-8)

    def test_maximum_via_negation(self):
        lo, hi = golden_section_search(lambda x: -math.sin(x), 0.0, math.pi, tol=1e-10)
        assert 0.5 * (lo + hi) == pytest.approx(math.pi / 2, abs=1e-8)

    def test_interval_already_small(self):
        assert golden_section_search(lambda x: x, 1.0, 1.0 + 1e-12, tol=1e-10) == (1.0, 1.0 + 1e-12)
