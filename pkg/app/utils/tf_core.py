"""传递函数核心运算模块

实系数多项式与有理传递函数的运算、复数求值以及 1~3 阶多项式求根。
系数一律按幂次升序存放（coeffs[k] 对应 s^k），常数项固定在下标 0。
任何零极点对消都不会被隐式执行，只能通过 tf_cancel 显式完成。
"""
import cmath
import logging
import math
from dataclasses import dataclass
from typing import Callable, List, Sequence, Tuple

import numpy as np
from numpy.polynomial import polynomial as P

from app.exceptions import (
    CancellationRequired,
    DegreeUnsupported,
    EvalAtPole,
    InvalidParameter,
)

logger = logging.getLogger(__name__)

# 分母模值下限，低于该值视为在极点处求值
EVAL_FLOOR = 1e-300

# 判别式相对该阈值可忽略时按重根处理
DOUBLE_ROOT_RTOL = 1e-14

# 平移后的 p、q 相对该阈值可忽略时按三重根处理
TRIPLE_ROOT_RTOL = 1e-12

# 降阶后二次因子的判别式相对该阈值以内时，检查两根中点是否为原三次式的数值重根
NEAR_DOUBLE_RTOL = 1e-6

_EPS = np.finfo(float).eps
_TINY = np.finfo(float).tiny

# 数值重根的后向误差上限
MULTIPLICITY_BACKWARD_TOL = 16.0 * _EPS


@dataclass(frozen=True)
class Polynomial:
    """实系数多项式（升幂存放，构造时去掉高次零系数）"""
    coeffs: Tuple[float, ...] = (0.0,)

    def __post_init__(self):
        raw = np.asarray(self.coeffs, dtype=float).ravel()
        if raw.size == 0:
            raw = np.zeros(1)
        if not np.all(np.isfinite(raw)):
            raise InvalidParameter(f"多项式系数必须为有限值: {self.coeffs}")
        trimmed = P.polytrim(raw, tol=0)
        object.__setattr__(self, 'coeffs', tuple(float(c) for c in trimmed))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return self.degree == 0 and self.coeffs[0] == 0.0

    @property
    def leading(self) -> float:
        return self.coeffs[-1]

    def as_array(self) -> np.ndarray:
        return np.asarray(self.coeffs, dtype=float)

    def __str__(self):
        terms = []
        for power, c in reversed(list(enumerate(self.coeffs))):
            if c == 0.0 and not self.is_zero:
                continue
            if power == 0:
                terms.append(f"{c:g}")
            elif power == 1:
                terms.append(f"{c:g}*s")
            else:
                terms.append(f"{c:g}*s^{power}")
        return " + ".join(terms)


@dataclass(frozen=True)
class RationalTF:
    """有理传递函数 num(s)/den(s)，分子分母保持原样不做约分"""
    num: Polynomial
    den: Polynomial

    def __post_init__(self):
        if self.den.is_zero:
            raise InvalidParameter("传递函数分母不能为零多项式")

    @classmethod
    def from_coeffs(cls, num: Sequence[float], den: Sequence[float]) -> "RationalTF":
        """由升幂系数序列构造"""
        return cls(Polynomial(tuple(num)), Polynomial(tuple(den)))

    @property
    def is_strictly_proper(self) -> bool:
        return self.num.is_zero or self.num.degree < self.den.degree

    def __str__(self):
        return f"({self.num}) / ({self.den})"


def poly_mul(a: Polynomial, b: Polynomial) -> Polynomial:
    """多项式乘法"""
    return Polynomial(tuple(P.polymul(a.coeffs, b.coeffs)))


def poly_add(a: Polynomial, b: Polynomial) -> Polynomial:
    """多项式加法"""
    return Polynomial(tuple(P.polyadd(a.coeffs, b.coeffs)))


def poly_eval(p: Polynomial, s: complex) -> complex:
    """Horner 法求多项式在 s 处的值"""
    return complex(P.polyval(s, p.coeffs))


def poly_backward_error(p: Polynomial, z: complex) -> float:
    """z 作为 p 的根的相对后向误差 |p(z)| / sum(|a_k| |z|^k)

    值越小说明 z 越接近 p 的精确根，不受重根病态的影响。
    """
    magnitude = float(P.polyval(abs(z), np.abs(p.as_array())))
    residual = abs(poly_eval(p, z))
    if magnitude == 0.0:
        return 0.0 if residual == 0.0 else math.inf
    return residual / magnitude


def poly_roots(p: Polynomial) -> List[complex]:
    """求 1~3 阶多项式的全部根（含重数）

    Raises:
        DegreeUnsupported: 阶次为 0 或大于 3
    """
    degree = p.degree
    if degree < 1 or degree > 3:
        raise DegreeUnsupported(f"仅支持 1~3 阶多项式求根，当前阶次: {degree}")

    monic = p.as_array() / p.leading
    if degree == 1:
        return [complex(-monic[0])]
    if degree == 2:
        return list(_quadratic_roots(monic[1], monic[0]))
    return _cubic_roots(monic[2], monic[1], monic[0])


def _quadratic_roots(b: float, c: float) -> Tuple[complex, complex]:
    """首一二次式 s^2 + b s + c 的数值稳定求根

    先求模较大的根 q，另一根由根之积 c/q 得到，避免相消误差。
    """
    disc = b * b - 4.0 * c
    if abs(disc) <= DOUBLE_ROOT_RTOL * max(b * b, 4.0 * abs(c)):
        disc = 0.0

    if disc == 0.0:
        r = complex(-0.5 * b)
        return r, r

    # np.sign(0) = 0，这里手动取符号
    sign_b = 1.0 if b >= 0.0 else -1.0
    if disc > 0.0:
        q = -0.5 * (b + sign_b * math.sqrt(disc))
        return complex(q), complex(c / q)

    q = -0.5 * (b + sign_b * cmath.sqrt(disc))
    return q, c / q


def _cubic_roots(a2: float, a1: float, a0: float) -> List[complex]:
    """首一三次式 s^3 + a2 s^2 + a1 s + a0 求根

    先用带保护的 Newton/二分法在包围区间内求出一个实根，
    再做降阶得到二次因子。
    """
    # 三重根：平移 s = x - a2/3 后的 p、q 同时为零
    shift = -a2 / 3.0
    p = a1 - a2 * a2 / 3.0
    q = 2.0 * a2 ** 3 / 27.0 - a2 * a1 / 3.0 + a0
    scale = max(abs(shift), math.sqrt(abs(a1)), abs(a0) ** (1.0 / 3.0), _TINY)
    if abs(p) <= TRIPLE_ROOT_RTOL * scale ** 2 and abs(q) <= TRIPLE_ROOT_RTOL * scale ** 3:
        logger.debug(f"[求根] 检测到三重根: {shift}")
        return [complex(shift)] * 3

    def f(x: float) -> Tuple[float, float]:
        return ((x + a2) * x + a1) * x + a0, (3.0 * x + 2.0 * a2) * x + a1

    # Cauchy 界保证 [-bound, bound] 内有变号
    bound = 1.0 + max(abs(a2), abs(a1), abs(a0))
    r = _safeguarded_newton(f, -bound, bound)

    # 降阶：s^3 + a2 s^2 + a1 s + a0 = (s - r)(s^2 + b s + c)
    b = a2 + r
    c = a1 + r * b
    if r != 0.0 and r * r > abs(c):
        # r 是模较大的根时改用后向降阶
        c = -a0 / r

    pair = _quadratic_roots(b, c)
    disc = b * b - 4.0 * c
    if pair[0] != pair[1] and abs(disc) <= NEAR_DOUBLE_RTOL * b * b:
        # 系数舍入会把重根拆开，中点在原三次式上的后向误差达到舍入水平时合并
        mid = -0.5 * b
        if poly_backward_error(Polynomial((a0, a1, a2, 1.0)), mid) <= MULTIPLICITY_BACKWARD_TOL:
            logger.debug(f"[求根] 合并数值重根: {mid}")
            return [complex(r), complex(mid), complex(mid)]
    return [complex(r)] + list(pair)


def _safeguarded_newton(
    f: Callable[[float], Tuple[float, float]],
    lo: float,
    hi: float,
    max_iter: int = 200,
) -> float:
    """Newton 法与二分法结合的包围求根，Newton 步越界或收敛过慢时退回二分"""
    f_lo, _ = f(lo)
    f_hi, _ = f(hi)
    if f_lo == 0.0:
        return lo
    if f_hi == 0.0:
        return hi
    if f_lo * f_hi > 0.0:
        raise ValueError(f"求根区间没有变号: [{lo}, {hi}]")

    # 保证 f(xl) < 0 < f(xh)
    xl, xh = (lo, hi) if f_lo < 0.0 else (hi, lo)
    x = 0.5 * (lo + hi)
    dx_old = abs(hi - lo)
    dx = dx_old
    fx, dfx = f(x)

    for _ in range(max_iter):
        if fx == 0.0:
            return x
        out_of_bracket = ((x - xh) * dfx - fx) * ((x - xl) * dfx - fx) > 0.0
        too_slow = abs(2.0 * fx) > abs(dx_old * dfx)
        if out_of_bracket or too_slow:
            dx_old = dx
            dx = 0.5 * (xh - xl)
            x = xl + dx
            if x == xl:
                return x
        else:
            dx_old = dx
            dx = fx / dfx
            previous = x
            x -= dx
            if x == previous:
                return x
        if abs(dx) <= 4.0 * _EPS * abs(x):
            return x
        fx, dfx = f(x)
        if fx < 0.0:
            xl = x
        else:
            xh = x
    return x


def tf_eval(g: RationalTF, omega: float) -> complex:
    """在 s = j*omega 处求传递函数的值

    Raises:
        EvalAtPole: 分母模值低于 EVAL_FLOOR
    """
    s = 1j * omega
    den = poly_eval(g.den, s)
    if abs(den) < EVAL_FLOOR:
        raise EvalAtPole(f"omega={omega} 处分母为零（积分器在 omega=0 处无定义）")
    return poly_eval(g.num, s) / den


def tf_eval_many(g: RationalTF, omegas: Sequence[float]) -> np.ndarray:
    """在一组频率上批量求值"""
    s = 1j * np.asarray(omegas, dtype=float)
    den = P.polyval(s, g.den.coeffs)
    if np.any(np.abs(den) < EVAL_FLOOR):
        raise EvalAtPole("频率网格中包含传递函数的极点")
    return P.polyval(s, g.num.coeffs) / den


def tf_series(a: RationalTF, b: RationalTF) -> RationalTF:
    """串联：分子分母分别相乘，不做约分"""
    return RationalTF(poly_mul(a.num, b.num), poly_mul(a.den, b.den))


def tf_unity_feedback(l: RationalTF) -> RationalTF:
    """单位负反馈闭环 num_l / (num_l + den_l)"""
    return RationalTF(l.num, poly_add(l.num, l.den))


def tf_cancel(g: RationalTF, root: float, rtol: float = 1e-9) -> RationalTF:
    """显式约去分子分母的公共因子 (s - root)

    Raises:
        CancellationRequired: root 不是分子或分母的根（按相对后向误差判定）
    """
    num_err = poly_backward_error(g.num, root)
    den_err = poly_backward_error(g.den, root)
    if g.num.is_zero or num_err > rtol or den_err > rtol:
        raise CancellationRequired(
            f"s={root:g} 不是分子分母的公共根 (分子误差 {num_err:.3e}, 分母误差 {den_err:.3e})"
        )

    factor = (-root, 1.0)
    num_q, _ = P.polydiv(g.num.coeffs, factor)
    den_q, _ = P.polydiv(g.den.coeffs, factor)
    logger.debug(f"[对消] 约去因子 (s - {root:g})")
    return RationalTF(Polynomial(tuple(num_q)), Polynomial(tuple(den_q)))
