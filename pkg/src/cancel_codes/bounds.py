"""Closed-form bounds on cancellative and cover-free family sizes.

Rational bounds are exact :class:`fractions.Fraction` values; real-valued ones
are :mod:`mpmath` numbers at 64 decimal digits.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, prod
from typing import Any

import mpmath

from .errors import BadShape, OutOfRegime

mpmath.mp.dps = 64


@dataclass(frozen=True)
class BoundReport:
    label: str
    value: Any
    source: str
    params: dict = field(default_factory=dict)
    error: Any = None

    def as_float(self) -> float:
        return float(self.value)

    def to_dict(self) -> dict:
        v = self.value
        if isinstance(v, Fraction):
            shown = str(v) if v.denominator != 1 else v.numerator
        elif isinstance(v, int):
            shown = v
        else:
            shown = mpmath.nstr(v, 20)
        out = {"label": self.label, "value": shown, "float": float(v), "source": self.source, "params": self.params}
        if self.error is not None:
            out["error_bound"] = float(self.error)
        return out


def bound_c_n2_upper(n: int) -> BoundReport:
    """9 sqrt(n) (5/4)^n, an upper bound for 2-cancellative codes on n points."""
    if n < 1:
        raise ValueError("n must be positive")
    v = 9 * mpmath.sqrt(n) * mpmath.mpf(5) ** n / mpmath.mpf(4) ** n
    return BoundReport("c(n,2) upper", v, "entropy counting, t=2", {"n": n})


def bound_uniform_even(n: int, k: int) -> BoundReport:
    """C(n, k) / (C(2k, k) / 2): upper bound for 2-cancellative 2k-uniform families."""
    if n < 1 or k < 1:
        raise ValueError("need n >= 1 and k >= 1")
    return BoundReport(f"c_{2 * k}(n,2) upper", Fraction(2 * comb(n, k), comb(2 * k, k)), "uniform 2-cancellative, even r", {"n": n, "k": k})


def bound_uniform_odd(n: int, k: int) -> BoundReport:
    """C(n+1, k+1) / (C(2k+2, k+1) / 2): upper bound for 2-cancellative (2k+1)-uniform families."""
    if n < 1 or k < 0:
        raise ValueError("need n >= 1 and k >= 0")
    v = Fraction(2 * comb(n + 1, k + 1), comb(2 * k + 2, k + 1))
    return BoundReport(f"c_{2 * k + 1}(n,2) upper", v, "uniform 2-cancellative, odd r", {"n": n, "k": k})


def bound_uniform(n: int, r: int) -> BoundReport:
    """Parity dispatch of the two uniform bounds for r-uniform 2-cancellative families."""
    if r < 1:
        raise ValueError("r must be positive")
    return bound_uniform_even(n, r // 2) if r % 2 == 0 else bound_uniform_odd(n, r // 2)


def alpha(t: int) -> mpmath.mpf:
    """Per-level constant of the recursive bound: alpha_2 = 9, then the factor at n = 2(t+2)^2 + 1."""
    if t < 2:
        raise ValueError("t must be at least 2")
    a = mpmath.mpf(9)
    for s in range(3, t + 1):
        a *= 3 / mpmath.sqrt(s + 2) + (s + 2) / mpmath.sqrt(2 * (s + 2) ** 2 + 1)
    return a


def _tcanc_direct(n: int, t: int) -> mpmath.mpf:
    base = mpmath.mpf(t + 3) / (t + 2)
    return alpha(t - 1) * (3 / mpmath.sqrt(t + 2) + (t + 2) / mpmath.sqrt(n)) * mpmath.power(n, mpmath.mpf(t - 1) / 2) * base**n


def _tcanc_logdomain(n: int, t: int) -> mpmath.mpf:
    # same quantity assembled from logarithms, used as a self-check
    log_alpha = mpmath.log(9) + mpmath.fsum(
        mpmath.log(3 * mpmath.sqrt(2 * (s + 2) ** 2 + 1) + (s + 2) * mpmath.sqrt(s + 2))
        - mpmath.log(mpmath.sqrt(s + 2) * mpmath.sqrt(2 * (s + 2) ** 2 + 1))
        for s in range(3, t)
    )
    factor = mpmath.log(3 * mpmath.sqrt(n) + (t + 2) * mpmath.sqrt(t + 2)) - mpmath.log(mpmath.sqrt(t + 2) * mpmath.sqrt(n))
    return mpmath.exp(log_alpha + factor + (t - 1) * mpmath.log(n) / 2 + n * (mpmath.log(t + 3) - mpmath.log(t + 2)))


def bound_tcanc_recursive(n: int, t: int) -> BoundReport:
    """Upper bound for t-cancellative codes from one step of the induction on t.

    For t = 2 this is :func:`bound_c_n2_upper`. For t >= 3 it is only valid
    for n > 2(t+2)^2; below that :class:`OutOfRegime` is raised.
    """
    if t == 2:
        rep = bound_c_n2_upper(n)
        return BoundReport("c(n,t) upper", rep.value, "entropy counting, t=2", {"n": n, "t": t})
    if t < 2:
        raise ValueError("t must be at least 2")
    if n <= 2 * (t + 2) ** 2:
        raise OutOfRegime(f"n={n} must exceed 2(t+2)^2={2 * (t + 2) ** 2}")
    v = _tcanc_direct(n, t)
    return BoundReport("c(n,t) upper", v, "induction on t, explicit factor", {"n": n, "t": t, "alpha_prev": float(alpha(t - 1))})


def bound_eq_tstar(n: int, t: int, cvalue: int) -> BoundReport:
    """1 + floor(t/2) + C, given C >= the largest floor(t/2)-cover-free code size."""
    return BoundReport("c(n,t) upper via cover-free", 1 + t // 2 + cvalue, "cover-free reduction", {"n": n, "t": t, "C": cvalue})


def p_r(n: int, r: int) -> int:
    """Size of the complete r-partite r-graph on n vertices with near-equal classes."""
    if not n >= r >= 2:
        raise BadShape(f"need n >= r >= 2, got n={n}, r={r}")
    return prod((n + i) // r for i in range(r))


def tolhuizen_c0(tolerance: float = 1e-6) -> BoundReport:
    """prod_{k>=1} (1 - 2^-k), truncated once the tail can move it by less than ``tolerance``.

    With P_K the partial product, the tail is at least 1 - 2^-K, so the limit
    lies in [P_K (1 - 2^-K), P_K]. The reported value is P_K and the error
    bound is P_K * 2^-K.
    """
    if tolerance <= 0:
        raise ValueError("tolerance must be positive")
    P = Fraction(1)
    K = 0
    while True:
        K += 1
        P *= Fraction(2**K - 1, 2**K)
        err = P / 2**K
        if err < tolerance:
            break
    value = mpmath.mpf(P.numerator) / P.denominator
    return BoundReport("c0", value, "nonsingular binary matrix density", {"tolerance": tolerance, "terms": K}, error=mpmath.mpf(err.numerator) / err.denominator)


def c0_partial(K: int) -> Fraction:
    return prod((Fraction(2**k - 1, 2**k) for k in range(1, K + 1)), start=Fraction(1))


def bound_tolhuizen_lower(n: int, r: int) -> BoundReport:
    """c0 / 2^r * C(n, r): lower bound for cancellative r-uniform families."""
    if not n >= r >= 2:
        raise BadShape(f"need n >= r >= 2, got n={n}, r={r}")
    c0 = tolhuizen_c0(1e-30)
    return BoundReport("c_r(n) lower", c0.value * comb(n, r) / 2**r, "random binary matrices", {"n": n, "r": r})


def bound_cancellative_uniform_upper(n: int, r: int) -> BoundReport:
    """2^r / C(2r, r) * C(n, r), valid for cancellative r-uniform families when n >= 2r."""
    if n < 2 * r:
        raise OutOfRegime(f"n={n} < 2r={2 * r}")
    return BoundReport("c_r(n) upper", Fraction(2**r * comb(n, r), comb(2 * r, r)), "double counting over 2r-sets", {"n": n, "r": r})


def packing_ceiling(n: int, r: int) -> int:
    """floor(C(n,2) / C(r,2)), the size limit of a linear r-uniform family."""
    if not n >= r >= 2:
        raise BadShape(f"need n >= r >= 2, got n={n}, r={r}")
    return comb(n, 2) // comb(r, 2)
