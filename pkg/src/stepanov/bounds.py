"""Exact evaluation of the constants, hypothesis windows and bounds.

Every inequality with a fractional exponent is raised to an integer power
before it is compared, so all booleans here come from big-integer
comparisons.  Floating values only appear in ``margin`` fields, which are
for display.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence


def integer_root(x: int, k: int) -> int:
    """floor(x ** (1/k)) for integers x >= 0, k >= 1."""
    if x < 0 or k < 1:
        raise ValueError('need x >= 0 and k >= 1')
    if x < 2 or k == 1:
        return x
    lo, hi = 0, 1 << (x.bit_length() // k + 1)
    # invariant: lo**k <= x < hi**k
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if mid**k <= x:
            lo = mid
        else:
            hi = mid
    return lo


def _prod(xs: Sequence[int]) -> int:
    return math.prod(xs)


@dataclass(frozen=True)
class BoundReport:
    n: int
    m: tuple[int, ...]
    c1: int
    # t < C_2 p^(1 - 1/(2n+1))  <=>  t^(2n+1) (n+1)^(2n) (prod m)^2 < p^(2n)
    window_lhs: int | None = None
    window_rhs: int | None = None
    lower_ok: bool | None = None
    upper_ok: bool | None = None
    # |M| <= C_3 t^(1/2 + 1/(2n))  <=>  |M|^(2n) <= (4(n+1)M_n)^(2n) (prod m)^2 t^(n+1)
    bound_lhs: int | None = None
    bound_rhs: int | None = None
    bound_holds: bool | None = None
    margin: float | None = None

    @property
    def window_ok(self) -> bool | None:
        if self.lower_ok is None or self.upper_ok is None:
            return None
        return self.lower_ok and self.upper_ok

    @property
    def c3_coeff(self) -> int:
        """4(n+1)M_n; C_3 equals this times (prod m)^(1/n)."""
        return 4 * (self.n + 1) * sum(self.m)

    @property
    def c3_avatar(self) -> int:
        """(4(n+1)M_n)^(2n) (prod m)^2, the t-free factor of the cleared bound."""
        return self.c3_coeff ** (2 * self.n) * _prod(self.m) ** 2

    @property
    def c2(self) -> float:
        n = self.n
        return (n + 1) ** (-2 * n / (2 * n + 1)) * _prod(self.m) ** (-2 / (2 * n + 1))

    @property
    def c3(self) -> float:
        return self.c3_coeff * _prod(self.m) ** (1 / self.n)

    def as_dict(self) -> dict:
        return {
            'n': self.n, 'm': list(self.m), 'c1': self.c1,
            'c3_coeff': self.c3_coeff, 'c3_avatar': self.c3_avatar,
            'window_lhs': self.window_lhs, 'window_rhs': self.window_rhs,
            'lower_ok': self.lower_ok, 'upper_ok': self.upper_ok,
            'window_ok': self.window_ok,
            'bound_lhs': self.bound_lhs, 'bound_rhs': self.bound_rhs,
            'bound_holds': self.bound_holds, 'margin': self.margin,
        }


def c1_constant(m: Sequence[int], n: int) -> int:
    """2^(2n) m_n^(4n) with m_n the largest degree."""
    return 2 ** (2 * n) * max(m) ** (4 * n)


def window_sides(t: int, p: int, m: Sequence[int], n: int) -> tuple[int, int]:
    return t ** (2 * n + 1) * (n + 1) ** (2 * n) * _prod(m) ** 2, p ** (2 * n)


def bound_sides(size: int, t: int, m: Sequence[int], n: int) -> tuple[int, int]:
    coeff = 4 * (n + 1) * sum(m)
    return size ** (2 * n), coeff ** (2 * n) * _prod(m) ** 2 * t ** (n + 1)


def constants_remark1(m: Sequence[int], n: int, *, t: int | None = None, p: int | None = None,
                      size: int | None = None) -> BoundReport:
    """Constants C_1, C_2, C_3 for degrees m, optionally evaluated on (t, p, |M|).

    With t and p the report carries the hypothesis window C_1 < t < C_2 p^(1-1/(2n+1));
    with t and size it carries the bound |M| <= C_3 t^(1/2+1/(2n)).
    """
    if n < 1 or len(m) != n:
        raise ValueError('m must hold n degrees')
    m = tuple(sorted(m))
    c1 = c1_constant(m, n)
    kw: dict = {}
    if t is not None:
        kw['lower_ok'] = c1 < t
        if p is not None:
            lhs, rhs = window_sides(t, p, m, n)
            kw.update(window_lhs=lhs, window_rhs=rhs, upper_ok=lhs < rhs)
        if size is not None:
            lhs, rhs = bound_sides(size, t, m, n)
            kw.update(bound_lhs=lhs, bound_rhs=rhs, bound_holds=lhs <= rhs)
            bound = 4 * (n + 1) * sum(m) * _prod(m) ** (1 / n) * t ** (0.5 + 0.5 / n)
            kw['margin'] = bound - size
    return BoundReport(n, m, c1, **kw)


def in_window(t: int, p: int, m: Sequence[int], n: int) -> bool:
    return bool(constants_remark1(m, n, t=t, p=p).window_ok)


def max_window_t(p: int, m: Sequence[int], n: int) -> int:
    """Largest t (not necessarily dividing p-1) satisfying the upper window bound."""
    # t^(2n+1) < p^(2n) / ((n+1)^(2n) (prod m)^2)
    den = (n + 1) ** (2 * n) * _prod(m) ** 2
    num = p ** (2 * n)
    r = integer_root((num - 1) // den, 2 * n + 1)
    while r > 0 and window_sides(r, p, m, n)[0] >= num:
        r -= 1
    return r


def gv_check(t: int, intersection_size: int, p: int) -> tuple[bool, bool]:
    """Hypothesis and conclusion of the Garcia-Voloch estimate |G & (G+mu)| <= 4|G|^(2/3).

    Hypothesis t < (p-1)/((p-1)^(1/4) + 1), cleared to t^4 (p-1) < (p-1-t)^4.
    """
    slack = p - 1 - t
    hypothesis_ok = slack > 0 and t**4 * (p - 1) < slack**4
    bound_ok = intersection_size**3 <= 64 * t * t
    return hypothesis_ok, bound_ok


def theorem1_hypotheses(t: int, n: int, p: int) -> tuple[bool, bool]:
    """The two hypotheses for n shifts, with log read base 2.

    32 n 2^(20 n log2(n+1)) = 32 n (n+1)^(20 n) <= t, and
    4 n t (t^(1/(2n+1)) + 1) <= p, cleared to t (4nt)^(2n+1) <= (p - 4nt)^(2n+1).
    """
    size_ok = 32 * n * (n + 1) ** (20 * n) <= t
    rest = p - 4 * n * t
    char_ok = rest >= 0 and t * (4 * n * t) ** (2 * n + 1) <= rest ** (2 * n + 1)
    return size_ok, char_ok


def theorem1_check(t: int, n: int, intersection_size: int) -> bool:
    """size <= 4(n+1)(t^(1/(2n+1)) + 1)^(n+1), with the root over-approximated by floor + 1."""
    r = integer_root(t, 2 * n + 1)
    return intersection_size <= 4 * (n + 1) * (r + 2) ** (n + 1)


def corollary1_check(t: int, n: int, intersection_size: int, p: int) -> BoundReport:
    """The |M| bound specialised to the linear map x -> (x, x - mu_1, ..., x - mu_(n-1))."""
    return constants_remark1((1,) * n, n, t=t, p=p, size=intersection_size)


def est_bound(M_n: int, deg_psi: int, D: int) -> Fraction:
    """1 + M_n + deg(Psi)/D, the count implied by a verified certificate."""
    return 1 + M_n + Fraction(deg_psi, D)
