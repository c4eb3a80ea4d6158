"""Dense univariate polynomials over F_p.

A polynomial is stored as a tuple of residues in ascending degree with no
trailing zeros; the zero polynomial is the empty tuple and has degree -1.
Products use schoolbook multiplication for short operands and Karatsuba
above ``KARATSUBA_CUTOFF`` coefficients.  When p is small enough that a
leaf convolution cannot overflow int64, leaves run through numpy.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from .errors import BothZero, DivisionByZeroPoly, ModulusMismatch, ZeroPolynomial
from .ffield import FieldCtx

KARATSUBA_CUTOFF = 64
_INT64_MAX = 2**63 - 1


def _trim(c: list[int]) -> list[int]:
    while c and c[-1] == 0:
        c.pop()
    return c


def _np_safe(p: int, terms: int) -> bool:
    # A convolution sums at most `terms` products of residues, plus Karatsuba slack.
    return 4 * terms * (p - 1) ** 2 < _INT64_MAX


def _school_py(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    if len(a) < len(b):
        a, b = b, a
    res = [0] * (len(a) + len(b) - 1)
    for j, bj in enumerate(b):
        if bj:
            for i, ai in enumerate(a):
                res[i + j] += ai * bj
    return [r % p for r in res]


def _karatsuba_py(a: list[int], b: list[int], p: int) -> list[int]:
    la, lb = len(a), len(b)
    if min(la, lb) < KARATSUBA_CUTOFF:
        return _school_py(a, b, p)
    if la < lb:
        a, b, la, lb = b, a, lb, la
    if la >= 2 * lb:
        res = [0] * (la + lb - 1)
        for s in range(0, la, lb):
            part = _karatsuba_py(a[s:s + lb], b, p)
            for i, v in enumerate(part):
                res[s + i] += v
        return [r % p for r in res]
    h = la // 2
    a0, a1 = a[:h], a[h:]
    b0, b1 = b[:h], b[h:]
    z0 = _karatsuba_py(a0, b0, p)
    z2 = _karatsuba_py(a1, b1, p)
    sa = _padd(a0, a1, p)
    sb = _padd(b0, b1, p)
    z1 = _karatsuba_py(sa, sb, p)
    res = [0] * (la + lb - 1)
    for i, v in enumerate(z0):
        res[i] += v
        z1[i] -= v
    for i, v in enumerate(z2):
        res[i + 2 * h] += v
        z1[i] -= v
    for i, v in enumerate(z1):
        if i + h < len(res):
            res[i + h] += v
    return [r % p for r in res]


def _padd(u: list[int], v: list[int], p: int) -> list[int]:
    if len(u) < len(v):
        u, v = v, u
    out = list(u)
    for i, x in enumerate(v):
        out[i] = (out[i] + x) % p
    return out


def _npadd(u: np.ndarray, v: np.ndarray, p: int) -> np.ndarray:
    if len(u) < len(v):
        u, v = v, u
    out = u.copy()
    out[:len(v)] = (out[:len(v)] + v) % p
    return out


def _karatsuba_np(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    la, lb = len(a), len(b)
    if min(la, lb) < KARATSUBA_CUTOFF:
        return np.convolve(a, b) % p
    if la < lb:
        a, b, la, lb = b, a, lb, la
    if la >= 2 * lb:
        res = np.zeros(la + lb - 1, dtype=np.int64)
        for s in range(0, la, lb):
            part = _karatsuba_np(a[s:s + lb], b, p)
            res[s:s + len(part)] = (res[s:s + len(part)] + part) % p
        return res
    h = la // 2
    a0, a1 = a[:h], a[h:]
    b0, b1 = b[:h], b[h:]
    z0 = _karatsuba_np(a0, b0, p)
    z2 = _karatsuba_np(a1, b1, p)
    z1 = _karatsuba_np(_npadd(a0, a1, p), _npadd(b0, b1, p), p)
    z1[:len(z0)] -= z0
    z1[:len(z2)] -= z2
    res = np.zeros(la + lb - 1, dtype=np.int64)
    res[:len(z0)] += z0
    res[2 * h:2 * h + len(z2)] += z2
    n1 = min(len(z1), len(res) - h)
    res[h:h + n1] += z1[:n1]
    return res % p


def mul_lists(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    """Product of two canonical coefficient lists modulo p."""
    if not a or not b:
        return []
    if min(len(a), len(b)) < KARATSUBA_CUTOFF:
        if _np_safe(p, min(len(a), len(b))) and len(a) * len(b) > 256:
            res = (np.convolve(np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64)) % p).tolist()
        else:
            res = _school_py(a, b, p)
    elif _np_safe(p, KARATSUBA_CUTOFF):
        res = _karatsuba_np(np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64), p).tolist()
    else:
        res = _karatsuba_py(list(a), list(b), p)
    return _trim(res)


class DensePoly:
    """Immutable dense polynomial over F_p.

    ``coeffs[j]`` is the coefficient of x**j.  Arithmetic operators are
    overloaded; integers are coerced to constant polynomials.
    """

    __slots__ = ('ctx', 'coeffs')

    def __init__(self, ctx: FieldCtx, coeffs: Iterable[int] = ()):
        p = ctx.p
        self.ctx = ctx
        self.coeffs = tuple(_trim([c % p for c in coeffs]))

    @classmethod
    def _raw(cls, ctx: FieldCtx, coeffs: Sequence[int]) -> 'DensePoly':
        # Caller guarantees canonical residues without trailing zeros.
        obj = object.__new__(cls)
        obj.ctx = ctx
        obj.coeffs = tuple(coeffs)
        return obj

    # construction helpers

    @classmethod
    def zero(cls, ctx: FieldCtx) -> 'DensePoly':
        return cls._raw(ctx, ())

    @classmethod
    def one(cls, ctx: FieldCtx) -> 'DensePoly':
        return cls._raw(ctx, (1,))

    @classmethod
    def constant(cls, ctx: FieldCtx, c: int) -> 'DensePoly':
        return cls(ctx, (c,))

    @classmethod
    def monomial(cls, ctx: FieldCtx, k: int, c: int = 1) -> 'DensePoly':
        return cls(ctx, [0] * k + [c])

    @classmethod
    def x(cls, ctx: FieldCtx) -> 'DensePoly':
        return cls._raw(ctx, (0, 1))

    @classmethod
    def from_roots(cls, ctx: FieldCtx, roots: Iterable[int]) -> 'DensePoly':
        out = cls.one(ctx)
        for r in roots:
            out = out * cls(ctx, (-r, 1))
        return out

    @classmethod
    def from_text(cls, ctx: FieldCtx, text: str) -> 'DensePoly':
        """Parse "c0,c1,...,cd" (ascending degree)."""
        text = text.strip()
        if not text:
            return cls.zero(ctx)
        return cls(ctx, [int(s) for s in text.split(',')])

    def to_text(self) -> str:
        return ','.join(map(str, self.coeffs)) if self.coeffs else '0'

    # basic queries

    @property
    def p(self) -> int:
        return self.ctx.p

    @property
    def degree(self) -> int:
        """Degree; -1 stands for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def lc(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def __len__(self) -> int:
        return len(self.coeffs)

    def __getitem__(self, j: int) -> int:
        return self.coeffs[j] if 0 <= j < len(self.coeffs) else 0

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = DensePoly.constant(self.ctx, other)
        if not isinstance(other, DensePoly):
            return NotImplemented
        return self.ctx.p == other.ctx.p and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((self.ctx.p, self.coeffs))

    def __repr__(self) -> str:
        if not self.coeffs:
            return f'DensePoly(0 mod {self.p})'
        terms = []
        for j, c in enumerate(self.coeffs):
            if c:
                terms.append(str(c) if j == 0 else f'{c if c != 1 else ""}x' + (f'^{j}' if j > 1 else ''))
        return f'DensePoly({" + ".join(terms)} mod {self.p})'

    # arithmetic

    def _coerce(self, other) -> 'DensePoly':
        if isinstance(other, DensePoly):
            if other.ctx.p != self.ctx.p:
                raise ModulusMismatch(f'moduli differ: {self.ctx.p} vs {other.ctx.p}')
            return other
        if isinstance(other, int):
            return DensePoly.constant(self.ctx, other)
        return NotImplemented

    def __add__(self, other) -> 'DensePoly':
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        p = self.p
        res = list(a)
        for i, v in enumerate(b):
            res[i] = (res[i] + v) % p
        return DensePoly._raw(self.ctx, _trim(res))

    __radd__ = __add__

    def __neg__(self) -> 'DensePoly':
        p = self.p
        return DensePoly._raw(self.ctx, [(p - c) % p for c in self.coeffs])

    def __sub__(self, other) -> 'DensePoly':
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> 'DensePoly':
        return (-self) + other

    def scale(self, c: int) -> 'DensePoly':
        p = self.p
        c %= p
        if c == 0:
            return DensePoly.zero(self.ctx)
        return DensePoly._raw(self.ctx, [v * c % p for v in self.coeffs])

    def __mul__(self, other) -> 'DensePoly':
        if isinstance(other, int):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return DensePoly._raw(self.ctx, mul_lists(self.coeffs, other.coeffs, self.p))

    def __rmul__(self, other) -> 'DensePoly':
        if isinstance(other, int):
            return self.scale(other)
        return NotImplemented

    def shift(self, k: int) -> 'DensePoly':
        """Multiply by x**k."""
        if not self.coeffs:
            return self
        return DensePoly._raw(self.ctx, (0,) * k + self.coeffs)

    def __pow__(self, e: int) -> 'DensePoly':
        if e < 0:
            raise ValueError('negative exponent')
        result = DensePoly.one(self.ctx)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __call__(self, x0: int) -> int:
        p = self.p
        acc = 0
        for c in reversed(self.coeffs):
            acc = (acc * x0 + c) % p
        return acc

    def __divmod__(self, other) -> tuple['DensePoly', 'DensePoly']:
        return poly_divrem(self, self._coerce(other))

    def __floordiv__(self, other) -> 'DensePoly':
        return divmod(self, other)[0]

    def __mod__(self, other) -> 'DensePoly':
        return divmod(self, other)[1]

    def monic(self) -> 'DensePoly':
        if not self.coeffs:
            return self
        return self.scale(pow(self.coeffs[-1], -1, self.p))

    def derivative(self, k: int = 1) -> 'DensePoly':
        out = self
        for _ in range(k):
            out = formal_derivative(out)
        return out


def poly_mul(a: DensePoly, b: DensePoly) -> DensePoly:
    return a * b


def poly_divrem(a: DensePoly, b: DensePoly) -> tuple[DensePoly, DensePoly]:
    """Euclidean division a = q*b + r with deg r < deg b."""
    if a.ctx.p != b.ctx.p:
        raise ModulusMismatch(f'moduli differ: {a.ctx.p} vs {b.ctx.p}')
    if b.is_zero():
        raise DivisionByZeroPoly('division by the zero polynomial')
    p = a.p
    db = b.degree
    if a.degree < db:
        return DensePoly.zero(a.ctx), a
    rem = list(a.coeffs)
    inv_lc = pow(b.coeffs[-1], -1, p)
    bc = b.coeffs
    q = [0] * (a.degree - db + 1)
    for i in range(a.degree - db, -1, -1):
        c = rem[i + db] % p
        if c:
            c = c * inv_lc % p
            q[i] = c
            for j in range(db):
                rem[i + j] -= c * bc[j]
        rem[i + db] = 0
    return DensePoly._raw(a.ctx, _trim(q)), DensePoly(a.ctx, rem[:db])


def poly_gcd(a: DensePoly, b: DensePoly) -> DensePoly:
    """Monic gcd by Euclid's algorithm."""
    if a.ctx.p != b.ctx.p:
        raise ModulusMismatch(f'moduli differ: {a.ctx.p} vs {b.ctx.p}')
    if a.is_zero() and b.is_zero():
        raise BothZero('gcd(0, 0) is undefined')
    while not b.is_zero():
        a, b = b, poly_divrem(a, b)[1]
    return a.monic()


def formal_derivative(a: DensePoly) -> DensePoly:
    p = a.p
    return DensePoly(a.ctx, [j * c % p for j, c in enumerate(a.coeffs)][1:])


def synthetic_division(coeffs: Sequence[int], x0: int, p: int) -> tuple[list[int], int]:
    """Divide by (x - x0): returns (quotient coefficients, remainder)."""
    n = len(coeffs)
    q = [0] * (n - 1)
    acc = 0
    for j in range(n - 1, 0, -1):
        acc = (acc * x0 + coeffs[j]) % p
        q[j - 1] = acc
    rem = (acc * x0 + coeffs[0]) % p
    return q, rem


def multiplicity_at(a: DensePoly, x0: int, cap: int | None = None) -> int:
    """Largest k with (x - x0)^k dividing a.

    Uses repeated synthetic division, so the answer does not depend on the
    characteristic.  ``cap`` stops counting early once k reaches it.
    """
    if a.is_zero():
        raise ZeroPolynomial('multiplicity of the zero polynomial is undefined')
    p = a.p
    x0 %= p
    coeffs = list(a.coeffs)
    k = 0
    while len(coeffs) > 1 and (cap is None or k < cap):
        q, rem = synthetic_division(coeffs, x0, p)
        if rem:
            break
        coeffs = q
        k += 1
    return k
