"""Prime fields F_p, primitive roots, multiplicative subgroups and their cosets.

Elements are plain Python ints kept in [0, p-1].  A subgroup of F_p^* of
order t is generated by h = gamma^((p-1)/t) where gamma is the smallest
primitive root; its members are materialized only while t <= 10**6.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field

from .errors import NotADivisor, NotPrime

# Deterministic for every n < 3.3 * 10**24, which covers all 64-bit inputs.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47)

MATERIALIZE_LIMIT = 10**6


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin primality test for word-size n."""
    if n < 2:
        return False
    for q in _SMALL_PRIMES:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_rho(n: int) -> int:
    # Brent's variant; n is odd and composite.
    if n % 2 == 0:
        return 2
    for c in range(1, n):
        y, r, q, g = 2, 1, 1, 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(128, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += 128
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g
    raise ArithmeticError(f'no factor found for {n}')


def factorize(n: int) -> dict[int, int]:
    """Prime factorization {q: e} of n >= 1 (trial division, then Pollard rho)."""
    factors: dict[int, int] = {}
    for q in range(2, 1000):
        if q * q > n:
            break
        while n % q == 0:
            factors[q] = factors.get(q, 0) + 1
            n //= q
    stack = [n] if n > 1 else []
    while stack:
        m = stack.pop()
        if is_prime(m):
            factors[m] = factors.get(m, 0) + 1
        else:
            d = _pollard_rho(m)
            stack += [d, m // d]
    return dict(sorted(factors.items()))


def divisors(n: int) -> list[int]:
    divs = [1]
    for q, e in factorize(n).items():
        divs = [d * q**k for d in divs for k in range(e + 1)]
    return sorted(divs)


def element_order(x: int, p: int) -> int:
    """Multiplicative order of x modulo prime p."""
    if x % p == 0:
        raise ValueError('0 has no multiplicative order')
    order = p - 1
    for q in factorize(p - 1):
        while order % q == 0 and pow(x, order // q, p) == 1:
            order //= q
    return order


@dataclass(frozen=True)
class FieldCtx:
    p: int

    def __post_init__(self):
        if self.p < 2 or not is_prime(self.p):
            raise NotPrime(f'{self.p} is not prime')

    def reduce(self, x: int) -> int:
        return x % self.p

    def inv(self, x: int) -> int:
        return pow(x, -1, self.p)


@functools.lru_cache(maxsize=None)
def _primitive_root(p: int) -> int:
    if p == 2:
        return 1
    qs = list(factorize(p - 1))
    for g in range(2, p):
        if all(pow(g, (p - 1) // q, p) != 1 for q in qs):
            return g
    raise AssertionError('unreachable for prime p')


def primitive_root(ctx: FieldCtx) -> int:
    """Smallest generator of F_p^*."""
    return _primitive_root(ctx.p)


@dataclass(frozen=True)
class SubgroupSpec:
    ctx: FieldCtx
    t: int
    h: int
    elements: tuple[int, ...] | None = field(default=None, repr=False)

    @functools.cached_property
    def element_set(self) -> frozenset[int] | None:
        return None if self.elements is None else frozenset(self.elements)

    def __contains__(self, x: int) -> bool:
        x %= self.ctx.p
        if self.elements is not None:
            return x in self.element_set
        return x != 0 and pow(x, self.t, self.ctx.p) == 1


def subgroup_of_order(ctx: FieldCtx, t: int) -> SubgroupSpec:
    p = ctx.p
    if t < 1 or (p - 1) % t:
        raise NotADivisor(f'{t} does not divide p-1 = {p - 1}')
    h = pow(primitive_root(ctx), (p - 1) // t, p)
    elements = None
    if t <= MATERIALIZE_LIMIT:
        acc, powers = 1, []
        for _ in range(t):
            powers.append(acc)
            acc = acc * h % p
        elements = tuple(sorted(powers))
    return SubgroupSpec(ctx, t, h, elements)


@dataclass(frozen=True)
class CosetSpec:
    subgroup: SubgroupSpec
    g: int
    g_inv: int

    @property
    def p(self) -> int:
        return self.subgroup.ctx.p

    def members(self) -> list[int]:
        if self.subgroup.elements is None:
            raise ValueError('subgroup elements are not materialized')
        return sorted(self.g * e % self.p for e in self.subgroup.elements)


def coset(subgroup: SubgroupSpec, g: int) -> CosetSpec:
    p = subgroup.ctx.p
    g %= p
    if g == 0:
        raise ValueError('coset representative must be nonzero')
    return CosetSpec(subgroup, g, pow(g, -1, p))


def in_coset(x: int, c: CosetSpec) -> bool:
    """x lies in g*Gamma, i.e. x != 0 and (x/g)^t = 1."""
    p = c.p
    x %= p
    if x == 0:
        return False
    return pow(x * c.g_inv % p, c.subgroup.t, p) == 1
