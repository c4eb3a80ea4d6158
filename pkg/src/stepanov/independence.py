"""Linear independence of polynomial families over F_p.

Two independent routes: the rank of the coefficient matrix, and the
Wronskian determinant.  In characteristic p a zero Wronskian only forces
dependence over F_p[[x^p]]; for families of degree < p this collapses to
dependence over F_p, which is the consequence checked here.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from .errors import EmptyFamily, FamilyTooLarge
from .polyring import DensePoly, poly_divrem

MAX_WRONSKIAN = 8
_BAREISS_MAX = 5


def rank_mod_p(rows: Sequence[Sequence[int]], p: int) -> int:
    m = [[v % p for v in r] for r in rows if any(v % p for v in r)]
    if not m:
        return 0
    width = max(len(r) for r in m)
    m = [r + [0] * (width - len(r)) for r in m]
    rank = 0
    for c in range(width):
        piv = next((i for i in range(rank, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = pow(m[rank][c], -1, p)
        pr = [v * inv % p for v in m[rank]]
        m[rank] = pr
        for i in range(rank + 1, len(m)):
            f = m[i][c]
            if f:
                m[i] = [(x - f * y) % p for x, y in zip(m[i], pr)]
        rank += 1
        if rank == len(m):
            break
    return rank


def rank_independence(polys: Sequence[DensePoly]) -> bool:
    """True iff the family is linearly independent over F_p."""
    if not polys:
        raise EmptyFamily('empty polynomial family')
    p = polys[0].p
    return rank_mod_p([list(f.coeffs) for f in polys], p) == len(polys)


def _det_bareiss(mat: list[list[DensePoly]]) -> DensePoly:
    s = len(mat)
    m = [row[:] for row in mat]
    ctx = m[0][0].ctx
    prev = DensePoly.one(ctx)
    sign = 1
    for k in range(s - 1):
        if m[k][k].is_zero():
            swap = next((i for i in range(k + 1, s) if not m[i][k].is_zero()), None)
            if swap is None:
                return DensePoly.zero(ctx)
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, s):
            for j in range(k + 1, s):
                num = m[i][j] * m[k][k] - m[i][k] * m[k][j]
                q, r = poly_divrem(num, prev)
                if not r.is_zero():
                    raise ArithmeticError('inexact Bareiss division')
                m[i][j] = q
        prev = m[k][k]
    det = m[s - 1][s - 1]
    return det if sign == 1 else -det


def _det_cofactor(mat: list[list[DensePoly]]) -> DensePoly:
    s = len(mat)
    ctx = mat[0][0].ctx

    @lru_cache(maxsize=None)
    def minor(row: int, cols: tuple[int, ...]) -> DensePoly:
        # determinant of rows row.. and the given columns
        if len(cols) == 1:
            return mat[row][cols[0]]
        acc = DensePoly.zero(ctx)
        for idx, c in enumerate(cols):
            entry = mat[row][c]
            if entry.is_zero():
                continue
            term = entry * minor(row + 1, cols[:idx] + cols[idx + 1:])
            acc = acc + term if idx % 2 == 0 else acc - term
        return acc

    return minor(0, tuple(range(s)))


def determinant(mat: list[list[DensePoly]]) -> DensePoly:
    """Determinant over F_p[x]: Bareiss for size <= 5, memoised cofactor expansion above."""
    if len(mat) <= _BAREISS_MAX:
        return _det_bareiss(mat)
    return _det_cofactor(mat)


def wronskian_matrix(polys: Sequence[DensePoly]) -> list[list[DensePoly]]:
    s = len(polys)
    rows = [list(polys)]
    for _ in range(1, s):
        rows.append([f.derivative() for f in rows[-1]])
    return rows


def wronskian(polys: Sequence[DensePoly]) -> DensePoly:
    """det [f_j^(k)]_{k, j} for a family of at most 8 polynomials."""
    if not polys:
        raise EmptyFamily('empty polynomial family')
    if len(polys) > MAX_WRONSKIAN:
        raise FamilyTooLarge(f'family of size {len(polys)} exceeds {MAX_WRONSKIAN}')
    return determinant(wronskian_matrix(polys))


@dataclass(frozen=True)
class SchmidtVerdict:
    wronskian_zero: bool
    fp_independent: bool
    degrees_below_p: bool

    @property
    def violation(self) -> bool:
        """Independent, degrees below p and yet a zero Wronskian: must never happen."""
        return self.degrees_below_p and self.fp_independent and self.wronskian_zero


def schmidt_consequence_check(polys: Sequence[DensePoly]) -> SchmidtVerdict:
    p = polys[0].p
    return SchmidtVerdict(
        wronskian_zero=wronskian(polys).is_zero(),
        fp_independent=rank_independence(polys),
        degrees_below_p=all(f.degree < p for f in polys),
    )


# --------------------------------------------------------------------------

@dataclass(frozen=True)
class Lemma1Report:
    t: int
    A: int
    Bs: tuple[int, ...]
    calB: int
    degree_ok: bool
    ord_t_lemma_ok: bool
    ord_t_proof_ok: bool
    wronskian_nonzero: bool
    r_divides_w: bool
    deg_w: int
    deg_r: int
    deg_quotient_ok: bool
    products_independent: bool
    full_products_independent: bool | None

    @property
    def hypotheses_ok(self) -> bool:
        return self.degree_ok and self.ord_t_lemma_ok and self.ord_t_proof_ok

    @property
    def conclusions_ok(self) -> bool:
        return (self.wronskian_nonzero and self.r_divides_w and self.deg_quotient_ok
                and self.products_independent and self.full_products_independent is not False)

    def as_dict(self) -> dict:
        d = {k: getattr(self, k) for k in self.__dataclass_fields__}
        d['Bs'] = list(self.Bs)
        d['hypotheses_ok'] = self.hypotheses_ok
        d['conclusions_ok'] = self.conclusions_ok
        return d


def h_basis(A: int, count: int, j: int) -> list[int]:
    """Exponent set of H_j: range(A) cut into ``count`` contiguous blocks.

    When A < count some blocks are empty, and H_j falls back to x^(j mod A).
    """
    block = [a for a in range(A) if a * count // A == j]
    return block or [j % A]


def lemma1_pipeline(family: Sequence[DensePoly], t: int, A: int, Bs: Sequence[int],
                    f_next: DensePoly | None = None, B_next: int | None = None) -> Lemma1Report:
    """Check the Wronskian argument for the family f_1..f_{n-1}.

    The Wronskian is taken of Q_b = H_b prod_i f_i^(b_i t) over all b with
    b_i < B_i.  ``f_next`` is the polynomial f_n the induction step adds;
    its degree enters the (ord-t) condition, and when ``B_next`` is also
    given the full product family with f_n is tested for independence too.
    """
    if len(family) != len(Bs) or not family:
        raise ValueError('one B_i per polynomial required')
    ctx, p = family[0].ctx, family[0].p
    calB = math.prod(Bs)
    if calB > MAX_WRONSKIAN:
        raise FamilyTooLarge(f'calB = {calB} exceeds {MAX_WRONSKIAN}')
    m = [f.degree for f in family]
    M_prev = sum(m)
    m_next = f_next.degree if f_next is not None else max(m)
    degree_ok = A - 1 + (sum(b * mi for b, mi in zip(Bs, m)) - M_prev) * t < p
    ord_t_lemma_ok = 2 * t > 2 * A * calB + (M_prev + m_next) * calB * calB
    ord_t_proof_ok = 2 * t >= 2 * A * calB + M_prev * calB * calB + 2 * calB

    pw = [[f ** (b * t) for b in range(B)] for f, B in zip(family, Bs)]
    tuples = list(itertools.product(*(range(B) for B in Bs)))
    Qs = []
    for j, b in enumerate(tuples):
        H = DensePoly(ctx, [1 if a in h_basis(A, calB, j) else 0 for a in range(A)])
        Q = H
        for i, bi in enumerate(b):
            Q = Q * pw[i][bi]
        Qs.append(Q)
    W = wronskian(Qs)
    R = DensePoly.one(ctx)
    for b in tuples:
        for f, bi in zip(family, b):
            R = R * f ** max(bi * t - calB + 1, 0)
    quot, rem = poly_divrem(W, R)
    r_divides = rem.is_zero()
    deg_quot = quot.degree if r_divides else W.degree - R.degree
    deg_quotient_ok = 2 * deg_quot <= 2 * A * calB + M_prev * calB * calB

    x = DensePoly.x(ctx)
    base = [x**a * math.prod((pw[i][bi] for i, bi in enumerate(b)), start=DensePoly.one(ctx))
            for b in tuples for a in range(A)]
    products_independent = rank_independence(base)
    full = None
    if f_next is not None and B_next is not None:
        fnt = f_next**t
        full = rank_independence([q * fnt**c for c in range(B_next) for q in base])
    return Lemma1Report(t, A, tuple(Bs), calB, degree_ok, ord_t_lemma_ok, ord_t_proof_ok,
                        not W.is_zero(), r_divides, W.degree, R.degree, deg_quotient_ok,
                        products_independent, full)
