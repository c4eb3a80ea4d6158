"""Auxiliary polynomial construction for the set M = {x : f_i(x) in g_i Gamma}.

Pipeline:

1. ``compute_params`` picks B_i = floor(B / m_i) with
   B = (m_1...m_n)^(1/n) t^(1/(2n)), A = prod B_i, D = floor(A / M_n).
2. ``pk_recurrence`` produces P_{k,a,b} with
   (prod f_i)^k d^k/dx^k (x^a prod f_i^(b_i t)) = prod f_i^(b_i t) * P_{k,a,b}.
3. ``build_linear_system`` asks that sum_{a,b} lam_{a,b} gamma_b P_{k,a,b} vanish
   identically for every k < D, where gamma_b = prod g_i^(b_i t).
4. ``solve_nullspace`` returns a deterministic nonzero kernel vector.
5. ``assemble_psi`` expands Psi = sum lam_{a,b} x^a prod f_i^(b_i t).
6. ``verify_certificate`` measures the vanishing order of Psi at every x in M'
   by synthetic division, independently of steps 2-5.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .bounds import integer_root
from .errors import DegenerateParams, DegreeOverflow, TrivialKernel, ZeroPsi
from .ffield import CosetSpec, FieldCtx
from .polyring import DensePoly, _trim, formal_derivative, mul_lists, multiplicity_at, poly_divrem, poly_gcd


@dataclass(frozen=True)
class PolySystem:
    """The polynomials f_1..f_n, stored with nondecreasing degrees.

    ``original`` keeps the caller's order; ``order[k]`` is the original
    index of ``polys[k]``.
    """

    ctx: FieldCtx
    polys: tuple[DensePoly, ...]
    original: tuple[DensePoly, ...]
    order: tuple[int, ...]

    @classmethod
    def from_polys(cls, polys: Sequence[DensePoly]) -> 'PolySystem':
        if len(polys) < 2:
            raise ValueError('need at least two polynomials')
        ctx = polys[0].ctx
        for f in polys:
            if f.ctx.p != ctx.p:
                raise ValueError('polynomials over different fields')
            if f.degree < 1:
                raise ValueError('every polynomial must have degree >= 1')
        order = tuple(sorted(range(len(polys)), key=lambda i: polys[i].degree))
        return cls(ctx, tuple(polys[i] for i in order), tuple(polys), order)

    @property
    def n(self) -> int:
        return len(self.polys)

    @property
    def degrees(self) -> tuple[int, ...]:
        return tuple(f.degree for f in self.polys)

    @property
    def M_partial(self) -> tuple[int, ...]:
        return tuple(itertools.accumulate(self.degrees))

    @property
    def M_n(self) -> int:
        return sum(self.degrees)

    def reorder(self, items: Sequence) -> list:
        """Permute a per-polynomial sequence from the caller's order to the stored one."""
        return [items[i] for i in self.order]

    def value_product(self, x: int) -> int:
        p = self.ctx.p
        return x * math.prod(f(x) for f in self.polys) % p


# --------------------------------------------------------------------------
# admissibility

@dataclass(frozen=True)
class AdmissibilityReport:
    private_root: tuple[bool, ...]
    witnesses: tuple[DensePoly | None, ...]
    nonzero_at_zero: tuple[bool, ...]

    @property
    def admissible(self) -> bool:
        return all(self.private_root) and all(self.nonzero_at_zero)

    def reasons(self) -> list[str]:
        out = []
        for i, ok in enumerate(self.nonzero_at_zero):
            if not ok:
                out.append(f'f_{i + 1}(0)=0')
        for i, ok in enumerate(self.private_root):
            if not ok:
                out.append(f'f_{i + 1} has no root outside the other polynomials')
        return out


def private_part(f: DensePoly, others: Sequence[DensePoly]) -> DensePoly:
    """Strip from f every factor it shares with the product of ``others``."""
    g = DensePoly.one(f.ctx)
    for o in others:
        g = g * o
    h = f
    while True:
        d = poly_gcd(h, g)
        if d.degree < 1:
            return h.monic()
        h = poly_divrem(h, d)[0]


def check_admissible(polys: Sequence[DensePoly]) -> AdmissibilityReport:
    """Admissibility of f_1..f_n, reported in the order given.

    f_i has a private root (over the algebraic closure) iff gcd-peeling
    against the other polynomials leaves a nonconstant factor.
    """
    if isinstance(polys, PolySystem):
        polys = polys.original
    flags, wits, nz = [], [], []
    for i, f in enumerate(polys):
        h = private_part(f, [g for j, g in enumerate(polys) if j != i])
        flags.append(h.degree >= 1)
        wits.append(h if h.degree >= 1 else None)
        nz.append(f(0) != 0)
    return AdmissibilityReport(tuple(flags), tuple(wits), tuple(nz))


# --------------------------------------------------------------------------
# parameters

@dataclass(frozen=True)
class StepanovParams:
    n: int
    m: tuple[int, ...]
    t: int
    p: int
    M_n: int
    B_pow: int              # B^(2n) = (prod m)^2 t, the exact description of the real B
    Bs: tuple[int, ...]
    A: int
    D: int
    cond_var_ok: bool       # A D + M_n D^2 / 2 < A prod B_i
    degree_ok: bool         # A - 1 + (sum_{i<n} B_i m_i - M_{n-1}) t < p
    psi_degree_bound: int   # A - 1 + sum_i (B_i - 1) m_i t
    psi_degree_ok: bool
    ord_t_lemma_ok: bool    # t > A calB_{n-1} + M_n calB_{n-1}^2 / 2
    ord_t_proof_ok: bool    # t >= A calB_{n-1} + M_{n-1} calB_{n-1}^2 / 2 + calB_{n-1}
    gamma_ok: bool          # m_n / B < 1/n

    @property
    def calB(self) -> tuple[int, ...]:
        """Prefix products calB_k = B_1 ... B_k (calB_0 = 1)."""
        return tuple(itertools.accumulate(self.Bs, lambda x, y: x * y, initial=1))

    @property
    def ord_t_ok(self) -> bool:
        return self.ord_t_lemma_ok and self.ord_t_proof_ok

    @property
    def unknowns(self) -> int:
        return self.A * math.prod(self.Bs)

    @property
    def hypotheses_ok(self) -> bool:
        return (self.cond_var_ok and self.degree_ok and self.psi_degree_ok
                and self.ord_t_ok and 1 <= self.D < self.p)

    def as_dict(self) -> dict:
        return {
            'n': self.n, 'm': list(self.m), 't': self.t, 'p': self.p, 'M_n': self.M_n,
            'B_pow_2n': self.B_pow, 'B': list(self.Bs), 'A': self.A, 'D': self.D,
            'calB': list(self.calB), 'unknowns': self.unknowns,
            'cond_var_ok': self.cond_var_ok, 'degree_ok': self.degree_ok,
            'psi_degree_bound': self.psi_degree_bound, 'psi_degree_ok': self.psi_degree_ok,
            'ord_t_lemma_ok': self.ord_t_lemma_ok, 'ord_t_proof_ok': self.ord_t_proof_ok,
            'gamma_ok': self.gamma_ok,
        }


def compute_params(sys: PolySystem | Sequence[int], t: int, p: int | None = None) -> StepanovParams:
    """Parameters A, B_i, D for subgroup order t and the condition flags.

    ``sys`` may also be a plain degree tuple, in which case p must be given.
    """
    if isinstance(sys, PolySystem):
        m = sys.degrees
        p = sys.ctx.p if p is None else p
    else:
        m = tuple(sorted(sys))
        if p is None:
            raise ValueError('p is required when only degrees are given')
    if t < 2:
        raise ValueError('t must be >= 2')
    n = len(m)
    prod_m = math.prod(m)
    B_pow = prod_m**2 * t
    # B_i = floor(B / m_i) = floor((B^(2n) / m_i^(2n))^(1/(2n)))
    Bs = tuple(integer_root(B_pow // mi ** (2 * n), 2 * n) for mi in m)
    M_n = sum(m)
    A = math.prod(Bs)
    D = A // M_n
    if min(Bs) == 0 or D == 0:
        raise DegenerateParams(f't={t} too small for degrees {m}: B={Bs}, A={A}, D={D}')
    prodB = math.prod(Bs)
    cond_var_ok = 2 * A * D + M_n * D * D < 2 * A * prodB
    M_prev = sum(m[:-1])
    degree_ok = A - 1 + (sum(b * mi for b, mi in zip(Bs[:-1], m[:-1])) - M_prev) * t < p
    psi_bound = A - 1 + sum((b - 1) * mi for b, mi in zip(Bs, m)) * t
    cb = math.prod(Bs[:-1])
    ord_t_lemma_ok = 2 * t > 2 * A * cb + M_n * cb * cb
    ord_t_proof_ok = 2 * t >= 2 * A * cb + M_prev * cb * cb + 2 * cb
    gamma_ok = (n * m[-1]) ** (2 * n) < B_pow
    return StepanovParams(n, m, t, p, M_n, B_pow, Bs, A, D, cond_var_ok, degree_ok,
                          psi_bound, psi_bound < p, ord_t_lemma_ok, ord_t_proof_ok, gamma_ok)


# --------------------------------------------------------------------------
# the derivative recurrence

def _deriv_list(c: Sequence[int], p: int) -> list[int]:
    return _trim([j * c[j] % p for j in range(1, len(c))])


def _add_lists(u: Sequence[int], v: Sequence[int], p: int) -> list[int]:
    if len(u) < len(v):
        u, v = v, u
    out = list(u)
    for i, x in enumerate(v):
        out[i] = (out[i] + x) % p
    return _trim(out)


class _RecurrenceData:
    """F = prod f_i, F', and T_b = sum_i b_i t f_i' prod_{j != i} f_j, as lists."""

    def __init__(self, polys: Sequence[DensePoly], t: int):
        p = polys[0].p
        self.p = p
        self.t = t
        F = DensePoly.one(polys[0].ctx)
        for f in polys:
            F = F * f
        self.F = F.coeffs
        self.dF = formal_derivative(F).coeffs
        # terms[i] = f_i' prod_{j != i} f_j
        self.terms = []
        for i, fi in enumerate(polys):
            acc = formal_derivative(fi)
            for j, fj in enumerate(polys):
                if j != i:
                    acc = acc * fj
            self.terms.append(acc.coeffs)
        self._cache: dict[tuple[int, ...], list[int]] = {}

    def T(self, b: Sequence[int]) -> list[int]:
        key = tuple(b)
        if key not in self._cache:
            acc: list[int] = []
            for bi, term in zip(b, self.terms):
                c = bi * self.t % self.p
                if c:
                    acc = _add_lists(acc, [c * v % self.p for v in term], self.p)
            self._cache[key] = acc
        return self._cache[key]

    def run(self, a: int, b: Sequence[int], k_max: int) -> list[list[int]]:
        p = self.p
        Tb = self.T(b)
        P = [0] * a + [1]
        out = [P]
        for k in range(k_max):
            # P_{k+1} = F P_k' + P_k (T_b - k F')
            mult = _add_lists(Tb, [(-k) * v % p for v in self.dF], p)
            P = _add_lists(mul_lists(self.F, _deriv_list(P, p), p), mul_lists(P, mult, p), p)
            out.append(P)
        return out


def pk_recurrence(polys: PolySystem | Sequence[DensePoly], a: int, b: Sequence[int], t: int,
                  k_max: int) -> list[DensePoly]:
    """P_{0..k_max, a, b}; requires k_max < p."""
    if isinstance(polys, PolySystem):
        polys = polys.polys
    ctx = polys[0].ctx
    if k_max >= ctx.p:
        raise ValueError('k_max must stay below the characteristic')
    if len(b) != len(polys):
        raise ValueError('b must have one entry per polynomial')
    data = _RecurrenceData(polys, t)
    return [DensePoly._raw(ctx, c) for c in data.run(a, b, k_max)]


# --------------------------------------------------------------------------
# the homogeneous system

@dataclass
class LinearSystem:
    p: int
    n_unknowns: int
    columns: list[tuple[int, tuple[int, ...]]]     # column -> (a, b)
    row_labels: list[tuple[int, int]]              # row -> (k, coefficient index)
    rows: list[list[int]]

    @property
    def n_rows(self) -> int:
        return len(self.rows)


def column_index(params: StepanovParams) -> list[tuple[int, tuple[int, ...]]]:
    """Unknown ordering: b in lexicographic order, and a fastest within each b."""
    return [(a, b) for b in itertools.product(*(range(B) for B in params.Bs)) for a in range(params.A)]


def build_linear_system(sys: PolySystem, params: StepanovParams, cosets: Sequence[CosetSpec | int]) -> LinearSystem:
    """Equations 'coefficient j of sum lam_{a,b} gamma_b P_{k,a,b} is 0' for k < D.

    ``cosets`` follow the stored (degree-sorted) order of ``sys``; entries may
    be CosetSpec objects or bare representatives g_i.
    """
    p, t, A, D = sys.ctx.p, params.t, params.A, params.D
    if len(cosets) != sys.n:
        raise ValueError('need one coset per polynomial')
    if D >= p:
        raise ValueError('D must stay below the characteristic')
    gs = [c.g if isinstance(c, CosetSpec) else c % p for c in cosets]
    gt = [pow(g, t, p) for g in gs]
    cols = column_index(params)
    data = _RecurrenceData(sys.polys, t)
    widths = [A + (params.M_n - 1) * k for k in range(D)]
    offsets = list(itertools.accumulate(widths, initial=0))
    n_rows = offsets[-1]
    mat = [[0] * len(cols) for _ in range(n_rows)]
    for col, (a, b) in enumerate(cols):
        gamma = math.prod(pow(g, bi, p) for g, bi in zip(gt, b)) % p
        for k, P in enumerate(data.run(a, b, D - 1)):
            if len(P) > widths[k]:
                raise AssertionError(f'degree law violated: deg P_{k} = {len(P) - 1}')
            base = offsets[k]
            for j, v in enumerate(P):
                if v:
                    mat[base + j][col] = v * gamma % p
    labels = [(k, j) for k in range(D) for j in range(widths[k])]
    keep = [i for i, row in enumerate(mat) if any(row)]
    return LinearSystem(p, len(cols), cols, [labels[i] for i in keep], [mat[i] for i in keep])


def _first_free_py(rows: list[list[int]], width: int, p: int) -> tuple[int, list[tuple[int, int]], list[list[int]]]:
    """Gauss-Jordan on columns [0, width) until the first column without a pivot."""
    m = [list(r[:width]) for r in rows]
    pivots: list[tuple[int, int]] = []
    r = 0
    for c in range(width):
        piv = next((i for i in range(r, len(m)) if m[i][c] % p), None)
        if piv is None:
            return c, pivots, m
        m[r], m[piv] = m[piv], m[r]
        inv = pow(m[r][c], -1, p)
        m[r] = [v * inv % p for v in m[r]]
        pr = m[r]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [(x - f * y) % p for x, y in zip(m[i], pr)]
        pivots.append((r, c))
        r += 1
    return width, pivots, m


def _first_free_np(rows: list[list[int]], width: int, p: int) -> tuple[int, list[tuple[int, int]], np.ndarray]:
    m = np.array([r[:width] for r in rows], dtype=np.int64).reshape(len(rows), width) % p
    pivots: list[tuple[int, int]] = []
    r = 0
    for c in range(width):
        nz = np.flatnonzero(m[r:, c]) if r < len(m) else np.array([], dtype=np.int64)
        if len(nz) == 0:
            return c, pivots, m
        piv = r + int(nz[0])
        if piv != r:
            m[[r, piv]] = m[[piv, r]]
        inv = pow(int(m[r, c]), -1, p)
        m[r, c:] = m[r, c:] * inv % p
        factors = m[:, c].copy()
        factors[r] = 0
        hit = np.flatnonzero(factors)
        if len(hit):
            m[hit, c:] = (m[hit, c:] - factors[hit, None] * m[r, c:]) % p
        pivots.append((r, c))
        r += 1
    return width, pivots, m


def solve_nullspace(ls: LinearSystem | Sequence[Sequence[int]], p: int | None = None,
                    n_unknowns: int | None = None, *, backend: str = 'auto') -> tuple[int, ...]:
    """Deterministic kernel vector of a homogeneous system over F_p.

    The first non-pivot column is set to 1, all later columns to 0, and the
    pivot variables follow by back-substitution.  Only the leading
    rank + 1 columns are ever reduced, which is enough to find that column.
    """
    if isinstance(ls, LinearSystem):
        rows, p, n_unknowns = ls.rows, ls.p, ls.n_unknowns
    else:
        rows = [list(r) for r in ls]
        if p is None:
            raise ValueError('p is required for a bare matrix')
        if n_unknowns is None:
            n_unknowns = len(rows[0]) if rows else 0
    rows = [r for r in rows if any(v % p for v in r)]
    width = min(n_unknowns, len(rows) + 1)
    if backend == 'auto':
        backend = 'numpy' if (p - 1) ** 2 + p < 2**62 else 'python'
    if not rows:
        free, pivots, red = 0, [], None
    elif backend == 'numpy':
        free, pivots, red = _first_free_np(rows, width, p)
    else:
        free, pivots, red = _first_free_py(rows, width, p)
    if free >= n_unknowns:
        raise TrivialKernel('system has full column rank')
    x = [0] * n_unknowns
    x[free] = 1
    for r, c in pivots:
        x[c] = int(-red[r][free]) % p
    return tuple(x)


# --------------------------------------------------------------------------
# assembling Psi

def assemble_psi(sys: PolySystem, params: StepanovParams, lam: Sequence[int], t: int | None = None) -> DensePoly:
    """Psi = sum_{a,b} lam_{a,b} x^a prod_i f_i^(b_i t), expanded.

    Evaluated as nested Horner sums over b_1, ..., b_n so that only
    B_1...B_{n-1} products of two large polynomials are formed.
    """
    t = params.t if t is None else t
    ctx, p = sys.ctx, sys.ctx.p
    if params.psi_degree_bound >= p:
        raise DegreeOverflow(f'deg Psi may reach {params.psi_degree_bound} >= p = {p}')
    cols = column_index(params)
    if len(lam) != len(cols):
        raise ValueError('coefficient vector has the wrong length')
    H: dict[tuple[int, ...], list[int]] = {}
    for (a, b), v in zip(cols, lam):
        if v % p:
            h = H.setdefault(b, [0] * params.A)
            h[a] = v % p
    powers = []
    for f, B in zip(sys.polys, params.Bs):
        ft = f**t
        pw = [DensePoly.one(ctx)]
        for _ in range(1, B):
            pw.append(pw[-1] * ft)
        powers.append(pw)

    def nest(i: int, prefix: tuple[int, ...]) -> DensePoly:
        if i == sys.n:
            return DensePoly(ctx, H.get(prefix, ()))
        acc = DensePoly.zero(ctx)
        for bi in range(params.Bs[i]):
            sub = nest(i + 1, prefix + (bi,))
            if sub:
                acc = acc + powers[i][bi] * sub
        return acc

    return nest(0, ())


# --------------------------------------------------------------------------
# certificates

@dataclass
class PsiCertificate:
    params: StepanovParams
    columns: list[tuple[int, tuple[int, ...]]]
    lam_vector: tuple[int, ...]
    psi: DensePoly
    D: int
    per_root: dict[int, int] = field(default_factory=dict)

    @property
    def lam(self) -> dict[tuple[int, tuple[int, ...]], int]:
        return {ab: v for ab, v in zip(self.columns, self.lam_vector) if v}

    @property
    def deg_psi(self) -> int:
        return self.psi.degree


@dataclass(frozen=True)
class VerificationOutcome:
    multiplicities: dict[int, int]
    D: int
    deg_psi: int
    all_ge_D: bool
    sum_ok: bool
    degree_ok: bool
    implied_bound: Fraction     # 1 + M_n + deg Psi / D

    @property
    def passed(self) -> bool:
        return self.all_ge_D and self.sum_ok and self.degree_ok

    @property
    def implied_bound_int(self) -> int:
        return math.floor(self.implied_bound)


def verify_certificate(cert: PsiCertificate, M_prime: Sequence[int], sys: PolySystem) -> VerificationOutcome:
    """Check conditions 1) and 2) on a certificate by synthetic division only."""
    if cert.psi.is_zero():
        raise ZeroPsi('auxiliary polynomial vanishes identically')
    mults = {x: multiplicity_at(cert.psi, x) for x in M_prime}
    cert.per_root = dict(mults)
    deg = cert.psi.degree
    prm = cert.params
    return VerificationOutcome(
        multiplicities=mults,
        D=cert.D,
        deg_psi=deg,
        all_ge_D=all(v >= cert.D for v in mults.values()),
        sum_ok=sum(mults.values()) <= deg,
        degree_ok=deg <= prm.psi_degree_bound and deg < sys.ctx.p,
        implied_bound=1 + sys.M_n + Fraction(deg, cert.D),
    )


def construct_certificate(sys: PolySystem, t: int, cosets: Sequence[CosetSpec | int],
                          params: StepanovParams | None = None) -> PsiCertificate:
    """Run the whole construction (cosets in the stored order of ``sys``)."""
    params = compute_params(sys, t) if params is None else params
    ls = build_linear_system(sys, params, cosets)
    lam = solve_nullspace(ls)
    psi = assemble_psi(sys, params, lam, t)
    if psi.is_zero():
        raise ZeroPsi('kernel vector produced the zero polynomial')
    return PsiCertificate(params, ls.columns, lam, psi, params.D)
