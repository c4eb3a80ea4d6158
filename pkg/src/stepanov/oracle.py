"""Ground truth by exhaustive enumeration, and the single-instance verifier.

The scan evaluates every f_i on all of F_p and tests coset membership
against a lookup table of the subgroup.  ``enumerate_M_slow`` does the
same with ``in_coset`` one element at a time and serves as its check.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import bounds
from .auxpoly import (PolySystem, check_admissible, compute_params, construct_certificate,
                      verify_certificate)
from .errors import DegenerateParams, FieldTooLarge, StepanovError
from .ffield import CosetSpec, FieldCtx, coset, in_coset, subgroup_of_order
from .polyring import DensePoly

MAX_SCAN_P = 10**7
CHUNK = 10**5


@dataclass(frozen=True)
class EnumerationResult:
    M: tuple[int, ...]
    M_prime: tuple[int, ...]
    excluded: tuple[int, ...]


def _coset_table(c: CosetSpec) -> np.ndarray:
    p = c.p
    table = np.zeros(p, dtype=bool)
    if c.subgroup.elements is not None:
        table[np.asarray(c.members(), dtype=np.int64)] = True
    else:
        xs = np.arange(1, p, dtype=np.int64) * c.g_inv % p
        table[1:] = _powmod_np(xs, c.subgroup.t, p) == 1
    return table


def _powmod_np(xs: np.ndarray, e: int, p: int) -> np.ndarray:
    out = np.ones_like(xs)
    base = xs % p
    while e:
        if e & 1:
            out = out * base % p
        e >>= 1
        if e:
            base = base * base % p
    return out


def _eval_range(f: DensePoly, lo: int, hi: int) -> np.ndarray:
    p = f.p
    xs = np.arange(lo, hi, dtype=np.int64)
    acc = np.zeros(hi - lo, dtype=np.int64)
    for c in reversed(f.coeffs):
        acc = (acc * xs + c) % p
    return acc


def _scan(polys: Sequence[DensePoly], tables: Sequence[np.ndarray], lo: int, hi: int) -> list[int]:
    mask = np.ones(hi - lo, dtype=bool)
    for f, tab in zip(polys, tables):
        mask &= tab[_eval_range(f, lo, hi)]
    return (np.flatnonzero(mask) + lo).tolist()


def _split(M: list[int], polys: Sequence[DensePoly], p: int) -> EnumerationResult:
    prime, excluded = [], []
    for x in M:
        if x % p and all(f(x) for f in polys):
            prime.append(x)
        else:
            excluded.append(x)
    return EnumerationResult(tuple(M), tuple(prime), tuple(excluded))


def enumerate_M(polys: Sequence[DensePoly] | PolySystem, cosets: Sequence[CosetSpec],
                workers: int = 1) -> EnumerationResult:
    """M = {x in F_p : f_i(x) in g_i Gamma for all i} and its split into M', M \\ M'.

    ``cosets[i]`` belongs to ``polys[i]``; a PolySystem contributes its
    polynomials in the caller's original order.
    """
    if isinstance(polys, PolySystem):
        polys = polys.original
    if len(polys) != len(cosets):
        raise ValueError('one coset per polynomial required')
    p = polys[0].p
    if p > MAX_SCAN_P:
        raise FieldTooLarge(f'p = {p} exceeds the scan limit {MAX_SCAN_P}')
    tables = [_coset_table(c) for c in cosets]
    ranges = [(lo, min(lo + CHUNK, p)) for lo in range(0, p, CHUNK)]
    if workers > 1 and len(ranges) > 1:
        with ThreadPoolExecutor(workers) as pool:
            parts = list(pool.map(lambda r: _scan(polys, tables, *r), ranges))
    else:
        parts = [_scan(polys, tables, lo, hi) for lo, hi in ranges]
    M = sorted(x for part in parts for x in part)
    return _split(M, polys, p)


def enumerate_M_slow(polys: Sequence[DensePoly], cosets: Sequence[CosetSpec]) -> EnumerationResult:
    p = polys[0].p
    M = [x for x in range(p) if all(in_coset(f(x), c) for f, c in zip(polys, cosets))]
    return _split(M, polys, p)


def linear_map_polys(ctx: FieldCtx, shifts: Sequence[int]) -> list[DensePoly]:
    """x -> (x, x - mu_1, ..., x - mu_k)."""
    return [DensePoly.x(ctx)] + [DensePoly(ctx, (-mu, 1)) for mu in shifts]


def coset_intersection(ctx: FieldCtx, t: int, shifts: Sequence[int]) -> list[int]:
    """Gamma & (Gamma + mu_1) & ... & (Gamma + mu_k), scanning the members of Gamma."""
    p = ctx.p
    if p > MAX_SCAN_P:
        raise FieldTooLarge(f'p = {p} exceeds the scan limit {MAX_SCAN_P}')
    shifts = [mu % p for mu in shifts]
    if any(mu == 0 for mu in shifts):
        raise ValueError('shifts must be nonzero')
    if len(set(shifts)) != len(shifts):
        raise ValueError('shifts must be pairwise distinct')
    G = subgroup_of_order(ctx, t)
    members = G.element_set
    return sorted(x for x in G.elements if all((x - mu) % p in members for mu in shifts))


def coset_intersection_via_map(ctx: FieldCtx, t: int, shifts: Sequence[int]) -> list[int]:
    """The same set, computed as M for the linear map with every coset equal to Gamma."""
    G = subgroup_of_order(ctx, t)
    polys = linear_map_polys(ctx, shifts)
    return list(enumerate_M(polys, [coset(G, 1)] * len(polys)).M)


# --------------------------------------------------------------------------
# single-instance verification

PASSED, FAILED, SKIPPED = 'PASSED', 'FAILED', 'SKIPPED'


@dataclass
class InstanceConfig:
    p: int
    t: int
    polys: list[list[int]]
    cosets: list[int]
    seed: int | None = None
    enforce_window: bool = True

    @classmethod
    def from_dict(cls, d: dict) -> 'InstanceConfig':
        p = int(d['p'])
        polys = [[int(v) for v in s.split(',')] if isinstance(s, str) else [int(v) for v in s]
                 for s in d['polys']]
        cosets = [int(g) for g in d.get('cosets') or [1] * len(polys)]
        return cls(p, int(d['t']), polys, cosets, d.get('seed'), d.get('enforce_window', True))


@dataclass
class InstanceReport:
    p: int
    t: int
    polys: list[str]
    cosets: list[int]
    seed: int | None = None
    status: str = PASSED
    reason: str = ''
    n: int = 0
    m: list[int] = field(default_factory=list)
    M: list[int] = field(default_factory=list)
    M_prime: list[int] = field(default_factory=list)
    excluded: list[int] = field(default_factory=list)
    params: dict | None = None
    deg_psi: int | None = None
    D: int | None = None
    lambda_nonzero: int | None = None
    multiplicity_min: int | None = None
    est_bound: str | None = None
    thm2_lhs: int | None = None
    thm2_rhs: int | None = None
    thm2_margin: float | None = None
    window: dict | None = None
    checks: dict[str, bool] = field(default_factory=dict)

    @property
    def size_M(self) -> int:
        return len(self.M)

    def as_dict(self) -> dict:
        d = {k: getattr(self, k) for k in self.__dataclass_fields__}
        d['size_M'] = self.size_M
        return d

    def finish(self) -> 'InstanceReport':
        if self.status != SKIPPED:
            bad = [k for k, v in self.checks.items() if not v]
            self.status = FAILED if bad else PASSED
            if bad:
                msg = 'failed: ' + ', '.join(bad)
                self.reason = f'{self.reason}; {msg}' if self.reason else msg
        return self


def verify_instance(config: InstanceConfig | dict, workers: int = 1) -> InstanceReport:
    """Enumerate M, build and verify the certificate, compare with every bound."""
    if isinstance(config, dict):
        config = InstanceConfig.from_dict(config)
    ctx = FieldCtx(config.p)
    p, t = config.p, config.t
    polys = [DensePoly(ctx, c) for c in config.polys]
    rep = InstanceReport(p, t, [f.to_text() for f in polys], [g % p for g in config.cosets], config.seed)
    if len(polys) != len(config.cosets):
        raise ValueError('one coset representative per polynomial required')
    sys_ = PolySystem.from_polys(polys)
    rep.n, rep.m = sys_.n, list(sys_.degrees)

    adm = check_admissible(polys)
    if not adm.admissible:
        rep.status, rep.reason = SKIPPED, 'admissibility: ' + '; '.join(adm.reasons())
        return rep
    G = subgroup_of_order(ctx, t)
    cosets = [coset(G, g) for g in config.cosets]

    br = bounds.constants_remark1(sys_.degrees, sys_.n, t=t, p=p)
    rep.window = {'c1': br.c1, 'lower_ok': br.lower_ok, 'upper_ok': br.upper_ok,
                  'lhs': br.window_lhs, 'rhs': br.window_rhs}
    if config.enforce_window and not br.window_ok:
        rep.status, rep.reason = SKIPPED, 'window: ' + ('t <= C_1' if not br.lower_ok else 't >= C_2 p^(1-1/(2n+1))')
        return rep
    try:
        params = compute_params(sys_, t)
    except DegenerateParams as exc:
        rep.status, rep.reason = SKIPPED, f'params: {exc}'
        return rep
    rep.params = params.as_dict()
    rep.D = params.D
    if config.enforce_window:
        rep.checks['hypotheses'] = params.hypotheses_ok
    elif not (params.hypotheses_ok or (params.cond_var_ok and params.psi_degree_ok and params.D < p)):
        rep.status, rep.reason = SKIPPED, 'hypotheses: construction conditions fail'
        return rep

    enum = enumerate_M(polys, cosets, workers=workers)
    rep.M, rep.M_prime, rep.excluded = list(enum.M), list(enum.M_prime), list(enum.excluded)
    rep.checks['excluded_le_1_plus_Mn'] = len(enum.excluded) <= 1 + sys_.M_n

    try:
        cert = construct_certificate(sys_, t, sys_.reorder(cosets), params)
    except StepanovError as exc:
        rep.checks['construction'] = False
        rep.reason = f'construction: {type(exc).__name__}: {exc}'
        return rep.finish()
    rep.checks['construction'] = True
    rep.lambda_nonzero = len(cert.lam)
    rep.deg_psi = cert.deg_psi
    out = verify_certificate(cert, enum.M_prime, sys_)
    rep.multiplicity_min = min(out.multiplicities.values(), default=None)
    rep.est_bound = str(out.implied_bound)
    rep.checks['lambda_nonzero'] = rep.lambda_nonzero > 0
    rep.checks['psi_nonzero'] = not cert.psi.is_zero()
    rep.checks['multiplicity_ge_D'] = out.all_ge_D
    rep.checks['sum_multiplicities_le_deg'] = out.sum_ok
    rep.checks['deg_psi_bound'] = out.degree_ok
    rep.checks['est_bound'] = len(enum.M) <= out.implied_bound
    rep.checks['M_prime_le_deg_over_D'] = len(enum.M_prime) * cert.D <= cert.deg_psi

    thm = bounds.constants_remark1(sys_.degrees, sys_.n, t=t, p=p, size=len(enum.M))
    rep.thm2_lhs, rep.thm2_rhs, rep.thm2_margin = thm.bound_lhs, thm.bound_rhs, thm.margin
    if br.window_ok:
        rep.checks['theorem2_bound'] = bool(thm.bound_holds)
    return rep.finish()


def est_bound_fraction(report: InstanceReport) -> Fraction | None:
    return None if report.est_bound is None else Fraction(report.est_bound)

