"""Acceptance gate: one test per criterion, each recording a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v``; the verdicts are printed in
the "acceptance criteria" section of the terminal summary.
"""

import cmath
import math
import random
import time

import numpy as np
import pytest

from stepanov import bounds
from stepanov.auxpoly import pk_recurrence
from stepanov.complexroots import verify_theorem3_instance
from stepanov.ffield import FieldCtx, divisors, is_prime
from stepanov.independence import lemma1_pipeline, rank_independence, schmidt_consequence_check, wronskian
from stepanov.oracle import PASSED, coset_intersection
from stepanov.polyring import DensePoly
from stepanov.sweep import run_sweep

SWEEP_SEED = 20240601
SWEEP_SAMPLES = 60
SWEEP_SPEC = {'p_range': [500, 50000], 't_rule': 'window', 'poly_degrees': [1, 1],
              'samples': SWEEP_SAMPLES}


@pytest.fixture(scope='module')
def sweep_rows(tmp_path_factory):
    out = tmp_path_factory.mktemp('sweep') / 'rows.jsonl'
    t0 = time.perf_counter()
    rows = run_sweep(SWEEP_SEED, SWEEP_SPEC, out)
    return rows, time.perf_counter() - t0


def random_poly(rng, ctx, degree):
    p = ctx.p
    return DensePoly(ctx, [rng.randrange(1, p)] + [rng.randrange(p) for _ in range(degree - 1)]
                     + [rng.randrange(1, p)])


# ---------------------------------------------------------------------------

def test_criterion_1_certificate_suite(sweep_rows, record):
    rows, elapsed = sweep_rows
    # below p = 50000 only linear pairs have in-window t: any m_n >= 2 gives C_1 >= 4096
    # above the largest admissible t
    higher = [(m1, m2) for m1 in range(1, 4) for m2 in range(m1, 4) if (m1, m2) != (1, 1)]
    no_window = all(bounds.max_window_t(49999, m, 2) <= bounds.c1_constant(m, 2) for m in higher)
    in_window = [r for r in rows if r['window'] and r['window']['lower_ok'] and r['window']['upper_ok']]
    passed = [r for r in in_window if r['status'] == PASSED]
    needed = {'lambda_nonzero', 'psi_nonzero', 'multiplicity_ge_D', 'sum_multiplicities_le_deg',
              'deg_psi_bound', 'est_bound', 'hypotheses'}
    complete = all(needed <= set(r['checks']) for r in in_window)
    ok = (len(in_window) >= 50 and len(passed) == len(in_window) and complete
          and elapsed <= 300 and no_window)
    sizes = [r['size_M'] for r in in_window]
    record('1', ok,
           f'{len(passed)}/{len(in_window)} in-window instances pass, {elapsed:.1f}s (limit 300s)',
           f'|M| range {min(sizes)}..{max(sizes)}, t range {min(r["t"] for r in rows)}..{max(r["t"] for r in rows)}',
           f'deg f_i >= 2 has no in-window t for p <= 50000: {no_window}')
    assert ok


def test_criterion_2_theorem2_bound(sweep_rows, record):
    rows, _ = sweep_rows
    in_window = [r for r in rows if r['window'] and r['window']['lower_ok'] and r['window']['upper_ok']]
    holds = [r for r in in_window if r['checks'].get('theorem2_bound') is True]
    margins = [r['thm2_margin'] for r in in_window if r['thm2_margin'] is not None]
    finite = [m for m in margins if math.isfinite(m)]
    ok = len(in_window) > 0 and len(holds) == len(in_window) and len(margins) == len(in_window)
    record('2', ok, f'bound holds on {len(holds)}/{len(in_window)} in-window instances',
           f'margin rhs/lhs (1/(2n)-th root): min {min(finite):.2f}, max {max(finite):.2f}, '
           f'{len(margins) - len(finite)} with |M| = 0')
    assert ok


def _kth_derivative(f, k):
    for _ in range(k):
        f = f.derivative()
    return f


def test_criterion_3_recurrence_vs_expansion(record):
    t0 = time.perf_counter()
    trials = mismatches = 0
    for p in (31, 97):
        ctx = FieldCtx(p)
        rng = random.Random(1000 + p)
        ts = [t for t in divisors(p - 1) if t >= 2]
        for _ in range(110):
            t = rng.choice(ts)
            polys = [random_poly(rng, ctx, rng.randint(1, 3)) for _ in range(2)]
            a = rng.randrange(5)
            b = tuple(rng.randrange(3) for _ in range(2))
            k_max = rng.randint(0, 3)
            G, F = DensePoly.one(ctx), DensePoly.one(ctx)
            for f, bi in zip(polys, b):
                G = G * f ** (bi * t)
                F = F * f
            psi = DensePoly.monomial(ctx, a) * G
            Ps = pk_recurrence(polys, a, b, t, k_max)
            for k, Pk in enumerate(Ps):
                if F**k * _kth_derivative(psi, k) != Pk * G:
                    mismatches += 1
            trials += 1
    elapsed = time.perf_counter() - t0
    ok = trials >= 200 and mismatches == 0 and elapsed <= 10
    record('3', ok, f'{trials} trials over p in {{31, 97}}, {mismatches} mismatches, {elapsed:.2f}s (limit 10s)')
    assert ok


def test_criterion_4_garcia_voloch(record):
    t0 = time.perf_counter()
    rng = random.Random(44)
    samples, bad, biggest = 0, [], 0.0
    while samples < 220:
        p = rng.randrange(1000, 10**6)
        if not is_prime(p):
            continue
        ts = [t for t in divisors(p - 1) if 2 <= t < p - 1 and bounds.gv_check(t, 0, p)[0]]
        t = rng.choice(ts)
        mu = rng.randrange(1, p)
        size = len(coset_intersection(FieldCtx(p), t, [mu]))
        hyp, holds = bounds.gv_check(t, size, p)
        assert hyp
        samples += 1
        biggest = max(biggest, size**3 / (64 * t * t))
        if not holds:
            bad.append((p, t, mu, size))
    elapsed = time.perf_counter() - t0
    ok = not bad and elapsed <= 120
    record('4', ok, f'size^3 <= 64 t^2 on {samples - len(bad)}/{samples} samples, {elapsed:.1f}s (limit 120s)',
           f'largest size^3/(64 t^2) = {biggest:.4f}', *[f'violation: p,t,mu,size = {b}' for b in bad])
    assert ok


def test_criterion_5_lemma1_grid(record):
    t0 = time.perf_counter()
    cells = failures = 0
    lines = []
    for p in (1021, 7919):
        ctx = FieldCtx(p)
        f_next = DensePoly(ctx, (-2, 1))
        for f1 in (DensePoly(ctx, (-1, 1)), DensePoly(ctx, (1, 1, 1))):
            for t in range(2, 61):
                for A in range(1, 9):
                    for B1 in range(1, 5):
                        rep = lemma1_pipeline([f1], t, A, [B1], f_next=f_next, B_next=2)
                        if not rep.hypotheses_ok:
                            continue
                        cells += 1
                        if not rep.conclusions_ok:
                            failures += 1
                            lines.append(f'failure: p={p} f1={f1.to_text()} t={t} A={A} B1={B1}')
    elapsed = time.perf_counter() - t0
    ok = cells > 0 and failures == 0
    record('5', ok, f'{cells - failures}/{cells} grid cells satisfying the hypotheses pass '
                    f'(calB <= 4, t in 2..60, A in 1..8), {elapsed:.1f}s', *lines)
    assert ok


def test_criterion_6_wronskian_schmidt(record):
    rng = random.Random(66)
    indep_ok = dep_ok = 0
    n_indep = n_dep = 0
    while n_indep < 100:
        p = rng.choice([31, 97])
        ctx = FieldCtx(p)
        fam = [DensePoly(ctx, [rng.randrange(p) for _ in range(rng.randint(1, rng.choice([6, p])))])
               for _ in range(rng.randint(1, 5))]
        if not rank_independence(fam):
            continue
        n_indep += 1
        v = schmidt_consequence_check(fam)
        indep_ok += (not v.wronskian_zero) and not v.violation
    while n_dep < 100:
        p = rng.choice([31, 97])
        ctx = FieldCtx(p)
        base = [DensePoly(ctx, [rng.randrange(p) for _ in range(rng.randint(1, 8))])
                for _ in range(rng.randint(1, 4))]
        combo = DensePoly.zero(ctx)
        for f in base:
            combo = combo + f.scale(rng.randrange(p))
        fam = base + [combo]
        rng.shuffle(fam)
        n_dep += 1
        dep_ok += wronskian(fam).is_zero()
    F5 = FieldCtx(5)
    v = schmidt_consequence_check([DensePoly.one(F5), DensePoly.monomial(F5, 5)])
    frob_ok = v.wronskian_zero and v.fp_independent and not v.degrees_below_p and not v.violation
    ok = indep_ok == 100 and dep_ok == 100 and frob_ok
    record('6', ok, f'independent W != 0: {indep_ok}/100, dependent W = 0: {dep_ok}/100',
           f'{{1, x^5}} over F_5: W = 0, independent, degrees_below_p = {v.degrees_below_p}')
    assert ok


def _two_point_line(z0, z1, k, l, t):
    """Linear c x + d with values zeta^k at z0 and zeta^l at z1."""
    u, v = cmath.exp(2j * math.pi * k / t), cmath.exp(2j * math.pi * l / t)
    c = (u - v) / (z0 - z1)
    return [u - c * z0, c]


def test_criterion_7_theorem3(record):
    rng = random.Random(77)
    reports, lines = [], []
    missed = 0
    for i in range(50):
        t = rng.randint(17, 64)
        kind = i % 3
        z0 = complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
        z1 = complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
        if kind == 0:
            polys = [[-complex(rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5)), 1] for _ in range(2)]
            planted = []
        elif kind == 1:
            polys = [[-(z0 - cmath.exp(2j * math.pi * k / t)), 1] for k in rng.sample(range(t), 2)]
            planted = [z0]
        else:
            # the root of such a line depends only on l - k mod t; equal
            # differences would give two proportional, inadmissible lines
            while True:
                k1, l1, k2, l2 = rng.sample(range(t), 4)
                if (l1 - k1) % t != (l2 - k2) % t:
                    break
            polys = [_two_point_line(z0, z1, k1, l1, t), _two_point_line(z0, z1, k2, l2, t)]
            planted = [z0, z1]
        rep = verify_theorem3_instance(polys, t, [1, 1])
        reports.append(rep)
        found = all(any(abs(z - w) < 1e-7 for z in rep.members) for w in planted)
        missed += not found
        if rep.status != PASSED or not found:
            lines.append(f'instance {i}: t={t} status={rep.status} {rep.reason} |M|={rep.size_M}')
    linear = [r for r in reports if all(d == 1 for d in r.m)]
    holds = sum(r.bound_holds is True for r in reports)
    small = all(r.size_M <= 2 for r in linear)
    worst = max(r.max_residual for r in reports)
    ok = (holds == len(reports) and small and worst <= 1e-6 and missed == 0
          and all(r.status == PASSED for r in reports))
    record('7', ok, f'bound holds {holds}/{len(reports)}, linear |M| <= 2 on {len(linear)} instances: {small}, '
                    f'max residual {worst:.2e}, planted points missed {missed}',
           f'|M| counts: {[sum(r.size_M == k for r in reports) for k in range(3)]} for |M| = 0, 1, 2', *lines)
    assert ok


def _ld_window(t, p, m, n):
    ld = np.longdouble
    return ld(t) ** (2 * n + 1) * ld(n + 1) ** (2 * n) * ld(math.prod(m)) ** 2, ld(p) ** (2 * n)


def _ld_bound(s, t, m, n):
    ld = np.longdouble
    coeff = 4 * (n + 1) * sum(m)
    return ld(s) ** (2 * n), ld(coeff) ** (2 * n) * ld(math.prod(m)) ** 2 * ld(t) ** (n + 1)


def _near_tie(lhs, rhs):
    # within what 80-bit evaluation can resolve (64-bit significand, a handful of roundings)
    return abs(lhs - rhs) * 2**56 <= max(lhs, rhs)


def test_criterion_8_exact_vs_longdouble(record):
    assert np.finfo(np.longdouble).nmant >= 63, '80-bit extended precision unavailable'
    rng = random.Random(88)
    primes = []
    while len(primes) < 200:
        q = rng.randrange(500, 10**6)
        if is_prime(q):
            primes.append(q)
    points = []
    for k in range(1, 11):
        # exact equality for the bound: s^4 = 24^4 (k^4)^3 at s = 24 k^3
        points.append((rng.choice(primes), k**4, (1, 1), 2, 24 * k**3))
    while len(points) < 10_000:
        n = rng.choice([2, 3])
        m = tuple(sorted(rng.randint(1, 3) for _ in range(n)))
        p = rng.choice(primes)
        tb = bounds.max_window_t(p, m, n)
        t = max(1, tb + rng.randint(-2, 2)) if rng.random() < 0.5 else rng.randint(1, p)
        lhs, rhs = bounds.bound_sides(0, t, m, n)
        sb = bounds.integer_root(rhs, 2 * n)
        s = max(0, sb + rng.randint(-1, 2)) if rng.random() < 0.5 else rng.randint(0, 2 * sb + 2)
        points.append((p, t, m, n, s))
    disagree, ties = [], []
    for p, t, m, n, s in points:
        for kind, exact_sides, float_sides, strict in (
                ('window', bounds.window_sides(t, p, m, n), _ld_window(t, p, m, n), True),
                ('bound', bounds.bound_sides(s, t, m, n), _ld_bound(s, t, m, n), False)):
            lhs, rhs = exact_sides
            flhs, frhs = float_sides
            exact = lhs < rhs if strict else lhs <= rhs
            approx = bool(flhs < frhs) if strict else bool(flhs <= frhs)
            tie = _near_tie(lhs, rhs)
            if tie:
                ties.append(f'tie {kind} p={p} t={t} m={m} n={n} s={s}: lhs={lhs} rhs={rhs} '
                            f'exact={exact} float={approx}')
            if exact != approx and not tie:
                disagree.append(f'disagreement {kind} p={p} t={t} m={m} n={n} s={s}: lhs={lhs} rhs={rhs}')
    ok = len(points) >= 10_000 and not disagree
    record('8', ok, f'{len(points)} grid points x 2 predicates, {len(disagree)} disagreements '
                    f'outside ties, {len(ties)} boundary ties reported below', *ties, *disagree)
    assert ok
