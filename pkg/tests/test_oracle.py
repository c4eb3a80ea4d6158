import random

import pytest

from stepanov.errors import FieldTooLarge
from stepanov.ffield import FieldCtx, coset, subgroup_of_order
from stepanov.oracle import (FAILED, PASSED, SKIPPED, InstanceConfig, coset_intersection,
                             coset_intersection_via_map, enumerate_M, enumerate_M_slow,
                             verify_instance)
from stepanov.polyring import DensePoly


def lin(ctx, r):
    return DensePoly(ctx, (-r, 1))


def cosets(ctx, t, gs):
    G = subgroup_of_order(ctx, t)
    return [coset(G, g) for g in gs]


def test_enumerate_examples():
    F31, F7 = FieldCtx(31), FieldCtx(7)
    res = enumerate_M([lin(F31, 1), lin(F31, 2)], cosets(F31, 5, [1, 1]))
    assert res.M == (3,) and res.M_prime == (3,)
    assert enumerate_M([lin(F7, 1), lin(F7, 2)], cosets(F7, 1, [1, 1])).M == ()
    res = enumerate_M([lin(F31, 1), lin(F31, 2)], cosets(F31, 30, [1, 1]))
    assert set(res.M) == set(range(31)) - {1, 2}
    assert res.excluded == (0,)


@pytest.mark.parametrize('p', [31, 97, 1021])
def test_fast_scan_matches_slow(p):
    ctx = FieldCtx(p)
    rng = random.Random(p)
    ts = [t for t in range(1, p) if (p - 1) % t == 0]
    for _ in range(15):
        t = rng.choice(ts)
        polys = [DensePoly(ctx, [rng.randrange(p) for _ in range(rng.randint(2, 4))]) for _ in range(2)]
        if any(f.degree < 1 for f in polys):
            continue
        cs = cosets(ctx, t, [rng.randrange(1, p) for _ in polys])
        assert enumerate_M(polys, cs) == enumerate_M_slow(polys, cs)
        assert enumerate_M(polys, cs, workers=3) == enumerate_M_slow(polys, cs)


def test_scan_limit():
    ctx = FieldCtx(10**7 + 19)
    with pytest.raises(FieldTooLarge):
        enumerate_M([lin(ctx, 1), lin(ctx, 2)], cosets(ctx, 2, [1, 1]))


def test_intersection_examples():
    F31 = FieldCtx(31)
    assert coset_intersection(F31, 5, [1]) == [2]
    with pytest.raises(ValueError):
        coset_intersection(F31, 5, [0])
    assert coset_intersection(F31, 30, [1]) == list(range(2, 31))


@pytest.mark.parametrize('p,t', [(97, 12), (1021, 34), (7919, 74)])
def test_intersection_two_ways(p, t):
    ctx = FieldCtx(p)
    rng = random.Random(t)
    for k in (1, 2):
        shifts = rng.sample(range(1, p), k)
        assert coset_intersection(ctx, t, shifts) == coset_intersection_via_map(ctx, t, shifts)


def test_verify_running_instance():
    rep = verify_instance(InstanceConfig(1021, 20, [[1020, 1], [1019, 1]], [1, 1]))
    assert rep.status == PASSED, rep.reason
    assert all(rep.checks.values())
    assert rep.D == 2 and rep.deg_psi == 20


def test_verify_skips():
    rep = verify_instance({'p': 1021, 't': 4, 'polys': ['1020,1', '1019,1']})
    assert rep.status == SKIPPED and rep.reason.startswith('window')
    rep = verify_instance({'p': 1021, 't': 20, 'polys': ['0,1', '1019,1']})
    assert rep.status == SKIPPED and rep.reason.startswith('admissibility')


def test_verify_planted():
    ctx = FieldCtx(49999)
    polys = [lin(ctx, 11), lin(ctx, 40000)]
    x0 = 1234
    rep = verify_instance(InstanceConfig(49999, 78, [list(f.coeffs) for f in polys],
                                         [f(x0) for f in polys]))
    assert rep.status == PASSED, rep.reason
    assert x0 in rep.M
    assert rep.multiplicity_min >= rep.D


def test_finish_keeps_reason():
    from stepanov.oracle import InstanceReport
    rep = InstanceReport(5, 2, [], [], reason='construction: boom')
    rep.checks = {'construction': False}
    rep.finish()
    assert rep.status == FAILED
    assert rep.reason.startswith('construction: boom') and 'construction' in rep.reason.split(';')[-1]
