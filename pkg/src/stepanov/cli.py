"""Command line interface.

Exit status: 0 when every check passed or was skipped, 1 when any check
failed, 2 on usage or configuration errors.  Reports go to stdout as JSON.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import bounds
from .auxpoly import PolySystem, check_admissible, compute_params, construct_certificate, verify_certificate
from .complexroots import verify_theorem3_instance
from .errors import DegenerateParams, StepanovError
from .ffield import FieldCtx, coset, subgroup_of_order
from .independence import lemma1_pipeline
from .oracle import (FAILED, PASSED, SKIPPED, InstanceConfig, coset_intersection,
                     coset_intersection_via_map, enumerate_M, verify_instance)
from .polyring import DensePoly
from .sweep import any_failed, csv_projection, dumps, run_sweep


class ConfigError(Exception):
    pass


def _emit(obj: dict) -> None:
    sys.stdout.write(json.dumps(obj, sort_keys=True, indent=2, default=str) + '\n')


def _polys(args) -> list[DensePoly]:
    if not args.poly:
        raise ConfigError('at least one --poly is required')
    ctx = FieldCtx(args.p)
    return [DensePoly.from_text(ctx, s) for s in args.poly]


def _cosets(args, count: int) -> list[int]:
    gs = args.coset or [1] * count
    if len(gs) != count:
        raise ConfigError('give one --coset per --poly')
    return gs


def cmd_admissible(args) -> int:
    polys = _polys(args)
    rep = check_admissible(polys)
    _emit({'admissible': rep.admissible, 'private_root': list(rep.private_root),
           'nonzero_at_zero': list(rep.nonzero_at_zero), 'reasons': rep.reasons(),
           'witnesses': [w.to_text() if w else None for w in rep.witnesses]})
    if not rep.admissible:
        sys.stderr.write('; '.join(rep.reasons()) + '\n')
    return 0 if rep.admissible else 1


def cmd_params(args) -> int:
    polys = _polys(args)
    sys_ = PolySystem.from_polys(polys)
    br = bounds.constants_remark1(sys_.degrees, sys_.n, t=args.t, p=args.p)
    out = {'window': br.as_dict(), 'window_ok': br.window_ok}
    try:
        out['params'] = compute_params(sys_, args.t).as_dict()
    except DegenerateParams as exc:
        out['params'] = None
        out['reason'] = str(exc)
    out['status'] = PASSED if br.window_ok and out['params'] else SKIPPED
    _emit(out)
    return 0


def cmd_enumerate(args) -> int:
    polys = _polys(args)
    G = subgroup_of_order(FieldCtx(args.p), args.t)
    res = enumerate_M(polys, [coset(G, g) for g in _cosets(args, len(polys))])
    _emit({'M': list(res.M), 'M_prime': list(res.M_prime), 'excluded': list(res.excluded),
           'size_M': len(res.M)})
    return 0


def cmd_construct(args) -> int:
    polys = _polys(args)
    sys_ = PolySystem.from_polys(polys)
    gs = sys_.reorder(_cosets(args, len(polys)))
    cert = construct_certificate(sys_, args.t, gs)
    G = subgroup_of_order(sys_.ctx, args.t)
    res = enumerate_M(polys, [coset(G, g) for g in _cosets(args, len(polys))])
    outcome = verify_certificate(cert, res.M_prime, sys_)
    out = {'params': cert.params.as_dict(), 'D': cert.D, 'deg_psi': cert.deg_psi,
           'lambda': [[a, list(b), v] for (a, b), v in cert.lam.items()],
           'psi': cert.psi.to_text(), 'multiplicities': {str(k): v for k, v in outcome.multiplicities.items()},
           'implied_bound': str(outcome.implied_bound), 'passed': outcome.passed}
    if args.out:
        Path(args.out).write_text(json.dumps(out, sort_keys=True) + '\n')
        out = {k: v for k, v in out.items() if k not in ('psi', 'lambda')}
        out['written'] = args.out
    _emit(out)
    return 0 if outcome.passed else 1


def cmd_verify(args) -> int:
    polys = _polys(args)
    cfg = InstanceConfig(args.p, args.t, [list(f.coeffs) for f in polys], _cosets(args, len(polys)),
                         seed=args.seed, enforce_window=not args.no_window)
    rep = verify_instance(cfg)
    _emit(rep.as_dict())
    return 1 if rep.status == FAILED else 0


def cmd_intersect(args) -> int:
    ctx = FieldCtx(args.p)
    inter = coset_intersection(ctx, args.t, args.shift)
    via = coset_intersection_via_map(ctx, args.t, args.shift)
    k = len(args.shift)
    size = len(inter)
    out = {'intersection': inter, 'size': size, 'via_map_agrees': inter == via}
    checks = {'via_map_agrees': inter == via}
    if k == 1:
        hyp, ok = bounds.gv_check(args.t, size, args.p)
        out['garcia_voloch'] = {'hypothesis_ok': hyp, 'bound_ok': ok}
        if hyp:
            checks['garcia_voloch'] = ok
    h1, h2 = bounds.theorem1_hypotheses(args.t, k, args.p)
    t1 = bounds.theorem1_check(args.t, k, size)
    out['theorem1'] = {'size_hypothesis_ok': h1, 'char_hypothesis_ok': h2, 'bound_ok': t1}
    if h1 and h2:
        checks['theorem1'] = t1
    cor = bounds.corollary1_check(args.t, k + 1, size, args.p)
    out['corollary1'] = cor.as_dict()
    if cor.window_ok:
        checks['corollary1'] = bool(cor.bound_holds)
    out['checks'] = checks
    out['status'] = FAILED if not all(checks.values()) else PASSED
    _emit(out)
    return 1 if out['status'] == FAILED else 0


def cmd_lemma1(args) -> int:
    polys = _polys(args)
    ctx = polys[0].ctx
    nxt = DensePoly.from_text(ctx, args.next_poly) if args.next_poly else None
    rep = lemma1_pipeline(polys, args.t, args.A, args.B, f_next=nxt, B_next=args.B_next)
    out = rep.as_dict()
    if rep.hypotheses_ok:
        out['status'] = PASSED if rep.conclusions_ok else FAILED
    else:
        out['status'] = SKIPPED
    _emit(out)
    return 1 if out['status'] == FAILED else 0


def _complex_poly(text: str) -> list[complex]:
    return [complex(s.replace(' ', '')) for s in text.split(',')]


def cmd_complex(args) -> int:
    polys = [_complex_poly(s) for s in args.poly]
    reps = [complex(r) for r in (args.rep or ['1'] * len(polys))]
    if len(reps) != len(polys):
        raise ConfigError('give one --rep per --poly')
    rep = verify_theorem3_instance(polys, args.t, reps)
    _emit(rep.as_dict())
    return 1 if rep.status == FAILED else 0


def cmd_sweep(args) -> int:
    try:
        cfg = json.loads(Path(args.config).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f'cannot read config: {exc}') from exc
    out = Path(args.out)
    if 'sweep' not in cfg:
        rows = [verify_instance(cfg).as_dict() | {'index': 0}]
        out.write_text(dumps(rows[0]) + '\n')
    else:
        rows = run_sweep(int(cfg.get('seed', 0)), cfg['sweep'], out, workers=args.workers)
    if args.csv:
        csv_projection(rows, Path(args.csv))
    counts = {s: sum(r['status'] == s for r in rows) for s in (PASSED, FAILED, SKIPPED)}
    _emit({'rows': len(rows), 'counts': counts, 'out': str(out)})
    return 1 if any_failed(rows) else 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog='stepanov', description='Auxiliary-polynomial certificates for |M|.')
    sub = ap.add_subparsers(dest='command', required=True)

    def field_args(sp, t=True):
        sp.add_argument('--p', type=int, required=True, help='prime modulus')
        if t:
            sp.add_argument('--t', type=int, required=True, help='subgroup order, divides p-1')
        sp.add_argument('--poly', action='append', help='coefficients mod p, ascending, e.g. "1020,1"')

    sp = sub.add_parser('admissible', help='check a polynomial set for admissibility')
    field_args(sp, t=False)
    sp.set_defaults(func=cmd_admissible)

    sp = sub.add_parser('params', help='parameters and hypothesis flags')
    field_args(sp)
    sp.set_defaults(func=cmd_params)

    for name, func, help_ in (('enumerate', cmd_enumerate, 'exhaustive M and M\''),
                              ('construct', cmd_construct, 'build and check the certificate'),
                              ('verify', cmd_verify, 'full single-instance report')):
        sp = sub.add_parser(name, help=help_)
        field_args(sp)
        sp.add_argument('--coset', type=int, action='append', help='coset representative g_i (default 1)')
        if name == 'construct':
            sp.add_argument('--out', help='write the full certificate JSON here')
        if name == 'verify':
            sp.add_argument('--seed', type=int)
            sp.add_argument('--no-window', action='store_true', help='run outside the hypothesis window')
        sp.set_defaults(func=func)

    sp = sub.add_parser('intersect', help='coset intersections and the shift bounds')
    sp.add_argument('--p', type=int, required=True)
    sp.add_argument('--t', type=int, required=True)
    sp.add_argument('--shift', type=int, action='append', required=True)
    sp.set_defaults(func=cmd_intersect)

    sp = sub.add_parser('lemma1', help='Wronskian independence pipeline')
    field_args(sp)
    sp.add_argument('--A', type=int, required=True)
    sp.add_argument('--B', type=int, action='append', required=True)
    sp.add_argument('--next-poly')
    sp.add_argument('--B-next', type=int)
    sp.set_defaults(func=cmd_lemma1)

    sp = sub.add_parser('complex', help='complex roots-of-unity instance')
    sp.add_argument('--t', type=int, required=True)
    sp.add_argument('--poly', action='append', required=True, help='complex coefficients, e.g. "-3,1" or "1+2j,1"')
    sp.add_argument('--rep', action='append', help='coset representative (complex)')
    sp.set_defaults(func=cmd_complex)

    sp = sub.add_parser('sweep', help='batch run over a JSON config')
    sp.add_argument('--config', required=True)
    sp.add_argument('--out', required=True, help='JSON-lines results file (resumable)')
    sp.add_argument('--csv', help='optional CSV projection')
    sp.add_argument('--workers', type=int, help='worker processes (default: STEPANOV_THREADS or 1)')
    sp.set_defaults(func=cmd_sweep)
    return ap


def run_command(argv: list[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (ConfigError, StepanovError, ValueError) as exc:
        sys.stderr.write(f'error: {exc}\n')
        return 2


def main() -> None:
    sys.exit(run_command())


if __name__ == '__main__':
    main()
