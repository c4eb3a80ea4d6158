"""Seeded random instances and resumable batch runs.

Every instance draws from its own generator, seeded with a 64-bit value
derived from the sweep seed and the instance index, so a single row can
be recomputed without replaying the rest of the sweep.
"""

from __future__ import annotations

import csv
import hashlib
import json
import os
import random
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Callable, Iterable

from . import bounds
from .auxpoly import check_admissible
from .ffield import FieldCtx, divisors, is_prime
from .oracle import FAILED, InstanceConfig, verify_instance
from .polyring import DensePoly

CSV_COLUMNS = ['p', 't', 'n', 'm', '|M|', 'degPsi', 'D', 'est_bound', 'thm2_ok', 'status']


def instance_seed(seed: int, index: int) -> int:
    digest = hashlib.blake2b(f'{seed}:{index}'.encode(), digest_size=8).digest()
    return int.from_bytes(digest, 'little')


def window_divisors(p: int, degrees: list[int], t_max: int | None = None) -> list[int]:
    n = len(degrees)
    return [t for t in divisors(p - 1)
            if bounds.in_window(t, p, degrees, n) and (t_max is None or t <= t_max)]


def parse_t_rule(rule) -> int | None:
    """``"window"`` (every in-window divisor) or ``"window<=N"``; returns the cap."""
    if rule is None or rule == 'window':
        return None
    if isinstance(rule, str) and rule.startswith('window<='):
        return int(rule[len('window<='):])
    raise ValueError(f'unknown t_rule {rule!r}')


def random_poly(rng: random.Random, ctx: FieldCtx, degree: int) -> DensePoly:
    # nonzero constant term and leading coefficient
    p = ctx.p
    middle = [rng.randrange(p) for _ in range(degree - 1)]
    return DensePoly(ctx, [rng.randrange(1, p)] + middle + [rng.randrange(1, p)])


def generate_instance(seed: int, index: int, spec: dict, max_tries: int = 10_000) -> InstanceConfig:
    """One random admissible instance inside the hypothesis window.

    ``spec`` keys: p_range [lo, hi], poly_degrees, t_rule or t_max (optional),
    plant (optional, default True: the cosets are chosen so that a random
    x_0 lies in M).
    """
    s = instance_seed(seed, index)
    rng = random.Random(s)
    lo, hi = spec.get('p_range', [500, 50000])
    degrees = sorted(spec.get('poly_degrees', [1, 1]))
    t_max = spec['t_max'] if 't_max' in spec else parse_t_rule(spec.get('t_rule'))
    plant = spec.get('plant', True)
    for _ in range(max_tries):
        p = rng.randrange(lo, hi + 1)
        if not is_prime(p):
            continue
        ts = window_divisors(p, degrees, t_max)
        if not ts:
            continue
        t = rng.choice(ts)
        ctx = FieldCtx(p)
        polys = [random_poly(rng, ctx, d) for d in degrees]
        if not check_admissible(polys).admissible:
            continue
        if plant:
            x0 = rng.randrange(1, p)
            gs = [f(x0) for f in polys]
            if 0 in gs:
                continue
        else:
            gs = [rng.randrange(1, p) for _ in polys]
        return InstanceConfig(p, t, [list(f.coeffs) for f in polys], gs, seed=s)
    raise RuntimeError(f'no admissible in-window instance found for {spec}')


def instance_row(index: int, config: InstanceConfig) -> dict:
    row = verify_instance(config).as_dict()
    row['index'] = index
    return row


def _job(args: tuple[int, int, dict]) -> dict:
    seed, index, spec = args
    return instance_row(index, generate_instance(seed, index, spec))


def dumps(row: dict) -> str:
    return json.dumps(row, sort_keys=True, separators=(',', ':'))


def read_rows(path: Path) -> dict[int, dict]:
    rows: dict[int, dict] = {}
    if path.exists():
        for line in path.read_text().splitlines():
            line = line.strip()
            if not line:
                continue
            try:
                row = json.loads(line)
            except json.JSONDecodeError:
                continue  # torn final line from an interrupted run
            rows[row['index']] = row
    return rows


def default_workers() -> int:
    env = os.environ.get('STEPANOV_THREADS')
    return max(1, int(env)) if env else 1


def run_sweep(seed: int, spec: dict, out: Path, workers: int | None = None,
              progress: Callable[[dict], None] | None = None) -> list[dict]:
    """Compute every missing row of the sweep and rewrite ``out`` in index order."""
    samples = int(spec.get('samples', 10))
    done = read_rows(out)
    todo = [i for i in range(samples) if i not in done]
    workers = default_workers() if workers is None else workers
    with out.open('a') as sink:
        def emit(row: dict) -> None:
            done[row['index']] = row
            sink.write(dumps(row) + '\n')
            sink.flush()
            if progress:
                progress(row)

        jobs = [(seed, i, spec) for i in todo]
        if workers > 1 and len(jobs) > 1:
            with ProcessPoolExecutor(workers) as pool:
                for row in pool.map(_job, jobs):
                    emit(row)
        else:
            for job in jobs:
                emit(_job(job))
    rows = [done[i] for i in sorted(done) if i < samples]
    out.write_text(''.join(dumps(r) + '\n' for r in rows))
    return rows


def csv_projection(rows: Iterable[dict], path: Path) -> None:
    with path.open('w', newline='') as fh:
        w = csv.writer(fh, lineterminator='\n')
        w.writerow(CSV_COLUMNS)
        for r in rows:
            w.writerow([r['p'], r['t'], r['n'], ' '.join(map(str, r['m'])), r['size_M'],
                        r.get('deg_psi'), r.get('D'), r.get('est_bound'),
                        r.get('checks', {}).get('theorem2_bound'), r['status']])


def any_failed(rows: Iterable[dict]) -> bool:
    return any(r['status'] == FAILED for r in rows)
