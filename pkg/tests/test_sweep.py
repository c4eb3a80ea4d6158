import json

from stepanov.sweep import (dumps, generate_instance, instance_seed, parse_t_rule, read_rows,
                            run_sweep, window_divisors)
from stepanov import bounds

SPEC = {'p_range': [500, 8000], 't_rule': 'window', 'poly_degrees': [1, 1], 'samples': 6}


def test_instance_seed_is_stable():
    assert instance_seed(1, 2) == instance_seed(1, 2)
    assert instance_seed(1, 2) != instance_seed(1, 3)
    assert 0 <= instance_seed(9, 9) < 2**64


def test_t_rule():
    assert parse_t_rule('window') is None
    assert parse_t_rule('window<=300') == 300


def test_generated_instances_in_window():
    for i in range(10):
        cfg = generate_instance(5, i, SPEC)
        assert 500 <= cfg.p <= 8000
        assert (cfg.p - 1) % cfg.t == 0
        assert bounds.in_window(cfg.t, cfg.p, [1, 1], 2)
        assert cfg.t in window_divisors(cfg.p, [1, 1])
    assert generate_instance(5, 3, SPEC) == generate_instance(5, 3, SPEC)


def test_sweep_byte_deterministic(tmp_path):
    a, b = tmp_path / 'a.jsonl', tmp_path / 'b.jsonl'
    run_sweep(11, SPEC, a)
    run_sweep(11, SPEC, b, workers=2)
    assert a.read_bytes() == b.read_bytes()


def test_sweep_resumes(tmp_path):
    full = tmp_path / 'full.jsonl'
    rows = run_sweep(4, SPEC, full)
    part = tmp_path / 'part.jsonl'
    lines = full.read_text().splitlines()
    # keep rows 0, 2 and a torn fragment of row 3
    part.write_text(lines[0] + '\n' + lines[2] + '\n' + lines[3][:20])
    seen = []
    again = run_sweep(4, SPEC, part, progress=lambda r: seen.append(r['index']))
    assert sorted(seen) == [1, 3, 4, 5]
    assert again == rows
    assert part.read_bytes() == full.read_bytes()
    # a complete file is left untouched
    seen.clear()
    run_sweep(4, SPEC, part, progress=lambda r: seen.append(r['index']))
    assert seen == []
    assert part.read_bytes() == full.read_bytes()


def test_read_rows_and_dumps(tmp_path):
    f = tmp_path / 'r.jsonl'
    f.write_text(dumps({'index': 2, 'b': 1, 'a': 0}) + '\n\n{"index": 5, "broken"\n')
    rows = read_rows(f)
    assert list(rows) == [2]
    assert dumps(rows[2]) == '{"a":0,"b":1,"index":2}'
    assert json.loads(dumps(rows[2])) == rows[2]
