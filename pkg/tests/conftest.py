import pytest

ACCEPTANCE_IDS = [str(i) for i in range(1, 9)]
_results: dict[str, tuple[bool, list[str]]] = {}


@pytest.fixture
def record():
    """record(criterion, ok, *lines): store one acceptance verdict for the summary."""
    def _record(crit: str, ok: bool, *lines: str) -> None:
        _results[crit] = (bool(ok), list(lines))
    return _record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _results:
        return
    tr = terminalreporter
    tr.section('acceptance criteria')
    for crit in ACCEPTANCE_IDS:
        ok, lines = _results.get(crit, (False, ['no result recorded']))
        head, rest = (lines[0], lines[1:]) if lines else ('', [])
        tr.write_line(f'criterion {crit}: {"PASS" if ok else "FAIL"}  {head}')
        for line in rest:
            tr.write_line(f'    {line}')
