import pytest

from itmpc.runtime import Runtime


@pytest.fixture
def ctx_factory():
    def make(n, seed=0, **kw):
        return Runtime(n, seed=seed, **kw)
    return make


_CRITERIA: dict[int, tuple[bool, str]] = {}


@pytest.fixture
def criterion():
    """Record one acceptance line: ``criterion(k, ok, detail)``; also asserts ``ok``."""
    def record(k, ok, detail):
        _CRITERIA[k] = (bool(ok), detail)
        print(f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
        assert ok, f"criterion {k} failed: {detail}"
    return record


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(_CRITERIA):
        ok, detail = _CRITERIA[k]
        terminalreporter.write_line(f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
