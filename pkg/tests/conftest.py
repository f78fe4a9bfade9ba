import pytest

ACCEPTANCE: dict[str, tuple[bool, str]] = {}


@pytest.fixture
def criterion(request):
    """Record one acceptance criterion; a test that raises is recorded as FAIL."""
    name = request.node.name
    ACCEPTANCE[name] = (False, "did not complete")

    def record(detail: str):
        ACCEPTANCE[name] = (True, detail)

    return record


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call" and rep.failed and item.name in ACCEPTANCE:
        ACCEPTANCE[item.name] = (False, str(rep.longrepr).splitlines()[-1][:160])


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, (ok, detail) in sorted(ACCEPTANCE.items()):
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")
