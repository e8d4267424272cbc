import pytest

# criterion number -> (title, [passed?, ...]) for tests marked ``acceptance``
_RESULTS = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(number, title): an acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("acceptance")
    if mark is None:
        return
    if rep.when != "call" and rep.passed:
        return
    number, title = mark.args
    if rep.failed and "XPASS(strict)" in str(rep.longrepr):
        ok = True
    else:
        ok = rep.passed and not hasattr(rep, "wasxfail")
    entry = _RESULTS.setdefault(number, (title, []))
    entry[1].append((item.name, ok))


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    tr = terminalreporter
    tr.section("acceptance")
    passed = 0
    for number in sorted(_RESULTS):
        title, parts = _RESULTS[number]
        ok = all(p for _, p in parts)
        passed += ok
        failing = [name for name, p in parts if not p]
        extra = f"  (failing: {', '.join(failing)})" if failing else ""
        tr.write_line(f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {title}{extra}")
    tr.write_line(f"{passed}/{len(_RESULTS)} acceptance criteria pass")
