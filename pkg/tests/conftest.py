"""Collects the outcome of tests tagged ``@pytest.mark.criterion(n)`` and
prints one line per criterion at the end of the run."""

_outcomes: dict[int, list] = {}


def pytest_runtest_setup(item):
    mark = item.get_closest_marker("criterion")
    if mark is not None:
        item.user_properties.append(("criterion", mark.args[0]))


def pytest_runtest_logreport(report):
    props = dict(report.user_properties)
    if "criterion" not in props:
        return
    n = props["criterion"]
    entry = _outcomes.setdefault(n, [True, report.nodeid.split("::")[-1], {}])
    if report.failed or (report.when == "call" and report.outcome != "passed"):
        entry[0] = False
    entry[2].update({k: v for k, v in props.items() if k != "criterion"})


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_outcomes):
        ok, name, details = _outcomes[n]
        extra = ", ".join(f"{k}={v}" for k, v in details.items())
        line = f"criterion {n}: {'PASS' if ok else 'FAIL'}  {name}"
        terminalreporter.write_line(f"{line}  ({extra})" if extra else line)
