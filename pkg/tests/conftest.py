import os

os.environ["METABELIAN_CHECK"] = "1"

from hypothesis import HealthCheck, settings  # noqa: E402

settings.register_profile(
    "repo",
    derandomize=True,
    deadline=None,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("repo")


# Criterion lines collected by test_acceptance.py, printed after the run.
ACCEPTANCE_LINES = {}


def record_criterion(number, ok, seconds, note=""):
    status = "PASS" if ok else "FAIL"
    previous = ACCEPTANCE_LINES.get(number)
    if previous is not None and previous[0] == "FAIL":
        status = "FAIL"
        note = previous[2] or note
    total = seconds + (previous[1] if previous else 0.0)
    ACCEPTANCE_LINES[number] = (status, total, note)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE_LINES):
        status, seconds, note = ACCEPTANCE_LINES[number]
        suffix = f"  [{note}]" if note else ""
        terminalreporter.write_line(f"criterion {number:2d}: {status}  {seconds:7.2f}s{suffix}")
