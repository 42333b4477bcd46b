import os

from hypothesis import HealthCheck, settings

settings.register_profile(
    "frobkit",
    deadline=None,
    derandomize=os.environ.get("FROBKIT_SEED") is None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("frobkit")


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.RESULTS:
        terminalreporter.write_line(line)
