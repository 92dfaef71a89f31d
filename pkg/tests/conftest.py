import os

from hypothesis import settings

# derandomized so the suite is reproducible; deadlines off for exact arithmetic
settings.register_profile("default", deadline=None, max_examples=60, derandomize=True)
settings.register_profile("thorough", deadline=None, max_examples=500)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance")
        for line in sorted(RESULTS):
            terminalreporter.write_line(line)
