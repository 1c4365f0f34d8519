from hypothesis import settings

# JIT compilation on first call makes per-example timing meaningless
settings.register_profile("qotto", deadline=None, derandomize=True, max_examples=100)
settings.load_profile("qotto")


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[number])
