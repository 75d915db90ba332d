import pytest

# criterion label -> (passed, detail); filled by test_acceptance
ACCEPTANCE = {}


def record(label: str, passed: bool, detail: str = ""):
    ACCEPTANCE[label] = (passed, detail)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for label in sorted(ACCEPTANCE, key=lambda s: (int(s.split()[0].rstrip("abcdefg")), s)):
        passed, detail = ACCEPTANCE[label]
        line = f"criterion {label}: {'PASS' if passed else 'FAIL'}"
        terminalreporter.write_line(line + (f"  ({detail})" if detail else ""))


@pytest.fixture
def rng():
    import random

    return random.Random(12345)
