import pytest

ACCEPTANCE_LINES = []


@pytest.fixture
def criterion():
    """Record a one-line verdict for an acceptance criterion, then assert it."""

    def record(label, ok, detail):
        ACCEPTANCE_LINES.append((str(label), f"{'PASS' if ok else 'FAIL'}  {detail}"))
        assert ok, detail

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        def key(item):
            label = item[0]
            digits = "".join(c for c in label if c.isdigit())
            return int(digits), label

        for label, line in sorted(ACCEPTANCE_LINES, key=key):
            terminalreporter.write_line(f"[{label:>3}] {line}")
