import pytest

# acceptance verdicts, printed once at the end of the run
VERDICTS = []


@pytest.fixture
def verdict(request):
    """Record PASS/FAIL for one acceptance criterion.

    Usage: ``with verdict(3, "substitution algebra"): ...``; the block's
    exceptions propagate unchanged after the verdict line is stored.
    """

    class _Record:
        def __init__(self):
            self.details = ""

        def __call__(self, number, title):
            self.number, self.title = number, title
            return self

        def __enter__(self):
            return self

        def __exit__(self, exc_type, exc, tb):
            status = "PASS" if exc_type is None else "FAIL"
            line = f"{status} criterion {self.number:>2}: {self.title}"
            if self.details:
                line += f" ({self.details})"
            VERDICTS.append((self.number, line))
            print(line)
            return False

    return _Record()


def pytest_terminal_summary(terminalreporter):
    if not VERDICTS:
        return
    terminalreporter.section("acceptance criteria")
    for _, line in sorted(VERDICTS):
        terminalreporter.write_line(line)
