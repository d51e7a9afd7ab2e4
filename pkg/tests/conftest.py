import pytest

_CRITERIA: list[str] = []


@pytest.fixture
def criterion(request):
    """Record one PASS/FAIL line for an acceptance criterion.

    Usage: ``with criterion("3 cost oracle equivalence"): ...``
    """

    class _Recorder:
        def __call__(self, label):
            return _Line(label)

    return _Recorder()


class _Line:
    def __init__(self, label):
        self.label = label

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc, tb):
        status = "PASS" if exc_type is None else "FAIL"
        line = f"[{status}] criterion {self.label}"
        if exc is not None:
            first = str(exc).strip().splitlines()
            line += f" -- {first[0][:160]}" if first else f" -- {exc_type.__name__}"
        _CRITERIA.append(line)
        print(line)
        return False


def pytest_terminal_summary(terminalreporter):
    if _CRITERIA:
        terminalreporter.section("acceptance criteria")
        for line in _CRITERIA:
            terminalreporter.write_line(line)
