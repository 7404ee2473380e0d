import pytest

CRITERIA: dict = {}


@pytest.fixture
def criterion(request):
    """Records a pass/fail line for an acceptance criterion.

    Usage: ``with criterion(3, "detail") as note: ...`` where ``note`` can
    append extra detail; the line is FAIL when the block raises.
    """

    class Recorder:
        def __init__(self, number, label):
            self.key = (number, label)
            self.details = []

        def __call__(self, text):
            self.details.append(str(text))

        def __enter__(self):
            return self

        def __exit__(self, exc_type, exc, tb):
            status = "PASS" if exc_type is None else "FAIL"
            extra = "; ".join(self.details)
            if exc_type is not None and str(exc):
                extra = (extra + "; " if extra else "") + str(exc).splitlines()[0]
            CRITERIA[self.key] = f"criterion {self.key[0]:>2} [{self.key[1]}]: {status}" + (f" ({extra})" if extra else "")
            print(CRITERIA[self.key])
            return False

    return Recorder


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(CRITERIA):
        terminalreporter.write_line(CRITERIA[key])
