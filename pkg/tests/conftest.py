import pytest

from rectblanket.geometry import BinaryImage, Rect


@pytest.fixture
def plus3():
    return BinaryImage.from_rows(["010", "111", "010"])


MID_ROW = Rect(1, 3, 2, 2)
MID_COL = Rect(2, 2, 1, 3)


def random_image(rng, W, H, density):
    return BinaryImage(rng.random((H, W)) < density)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
