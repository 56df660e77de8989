import math

import pytest

from bouncing_billiards.geometry import wrap_angle

ACCEPTANCE_LINES = []


def angle_close(a, b, tol):
    return abs(wrap_angle(a - b)) <= tol


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)


@pytest.fixture
def tmp_json(tmp_path):
    def write(obj, name="cfg.json"):
        import json
        p = tmp_path / name
        p.write_text(json.dumps(obj), encoding="utf-8")
        return str(p)
    return write


HALF_PI = 0.5 * math.pi
