import json
import os
import sys
from fractions import Fraction

import pytest

# Add project root to sys.path
PROJECT_ROOT = os.path.abspath(os.path.join(os.path.dirname(__file__), ".."))
if PROJECT_ROOT not in sys.path:
    sys.path.insert(0, PROJECT_ROOT)

from core.body import make_polygon  # noqa: E402

# Octagon with one weak and seven strong corners, five of them on the hull.
OCTAGON = [
    ("6.8", "0.5"),
    ("2.54", "1.4"),
    ("1.04", "4.62"),
    ("1.8", "7.4"),
    ("8.24", "10"),
    ("12.9", "6.6"),
    ("12.7", "4.3"),
    ("10.66", "1.24"),
]
TRIANGLE = [("0", "0"), ("4", "0"), ("0", "4")]
SQUARE = [("0", "0"), ("1", "0"), ("1", "1"), ("0", "1")]


def _polygon(points):
    return make_polygon((Fraction(x), Fraction(y)) for x, y in points)


@pytest.fixture
def octagon():
    return _polygon(OCTAGON)


@pytest.fixture
def triangle():
    return _polygon(TRIANGLE)


@pytest.fixture
def square():
    return _polygon(SQUARE)


@pytest.fixture
def body_file(tmp_path):
    """Writes a body description and returns its path as a string."""

    def write(name, data):
        path = tmp_path / f"{name}.json"
        path.write_text(json.dumps(data), encoding="utf-8")
        return str(path)

    return write


@pytest.fixture
def polygon_file(body_file):
    shapes = {"octagon": OCTAGON, "triangle": TRIANGLE, "square": SQUARE}

    def write(name):
        return body_file(name, {"type": "polygon", "vertices": [list(v) for v in shapes[name]]})

    return write
