"""Text-format round trips and parse failures."""

import math

import pytest

from beaconlab import io as bio
from beaconlab.polygon import SimplePolygon

from conftest import SPIKE6


class TestRoundTrip:
    def test_bit_exact(self):
        pts = [(0.1, 0.2), (math.pi, math.e / 7), (3.5, 4.0),
               (1.0 / 3.0, 5.0), (-2.2250738585072014e-308, 0.9)]
        P = SimplePolygon(pts)
        Q = bio.parse(bio.emit(P))
        assert Q.vertices == P.vertices

    def test_extras_roundtrip(self):
        P = SimplePolygon(SPIKE6)
        text = bio.emit(P, extras={"P": (0.5, 0.5)}, comments=["fixture"])
        Q, extras = bio.parse_instance(text)
        assert Q.vertices == P.vertices
        assert extras == {"P": (0.5, 0.5)}
        assert text.startswith("# fixture\n")

    def test_comments_anywhere(self):
        text = "# header\n4\n0 0\n4 0 # inline\n4 4\n# middle\n0 4\n"
        P = bio.parse(text)
        assert P.n == 4

    def test_emit_then_parse_idempotent(self):
        P = SimplePolygon(SPIKE6)
        once = bio.emit(P)
        twice = bio.emit(bio.parse(once))
        assert once == twice


class TestParseErrors:
    def test_empty(self):
        with pytest.raises(ValueError):
            bio.parse("")

    def test_bad_count(self):
        with pytest.raises(ValueError):
            bio.parse("x\n0 0\n")

    def test_short_file(self):
        with pytest.raises(ValueError):
            bio.parse("4\n0 0\n1 0\n")

    def test_bad_coordinate(self):
        with pytest.raises(ValueError):
            bio.parse("3\n0 0\n1 zero\n0 1\n")

    def test_malformed_vertex_line(self):
        with pytest.raises(ValueError):
            bio.parse("3\n0 0 0\n1 0\n0 1\n")

    def test_duplicate_extra(self):
        with pytest.raises(ValueError):
            bio.parse_instance("3\n0 0\n4 0\n0 4\nP 1 1\nP 2 2\n")

    def test_malformed_extra(self):
        with pytest.raises(ValueError):
            bio.parse_instance("3\n0 0\n4 0\n0 4\nP 1\n")
