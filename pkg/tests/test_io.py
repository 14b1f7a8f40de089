import math

import numpy as np
import pytest

from obspath import io
from obspath.model import ProblemKind
from obspath.transcribe import Scheme, simulate
from conftest import p3_scenario

GOOD_P3 = """\
# standard turn-rate-bounded run
kind = P3
v_mps = 40
turn_rate_max_dps = 5
x0_km = 5.0
y0_km = 0.0
theta0_deg = 0.0
t_f_s = 100
n_grid = 500
"""

GOOD_P1 = """\
kind = P1
v_mps = 40
x0_km = 5.0
y0_km = 0.0
t_f_s = 100
"""


class TestParseScenario:
    def test_p3_units_converted(self):
        scn = io.parse_scenario(GOOD_P3)
        assert scn.kind is ProblemKind.P3
        assert scn.v == pytest.approx(0.04)
        assert scn.turn_rate_max == pytest.approx(math.radians(5.0))
        assert scn.n_grid == 500

    def test_p1_defaults(self):
        scn = io.parse_scenario(GOOD_P1)
        assert scn.kind is ProblemKind.P1
        assert scn.n_grid == 1000
        assert scn.sigma == 1.0

    def test_comments_and_blank_lines_ignored(self):
        text = "\n# leading comment\n\n" + GOOD_P1 + "\n  # trailing\n"
        io.parse_scenario(text)

    @pytest.mark.parametrize("bad_line, fragment", [
        ("lorem ipsum", "line 1: expected 'key = value'"),
        ("speed = 40", "line 1: unknown key 'speed'"),
    ])
    def test_errors_carry_line_numbers(self, bad_line, fragment):
        with pytest.raises(io.ParseError, match=__import__("re").escape(fragment)):
            io.parse_scenario(bad_line)

    def test_unknown_kind(self):
        text = GOOD_P1.replace("kind = P1", "kind = P2")
        with pytest.raises(io.ParseError, match="line 1: kind must be P1 or P3"):
            io.parse_scenario(text)

    def test_duplicate_key(self):
        text = GOOD_P1 + "v_mps = 41\n"
        with pytest.raises(io.ParseError, match="duplicate key 'v_mps'"):
            io.parse_scenario(text)

    def test_missing_required_keys(self):
        with pytest.raises(io.ParseError, match="missing required key"):
            io.parse_scenario("kind = P3\nv_mps = 40\n")

    def test_p3_requires_bound_and_course(self):
        text = GOOD_P3.replace("turn_rate_max_dps = 5\n", "")
        with pytest.raises(io.ParseError, match="turn_rate_max_dps"):
            io.parse_scenario(text)

    def test_non_numeric_value(self):
        text = GOOD_P1.replace("t_f_s = 100", "t_f_s = fast")
        with pytest.raises(io.ParseError, match="'fast' is not a number"):
            io.parse_scenario(text)

    def test_fractional_n_grid_rejected(self):
        text = GOOD_P1 + "n_grid = 10.5\n"
        with pytest.raises(io.ParseError, match="n_grid must be an integer"):
            io.parse_scenario(text)

    def test_invalid_model_values_reported_as_parse_errors(self):
        text = GOOD_P1.replace("v_mps = 40", "v_mps = 0")
        with pytest.raises(io.ParseError, match="v must be positive"):
            io.parse_scenario(text)


class TestParseScheme:
    def test_default(self):
        assert io.parse_scheme(GOOD_P1) is Scheme.HEUN

    def test_explicit(self):
        assert io.parse_scheme(GOOD_P3 + "scheme = euler\n") is Scheme.EULER

    def test_invalid(self):
        with pytest.raises(io.ParseError, match="scheme must be euler or heun"):
            io.parse_scheme("scheme = rk4\n")


class TestTrajectoryCsv:
    def test_round_trip_exact(self, tmp_path, rng):
        scn = p3_scenario(80.0, n_grid=120)
        u = rng.uniform(-scn.turn_rate_max, scn.turn_rate_max, 120)
        traj = simulate(scn, u)
        path = tmp_path / "traj.csv"
        io.write_trajectory_csv(path, traj, u, scn)
        data = io.read_trajectory_csv(path)
        assert data.shape == (121, 8)
        # repr-precision serialization round-trips every float bit-exactly.
        assert np.array_equal(data[:, 0], traj.times)
        assert np.array_equal(data[:, 1:4], traj.states[:, :3])
        assert np.array_equal(data[:, 5:8], traj.states[:, 3:6])
        assert np.array_equal(data[:120, 4], u)

    def test_bad_header(self, tmp_path):
        path = tmp_path / "traj.csv"
        path.write_text("a,b,c\n1,2,3\n")
        with pytest.raises(io.ParseError, match="bad header"):
            io.read_trajectory_csv(path)

    def test_bad_column_count(self, tmp_path):
        path = tmp_path / "traj.csv"
        path.write_text(io.TRAJECTORY_HEADER + "\n1,2,3\n")
        with pytest.raises(io.ParseError, match="row 2: expected 8 columns"):
            io.read_trajectory_csv(path)

    def test_non_numeric_row(self, tmp_path):
        path = tmp_path / "traj.csv"
        row = ",".join(["0.0"] * 7 + ["oops"])
        path.write_text(io.TRAJECTORY_HEADER + "\n" + row + "\n")
        with pytest.raises(io.ParseError, match="row 2: non-numeric"):
            io.read_trajectory_csv(path)

    def test_too_few_rows(self, tmp_path):
        path = tmp_path / "traj.csv"
        row = ",".join(["0.0"] * 8)
        path.write_text(io.TRAJECTORY_HEADER + "\n" + row + "\n")
        with pytest.raises(io.ParseError, match="fewer than 3 data rows"):
            io.read_trajectory_csv(path)


class TestCostatesCsv:
    def test_header_and_rows(self, tmp_path):
        path = tmp_path / "costates.csv"
        t = np.array([0.0, 1.0])
        io.write_costates_csv(path, t, t * 2, t * 3, t * 4, t * 5)
        lines = path.read_text().splitlines()
        assert lines[0] == io.COSTATES_HEADER
        assert len(lines) == 3
        assert lines[2].split(",") == ["1.0", "2.0", "3.0", "4.0", "5.0"]
