import math
import xml.etree.ElementTree as ET

import numpy as np
import pytest
from click.testing import CliRunner

from discpack import read_lbl
from discpack.cli import cli


@pytest.fixture
def runner():
    return CliRunner()


def invoke(runner, args):
    return runner.invoke(cli, args, catch_exceptions=False)


def test_gen_hexball_counts(runner, tmp_path):
    out = tmp_path / "ball.cpx"
    result = invoke(runner, ["gen", "hexball", "2", "--out", str(out)])
    assert result.exit_code == 0
    lines = out.read_text().splitlines()
    assert sum(ln.startswith("V ") for ln in lines) == 19
    assert sum(ln.startswith("F ") for ln in lines) == 24


def test_gen_star_counts(runner):
    result = invoke(runner, ["gen", "star", "6"])
    assert result.exit_code == 0
    lines = result.output.splitlines()
    assert sum(ln.startswith("V ") for ln in lines) == 7
    assert sum(ln.startswith("F ") for ln in lines) == 6


def test_gen_invalid_degree_exits_one(runner):
    result = runner.invoke(cli, ["gen", "star", "2"])
    assert result.exit_code == 1
    assert "InvalidDegree" in result.output


def test_solve_branched_star(runner, tmp_path):
    cpx = tmp_path / "star.cpx"
    lbl = tmp_path / "star.lbl"
    invoke(runner, ["gen", "star", "6", "--out", str(cpx)])
    result = invoke(runner, ["solve", "--cpx", str(cpx), "--branch", "0:1",
                             "--boundary", "const:1", "--out", str(lbl)])
    assert result.exit_code == 0
    assert "converged=True" in result.output
    label = read_lbl(lbl)
    assert abs(label[0] - (2 / math.sqrt(3) - 1)) <= 1e-6


def test_solve_flat_hexball(runner, tmp_path):
    cpx = tmp_path / "ball.cpx"
    lbl = tmp_path / "ball.lbl"
    invoke(runner, ["gen", "hexball", "3", "--out", str(cpx)])
    result = invoke(runner, ["solve", "--cpx", str(cpx), "--out", str(lbl)])
    assert result.exit_code == 0
    label = read_lbl(lbl)
    assert np.abs(label.radii - 1.0).max() <= 1e-9


def test_solve_infeasible_branch_exits_one(runner, tmp_path):
    cpx = tmp_path / "ball.cpx"
    invoke(runner, ["gen", "hexball", "2", "--out", str(cpx)])
    result = runner.invoke(cli, ["solve", "--cpx", str(cpx), "--branch",
                                 "0:2", "--out", str(cpx) + ".lbl"])
    assert result.exit_code == 1
    assert "InfeasibleOrder" in result.output


def test_solve_scale_invariance_through_cli(runner, tmp_path):
    cpx = tmp_path / "ball.cpx"
    invoke(runner, ["gen", "hexball", "2", "--out", str(cpx)])
    one = tmp_path / "one.lbl"
    three = tmp_path / "three.lbl"
    invoke(runner, ["solve", "--cpx", str(cpx), "--boundary", "const:1",
                    "--out", str(one)])
    invoke(runner, ["solve", "--cpx", str(cpx), "--boundary", "const:3",
                    "--out", str(three)])
    ratio = read_lbl(three).radii / read_lbl(one).radii
    assert np.abs(ratio - 3.0).max() <= 1e-9


def test_solve_rejects_brs_and_branch(runner, tmp_path):
    cpx = tmp_path / "star.cpx"
    brs = tmp_path / "b.brs"
    invoke(runner, ["gen", "star", "6", "--out", str(cpx)])
    brs.write_text("BRS 1\nB 0 1\n")
    result = runner.invoke(cli, ["solve", "--cpx", str(cpx), "--brs",
                                 str(brs), "--branch", "0:1", "--out",
                                 str(cpx) + ".lbl"])
    assert result.exit_code == 2


def test_boundary_file_spec(runner, tmp_path):
    cpx = tmp_path / "star.cpx"
    ref = tmp_path / "ref.lbl"
    out = tmp_path / "sol.lbl"
    invoke(runner, ["gen", "star", "6", "--out", str(cpx)])
    invoke(runner, ["solve", "--cpx", str(cpx), "--boundary", "const:2",
                    "--out", str(ref)])
    result = invoke(runner, ["solve", "--cpx", str(cpx), "--boundary",
                             f"file:{ref}", "--out", str(out)])
    assert result.exit_code == 0
    assert np.abs(read_lbl(out).radii - read_lbl(ref).radii).max() <= 1e-9


def test_bad_boundary_spec_is_usage_error(runner, tmp_path):
    cpx = tmp_path / "star.cpx"
    invoke(runner, ["gen", "star", "6", "--out", str(cpx)])
    result = runner.invoke(cli, ["solve", "--cpx", str(cpx), "--boundary",
                                 "gaussian:1", "--out", str(cpx) + ".lbl"])
    assert result.exit_code == 2


def test_layout_csv(runner, tmp_path):
    cpx = tmp_path / "star.cpx"
    lbl = tmp_path / "star.lbl"
    invoke(runner, ["gen", "star", "6", "--out", str(cpx)])
    invoke(runner, ["solve", "--cpx", str(cpx), "--out", str(lbl)])
    result = invoke(runner, ["layout", "--cpx", str(cpx), "--lbl", str(lbl)])
    lines = result.output.splitlines()
    assert lines[0] == "vertex,x,y"
    assert len(lines) == 8


def test_svg_command(runner, tmp_path):
    cpx = tmp_path / "ball.cpx"
    lbl = tmp_path / "ball.lbl"
    out = tmp_path / "ball.svg"
    invoke(runner, ["gen", "hexball", "2", "--out", str(cpx)])
    invoke(runner, ["solve", "--cpx", str(cpx), "--out", str(lbl)])
    result = invoke(runner, ["svg", "--cpx", str(cpx), "--lbl", str(lbl),
                             "--out", str(out), "--carrier"])
    assert result.exit_code == 0
    root = ET.fromstring(out.read_text())
    ns = "{http://www.w3.org/2000/svg}"
    assert len(root.findall(f"{ns}circle")) == 19
    assert len(root.findall(f"{ns}line")) == 42


def test_resist_profile_increases(runner):
    result = invoke(runner, ["resist", "--hexball", "5"])
    lines = result.output.splitlines()
    assert lines[0] == "level,resistance"
    values = [float(ln.split(",")[1]) for ln in lines[1:]]
    assert len(values) == 5
    assert all(b > a for a, b in zip(values, values[1:]))


def test_walk_deterministic(runner, tmp_path):
    args = ["walk", "--hexball", "2", "--trials", "2000", "--seed", "9",
            "--max-steps", "100"]
    a = invoke(runner, args)
    b = invoke(runner, args)
    c = invoke(runner, args + ["--threads", "4"])
    assert a.output == b.output == c.output
    header, row = a.output.splitlines()
    assert header == "trials,estimate,stderr"
    assert row.split(",")[0] == "2000"


def test_dtheta_symmetric_flower(runner):
    result = invoke(runner, ["dtheta", "--star", "6", "--direction",
                             "petals"])
    assert abs(float(result.output) - 2 * math.sqrt(3)) <= 1e-6


def test_liouville_zero_amplitude(runner):
    result = invoke(runner, ["liouville", "--n-max", "3", "--amplitude",
                             "0", "--seed", "5"])
    lines = result.output.splitlines()
    assert lines[0] == "level,inner_osc,boundary_osc"
    for ln in lines[1:]:
        _, inner, outer = ln.split(",")
        assert float(inner) == 1.0
        assert float(outer) == 1.0


def test_liouville_interior_flattens(runner):
    result = invoke(runner, ["liouville", "--n-max", "4", "--amplitude",
                             "0.1", "--seed", "1"])
    for ln in result.output.splitlines()[1:]:
        _, inner, outer = ln.split(",")
        assert float(inner) < float(outer)


def test_liouville_byte_identical_and_threads(runner):
    args = ["liouville", "--n-max", "4", "--amplitude", "0.1", "--seed", "3"]
    a = invoke(runner, args)
    b = invoke(runner, args)
    c = invoke(runner, args + ["--threads", "3"])
    assert a.output == b.output == c.output


def test_uniqueness_empty_branch_matches_liouville(runner):
    a = invoke(runner, ["liouville", "--n-max", "4", "--amplitude", "0.1",
                        "--seed", "2"])
    b = invoke(runner, ["uniqueness", "--n-max", "4", "--branch", "",
                        "--amplitude", "0.1", "--seed", "2"])
    assert a.output == b.output


def test_uniqueness_branched_contracts(runner):
    result = invoke(runner, ["uniqueness", "--n-max", "4", "--branch", "0:1",
                             "--amplitude", "0.1", "--seed", "1"])
    assert result.exit_code == 0
    for ln in result.output.splitlines()[1:]:
        _, inner, outer = ln.split(",")
        assert float(inner) < float(outer)


def test_unknown_flag_is_usage_error(runner):
    result = runner.invoke(cli, ["walk", "--hexball", "2", "--frobnicate"])
    assert result.exit_code == 2
