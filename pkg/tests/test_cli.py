import json

import pytest
from click.testing import CliRunner

from strata.cli import main


@pytest.fixture()
def runner():
    return CliRunner()


def test_r0_calibrated_baseline(runner):
    result = runner.invoke(main, ["r0", "--calibrate", "2.854"])
    assert result.exit_code == 0
    assert "R0 = 2.854" in result.output


def test_r0_horizontal_a(runner):
    result = runner.invoke(main, ["r0", "--horizontal-a", "0.7"])
    assert result.exit_code == 0
    assert "R0 = 1.998" in result.output


def test_r0_cohort_flags(runner):
    result = runner.invoke(main, ["r0", "--wb", "1,2,3,4,5", "-a", "0.5"])
    assert result.exit_code == 0
    assert "R0 = 1.427" in result.output


def test_r0_raw_json(runner):
    result = runner.invoke(main, ["r0", "--raw"])
    assert result.exit_code == 0
    doc = json.loads(result.output)
    assert doc["r0"] == pytest.approx(2.854, rel=1e-9)


def test_r0_corrupt_config_exits_2(runner, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    result = runner.invoke(main, ["r0", "--params", str(bad)])
    assert result.exit_code == 2


def test_r0_invalid_field_exits_2(runner, tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"epsilon": 1.5}))
    result = runner.invoke(main, ["r0", "--params", str(cfg)])
    assert result.exit_code == 2
    assert "epsilon" in result.output


def test_grades_table(runner):
    result = runner.invoke(main, ["grades"])
    assert result.exit_code == 0
    lines = result.output.strip().splitlines()
    assert len(lines) == 11
    assert "0.285" in lines[2]
    assert "2.569" in lines[-1]


def test_grades_rejects_out_of_range(runner):
    result = runner.invoke(main, ["grades", "--a-values", "1.2"])
    assert result.exit_code == 2


def test_sweep_small_grid_csv(runner, tmp_path):
    out = tmp_path / "grid.csv"
    result = runner.invoke(main, ["sweep", "--wb", "1,2,3", "--wg", "4,5",
                                  "--res", "4", "--out", str(out)])
    assert result.exit_code == 0
    lines = out.read_text().splitlines()
    assert len(lines) == 5
    # corner value in the last row/column is the calibrated baseline
    assert lines[-1].split(",")[-1] == "2.854000"


def test_sweep_res_too_small_exits_2(runner):
    result = runner.invoke(main, ["sweep", "--res", "1"])
    assert result.exit_code == 2


def test_sweep_json_deterministic(runner):
    args = ["sweep", "--row", "12", "--res", "3", "--format", "json"]
    first = runner.invoke(main, args)
    second = runner.invoke(main, args)
    assert first.exit_code == 0
    assert first.output == second.output


def test_locus_contract(runner):
    result = runner.invoke(main, ["locus", "--row", "1", "--grade", "M"])
    assert result.exit_code == 0
    lines = result.output.strip().splitlines()[1:]
    assert len(lines) == 3
    for line in lines:
        assert float(line.split()[-1]) == pytest.approx(1.427, rel=1.5e-3)


def test_locus_uncovered_exits_2(runner):
    result = runner.invoke(main, ["locus", "--row", "7", "--grade", "H"])
    assert result.exit_code == 2


def test_table_single_grade(runner):
    result = runner.invoke(main, ["table", "--grades", "0.2", "--no-loci",
                                  "--format", "csv"])
    assert result.exit_code == 0
    lines = result.output.strip().splitlines()
    assert lines[0].split(",")[1] == "G1"
    assert len(lines) == 18   # header + 16 rows + social coverage


def test_table_empty_catalog_exits_2(runner, tmp_path):
    empty = tmp_path / "subs.json"
    empty.write_text(json.dumps({"substrategies": []}))
    result = runner.invoke(main, ["table", "--substrategies", str(empty)])
    assert result.exit_code == 2


def test_table_footer_total_coverage(runner):
    result = runner.invoke(main, ["table", "--no-loci"])
    assert result.exit_code == 0
    footer = result.output.strip().splitlines()[-1]
    assert footer.startswith("| Social coverage")
    assert "66.66%" in footer
    assert "31.25%" in footer and "68.75%" in footer and "100.00%" in footer
