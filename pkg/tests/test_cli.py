import subprocess
import sys
from pathlib import Path

import pytest

import oracles
from survmap.cli import main
from survmap.errors import StageError
from survmap.harness import ExperimentSpec, run_experiment, run_sweep, sweep_specs
from survmap.instance_io import format_instance, read_instance
from survmap.milp import build_tree_srlg_model, emit_lp, format_solution
from survmap.topologies import fig2_instance

GOLDEN = Path(__file__).parent / "fixtures" / "fig2_tree_srlg.lp"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_verify_fig2(capsys):
    code, out, _ = run(capsys, "verify", "--phys", "FIG2")
    assert code == 0
    row = out.splitlines()[2].split()
    assert row[1:4] == ["Yes", "3", "3"]


def test_verify_reports_failures_with_exit_2(capsys, tmp_path):
    inst = fig2_instance()
    path = tmp_path / "cut.txt"
    text = format_instance(inst.phys, inst.logical, None, inst.mapping)
    path.write_text(text + "srlg r1 0 2\n")
    code, out, _ = run(capsys, "verify", "--phys", str(path))
    assert code == 2 and "failed: r1" in out


def test_heuristic_nsf_cln1(capsys, tmp_path):
    code, out, _ = run(capsys, "heuristic", "--phys", "NSF", "--logical", "CLN1", "--count", "5", "--out", str(tmp_path))
    assert code == 0
    header = out.splitlines()[0].split()
    assert header == ["instance", "Surv", "MaxS", "Total", "PhyS", "Tree#", "LogS", "Augment#"]
    for name in ("instance.txt", "plan.txt", "metrics.csv", "metrics.txt", "timing.csv"):
        assert (tmp_path / name).is_file()
    plan = read_instance(tmp_path / "plan.txt")
    assert plan.mapping.is_complete() and len(plan.srlgs) == 5


def test_heuristic_k_mode(capsys):
    code, out, _ = run(capsys, "heuristic", "--phys", "NSF1", "--logical", "CLN2", "--k", "2")
    assert code == 0 and "231" in out


def test_emit_milp_matches_golden(capsys):
    code, out, _ = run(capsys, "emit-milp", "--phys", "FIG2")
    assert code == 0 and out == GOLDEN.read_text()


def test_emit_milp_to_directory(capsys, tmp_path):
    code, _, _ = run(capsys, "emit-milp", "--phys", "FIG2", "--family", "cut-srlg", "--out", str(tmp_path))
    assert code == 0
    assert (tmp_path / "model.lp").read_text().startswith("\\ family cut-srlg")
    sizes = (tmp_path / "sizes.txt").read_text().splitlines()
    assert sizes[0] == "family cut-srlg  (bound constant C=4)"
    assert sizes[2].split() == ["variables", "68", "68", "40"]


def test_check_solution_round_trip(capsys, tmp_path):
    inst = fig2_instance()
    model = build_tree_srlg_model(inst.phys, inst.logical, inst.srlgs)
    status, _, values = oracles.solve_lp_text(emit_lp(model))
    assert status == "Optimal"
    sol = tmp_path / "fig2.sol"
    sol.write_text(format_solution(values))
    code, out, _ = run(capsys, "check-solution", "--phys", "FIG2", "--solution", str(sol))
    assert code == 0
    assert "PhyS 6" in out and "MaxS 3/3" in out


def test_check_solution_bad_file_exits_1(capsys, tmp_path):
    sol = tmp_path / "bad.sol"
    sol.write_text("y_nope 1\n")
    code, _, err = run(capsys, "check-solution", "--phys", "FIG2", "--solution", str(sol))
    assert code == 1 and err.startswith("error:")


def test_gen_srlg(capsys, tmp_path):
    out_file = tmp_path / "srlg.txt"
    code, out, _ = run(capsys, "gen-srlg", "--phys", "NSF", "--count", "7", "--seed", "3", "--out", str(out_file))
    assert code == 0
    assert len(read_instance(out_file).srlgs) == 7


def test_errors_exit_1(capsys):
    code, _, err = run(capsys, "heuristic", "--phys", "NOPE", "--count", "5")
    assert code == 1 and "load stage failed" in err
    code, _, _ = run(capsys, "gen-srlg", "--phys", "NSF", "--count", "0")
    assert code == 1
    code, _, _ = run(capsys, "verify", "--phys", "/nonexistent/instance.txt")
    assert code == 1


def test_conflicting_failure_flags_are_rejected(capsys):
    with pytest.raises(SystemExit):
        main(["heuristic", "--phys", "NSF", "--logical", "CLN1", "--count", "5", "--k", "1"])


def test_report_sweep(capsys, tmp_path):
    code, out, _ = run(capsys, "report", "--out", str(tmp_path))
    assert code == 0
    assert len(out.splitlines()) == 2 + 24
    assert (tmp_path / "report.csv").read_text().count("\n") == 25


def test_stage_error_names_the_stage():
    with pytest.raises(StageError) as exc:
        run_experiment(ExperimentSpec("NSF", "CLN1", srlg_count=0))
    assert exc.value.stage == "load"
    with pytest.raises(StageError) as exc:
        run_experiment(ExperimentSpec("NSF", "CLN1", pipeline="verify", srlg_count=7))
    assert exc.value.stage == "verify"


def test_harness_outputs_are_reproducible(tmp_path):
    dirs = []
    for i in range(2):
        d = tmp_path / f"run{i}"
        run_experiment(ExperimentSpec("NSF", "CLN2", srlg_count=6, srlg_seed=4, pipeline="full", out_dir=str(d)))
        dirs.append(d)
    names = sorted(p.name for p in dirs[0].iterdir())
    assert names == ["instance.txt", "metrics.csv", "metrics.txt", "model.lp", "plan.txt", "sizes.txt", "timing.csv"]
    for name in names:
        if name != "timing.csv":
            assert (dirs[0] / name).read_bytes() == (dirs[1] / name).read_bytes()


def test_sweep_is_deterministic():
    specs = sweep_specs(counts=(5,), logical=("CLN1",))
    assert run_sweep(specs)[2] == run_sweep(specs)[2]


def test_console_entry_point():
    done = subprocess.run(
        [sys.executable, "-m", "survmap.cli", "verify", "--phys", "FIG2"], capture_output=True, text=True, check=False
    )
    assert done.returncode == 0 and "Yes" in done.stdout
