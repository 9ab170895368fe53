import csv
import io
import json

import numpy as np
import pytest

from noisybell.cli import main
from noisybell.linalg import matrix_to_json
from noisybell.report import CSV_COLUMNS, success_report, write_csv
from noisybell.states import bell_projector, random_density_matrix


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def values(text):
    rows = {}
    for line in text.splitlines():
        parts = line.rsplit(None, 1)
        if len(parts) == 2:
            rows[parts[0].strip()] = parts[1]
    return rows


def test_report_bell_basis(capsys):
    code, out, _ = run(capsys, "report", "--lambda", "1.0")
    assert code == 0
    v = values(out)
    assert float(v["p_local (computational-basis protocol)"]) == pytest.approx(0.5, abs=1e-12)
    assert float(v["p_global (solver)"]) == pytest.approx(1.0, abs=1e-8)


def test_report_zero_lambda(capsys):
    code, out, _ = run(capsys, "report", "--lambda", "0")
    assert code == 0
    v = values(out)
    for key in ("p_local (computational-basis protocol)", "p_ppt (solver)", "p_global (solver)"):
        assert float(v[key]) == pytest.approx(0.25, abs=1e-12)


def test_report_assisted_at_zero_epsilon(capsys):
    code, out, _ = run(capsys, "report", "--lambda", "0.5", "--epsilon", "0.0", "--csv")
    assert code == 0
    v = values(out)
    assert float(v["p_local_assisted (teleportation)"]) == pytest.approx(0.625, abs=1e-12)
    row = next(csv.DictReader(io.StringIO(out[out.index("lambda,"):])))
    assert float(row["p_local_assisted"]) == pytest.approx(float(row["p_global_sdp"]), abs=1e-8)


def test_report_matches_library_to_printed_precision(capsys):
    code, out, _ = run(capsys, "report", "--lambda", "0.37", "--csv")
    lib = success_report(0.37)
    row = next(csv.DictReader(io.StringIO(out[out.index("lambda,"):])))
    assert float(row["p_global_sdp"]) == lib.p_global
    assert float(values(out)["p_global (solver)"]) == float(f"{lib.p_global:.12g}")


@pytest.mark.parametrize("argv,trace", [
    (("--lambda", "0.7"), 0.425),
    (("--lambda", "0.5", "--epsilon", "0.6"), 0.575),
    (("--lambda", "0"), 0.25),
])
def test_certify(capsys, argv, trace):
    code, out, _ = run(capsys, "certify", *argv)
    assert code == 0
    assert "feasible: True" in out
    assert float(out.split("trace ")[1].split()[0]) == pytest.approx(trace, abs=1e-12)


def test_certify_random_sigma_needs_seed(capsys):
    code, _, err = run(capsys, "certify", "--lambda", "0.5", "--sigma", "random")
    assert code == 1 and "--seed" in err
    code, out, _ = run(capsys, "certify", "--lambda", "0.5", "--sigma", "random", "--seed", "3")
    assert code == 0


def test_usage_errors_exit_one(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["report", "--lambda", "1.5"])
    assert exc.value.code == 1
    with pytest.raises(SystemExit) as exc:
        main(["bogus"])
    assert exc.value.code == 1
    code, _, err = run(capsys, "report", "--lambda", "0.5", "--sigma", "/no/such/file.json")
    assert code == 1 and "/no/such/file.json" in err


def test_sigma_from_json_file(tmp_path, capsys):
    sigma = random_density_matrix(4, 12)
    path = tmp_path / "sigma.json"
    path.write_text(json.dumps(matrix_to_json(sigma.matrix)))
    code, out, _ = run(capsys, "report", "--lambda", "0.4", "--sigma", str(path))
    assert code == 0
    assert float(values(out)["p_ppt (solver)"]) == pytest.approx(0.35, abs=1e-8)
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(matrix_to_json(np.eye(4))))
    code, _, err = run(capsys, "report", "--lambda", "0.4", "--sigma", str(bad))
    assert code == 1


def read_sweep(path):
    with open(path) as fh:
        return list(csv.DictReader(fh))


def test_sweep_grid(tmp_path, capsys):
    out = tmp_path / "grid.csv"
    code, _, err = run(capsys, "sweep", "--lambda", "0:1:11", "--epsilon", "0:1:11", "--out", str(out))
    assert code == 0 and "121 rows" in err
    rows = read_sweep(out)
    assert len(rows) == 121
    assert tuple(rows[0]) == CSV_COLUMNS
    lams = [float(r["lambda"]) for r in rows]
    assert lams == sorted(lams)
    assert [float(r["epsilon"]) for r in rows[:11]] == pytest.approx([k / 10 for k in range(11)])
    for r in rows:
        lo, ppt, hi = float(r["p_local"]), float(r["p_ppt_sdp"]), float(r["p_global_sdp"])
        assert lo <= ppt + 1e-8 and ppt <= hi + 1e-9
        assert r["feasible"] == "True"


def test_sweep_zero_epsilon_matches_global(capsys):
    code, out, _ = run(capsys, "sweep", "--lambda", "0.2,0.6,1", "--epsilon", "0")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 3
    for r in rows:
        assert float(r["p_local_assisted"]) == pytest.approx(float(r["p_global_sdp"]), abs=1e-8)


def test_sweep_random_sigma_ppt_constant(capsys):
    code, out, _ = run(capsys, "sweep", "--lambda", "0.6", "--sigma", "random", "--seed", "4",
                       "--samples", "5")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and len(rows) == 5
    ppt = [float(r["p_ppt_sdp"]) for r in rows]
    assert max(ppt) - min(ppt) < 1e-6


def test_sweep_unwritable_path(capsys):
    code, _, err = run(capsys, "sweep", "--lambda", "0.5", "--out", "/no/such/dir/x.csv")
    assert code == 1 and "/no/such/dir/x.csv" in err


def ensemble_json(states, probs, dims=(2, 2), alice=(0,)):
    return {"dims": list(dims), "alice": list(alice),
            "members": [{"p": p, "state": matrix_to_json(s)} for p, s in zip(probs, states)]}


def test_solve_command(tmp_path, capsys):
    path = tmp_path / "bell.json"
    path.write_text(json.dumps(ensemble_json([bell_projector(i) for i in range(1, 5)], [0.25] * 4)))
    code, out, _ = run(capsys, "solve", "--input", str(path), "--cone", "ppt")
    result = json.loads(out)
    assert code == 0 and result["converged"]
    assert result["primal_value"] == pytest.approx(0.5, abs=1e-6)
    assert len(result["povm"]) == 4
    code, out, _ = run(capsys, "solve", "--input", str(path), "--cone", "all")
    assert json.loads(out)["primal_value"] == pytest.approx(1.0, abs=1e-6)


def test_solve_nonconvergence_exit_code(tmp_path, capsys):
    path = tmp_path / "e.json"
    s1, s2 = random_density_matrix(4, 1).matrix, random_density_matrix(4, 2).matrix
    path.write_text(json.dumps(ensemble_json([s1, s2], [0.5, 0.5])))
    code, out, _ = run(capsys, "solve", "--input", str(path), "--max-iters", "2")
    assert code == 3
    assert json.loads(out)["converged"] is False


def test_solve_verbose_streams_diagnostics(tmp_path, capsys):
    path = tmp_path / "bell.json"
    path.write_text(json.dumps(ensemble_json([bell_projector(i) for i in range(1, 5)], [0.25] * 4)))
    code, _, err = run(capsys, "solve", "--input", str(path), "--verbose")
    assert err.startswith("iteration,objective")


def test_teleport_command(capsys):
    code, out, _ = run(capsys, "teleport", "--lambda", "0.5", "--epsilon", "0.6", "--mode", "listed")
    result = json.loads(out)
    assert code == 0
    assert result["achieved_probability"] == pytest.approx(0.575, abs=1e-12)
    assert len(result["post_states"]) == 4
    with pytest.raises(SystemExit) as exc:
        main(["teleport", "--lambda", "0.5"])
    assert exc.value.code == 1


def test_write_csv_round_trip():
    buf = io.StringIO()
    assert write_csv([success_report(0.3, 0.2)], buf) == 1
    row = next(csv.DictReader(io.StringIO(buf.getvalue())))
    assert float(row["certificate_trace"]) == pytest.approx((1 + 0.3 + 0.6 * np.sqrt(0.96)) / 4)
