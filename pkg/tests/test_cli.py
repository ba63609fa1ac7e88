import json
import subprocess
import sys


def run_cli(*args, cwd=None):
    return subprocess.run([sys.executable, "-m", "renormlab", *args],
                          capture_output=True, text=True, cwd=cwd)


def test_fixpoint_report(tmp_path):
    out = tmp_path / "fp.json"
    coeffs = tmp_path / "phi.coeffs.json"
    r = run_cli("fixpoint", "--degree", "12", "--out", str(out),
                "--coeffs-out", str(coeffs), "--no-timestamp")
    assert r.returncode == 0, r.stderr
    report = json.loads(out.read_text())
    assert set(report) == {"lambda", "residual", "newton_iters", "coeffs"}
    assert abs(report["lambda"] - 0.3995) < 5e-4
    assert report["residual"] < 1e-8
    raw = json.loads(coeffs.read_text())
    assert isinstance(raw, list) and raw[0] == 1.0


def test_fixpoint_bad_degree_exits_2():
    r = run_cli("fixpoint", "--degree", "0")
    assert r.returncode == 2


def test_unknown_flag_exits_2():
    r = run_cli("fixpoint", "--frobnicate")
    assert r.returncode == 2


def test_cascade_csv(tmp_path):
    out = tmp_path / "c.json"
    csv_path = tmp_path / "c.csv"
    r = run_cli("cascade", "--family", "logistic", "--nmax", "3",
                "--out", str(out), "--csv", str(csv_path), "--no-timestamp")
    assert r.returncode == 0, r.stderr
    report = json.loads(out.read_text())
    assert report["doubling_params"][0] == [0, 3.0]
    lines = csv_path.read_text().strip().splitlines()
    assert lines[0] == "level,t,delta"
    assert len(lines) == 5
    first = lines[1].split(",")
    assert first[0] == "0" and abs(float(first[1]) - 3.0) < 1e-9


def test_determinism_byte_identical(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for path in (a, b):
        r = run_cli("cascade", "--nmax", "2", "--out", str(path), "--no-timestamp")
        assert r.returncode == 0
    assert a.read_bytes() == b.read_bytes()


def test_timestamp_present_by_default(tmp_path):
    out = tmp_path / "t.json"
    r = run_cli("cascade", "--nmax", "2", "--out", str(out))
    assert r.returncode == 0
    assert "timestamp" in json.loads(out.read_text())


def test_config_file_and_flag_precedence(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("degree=10\ntol=1e-7\n")
    out = tmp_path / "fp.json"
    # flag overrides the config's degree; tol comes from the config
    r = run_cli("fixpoint", "--config", str(cfg), "--degree", "8",
                "--out", str(out), "--no-timestamp")
    assert r.returncode == 0, r.stderr
    report = json.loads(out.read_text())
    assert len(report["coeffs"]) == 9


def test_computation_error_exits_1(tmp_path):
    # atoms cannot be disjoint at a plain period-4 parameter
    out = tmp_path / "atoms.json"
    r = run_cli("attractor", "--t", "3.5", "--generations", "8",
                "--points", "16384", "--out", str(out))
    assert r.returncode == 1
    err = json.loads(r.stdout)
    assert err["error"] == "ResolutionError"
    assert not out.exists()


def test_attractor_report(tmp_path):
    out = tmp_path / "atoms.json"
    csv_path = tmp_path / "atoms.csv"
    r = run_cli("attractor", "--generations", "4", "--points", "8192",
                "--out", str(out), "--csv", str(csv_path), "--no-timestamp")
    assert r.returncode == 0, r.stderr
    report = json.loads(out.read_text())
    assert report["atom_counts"] == [1, 2, 4, 8, 16]
    assert abs(report["lambda_estimate"] - 0.3995) < 0.15 * 0.3995
    lines = csv_path.read_text().strip().splitlines()
    assert lines[0] == "generation,index,center_0,diameter"
    assert len(lines) == 1 + 1 + 2 + 4 + 8 + 16


def test_manifold_report(tmp_path):
    out = tmp_path / "m.json"
    r = run_cli("manifold", "--depth", "6", "--out", str(out), "--no-timestamp")
    assert r.returncode == 0, r.stderr
    report = json.loads(out.read_text())
    assert abs(report["b_value"]) < 1e-5
    assert report["shift_check"] < 1e-5
    grads = dict(report["gradient"])
    assert abs(grads["v0"] + 1.0) < 0.05
    assert abs(grads["2*v0"] + 2.0) < 0.1


def test_bifdiag_csv(tmp_path):
    csv_path = tmp_path / "bif.csv"
    r = run_cli("bifdiag", "--tn", "30", "--keep", "10", "--transient", "150",
                "--csv", str(csv_path), "--no-timestamp")
    assert r.returncode == 0, r.stderr
    lines = csv_path.read_text().strip().splitlines()
    assert lines[0] == "t,x"
    assert len(lines) > 200


def test_bifdiag_jobs_flag_keeps_output(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    r1 = run_cli("bifdiag", "--tn", "20", "--keep", "5", "--csv", str(a),
                 "--jobs", "1", "--no-timestamp")
    r2 = run_cli("bifdiag", "--tn", "20", "--keep", "5", "--csv", str(b),
                 "--jobs", "4", "--no-timestamp")
    assert r1.returncode == 0 and r2.returncode == 0
    assert a.read_bytes() == b.read_bytes()


def test_ndcheck_single_level(tmp_path):
    out = tmp_path / "nd.json"
    r = run_cli("ndcheck", "--levels", "1", "--degree", "16",
                "--out", str(out), "--no-timestamp")
    assert r.returncode == 0, r.stderr
    report = json.loads(out.read_text())
    assert report["all_passed"]
    level = report["levels"][0]
    assert level["check"]["disjoint_margin"] > 1e-3
    assert level["check"]["inside_margin"] > 1e-3
    assert "disk" in level
