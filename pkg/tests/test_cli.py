import json
import os
import subprocess
import sys

import numpy as np
import pytest

from selfmetric.cli import RunConfig, build_parser, run

MODULE_CMD = [sys.executable, "-m", "selfmetric"]


def invoke(args, env_extra=None, cwd=None):
    env = dict(os.environ)
    env.pop("SELFMETRIC_THREADS", None)
    if env_extra:
        env.update(env_extra)
    return subprocess.run(MODULE_CMD + args, capture_output=True, text=True,
                          env=env, cwd=cwd)


@pytest.fixture(scope="module")
def shapes(tmp_path_factory):
    root = tmp_path_factory.mktemp("shapes")
    (root / "tri.json").write_text(json.dumps(
        {"type": "polygon2", "vertices": [[0, 0], [1, 0], [0, 1]]}))
    cube_verts = [[s, t, u] for s in (-1, 1) for t in (-1, 1) for u in (-1, 1)]
    (root / "cube3.json").write_text(json.dumps(
        {"type": "polytope", "dim": 3, "vertices": cube_verts}))
    (root / "disk.json").write_text(json.dumps(
        {"type": "radius_profile", "coeffs": [[0, 1.0, 0.0]]}))
    (root / "phi4.json").write_text(json.dumps(
        {"coeffs": [[4, 0.5, 0.0]], "epsilon": 0.001}))
    return root


def test_perimeter_polygon_both_variants(shapes):
    out = invoke(["perimeter", "--shape", str(shapes / "tri.json"), "--variant", "both"])
    assert out.returncode == 0
    lines = out.stdout.strip().splitlines()
    assert lines[0] == "body_id,variant,method,value,nodes"
    assert len(lines) == 3
    directed = lines[1].split(",")
    busemann = lines[2].split(",")
    assert directed[1] == "directed" and busemann[1] == "busemann"
    assert float(directed[3]) == pytest.approx(9.0, abs=1e-12)
    assert float(busemann[3]) == pytest.approx(9.0, abs=1e-12)


def test_perimeter_off_center(shapes):
    out = invoke(["perimeter", "--shape", str(shapes / "tri.json"),
                  "--center", "0.25,0.25"])
    assert out.returncode == 0
    value = float(out.stdout.strip().splitlines()[1].split(",")[3])
    assert value > 9.0


def test_perimeter_smooth_profile(shapes):
    out = invoke(["perimeter", "--shape", str(shapes / "disk.json"), "--nodes", "128"])
    assert out.returncode == 0
    row = out.stdout.strip().splitlines()[1].split(",")
    assert row[2] == "quadrature" and row[4] == "128"
    assert float(row[3]) == pytest.approx(2.0 * np.pi, abs=1e-12)


def test_perimeter_polytope_surface_measure(shapes):
    out = invoke(["perimeter", "--shape", str(shapes / "cube3.json")])
    assert out.returncode == 0
    row = out.stdout.strip().splitlines()[1].split(",")
    assert row[2] == "surface-measure"
    assert float(row[3]) == pytest.approx(24.0, rel=1e-12)


def test_volume_json_and_facet_csv(shapes, tmp_path):
    out_json = tmp_path / "vol.json"
    out_csv = tmp_path / "facets.csv"
    out = invoke(["volume", "--shape", str(shapes / "cube3.json"),
                  "--out", str(out_json), "--csv", str(out_csv)])
    assert out.returncode == 0
    doc = json.loads(out_json.read_text())
    assert doc["value"] == pytest.approx(8.0, abs=1e-9)
    assert doc["dim"] == 3 and len(doc["facets"]) == 6
    rows = out_csv.read_text().strip().splitlines()
    assert rows[0].startswith("facet_index,")
    assert len(rows) == 7


def test_volume_rejects_polygon(shapes):
    out = invoke(["volume", "--shape", str(shapes / "tri.json")])
    assert out.returncode == 1
    err = json.loads(out.stderr)
    assert err["error"]["type"] == "config"


def test_center_rows_converge(shapes):
    out = invoke(["center", "--shape", str(shapes / "tri.json"),
                  "--restarts", "3", "--seed", "5"])
    assert out.returncode == 0
    lines = out.stdout.strip().splitlines()
    assert lines[0] == "seed,optimum_x,optimum_y,value,iterations"
    assert len(lines) == 4
    for line in lines[1:]:
        seed, x, y, value, iters = line.split(",")
        assert np.hypot(float(x) - 1 / 3, float(y) - 1 / 3) < 1e-6
        assert float(value) == pytest.approx(9.0, abs=1e-9)
    assert [r.split(",")[0] for r in lines[1:]] == ["5", "6", "7"]


def test_kgon_table_values():
    out = invoke(["kgon-table", "--k-max", "6"])
    assert out.returncode == 0
    lines = out.stdout.strip().splitlines()
    assert lines[0] == "k,closed_form,polygon_exact,abs_diff"
    table = {int(r.split(",")[0]): float(r.split(",")[1]) for r in lines[1:]}
    assert table[4] == pytest.approx(8.0, abs=1e-12)
    assert table[6] == pytest.approx(6.0, abs=1e-12)
    assert all(float(r.split(",")[3]) < 1e-10 for r in lines[1:])


def test_alexandrov_result_document(shapes, tmp_path):
    out_json = tmp_path / "rec.json"
    out = invoke(["alexandrov", "--phi", str(shapes / "phi4.json"),
                  "--nodes", "1024", "--out", str(out_json)])
    assert out.returncode == 0
    doc = json.loads(out_json.read_text())
    assert doc["epsilon"] == 0.001
    assert abs(doc["phi0"]) < 1e-10
    assert doc["residual"] <= 5e-3
    assert doc["residual_classical"] <= doc["residual"]
    assert doc["svg"].startswith("<svg")
    ks = [k for k, _, _ in doc["radius_coeffs"]]
    assert 0 in ks and 4 in ks


def test_alexandrov_epsilon_override(shapes):
    out = invoke(["alexandrov", "--phi", str(shapes / "phi4.json"),
                  "--nodes", "512", "--epsilon", "0.0"])
    assert out.returncode == 0
    doc = json.loads(out.stdout)
    assert doc["epsilon"] == 0.0 and doc["residual"] == 0.0


def test_alexandrov_needs_aligned_harmonic(tmp_path):
    bad = tmp_path / "phi2.json"
    bad.write_text(json.dumps({"coeffs": [[2, 0.5, 0.0]], "epsilon": 0.01}))
    out = invoke(["alexandrov", "--phi", str(bad)])
    assert out.returncode == 1
    assert json.loads(out.stderr)["error"]["type"] == "density"


def test_invariance_check_passes(shapes):
    out = invoke(["invariance-check", "--shape", str(shapes / "cube3.json"),
                  "--trials", "6", "--tolerance", "1e-6"])
    assert out.returncode == 0
    lines = out.stdout.strip().splitlines()
    assert len(lines) == 7
    assert all(float(r.split(",")[2]) < 1e-6 for r in lines[1:])


def test_conjecture_search_dim2_bounds():
    out = invoke(["conjecture-search", "--dim", "2", "--trials", "4",
                  "--steps", "12", "--tolerance", "1e-2"])
    assert out.returncode == 0
    doc = json.loads(out.stdout)
    assert doc["within_conjecture"]
    assert doc["max_found"] <= 4.0 + 1e-2
    assert doc["min_found"] >= 3.0 - 1e-2
    assert doc["conjectured_max"] == 4.0 and doc["conjectured_min"] == 3.0


def test_outputs_identical_across_thread_counts(shapes):
    args = ["invariance-check", "--shape", str(shapes / "cube3.json"), "--trials", "8"]
    single = invoke(args, env_extra={"SELFMETRIC_THREADS": "1"})
    pooled = invoke(args, env_extra={"SELFMETRIC_THREADS": "4"})
    assert single.returncode == pooled.returncode == 0
    assert single.stdout == pooled.stdout


def test_bad_thread_env_is_reported():
    out = invoke(["kgon-table", "--k-max", "4"], env_extra={"SELFMETRIC_THREADS": "zero"})
    assert out.returncode == 1
    assert json.loads(out.stderr)["error"]["type"] == "config"


def test_shape_format_error_carries_field(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"type": "polygon2", "vertices": [[0, 0], [1, 0]]}))
    out = invoke(["perimeter", "--shape", str(bad)])
    assert out.returncode == 1
    err = json.loads(out.stderr)["error"]
    assert err["type"] == "shape-format" and err["field"] == "vertices"


def test_missing_file_is_io_error(tmp_path):
    out = invoke(["perimeter", "--shape", str(tmp_path / "nope.json")])
    assert out.returncode == 1
    assert json.loads(out.stderr)["error"]["type"] == "io"


def test_node_floor_is_config_error(shapes):
    out = invoke(["perimeter", "--shape", str(shapes / "disk.json"), "--nodes", "8"])
    assert out.returncode == 1
    assert json.loads(out.stderr)["error"]["type"] == "config"


def test_run_config_validation_direct():
    cfg = RunConfig(command="kgon-table", k_max=2)
    with pytest.raises(ValueError):
        cfg.validate()
    cfg = RunConfig(command="perimeter", tolerance=0.5)
    with pytest.raises(ValueError):
        cfg.validate()
    cfg = RunConfig(command="conjecture-search", dim=7)
    with pytest.raises(ValueError):
        cfg.validate()


def test_parser_covers_all_subcommands():
    parser = build_parser()
    for name in ("perimeter", "volume", "center", "kgon-table", "alexandrov",
                 "invariance-check", "conjecture-search"):
        args = parser.parse_args([name] + (
            ["--shape", "x.json"] if name in ("perimeter", "volume", "center",
                                              "invariance-check") else
            ["--phi", "x.json"] if name == "alexandrov" else []))
        assert args.command == name


def test_run_returns_exit_code_not_raises(tmp_path):
    cfg = RunConfig(command="perimeter", shape=str(tmp_path / "missing.json"))
    assert run(cfg) == 1
