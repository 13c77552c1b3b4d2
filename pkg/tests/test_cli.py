import json

import numpy as np
import pytest

from numrange import cli


@pytest.fixture
def matrix_file(tmp_path):
    def write(name, A):
        A = np.asarray(A, dtype=complex)
        doc = cli.matrix_dict(A)
        path = tmp_path / f"{name}.json"
        path.write_text(json.dumps(doc))
        return str(path)

    return write


def run_cli(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_parse_matrix_roundtrip(tmp_path, matrix_file):
    A = np.array([[0.1 + 0.25j, 2], [0, -1.5j]], dtype=complex)
    path = matrix_file("a", A)
    B = cli.parse_matrix(path)
    assert np.array_equal(A, B)  # bit-for-bit
    C = cli.parse_matrix(path)
    assert np.array_equal(B, C)


def test_parse_matrix_diagnostics(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text('{"d": 2, "re": [[0,2],[0,0]]}')
    with pytest.raises(cli.MatrixFileError, match="missing field 'im'"):
        cli.parse_matrix(str(p))
    p.write_text('{"d": 2, "re": [[0,2],[0,0]], "im": [[0,0]]}')
    with pytest.raises(cli.MatrixFileError, match="'im' must be a 2x2"):
        cli.parse_matrix(str(p))
    p.write_text("{not json")
    with pytest.raises(cli.MatrixFileError, match="line 1"):
        cli.parse_matrix(str(p))


def test_classify3_command(capsys, matrix_file):
    path = matrix_file("cp", [[0, 2, 0], [0, 0, 0], [0, 0, 2]])
    code, out, err = run_cli(capsys, "classify3", path)
    assert code == 0
    doc = json.loads(out)
    assert doc["class"] == "R3"
    assert doc["shape"] == "ellipse_plus_outside_point"


def test_boundary_command_csv(capsys, matrix_file):
    path = matrix_file("disk", [[0, 2], [0, 0]])
    code, out, err = run_cli(capsys, "boundary", path, "--samples", "64")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "x,y"
    pts = np.array([[float(v) for v in line.split(",")] for line in lines[1:]])
    assert np.allclose(np.hypot(pts[:, 0], pts[:, 1]), 1.0, atol=1e-9)


def test_boundary_deterministic(capsys, matrix_file):
    path = matrix_file("m", np.array([[0.3, 1 + 2j, 0], [0, -0.5, 1], [0.2j, 0, 0.1]]))
    _, out1, _ = run_cli(capsys, "boundary", path, "--samples", "128")
    _, out2, _ = run_cli(capsys, "boundary", path, "--samples", "128", "--threads", "4")
    assert out1 == out2


def test_birth_command(capsys, matrix_file):
    path = matrix_file("deb", [[0, 2, 0], [0, 0, 0], [0, 0, 1]])
    code, out, err = run_cli(capsys, "birth", path, "--point", "1,0", "--eps", "0.1")
    assert code == 0
    doc = json.loads(out)
    row = doc["table"][0]
    assert row["flat_length"] == pytest.approx(0.1, abs=1e-8)
    assert row["hausdorff_to_alpha"] == pytest.approx(0.1 * np.sqrt(2), abs=1e-8)
    assert len(doc["members"]) == 1


def test_birth_simply_generated_exit3(capsys, matrix_file):
    path = matrix_file("disk", [[0, 2], [0, 0]])
    code, out, err = run_cli(capsys, "birth", path, "--point", "1,0")
    assert code == 3
    assert "simply generated" in err


def test_missing_field_exit2(capsys, tmp_path):
    p = tmp_path / "noim.json"
    p.write_text('{"d": 2, "re": [[0,2],[0,0]]}')
    code, out, err = run_cli(capsys, "classify3", str(p))
    assert code == 2
    assert "missing field 'im'" in err


def test_unknown_flag_exit1(capsys, matrix_file):
    path = matrix_file("disk", [[0, 2], [0, 0]])
    code, out, err = run_cli(capsys, "boundary", path, "--bogus")
    assert code == 1
    assert "usage" in err.lower()


def test_extremes_and_preimage_commands(capsys, matrix_file):
    path = matrix_file("deb", [[0, 2, 0], [0, 0, 0], [0, 0, 1]])
    code, out, _ = run_cli(capsys, "preimage", path, "--point", "1,0")
    assert code == 0
    doc = json.loads(out)
    assert doc["dimension"] == 2
    code, out, _ = run_cli(capsys, "extremes", path, "--samples", "128")
    assert code == 0
    reports = json.loads(out)
    mg = [r for r in reports if r["multiply_generated"]]
    assert len(mg) == 1
    assert np.allclose(mg[0]["point"], [1.0, 0.0], atol=1e-9)


def test_flat_command(capsys, matrix_file):
    path = matrix_file("cp", [[0, 2, 0], [0, 0, 0], [0, 0, 2]])
    code, out, _ = run_cli(capsys, "flat", path)
    assert code == 0
    doc = json.loads(out)
    assert len(doc) == 2
    assert doc[0]["theta"] == pytest.approx(np.pi / 3, abs=1e-9)


def test_closure3_command(capsys, matrix_file):
    path = matrix_file("a1", [[0, 2, 0], [0, 0, 0], [0, 0, 1]])
    code, out, _ = run_cli(capsys, "closure3", path, "--eps", "0.01")
    assert code == 0
    doc = json.loads(out)
    assert doc["in_closure_E3"] and doc["in_closure_F3"]
    assert doc["e3_witness"] is not None and doc["f3_witness"] is not None
    path = matrix_file("a05", [[0, 2, 0], [0, 0, 0], [0, 0, 0.5]])
    code, out, _ = run_cli(capsys, "closure3", path, "--eps", "0.01")
    doc = json.loads(out)
    assert doc["in_closure_E3"] and not doc["in_closure_F3"]
    assert doc["f3_witness"] is None


def test_canonical3_command(capsys, matrix_file):
    path = matrix_file("seg", np.diag([1.0, 3.0, 5.0]))
    code, out, _ = run_cli(capsys, "canonical3", path)
    assert code == 0
    doc = json.loads(out)
    assert doc["form"] == "diag_0_lambda_1"
    assert doc["lambda"] == pytest.approx(0.5)


def test_hausdorff_command(capsys, matrix_file):
    pa = matrix_file("d1", [[0, 2], [0, 0]])
    pb = matrix_file("d2", [[0, 4], [0, 0]])
    code, out, _ = run_cli(capsys, "hausdorff", pa, pb)
    assert code == 0
    assert json.loads(out)["hausdorff"] == pytest.approx(1.0, abs=1e-4)


def test_maxent_and_probe_commands(capsys, matrix_file):
    path = matrix_file("deb", [[0, 2, 0], [0, 0, 0], [0, 0, 1]])
    code, out, _ = run_cli(capsys, "maxent", path, "--point", "0,0")
    assert code == 0
    doc = json.loads(out)
    assert doc["entropy"] >= np.log(2) - 1e-9
    assert doc["dual_point"] is not None
    code, out, _ = run_cli(capsys, "maxent", path, "--point", "1,0")
    doc = json.loads(out)
    assert doc["entropy"] == pytest.approx(np.log(2), abs=1e-6)
    assert doc["dual_point"] is None
    code, out, _ = run_cli(capsys, "probe", path, "--point", "1,0")
    assert code == 0
    doc = json.loads(out)
    assert doc["discontinuous"] is True
    assert doc["boundary_limit"] <= 1e-3


def test_probe_exit3_on_simply_generated(capsys, matrix_file):
    path = matrix_file("disk", [[0, 2], [0, 0]])
    code, out, err = run_cli(capsys, "probe", path, "--point", "1,0")
    assert code == 3
    assert "simply generated" in err


def test_oracle_command(capsys, matrix_file):
    path = matrix_file("disk", [[0, 2], [0, 0]])
    code, out, _ = run_cli(capsys, "oracle", path, "--n", "20000", "--seed", "3")
    assert code == 0
    doc = json.loads(out)
    assert doc["gap"] <= 2e-2
    _, out2, _ = run_cli(capsys, "oracle", path, "--n", "20000", "--seed", "3")
    assert out == out2  # byte-identical for identical inputs


def test_matrix_dict_roundtrip_through_json():
    A = np.array([[1 / 3, 0.1 + 0.7j], [np.pi, -1e-17j]], dtype=complex)
    doc = json.loads(json.dumps(cli.matrix_dict(A)))
    B = np.asarray(doc["re"]) + 1j * np.asarray(doc["im"])
    assert np.array_equal(A, B)
