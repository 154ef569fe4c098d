import json

from coxmulti.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_info_b3(capsys):
    code, out, _ = run(capsys, "info", "--family", "B", "--rank", "3")
    assert code == 0
    assert "hyperplanes 9 = 3 + 6" in out
    assert "degrees W  [2, 4, 6] (h = 6)" in out
    assert "(h1 = 2)" in out and "(h2 = 4)" in out


def test_info_g2_json(capsys):
    code, out, _ = run(capsys, "info", "--family", "G2", "--format", "json")
    assert code == 0
    blob = json.loads(out)
    assert blob["hyperplanes"] == 6 and blob["orbit_sizes"] == [3, 3]
    assert blob["h1"] == blob["h2"] == 3


def test_info_bad_family(capsys):
    code, _, err = run(capsys, "info", "--family", "H3")
    assert code == 2


def test_missing_subcommand(capsys):
    assert main([]) == 2


def test_basis_b2_case1(tmp_path, capsys):
    out_file = tmp_path / "cert.json"
    code, out, _ = run(capsys, "basis", "--family", "B", "--rank", "2",
                       "--p", "1", "--q", "1", "--case", "1", "--out", str(out_file))
    assert code == 0
    blob = json.loads(out_file.read_text())
    assert blob["exponents"] == [1, 3]
    assert blob["multiplicity"] == {"m1": 1, "m2": 1}


def test_basis_g2_multiplicity_route(tmp_path, capsys):
    out_file = tmp_path / "cert_g2.json"
    code, out, _ = run(capsys, "basis", "--family", "G2",
                       "--m1", "3", "--m2", "1", "--out", str(out_file))
    assert code == 0
    blob = json.loads(out_file.read_text())
    assert blob["case"] == "rank2"
    assert sum(blob["exponents"]) == 3 * 3 + 3 * 1


def test_basis_usage_error(capsys):
    code, _, err = run(capsys, "basis", "--family", "B", "--rank", "2")
    assert code == 2


def test_verify_roundtrip(tmp_path, capsys):
    out_file = tmp_path / "cert.json"
    run(capsys, "basis", "--family", "B", "--rank", "2",
        "--m1", "2", "--m2", "0", "--out", str(out_file))
    code, out, _ = run(capsys, "verify", str(out_file))
    assert code == 0
    assert json.loads(out)["failures"] == []


def test_verify_detects_perturbation(tmp_path, capsys):
    out_file = tmp_path / "cert.json"
    run(capsys, "basis", "--family", "B", "--rank", "2",
        "--p", "1", "--q", "1", "--case", "1", "--out", str(out_file))
    blob = json.loads(out_file.read_text())
    blob["basis"][0]["coeffs"][0]["num"]["terms"][0][1] = ["917", "1"]
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(blob))
    code, out, _ = run(capsys, "verify", str(bad))
    assert code == 4
    assert json.loads(out)["failures"]


def test_verify_accepts_permuted_basis(tmp_path, capsys):
    out_file = tmp_path / "cert.json"
    run(capsys, "basis", "--family", "B", "--rank", "2",
        "--p", "1", "--q", "1", "--case", "1", "--out", str(out_file))
    blob = json.loads(out_file.read_text())
    blob["basis"] = blob["basis"][::-1]
    blob["exponents"] = blob["exponents"][::-1]
    perm = tmp_path / "perm.json"
    perm.write_text(json.dumps(blob))
    code, out, _ = run(capsys, "verify", str(perm))
    assert code == 0


def test_verify_parse_error(tmp_path, capsys):
    bad = tmp_path / "junk.json"
    bad.write_text("{not json")
    code, _, _ = run(capsys, "verify", str(bad))
    assert code == 2


def test_sweep_deterministic(capsys):
    # wall-clock runtime_ms is the only column allowed to vary between runs
    args = ["sweep", "--family", "B", "--rank", "2", "--m-min", "-1", "--m-max", "1"]
    code1, out1, _ = run(capsys, *args)
    code2, out2, _ = run(capsys, *args)
    assert code1 == code2 == 0
    strip = lambda text: [line.rsplit(",", 1)[0] for line in text.strip().splitlines()]
    assert strip(out1) == strip(out2)
    lines = out1.strip().splitlines()
    assert lines[0] == "family,params,m1,m2,case,exponents,saito_c,runtime_ms"
    assert len(lines) == 1 + 9


def test_sweep_json(capsys):
    code, out, _ = run(capsys, "sweep", "--family", "G2",
                       "--m-min", "0", "--m-max", "1", "--format", "json")
    assert code == 0
    blob = json.loads(out)
    assert len(blob["cells"]) == 4
    assert all(cell["ok"] for cell in blob["cells"])


def test_sweep_worker_pool(capsys, monkeypatch):
    monkeypatch.setenv("COXMULTI_WORKERS", "2")
    code, out, _ = run(capsys, "sweep", "--family", "B", "--rank", "2",
                       "--m-min", "0", "--m-max", "1")
    assert code == 0
    lines = out.strip().splitlines()
    assert len(lines) == 1 + 4
    assert lines[1].startswith("B,rank=2,0,0,4,0|0")


def test_info_i2_n10(capsys):
    code, out, _ = run(capsys, "info", "--family", "I2", "--n", "10")
    assert code == 0
    assert "hyperplanes 20 = 10 + 10" in out
    assert "(h1 = 10)" in out
