import json

from conftest import A1, A2, D24
from vlplus.cli import EXIT_INCOMPLETE, EXIT_INVALID, EXIT_OK, main


def write_gram(tmp_path, gram, name="gram.json"):
    path = tmp_path / name
    path.write_text(json.dumps({"gram": gram}))
    return str(path)


def run_cli(capsys, argv):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_analyze_a2(tmp_path, capsys):
    gram = write_gram(tmp_path, A2)
    code, out, _ = run_cli(capsys, ["analyze", "--gram", gram])
    assert code == EXIT_OK
    lines = dict(l.split("\t") for l in out.strip().splitlines())
    assert lines["det"] == "3"
    assert lines["discriminant_group"] == "Z/3"
    assert lines["norm2_count"] == "6"
    assert lines["r2"] == "0"
    assert lines["orthogonal_sublattice_norms"] == "[2, 6]"


def test_analyze_json_format(tmp_path, capsys):
    gram = write_gram(tmp_path, A1)
    code, out, _ = run_cli(capsys, ["analyze", "--gram", gram, "--format", "json"])
    assert code == EXIT_OK
    data = json.loads(out)
    assert data["det"] == 2 and data["module_count"] == 8


def test_modules_table(tmp_path, capsys):
    gram = write_gram(tmp_path, A1)
    code, out, _ = run_cli(capsys, ["modules", "--gram", gram])
    assert code == EXIT_OK
    lines = out.strip().splitlines()
    assert lines[0] == "label\tlowest_weight\ttop_dim\tcontragredient"
    assert len(lines) == 9
    body = {l.split("\t")[0]: l.split("\t") for l in lines[1:]}
    assert body["V+"][1:] == ["0", "1", "V+"]
    assert body["C[1/2]+"][1:] == ["1/4", "1", "C[1/2]-"]


def test_char_output(tmp_path, capsys):
    gram = write_gram(tmp_path, A1)
    code, out, _ = run_cli(
        capsys, ["char", "--gram", gram, "--module", "V+", "--order", "3"]
    )
    assert code == EXIT_OK
    assert out.splitlines() == ["0\t1", "1\t1", "2\t2"]


def test_char_accepts_alias_and_fractional_order(tmp_path, capsys):
    gram = write_gram(tmp_path, A1)
    code, out, _ = run_cli(
        capsys, ["char", "--gram", gram, "--module", "VacPlus", "--order", "5/2"]
    )
    assert code == EXIT_OK
    assert out.splitlines() == ["0\t1", "1\t1", "2\t2"]


def test_fusion_single_and_batch(tmp_path, capsys):
    gram = write_gram(tmp_path, A2)
    code, out, _ = run_cli(
        capsys,
        ["fusion", "--gram", gram, "--triple", "V+", "U[-1/3,-1/3]", "U[-1/3,-1/3]"],
    )
    assert code == EXIT_OK
    assert out.strip().splitlines()[-1].endswith("one")

    batch = tmp_path / "batch.json"
    batch.write_text(
        json.dumps(
            [
                ["U[-1/3,-1/3]", "U[-1/3,-1/3]", "U[-1/3,-1/3]"],
                ["U[-1/3,-1/3]", "V+", "V+"],
            ]
        )
    )
    code, out, _ = run_cli(
        capsys, ["fusion", "--gram", gram, "--batch", str(batch), "--format", "json"]
    )
    assert code == EXIT_OK
    rows = json.loads(out)
    assert [r["fusion"] for r in rows] == ["one", "zero"]


def test_fusion_oracle_table(tmp_path, capsys):
    gram = write_gram(tmp_path, A1)
    # without the oracle: unknown; with it: decided
    triple = ["C[1/2]+", "C[1/2]+", "V+"]
    code, out, _ = run_cli(capsys, ["fusion", "--gram", gram, "--triple", *triple])
    assert code == EXIT_OK and "unknown" in out
    oracle = tmp_path / "oracle.json"
    oracle.write_text(json.dumps({"pi": {"1/2|1": 1}}))
    code, out, _ = run_cli(
        capsys, ["fusion", "--gram", gram, "--triple", *triple, "--oracle", str(oracle)]
    )
    assert code == EXIT_OK
    assert out.strip().splitlines()[-1].endswith("one")


def test_decompose_auto_and_orthogonal(tmp_path, capsys):
    gram = write_gram(tmp_path, A2)
    code, out, _ = run_cli(
        capsys,
        ["decompose", "--gram", gram, "--module", "V+", "--order", "8"],
    )
    assert code == EXIT_OK
    assert "verified\ttrue" in out

    gram24 = write_gram(tmp_path, D24, "d24.json")
    code, out, _ = run_cli(
        capsys,
        [
            "decompose",
            "--gram",
            gram24,
            "--module",
            "V-",
            "--order",
            "8",
            "--sublattice",
            "orthogonal-base",
        ],
    )
    assert code == EXIT_OK
    assert "V+ (x) V-" in out and "verified\ttrue" in out


def test_decompose_explicit_basis(tmp_path, capsys):
    gram = write_gram(tmp_path, D24)
    code, out, _ = run_cli(
        capsys,
        [
            "decompose",
            "--gram",
            gram,
            "--module",
            "V+",
            "--order",
            "6",
            "--sublattice",
            "[[2,0],[0,2]]",
        ],
    )
    assert code == EXIT_OK
    assert "verified\ttrue" in out


def test_certify_roundtrip(tmp_path, capsys):
    gram = write_gram(tmp_path, A1)
    cert_path = tmp_path / "cert.json"
    code, out, _ = run_cli(
        capsys, ["certify", "--gram", gram, "--out", str(cert_path)]
    )
    assert code == EXIT_OK
    assert "verdict\tRational" in out
    code, out, _ = run_cli(
        capsys, ["certify", "--gram", gram, "--verify", str(cert_path)]
    )
    assert code == EXIT_OK
    assert "certificate verified" in out


def test_certify_incomplete_exit_code(tmp_path, capsys):
    gram = write_gram(tmp_path, A1)
    code, out, _ = run_cli(
        capsys,
        ["certify", "--gram", gram, "--disable-rule", "WeightGap"],
    )
    assert code == EXIT_INCOMPLETE
    data = json.loads(out)
    assert data["verdict"] == "Incomplete"


def test_certify_verify_rejects_wrong_lattice(tmp_path, capsys):
    gram1 = write_gram(tmp_path, A1)
    cert_path = tmp_path / "cert.json"
    run_cli(capsys, ["certify", "--gram", gram1, "--out", str(cert_path)])
    gram2 = write_gram(tmp_path, A2, "a2.json")
    code, out, _ = run_cli(
        capsys, ["certify", "--gram", gram2, "--verify", str(cert_path)]
    )
    assert code == EXIT_INCOMPLETE
    assert "problem" in out


# ---------------------------------------------------------------------------
# error paths with exact exit codes
# ---------------------------------------------------------------------------

def test_missing_gram_file(capsys):
    code, _, err = run_cli(capsys, ["analyze", "--gram", "/nonexistent.json"])
    assert code == EXIT_INVALID and "not found" in err


def test_malformed_json(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, _, err = run_cli(capsys, ["analyze", "--gram", str(bad)])
    assert code == EXIT_INVALID and "malformed JSON" in err


def test_invalid_lattice_reports_invariant(tmp_path, capsys):
    bad = tmp_path / "odd.json"
    bad.write_text(json.dumps({"gram": [[2, 1], [1, 1]]}))
    code, _, err = run_cli(capsys, ["analyze", "--gram", str(bad)])
    assert code == EXIT_INVALID and "diagonal entry at index 2" in err


def test_unknown_label_rejected(tmp_path, capsys):
    gram = write_gram(tmp_path, A1)
    code, _, err = run_cli(capsys, ["char", "--gram", gram, "--module", "Q[1]"])
    assert code == EXIT_INVALID and "unrecognized" in err


def test_fusion_requires_input(tmp_path, capsys):
    gram = write_gram(tmp_path, A1)
    code, _, err = run_cli(capsys, ["fusion", "--gram", gram])
    assert code == EXIT_INVALID


def test_order_must_be_at_least_one(tmp_path, capsys):
    gram = write_gram(tmp_path, A1)
    code, _, err = run_cli(capsys, ["char", "--gram", gram, "--module", "V+", "--order", "1/2"])
    assert code == EXIT_INVALID and "at least 1" in err
    code, _, err = run_cli(capsys, ["char", "--gram", gram, "--module", "V+", "--order", "x"])
    assert code == EXIT_INVALID and "rational" in err


def test_env_var_defaults(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("VLPLUS_ORDER", "2")
    gram = write_gram(tmp_path, A1)
    code, out, _ = run_cli(capsys, ["char", "--gram", gram, "--module", "V+"])
    assert code == EXIT_OK
    assert out.splitlines() == ["0\t1", "1\t1"]
