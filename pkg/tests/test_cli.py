"""Command line behavior: documents, formats, exit statuses, sidecars."""
import json

import pytest

import pathfence.cli as cli
from pathfence.errors import PrecisionFault


def run(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    assert code == 0, err
    return json.loads(out)


def test_count_staircase_example(capsys):
    doc = run_json(capsys, "count", "--staircase", "1", "--n", "5")
    assert doc["values"] == ["1", "1", "2", "5", "14", "42"]
    assert doc["kind"] == "lp"
    assert doc["boundary"] == {"prefix": [], "period": [1]}


def test_tennis_section_example(capsys):
    doc = run_json(capsys, "tennis", "--k", "2", "--l", "2",
                   "--section", "1", "--order", "5")
    assert doc["values"] == ["3", "22", "211", "2306", "27230", "338444"]


def test_certify_catalan_example(capsys):
    doc = run_json(capsys, "certify", "--staircase", "1", "--dz", "1", "--dy", "2")
    assert doc["found"] is True
    cert = doc["certificate"]
    assert cert["coeffs"] == [[1, -1, 0], [0, 0, 1]]
    assert cert["verified_order"] == 32


def test_output_is_deterministic(capsys):
    first = run(capsys, "sections", "--tennis", "2,2", "--order", "3")
    second = run(capsys, "sections", "--tennis", "2,2", "--order", "3")
    assert first == second
    assert first[0] == 0


def test_json_keys_are_sorted(capsys):
    _, out, _ = run(capsys, "count", "--arith", "1,1", "--n", "2")
    doc = json.loads(out)
    assert out == json.dumps(doc, indent=2, sort_keys=True) + "\n"


def test_rect_weighted(capsys):
    doc = run_json(capsys, "rect", "--x", "2", "--n", "1", "--shape", "1,1")
    assert doc["value"] == ["2", "1"]


def test_appell_check_document(capsys):
    doc = run_json(capsys, "appell-check", "--tennis", "2,1", "--order", "10")
    assert doc["residual_zero"] is True
    assert doc["first_nonzero"] is None


def test_parking_document(capsys):
    doc = run_json(capsys, "parking", "--arith", "1,1", "--n", "4", "--oracle")
    assert doc["values"] == ["1", "1", "3", "16", "125"]
    assert doc["oracle_n"] == 4


def test_decompose_check_document(capsys):
    doc = run_json(capsys, "decompose-check", "--arith", "2,1", "--x", "8", "--n", "4")
    assert doc["holds"] is True


def test_meta_document(capsys):
    doc = run_json(capsys, "meta")
    assert doc["name"] == "pathfence"
    assert "tennis" in doc["subcommands"]


def test_version_flag(capsys):
    with pytest.raises(SystemExit) as info:
        cli.main(["--version"])
    assert info.value.code == 0
    out = capsys.readouterr().out
    assert out.startswith("pathfence ")


def test_missing_subcommand_is_usage_error(capsys):
    with pytest.raises(SystemExit) as info:
        cli.main([])
    assert info.value.code == 2


def test_csv_count_table(capsys):
    code, out, _ = run(capsys, "count", "--arith", "1,1", "--n", "3",
                       "--format", "csv")
    assert code == 0
    assert out == "n,value\n0,1\n1,1\n2,2\n3,5\n"


def test_csv_joins_polynomials_with_semicolons(capsys):
    code, out, _ = run(capsys, "count", "--arith", "1,1", "--shape", "1,1",
                       "--n", "2", "--format", "csv")
    assert code == 0
    assert out.splitlines()[-1] == "2,2;3;1"


def test_csv_sections_table(capsys):
    code, out, _ = run(capsys, "sections", "--tennis", "2,2", "--order", "2",
                       "--format", "csv")
    assert code == 0
    assert out.splitlines() == [
        "section,q,value",
        "0,0,1",
        "0,1,6",
        "0,2,53",
        "1,0,3",
        "1,1,22",
        "1,2,211",
    ]


def test_csv_rejected_for_non_table_documents(capsys):
    code, _, err = run(capsys, "rect", "--x", "2", "--n", "2", "--format", "csv")
    assert code == cli.EXIT_PARSE
    assert json.loads(err)["error"]["family"] == "parse"


def test_exit_parse_on_bad_pair(capsys):
    code, _, err = run(capsys, "count", "--tennis", "2", "--n", "3")
    assert code == cli.EXIT_PARSE
    envelope = json.loads(err)["error"]
    assert envelope["family"] == "parse"
    assert "--tennis" in envelope["message"]


def test_exit_parse_on_boundary_overdose(capsys):
    code, _, err = run(capsys, "count", "--arith", "1,1", "--tennis", "2,2", "--n", "3")
    assert code == cli.EXIT_PARSE
    assert "exactly one" in json.loads(err)["error"]["message"]


def test_exit_parse_on_missing_boundary(capsys):
    code, _, err = run(capsys, "count", "--n", "3")
    assert code == cli.EXIT_PARSE


def test_exit_parse_on_bad_boundary_json(capsys):
    code, _, err = run(capsys, "count", "--boundary", "{oops", "--n", "3")
    assert code == cli.EXIT_PARSE
    assert "not valid JSON" in json.loads(err)["error"]["message"]


def test_exit_domain_on_bad_section(capsys):
    code, _, err = run(capsys, "sections", "--tennis", "2,2", "--order", "3",
                       "--section", "7")
    assert code == cli.EXIT_DOMAIN
    assert json.loads(err)["error"]["family"] == "domain"


def test_exit_domain_on_cap(capsys):
    code, _, err = run(capsys, "count", "--arith", "1,1", "--n", "601")
    assert code == cli.EXIT_DOMAIN
    assert json.loads(err)["error"]["kind"] == "TooLarge"


def test_exit_domain_on_slope_violation(capsys):
    code, _, err = run(capsys, "count", "--tennis", "2,1", "--shape", "2,1", "--n", "4")
    assert code == cli.EXIT_DOMAIN
    assert json.loads(err)["error"]["kind"] == "SlopeConditionViolated"


def test_exit_precision_path(capsys, monkeypatch):
    def explode(req):
        raise PrecisionFault("pushed past the provable order")

    monkeypatch.setattr(cli, "handle_sections", explode)
    code, _, err = run(capsys, "sections", "--tennis", "2,2", "--order", "2")
    assert code == cli.EXIT_PRECISION
    assert json.loads(err)["error"]["family"] == "precision"


def test_out_writes_payload_and_sidecar(capsys, tmp_path):
    target = tmp_path / "counts.json"
    code, out, _ = run(capsys, "count", "--arith", "1,1", "--n", "3",
                       "--out", str(target))
    assert code == 0
    assert out == ""
    payload = json.loads(target.read_text())
    assert payload["values"] == ["1", "1", "2", "5"]
    assert "created" not in payload
    assert "version" not in payload
    sidecar = json.loads((tmp_path / "counts.json.meta.json").read_text())
    assert sidecar["tool"] == "pathfence"
    assert sidecar["subcommand"] == "count"
    assert sidecar["version"]
    assert "T" in sidecar["created"]


def test_out_payload_identical_to_stdout(capsys, tmp_path):
    _, stdout_doc, _ = run(capsys, "tennis", "--k", "2", "--l", "1", "--order", "3")
    target = tmp_path / "t.json"
    run(capsys, "tennis", "--k", "2", "--l", "1", "--order", "3", "--out", str(target))
    assert target.read_text() == stdout_doc
