import io
import json

import pytest

from database import list_documents, load_document
from hashlab.cli import build_parser, run
from hashlab.errors import UsageError
from hashlab.families import SPEC_GRAMMAR


def _run(*argv):
    out = io.StringIO()
    status = run(list(argv), stdout=out)
    return status, out.getvalue()


def _json(*argv):
    status, text = _run(*argv, "--format", "json")
    assert status == 0, text
    return json.loads(text)


def test_hash_reference_hashers():
    assert _run("hash", "gcc-cpp", "z") == (0, "122\n")
    document = _json("hash", "java-string", "Aa", "BB")
    assert [row["value"] for row in document["hashes"]] == [2112, 2112]
    assert document["hashes"][0]["signed"] == 2112


def test_table_bounds_csv():
    status, text = _run("table", "bounds", "--L", "2,4,8,16")
    assert status == 0
    assert text.splitlines() == [
        "L,card_universal,card_strong,struct_universal",
        "2,20,8,5",
        "4,136,87,17",
        "8,4112,3366,257",
        "16,2097184,1908072,65537",
    ]


def test_verify_exact_report():
    document = _json("verify", "tabulated:L=2,sigma=2", "--max-len", "2", "--exact")
    assert document["pairwise_independent"] is True
    appended = _json("verify", "tabulated", "--L", "2", "--sigma", "2", "--max-len", "2", "--exact")
    assert appended == document


def test_verify_text_output_is_stable():
    first = _run("verify", "pearson:L=2", "--max-len", "2", "--format", "text")
    second = _run("verify", "pearson:L=2", "--max-len", "2", "--format", "text")
    assert first == second
    assert "eps_au: " in first[1]


@pytest.mark.parametrize(
    "argv",
    [
        ["frobnicate"],
        ["verify", "pearson:L"],
        ["verify", "nosuch:L=2"],
        ["witness", "threewise-break"],
        ["bounds", "min-family", "--L", "8"],
        ["verify", "pearson:L=2", "--budget", "0"],
        ["hash", "pearson:L=2", "x", "--save"],
    ],
)
def test_usage_errors_exit_3(argv, db_path):
    assert run(argv, stdout=io.StringIO()) == 3


def test_domain_error_exits_1():
    assert _run("verify", "pearson:L=2,sigma=5")[0] == 1
    assert _run("bounds", "epsilon-length", "--L", "2", "--epsilon", "1/4")[0] == 1


def test_capacity_errors_exit_2(monkeypatch):
    assert _run("verify", "pearson:L=2", "--max-len", "3", "--budget", "10")[0] == 2
    monkeypatch.setenv("HASHLAB_PAIR_BUDGET", "100")
    assert _run("table", "gp", "--L", "1", "--n-max", "3", "--no-certain", "--exact")[0] == 2
    assert _run("table", "gp", "--L", "1", "--n-max", "3", "--no-certain")[0] == 0


def test_witness_tau_pair():
    document = _json("witness", "tau-pair", "--p", "3", "--n", "3")
    assert document["kind"] == "tau-pair"
    assert document["strings"] == [[0, 0, 0, 0], [2, 0, 1, 0]]
    assert document["certificate"]["passed"] is True


def test_bounds_targets():
    assert _json("bounds", "epsilon-length", "--L", "2", "--epsilon", "2/5")["length"] == 10
    assert _json("bounds", "min-family", "--K", "80", "--L", "8", "--epsilon", "1/4")["min_size"] == 36
    row = _json("bounds", "row", "--L", "2")
    assert row["cardinality_universal"] == 20
    assert row["structural_universal"] == 5


def test_table_ht_and_divisor():
    status, text = _run("table", "ht", "--L", "2")
    lines = text.splitlines()
    assert status == 0
    assert lines[0] == "r,T1,T2,T3,T4"
    assert len(lines) == 16
    status, text = _run("table", "divisor", "--n-max", "7")
    assert text.splitlines() == ["n,max_divisor_count", "2,1", "3,2", "4,2", "5,3", "6,3", "7,4"]


def test_out_file(tmp_path):
    path = tmp_path / "gcc.txt"
    status, text = _run("hash", "gcc-cpp", "z", "--out", str(path))
    assert status == 0 and text == ""
    assert path.read_text(encoding="utf-8") == "122\n"


def test_save_stores_a_verifiable_document(db_path):
    argv = ["witness", "perfect-unary", "--L", "2", "--save"]
    assert run(argv, stdout=io.StringIO()) == 0
    rows = list_documents("witnesses")
    assert len(rows) == 1
    document = load_document("witnesses", int(rows["id"].iloc[0]))
    assert document["metadata"]["argv"] == argv
    assert document["payload"]["kind"] == "perfect-unary"


def test_table_all_reproduces_light_run():
    status, text = _run("table", "all", "--L", "2,4", "--n-max", "3", "--no-certain")
    assert status == 0
    assert text.startswith("check,expected,measured,passed\n")
    assert ",False\n" not in text


@pytest.mark.parametrize("argv", [["verify"], ["hash", "gcc-cpp"], ["verify", "pearson:L=2", "--exact", "--mc"]])
def test_parser_errors_carry_the_family_grammar(argv):
    with pytest.raises(UsageError) as info:
        build_parser().parse_args(argv)
    assert str(info.value).endswith(f"family spec grammar: {SPEC_GRAMMAR}")


def test_bounds_row_at_full_width():
    row = _json("bounds", "row", "--L", "32")
    assert row["structural_almost"] is None
    assert row["structural_almost_is_log2"] is True
    assert row["cardinality_universal"] == 64 + 32 * 2**33
