from __future__ import annotations

import json

import pytest

from racglie.cli import main, pentagon_relation_status
from racglie.complexes import catalog
from racglie.errors import InputError
from racglie.expr import alias_names, alias_table, format_expr, parse_expr
from racglie.lcs import LElem, NKtElem, h

K3 = catalog("k3")
NAMES = alias_table("k3", K3)
DISP = alias_names("k3")


def p(text: str) -> LElem:
    return parse_expr(text, K3, NAMES)


@pytest.mark.parametrize(
    "text",
    ["g1", "a", "at", "a t^3", "[a,b]", "[a,b]t^2 + ct", "c(1,2|1)", "c(1,2,3|2)", "g1 + g3 + a", "0"],
)
def test_roundtrip(text):
    x = p(text)
    assert p(format_expr(x, DISP)) == x


def test_parse_values():
    assert p("at") == p("a t") == LElem.of(h(NKtElem.symbol(K3, ((1, 2), 1))))
    assert p("c(1,2|1)") == p("a") == p("[g1,g2]")
    assert p("c(1,2,3|2)") == p("c") == p("[g1,[g3,g2]]")
    assert p("a + a") == LElem(K3)
    assert p("[g1,g3]") == LElem(K3)
    assert format_expr(p("[g2,c]"), DISP) == "[a,b] + ct"
    assert p("(a)t^2") == p("[g1,[g1,[g1,g2]]]")


@pytest.mark.parametrize("text", ["", "a +", "[a,b", "q", "g1t", "c(1,1|1)", "c(1,2|3)", "g7", "a t^", "a$"])
def test_parse_errors(text):
    with pytest.raises(InputError):
        p(text)


def test_h_of_generator_is_an_error():
    with pytest.raises(InputError):
        p("g1 t")


def run_json(capsys, *argv):
    code = main(list(argv) + ["--json"])
    out = capsys.readouterr().out
    return code, json.loads(out)


def test_cli_gptw(capsys):
    code, rep = run_json(capsys, "gptw", "--complex", "pentagon")
    assert code == 0
    assert rep["result"]["count"] == 10
    assert {g["alias"] for g in rep["result"]["generators"]} == {f"{x}{i}" for x in ("alpha", "beta") for i in range(1, 6)}


def test_cli_dims_and_series(capsys):
    code, rep = run_json(capsys, "dims", "--complex", "k3", "--max-degree", "5")
    assert code == 0 and rep["result"]["matches_series"] and not rep["result"]["mismatches"]
    code, rep = run_json(capsys, "series", "--complex", "k2", "--max-degree", "6")
    assert code == 0


def test_cli_conjecture(capsys):
    code, rep = run_json(capsys, "conjecture", "--complex", "k3", "--max-degree", "5", "--threads", "2")
    assert code == 0
    assert [r["lower_bound"] for r in rep["result"]["degrees"]] == [2, 3, 4, 6]
    assert rep["result"]["all_verified"]


def test_cli_bracket(capsys):
    code, rep = run_json(capsys, "bracket", "--complex", "k3", "--lhs", "g2", "--rhs", "c")
    assert code == 0
    assert rep["result"]["bracket"] == "[a,b] + ct"
    assert rep["result"]["semantics"] == "conjectural"


def test_cli_analyze_text(capsys):
    assert main(["analyze", "--complex", "cycle4", "--max-degree", "4"]) == 0
    out = capsys.readouterr().out
    assert "chordal: False" in out


def test_cli_json_file(tmp_path, capsys):
    f = tmp_path / "mine.json"
    f.write_text(json.dumps({"m": 3, "edges": [[3, 1], [1, 3]]}))
    code, rep = run_json(capsys, "gptw", "--complex", str(f))
    assert code == 0 and rep["result"]["count"] == 3


def test_cli_faces_need_flag_complete(tmp_path, capsys):
    f = tmp_path / "hollow.json"
    f.write_text(json.dumps({"m": 3, "edges": [[1, 2], [2, 3], [1, 3]], "faces": [[1, 2], [2, 3], [1, 3]]}))
    assert main(["gptw", "--complex", str(f)]) == 2
    assert main(["gptw", "--complex", str(f), "--flag-complete"]) == 0


@pytest.mark.parametrize(
    "argv",
    [
        ["gptw", "--complex", "nosuch"],
        ["gptw"],
        ["dims", "--complex", "k3", "--max-degree", "1"],
        ["dims", "--complex", "k3", "--threads", "0"],
        ["bracket", "--complex", "k3", "--lhs", "g9", "--rhs", "a"],
        ["bracket", "--complex", "k3", "--lhs", "a"],
        ["gptw", "--complex", "/nonexistent/x.json"],
        ["frobnicate"],
    ],
)
def test_cli_input_errors(argv, capsys):
    assert main(argv) == 2


def test_cli_examples(capsys):
    assert main(["examples", "--seed", "3"]) == 0
    out = capsys.readouterr().out
    assert "FAIL" not in out


def test_pentagon_relation_status():
    zero, vanishing = pentagon_relation_status()
    assert zero and vanishing == []
