"""
Scenario parsing, the task runner, report rendering and the command-line entry point.
"""
import glob
import json
import os
import re
from unittest.mock import Mock

import pytest

import sepalg
from src.config import EXIT_ERROR, EXIT_FAIL, EXIT_INCONCLUSIVE, EXIT_OK, FIXTURE_DIR
from src.errors import NotInvariantError, ScenarioParseError
from src.runner import DONE, ERROR, FAIL, INCONCLUSIVE, PASS, RunOptions, ScenarioRunner, TaskResult, exit_code
from src.scenario import SECTIONS, TaskArgs, parse_scenario_text
from src.utils import render, summary

SWAP = """\
[field]
p = 2

[ring]
vars = "x1,x2"

[group]
s = "perm (1 2)"

[define]
e1 = "x1 + x2"
e2 = "x1*x2"

[tasks]
orbits = "expect=3"
separates = "e1, e2; expect=pass"
separates short = "e1; expect=pass"
"""

GOLDEN_DIR = os.path.join(os.path.dirname(FIXTURE_DIR), "golden")

EXPECTED_KINDS = {
    "orbits", "fixed-space", "bireflections", "criterion", "index-p-criterion", "gb", "present", "hsop",
    "regular", "is-invariant", "invariant-basis", "transfer", "noether", "separates", "geometric",
    "inseparable", "cohomology", "coboundary", "frobenius", "annihilates", "restrict", "nontrivial",
    "search-restricted", "bar", "hilbert", "free-module", "gorenstein", "certificate", "regular-bound",
    "copies-bound",
}


@pytest.fixture(scope="module")
def runner():
    return ScenarioRunner(RunOptions()).load_cogs()


def test_load_cogs_registers_every_kind(runner):
    assert set(runner.handlers) == EXPECTED_KINDS


def test_task_args_split():
    args = TaskArgs.parse("c1, c2; e: 2; expect=pass; bogus: 1", keys=("e",), line=4)
    assert args.keyed == {"e": "2", "expect": "pass"}
    assert args.bare == ["c1, c2", "bogus: 1"]
    assert args.integer("e") == 2
    assert args.first() == "c1, c2"
    with pytest.raises(ScenarioParseError):
        args.require("missing")


def test_parse_errors_carry_line_numbers():
    broken = SWAP.replace('e2 = "x1*x2"', 'e2 = "x1 *"')
    with pytest.raises(ScenarioParseError) as info:
        parse_scenario_text(broken)
    assert info.value.line == 12
    with pytest.raises(ScenarioParseError):
        parse_scenario_text(SWAP + "\n[extras]\nfoo = 1\n")


def test_parse_error_columns_count_from_line_start(runner):
    broken = SWAP.replace('e2 = "x1*x2"', 'e2 = "x1 + zz"')
    with pytest.raises(ScenarioParseError) as info:
        parse_scenario_text(broken)
    assert (info.value.line, info.value.column) == (12, 12)
    assert str(info.value) == "line 12, column 12: unknown variable 'zz'"
    # task arguments are split before parsing, so only the line is known
    results = runner.run(parse_scenario_text(SWAP.replace('"e1; expect=pass"', '"e1, qq; expect=pass"')))
    assert results[2].status == ERROR
    assert results[2].error.startswith("line 17: unknown variable 'qq'")
    assert "column" not in results[2].error


def test_run_swap_scenario(runner):
    results = runner.run(parse_scenario_text(SWAP, "swap.scn"))
    assert [r.status for r in results] == [PASS, PASS, FAIL]
    assert results[0].value == "3"
    failed = results[2]
    assert failed.details["expected"] == "pass"
    assert failed.witness
    assert exit_code(results) == EXIT_FAIL


HYPERSURFACE = """\
[field]
p = 5

[ring]
vars = "x,y"

[group]
z = "[[2,0],[0,2]]"

[define]
m1 = "x^4"
m2 = "x^3*y"
m4 = "y^4"

[tasks]
present = "m1, m2, m4; save: A3"
hilbert = "A: A3; expect=(1+t^4+t^8+t^12)/((1-t^4)^2)"
hilbert uncancelled = "A: A3; expect=(1-t^16)/(1-t^4)^3"
hilbert wrong = "A: A3; expect=1/(1-t^4)^2"
hilbert garbled = "A: A3; expect=(1+t^4/(1-t)"
"""


def test_hilbert_expect_compares_series(runner):
    results = runner.run(parse_scenario_text(HYPERSURFACE))
    assert [r.status for r in results] == [DONE, PASS, PASS, FAIL, ERROR]
    assert results[3].details["observed"] == "(1+t^4+t^8+t^12)/((1-t^4)^2)"
    assert "bad Hilbert series numerator" in results[4].error


def test_empty_task_list(runner):
    scenario = parse_scenario_text(SWAP.split("[tasks]")[0])
    results = runner.run(scenario)
    assert results == []
    assert exit_code(results) == EXIT_OK


def test_task_filter():
    filtered = ScenarioRunner(RunOptions(task_filter="short")).load_cogs()
    results = filtered.run(parse_scenario_text(SWAP))
    assert [r.name for r in results] == ["separates short"]


def test_exit_code_precedence():
    def made(*statuses):
        return [TaskResult("k", str(i), s) for i, s in enumerate(statuses)]
    assert exit_code(made(PASS, INCONCLUSIVE)) == EXIT_INCONCLUSIVE
    assert exit_code(made(INCONCLUSIVE, FAIL)) == EXIT_FAIL
    assert exit_code(made(FAIL, ERROR)) == EXIT_ERROR
    assert sepalg._combine(EXIT_FAIL, EXIT_INCONCLUSIVE) == EXIT_FAIL


def test_handler_errors_become_error_results():
    r = ScenarioRunner()
    r.handlers["boom"] = Mock(side_effect=NotInvariantError("x1"))
    r.handlers["crash"] = Mock(side_effect=RuntimeError("unexpected"))
    r.keys["boom"] = r.keys["crash"] = ()
    scenario = parse_scenario_text(SWAP.split("[tasks]")[0] + '[tasks]\nboom = "x1"\ncrash = "x2"\nnope = "x"\n')
    boom, crash, nope = r.run(scenario)
    assert boom.status == ERROR and boom.error.startswith("NotInvariantError")
    assert crash.status == ERROR and "RuntimeError" in crash.error
    assert nope.status == ERROR and "unknown task kind" in nope.error


def test_render_formats_agree(runner):
    results = runner.run(parse_scenario_text(SWAP, "swap.scn"))
    code = exit_code(results)
    doc = json.loads(render("structured", "swap", results, code))
    assert doc["exit_code"] == EXIT_FAIL
    assert doc["summary"] == summary(results)
    assert [t["status"] for t in doc["tasks"]] == [r.status for r in results]
    text = render("text", "swap", results, code)
    assert text.startswith("scenario swap")
    assert f"exit {EXIT_FAIL}" in text


@pytest.mark.parametrize("fmt, golden", [("structured", "swap.json"), ("text", "swap.txt")])
def test_render_matches_golden(runner, fmt, golden):
    results = runner.run(parse_scenario_text(SWAP, "swap.scn"))
    with open(os.path.join(GOLDEN_DIR, golden), encoding="utf-8") as fh:
        expected = fh.read()
    assert render(fmt, "swap", results, exit_code(results)) == expected


def test_main_runs_files(tmp_path, capsys):
    good = tmp_path / "swap.scn"
    good.write_text(SWAP.replace('separates short = "e1; expect=pass"\n', ""))
    assert sepalg.main([str(good), "--format", "structured"]) == EXIT_OK
    out = json.loads(capsys.readouterr().out)
    assert out["scenario"] == "swap"

    bad = tmp_path / "bad.scn"
    bad.write_text("[field]\np = 4\n")
    assert sepalg.main([str(good), str(bad)]) == EXIT_ERROR
    assert "FATAL" in capsys.readouterr().err


@pytest.mark.slow
@pytest.mark.parametrize("name", sorted(f[:-4] for f in os.listdir(FIXTURE_DIR) if f.endswith(".scn")))
def test_shipped_fixtures(runner, scenario, name):
    results = runner.run(scenario(name))
    failing = [(r.name, r.status, r.value, r.error) for r in results if r.status not in (PASS, "done")]
    assert not failing


def _python_sources():
    roots = ["sepalg.py", "audit.py", "conftest.py"] + sorted(glob.glob("test_*.py"))
    return roots + sorted(glob.glob(os.path.join("src", "**", "*.py"), recursive=True))


def test_every_public_function_is_used():
    texts = {}
    for path in _python_sources():
        with open(path, encoding="utf-8") as fh:
            texts[path] = fh.read()
    unused = []
    for path, text in texts.items():
        if not path.startswith("src"):
            continue
        for name in re.findall(r"^def ([A-Za-z]\w*)", text, re.M):
            word = re.compile(rf"\b{name}\b")
            if sum(len(word.findall(t)) for t in texts.values()) <= 1:
                unused.append(f"{path}:{name}")
    assert unused == []


def test_readme_grammar_covers_scenario_files():
    with open("README.md", encoding="utf-8") as fh:
        block = re.search(r"```ebnf\n(.*?)```", fh.read(), re.S).group(1)
    for section in SECTIONS:
        assert f'"{section}"' in block
    for rule in ("poly", "element", "matrix", "permutation", "cycle", "module", "assignment", "part", "series"):
        assert re.search(rf"^{rule}\s+=", block, re.M), rule
