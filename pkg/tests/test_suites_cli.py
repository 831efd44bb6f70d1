"""Suite orchestration and the command-line surface."""

import json

import pytest
from gmpy2 import mpq

from normforge.cli import build_parser, main
from normforge.spaces import ell1_space
from normforge.suites import (SUITE_NAMES, SuiteConfig, SuiteReport, run_suite)


def test_unknown_suite_raises():
    with pytest.raises(KeyError):
        run_suite("nope", SuiteConfig(samples=5))


def test_suite_alias():
    rep = run_suite("rho-properties", SuiteConfig(samples=5))
    assert rep.name == "rho"


def test_reports_are_byte_stable_in_process():
    cfg = SuiteConfig(samples=10)
    a = run_suite("tree-monotone", cfg).dumps()
    b = run_suite("tree-monotone", cfg).dumps()
    assert a == b


def test_report_passes_only_without_fail_or_undecided():
    rep = SuiteReport("x", SuiteConfig())
    rep.add("a", "pass")
    assert rep.passed
    rep.add("b", "undecided")
    assert not rep.passed


def test_report_json_has_no_floats():
    rep = run_suite("rho", SuiteConfig(samples=5))
    def scan(obj):
        assert not isinstance(obj, float)
        if isinstance(obj, dict):
            for v in obj.values():
                scan(v)
        elif isinstance(obj, list):
            for v in obj:
                scan(v)
    scan(json.loads(rep.dumps()))


def test_config_validates_eps():
    with pytest.raises(ValueError):
        SuiteConfig(eps=0)


def test_global_flags_both_positions():
    p = build_parser()
    a = p.parse_args(["--samples", "7", "verify", "rho"])
    assert a.samples == 7
    b = p.parse_args(["verify", "rho", "--samples", "7", "--json"])
    assert b.samples == 7 and b.json


def test_cli_norm_eval(tmp_path, capsys):
    sp = tmp_path / "space.json"
    sp.write_text(json.dumps(ell1_space(2).to_json()))
    vec = tmp_path / "vec.json"
    vec.write_text(json.dumps(["1/2", "-2"]))
    rc = main(["norm", "eval", "--space", str(sp), "--vec", str(vec)])
    assert rc == 0
    assert "5/2" in capsys.readouterr().out


def test_cli_catalog_list(capsys):
    rc = main(["catalog", "list", "--dim", "1", "--count", "2"])
    assert rc == 0
    lines = [json.loads(l) for l in capsys.readouterr().out.splitlines()]
    assert [l["index"] for l in lines] == [1, 2]


def test_cli_verify_unknown_suite(capsys):
    rc = main(["verify", "wat"])
    assert rc == 2


def test_cli_verify_and_replay(tmp_path, capsys, monkeypatch):
    monkeypatch.chdir(tmp_path)
    rc = main(["verify", "rho", "--samples", "5", "--json"])
    out = capsys.readouterr().out
    assert rc == 0
    rep = json.loads(out)
    assert rep["suite"] == "rho"
    # replay an artifact naming one check of the suite
    art = tmp_path / "a.json"
    art.write_text(json.dumps({
        "suite": "rho",
        "config": {"seed": 42, "samples": 5, "max_dim": 4, "eps": "1/1000000000"},
        "failed_checks": [rep["records"][0]["check"]],
    }))
    rc = main(["replay", str(art)])
    assert rc == 0
    assert "PASS" in capsys.readouterr().out


def test_cli_tree_eval(tmp_path, capsys):
    from normforge.treespace import FiniteTree
    t = FiniteTree([("a",), ("a", "b")], {("a", "b"): ell1_space(2)})
    tf = tmp_path / "tree.json"
    tf.write_text(json.dumps(t.to_json()))
    vf = tmp_path / "vec.json"
    vf.write_text(json.dumps(["1", "2"]))
    rc = main(["tree", "eval", "--tree", str(tf), "--vec", str(vf), "--which", "E"])
    assert rc == 0
    assert "3" in capsys.readouterr().out


def test_all_suite_names_runnable_cheaply():
    assert len(SUITE_NAMES) == 13
