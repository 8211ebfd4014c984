from __future__ import annotations

import json
import logging

import pytest
from click.testing import CliRunner

from pzigzag import cli


@pytest.fixture(scope="module")
def full_n2_p3():
    return cli.run_suite("all", 2, 3, 1)


def test_all_checks_pass_for_two_strands(full_n2_p3):
    rep = full_n2_p3
    assert rep["summary"]["fail"] == 0
    assert rep["summary"]["pass"] > 20
    assert set(rep) == {"suite", "params", "checks", "summary"}
    assert rep["params"] == {"n": 2, "p": 3, "lambda": 1}


def test_algebra_suite_lambda_zero():
    rep = cli.run_suite("algebra", 3, 2, 0)
    assert rep["summary"] == {"pass": 4, "fail": 0, "skipped": 0}


def test_lambda_restricted_checks_are_skipped_not_passed():
    rep = cli.run_suite("appendix", 3, 2, 0)
    statuses = {c["id"]: c["status"] for c in rep["checks"]}
    assert statuses["appendix.psi"] == "skipped"
    assert statuses["appendix.factorials"] == "pass"


def test_braid_suite_over_budget():
    rep = cli.run_suite("braid", 3, 7, 1)
    status = {(c["id"], tuple(sorted(c["params"].items()))): c["status"] for c in rep["checks"]}
    assert status[("braid.R3", (("i", 1),))] == "skipped"
    assert status[("braid.k0_relations", ())] == "pass"
    assert all(v == "pass" for (cid, _), v in status.items() if cid.startswith("braid.k0"))
    assert rep["summary"]["fail"] == 0


def test_budget_env(monkeypatch):
    monkeypatch.setenv(cli.BUDGET_ENV, "1")
    rep = cli.run_suite("braid", 3, 2, 1)
    r3 = [c for c in rep["checks"] if c["id"] == "braid.R3"]
    assert r3 and all(c["status"] == "skipped" and "budget" in c["witness"]["reason"] for c in r3)


def test_reports_are_deterministic():
    a = cli.run_suite("resolutions", 3, 2, 1)
    b = cli.run_suite("resolutions", 3, 2, 1)
    assert cli.deterministic_view(a) == cli.deterministic_view(b)


def test_parallel_matches_sequential(monkeypatch):
    seq = cli.run_suite("tl", 3, 2, 1, jobs=1)
    monkeypatch.setenv(cli.JOBS_ENV, "2")
    par = cli.run_suite("tl", 3, 2, 1, jobs=1)
    assert cli.deterministic_view(seq) == cli.deterministic_view(par)
    assert cli.job_count(None) == 2


def test_cache_hits_and_determinism(tmp_path, caplog):
    cache = tmp_path / "cache"
    first = cli.CacheStats()
    a = cli.run_suite("resolutions", 3, 3, 1, cache_dir=str(cache), stats=first)
    assert first.misses > 0 and first.hits == 0
    second = cli.CacheStats()
    with caplog.at_level(logging.INFO, logger="pzigzag"):
        b = cli.run_suite("resolutions", 3, 3, 1, cache_dir=str(cache), stats=second)
    assert second.hits > 0 and second.misses == 0
    assert any("hits" in r.message for r in caplog.records)
    assert cli.deterministic_view(a) == cli.deterministic_view(b)
    for f in cache.iterdir():
        f.unlink()
    c = cli.run_suite("resolutions", 3, 3, 1, cache_dir=str(cache))
    assert cli.deterministic_view(a) == cli.deterministic_view(c)


@pytest.mark.parametrize("damage", ["garbage", "digest", "diagram"])
def test_tampered_cache_entries_are_rebuilt(tmp_path, damage):
    cache = tmp_path / "cache"
    cli.run_suite("resolutions", 2, 3, 1, cache_dir=str(cache))
    victim = sorted(cache.iterdir())[0]
    if damage == "garbage":
        victim.write_text("{not json")
    else:
        entry = json.loads(victim.read_text())
        if damage == "digest":
            entry["digest"] = "0" * 64
        else:
            # drop an arrow and recompute the digest: only the invariant re-check can notice
            entry["body"]["diagram"]["edges"] = entry["body"]["diagram"]["edges"][1:]
            entry["digest"] = cli.ResolutionCache._digest(entry["body"])
        victim.write_text(json.dumps(entry))
    stats = cli.CacheStats()
    rep = cli.run_suite("resolutions", 2, 3, 1, cache_dir=str(cache), stats=stats)
    assert stats.discarded == 1
    assert rep["summary"]["fail"] == 0


def test_braid_words():
    ident = cli.eval_braid_word("s1 S1", 3, 3)
    assert ident["identity"]
    assert cli.eval_braid_word("", 3, 3)["identity"]
    for level in ("k0", "quantum"):
        a = cli.eval_braid_word("s1 s2 s1", 3, 3, level)
        b = cli.eval_braid_word("s2 s1 s2", 3, 3, level)
        assert a["matrix"] == b["matrix"] and a["at_root"] == b["at_root"]
    with pytest.raises(cli.UsageError):
        cli.eval_braid_word("s1 x2", 3, 3)
    with pytest.raises(cli.UsageError):
        cli.eval_braid_word("s3", 3, 3)


def test_usage_errors():
    for args in (("nope", 2, 3, 1), ("all", 2, 4, 1), ("all", 1, 3, 1), ("all", 2, 3, 5)):
        with pytest.raises(cli.UsageError):
            cli.validate_params(*args)


def test_exit_codes(tmp_path):
    runner = CliRunner()
    out = tmp_path / "report.json"
    res = runner.invoke(cli.main, ["--n", "2", "--p", "2", "--suite", "algebra", "--json", str(out)])
    assert res.exit_code == 0
    assert json.loads(out.read_text())["summary"]["fail"] == 0
    assert runner.invoke(cli.main, ["--p", "4"]).exit_code == 2
    assert runner.invoke(cli.main, ["--suite", "bogus"]).exit_code == 2
    assert runner.invoke(cli.main, ["--word", "s1 q2", "--n", "3"]).exit_code == 2
    res = runner.invoke(cli.main, ["--word", "s1 S1", "--n", "3", "--p", "2", "--level", "quantum"])
    assert res.exit_code == 0 and json.loads(res.output)["identity"]


def test_failing_check_gives_exit_code_one(monkeypatch):
    monkeypatch.setattr(cli.CATALOG["algebra.dimension"], "fn", lambda ctx: (False, {}))
    res = CliRunner().invoke(cli.main, ["--n", "2", "--p", "2", "--suite", "algebra"])
    assert res.exit_code == 1


def test_crashing_check_is_a_failure(monkeypatch):
    def boom(ctx):
        raise RuntimeError("boom")
    monkeypatch.setattr(cli.CATALOG["algebra.dimension"], "fn", boom)
    rep = cli.run_suite("algebra", 2, 2, 1)
    rec = next(c for c in rep["checks"] if c["id"] == "algebra.dimension")
    assert rec["status"] == "fail" and "boom" in rec["witness"]["error"]
