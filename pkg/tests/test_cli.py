"""CLI driver: jobs, exit codes, determinism, corpus plumbing."""

import json

from mustab.cli import main
from mustab.corpus import corpus_entries
from mustab.jobs import run_job


def ser(*terms, prec=None):
    out = {"terms": [[str(e), str(c)] for e, c in terms]}
    if prec is not None:
        out["prec"] = str(prec)
    return out


X1_JOB = {
    "field": {"kind": "Q"},
    "group": {"kind": "SL", "n": 2},
    "command": "stab",
    "algorithm": "both",
    "input": {"branch": {"entries": [
        [ser(("-1", "1")), ser(("0", "1"))],
        [{"terms": []}, ser(("1", "1"))],
    ]}},
    "budgets": {"precision": 12, "degree_bound": 4, "order_budget": 6},
}


def test_stab_job_roundtrip(tmp_path):
    job_file = tmp_path / "job.json"
    out_file = tmp_path / "report.json"
    job_file.write_text(json.dumps(X1_JOB))
    code = main(["--job", str(job_file), "--json-out", str(out_file)])
    assert code == 0
    report = json.loads(out_file.read_text())
    assert report["checks"]["dim_equality"] == "pass"
    assert report["checks"]["agreement"] == "pass"
    stab = report["results"]["stabilizers"][0]
    assert stab["subgroup"]["classification"] == "upper unipotent"
    assert stab["subgroup"]["dim"] == 1


def test_report_deterministic_modulo_timing(tmp_path):
    report1, code1 = run_job(X1_JOB)
    report2, code2 = run_job(X1_JOB)
    assert code1 == code2 == 0
    report1.pop("timing")
    report2.pop("timing")
    assert json.dumps(report1, sort_keys=True) == json.dumps(report2, sort_keys=True)


def test_places_job():
    job = {
        "field": {"kind": "Q"},
        "group": {"kind": "SL", "n": 2},
        "command": "places",
        "input": {"plane_curve": {"f": "x*y - 1", "embedding": [["x", "1"], ["0", "y"]]}},
    }
    report, code = run_job(job)
    assert code == 0
    assert len(report["results"]["branches"]) == 2


def test_exit_code_unsupported():
    job = {
        "field": {"kind": "Q"},
        "group": {"kind": "Additive", "n": 2},
        "command": "stab",
        "input": {"plane_curve": {"f": "x^2 + y^2 - 1", "embedding": ["x", "y"]}},
    }
    report, code = run_job(job)
    assert code == 3
    assert report["errors"][0]["type"] == "CoefficientFieldTooSmall"


def test_exit_code_invalid():
    report, code = run_job({"field": {"kind": "Q"}, "command": "stab"})
    assert code == 2
    job = dict(X1_JOB, budgets={"precision": 900})
    report, code = run_job(job)
    assert code == 2


def test_exit_code_budget():
    job = json.loads(json.dumps(X1_JOB))
    job["budgets"]["spoly_budget"] = 1
    report, code = run_job(job)
    assert code == 4
    assert report["errors"][0]["type"] == "BudgetExceeded"


def test_reduce_job():
    job = {
        "field": {"kind": "Q"},
        "group": {"kind": "Additive", "n": 2},
        "exponent_d": 2,
        "command": "reduce",
        "input": {"branch": {"entries": [ser(("-1", "1")), ser(("-1", "1"), ("sqrt(2)", "1"))]}},
    }
    report, code = run_job(job)
    assert code == 0
    assert report["results"]["dim_before"] == 2
    assert report["results"]["dim_after"] == 1
    assert report["results"]["certificate"] is not None


def test_iwasawa_job():
    job = {
        "field": {"kind": "Q"},
        "group": {"kind": "SL", "n": 2},
        "command": "iwasawa",
        "input": {"branch": {"entries": [
            [ser(("-1", "1")), {"terms": []}],
            [ser(("0", "1")), ser(("1", "1"))],
        ]}},
    }
    report, code = run_job(job)
    assert code == 0
    assert report["results"]["u_integral"] is True


def test_verify_job_pass_and_fail():
    base = {
        "field": {"kind": "Q"},
        "group": {"kind": "SL", "n": 2},
        "command": "verify",
    }
    good = dict(base, input={"subgroup": {"ideal": ["x12", "x21", "x11*x22 - 1"]}})
    report, code = run_job(good)
    assert code == 0 and report["results"]["verified_subgroup"]
    assert report["results"]["solvable"] is True
    bad = dict(base, input={"subgroup": {"ideal": ["x11 - 2", "x21", "x12", "2*x22 - 1"]}})
    report, code = run_job(bad)
    assert code == 5 and not report["results"]["verified_subgroup"]


def test_cli_requires_work(capsys):
    assert main([]) == 2


def test_cli_bad_job_file(tmp_path):
    p = tmp_path / "nope.json"
    assert main(["--job", str(p)]) == 2
    p.write_text("{not json")
    assert main(["--job", str(p)]) == 2


def test_corpus_entry_via_cli(capsys):
    code = main(["--corpus", "--only", "x1"])
    out = capsys.readouterr().out
    assert code == 0
    assert "x1" in out and "pass" in out


def test_corpus_fixtures_parse():
    entries = corpus_entries()
    names = [e["name"] for e in entries]
    assert names == ["x1", "x2", "psl2_quotient", "reduced_a2", "reduced_a2_f5", "cusp", "bounded", "circle_f5"]
    skips = [e for e in entries if "skip" in e["job"]]
    assert len(skips) == 1 and skips[0]["name"] == "psl2_quotient"


def test_cli_override_algorithm(tmp_path):
    job_file = tmp_path / "job.json"
    job_file.write_text(json.dumps(X1_JOB))
    out_file = tmp_path / "r.json"
    code = main(["--job", str(job_file), "--algorithm", "reparam", "--json-out", str(out_file)])
    assert code == 0
    report = json.loads(out_file.read_text())
    stab = report["results"]["stabilizers"][0]
    assert "degeneration" not in stab
    assert stab["agreement"] is None
