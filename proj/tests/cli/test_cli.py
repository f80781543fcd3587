import csv
import io
import json
import os
import subprocess
from fractions import Fraction

import pytest

NEEDLE = os.environ.get("NEEDLE_CLI", "needle")


def run(*args, env=None, check=True):
    proc = subprocess.run([NEEDLE, *map(str, args)], capture_output=True, text=True,
                          env={**os.environ, **(env or {})})
    if check and proc.returncode != 0:
        raise AssertionError(f"exit {proc.returncode}: {proc.stderr}")
    return proc


def csv_rows(text):
    body = "\n".join(line for line in text.splitlines() if not line.startswith("#"))
    return list(csv.DictReader(io.StringIO(body)))


def test_exact_values():
    assert run("exact", "--n", 2, "--k", 0).stdout.strip() == "5/2 (2.5)"
    assert run("exact", "--n", 3, "--k", 1).stdout.strip() == "9/8 (1.125)"
    assert run("exact", "--n", 3, "--k", 1, "--start-ones", 3).stdout.strip() == "0"


def test_usage_errors_exit_1():
    assert run("exact", "--n", 3, "--k", 9, check=False).returncode == 1
    assert run("bogus", check=False).returncode == 1
    assert run("verify", "--max-n", 0, check=False).returncode == 1


def test_hit_table_and_chain_file(tmp_path):
    rows = csv_rows(run("hit", "--n", 4).stdout)
    assert [Fraction(r["up_time"]) for r in rows] == [1, Fraction(5, 3), Fraction(11, 3), 15]
    chain = tmp_path / "fair.json"
    chain.write_text(json.dumps({"n": 3, "p_minus": ["1/2"] * 3, "p_plus": ["1/2"] * 3}))
    rows = csv_rows(run("hit", "--from-file", chain).stdout)
    assert [Fraction(r["up_time"]) for r in rows] == [2, 4, 6]


def test_missing_file_exits_3(tmp_path):
    assert run("hit", "--from-file", tmp_path / "nope.json", check=False).returncode == 3


def test_simulate_is_reproducible_and_checks_exact():
    a = json.loads(run("simulate", "--n", 8, "--k", 1, "--trials", 5000, "--seed", 9, "--check-exact").stdout)
    b = json.loads(run("simulate", "--n", 8, "--k", 1, "--trials", 5000, "--threads", 1,
                       "--check-exact", env={"NEEDLE_SEED": "9"}).stdout)
    assert a == b
    assert Fraction(a["exact"]) == Fraction(1268759, 26880)
    assert abs(a["z_score"]) <= 4
    assert a["censored"] == 0


def test_simulate_trivial_instance():
    batch = json.loads(run("simulate", "--n", 4, "--k", 4, "--trials", 10, "--seed", 1).stdout)
    assert batch["mean"] == 0
    assert batch["seed"] == 1 and batch["rng_name"]


def test_simulate_round_trip(tmp_path):
    out = run("simulate", "--n", 6, "--k", 1, "--trials", 100, "--seed", 2, "--variant", "symmetric").stdout
    path = tmp_path / "batch.json"
    path.write_text(out)
    assert json.loads(run("simulate", "--from-file", path).stdout) == json.loads(out)


def test_bound_and_classify():
    out = run("bound", "--n", 100, "--k", 49).stdout
    assert "bound=56" in out
    assert "invalid: odd n" in run("bound", "--n", 101, "--k", 40).stdout
    assert "regime=LINEAR_K" in run("classify", "--n", 100, "--k", 30).stdout
    assert "regime=ABOVE_HALF_LARGE" in run("classify", "--n", 100, "--k", 72).stdout


def test_config_file_precedence(tmp_path):
    cfg = tmp_path / "needle.cfg"
    cfg.write_text("regime.c1 = 3\n")
    assert "regime=LINEAR_K" in run("classify", "--n", 100, "--k", 35).stdout
    assert "regime=NEAR_HALF_SQRT" in run("--config", cfg, "classify", "--n", 100, "--k", 35).stdout
    assert "regime=LINEAR_K" in run("--config", cfg, "classify", "--n", 100, "--k", 35, "--c1", 1).stdout


def test_compare_csv(tmp_path):
    out = tmp_path / "cmp.csv"
    run("compare", "--n-values", "40,60,80", "-o", out)
    rows = csv_rows(out.read_text())
    assert len(rows) == 41 + 61 + 81
    eligible = [r for r in rows if r["r"] and int(r["r"]) >= 2]
    assert eligible and all(r["eq1_valid"] == "valid" and r["ratio_bound_exact"] for r in eligible)
    first = next(r for r in rows if r["n"] == "40" and r["k"] == "0")
    assert float(first["ratio_bound_exact"]) >= 10
    again = run("compare", "--from-file", out).stdout
    assert again == out.read_text()


def test_sweep_with_simulation():
    text = run("sweep", "--n-values", "8..10:2", "--k-rule", "list:1", "--outputs", "exact,simulate",
               "--trials", 2000, "--seed", 4).stdout
    assert text.startswith("#")
    rows = csv_rows(text)
    assert [r["n"] for r in rows] == ["8", "10"]
    assert all(r["sim_trials"] == "2000" and r["eq1_bound"] == "" for r in rows)


def test_verify_and_fault_injection():
    ok = run("verify", "--max-n", 8)
    assert ok.returncode == 0
    bad = run("verify", "--max-n", 8, "--inject-fault", "off-by-one-cum", check=False)
    assert bad.returncode == 2
    assert "(n=1, k=0, i=0) got 0, expected 1" in bad.stdout + bad.stderr
