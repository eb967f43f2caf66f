import io
import json
import os
import subprocess
import sys

import pytest

from quadreturns.cli import main

SYM = "1/4,1/4,1/4,1/4"


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def test_exact_rational_rows():
    code, out, _ = run("exact", "--walk", SYM, "--n", "2", "--cond", "none")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "r1,r2,mass"
    assert "1,0,1/8" in lines


def test_exact_float_rows_and_sidecar(tmp_path):
    target = tmp_path / "law.csv"
    code, _, _ = run("exact", "--walk", "0.3,0.1,0.4,0.2", "--n", "100", "--cond", "meander", "--out", str(target))
    assert code == 0
    first = target.read_text().splitlines()[1].split(",")
    assert len(first[2].replace("e-", "").replace(".", "")) >= 15
    meta = json.loads((tmp_path / "law.csv.json").read_text())
    assert meta["engine_backend"] == "float"
    assert meta["config"]["walk"] == "0.3,0.1,0.4,0.2"
    assert {"version", "kernel_backend", "truncation_remainder", "event_probability"} <= set(meta)


def test_config_errors():
    code, _, err = run("exact", "--walk", SYM, "--n", "3", "--cond", "bridge")
    assert code == 2 and "even" in err
    code, _, err = run("exact", "--n", "2")
    assert code == 2 and "--walk" in err
    code, _, _ = run("exact", "--walk", "0.5,0.5,0.5,0.5", "--n", "2")
    assert code == 2
    code, _, _ = run("exact", "--walk", SYM, "--n", "2", "--cond", "sideways")
    assert code == 2


def test_capacity_error():
    code, _, err = run("exact", "--walk", SYM, "--n", "5000", "--backend", "exact")
    assert code == 3 and "capacity" in err


def test_config_file_and_precedence(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# defaults\nwalk = 1/4,1/4,1/4,1/4\nn = 2\ncond = bridge\n")
    code, out, _ = run("exact", "--config", str(cfg))
    assert code == 0 and "1,0,1/8" in out
    code, out, _ = run("exact", "--config", str(cfg), "--cond", "none")
    assert "0,0,3/4" in out
    cfg.write_text("colour = blue\n")
    assert run("exact", "--config", str(cfg))[0] == 2


def test_byte_reproducible(tmp_path):
    paths = []
    for i in range(2):
        p = tmp_path / f"s{i}.csv"
        args = ("sample", "--walk", SYM, "--n", "8", "--cond", "meander", "--seed", "7", "--trials", "20000", "--out", str(p))
        assert run(*args)[0] == 0
        paths.append(p)
    assert paths[0].read_bytes() == paths[1].read_bytes()
    assert (tmp_path / "s0.csv.json").read_bytes() == (tmp_path / "s1.csv.json").read_bytes()


def test_sample_needs_seed_and_refuses_hopeless_runs():
    assert run("sample", "--walk", SYM, "--n", "4")[0] == 2
    code, _, err = run("sample", "--walk", "0.1,0.3,0.2,0.4", "--n", "200", "--cond", "meander", "--seed", "1")
    assert code == 2 and "--force" in err
    code, out, _ = run(
        "sample", "--walk", "0.1,0.3,0.2,0.4", "--n", "200", "--cond", "meander",
        "--seed", "1", "--trials", "10", "--force",
    )
    assert code == 0 and out.strip() == "r1,r2,mass"


def test_limit_grids():
    code, out, _ = run("limit", "--walk", "0.1,0.3,0.2,0.4", "--cond", "meander")
    assert code == 0 and out.splitlines()[1].startswith("0,0,0.1020620726")
    code, out, _ = run("limit", "--walk", SYM, "--cond", "bridge")
    assert out.splitlines()[0] == "axis,x,cdf"


def test_compare_sweep_oracle():
    code, out, _ = run("compare", "--walk", SYM, "--n", "400", "--cond", "nnb")
    assert code == 0 and out.splitlines()[1].startswith("400,even,TV,")
    code, out, _ = run("sweep", "--walk", SYM, "--ns", "10,20", "--cond", "nnb")
    assert out.splitlines()[0] == "n,parity,metric,value,slack" and len(out.splitlines()) == 3
    code, out, _ = run("oracle", "--walk", "0.1,0.3,0.2,0.4", "--n", "6", "--cond", "meander", "--format", "json")
    assert code == 0 and json.loads(out)["meta"]["shuffle_agrees"] is True


def test_reproduce(tmp_path):
    report = tmp_path / "r.txt"
    code, _, _ = run("reproduce", "1.4", "--scale", "small", "--out", str(report))
    assert code == 0
    text = report.read_text()
    assert text.count("PASS") == 2 and "<= 0.05" in text
    code, out, _ = run("reproduce", "1.3", "--scale", "small", "--walk", "0.1,0.3,0.2,0.4")
    assert code == 0 and "limit dependence" in out
    assert run("reproduce", "9.9")[0] == 2


def test_console_script():
    proc = subprocess.run(
        [sys.executable, "-m", "quadreturns.cli", "exact", "--walk", SYM, "--n", "2"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0 and "0,1,1/8" in proc.stdout
