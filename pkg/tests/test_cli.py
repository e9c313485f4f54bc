import csv
import io
import textwrap
from pathlib import Path

import pytest

from expandlab.cli import COLUMNS, main
from expandlab.config import validate_config

CONFIGS = Path(__file__).resolve().parent.parent / "configs"


def write(tmp_path, text, name="run.ini"):
    p = tmp_path / name
    p.write_text(textwrap.dedent(text))
    return p


def run(tmp_path, scenario, cfg, *extra):
    out = tmp_path / f"{scenario}.csv"
    code = main([scenario, "--config", str(cfg), "--out", str(out), *extra])
    rows = list(csv.DictReader(io.StringIO(out.read_text()))) if out.exists() else []
    return code, rows, out


def test_bounds_row(tmp_path):
    cfg = write(tmp_path, """
        [scenario]
        kind = bounds
        [params]
        eps = 1
        m = 1
        c_prime = 1
    """)
    code, rows, out = run(tmp_path, "bounds", cfg)
    assert code == 0
    row = next(r for r in rows if r["label"].endswith("eta_unbalanced"))
    assert float(row["value"]) == 0.5
    summary = Path(str(out) + ".summary.txt").read_text()
    assert "c=1.0" in summary and "c_prime=1.0" in summary and "xi=" in summary


def test_tower_row(tmp_path):
    cfg = write(tmp_path, "[scenario]\nkind = tower\n[input]\nn = 16\n")
    code, rows, _ = run(tmp_path, "tower", cfg)
    assert code == 0 and rows[0]["image"] == "32"
    assert list(rows[0]) == list(COLUMNS)


def test_missing_file_names_path(tmp_path, capsys):
    cfg = write(tmp_path, """
        [scenario]
        kind = classify
        [input]
        family_file = does_not_exist.txt
        [params]
        eps = 0.5
    """)
    assert main(["classify", "--config", str(cfg)]) == 2
    assert "does_not_exist.txt" in capsys.readouterr().err


def test_validation_collects_errors():
    cfg, errors = validate_config("[scenario]\nkind = classify\n[input]\nfamily = t^2\n[params]\neps = 0\n")
    assert cfg is None and "eps must be in (0,1)" in errors
    cfg, errors = validate_config("[scenario]\nkind = classify\n[input]\nfamily_file = nope\n[params]\neps = 2\nc = -1\n")
    assert len(errors) >= 3
    cfg, errors = validate_config(
        "[scenario]\nkind = measure\n[input]\nset = range(1, n+1)\nsizes = 10, 20\npoly = x^2 + x*y0\n")
    assert errors == [] and cfg.scenario == "measure"
    _, errors = validate_config("[scenario]\nkind = decompose\n[input]\npoly = x^\n")
    assert errors and "offset 2" in errors[0]


def test_budget_exit(tmp_path):
    cfg = write(tmp_path, """
        [scenario]
        kind = span
        [input]
        N = 64
        k = 3
        method = enumerate
        [params]
        budget = 10
    """)
    assert main(["span", "--config", str(cfg)]) == 3


def test_dry_run_computes_nothing(tmp_path, capsys):
    cfg = write(tmp_path, "[scenario]\nkind = tower\n[input]\nn = 4\n")
    out = tmp_path / "x.csv"
    assert main(["tower", "--config", str(cfg), "--out", str(out), "--dry-run"]) == 0
    assert not out.exists()
    assert "scenario: tower" in capsys.readouterr().out


def test_scenario_mismatch(tmp_path):
    cfg = write(tmp_path, "[scenario]\nkind = tower\n[input]\nn = 4\n")
    assert main(["span", "--config", str(cfg)]) == 2


def test_deterministic_across_threads_and_runs(tmp_path):
    cfg = write(tmp_path, """
        [scenario]
        kind = measure
        label = rand
        [input]
        family = t^2 + t; t^3
        set = rand(n, -500, 500)
        sizes = 20, 40, 80
    """)
    outs = []
    for threads in ("1", "1", "3"):
        out = tmp_path / f"o{len(outs)}.csv"
        assert main(["measure", "--config", str(cfg), "--out", str(out), "--seed", "42", "--threads", threads]) == 0
        outs.append(out.read_bytes())
    assert outs[0] == outs[1] == outs[2]
    other = tmp_path / "other.csv"
    main(["measure", "--config", str(cfg), "--out", str(other), "--seed", "43"])
    assert other.read_bytes() != outs[0]


@pytest.mark.parametrize("name", sorted(p.stem for p in CONFIGS.glob("*.ini")))
def test_shipped_configs_run(tmp_path, name):
    code, rows, _ = run(tmp_path, name, CONFIGS / f"{name}.ini")
    assert code == 0 and rows
    keys = [(r["label"], r["n"]) for r in rows]
    assert keys == sorted(keys, key=lambda k: (k[0], k[1] == "", int(k[1]) if k[1] else 0))
    for r in rows:
        for col in ("image", "incidence", "coarse_dim", "slope", "residual", "log_scale"):
            if r[col]:
                float(r[col])


def test_stab_with_generated_subgroup(tmp_path):
    cfg = write(tmp_path, """
        [scenario]
        kind = stab
        [input]
        action = agl1(7)
        A = all
        S = {2,0; 1,1}
        [params]
        n = 2
    """)
    code, rows, out = run(tmp_path, "stab", cfg)
    assert code == 0
    assert next(r for r in rows if r["label"].endswith("nontrivial"))["value"] == "7"
    assert "fixpoint reached" in Path(str(out) + ".summary.txt").read_text()


def test_degenerate_input_exit(tmp_path, capsys):
    cfg = write(tmp_path, """
        [scenario]
        kind = bsg
        [input]
        action = cyclic(50)
        S = {25}
        A = range(0, 5)
    """)
    assert main(["bsg", "--config", str(cfg)]) == 2
    assert "input error" in capsys.readouterr().err
