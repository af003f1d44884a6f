import json
from pathlib import Path

import numpy as np
import pytest

from moeadlla import harness
from moeadlla.cli import EXIT_CONFIG, EXIT_IO, EXIT_OK, main
from moeadlla.errors import ConfigurationError, UnsupportedProblemError
from moeadlla.linmodel import load_model

TINY = {"population": "12", "generations": "4", "neighborhood_size": "5", "replicates": "2"}


def tiny(tmp_path, **overrides):
    merged = dict(TINY)
    merged.update({k: str(v) if not isinstance(v, (list, tuple)) else v for k, v in overrides.items()})
    merged.setdefault("out", str(tmp_path))
    return harness.make_config(merged)


def numeric_files(root: Path) -> dict:
    return {p.relative_to(root).as_posix(): p.read_bytes() for p in sorted(root.rglob("*")) if p.is_file() and p.name != "meta.json"}


# configuration


def test_parse_config_text():
    text = """
    # a comment
    problem = zdt2   # trailing comment
    gamma = 1e-4, 5
    lambda0 = 0.3, 0.7
    baseline = no
    """
    cfg = harness.make_config(harness.parse_config_text(text))
    assert cfg.problem == "zdt2"
    assert cfg.gamma == (1e-4, 5.0)
    assert cfg.lambda0 == (0.3, 0.7)
    assert cfg.baseline is False


def test_cli_overrides_win(tmp_path):
    path = tmp_path / "exp.cfg"
    path.write_text("problem = ZDT2\nseed = 4\ngamma = 1\n")
    cfg = harness.load_config(path, {"seed": 9, "gamma": None, "problem": "ZDT6"})
    assert (cfg.problem, cfg.seed, cfg.gamma) == ("ZDT6", 9, (1.0,))


@pytest.mark.parametrize(
    "text,key",
    [
        ("colour = red", "colour"),
        ("replicates = 0", "replicates"),
        ("replicates = 2.5", "replicates"),
        ("problem = ZDT9", "problem"),
        ("lambda0 = 0.2, 0.3, 0.5", "lambda0"),
        ("gamma = -1", "gamma"),
        ("baseline = maybe", "baseline"),
        ("gamma = ", "gamma"),
    ],
)
def test_bad_config_names_the_key(text, key):
    with pytest.raises(ConfigurationError) as err:
        harness.make_config(harness.parse_config_text(text))
    assert err.value.key == key


def test_seeds_follow_base(tmp_path):
    assert tiny(tmp_path, seed=7, replicates=3).seeds() == [7, 8, 9]


def test_out_dir_resolution(monkeypatch, tmp_path):
    monkeypatch.delenv(harness.OUT_ENV, raising=False)
    assert harness.ExperimentConfig().out_dir() == Path(harness.DEFAULT_OUT)
    monkeypatch.setenv(harness.OUT_ENV, str(tmp_path / "env"))
    assert harness.ExperimentConfig().out_dir() == tmp_path / "env"
    assert harness.ExperimentConfig(out="x").out_dir() == Path("x")


# tables


def test_table_round_trip(tmp_path):
    rows = [[0.1, "population", 1e-300, 3, float("nan")], [1 / 3, "predictions", -2.5e17, 0, float("inf")]]
    path = harness.write_table(tmp_path / "t.csv", "moeadlla.test/1", ["a", "source", "b", "k", "c"], rows, {"problem": "ZDT1"})
    t = harness.read_table(path)
    assert t.schema == "moeadlla.test/1"
    assert t.meta == {"problem": "ZDT1"}
    assert t.column("a") == [0.1, 1 / 3]
    assert t.column("source") == ["population", "predictions"]
    assert t.column("b") == [1e-300, -2.5e17]
    assert t.column("k") == [3, 0]
    assert np.isnan(t.column("c")[0]) and t.column("c")[1] == float("inf")


def test_read_table_requires_schema(tmp_path):
    p = tmp_path / "plain.csv"
    p.write_text("a,b\n1,2\n")
    with pytest.raises(ValueError):
        harness.read_table(p)


# commands


@pytest.fixture(scope="module")
def run_dir(tmp_path_factory):
    out = tmp_path_factory.mktemp("run")
    cfg = harness.make_config({**TINY, "out": str(out), "gamma": "1e-3, 1"})
    harness.cmd_run(cfg)
    return out


def test_run_artifact_counts(run_dir):
    assert len(list((run_dir / "models").glob("*.json"))) == 4
    assert len(list((run_dir / "populations").glob("*.csv"))) == 12
    assert len(list((run_dir / "history").glob("*.csv"))) == 8
    t = harness.read_table(run_dir / "reports.csv")
    assert t.schema == harness.REPORT_SCHEMA
    assert t.header[:8] == ["problem", "source", "gamma", "seed", "r_igd", "r_hv", "mse", "vsd"]
    for source in harness.SOURCES:
        assert t.column("source").count(source) == 4
    assert sorted(set(t.column("seed"))) == [0, 1]


def test_population_file_layout(run_dir):
    t = harness.read_table(run_dir / "populations" / "ZDT1_g0.001_s0_population.csv")
    assert t.header == harness.population_header(30, 2)
    assert t.header[0] == "x_1" and t.header[30] == "f_1"
    assert len(t.rows) == 12
    model, meta = load_model(run_dir / "models" / "ZDT1_g0.001_s0.json")
    assert meta["seed"] == 0 and meta["gamma"] == 1e-3


def test_budget_matched_eval_counts(run_dir):
    meta = json.loads((run_dir / "meta.json").read_text())
    assert meta["command"] == "run" and "created" in meta
    for counts in meta["eval_counts"].values():
        assert counts["lla"] == 12 + 2 * 4 * 12
        assert abs(counts["lla"] - counts["baseline"]) <= 12


def test_run_is_byte_reproducible(run_dir, tmp_path):
    cfg = harness.make_config({**TINY, "out": str(tmp_path), "gamma": "1e-3, 1", "jobs": "2"})
    harness.cmd_run(cfg)
    assert numeric_files(tmp_path) == numeric_files(run_dir)


def test_no_baseline(tmp_path):
    harness.cmd_run(tiny(tmp_path, baseline="false", replicates=1))
    t = harness.read_table(tmp_path / "reports.csv")
    assert "baseline" not in t.column("source")
    assert not list((tmp_path / "history").glob("*_baseline.csv"))


def test_metrics_recompute_matches_run(run_dir, tmp_path):
    path = harness.cmd_metrics(run_dir, tmp_path / "m.csv")
    a = harness.read_table(run_dir / "reports.csv")
    b = harness.read_table(path)
    key = lambda t: sorted(map(tuple, [[r[0], r[1], r[2], r[3]] for r in t.rows]))
    assert key(a) == key(b)
    for name in ("r_igd", "r_hv", "vsd"):
        ia = sorted(zip(a.column("source"), a.column("gamma"), a.column("seed"), a.column(name)))
        ib = sorted(zip(b.column("source"), b.column("gamma"), b.column("seed"), b.column(name)))
        np.testing.assert_allclose([r[3] for r in ia], [r[3] for r in ib], rtol=1e-12, equal_nan=True)


def test_metrics_needs_populations(tmp_path):
    with pytest.raises(OSError):
        harness.cmd_metrics(tmp_path)


def test_sweep_outputs(tmp_path):
    harness.cmd_sweep(tiny(tmp_path, gamma="1e-4, 5", replicates=1))
    t = harness.read_table(tmp_path / "sweep.csv")
    assert t.schema == harness.SWEEP_SCHEMA
    assert len(t.rows) == 4
    assert set(t.column("source")) == {"population", "predictions"}
    v = harness.read_table(tmp_path / "variances.csv")
    assert v.column("gamma") == [1e-4, 5.0]
    assert len(v.header) == 31


def test_sweep_rejects_single_gamma(tmp_path):
    with pytest.raises(ConfigurationError) as err:
        harness.cmd_sweep(tiny(tmp_path, gamma="1e-3"))
    assert err.value.key == "gamma"
    assert "at least two" in str(err.value)


def test_table1_shape(tmp_path):
    harness.cmd_table1(tiny(tmp_path, replicates=1, generations=2))
    t = harness.read_table(tmp_path / "table1.csv")
    assert t.column("problem") == list(harness.TABLE1_PROBLEMS)
    assert t.array(harness.TABLE1_COLUMNS).shape == (8, 6)
    md = (tmp_path / "table1.md").read_text()
    assert sum(line.startswith("| ") for line in md.splitlines()) == 9 and "**" in md
    assert "R-HV reference points" in md


def test_error_curve_rows(tmp_path):
    harness.cmd_error_curve(tiny(tmp_path, generations=6))
    t = harness.read_table(tmp_path / "error_curve.csv")
    assert t.column("generation") == list(range(1, 7))
    assert np.all(t.array(["mse_pred", "mse_baseline", "mse_baseline_budget"]) >= 0)


def test_error_curve_rejects_unsupported(tmp_path):
    with pytest.raises(UnsupportedProblemError):
        harness.cmd_error_curve(tiny(tmp_path, problem="DTLZ4"))


# command line


def test_cli_success_prints_path(tmp_path, capsys):
    code = main(["run", "--problem", "ZDT2", "--generations", "2", "--replicates", "1", "--out", str(tmp_path), "--config", str(_cfg_file(tmp_path))])
    assert code == EXIT_OK
    assert capsys.readouterr().out.strip() == str(tmp_path)
    assert (tmp_path / "models" / "ZDT2_g0.001_s0.json").exists()


def _cfg_file(tmp_path):
    p = tmp_path / "small.cfg"
    p.write_text("population = 12\nneighborhood_size = 5\n")
    return p


def test_cli_config_error(tmp_path, capsys):
    code = main(["sweep", "--gamma", "1e-3", "--out", str(tmp_path)])
    assert code == EXIT_CONFIG
    assert "[gamma]" in capsys.readouterr().err


def test_cli_unsupported_problem(tmp_path):
    assert main(["error-curve", "--problem", "DTLZ4", "--out", str(tmp_path)]) == EXIT_CONFIG


def test_cli_unwritable_output(tmp_path, capsys):
    blocker = tmp_path / "file"
    blocker.write_text("")
    code = main(["run", "--config", str(_cfg_file(tmp_path)), "--generations", "1", "--replicates", "1", "--out", str(blocker / "sub")])
    assert code == EXIT_IO
    assert "I/O error" in capsys.readouterr().err


def test_cli_uses_env_out(tmp_path, monkeypatch):
    monkeypatch.setenv(harness.OUT_ENV, str(tmp_path / "envout"))
    assert main(["run", "--config", str(_cfg_file(tmp_path)), "--generations", "1", "--replicates", "1", "--no-baseline"]) == EXIT_OK
    assert (tmp_path / "envout" / "reports.csv").exists()


def test_cli_metrics(run_dir, tmp_path):
    assert main(["metrics", str(run_dir), "--out", str(tmp_path / "m.csv")]) == EXIT_OK
    assert main(["metrics", str(tmp_path / "missing")]) == EXIT_IO
