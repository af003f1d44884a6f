"""Experiment orchestration: seeded replicates, comparison tables, sweeps,
error curves, and the flat-file formats they read and write.

Every numeric output is a CSV whose first line is a ``#`` comment naming
the schema (``moeadlla.<kind>/<version>``) plus ``key=value`` metadata.
Floats are written with ``repr`` so files parse back bit-exactly.  Wall
clock information goes only to ``meta.json``.
"""

from __future__ import annotations

import csv
import io
import json
import logging
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

import numpy as np

from .errors import ConfigurationError, MetricUndefinedError, UnsupportedProblemError
from .linmodel import LinearModel, load_model, save_model, vsd
from .lla import LlaConfig, predictions, run_lla
from .metrics import MetricReport, RMetricSetup, mse_to_true_ps, variable_variances
from .moead import MoeadConfig, Population, run_moead_de
from .preference import as_preference, default_anchor, parse_preference, sample_preference_set
from .problems import canonical_name, make_problem, supports_optimum, true_subproblem_optima, utopian_point

log = logging.getLogger(__name__)

OUT_ENV = "MOEADLLA_OUT"
DEFAULT_OUT = "moeadlla-out"
TABLE1_PROBLEMS = ("ZDT1", "ZDT2", "ZDT4", "ZDT6", "DTLZ1", "DTLZ2", "DTLZ3", "DTLZ4")
SWEEP_GAMMAS = (1e-4, 1e-3, 5e-2, 1.0, 5.0)
SOURCES = ("baseline", "population", "predictions")

_MOEAD_KEYS = ("neighborhood_size", "mating_locality", "max_replacements", "de_scale", "crossover_rate", "mutation_eta")


# ---------------------------------------------------------------------------
# configuration


@dataclass(frozen=True)
class ExperimentConfig:
    problem: str = "ZDT1"
    n: int | None = None
    lambda0: tuple | None = None
    population: int = 100
    generations: int = 300
    gamma: tuple = (1e-3,)
    sigma2: float = 0.02
    sigma2_noise: float = 0.05
    reg_tol: float = 1e-10
    reg_max_iters: int = 10_000
    reference: str = "online"
    loss_reduction: str = "sum"
    neighborhood_size: int = 20
    mating_locality: float = 0.9
    max_replacements: int = 2
    de_scale: float = 0.5
    crossover_rate: float = 1.0
    mutation_eta: float = 20.0
    replicates: int = 10
    seed: int = 0
    baseline: bool = True
    problems: tuple = TABLE1_PROBLEMS
    delta_reading: str = "std"
    jobs: int = 1
    out: str | None = None

    def validate(self) -> None:
        canonical_name(self.problem)
        for name in self.problems:
            canonical_name(name)
        if self.replicates < 1:
            raise ConfigurationError("replicates must be >= 1", key="replicates")
        if len(self.gamma) == 0:
            raise ConfigurationError("gamma list is empty", key="gamma")
        if self.jobs < 1:
            raise ConfigurationError("jobs must be >= 1", key="jobs")
        if self.delta_reading not in ("std", "variance"):
            raise ConfigurationError("delta_reading must be 'std' or 'variance'", key="delta_reading")
        problem = make_problem(self.problem, self.n)
        self.anchor_for(problem)
        for g in self.gamma:
            self.lla_config(g, self.seed).validate()

    def out_dir(self) -> Path:
        return Path(self.out or os.environ.get(OUT_ENV) or DEFAULT_OUT)

    def anchor_for(self, problem) -> np.ndarray:
        if self.lambda0 is None:
            return default_anchor(problem.m)
        anchor = as_preference(self.lambda0)
        if anchor.size != problem.m:
            raise ConfigurationError(
                f"lambda0 has {anchor.size} components but {problem.name} has {problem.m} objectives", key="lambda0"
            )
        return anchor

    def moead_config(self) -> MoeadConfig:
        return MoeadConfig(**{k: getattr(self, k) for k in _MOEAD_KEYS})

    def lla_config(self, gamma: float, seed: int) -> LlaConfig:
        return LlaConfig(
            population=self.population,
            generations=self.generations,
            gamma=float(gamma),
            sigma2=self.sigma2,
            sigma2_noise=self.sigma2_noise,
            reg_tol=self.reg_tol,
            reg_max_iters=self.reg_max_iters,
            moead=self.moead_config(),
            seed=int(seed),
            reference=self.reference,
            loss_reduction=self.loss_reduction,
        )

    def seeds(self) -> list[int]:
        return [self.seed + r for r in range(self.replicates)]

    def to_dict(self) -> dict:
        d = asdict(self)
        d["gamma"] = list(self.gamma)
        d["problems"] = list(self.problems)
        d["lambda0"] = None if self.lambda0 is None else list(self.lambda0)
        return d


_FIELD_TYPES = {f.name: f.type for f in fields(ExperimentConfig)}


def _parse_bool(text: str) -> bool:
    t = text.strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _floats(text) -> tuple:
    if isinstance(text, (int, float)):
        return (float(text),)
    if isinstance(text, (list, tuple)):
        return tuple(float(v) for v in text)
    return tuple(float(p) for p in str(text).split(",") if p.strip())


def _convert(key: str, value):
    """Turn a config-file string (or already typed CLI value) into the field's type."""
    try:
        if key == "gamma":
            return _floats(value)
        if key == "lambda0":
            if value is None or str(value).strip().lower() in ("", "none", "default"):
                return None
            return tuple(float(v) for v in parse_preference(value)) if isinstance(value, str) else _floats(value)
        if key == "problems":
            items = value if isinstance(value, (list, tuple)) else str(value).split(",")
            return tuple(canonical_name(p) for p in items if str(p).strip())
        if key == "n":
            if value is None or str(value).strip().lower() in ("", "none", "default"):
                return None
            return int(value)
        if key in ("out", "problem"):
            return None if value is None else str(value).strip()
        if key == "baseline":
            return value if isinstance(value, bool) else _parse_bool(str(value))
        kind = _FIELD_TYPES[key]
        if kind == "int":
            f = float(value)
            if f != int(f):
                raise ValueError(f"{value!r} is not an integer")
            return int(f)
        if kind == "float":
            return float(value)
        return str(value).strip()
    except ConfigurationError:
        raise
    except (TypeError, ValueError) as exc:
        raise ConfigurationError(f"bad value for {key}: {value!r} ({exc})", key=key) from exc


def parse_config_text(text: str) -> dict:
    """Parse ``key = value`` lines; ``#`` starts a comment, blank lines are ignored."""
    entries = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigurationError(f"line {lineno}: expected 'key = value', got {raw!r}", key=None)
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in _FIELD_TYPES:
            raise ConfigurationError(f"line {lineno}: unknown key {key!r}", key=key)
        entries[key] = value
    return entries


def make_config(file_entries: dict | None = None, overrides: dict | None = None) -> ExperimentConfig:
    """Config from file entries with overrides on top (``None`` overrides are skipped)."""
    merged = dict(file_entries or {})
    merged.update({k: v for k, v in (overrides or {}).items() if v is not None})
    kwargs = {}
    for key, value in merged.items():
        if key not in _FIELD_TYPES:
            raise ConfigurationError(f"unknown key {key!r}", key=key)
        kwargs[key] = _convert(key, value)
    cfg = ExperimentConfig(**kwargs)
    cfg.validate()
    return cfg


def load_config(path, overrides: dict | None = None) -> ExperimentConfig:
    return make_config(parse_config_text(Path(path).read_text()), overrides)


# ---------------------------------------------------------------------------
# CSV tables


def _cell(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def format_table(schema: str, header, rows, meta: dict | None = None) -> str:
    buf = io.StringIO()
    comment = "# " + schema
    if meta:
        comment += " " + " ".join(f"{k}={_cell(v)}" for k, v in meta.items())
    buf.write(comment + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_cell(v) for v in row])
    return buf.getvalue()


def write_table(path, schema: str, header, rows, meta: dict | None = None) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(format_table(schema, header, rows, meta))
    return path


def _parse_cell(text: str):
    for conv in (int, float):
        try:
            return conv(text)
        except ValueError:
            pass
    if text in ("true", "false"):
        return text == "true"
    return text


@dataclass
class Table:
    schema: str
    meta: dict
    header: list
    rows: list = field(default_factory=list)

    def column(self, name) -> list:
        j = self.header.index(name)
        return [r[j] for r in self.rows]

    def array(self, names) -> np.ndarray:
        idx = [self.header.index(c) for c in names]
        return np.array([[float(r[j]) for j in idx] for r in self.rows], dtype=float).reshape(len(self.rows), len(idx))


def read_table(path) -> Table:
    text = Path(path).read_text()
    first, _, body = text.partition("\n")
    if not first.startswith("# "):
        raise ValueError(f"{path}: missing schema comment")
    parts = first[2:].split()
    meta = {}
    for item in parts[1:]:
        k, _, v = item.partition("=")
        meta[k] = _parse_cell(v)
    reader = csv.reader(io.StringIO(body))
    header = next(reader)
    rows = [[_parse_cell(c) for c in row] for row in reader]
    return Table(parts[0], meta, header, rows)


REPORT_SCHEMA = "moeadlla.report/1"
POPULATION_SCHEMA = "moeadlla.population/1"
HISTORY_SCHEMA = "moeadlla.history/1"
SWEEP_SCHEMA = "moeadlla.sweep/1"
VARIANCE_SCHEMA = "moeadlla.variances/1"
TABLE1_SCHEMA = "moeadlla.table1/1"
CURVE_SCHEMA = "moeadlla.error-curve/1"


def population_header(n: int, m: int) -> list[str]:
    return [f"x_{j + 1}" for j in range(n)] + [f"f_{i + 1}" for i in range(m)] + [f"lam_{i + 1}" for i in range(m)]


def _history_rows(history):
    cols = history.columns()
    names = list(cols)
    return names, list(zip(*(cols[c].tolist() for c in names)))


def _reports_table(reports) -> tuple[list, list]:
    width = max(r.variable_variances.size for r in reports)
    header = MetricReport("", "", 0.0, 0, 0.0, 0.0, 0.0, 0.0, np.zeros(width)).header()
    rows = []
    for r in reports:
        row = r.row()
        rows.append(row + [""] * (len(header) - len(row)))
    return header, rows


# ---------------------------------------------------------------------------
# single replicate


@dataclass
class ReplicateResult:
    problem: str
    gamma: float
    seed: int
    model: LinearModel
    population: Population
    prediction_X: np.ndarray
    prediction_F: np.ndarray
    history: object
    baseline: Population | None
    baseline_history: object | None
    reports: list


def _score(setup: RMetricSetup, F) -> tuple[float, float]:
    try:
        return setup.r_igd(F), setup.r_hv(F)
    except MetricUndefinedError:
        return float("nan"), float("nan")


def _setup(problem, anchor, cfg: ExperimentConfig) -> RMetricSetup:
    return RMetricSetup.for_problem(problem, anchor, cfg.sigma2, cfg.delta_reading)


def report_for(problem, setup, source, gamma, seed, X, F, prefs, model=None) -> MetricReport:
    """Metric row for one solution set; ``model`` is given for prediction sets."""
    r_igd_v, r_hv_v = _score(setup, F)
    mse = float("nan")
    if supports_optimum(problem):
        z = utopian_point(problem)
        if model is not None:
            mse = mse_to_true_ps(model, prefs, problem, z)
        else:
            diff = X - true_subproblem_optima(problem, prefs, z)
            mse = float(np.mean(np.sum(diff**2, axis=1)))
    return MetricReport(
        problem.name,
        source,
        float(gamma),
        int(seed),
        r_igd_v,
        r_hv_v,
        mse,
        vsd(model) if model is not None else float("nan"),
        variable_variances(X),
    )


def run_replicate(
    cfg: ExperimentConfig, problem_name: str, gamma: float, seed: int, with_baseline: bool, track_error: bool = False
) -> ReplicateResult:
    """One LLA run (and optionally its budget-matched baseline) plus metric rows.

    The baseline draws its preference set from a generator seeded like the
    LLA run, so both optimise the same sub-problems.
    """
    # n and lambda0 apply to the configured problem; other problems use defaults
    if canonical_name(problem_name) == canonical_name(cfg.problem):
        problem = make_problem(problem_name, cfg.n)
        anchor = cfg.anchor_for(problem)
    else:
        problem = make_problem(problem_name)
        anchor = default_anchor(problem.m)
    lla_cfg = cfg.lla_config(gamma, seed)
    res = run_lla(problem, anchor, lla_cfg, track_error=track_error)
    prefs = res.population.prefs.members
    Xp = predictions(res.model, prefs, problem)
    Fp = problem.evaluate(Xp)
    setup = _setup(problem, anchor, cfg)
    reports = []
    base = base_hist = None
    if with_baseline:
        rng = np.random.default_rng(seed)
        bprefs = sample_preference_set(anchor, cfg.sigma2, cfg.population, rng)
        base, base_hist = run_moead_de(
            problem, bprefs, cfg.generations, cfg.moead_config(), rng, compensate=True, track_error=track_error
        )
        reports.append(report_for(problem, setup, "baseline", gamma, seed, base.X, base.F, bprefs.members))
    pop = res.population
    reports.append(report_for(problem, setup, "population", gamma, seed, pop.X, pop.F, prefs))
    reports.append(report_for(problem, setup, "predictions", gamma, seed, Xp, Fp, prefs, model=res.model))
    return ReplicateResult(
        problem.name, float(gamma), int(seed), res.model, pop, Xp, Fp, res.history, base, base_hist, reports
    )


def _run_job(args):
    return run_replicate(*args)


def run_many(cfg: ExperimentConfig, jobs: list[tuple]) -> list[ReplicateResult]:
    """Run replicate jobs, in parallel when ``cfg.jobs > 1``; results keep submission order."""
    payload = [(cfg,) + tuple(j) for j in jobs]
    if cfg.jobs <= 1 or len(payload) <= 1:
        out = []
        for k, p in enumerate(payload, start=1):
            log.info("run %d/%d: %s gamma=%g seed=%d", k, len(payload), p[1], p[2], p[3])
            out.append(_run_job(p))
        return out
    with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
        return list(pool.map(_run_job, payload))


# ---------------------------------------------------------------------------
# artefact writing


def _tag(problem: str, gamma: float, seed: int) -> str:
    return f"{problem}_g{gamma!r}_s{seed}"


def _write_meta(out: Path, command: str, cfg: ExperimentConfig, extra: dict | None = None) -> None:
    meta = {
        "command": command,
        "created": time.strftime("%Y-%m-%dT%H:%M:%S%z"),
        "config": cfg.to_dict(),
    }
    if extra:
        meta.update(extra)
    (out / "meta.json").write_text(json.dumps(meta, indent=1, sort_keys=True) + "\n")


def _prepare(out: Path) -> Path:
    try:
        out.mkdir(parents=True, exist_ok=True)
        probe = out / ".write-test"
        probe.write_text("")
        probe.unlink()
    except OSError as exc:
        raise OSError(f"output directory {out} is not writable: {exc}") from exc
    return out


def write_replicate(out: Path, r: ReplicateResult) -> None:
    tag = _tag(r.problem, r.gamma, r.seed)
    (out / "models").mkdir(parents=True, exist_ok=True)
    save_model(out / "models" / f"{tag}.json", r.model, gamma=r.gamma, problem=r.problem, seed=r.seed)
    n, m = r.population.X.shape[1], r.population.F.shape[1]
    header = population_header(n, m)
    sets = [
        ("population", r.population.X, r.population.F, r.population.prefs.members),
        ("predictions", r.prediction_X, r.prediction_F, r.population.prefs.members),
    ]
    if r.baseline is not None:
        sets.append(("baseline", r.baseline.X, r.baseline.F, r.baseline.prefs.members))
    for source, X, F, L in sets:
        meta = {
            "problem": r.problem,
            "n": n,
            "source": source,
            "gamma": r.gamma,
            "seed": r.seed,
            "lambda0": ";".join(repr(float(v)) for v in r.model.anchor),
        }
        write_table(out / "populations" / f"{tag}_{source}.csv", POPULATION_SCHEMA, header, np.hstack([X, F, L]).tolist(), meta)
    names, rows = _history_rows(r.history)
    write_table(out / "history" / f"{tag}_lla.csv", HISTORY_SCHEMA, names, rows, {"problem": r.problem, "gamma": r.gamma, "seed": r.seed})
    if r.baseline_history is not None:
        names, rows = _history_rows(r.baseline_history)
        write_table(out / "history" / f"{tag}_baseline.csv", HISTORY_SCHEMA, names, rows, {"problem": r.problem, "gamma": r.gamma, "seed": r.seed})


def write_reports(path, reports) -> Path:
    header, rows = _reports_table(reports)
    return write_table(path, REPORT_SCHEMA, header, rows)


def _mean_std(values) -> tuple[float, float]:
    a = np.asarray(values, dtype=float)
    return float(np.mean(a)), float(np.std(a))


# ---------------------------------------------------------------------------
# commands


def cmd_run(cfg: ExperimentConfig) -> Path:
    """LLA (plus baseline when ``cfg.baseline``) for every gamma and replicate."""
    out = _prepare(cfg.out_dir())
    jobs = [(cfg.problem, g, s, cfg.baseline, supports_optimum(make_problem(cfg.problem, cfg.n))) for g in cfg.gamma for s in cfg.seeds()]
    results = run_many(cfg, jobs)
    for r in results:
        write_replicate(out, r)
    write_reports(out / "reports.csv", [rep for r in results for rep in r.reports])
    evals = {}
    for r in results:
        evals[_tag(r.problem, r.gamma, r.seed)] = {
            "lla": r.population.eval_count,
            "baseline": None if r.baseline is None else r.baseline.eval_count,
        }
    _write_meta(out, "run", cfg, {"eval_counts": evals})
    return out


def cmd_sweep(cfg: ExperimentConfig) -> Path:
    """R-metric means/stds of population and predictions across ``cfg.gamma``."""
    if len(cfg.gamma) < 2:
        raise ConfigurationError(
            "a sweep needs at least two gamma values, e.g. gamma = 1e-4, 1e-3, 5e-2, 1, 5", key="gamma"
        )
    out = _prepare(cfg.out_dir())
    jobs = [(cfg.problem, g, s, False) for g in cfg.gamma for s in cfg.seeds()]
    results = run_many(cfg, jobs)
    for r in results:
        write_replicate(out, r)
    reports = [rep for r in results for rep in r.reports]
    write_reports(out / "reports.csv", reports)
    rows = []
    var_rows = []
    for g in cfg.gamma:
        for source in ("population", "predictions"):
            sel = [r for r in reports if r.gamma == float(g) and r.source == source]
            ig = _mean_std([r.r_igd for r in sel])
            hv = _mean_std([r.r_hv for r in sel])
            rows.append([float(g), source, ig[0], ig[1], hv[0], hv[1], len(sel)])
            if source == "predictions":
                var_rows.append([float(g)] + np.mean([r.variable_variances for r in sel], axis=0).tolist())
    write_table(
        out / "sweep.csv",
        SWEEP_SCHEMA,
        ["gamma", "source", "r_igd_mean", "r_igd_std", "r_hv_mean", "r_hv_std", "replicates"],
        rows,
        {"problem": canonical_name(cfg.problem)},
    )
    n = len(var_rows[0]) - 1
    write_table(
        out / "variances.csv",
        VARIANCE_SCHEMA,
        ["gamma"] + [f"var_{j + 1}" for j in range(n)],
        var_rows,
        {"problem": canonical_name(cfg.problem), "source": "predictions"},
    )
    _write_meta(out, "sweep", cfg)
    return out


TABLE1_COLUMNS = (
    "baseline_r_igd",
    "baseline_r_hv",
    "population_r_igd",
    "population_r_hv",
    "predictions_r_igd",
    "predictions_r_hv",
)


def table1_markdown(rows: list[list], ref_points: dict) -> str:
    """Markdown rendering; the best R-IGD (lowest) and R-HV (highest) per row are bold."""
    lines = [
        "| Problem | MOEA/D-DE R-IGD | MOEA/D-DE R-HV | LLA Pop R-IGD | LLA Pop R-HV | LLA Pred R-IGD | LLA Pred R-HV |",
        "|---|---|---|---|---|---|---|",
    ]
    for row in rows:
        name, vals = row[0], np.asarray(row[1:], dtype=float)
        igd, hv = vals[0::2], vals[1::2]
        best_igd = np.nanmin(igd) if np.any(np.isfinite(igd)) else np.nan
        best_hv = np.nanmax(hv) if np.any(np.isfinite(hv)) else np.nan
        cells = []
        for k, v in enumerate(vals):
            best = best_igd if k % 2 == 0 else best_hv
            text = f"{v:.2e}"
            cells.append(f"**{text}**" if v == best else text)
        lines.append(f"| {name} | " + " | ".join(cells) + " |")
    lines.append("")
    lines.append("R-HV reference points:")
    lines.append("")
    for name, ref in ref_points.items():
        lines.append(f"- {name}: ({', '.join(repr(float(v)) for v in ref)})")
    return "\n".join(lines) + "\n"


def cmd_table1(cfg: ExperimentConfig) -> Path:
    """Mean R-IGD/R-HV of baseline, LLA population and LLA predictions per problem."""
    out = _prepare(cfg.out_dir())
    gamma = cfg.gamma[0]
    jobs = [(p, gamma, s, True) for p in cfg.problems for s in cfg.seeds()]
    results = run_many(cfg, jobs)
    reports = [rep for r in results for rep in r.reports]
    write_reports(out / "reports.csv", reports)
    rows, refs = [], {}
    for p in cfg.problems:
        name = canonical_name(p)
        problem = make_problem(name)
        refs[name] = _setup(problem, default_anchor(problem.m), cfg).ref_point
        row = [name]
        for source in SOURCES:
            sel = [r for r in reports if r.problem == name and r.source == source]
            row += [_mean_std([r.r_igd for r in sel])[0], _mean_std([r.r_hv for r in sel])[0]]
        rows.append(row)
    header = ["problem", *TABLE1_COLUMNS] + ["ref_1", "ref_2", "ref_3"]
    csv_rows = [row + list(refs[row[0]]) + [""] * (3 - refs[row[0]].size) for row in rows]
    write_table(out / "table1.csv", TABLE1_SCHEMA, header, csv_rows, {"gamma": float(gamma), "replicates": cfg.replicates})
    (out / "table1.md").write_text(table1_markdown(rows, refs))
    _write_meta(out, "table1", cfg)
    return out


def cmd_error_curve(cfg: ExperimentConfig) -> Path:
    """Per-generation mean MSE to the true optima for predictions and baseline.

    ``mse_baseline`` is the baseline at the same generation index;
    ``mse_baseline_budget`` is the baseline after the same number of
    evaluations (generation ``2g`` of the compensated run).
    """
    problem = make_problem(cfg.problem, cfg.n)
    if not supports_optimum(problem):
        raise UnsupportedProblemError(f"{problem.name} has no analytic Chebyshev optimum; error curves need one")
    out = _prepare(cfg.out_dir())
    gamma = cfg.gamma[0]
    results = run_many(cfg, [(cfg.problem, gamma, s, True, True) for s in cfg.seeds()])
    G = cfg.generations
    pred = np.mean([r.history.mse_pred for r in results], axis=0)
    pop = np.mean([r.history.mse_pop for r in results], axis=0)
    base_all = np.mean([r.baseline_history.mse_pop for r in results], axis=0)
    base_same = base_all[:G]
    base_budget = base_all[1::2][:G]
    rows = [[g + 1, pred[g], pop[g], base_same[g], base_budget[g]] for g in range(G)]
    write_table(
        out / "error_curve.csv",
        CURVE_SCHEMA,
        ["generation", "mse_pred", "mse_pop", "mse_baseline", "mse_baseline_budget"],
        rows,
        {"problem": problem.name, "gamma": float(gamma), "replicates": cfg.replicates},
    )
    _write_meta(out, "error-curve", cfg)
    return out


def cmd_metrics(run_dir, out_path=None, delta_reading: str = "std", sigma2: float = 0.02) -> Path:
    """Recompute report rows from the population files of a finished run.

    Prediction sets are matched with their model file so VSD and the
    model MSE are available.
    """
    run_dir = Path(run_dir)
    files = sorted((run_dir / "populations").glob("*.csv"))
    if not files:
        raise OSError(f"no population files under {run_dir / 'populations'}")
    cfg = ExperimentConfig(sigma2=sigma2, delta_reading=delta_reading)
    reports = []
    setups = {}
    for path in files:
        t = read_table(path)
        if t.schema != POPULATION_SCHEMA:
            raise ValueError(f"{path}: unexpected schema {t.schema}")
        name, n, source = t.meta["problem"], int(t.meta["n"]), t.meta["source"]
        gamma, seed = float(t.meta["gamma"]), int(t.meta["seed"])
        problem = make_problem(name, n)
        m = problem.m
        data = t.array(t.header)
        X, F, L = data[:, :n], data[:, n : n + m], data[:, n + m :]
        anchor = as_preference([float(v) for v in str(t.meta["lambda0"]).split(";")])
        model = None
        if source == "predictions":
            model, _ = load_model(run_dir / "models" / f"{_tag(name, gamma, seed)}.json")
        key = (name, n, tuple(anchor))
        if key not in setups:
            setups[key] = _setup(problem, anchor, cfg)
        reports.append(report_for(problem, setups[key], source, gamma, seed, X, F, L, model=model))
    order = {s: k for k, s in enumerate(SOURCES)}
    reports.sort(key=lambda r: (r.problem, r.gamma, r.seed, order.get(r.source, 99)))
    target = Path(out_path) if out_path else run_dir / "metrics.csv"
    return write_reports(target, reports)
