"""Batch command-line front end.

Every subcommand reads a flat ``key = value`` configuration file (strict
schema, unknown keys rejected), takes ``--seed/--out/--threads`` flags, and
writes plot-ready CSV. Runs are deterministic under a fixed seed: equal
invocations produce byte-identical output files.

Exit codes: 0 on success, 2 for configuration/validation errors, 1 for
runtime errors.
"""

import os
import sys

import click
import numpy as np

from . import __version__
from .anomaly import AngularGrid, MvSetModel, anomaly_score, default_mass_tolerance, fit_angular_mvset
from .bounds import MC_STATEMENTS, b_term, k_tilde, mc_validate, residual_bound, vc_tail_bound, xlasso_prediction_bound
from .classification import AngularLogisticLasso, save_classifier
from .crossval import ConstrainedLogisticRule, OlsAngleRule, XLassoRule, grid_select, make_folds
from .data import ingest_csv, write_csv, write_dataset_csv
from .geometry import polar
from .experiments import (
    PortfolioExperimentConfig,
    SimulatedExperimentConfig,
    run_portfolio_experiment,
    run_simulated_xlasso_experiment,
)
from .regression import fit_xlasso, lambda_max, save_linear_model
from .simulate import AdditiveModelSpec, gen_additive_regression, gen_classification_rv, mv_logistic, substream
from .tail import select_extremes
from .transforms import EmpiricalParetoTransform


class ConfigError(Exception):
    """Configuration or input-validation problem (exit code 2)."""


# ---------------------------------------------------------------------------
# configuration files: flat "key = value" lines, strict schema

_REQUIRED = object()


class Opt:
    def __init__(self, typ, default=_REQUIRED, choices=None):
        self.typ = typ
        self.default = default
        self.choices = choices


def _parse_config_file(path):
    if path is None:
        return {}
    if not os.path.exists(path):
        raise ConfigError(f"config file not found: {path}")
    raw = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            stripped = line.strip()
            if not stripped or stripped.startswith("#"):
                continue
            if "=" not in stripped:
                raise ConfigError(f"config line {lineno}: expected 'key = value'")
            key, _, value = stripped.partition("=")
            key = key.strip()
            if key in raw:
                raise ConfigError(f"config line {lineno}: duplicate key '{key}'")
            raw[key] = value.strip()
    return raw


def _coerce(key, value, opt):
    try:
        if opt.typ == "int":
            out = int(value)
        elif opt.typ == "float":
            out = float(value)
        elif opt.typ == "bool":
            if value not in ("true", "false"):
                raise ValueError
            out = value == "true"
        elif opt.typ == "floats":
            out = tuple(float(tok) for tok in value.split(",") if tok.strip())
            if not out:
                raise ValueError
        elif opt.typ == "strs":
            out = tuple(tok.strip() for tok in value.split(",") if tok.strip())
        else:
            out = value
    except ValueError:
        raise ConfigError(f"config key '{key}': cannot parse {value!r} as {opt.typ}") from None
    if opt.choices is not None:
        items = out if isinstance(out, tuple) else (out,)
        for item in items:
            if item not in opt.choices:
                raise ConfigError(
                    f"config key '{key}': {item!r} is not one of {sorted(opt.choices)}"
                )
    return out


def _apply_schema(raw, schema):
    unknown = sorted(set(raw) - set(schema))
    if unknown:
        raise ConfigError(f"unknown config key(s): {', '.join(unknown)}")
    cfg = {}
    for key, opt in schema.items():
        if key in raw:
            cfg[key] = _coerce(key, raw[key], opt)
        elif opt.default is _REQUIRED:
            raise ConfigError(f"missing required config key '{key}'")
        else:
            cfg[key] = opt.default
    return cfg


def _load_config(path, schema):
    return _apply_schema(_parse_config_file(path), schema)


def _ingest(path, target=None, label=None):
    try:
        return ingest_csv(path, target=target, label=label)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def _norm_p(value):
    if isinstance(value, str):
        if value == "inf":
            return np.inf
        try:
            value = float(value)
        except ValueError:
            raise ConfigError(f"norm_p must be a number or 'inf', got {value!r}") from None
    value = float(value)
    if value < 1.0:
        raise ConfigError(f"norm_p must be >= 1, got {value}")
    return value


def _check(cond, msg):
    if not cond:
        raise ConfigError(msg)


# ---------------------------------------------------------------------------
# command plumbing

def common_options(fn):
    fn = click.option("--threads", type=int, default=1, show_default=True,
                      help="Worker threads for replication/grid parallelism.")(fn)
    fn = click.option("--out", "out_path", required=True, type=click.Path(),
                      help="Output file path.")(fn)
    fn = click.option("--seed", type=int, default=0, show_default=True,
                      help="Random seed; equal seeds give byte-identical output.")(fn)
    fn = click.option("--config", "config_path", type=click.Path(), default=None,
                      help="Flat key = value configuration file.")(fn)
    return fn


@click.group()
@click.version_option(version=__version__)
def cli():
    """Learning on multivariate extremes: standardization, angular measures,
    minimum-volume-set anomaly scores, tail regression/classification,
    cross-validation, generators and finite-sample bound reports."""


# ---------------------------------------------------------------------------
# subcommands

@cli.command()
@common_options
def standardize(config_path, seed, out_path, threads):
    """Rank-transform features to unit-Pareto scale."""
    schema = {
        "input": Opt("str"),
        "target": Opt("str", default=None),
        "label": Opt("str", default=None),
    }
    cfg = _load_config(config_path, schema)
    ds = _ingest(cfg["input"], target=cfg["target"], label=cfg["label"])
    V = EmpiricalParetoTransform().fit(ds.X).transform(ds.X)
    header = list(ds.columns)
    rows = [list(row) for row in V]
    if ds.y is not None:
        header.append(ds.target_column)
        for row, value in zip(rows, ds.y):
            row.append(value)
    if ds.labels is not None:
        header.append(ds.label_column)
        for row, value in zip(rows, ds.labels):
            row.append(int(value))
    write_csv(out_path, header, rows)


@cli.command("angular-measure")
@common_options
def angular_measure_cmd(config_path, seed, out_path, threads):
    """Empirical angular measure of every cell of a sphere grid."""
    schema = {
        "input": Opt("str"),
        "k": Opt("int"),
        "m": Opt("int", default=4),
        "target": Opt("str", default=None),
        "label": Opt("str", default=None),
    }
    cfg = _load_config(config_path, schema)
    ds = _ingest(cfg["input"], target=cfg["target"], label=cfg["label"])
    _check(1 <= cfg["k"] <= ds.n, f"k must lie in [1, {ds.n}], got {cfg['k']}")
    grid = AngularGrid(ds.d, cfg["m"])
    n, k = ds.n, cfg["k"]
    V = EmpiricalParetoTransform().fit(ds.X).transform(ds.X)
    radii, angles = polar(V, np.inf)
    above = radii >= n / k
    masses = np.zeros(grid.n_cells)
    if np.any(above):
        counts = np.bincount(grid.locate(angles[above]), minlength=grid.n_cells)
        masses = counts / k
    rows = [(c, c // grid.cells_per_face, float(masses[c])) for c in range(grid.n_cells)]
    write_csv(out_path, ["cell", "face", "mass"], rows)


@cli.command("mvset-fit")
@common_options
def mvset_fit_cmd(config_path, seed, out_path, threads):
    """Fit an angular minimum-volume set and save the model file."""
    schema = {
        "input": Opt("str"),
        "k": Opt("int"),
        "alpha": Opt("float", default=0.9),
        "psi": Opt("float", default=None),
        "delta": Opt("float", default=0.1),
        "m": Opt("int", default=4),
        "standardization": Opt("str", default="rank", choices=("rank", "none")),
    }
    cfg = _load_config(config_path, schema)
    ds = _ingest(cfg["input"])
    _check(1 <= cfg["k"] <= ds.n, f"k must lie in [1, {ds.n}], got {cfg['k']}")
    _check(0.0 < cfg["alpha"] <= 1.0, "alpha must lie in (0, 1]")
    psi = cfg["psi"] if cfg["psi"] is not None else default_mass_tolerance(cfg["delta"], cfg["k"])
    _check(psi >= 0.0, "psi must be >= 0")
    _check(cfg["alpha"] - psi > 0.0, "alpha - psi must be positive")
    grid = AngularGrid(ds.d, cfg["m"])
    model = fit_angular_mvset(ds.X, cfg["k"], cfg["alpha"], psi, grid,
                              standardization=cfg["standardization"])
    model.save(out_path)


@cli.command()
@common_options
def score(config_path, seed, out_path, threads):
    """Anomaly scores of new points under a fitted minimum-volume-set model."""
    schema = {
        "model": Opt("str"),
        "train": Opt("str"),
        "input": Opt("str"),
        "angular_score": Opt("str", default="mass", choices=("mass", "mv-level")),
    }
    cfg = _load_config(config_path, schema)
    _check(os.path.exists(cfg["model"]), f"model file not found: {cfg['model']}")
    try:
        model = MvSetModel.load(cfg["model"])
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    train = _ingest(cfg["train"])
    ds = _ingest(cfg["input"])
    _check(ds.d == model.grid.d, f"input has {ds.d} columns, model expects {model.grid.d}")
    _check(train.d == model.grid.d, f"train has {train.d} columns, model expects {model.grid.d}")
    margins = None
    if model.standardization == "rank":
        margins = EmpiricalParetoTransform().fit(train.X)
    scores = anomaly_score(model, margins, ds.X, angular_score=cfg["angular_score"])
    write_csv(out_path, ["row", "score"], [(i, float(s)) for i, s in enumerate(scores)])


@cli.command("fit-xlasso")
@common_options
def fit_xlasso_cmd(config_path, seed, out_path, threads):
    """Fit the penalized angular regression; lam fixed or selected by tail CV."""
    schema = {
        "input": Opt("str"),
        "target": Opt("str"),
        "k": Opt("int"),
        "lam": Opt("float", default=None),
        "norm_p": Opt("str", default="2"),
        "standardization": Opt("str", default="none", choices=("none", "rank")),
        "cv_folds": Opt("int", default=5),
        "lambda_grid_size": Opt("int", default=50),
        "lambda_min_ratio": Opt("float", default=1e-3),
    }
    cfg = _load_config(config_path, schema)
    ds = _ingest(cfg["input"], target=cfg["target"])
    _check(1 <= cfg["k"] <= ds.n, f"k must lie in [1, {ds.n}], got {cfg['k']}")
    norm_p = _norm_p(cfg["norm_p"])
    sample = select_extremes(ds.X, cfg["k"], p=norm_p,
                             standardization=cfg["standardization"], y=ds.y)
    lam = cfg["lam"]
    if lam is None:
        lam_max = lambda_max(sample)
        grid = (np.geomspace(lam_max, lam_max * cfg["lambda_min_ratio"], cfg["lambda_grid_size"])
                if lam_max > 0 else np.array([0.0]))
        plan = make_folds(ds.n, "kfold", cfg["cv_folds"], seed=seed)
        sel = grid_select(XLassoRule(), ds.X, ds.y, plan, cfg["k"] / ds.n, grid,
                          norm_p=norm_p, standardization=cfg["standardization"])
        lam = sel.best
    _check(lam >= 0.0, "lam must be >= 0")
    model = fit_xlasso(sample, lam)
    save_linear_model(model, out_path)


@cli.command("fit-classifier")
@common_options
def fit_classifier_cmd(config_path, seed, out_path, threads):
    """Fit the angular logistic classifier (penalized or l1-constrained)."""
    schema = {
        "input": Opt("str"),
        "label": Opt("str"),
        "k": Opt("int"),
        "mode": Opt("str", default="lagrangian", choices=("lagrangian", "constrained")),
        "lam": Opt("float", default=0.0),
        "u": Opt("float", default=1.0),
        "norm_p": Opt("str", default="2"),
        "standardization": Opt("str", default="none", choices=("none", "rank")),
        "tau": Opt("float", default=0.0),
    }
    cfg = _load_config(config_path, schema)
    ds = _ingest(cfg["input"], label=cfg["label"])
    _check(1 <= cfg["k"] <= ds.n, f"k must lie in [1, {ds.n}], got {cfg['k']}")
    _check(0.0 <= cfg["tau"] < 1.0, "tau must lie in [0, 1)")
    model = AngularLogisticLasso(
        mode=cfg["mode"], lam=cfg["lam"], u=cfg["u"], k=cfg["k"],
        norm_p=_norm_p(cfg["norm_p"]),
        standardization=cfg["standardization"], tau=cfg["tau"],
    )
    model.fit(ds.X, ds.labels)
    save_classifier(model, out_path)


@cli.command()
@common_options
def cv(config_path, seed, out_path, threads):
    """Cross-validated tail risk over a hyperparameter grid."""
    schema = {
        "input": Opt("str"),
        "rule": Opt("str", choices=("xlasso", "ols", "logistic")),
        "target": Opt("str", default=None),
        "label": Opt("str", default=None),
        "p": Opt("float"),
        "grid": Opt("floats", default=(0.0,)),
        "scheme": Opt("str", default="kfold", choices=("kfold", "loo")),
        "folds": Opt("int", default=5),
        "norm_p": Opt("str", default="2"),
        "standardization": Opt("str", default="none", choices=("none", "rank")),
        "tau": Opt("float", default=0.0),
    }
    cfg = _load_config(config_path, schema)
    _check(0.0 < cfg["p"] <= 1.0, "tail fraction p must lie in (0, 1]")
    if cfg["rule"] in ("xlasso", "ols"):
        _check(cfg["target"] is not None, f"rule '{cfg['rule']}' requires a target column")
        ds = _ingest(cfg["input"], target=cfg["target"])
        y = ds.y
        rule = XLassoRule() if cfg["rule"] == "xlasso" else OlsAngleRule()
    else:
        _check(cfg["label"] is not None, "rule 'logistic' requires a label column")
        ds = _ingest(cfg["input"], label=cfg["label"])
        y = ds.labels
        rule = ConstrainedLogisticRule()
    plan = make_folds(ds.n, cfg["scheme"], cfg["folds"], seed=seed)
    result = grid_select(rule, ds.X, y, plan, cfg["p"], cfg["grid"],
                         norm_p=_norm_p(cfg["norm_p"]),
                         standardization=cfg["standardization"], tau=cfg["tau"])
    header = ["hyper", "rcv"] + [f"fold_{j}" for j in range(plan.n_folds)]
    write_csv(out_path, header, result.as_rows())


@cli.command("simulate")
@common_options
def simulate_cmd(config_path, seed, out_path, threads):
    """Generate a dataset: logistic covariates, additive-model regression or
    hidden-component classification."""
    schema = {
        "generator": Opt("str", choices=("logistic", "additive", "classification")),
        "n": Opt("int"),
        "d": Opt("int"),
        "a": Opt("float", default=0.5),
        "beta0_ones": Opt("int", default=5),
        "beta1_value": Opt("float", default=1.0),
        "noise_lo": Opt("float", default=-2.0),
        "noise_hi": Opt("float", default=2.0),
        "norm_p": Opt("float", default=2.0),
    }
    cfg = _load_config(config_path, schema)
    _check(cfg["n"] >= 1 and cfg["d"] >= 1, "need n >= 1 and d >= 1")
    _check(0.0 < cfg["a"] <= 1.0, "dependence a must lie in (0, 1]")
    rng = substream(seed, 0)
    if cfg["generator"] == "logistic":
        X = mv_logistic(cfg["n"], cfg["d"], cfg["a"], rng)
        write_dataset_csv(out_path, X)
    elif cfg["generator"] == "additive":
        _check(cfg["beta0_ones"] <= cfg["d"], "beta0_ones cannot exceed d")
        beta0 = np.zeros(cfg["d"])
        beta0[: cfg["beta0_ones"]] = 1.0
        spec = AdditiveModelSpec(
            d=cfg["d"], a=cfg["a"], beta0=beta0,
            beta1=np.full(cfg["d"], cfg["beta1_value"]),
            noise_lo=cfg["noise_lo"], noise_hi=cfg["noise_hi"],
        )
        X, y = gen_additive_regression(cfg["n"], spec, rng)
        write_dataset_csv(out_path, X, y)
    else:
        X, labels = gen_classification_rv(cfg["n"], cfg["d"], cfg["a"], cfg["norm_p"], rng)
        write_dataset_csv(out_path, X, labels)


_BOUND_NAMES = ("vc_tail_bound", "b_term", "k_tilde", "residual_bound",
                "xlasso_prediction_bound")


@cli.command("bounds")
@common_options
def bounds_cmd(config_path, seed, out_path, threads):
    """Evaluate explicit finite-sample bounds and/or run coverage validators."""
    schema = {
        "evaluate": Opt("strs", default=(), choices=_BOUND_NAMES),
        "validate": Opt("strs", default=(), choices=MC_STATEMENTS),
        "n": Opt("int", default=5000),
        "k": Opt("int", default=50),
        "d": Opt("int", default=1),
        "p": Opt("float", default=0.1),
        "delta": Opt("float", default=0.1),
        "vc_dim": Opt("int", default=1),
        "m_eps": Opt("float", default=1.0),
        "beta_star_l1": Opt("float", default=1.0),
        "c_factor": Opt("float", default=1.0),
        "b_bar": Opt("float", default=0.0),
        "reps": Opt("int", default=1000),
        "gen_d": Opt("int", default=20),
        "gen_a": Opt("float", default=0.5),
        "beta0_ones": Opt("int", default=5),
        "beta1_value": Opt("float", default=1.0),
        "ref_sample_size": Opt("int", default=400000),
    }
    cfg = _load_config(config_path, schema)
    _check(cfg["evaluate"] or cfg["validate"], "nothing requested: set 'evaluate' and/or 'validate'")
    _check(0.0 < cfg["delta"] < 1.0, "delta must lie in (0, 1)")
    rows = []
    for name in cfg["evaluate"]:
        if name == "vc_tail_bound":
            value = vc_tail_bound(cfg["n"], cfg["p"], cfg["vc_dim"], cfg["delta"])
        elif name == "b_term":
            value = b_term(cfg["k"], cfg["d"], cfg["delta"], cfg["m_eps"])
        elif name == "k_tilde":
            value = k_tilde(cfg["k"], cfg["delta"])
        elif name == "residual_bound":
            value = residual_bound(cfg["k"], cfg["d"], cfg["delta"], cfg["m_eps"], cfg["b_bar"])
        else:
            value = xlasso_prediction_bound(cfg["k"], cfg["d"], cfg["delta"], cfg["m_eps"],
                                            cfg["beta_star_l1"], cfg["c_factor"])
        rows.append((name, float(value), cfg["k"], cfg["n"], cfg["d"], cfg["delta"], "", "", ""))
    if cfg["validate"]:
        _check(cfg["beta0_ones"] <= cfg["gen_d"], "beta0_ones cannot exceed gen_d")
        beta0 = np.zeros(cfg["gen_d"])
        beta0[: cfg["beta0_ones"]] = 1.0
        model = AdditiveModelSpec(d=cfg["gen_d"], a=cfg["gen_a"], beta0=beta0,
                                  beta1=np.full(cfg["gen_d"], cfg["beta1_value"]))
        for statement in cfg["validate"]:
            report = mc_validate(statement, cfg["reps"], seed, n=cfg["n"], k=cfg["k"],
                                 delta=cfg["delta"],
                                 model=None if statement == "quantile-lemma" else model,
                                 ref_sample_size=cfg["ref_sample_size"])
            rows.append((statement, "", cfg["k"], cfg["n"],
                         cfg["gen_d"] if statement != "quantile-lemma" else "",
                         cfg["delta"], float(report.coverage), float(report.target),
                         "true" if report.passed else "false"))
    write_csv(out_path, ["request", "value", "k", "n", "d", "delta", "coverage", "target", "passed"], rows)


def _derived_path(out_path, tag):
    stem, ext = os.path.splitext(out_path)
    return f"{stem}.{tag}{ext or '.csv'}"


@cli.command("experiment-sim")
@common_options
def experiment_sim_cmd(config_path, seed, out_path, threads):
    """Simulated benchmark: tail-test MSE of cv-XLasso vs angular OLS per tau."""
    schema = {
        "n": Opt("int", default=10000),
        "d": Opt("int", default=100),
        "a": Opt("float", default=0.5),
        "beta0_ones": Opt("int", default=5),
        "beta1_value": Opt("float", default=1.0),
        "noise_lo": Opt("float", default=-2.0),
        "noise_hi": Opt("float", default=2.0),
        "taus": Opt("floats", default=(0.011, 0.02, 0.035, 0.05)),
        "reps": Opt("int", default=20),
        "n_test": Opt("int", default=1000000),
        "tau_test": Opt("float", default=0.01),
        "lambda_grid_size": Opt("int", default=50),
        "lambda_min_ratio": Opt("float", default=1e-3),
        "cv_folds": Opt("int", default=5),
    }
    cfg = _load_config(config_path, schema)
    _check(cfg["beta0_ones"] <= cfg["d"], "beta0_ones cannot exceed d")
    _check(all(0.0 < t <= 1.0 for t in cfg["taus"]), "taus must lie in (0, 1]")
    _check(all(int(np.floor(t * cfg["n"])) >= 1 for t in cfg["taus"]),
           "every tau must keep at least one training extreme")
    config = SimulatedExperimentConfig(
        n=cfg["n"], d=cfg["d"], a=cfg["a"], beta0_ones=cfg["beta0_ones"],
        beta1_value=cfg["beta1_value"], noise_lo=cfg["noise_lo"], noise_hi=cfg["noise_hi"],
        taus=cfg["taus"], n_reps=cfg["reps"], n_test=cfg["n_test"], tau_test=cfg["tau_test"],
        lambda_grid_size=cfg["lambda_grid_size"], lambda_min_ratio=cfg["lambda_min_ratio"],
        cv_folds=cfg["cv_folds"],
    )
    rows, summary = run_simulated_xlasso_experiment(config, seed, threads=threads)
    write_csv(out_path, ["tau", "method", "rep", "mse"], rows)
    write_csv(_derived_path(out_path, "summary"),
              ["tau", "method", "mean_mse", "q10", "q90"], summary)


@cli.command("experiment-portfolio")
@common_options
def experiment_portfolio_cmd(config_path, seed, out_path, threads):
    """Portfolio benchmark: rescaled-target tail regression on a returns panel."""
    schema = {
        "input": Opt("str"),
        "target_column": Opt("str", default="Trans"),
        "required_columns": Opt("int", default=49),
        "taus": Opt("floats", default=(0.05, 0.1, 0.2, 0.3, 0.4, 0.5)),
        "reps": Opt("int", default=50),
        "train_fraction": Opt("float", default=0.2),
        "tau_test": Opt("float", default=0.005),
        "lambda_grid_size": Opt("int", default=50),
        "lambda_min_ratio": Opt("float", default=1e-3),
        "cv_folds": Opt("int", default=5),
    }
    cfg = _load_config(config_path, schema)
    ds = _ingest(cfg["input"])
    total_columns = ds.d
    _check(total_columns == cfg["required_columns"],
           f"expected {cfg['required_columns']} columns, file has {total_columns}")
    _check(cfg["target_column"] in ds.columns,
           f"missing declared column '{cfg['target_column']}'")
    j = ds.columns.index(cfg["target_column"])
    z = ds.X[:, j]
    X = np.delete(ds.X, j, axis=1)
    _check(0.0 < cfg["train_fraction"] < 1.0, "train_fraction must lie in (0, 1)")
    config = PortfolioExperimentConfig(
        taus=cfg["taus"], n_reps=cfg["reps"], train_fraction=cfg["train_fraction"],
        tau_test=cfg["tau_test"], lambda_grid_size=cfg["lambda_grid_size"],
        lambda_min_ratio=cfg["lambda_min_ratio"], cv_folds=cfg["cv_folds"],
    )
    rows, summary, support = run_portfolio_experiment(X, z, config, seed, threads=threads)
    write_csv(out_path, ["tau", "method", "rep", "mse"], rows)
    write_csv(_derived_path(out_path, "summary"),
              ["tau", "method", "mean_mse", "q10", "q90"], summary)
    write_csv(_derived_path(out_path, "support"), ["k", "y_min", "y_max"], support)


def main(argv=None):
    """Console entry point with the documented exit-code contract."""
    try:
        cli.main(args=argv, standalone_mode=False)
        return 0
    except click.UsageError as exc:
        click.echo(f"error: {exc.format_message()}", err=True)
        sys.exit(2)
    except click.ClickException as exc:
        click.echo(f"error: {exc.format_message()}", err=True)
        sys.exit(1)
    except click.exceptions.Exit as exc:  # --help / --version
        sys.exit(exc.exit_code)
    except ConfigError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(2)
    except Exception as exc:  # runtime failure
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)


if __name__ == "__main__":
    main()
