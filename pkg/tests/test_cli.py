import os

import numpy as np
import pytest

from tailml.anomaly import MvSetModel
from tailml.cli import main
from tailml.data import ingest_csv, write_dataset_csv
from tailml.regression import load_linear_model
from tailml.simulate import mv_logistic, substream
from tailml.transforms import EmpiricalParetoTransform


def run_cli(args):
    try:
        return main(list(args))
    except SystemExit as exc:
        return exc.code


def config_file(tmp_path, name, **keys):
    path = tmp_path / name
    path.write_text("".join(f"{k} = {v}\n" for k, v in keys.items()), encoding="utf-8")
    return str(path)


@pytest.fixture
def workdir(tmp_path):
    X = mv_logistic(300, 3, 0.5, substream(100, 0))
    y = substream(100, 1).standard_normal(300)
    data = str(tmp_path / "data.csv")
    write_dataset_csv(data, X, y)
    feats = str(tmp_path / "feats.csv")
    write_dataset_csv(feats, X)
    return tmp_path, data, feats


class TestExitCodes:
    def test_unknown_config_key_exits_2(self, workdir):
        tmp, data, _ = workdir
        cfg = config_file(tmp, "c.cfg", input=data, bogus=1)
        assert run_cli(["standardize", "--config", cfg, "--out", str(tmp / "o.csv")]) == 2

    def test_missing_required_key_exits_2(self, workdir):
        tmp, _, _ = workdir
        cfg = config_file(tmp, "c.cfg")
        assert run_cli(["standardize", "--config", cfg, "--out", str(tmp / "o.csv")]) == 2

    def test_malformed_input_exits_2(self, workdir):
        tmp, _, _ = workdir
        bad = tmp / "bad.csv"
        bad.write_text("a,b\n1,2\n3\n")
        cfg = config_file(tmp, "c.cfg", input=str(bad))
        assert run_cli(["standardize", "--config", cfg, "--out", str(tmp / "o.csv")]) == 2

    def test_bad_delta_rejected_before_compute(self, workdir):
        tmp, _, _ = workdir
        cfg = config_file(tmp, "b.cfg", evaluate="b_term", delta="1.5")
        out = str(tmp / "b.csv")
        assert run_cli(["bounds", "--config", cfg, "--out", out]) == 2
        assert not os.path.exists(out)

    def test_unknown_subcommand_exits_2(self):
        assert run_cli(["frobnicate"]) == 2

    def test_success_exit_0(self, workdir):
        tmp, data, _ = workdir
        cfg = config_file(tmp, "c.cfg", input=data, target="y")
        assert run_cli(["standardize", "--config", cfg, "--out", str(tmp / "o.csv")]) == 0

    def test_runtime_error_exits_1(self, workdir):
        # p passes validation but leaves the CV folds without extremes,
        # which surfaces as a runtime failure
        tmp, data, _ = workdir
        cfg = config_file(
            tmp, "c.cfg", input=data, rule="ols", target="y", p=0.001, folds=3
        )
        assert run_cli(["cv", "--config", cfg, "--out", str(tmp / "o.csv")]) == 1


class TestStandardize:
    def test_matches_library_transform(self, workdir):
        tmp, data, _ = workdir
        cfg = config_file(tmp, "c.cfg", input=data, target="y")
        out = str(tmp / "std.csv")
        assert run_cli(["standardize", "--config", cfg, "--out", out]) == 0
        ds_in = ingest_csv(data, target="y")
        ds_out = ingest_csv(out, target="y")
        expected = EmpiricalParetoTransform().fit(ds_in.X).transform(ds_in.X)
        assert np.array_equal(ds_out.X, expected)
        assert np.array_equal(ds_out.y, ds_in.y)


class TestAngularMeasure:
    def test_masses_table(self, workdir):
        tmp, _, feats = workdir
        cfg = config_file(tmp, "c.cfg", input=feats, k=50, m=2)
        out = str(tmp / "am.csv")
        assert run_cli(["angular-measure", "--config", cfg, "--out", out]) == 0
        rows = open(out).read().splitlines()
        assert rows[0] == "cell,face,mass"
        assert len(rows) == 1 + 3 * 4  # d * m**(d-1) cells


class TestMvsetAndScore:
    def test_fit_then_score(self, workdir):
        tmp, _, feats = workdir
        model_path = str(tmp / "m.mvset")
        cfg = config_file(tmp, "c.cfg", input=feats, k=60, alpha=0.9, m=2)
        assert run_cli(["mvset-fit", "--config", cfg, "--out", model_path]) == 0
        model = MvSetModel.load(model_path)
        assert model.achieved_mass >= 0.9 - model.psi - 1e-12
        score_cfg = config_file(tmp, "s.cfg", model=model_path, train=feats, input=feats)
        out = str(tmp / "scores.csv")
        assert run_cli(["score", "--config", score_cfg, "--out", out]) == 0
        assert len(open(out).read().splitlines()) == 301


class TestFitXlasso:
    def test_fixed_lambda(self, workdir):
        tmp, data, _ = workdir
        cfg = config_file(tmp, "c.cfg", input=data, target="y", k=80, lam=0.01)
        out = str(tmp / "m.xlasso")
        assert run_cli(["fit-xlasso", "--config", cfg, "--out", out]) == 0
        model = load_linear_model(out)
        assert model.lam == 0.01
        assert model.coef_.shape == (3,)

    def test_cv_selected_lambda(self, workdir):
        tmp, data, _ = workdir
        cfg = config_file(
            tmp, "c.cfg", input=data, target="y", k=80,
            lambda_grid_size=8, cv_folds=3,
        )
        out = str(tmp / "m.xlasso")
        assert run_cli(["fit-xlasso", "--config", cfg, "--seed", "3", "--out", out]) == 0
        assert load_linear_model(out).lam >= 0.0


class TestCv:
    def test_table_shape(self, workdir):
        tmp, data, _ = workdir
        cfg = config_file(
            tmp, "c.cfg", input=data, rule="xlasso", target="y", p=0.3,
            grid="0.001,0.01,0.1", folds=3,
        )
        out = str(tmp / "cv.csv")
        assert run_cli(["cv", "--config", cfg, "--seed", "1", "--out", out]) == 0
        rows = open(out).read().splitlines()
        assert rows[0] == "hyper,rcv,fold_0,fold_1,fold_2"
        assert len(rows) == 4


class TestBounds:
    def test_request_order_preserved(self, workdir):
        tmp, _, _ = workdir
        cfg = config_file(
            tmp, "b.cfg", evaluate="k_tilde,b_term,vc_tail_bound",
            k=50, n=2000, d=4, delta=0.1, m_eps=1.0, p=0.1, vc_dim=2,
        )
        out = str(tmp / "b.csv")
        assert run_cli(["bounds", "--config", cfg, "--out", out]) == 0
        names = [line.split(",")[0] for line in open(out).read().splitlines()[1:]]
        assert names == ["k_tilde", "b_term", "vc_tail_bound"]

    def test_validator_row(self, workdir):
        tmp, _, _ = workdir
        cfg = config_file(
            tmp, "b.cfg", validate="quantile-lemma", reps=150, n=500, k=15, delta=0.1,
        )
        out = str(tmp / "b.csv")
        assert run_cli(["bounds", "--config", cfg, "--seed", "5", "--out", out]) == 0
        row = open(out).read().splitlines()[1].split(",")
        assert row[0] == "quantile-lemma"
        assert row[8] in ("true", "false")


class TestExperimentSim:
    def test_desk_scale_smoke(self, workdir):
        tmp, _, _ = workdir
        cfg = config_file(
            tmp, "e.cfg", n=400, d=6, taus="0.1,0.2", reps=2, n_test=2000,
            tau_test=0.05, lambda_grid_size=5, cv_folds=2,
        )
        out = str(tmp / "exp.csv")
        assert run_cli(["experiment-sim", "--config", cfg, "--seed", "2", "--out", out]) == 0
        rows = open(out).read().splitlines()
        assert rows[0] == "tau,method,rep,mse"
        assert len(rows) == 1 + 2 * 2 * 2  # taus x methods x reps
        summary = open(str(tmp / "exp.summary.csv")).read().splitlines()
        assert summary[0] == "tau,method,mean_mse,q10,q90"
        assert len(summary) == 5


class TestExperimentPortfolio:
    def make_panel(self, tmp_path, n=400, cols=49):
        rng = substream(55, 0)
        X = rng.standard_normal((n, cols))
        names = [f"c{j}" for j in range(cols - 1)] + ["Trans"]
        path = str(tmp_path / "panel.csv")
        with open(path, "w", newline="\n") as fh:
            fh.write(",".join(names) + "\n")
            for row in X:
                fh.write(",".join(repr(float(v)) for v in row) + "\n")
        return path

    def test_smoke_and_outputs(self, workdir):
        tmp, _, _ = workdir
        panel = self.make_panel(tmp)
        cfg = config_file(
            tmp, "p.cfg", input=panel, taus="0.3,0.5", reps=2,
            train_fraction=0.5, tau_test=0.05, lambda_grid_size=4, cv_folds=2,
        )
        out = str(tmp / "pf.csv")
        assert run_cli(["experiment-portfolio", "--config", cfg, "--seed", "4", "--out", out]) == 0
        assert open(out).read().splitlines()[0] == "tau,method,rep,mse"
        support = open(str(tmp / "pf.support.csv")).read().splitlines()
        assert support[0] == "k,y_min,y_max"
        assert len(support) == 401
        mins = [float(r.split(",")[1]) for r in support[1:]]
        maxs = [float(r.split(",")[2]) for r in support[1:]]
        assert all(b <= a + 1e-15 for a, b in zip(mins, mins[1:]))
        assert all(b >= a - 1e-15 for a, b in zip(maxs, maxs[1:]))

    def test_column_count_enforced(self, workdir):
        tmp, _, _ = workdir
        panel = self.make_panel(tmp, cols=10)
        cfg = config_file(tmp, "p.cfg", input=panel)
        assert run_cli(["experiment-portfolio", "--config", cfg, "--out", str(tmp / "x.csv")]) == 2

    def test_target_column_case_sensitive(self, workdir):
        tmp, _, _ = workdir
        panel = self.make_panel(tmp)
        cfg = config_file(tmp, "p.cfg", input=panel, target_column="trans")
        assert run_cli(["experiment-portfolio", "--config", cfg, "--out", str(tmp / "x.csv")]) == 2


class TestExperimentSimDeskScale:
    def test_spec_desk_scale_smoke(self, tmp_path):
        # n=2000, d=20, 5 replications completes and emits a full table
        cfg = config_file(
            tmp_path, "desk.cfg", n=2000, d=20, reps=5, n_test=20000,
            lambda_grid_size=10, cv_folds=3,
        )
        out = str(tmp_path / "desk.csv")
        assert run_cli(["experiment-sim", "--config", cfg, "--seed", "11", "--out", out]) == 0
        rows = open(out).read().splitlines()
        assert len(rows) == 1 + 4 * 2 * 5  # default tau grid x methods x reps
        summary = open(str(tmp_path / "desk.summary.csv")).read().splitlines()
        assert len(summary) == 1 + 4 * 2


class TestSimulateCmd:
    def test_generators(self, tmp_path):
        for gen, has_y in (("logistic", False), ("additive", True), ("classification", True)):
            cfg = config_file(tmp_path, f"{gen}.cfg", generator=gen, n=50, d=3, beta0_ones=2)
            out = str(tmp_path / f"{gen}.csv")
            assert run_cli(["simulate", "--config", cfg, "--seed", "1", "--out", out]) == 0
            header = open(out).read().splitlines()[0]
            assert header == ("x1,x2,x3,y" if has_y else "x1,x2,x3")
