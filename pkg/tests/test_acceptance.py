"""Acceptance criteria, each checked at its stated tolerance.

Every test appends one PASS/FAIL line to the terminal summary before
asserting, so a full ``pytest`` run prints the whole scorecard.
"""

import json
import math

import numpy as np
import pytest

import oracles
from conftest import ACCEPTANCE_LINES
from jobmarket.cli import main
from jobmarket.config import PipelineConfig
from jobmarket.evaluation import confusion_topk, davies_bouldin, macro_f1, nrmse, rmse
from jobmarket.learn import kmeans_fit, ridge_fit
from jobmarket.learn.logreg import gradient, objective
from jobmarket.pipeline import Pipeline
from jobmarket.tabular import stratified_split
from jobmarket.textfeat import tfidf_fit, tfidf_matrix


def record(number, title, ok, detail):
    ACCEPTANCE_LINES.append(f"[{'PASS' if ok else 'FAIL'}] {number:>2}. {title}: {detail}")
    assert ok, detail


@pytest.fixture(scope="module")
def default_run(tmp_path_factory):
    """The default configuration (20,000 listings, seed 42) run end to end."""
    out = tmp_path_factory.mktemp("default_run")
    pipe = Pipeline(PipelineConfig.load(out_dir=str(out)))
    summary = pipe.run_paper_matrix()
    return pipe, summary


def _rows(summary, key):
    return {r["feature_set"]: r for r in summary[key]}


def test_c01_leakage_floor(default_run):
    pipe, summary = default_run
    reg = _rows(summary, "regression")["structured"]
    coefs = summary["leakage_check"]["raw_coefficients"]
    err = max(abs(coefs["salary_min"] - 0.5), abs(coefs["salary_max"] - 0.5))
    ok = (0.1 in pipe.config["grids"]["alpha"] and pipe.config.leakage_mode
          and reg["ridge_nrmse"] < 1e-6 and err <= 1e-6)
    record(1, "leakage regression floor", ok,
           f"structured ridge NRMSE={reg['ridge_nrmse']:.3e} (<1e-6); "
           f"coef(min,max)=({coefs['salary_min']:.9f},{coefs['salary_max']:.9f}) max|err|={err:.2e} (<=1e-6)")


def test_c02_regression_ordering(default_run):
    reg = _rows(default_run[1], "regression")
    s, c = reg["structured"]["ridge_nrmse"], reg["combined"]["ridge_nrmse"]
    e, t = reg["embed"]["ridge_nrmse"], reg["tfidf"]["ridge_nrmse"]
    text_floor = min(e, t)
    ok = s < 0.01 * text_floor and c < 0.01 * text_floor
    record(2, "regression ordering", ok,
           f"structured={s:.3e} combined={c:.3e} << embed={e:.4f}, tfidf={t:.4f} (x0.01 bound {0.01 * text_floor:.4f})")


def test_c03_nonlinear_gap(default_run):
    r = _rows(default_run[1], "regression")["structured"]
    ridge, knn, svr = r["ridge_nrmse"], r["knn_nrmse"], r["svr_nrmse"]
    ok = ridge < knn < 0.10 and ridge < svr < 0.10
    record(3, "nonlinear-model gap", ok, f"ridge={ridge:.3e} < knn={knn:.4f}, svr={svr:.4f} < 0.10")


def test_c04_classification_ordering(default_run):
    pipe, summary = default_run
    cls = _rows(summary, "classification")
    f1 = {k: v["logreg_macro_f1"] for k, v in cls.items()}
    knn_gap = f1["combined"] - cls["combined"]["knn_macro_f1"]
    ok = (10.0 in pipe.config["grids"]["C"]
          and f1["structured"] < 0.10
          and f1["embed"] > 0.80 and f1["tfidf"] > 0.80
          and f1["combined"] >= max(f1["structured"], f1["embed"], f1["tfidf"])
          and f1["combined"] >= 0.95
          and knn_gap >= 0.15)
    record(4, "classification ordering", ok,
           f"structured={f1['structured']:.4f} (<0.10) embed={f1['embed']:.4f} tfidf={f1['tfidf']:.4f} (>0.80) "
           f"combined={f1['combined']:.4f} (>=max, >=0.95) knn gap={knn_gap:.4f} (>=0.15)")


def test_c05_davies_bouldin_trend(default_run):
    db = {(r["feature_set"], r["K"]): r["davies_bouldin"] for r in default_run[1]["clustering"]}
    parts, ok = [], True
    for fs in ("tfidf", "embed"):
        a, b, c = db[(fs, 10)], db[(fs, 25)], db[(fs, 40)]
        ok &= c < b < a
        parts.append(f"{fs} {a:.4f}>{b:.4f}>{c:.4f}")
    record(5, "Davies-Bouldin trend", ok, "; ".join(parts))


def test_c06_metric_oracles():
    worst = {}
    rng = np.random.default_rng(2024)

    def track(name, a, b):
        worst[name] = max(worst.get(name, 0.0), abs(a - b))

    for _ in range(100):
        n = int(rng.integers(2, 201))
        y = rng.normal(size=n) * rng.uniform(1, 1e4)
        p = y + rng.normal(size=n) * rng.uniform(0.1, 1e3)
        track("rmse", rmse(y, p), oracles.rmse(y, p))
        track("nrmse", nrmse(y, p), oracles.nrmse(y, p))

        K = int(rng.integers(2, 12))
        t, q = rng.integers(0, K, n), rng.integers(0, K, n)
        track("macro_f1", macro_f1(t, q, K), oracles.macro_f1(t.tolist(), q.tolist(), K))

        top = int(rng.integers(1, 12))
        c = confusion_topk(t, q, k=top)
        m, labels, rem = oracles.confusion_topk(t.tolist(), q.tolist(), top)
        mismatch = c.labels != labels or c.matrix.tolist() != m or c.remainder != rem
        track("confusion", float(mismatch), 0.0)

        Kc = int(rng.integers(2, 8))
        X = rng.normal(size=(max(n, Kc), 3))
        lab = np.arange(len(X)) % Kc
        rng.shuffle(lab)
        C = np.array([X[lab == k].mean(axis=0) for k in range(Kc)])
        track("davies_bouldin", davies_bouldin(X, lab, C),
              oracles.davies_bouldin(X.tolist(), lab.tolist(), C.tolist()))

        vocab_size = int(rng.integers(3, 30))
        words = [f"s{j}" for j in range(vocab_size)]
        train = [list(rng.choice(words, int(rng.integers(0, 8)))) for _ in range(int(rng.integers(1, 60)))]
        docs = [list(rng.choice(words, int(rng.integers(0, 8)))) for _ in range(20)]
        cap = int(rng.integers(1, vocab_size + 1))
        vocab, rows = oracles.tfidf(train, docs, cap)
        if vocab:
            model = tfidf_fit(train, max_features=cap)
            diff = 1.0 if model.tokens != vocab else float(np.abs(tfidf_matrix(model, docs) - np.array(rows)).max())
            track("tfidf", diff, 0.0)
        else:
            track("tfidf", 0.0, 0.0)

    ok = all(v <= 1e-10 for v in worst.values()) and len(worst) == 6
    record(6, "metric oracles", ok,
           "max |diff| over 100 instances: " + ", ".join(f"{k}={v:.1e}" for k, v in worst.items()) + " (<=1e-10)")


def test_c07_optimizer_oracles():
    rng = np.random.default_rng(7)
    ridge_err = 0.0
    for _ in range(25):
        X = rng.normal(size=(20, 5))
        y = X @ rng.normal(size=5) + 0.2 * rng.normal(size=20)
        alpha = float(rng.choice([0.01, 0.1, 1.0, 10.0]))
        m = ridge_fit(X, y, alpha)
        w, b = oracles.ridge_gd(X, y, alpha)
        ridge_err = max(ridge_err, float(np.abs(m.coef - w).max()), abs(m.intercept - b))

    fd_err = 0.0
    h = 1e-6
    for _ in range(10):
        X = rng.normal(size=(30, 8))
        y = rng.integers(0, 4, 30)
        W, bias = rng.normal(size=(4, 8)), rng.normal(size=4)
        C = float(rng.choice([0.1, 1.0, 10.0]))
        gW, gb = gradient(W, bias, X, y, C)
        for idx in np.ndindex(W.shape):
            Wp, Wm = W.copy(), W.copy()
            Wp[idx] += h
            Wm[idx] -= h
            num = (objective(Wp, bias, X, y, C) - objective(Wm, bias, X, y, C)) / (2 * h)
            fd_err = max(fd_err, abs(num - gW[idx]))
        for j in range(4):
            e = np.zeros(4)
            e[j] = h
            num = (objective(W, bias + e, X, y, C) - objective(W, bias - e, X, y, C)) / (2 * h)
            fd_err = max(fd_err, abs(num - gb[j]))

    increases = 0
    for run in range(1000):
        r = np.random.default_rng(run)
        n = int(r.integers(10, 80))
        X = r.normal(size=(n, int(r.integers(1, 5)))) * r.uniform(0.1, 10)
        K = int(r.integers(2, min(n, 12) + 1))
        hist = np.array(kmeans_fit(X, K, seed=run, max_iter=100).inertia_history)
        increases += int(np.any(np.diff(hist) > 1e-9 * max(hist[0], 1e-300)))

    ok = ridge_err < 1e-6 and fd_err < 1e-4 and increases == 0
    record(7, "optimizer oracles", ok,
           f"ridge vs GD max|diff|={ridge_err:.1e} (<1e-6); logreg grad vs FD={fd_err:.1e} (<1e-4); "
           f"k-means runs with an inertia increase: {increases}/1000")


def test_c08_split_contract():
    rng = np.random.default_rng(8)
    violations = []
    for i in range(200):
        n = int(rng.integers(1, 500))
        n_classes = int(rng.integers(1, 30))
        weights = rng.dirichlet(np.ones(n_classes) * rng.uniform(0.2, 3))
        labels = rng.choice(n_classes, n, p=weights).tolist()
        violations += oracles.split_violations(labels, stratified_split(labels, seed=int(rng.integers(0, 2**63))))
    record(8, "split contract", not violations, f"{len(violations)} violations over 200 label vectors")


def _artifacts(root):
    files = [root / "report" / "summary.json"]
    files += sorted((root / "report").glob("*.csv"))
    files += sorted((root / "cluster").glob("*.svg"))
    return {p.relative_to(root).as_posix(): p.read_bytes() for p in files}


def test_c09_determinism(tmp_path, small_config_path, capsys):
    a, b = tmp_path / "a", tmp_path / "b"
    codes = [main(["--config", str(small_config_path), "--out", str(d), "paper-matrix"]) for d in (a, b)]
    capsys.readouterr()
    fa, fb = _artifacts(a), _artifacts(b)
    differing = sorted(k for k in fa if fa[k] != fb.get(k))
    ok = codes == [0, 0] and fa.keys() == fb.keys() and not differing and len(fa) == 1 + 3 + 6
    record(9, "determinism", ok,
           f"{len(fa)} files compared (summary JSON, CSV tables, SVGs); byte differences: {differing or 'none'}")


def test_c10_feature_importance(default_run):
    pipe, _ = default_run
    doc = json.loads((pipe.stage_dir("importance") / "classification_structured_probe.json").read_text())
    ranked = sorted(doc["importances"], key=lambda d: (-d["mean"], d["name"]))
    names = [d["name"] for d in ranked]
    n = len(names)
    q_rank = names.index("qualifications_enc") + 1
    p_rank = names.index("noise_probe") + 1
    bottom_start = n - math.ceil(n / 4) + 1
    ok = doc["config"]["model"] == "logreg" and q_rank <= 3 and p_rank >= bottom_start
    record(10, "feature-importance sanity", ok,
           f"qualifications rank {q_rank}/{n} (top 3); noise probe rank {p_rank}/{n} "
           f"(bottom quartile = ranks {bottom_start}..{n}); C={doc['config']['C']}")
