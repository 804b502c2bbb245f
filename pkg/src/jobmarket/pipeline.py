"""Stage orchestration with content-hash caching.

Each stage writes into ``<out>/<stage>/`` and records a ``manifest.json`` with
the sha256 of every file it produced and of every upstream file it consumed.
A stage is up to date when the config fingerprint, the upstream hashes and its
own output hashes all still match; it is then skipped unless forced.
"""

from __future__ import annotations

import csv
import hashlib
import json
import shutil
import time
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__
from . import evaluation as ev
from . import synth, tabular, textfeat
from .config import PipelineConfig
from .errors import DependencyError, JobMarketError, StaleArtifactError
from .learn import (
    kmeans_assign, kmeans_fit, kneighbors, knn_fit, logreg_fit, model_from_dict,
    predict_from_neighbors, ridge_fit, save_model, svr_fit,
)

STAGES = (
    "generate",
    "preprocess",
    "featurize",
    "train-regression",
    "train-classification",
    "cluster",
    "importance",
    "report",
)

DEPENDS = {
    "generate": (),
    "preprocess": ("generate",),
    "featurize": ("generate", "preprocess"),
    "train-regression": ("preprocess", "featurize"),
    "train-classification": ("preprocess", "featurize"),
    "cluster": ("preprocess", "featurize"),
    "importance": ("preprocess", "featurize", "train-regression", "train-classification"),
    "report": ("train-regression", "train-classification", "cluster", "importance"),
}

MANIFEST = "manifest.json"
PROBE = "noise_probe"


def sha256_file(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for block in iter(lambda: fh.read(1 << 20), b""):
            h.update(block)
    return h.hexdigest()


def _write_json(path, doc):
    Path(path).write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def _read_json(path):
    return json.loads(Path(path).read_text(encoding="utf-8"))


def _write_rows(path, header, rows):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([repr(v) if isinstance(v, float) else v for v in row])


def _utc_now():
    return time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime())


@dataclass
class StageResult:
    stage: str
    status: str  # "ran" | "up to date"
    outputs: dict[str, str]


class Pipeline:
    def __init__(self, config: PipelineConfig, force=False, log=None):
        self.config = config
        self.force = force
        self.log = log or (lambda msg: None)
        self.root = config.out_dir
        self._cache = {}

    # -- manifests ---------------------------------------------------------

    def stage_dir(self, stage) -> Path:
        return self.root / stage

    def read_manifest(self, stage):
        path = self.stage_dir(stage) / MANIFEST
        if not path.exists():
            return None
        return _read_json(path)

    def verified_outputs(self, stage) -> dict[str, str]:
        """Output hashes of a finished stage after re-hashing the files.

        Raises DependencyError when the stage never ran and
        StaleArtifactError when its files or config no longer match.
        """
        doc = self.read_manifest(stage)
        if doc is None or doc.get("status") != "complete":
            raise DependencyError(f"stage {stage!r} has not been run; run {stage!r} first", stage=stage)
        if doc["config_fingerprint"] != self.config.fingerprint():
            raise StaleArtifactError(
                f"stage {stage!r} was produced under a different config; rerun {stage!r} (use --force)",
                stage=stage,
            )
        base = self.stage_dir(stage)
        for rel, digest in doc["outputs"].items():
            path = base / rel
            if not path.exists():
                raise StaleArtifactError(f"{stage}/{rel} is missing; rerun {stage!r}", stage=stage)
            if sha256_file(path) != digest:
                raise StaleArtifactError(
                    f"{stage}/{rel} does not match its recorded hash; rerun {stage!r}", stage=stage)
        return dict(doc["outputs"])

    def upstream_hashes(self, stage) -> dict[str, str]:
        # check in pipeline order so the error names the earliest missing stage
        missing = [d for d in STAGES if d in DEPENDS[stage] and self.read_manifest(d) is None]
        if missing:
            raise DependencyError(
                f"stage {stage!r} needs {missing[0]!r}; run {missing[0]!r} first", stage=missing[0])
        hashes = {}
        for dep in DEPENDS[stage]:
            for rel, digest in self.verified_outputs(dep).items():
                hashes[f"{dep}/{rel}"] = digest
        return dict(sorted(hashes.items()))

    def is_up_to_date(self, stage, inputs) -> bool:
        doc = self.read_manifest(stage)
        if doc is None or doc.get("status") != "complete":
            return False
        if doc["config_fingerprint"] != self.config.fingerprint() or doc["inputs"] != inputs:
            return False
        try:
            self.verified_outputs(stage)
        except DependencyError:
            return False
        return True

    # -- running -----------------------------------------------------------

    def run_stage(self, stage) -> StageResult:
        if stage not in STAGES:
            raise JobMarketError(f"unknown stage {stage!r}; expected one of {STAGES}")
        inputs = self.upstream_hashes(stage)
        if not self.force and self.is_up_to_date(stage, inputs):
            self.log(f"{stage}: up to date")
            return StageResult(stage, "up to date", self.read_manifest(stage)["outputs"])

        out = self.stage_dir(stage)
        if out.exists():
            shutil.rmtree(out)
        out.mkdir(parents=True)
        started = _utc_now()
        self.log(f"{stage}: running")
        getattr(self, "_run_" + stage.replace("-", "_"))(out)
        outputs = {
            p.relative_to(out).as_posix(): sha256_file(p)
            for p in sorted(out.rglob("*")) if p.is_file() and p.name != MANIFEST
        }
        _write_json(out / MANIFEST, {
            "stage": stage,
            "status": "complete",
            "tool_version": __version__,
            "config_fingerprint": self.config.fingerprint(),
            "config": self.config.to_dict(),
            "inputs": inputs,
            "outputs": outputs,
            "started": started,
            "finished": _utc_now(),
        })
        self._update_run_manifest()
        self.log(f"{stage}: done ({len(outputs)} files)")
        return StageResult(stage, "ran", outputs)

    def run_until(self, stage) -> list[StageResult]:
        """Run ``stage`` and everything upstream of it, in order."""
        need, todo = set(), [stage]
        while todo:
            s = todo.pop()
            if s not in need:
                need.add(s)
                todo.extend(DEPENDS[s])
        return [self.run_stage(s) for s in STAGES if s in need]

    def run_paper_matrix(self) -> dict:
        """Every stage in order; returns the summary document. On failure a
        partial-results manifest is written and the error re-raised."""
        for stage in STAGES:
            try:
                self.run_stage(stage)
            except Exception as exc:
                self._update_run_manifest(failed=(stage, exc))
                raise
        return _read_json(self.stage_dir("report") / "summary.json")

    def _update_run_manifest(self, failed=None):
        self.root.mkdir(parents=True, exist_ok=True)
        stages = {}
        for s in STAGES:
            doc = self.read_manifest(s)
            if doc is not None:
                stages[s] = {k: doc[k] for k in ("status", "inputs", "outputs", "started", "finished")}
        run = {
            "tool_version": __version__,
            "config": self.config.to_dict(),
            "config_fingerprint": self.config.fingerprint(),
            "status": "failed" if failed else ("complete" if len(stages) == len(STAGES) else "partial"),
            "stages": stages,
            "updated": _utc_now(),
        }
        if failed:
            run["failed_stage"], exc = failed
            run["error"] = f"{type(exc).__name__}: {exc}"
        _write_json(self.root / MANIFEST, run)

    # -- shared loaders ----------------------------------------------------

    def _get(self, key, build):
        if key not in self._cache:
            self._cache[key] = build()
        return self._cache[key]

    def listings(self):
        return self._get("listings", lambda: synth.read_listings_csv(
            self.stage_dir("generate") / "listings.csv"))

    def split(self):
        return self._get("split", lambda: tabular.SplitIndices.from_dict(
            _read_json(self.stage_dir("preprocess") / "split.json")))

    def targets(self):
        def build():
            data = np.loadtxt(self.stage_dir("preprocess") / "targets.csv", delimiter=",",
                              skiprows=1, ndmin=2)
            return data[:, 1].astype(np.float64), data[:, 2].astype(np.int64)
        return self._get("targets", build)

    def title_encoder(self):
        return self._get("title_encoder", lambda: tabular.LabelEncoder.from_dict(
            _read_json(self.stage_dir("preprocess") / "title_encoder.json")))

    def structured(self):
        return self._get("structured", lambda: tabular.FeatureMatrix.from_csv(
            self.stage_dir("preprocess") / "structured.csv"))

    def text_block(self, name, perturbed=True):
        """``tfidf`` or ``embed`` matrix; dev/test rows perturbed when asked."""
        def load():
            return tabular.FeatureMatrix.from_csv(self.stage_dir("featurize") / f"{name}.csv")
        clean = self._get(("text", name), load)
        if not perturbed:
            return clean
        def build():
            sp = self.split()
            rows = np.concatenate([sp.dev, sp.test])
            vals = clean.values.copy()
            offset = 0 if name == "embed" else 1
            sigma = self.config["text"]["perturb_sigma"]
            vals[rows] = textfeat.perturb(vals[rows], sigma, self.config.stage_seed("perturb") + offset)
            return tabular.FeatureMatrix(vals, clean.columns)
        return self._get(("text-perturbed", name), build)

    def feature_set(self, name) -> tabular.FeatureMatrix:
        if name == "structured":
            return self.structured()
        if name in ("embed", "tfidf"):
            return self.text_block(name)
        if name == "combined":
            return tabular.FeatureMatrix.hstack([self.structured(), self.text_block("tfidf")])
        raise JobMarketError(f"unknown feature set {name!r}")

    # -- stages --------------------------------------------------------------

    def _run_generate(self, out):
        profile = self.config.profile()
        listings = synth.generate_listings(profile)
        synth.write_listings_csv(listings, out / "listings.csv")
        _write_json(out / "profile.json", {
            "profile": {k: getattr(profile, k) for k in profile.__dataclass_fields__},
            "n_rows": len(listings),
            "digest": synth.listings_digest(listings),
        })

    def _run_preprocess(self, out):
        cfg = self.config
        listings = self.listings()
        title_enc = tabular.fit_label_encoder((l.job_title for l in listings), column="job_title")
        codes = title_enc.transform([l.job_title for l in listings])
        salary = np.array([tabular.parse_salary(l.salary_text)[2] for l in listings])
        split = tabular.stratified_split(codes, seed=cfg.stage_seed("split"))
        pre = tabular.fit_structured(listings, split.train, leakage_mode=cfg.leakage_mode,
                                     cell_deg=cfg["generator"]["geo_cell_deg"])
        S = pre.transform(listings)
        S.to_csv(out / "structured.csv", manifest={
            "scaler_methods": pre.scaler.methods,
            "encoders": {k: list(e.categories) for k, e in pre.encoders.items()},
            "leakage_mode": cfg.leakage_mode,
            "seed": cfg.seed,
        })
        _write_rows(out / "targets.csv", ["row", "salary_avg", "title_code"],
                    [[i, float(s), int(c)] for i, (s, c) in enumerate(zip(salary, codes))])
        _write_json(out / "split.json", split.to_dict())
        _write_json(out / "preprocessor.json", pre.to_dict())
        _write_json(out / "title_encoder.json", title_enc.to_dict())

    def _run_featurize(self, out):
        cfg, text = self.config, self.config["text"]
        listings = self.listings()
        titles = list(self.title_encoder().categories)
        train = self.split().train

        tokens = [textfeat.tokenize_skills(textfeat.mask_job_titles(l.skills, titles)) for l in listings]
        tf = textfeat.tfidf_fit((tokens[i] for i in train), max_features=text["tfidf_max_features"])
        T = tabular.FeatureMatrix(textfeat.tfidf_matrix(tf, tokens), tf.feature_names())
        T.to_csv(out / "tfidf.csv", manifest={"n_docs": tf.n_docs, "max_features": text["tfidf_max_features"]})
        tf.save(out / "tfidf_model.json")

        emb = textfeat.SemanticEmbedder(dim=text["embed_dim"], seed=cfg.stage_seed("embed"))
        desc = emb.embed_many(textfeat.mask_job_titles(l.job_description, titles) for l in listings)
        resp = emb.embed_many(textfeat.mask_job_titles(l.responsibilities, titles) for l in listings)
        fused = textfeat.fuse_embeddings(desc, resp, text["d_fused"], fit_rows=train)
        E = tabular.FeatureMatrix(fused.matrix, [f"emb_{j}" for j in range(fused.matrix.shape[1])])
        E.to_csv(out / "embed.csv", manifest={
            "d": text["embed_dim"], "seed": emb.seed, "d_fused": text["d_fused"],
            "sigma": text["perturb_sigma"],
            "explained_variance_kept": float(fused.pca.explained_variance_ratio.sum()),
        })
        _write_json(out / "pca.json", fused.pca.to_dict())

    def _run_train_regression(self, out):
        cfg = self.config
        y, _ = self.targets()
        sp = self.split()
        grids, svr_cfg = cfg["grids"], cfg["svr"]
        rows, sweeps = [], {}
        (out / "models").mkdir()
        for fs in cfg["feature_sets"]["regression"]:
            F = self.feature_set(fs)
            X = F.values
            Xtr, Xdv, Xte = X[sp.train], X[sp.dev], X[sp.test]

            alpha_dev = {}
            for alpha in grids["alpha"]:
                m = ridge_fit(Xtr, y[sp.train], alpha)
                alpha_dev[alpha] = ev.rmse(y[sp.dev], m.predict(Xdv))
            best_alpha = min(grids["alpha"], key=lambda a: (alpha_dev[a], a))
            ridge = ridge_fit(Xtr, y[sp.train], best_alpha)
            save_model(ridge, out / "models" / f"ridge_{fs}.json")

            knn = knn_fit(Xtr, y[sp.train], k=max(grids["k"]), task="regression")
            nb_dev = kneighbors(knn, Xdv)
            k_dev = {}
            for k in grids["k"]:
                knn.k = k
                k_dev[k] = ev.rmse(y[sp.dev], predict_from_neighbors(knn, nb_dev[:, :k]))
            best_k = min(grids["k"], key=lambda k: (k_dev[k], k))
            knn.k = best_k
            knn_pred = predict_from_neighbors(knn, kneighbors(knn, Xte, best_k))

            svr = svr_fit(Xtr, y[sp.train], seed=cfg.stage_seed("svr"), **svr_cfg)
            save_model(svr, out / "models" / f"svr_{fs}.json")

            yt = y[sp.test]
            preds = {"ridge": ridge.predict(Xte), "knn": knn_pred, "svr": svr.predict(Xte)}
            row = {"feature_set": fs, "n_features": X.shape[1], "ridge_alpha": best_alpha, "knn_k": best_k}
            for name, p in preds.items():
                row[f"{name}_rmse"] = ev.rmse(yt, p)
                row[f"{name}_nrmse"] = ev.nrmse(yt, p)
            rows.append(row)
            sweeps[fs] = {"alpha_dev_rmse": {repr(a): v for a, v in alpha_dev.items()},
                          "k_dev_rmse": {str(k): v for k, v in k_dev.items()}}

            if fs == "structured" and cfg.leakage_mode:
                pre = tabular.StructuredPreprocessor.from_dict(
                    _read_json(self.stage_dir("preprocess") / "preprocessor.json"))
                coef = dict(zip(F.columns, ridge.coef))
                leak = {c: tabular.inverse_robust_coefficient(pre.scaler, c, coef[c])
                        for c in tabular.LEAKAGE_COLUMNS}
                _write_json(out / "leakage_check.json", {"alpha": best_alpha, "raw_coefficients": leak})

        _write_json(out / "results.json", {"rows": rows, "sweeps": sweeps})

    def _fit_logreg_tuned(self, Xtr, ytr, Xdv, ydv, n_classes):
        cfg = self.config
        dev = {}
        models = {}
        for C in cfg["grids"]["C"]:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", RuntimeWarning)
                m = logreg_fit(Xtr, ytr, C=C, n_classes=n_classes, **cfg["logreg"])
            models[C] = m
            dev[C] = ev.macro_f1(ydv, m.predict(Xdv), n_classes)
        best = min(cfg["grids"]["C"], key=lambda c: (-dev[c], c))
        return models[best], best, dev

    def _run_train_classification(self, out):
        cfg = self.config
        _, labels = self.targets()
        sp = self.split()
        n_classes = self.title_encoder().cardinality
        names = list(self.title_encoder().categories)
        rows, sweeps = [], {}
        (out / "models").mkdir()
        for fs in cfg["feature_sets"]["classification"]:
            X = self.feature_set(fs).values
            Xtr, Xdv, Xte = X[sp.train], X[sp.dev], X[sp.test]
            lr, best_C, c_dev = self._fit_logreg_tuned(
                Xtr, labels[sp.train], Xdv, labels[sp.dev], n_classes)
            save_model(lr, out / "models" / f"logreg_{fs}.json")

            knn = knn_fit(Xtr, labels[sp.train], k=max(cfg["grids"]["k"]),
                          task="classification", n_classes=n_classes)
            nb_dev = kneighbors(knn, Xdv)
            k_dev = {}
            for k in cfg["grids"]["k"]:
                knn.k = k
                k_dev[k] = ev.macro_f1(labels[sp.dev], predict_from_neighbors(knn, nb_dev[:, :k]), n_classes)
            best_k = min(cfg["grids"]["k"], key=lambda k: (-k_dev[k], k))
            knn.k = best_k
            knn_pred = predict_from_neighbors(knn, kneighbors(knn, Xte, best_k))

            yt = labels[sp.test]
            lr_pred = lr.predict(Xte)
            rows.append({
                "feature_set": fs, "n_features": X.shape[1],
                "logreg_C": best_C, "logreg_status": lr.status,
                "logreg_macro_f1": ev.macro_f1(yt, lr_pred, n_classes),
                "knn_k": best_k, "knn_macro_f1": ev.macro_f1(yt, knn_pred, n_classes),
            })
            sweeps[fs] = {"C_dev_macro_f1": {repr(c): v for c, v in c_dev.items()},
                          "k_dev_macro_f1": {str(k): v for k, v in k_dev.items()}}
            if fs == "combined" or fs == cfg["feature_sets"]["classification"][-1]:
                conf = ev.confusion_topk(yt, lr_pred, cfg["importance"]["confusion_top_k"])
                _write_json(out / f"confusion_{fs}.json", conf.to_dict(names))
                conf.to_csv(out / f"confusion_{fs}.csv", names)
        _write_json(out / "results.json", {"rows": rows, "sweeps": sweeps})

    def _run_cluster(self, out):
        cfg, cl = self.config, self.config["clustering"]
        titles = [l.job_title for l in self.listings()]
        tokens = textfeat.TfidfModel.load(self.stage_dir("featurize") / "tfidf_model.json").tokens
        rows = []
        for fs in cl["feature_sets"]:
            X = self.text_block(fs, perturbed=False).values
            mode = "tfidf" if fs == "tfidf" else "embedding"
            names = tokens if fs == "tfidf" else None
            for K in cl["k_values"]:
                km = kmeans_fit(X, K, seed=cfg.stage_seed("cluster"), max_iter=cl["max_iter"], tol=cl["tol"])
                lab = kmeans_assign(km, X)
                rep = ev.cluster_report(X, lab, km.centroids, titles, mode, feature_names=names)
                stem = f"{fs}_K{K}"
                _write_json(out / f"{stem}.json", {**rep.to_dict(), "inertia": km.inertia,
                                                    "n_iter": km.n_iter})
                rep.coords_to_csv(out / f"{stem}_pca.csv")
                rep.to_svg(out / f"{stem}.svg")
                rows.append({"feature_set": fs, "K": K, "davies_bouldin": rep.davies_bouldin,
                             "inertia": km.inertia})
        _write_json(out / "results.json", {"rows": rows})

    def _run_importance(self, out):
        cfg = self.config
        sp = self.split()
        y, labels = self.targets()
        n_classes = self.title_encoder().cardinality
        repeats = cfg["importance"]["repeats"]
        seed = cfg.stage_seed("importance")
        S = self.structured()
        train_dir = self.stage_dir("train-regression")
        cls_dir = self.stage_dir("train-classification")

        reports = {}
        if "structured" in cfg["feature_sets"]["regression"]:
            ridge = model_from_dict(_read_json(train_dir / "models" / "ridge_structured.json"))
            imps = ev.permutation_importance(ridge.predict, S.values[sp.test], y[sp.test], "rmse",
                                             repeats=repeats, seed=seed, names=S.columns)
            reports["regression_structured"] = ev.EvaluationReport(
                "regression", {"test_rmse": ev.rmse(y[sp.test], ridge.predict(S.values[sp.test]))},
                imps, config={"model": "ridge", "alpha": ridge.alpha, "seed": seed, "repeats": repeats})

        # tuned logistic regression on the structured block plus a pure-noise probe
        probe = np.random.default_rng(cfg.stage_seed("probe")).standard_normal(len(S))
        Xp = np.column_stack([S.values, probe])
        lr, best_C, _ = self._fit_logreg_tuned(Xp[sp.train], labels[sp.train], Xp[sp.dev],
                                               labels[sp.dev], n_classes)
        imps = ev.permutation_importance(lr.predict, Xp[sp.test], labels[sp.test], "macro_f1",
                                         repeats=repeats, seed=seed, names=S.columns + [PROBE],
                                         n_classes=n_classes)
        reports["classification_structured_probe"] = ev.EvaluationReport(
            "classification", {"test_macro_f1": ev.macro_f1(labels[sp.test], lr.predict(Xp[sp.test]), n_classes)},
            imps, config={"model": "logreg", "C": best_C, "seed": seed, "repeats": repeats,
                          "probe_seed": cfg.stage_seed("probe")})

        if "combined" in cfg["feature_sets"]["classification"]:
            lr = model_from_dict(_read_json(cls_dir / "models" / "logreg_combined.json"))
            F = self.feature_set("combined")
            groups = {c: [j] for j, c in enumerate(S.columns)}
            groups["tfidf"] = list(range(len(S.columns), F.shape[1]))
            Xt = F.values[sp.test]
            imps = ev.permutation_importance(lr.predict, Xt, labels[sp.test], "macro_f1",
                                             repeats=repeats, seed=seed, groups=groups, n_classes=n_classes)
            reports["classification_combined"] = ev.EvaluationReport(
                "classification", {"test_macro_f1": ev.macro_f1(labels[sp.test], lr.predict(Xt), n_classes)},
                imps, config={"model": "logreg", "C": lr.C, "seed": seed, "repeats": repeats})

        for name, rep in reports.items():
            rep.to_json(out / f"{name}.json")
            rep.importances_to_csv(out / f"{name}.csv")

    def _run_report(self, out):
        reg = _read_json(self.stage_dir("train-regression") / "results.json")["rows"]
        cls = _read_json(self.stage_dir("train-classification") / "results.json")["rows"]
        clu = _read_json(self.stage_dir("cluster") / "results.json")["rows"]
        leak_path = self.stage_dir("train-regression") / "leakage_check.json"
        imp_dir = self.stage_dir("importance")
        importance = {}
        for path in sorted(imp_dir.glob("*.json")):
            if path.name == MANIFEST:
                continue
            doc = _read_json(path)
            ranked = sorted(doc["importances"], key=lambda d: -d["mean"])
            importance[path.stem] = [[d["name"], d["mean"], d["sd"]] for d in ranked]
        figures = sorted(
            f"{stage}/{p.name}"
            for stage in ("cluster", "train-classification", "importance")
            for p in self.stage_dir(stage).iterdir()
            if p.suffix in (".svg", ".csv")
        )
        summary = {
            "config": {k: v for k, v in self.config.to_dict().items() if k != "out_dir"},
            "regression": reg,
            "classification": cls,
            "clustering": clu,
            "leakage_check": _read_json(leak_path) if leak_path.exists() else None,
            "importance": importance,
            "figures": figures,
        }
        _write_json(out / "summary.json", summary)
        _write_rows(out / "table_regression.csv",
                    ["feature_set", "ridge_alpha", "ridge_rmse", "ridge_nrmse", "knn_k", "knn_nrmse", "svr_nrmse"],
                    [[r["feature_set"], r["ridge_alpha"], r["ridge_rmse"], r["ridge_nrmse"], r["knn_k"],
                      r["knn_nrmse"], r["svr_nrmse"]] for r in reg])
        _write_rows(out / "table_classification.csv",
                    ["feature_set", "logreg_C", "logreg_macro_f1", "knn_k", "knn_macro_f1"],
                    [[r["feature_set"], r["logreg_C"], r["logreg_macro_f1"], r["knn_k"], r["knn_macro_f1"]]
                     for r in cls])
        _write_rows(out / "table_clustering.csv", ["feature_set", "K", "davies_bouldin"],
                    [[r["feature_set"], r["K"], r["davies_bouldin"]] for r in clu])
