"""Metrics and diagnostics for the regression, classification and clustering
experiments, plus the report containers they are serialized through."""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Mapping, Sequence

import numpy as np

from .errors import DomainError, NumericalError, ValidationError
from .textfeat import pca_fit, pca_transform

METRICS = ("rmse", "macro_f1")
CLUSTER_MODES = ("tfidf", "embedding")


def _pair(y_true, y_pred):
    a = np.asarray(y_true, dtype=np.float64).ravel()
    b = np.asarray(y_pred, dtype=np.float64).ravel()
    if a.shape != b.shape:
        raise ValidationError(f"length mismatch: {a.size} true vs {b.size} predicted values")
    if a.size == 0:
        raise ValidationError("need at least one value")
    return a, b


def rmse(y_true, y_pred) -> float:
    a, b = _pair(y_true, y_pred)
    return float(np.sqrt(np.mean((a - b) ** 2)))


def nrmse(y_true, y_pred) -> float:
    """RMSE divided by the observed range of ``y_true``."""
    a, b = _pair(y_true, y_pred)
    span = float(a.max() - a.min())
    if span <= 0:
        raise DomainError("nrmse is undefined for a constant target (max == min)")
    return rmse(a, b) / span


def _labels(y, n_classes, what):
    y = np.asarray(y)
    if y.ndim != 1:
        raise ValidationError(f"{what} labels must be 1-D")
    if y.size and not np.issubdtype(y.dtype, np.integer):
        if not np.all(np.equal(np.mod(y, 1), 0)):
            raise ValidationError(f"{what} labels must be integer codes")
    y = y.astype(np.int64)
    if n_classes is not None and y.size and (y.min() < 0 or y.max() >= n_classes):
        bad = y[(y < 0) | (y >= n_classes)][0]
        raise ValidationError(f"{what} label {bad} outside 0..{n_classes - 1}")
    return y


def per_class_f1(y_true, y_pred, n_classes: int) -> np.ndarray:
    if n_classes < 1:
        raise ValidationError("n_classes must be >= 1")
    t = _labels(y_true, n_classes, "true")
    p = _labels(y_pred, n_classes, "predicted")
    if t.shape != p.shape:
        raise ValidationError(f"length mismatch: {t.size} true vs {p.size} predicted labels")
    tp = np.bincount(t[t == p], minlength=n_classes).astype(np.float64)
    support = np.bincount(t, minlength=n_classes)
    predicted = np.bincount(p, minlength=n_classes)
    # 2tp / (2tp + fp + fn); zero when the class never appears on either side
    denom = support + predicted
    out = np.zeros(n_classes)
    np.divide(2.0 * tp, denom, out=out, where=denom > 0)
    return out


def macro_f1(y_true, y_pred, n_classes: int) -> float:
    """Unweighted mean of per-class F1 over all ``n_classes`` classes."""
    return float(per_class_f1(y_true, y_pred, n_classes).mean())


@dataclass
class ConfusionTopK:
    """Confusion counts restricted to the ``k`` most frequent true labels.

    ``other[i]`` counts rows of true label ``labels[i]`` predicted outside the
    top-k, so ``matrix[i].sum() + other[i]`` is that label's support.
    ``remainder`` is every evaluated pair that did not land in ``matrix``.
    """

    matrix: np.ndarray
    labels: list[int]
    other: np.ndarray
    remainder: int

    @property
    def support(self) -> np.ndarray:
        return self.matrix.sum(axis=1) + self.other

    def to_dict(self, names: Sequence[str] | None = None):
        doc = {
            "labels": list(self.labels),
            "matrix": self.matrix.tolist(),
            "other": self.other.tolist(),
            "remainder": int(self.remainder),
        }
        if names is not None:
            doc["names"] = [names[i] for i in self.labels]
        return doc

    def to_csv(self, path, names: Sequence[str] | None = None):
        tags = [names[i] if names is not None else str(i) for i in self.labels]
        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["true\\pred", *tags, "other"])
            for tag, row, other in zip(tags, self.matrix, self.other):
                w.writerow([tag, *(int(v) for v in row), int(other)])
            w.writerow(["remainder", *([""] * len(tags)), int(self.remainder)])


def confusion_topk(y_true, y_pred, k: int = 10) -> ConfusionTopK:
    if k < 1:
        raise ValidationError(f"k must be >= 1, got {k}")
    t = _labels(y_true, None, "true")
    p = _labels(y_pred, None, "predicted")
    if t.shape != p.shape:
        raise ValidationError(f"length mismatch: {t.size} true vs {p.size} predicted labels")
    if t.size == 0:
        return ConfusionTopK(np.zeros((0, 0), np.int64), [], np.zeros(0, np.int64), 0)
    values, counts = np.unique(t, return_counts=True)
    # most frequent first, smallest code on ties
    order = np.lexsort((values, -counts))[:k]
    labels = sorted(int(v) for v in values[order])
    pos = {lab: i for i, lab in enumerate(labels)}
    m = len(labels)
    matrix = np.zeros((m, m), dtype=np.int64)
    other = np.zeros(m, dtype=np.int64)
    for a, b in zip(t.tolist(), p.tolist()):
        i = pos.get(a)
        if i is None:
            continue
        j = pos.get(b)
        if j is None:
            other[i] += 1
        else:
            matrix[i, j] += 1
    return ConfusionTopK(matrix, labels, other, int(t.size - matrix.sum()))


# ---------------------------------------------------------------------------
# permutation importance


@dataclass(frozen=True)
class Importance:
    name: str
    mean: float
    sd: float
    drops: tuple[float, ...]

    def to_dict(self):
        return {"name": self.name, "mean": self.mean, "sd": self.sd, "drops": list(self.drops)}

    @classmethod
    def from_dict(cls, doc):
        return cls(doc["name"], float(doc["mean"]), float(doc["sd"]), tuple(float(d) for d in doc["drops"]))


def _scorer(metric: str, n_classes):
    if metric == "rmse":
        return (lambda y, yp: rmse(y, yp)), -1.0
    if metric == "macro_f1":
        if n_classes is None:
            raise ValidationError("macro_f1 importance needs n_classes")
        return (lambda y, yp: macro_f1(y, yp, n_classes)), 1.0
    raise ValidationError(f"unknown metric {metric!r}; expected one of {METRICS}")


def permutation_importance(
    predict_fn: Callable[[np.ndarray], np.ndarray],
    X,
    y,
    metric: str,
    repeats: int = 5,
    seed: int = 0,
    groups: Mapping[str, Sequence[int]] | None = None,
    names: Sequence[str] | None = None,
    n_classes: int | None = None,
) -> list[Importance]:
    """Score drop when columns are shuffled with the model held fixed.

    Each unit is a single column (named by ``names``) or, when ``groups`` is
    given, a named set of columns shuffled jointly. Repeat ``r`` uses the row
    permutation drawn from ``seed + r`` for every unit, so units are compared
    on identical shuffles. Drops are oriented so that larger means more
    important for both metrics. The caller's ``X`` is never modified.
    """
    score, sign = _scorer(metric, n_classes)
    if repeats < 1:
        raise ValidationError(f"repeats must be >= 1, got {repeats}")
    work = np.array(X, dtype=np.float64, copy=True)
    if work.ndim != 2:
        raise ValidationError(f"X must be 2-D, got shape {work.shape}")
    n, d = work.shape
    if groups is None:
        if names is None:
            names = [f"x{j}" for j in range(d)]
        if len(names) != d:
            raise ValidationError(f"{len(names)} names for {d} columns")
        units = [(str(nm), [j]) for j, nm in enumerate(names)]
    else:
        units = []
        for nm, cols in groups.items():
            cols = [int(c) for c in cols]
            if not cols or min(cols) < 0 or max(cols) >= d:
                raise ValidationError(f"group {nm!r} has column indices outside 0..{d - 1}")
            units.append((str(nm), cols))

    base = score(y, predict_fn(work))
    if not math.isfinite(base):
        raise NumericalError(f"baseline {metric} is not finite")
    perms = [np.random.default_rng(seed + r).permutation(n) for r in range(repeats)]

    out = []
    for nm, cols in units:
        saved = work[:, cols].copy()
        drops = []
        for perm in perms:
            work[:, cols] = saved[perm]
            val = score(y, predict_fn(work))
            if not math.isfinite(val):
                work[:, cols] = saved
                raise NumericalError(f"{metric} became non-finite after permuting {nm!r}")
            drops.append(sign * (base - val))
            work[:, cols] = saved
        arr = np.array(drops)
        sd = float(arr.std(ddof=1)) if len(arr) > 1 else 0.0
        out.append(Importance(nm, float(arr.mean()), sd, tuple(float(v) for v in arr)))
    return out


def rank_importances(items: Sequence[Importance]) -> list[Importance]:
    """Descending by mean drop; ties keep input order."""
    return sorted(items, key=lambda it: -it.mean)


# ---------------------------------------------------------------------------
# clustering


def davies_bouldin(X, labels, centroids) -> float:
    """Mean over clusters of max_{j != i} (s_i + s_j) / d(c_i, c_j), where s_i
    is the mean Euclidean distance of cluster i's points to its centroid.

    Clusters with no members are skipped.
    """
    X = np.asarray(X, dtype=np.float64)
    C = np.asarray(centroids, dtype=np.float64)
    labels = np.asarray(labels, dtype=np.int64)
    if X.ndim != 2 or C.ndim != 2 or X.shape[1] != C.shape[1]:
        raise ValidationError(f"shape mismatch: X {X.shape}, centroids {C.shape}")
    if labels.shape != (X.shape[0],):
        raise ValidationError(f"{labels.size} labels for {X.shape[0]} rows")
    if labels.size and (labels.min() < 0 or labels.max() >= C.shape[0]):
        raise ValidationError(f"labels must be in 0..{C.shape[0] - 1}")
    present = np.unique(labels)
    if present.size < 2:
        raise ValidationError("Davies-Bouldin needs at least 2 non-empty clusters")
    scatter = np.array([
        np.sqrt(((X[labels == c] - C[c]) ** 2).sum(axis=1)).mean() for c in present
    ])
    Cp = C[present]
    dist = np.sqrt(((Cp[:, None, :] - Cp[None, :, :]) ** 2).sum(axis=-1))
    np.fill_diagonal(dist, np.inf)
    if np.any(dist == 0):
        i, j = map(int, np.argwhere(dist == 0)[0])
        raise DomainError(f"centroids {int(present[i])} and {int(present[j])} coincide")
    ratio = (scatter[:, None] + scatter[None, :]) / dist
    return float(ratio.max(axis=1).mean())


@dataclass
class ClusterSummary:
    cluster: int
    size: int
    top_titles: list[tuple[str, int]]
    top_features: list[tuple[str, float]]

    def to_dict(self):
        return {
            "cluster": self.cluster,
            "size": self.size,
            "top_titles": [[t, c] for t, c in self.top_titles],
            "top_features": [[f, v] for f, v in self.top_features],
        }


@dataclass
class ClusterReport:
    K: int
    mode: str
    davies_bouldin: float
    clusters: list[ClusterSummary]
    pca_coords: np.ndarray = field(repr=False)
    pca_explained_ratio: list[float] = field(default_factory=list)
    labels: np.ndarray | None = field(default=None, repr=False)

    @property
    def sizes(self) -> list[int]:
        return [c.size for c in self.clusters]

    def to_dict(self):
        return {
            "K": self.K,
            "mode": self.mode,
            "davies_bouldin": self.davies_bouldin,
            "sizes": self.sizes,
            "pca_explained_ratio": self.pca_explained_ratio,
            "clusters": [c.to_dict() for c in self.clusters],
        }

    def coords_to_csv(self, path):
        rows = self.pca_coords
        lab = self.labels if self.labels is not None else np.full(len(rows), -1)
        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["row", "cluster", "pc1", "pc2", "pc3"])
            for i, (c, xyz) in enumerate(zip(lab.tolist(), rows.tolist())):
                w.writerow([i, c, *(repr(float(v)) for v in xyz)])

    def to_svg(self, path, max_points=2000, title=None):
        write_cluster_svg(path, self.pca_coords[:, :2], self.labels, max_points=max_points,
                          title=title or f"{self.mode} K={self.K}")


def _top_titles(members: Sequence[str], n=5):
    counts: dict[str, int] = {}
    for t in members:
        counts[t] = counts.get(t, 0) + 1
    return sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))[:n]


def cluster_report(X, labels, centroids, titles: Sequence[str], mode: str,
                   feature_names: Sequence[str] | None = None, n_components=3) -> ClusterReport:
    """Per-cluster diagnostics plus PCA coordinates for plotting.

    ``tfidf`` mode lists the five largest centroid entries by feature name;
    ``embedding`` mode lists the first five centroid dimensions.
    """
    if mode not in CLUSTER_MODES:
        raise ValidationError(f"unknown cluster report mode {mode!r}; expected one of {CLUSTER_MODES}")
    X = np.asarray(X, dtype=np.float64)
    C = np.asarray(centroids, dtype=np.float64)
    labels = np.asarray(labels, dtype=np.int64)
    if len(titles) != X.shape[0] or labels.shape != (X.shape[0],):
        raise ValidationError(f"{len(titles)} titles and {labels.size} labels for {X.shape[0]} rows")
    if feature_names is None:
        prefix = "f" if mode == "tfidf" else "dim_"
        feature_names = [f"{prefix}{j}" for j in range(C.shape[1])]
    if len(feature_names) != C.shape[1]:
        raise ValidationError(f"{len(feature_names)} feature names for {C.shape[1]} columns")
    K = C.shape[0]
    db = davies_bouldin(X, labels, C)

    titles = list(titles)
    clusters = []
    for c in range(K):
        idx = np.flatnonzero(labels == c)
        top = _top_titles([titles[i] for i in idx])
        if mode == "tfidf":
            order = np.lexsort((np.arange(C.shape[1]), -C[c]))[:5]
        else:
            order = np.arange(min(5, C.shape[1]))
        feats = [(str(feature_names[j]), float(C[c, j])) for j in order]
        clusters.append(ClusterSummary(c, int(idx.size), top, feats))

    k = min(n_components, X.shape[1], X.shape[0] - 1)
    pca = pca_fit(X, k)
    coords = pca_transform(pca, X)
    if k < n_components:
        coords = np.hstack([coords, np.zeros((X.shape[0], n_components - k))])
    ratio = [float(v) for v in pca.explained_variance_ratio]
    return ClusterReport(K, mode, db, clusters, coords, ratio, labels)


_PALETTE = (
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2",
    "#7f7f7f", "#bcbd22", "#17becf", "#393b79", "#637939", "#8c6d31", "#843c39",
    "#7b4173", "#3182bd", "#e6550d", "#31a354", "#756bb1", "#636363",
)


def write_cluster_svg(path, coords2, labels, max_points=2000, title="", size=480):
    """Scatter of 2-D coordinates colored by cluster; evenly subsampled to at
    most ``max_points`` so the file stays small. Output bytes depend only on
    the inputs."""
    P = np.asarray(coords2, dtype=np.float64)[:, :2]
    lab = np.zeros(len(P), np.int64) if labels is None else np.asarray(labels, np.int64)
    if len(P) > max_points:
        keep = np.unique(np.linspace(0, len(P) - 1, max_points).round().astype(np.int64))
        P, lab = P[keep], lab[keep]
    pad = 20.0
    lo, hi = P.min(axis=0), P.max(axis=0)
    span = np.where(hi - lo > 0, hi - lo, 1.0)
    xy = pad + (P - lo) / span * (size - 2 * pad)
    xy[:, 1] = size - xy[:, 1]
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}">',
        f'<rect width="{size}" height="{size}" fill="white"/>',
    ]
    if title:
        parts.append(f'<text x="{pad:.0f}" y="14" font-size="12" font-family="sans-serif">{_xml(title)}</text>')
    for (x, y), c in zip(xy.tolist(), lab.tolist()):
        parts.append(f'<circle cx="{x:.2f}" cy="{y:.2f}" r="1.6" fill="{_PALETTE[c % len(_PALETTE)]}"/>')
    parts.append("</svg>")
    Path(path).write_text("\n".join(parts) + "\n", encoding="utf-8")


def _xml(text: str) -> str:
    return text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


# ---------------------------------------------------------------------------
# report containers


@dataclass
class EvaluationReport:
    task: str
    metrics: dict[str, float]
    importances: list[Importance] = field(default_factory=list)
    confusion: ConfusionTopK | None = None
    config: dict = field(default_factory=dict)
    class_names: list[str] | None = None

    def to_dict(self):
        return {
            "task": self.task,
            "metrics": dict(self.metrics),
            "importances": [imp.to_dict() for imp in self.importances],
            "confusion": None if self.confusion is None else self.confusion.to_dict(self.class_names),
            "config": self.config,
        }

    def to_json(self, path):
        Path(path).write_text(json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n", encoding="utf-8")

    def importances_to_csv(self, path):
        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["rank", "feature", "mean_drop", "sd"])
            for r, imp in enumerate(rank_importances(self.importances), 1):
                w.writerow([r, imp.name, repr(imp.mean), repr(imp.sd)])
