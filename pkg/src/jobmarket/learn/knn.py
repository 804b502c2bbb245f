"""Brute-force k-nearest-neighbours for regression and classification."""

from dataclasses import dataclass

import numpy as np

from ..errors import StateError, ValidationError

_CHUNK = 1024


@dataclass
class KnnModel:
    X: np.ndarray
    y: np.ndarray
    k: int
    task: str  # "regression" | "classification"
    n_classes: int = 0

    def to_dict(self, include_data=True):
        doc = {"k": self.k, "task": self.task, "n_classes": self.n_classes,
               "n_train": int(self.X.shape[0]), "n_features": int(self.X.shape[1])}
        if include_data:
            doc["X"] = self.X.tolist()
            doc["y"] = self.y.tolist()
        return doc

    @classmethod
    def from_dict(cls, doc, X=None, y=None):
        X = np.asarray(doc["X"] if X is None else X, float)
        y = np.asarray(doc["y"] if y is None else y)
        return cls(X, y, int(doc["k"]), doc["task"], int(doc.get("n_classes", 0)))


def knn_fit(X, y, k=5, task="regression", n_classes=None) -> KnnModel:
    X = np.asarray(X, dtype=np.float64)
    if task not in ("regression", "classification"):
        raise ValidationError(f"unknown KNN task {task!r}")
    if k < 1 or k > X.shape[0]:
        raise ValidationError(f"k={k} must be in [1, n_train={X.shape[0]}]")
    if task == "classification":
        y = np.asarray(y, dtype=np.int64)
        n_classes = int(n_classes if n_classes is not None else y.max() + 1)
    else:
        y = np.asarray(y, dtype=np.float64)
        n_classes = 0
    return KnnModel(X, y, int(k), task, n_classes)


def kneighbors(model: KnnModel, X_query, k=None):
    """Indices of the ``k`` nearest training rows per query, ordered by
    (squared Euclidean distance, training index)."""
    if model is None:
        raise StateError("KNN model is not fitted")
    k = model.k if k is None else k
    n_train = model.X.shape[0]
    if k < 1 or k > n_train:
        raise ValidationError(f"k={k} must be in [1, n_train={n_train}]")
    Q = np.asarray(X_query, dtype=np.float64)
    train_sq = np.einsum("ij,ij->i", model.X, model.X)
    out = np.empty((Q.shape[0], k), dtype=np.int64)
    for start in range(0, Q.shape[0], _CHUNK):
        q = Q[start : start + _CHUNK]
        d2 = train_sq[None, :] - 2.0 * (q @ model.X.T) + np.einsum("ij,ij->i", q, q)[:, None]
        if k < n_train:
            part = np.argpartition(d2, k - 1, axis=1)[:, :k]
        else:
            part = np.broadcast_to(np.arange(n_train), d2.shape).copy()
        rows = np.arange(q.shape[0])[:, None]
        kth = d2[rows, part].max(axis=1)
        n_at_or_below = (d2 <= kth[:, None]).sum(axis=1)
        for r in range(q.shape[0]):
            if n_at_or_below[r] == k:
                cand = part[r]
            else:
                # ties straddle the k-th position: widen to every tied index
                cand = np.flatnonzero(d2[r] <= kth[r])
            order = np.lexsort((cand, d2[r, cand]))[:k]
            out[start + r] = cand[order]
    return out


def predict_from_neighbors(model: KnnModel, neighbors):
    targets = model.y[neighbors]
    if model.task == "regression":
        return targets.mean(axis=1)
    counts = np.zeros((targets.shape[0], model.n_classes), dtype=np.int64)
    rows = np.repeat(np.arange(targets.shape[0]), targets.shape[1])
    np.add.at(counts, (rows, targets.ravel()), 1)
    # argmax returns the first maximum, i.e. the smallest label on ties
    return counts.argmax(axis=1)


def knn_predict(model: KnnModel, X_query):
    return predict_from_neighbors(model, kneighbors(model, X_query))
