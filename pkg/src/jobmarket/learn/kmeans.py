"""K-means with k-means++ seeding and Lloyd iterations."""

from dataclasses import dataclass, field

import numpy as np

from ..errors import StateError, ValidationError

_CHUNK = 4096


@dataclass
class KMeansModel:
    centroids: np.ndarray
    K: int
    inertia: float
    n_iter: int
    seed: int
    inertia_history: list = field(default_factory=list)

    def to_dict(self):
        return {"K": int(self.K), "centroids": self.centroids.tolist(), "inertia": float(self.inertia),
                "n_iter": int(self.n_iter), "seed": int(self.seed),
                "inertia_history": [float(v) for v in self.inertia_history]}

    @classmethod
    def from_dict(cls, doc):
        return cls(np.asarray(doc["centroids"], float), int(doc["K"]), float(doc["inertia"]),
                   int(doc["n_iter"]), int(doc["seed"]), list(doc.get("inertia_history", [])))


def _sq_dists(X, C):
    """Squared distances (n, K); computed in chunks via the dot-product expansion."""
    c_sq = np.einsum("ij,ij->i", C, C)
    out = np.empty((X.shape[0], C.shape[0]))
    for s in range(0, X.shape[0], _CHUNK):
        x = X[s : s + _CHUNK]
        d = np.einsum("ij,ij->i", x, x)[:, None] - 2.0 * (x @ C.T) + c_sq[None, :]
        np.maximum(d, 0.0, out=d)
        out[s : s + _CHUNK] = d
    return out


def _inertia(X, C, labels):
    diff = X - C[labels]
    return float(np.einsum("ij,ij->", diff, diff))


def kmeans_plusplus(X, K, rng):
    n = X.shape[0]
    chosen = [int(rng.integers(n))]
    closest = ((X - X[chosen[0]]) ** 2).sum(axis=1)
    for _ in range(1, K):
        total = closest.sum()
        if total > 0:
            idx = int(rng.choice(n, p=closest / total))
        else:
            # every point coincides with a centre already: take the first unused row
            used = set(chosen)
            idx = next(i for i in range(n) if i not in used)
        chosen.append(idx)
        np.minimum(closest, ((X - X[idx]) ** 2).sum(axis=1), out=closest)
    return X[chosen].copy()


def _update(X, labels, K, C_old):
    sums = np.zeros((K, X.shape[1]))
    np.add.at(sums, labels, X)
    counts = np.bincount(labels, minlength=K)
    C = C_old.copy()
    nonempty = counts > 0
    C[nonempty] = sums[nonempty] / counts[nonempty, None]
    empty = np.flatnonzero(~nonempty)
    if len(empty):
        # move each empty centroid onto the point farthest from its own centroid
        dist = ((X - C[labels]) ** 2).sum(axis=1)
        order = np.lexsort((np.arange(len(dist)), -dist))
        for j, idx in zip(empty, order):
            C[j] = X[idx]
    return C


def kmeans_fit(X, K, seed=0, max_iter=300, tol=1e-6) -> KMeansModel:
    """Cluster rows of ``X`` into ``K`` groups.

    ``inertia_history[t]`` is the inertia after the ``t``-th assignment step;
    the last entry belongs to the returned centroids. Iteration stops once no
    centroid moves by ``tol`` or more.
    """
    X = np.asarray(X, dtype=np.float64)
    n = X.shape[0]
    if K < 2:
        raise ValidationError(f"K must be >= 2, got {K}")
    if K > n:
        raise ValidationError(f"K={K} exceeds the number of rows ({n})")
    rng = np.random.default_rng(seed)
    C = kmeans_plusplus(X, K, rng)
    history = []
    n_iter = 0
    for n_iter in range(1, max_iter + 1):
        labels = _sq_dists(X, C).argmin(axis=1)
        history.append(_inertia(X, C, labels))
        C_new = _update(X, labels, K, C)
        shift = float(np.sqrt(((C_new - C) ** 2).sum(axis=1)).max())
        C = C_new
        if shift < tol:
            break
    labels = _sq_dists(X, C).argmin(axis=1)
    inertia = _inertia(X, C, labels)
    history.append(inertia)
    return KMeansModel(C, int(K), inertia, n_iter, int(seed), history)


def kmeans_assign(model: KMeansModel, X):
    if model is None:
        raise StateError("K-means model is not fitted")
    return _sq_dists(np.asarray(X, dtype=np.float64), model.centroids).argmin(axis=1)
