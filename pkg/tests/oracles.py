"""Naive reference implementations used as independent oracles.

Written with plain loops and the textbook formulas where practical (the
ridge oracle iterates with numpy); nothing here imports the package.
"""

import math

import numpy as np


def rmse(y, p):
    return math.sqrt(sum((a - b) ** 2 for a, b in zip(y, p)) / len(y))


def nrmse(y, p):
    return rmse(y, p) / (max(y) - min(y))


def macro_f1(y, p, n_classes):
    total = 0.0
    for c in range(n_classes):
        tp = sum(1 for a, b in zip(y, p) if a == c and b == c)
        fp = sum(1 for a, b in zip(y, p) if a != c and b == c)
        fn = sum(1 for a, b in zip(y, p) if a == c and b != c)
        prec = tp / (tp + fp) if tp + fp else 0.0
        rec = tp / (tp + fn) if tp + fn else 0.0
        total += 2 * prec * rec / (prec + rec) if prec + rec else 0.0
    return total / n_classes


def confusion_topk(y, p, k):
    counts = {}
    for a in y:
        counts[a] = counts.get(a, 0) + 1
    top = sorted(counts, key=lambda c: (-counts[c], c))[:k]
    labels = sorted(top)
    m = [[0] * len(labels) for _ in labels]
    kept = 0
    for a, b in zip(y, p):
        if a in labels and b in labels:
            m[labels.index(a)][labels.index(b)] += 1
            kept += 1
    return m, labels, len(y) - kept


def davies_bouldin(X, labels, centroids):
    K = len(centroids)
    present = sorted(set(labels))

    def dist(u, v):
        return math.sqrt(sum((a - b) ** 2 for a, b in zip(u, v)))

    s = {}
    for c in present:
        members = [x for x, l in zip(X, labels) if l == c]
        s[c] = sum(dist(x, centroids[c]) for x in members) / len(members)
    total = 0.0
    for i in present:
        worst = max((s[i] + s[j]) / dist(centroids[i], centroids[j]) for j in present if j != i)
        total += worst
    assert K >= len(present)
    return total / len(present)


def tfidf(train_docs, docs, max_features):
    df = {}
    for d in train_docs:
        for t in set(d):
            df[t] = df.get(t, 0) + 1
    vocab = sorted(sorted(df, key=lambda t: (-df[t], t))[:max_features])
    n = len(train_docs)
    rows = []
    for d in docs:
        w = []
        for t in vocab:
            tf = sum(1 for x in d if x == t)
            w.append(tf * (math.log((1 + n) / (1 + df[t])) + 1))
        norm = math.sqrt(sum(v * v for v in w))
        rows.append([v / norm if norm else 0.0 for v in w])
    return vocab, rows


def ridge_gd(X, y, alpha, tol=1e-13, max_iter=200000):
    """Plain gradient descent on the centered ridge objective; the intercept
    is recovered from the means afterwards."""
    X = np.asarray(X, float)
    y = np.asarray(y, float)
    mx, my = X.mean(axis=0), y.mean()
    Xc, yc = X - mx, y - my
    H = Xc.T @ Xc + alpha * np.eye(X.shape[1])
    step = 1.0 / np.linalg.norm(H, 2)
    w = np.zeros(X.shape[1])
    for _ in range(max_iter):
        g = Xc.T @ (Xc @ w - yc) + alpha * w
        if np.abs(g).max() < tol:
            break
        w -= step * g
    return w, my - mx @ w


def knn(X, y, Q, k, task):
    out = []
    for q in Q:
        d = sorted((sum((a - b) ** 2 for a, b in zip(x, q)), i) for i, x in enumerate(X))
        idx = [i for _, i in d[:k]]
        if task == "regression":
            out.append(sum(y[i] for i in idx) / k)
        else:
            votes = {}
            for i in idx:
                votes[y[i]] = votes.get(y[i], 0) + 1
            best = max(votes.values())
            out.append(min(c for c, v in votes.items() if v == best))
    return out


def split_violations(labels, split):
    """Contract violations of a stratified 70/15/15 split (empty when valid).

    Classes with fewer than 3 rows go wholly to train; otherwise dev and test
    each get round-half-up(0.15 n_c) rows and every part stays within one row
    of its exact share.
    """
    bad = []
    n = len(labels)
    parts = [list(p) for p in (split.train, split.dev, split.test)]
    seen = [i for p in parts for i in p]
    if sorted(set(seen)) != list(range(n)):
        bad.append("not a cover")
    if len(seen) != n:
        bad.append("not disjoint")
    for c in sorted(set(labels)):
        n_c = sum(1 for v in labels if v == c)
        sizes = [sum(1 for i in p if labels[i] == c) for p in parts]
        if n_c < 3:
            if sizes != [n_c, 0, 0]:
                bad.append(f"small class {c}")
            continue
        share = math.floor(0.15 * n_c + 0.5)
        if sizes[1] != share or sizes[2] != share:
            bad.append(f"class {c} dev/test counts {sizes}")
        for got, r in zip(sizes, (0.70, 0.15, 0.15)):
            if abs(got - r * n_c) > 1 + 1e-9:
                bad.append(f"class {c} off by more than one row")
    return bad
