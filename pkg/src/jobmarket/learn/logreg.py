"""Multinomial logistic regression fitted by full-batch gradient descent
with a backtracking (Armijo) line search."""

import warnings
from dataclasses import dataclass, field

import numpy as np

from ..errors import ValidationError

ARMIJO_C = 1e-4
MAX_BACKTRACKS = 60


@dataclass
class LogRegModel:
    weights: np.ndarray  # (n_classes, n_features)
    bias: np.ndarray  # (n_classes,)
    C: float
    n_iter: int = 0
    converged: bool = False
    status: str = "ok"
    objective_history: list = field(default_factory=list, repr=False)

    @property
    def n_classes(self):
        return self.weights.shape[0]

    def decision_function(self, X):
        return np.asarray(X, dtype=np.float64) @ self.weights.T + self.bias

    def predict_proba(self, X):
        return softmax(self.decision_function(X))

    def predict(self, X):
        return self.predict_proba(X).argmax(axis=1)

    def to_dict(self):
        return {"C": float(self.C), "weights": self.weights.tolist(), "bias": self.bias.tolist(),
                "n_iter": int(self.n_iter), "converged": bool(self.converged), "status": self.status}

    @classmethod
    def from_dict(cls, doc):
        return cls(np.asarray(doc["weights"], float), np.asarray(doc["bias"], float), float(doc["C"]),
                   int(doc["n_iter"]), bool(doc["converged"]), doc["status"])


def softmax(logits):
    z = logits - logits.max(axis=1, keepdims=True)
    np.exp(z, out=z)
    z /= z.sum(axis=1, keepdims=True)
    return z


def _log_softmax(logits):
    m = logits.max(axis=1, keepdims=True)
    return logits - m - np.log(np.exp(logits - m).sum(axis=1, keepdims=True))


def objective(W, b, X, labels, C):
    """Mean softmax cross-entropy plus ``||W||^2 / (2 C n)``; minimizing it is
    equivalent to minimizing the summed cross-entropy plus ``||W||^2 / (2C)``."""
    n = X.shape[0]
    logp = _log_softmax(X @ W.T + b)
    return float(-logp[np.arange(n), labels].sum() / n + (W * W).sum() / (2.0 * C * n))


def gradient(W, b, X, labels, C):
    n = X.shape[0]
    P = softmax(X @ W.T + b)
    P[np.arange(n), labels] -= 1.0
    gW = (P.T @ X + W / C) / n
    gb = P.sum(axis=0) / n
    return gW, gb


def logreg_fit(X, labels, C=1.0, tol=1e-5, max_iter=300, n_classes=None) -> LogRegModel:
    """Fit by gradient descent until ``||grad|| < tol`` or ``max_iter``.

    Trial steps use the Barzilai-Borwein length of the previous iteration and
    are halved until the Armijo condition holds, so the objective never
    increases between accepted iterates. Hitting ``max_iter`` sets
    ``status="max_iter"`` and emits a warning; it is not an error.
    """
    X = np.asarray(X, dtype=np.float64)
    labels = np.asarray(labels, dtype=np.int64)
    if C <= 0:
        raise ValidationError(f"C must be > 0, got {C}")
    if labels.min() < 0:
        raise ValidationError("labels must be dense non-negative codes")
    K = int(n_classes if n_classes is not None else labels.max() + 1)
    if labels.max() >= K:
        raise ValidationError(f"label {labels.max()} out of range for {K} classes")
    n, d = X.shape
    W = np.zeros((K, d))
    counts = np.bincount(labels, minlength=K).astype(float)
    b = np.log(np.maximum(counts, 0.5) / n)
    b -= b.mean()

    f = objective(W, b, X, labels, C)
    gW, gb = gradient(W, b, X, labels, C)
    history = [f]
    step = 1.0
    converged = False
    it = 0
    for it in range(1, max_iter + 1):
        gnorm2 = float((gW * gW).sum() + gb @ gb)
        if np.sqrt(gnorm2) < tol:
            converged = True
            it -= 1
            break
        t = step
        for _ in range(MAX_BACKTRACKS):
            W_new = W - t * gW
            b_new = b - t * gb
            f_new = objective(W_new, b_new, X, labels, C)
            if f_new <= f - ARMIJO_C * t * gnorm2:
                break
            t *= 0.5
        else:
            # no decrease possible at machine precision: treat as converged
            converged = True
            break
        gW_new, gb_new = gradient(W_new, b_new, X, labels, C)
        s = np.concatenate([(W_new - W).ravel(), b_new - b])
        yv = np.concatenate([(gW_new - gW).ravel(), gb_new - gb])
        sy = float(s @ yv)
        step = float(s @ s) / sy if sy > 0 else t * 2.0
        W, b, f, gW, gb = W_new, b_new, f_new, gW_new, gb_new
        history.append(f)
    else:
        gnorm = np.sqrt(float((gW * gW).sum() + gb @ gb))
        converged = gnorm < tol
    status = "ok" if converged else "max_iter"
    if not converged:
        warnings.warn(f"logistic regression stopped at max_iter={max_iter} before reaching tol={tol}",
                      RuntimeWarning, stacklevel=2)
    return LogRegModel(W, b, float(C), it, converged, status, history)


def logreg_predict(model: LogRegModel, X):
    return model.predict(X)


def logreg_proba(model: LogRegModel, X):
    return model.predict_proba(X)
