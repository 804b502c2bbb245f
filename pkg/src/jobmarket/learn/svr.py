"""Linear epsilon-insensitive support vector regression trained by seeded
minibatch subgradient descent."""

from dataclasses import dataclass, field

import numpy as np

from ..errors import NumericalError, ValidationError


@dataclass
class SvrModel:
    coef: np.ndarray
    intercept: float
    epsilon: float
    reg_strength: float
    epochs: int
    learning_rate: float
    batch_size: int
    seed: int
    loss_history: list = field(default_factory=list, repr=False)

    def predict(self, X):
        return np.asarray(X, dtype=np.float64) @ self.coef + self.intercept

    def to_dict(self):
        return {
            "coef": self.coef.tolist(), "intercept": float(self.intercept),
            "epsilon": float(self.epsilon), "reg_strength": float(self.reg_strength),
            "epochs": int(self.epochs), "learning_rate": float(self.learning_rate),
            "batch_size": int(self.batch_size), "seed": int(self.seed),
        }

    @classmethod
    def from_dict(cls, doc):
        return cls(np.asarray(doc["coef"], float), float(doc["intercept"]), float(doc["epsilon"]),
                   float(doc["reg_strength"]), int(doc["epochs"]), float(doc["learning_rate"]),
                   int(doc["batch_size"]), int(doc["seed"]))


def svr_objective(coef, intercept, X, y, epsilon, reg_strength):
    r"""(1/n) sum max(0, |w.x + b - y| - eps) + lambda ||w||^2 (in the units of ``y``)."""
    resid = np.abs(X @ coef + intercept - y)
    return float(np.maximum(resid - epsilon, 0.0).mean() + reg_strength * coef @ coef)


def svr_fit(X, y, epsilon=500.0, reg_strength=1e-4, epochs=60, seed=0,
            learning_rate=0.5, batch_size=64) -> SvrModel:
    """Fit a linear SVR.

    Targets are standardized internally (``epsilon`` is rescaled with them and
    ``reg_strength`` acts on the standardized problem); the returned weights
    are in the original units. Weights start at zero and the intercept at
    ``mean(y)``. The step at epoch ``e`` is ``learning_rate / sqrt(1 + e)``;
    the returned weights average the iterates of the final epoch.
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if epsilon < 0:
        raise ValidationError(f"epsilon must be >= 0, got {epsilon}")
    if reg_strength < 0:
        raise ValidationError(f"reg_strength must be >= 0, got {reg_strength}")
    n, d = X.shape
    y_mean = y.mean()
    y_scale = y.std()
    if y_scale == 0:
        y_scale = 1.0
    t = (y - y_mean) / y_scale
    eps = epsilon / y_scale
    rng = np.random.default_rng(seed)
    w = np.zeros(d)
    b = 0.0
    history = []
    for epoch in range(epochs):
        step = learning_rate / np.sqrt(1.0 + epoch)
        w_sum = np.zeros(d)
        b_sum = 0.0
        n_batches = 0
        order = rng.permutation(n)
        for start in range(0, n, batch_size):
            idx = order[start : start + batch_size]
            xb = X[idx]
            r = xb @ w + b - t[idx]
            g = np.where(r > eps, 1.0, np.where(r < -eps, -1.0, 0.0))
            grad_w = xb.T @ g / len(idx) + 2.0 * reg_strength * w
            grad_b = g.mean()
            w -= step * grad_w
            b -= step * grad_b
            w_sum += w
            b_sum += b
            n_batches += 1
        loss = svr_objective(w, b, X, t, eps, reg_strength)
        if not np.isfinite(loss):
            raise NumericalError(f"SVR diverged at epoch {epoch}; use a smaller learning_rate")
        history.append(loss)
        if epoch == epochs - 1:
            w, b = w_sum / n_batches, b_sum / n_batches
    coef = w * y_scale
    intercept = float(b * y_scale + y_mean)
    return SvrModel(coef, intercept, float(epsilon), float(reg_strength), int(epochs),
                    float(learning_rate), int(batch_size), int(seed), history)


def svr_predict(model: SvrModel, X):
    return model.predict(X)
