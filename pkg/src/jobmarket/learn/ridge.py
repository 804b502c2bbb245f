"""Closed-form ridge regression with an unpenalized intercept."""

from dataclasses import dataclass

import numpy as np
from scipy import linalg

from ..errors import NumericalError, ValidationError


@dataclass
class RidgeModel:
    coef: np.ndarray
    intercept: float
    alpha: float

    def predict(self, X):
        return np.asarray(X, dtype=np.float64) @ self.coef + self.intercept

    def to_dict(self):
        return {"alpha": float(self.alpha), "coef": self.coef.tolist(), "intercept": float(self.intercept)}

    @classmethod
    def from_dict(cls, doc):
        return cls(np.asarray(doc["coef"], float), float(doc["intercept"]), float(doc["alpha"]))


def ridge_fit(X, y, alpha=1.0) -> RidgeModel:
    r"""Solve :math:`(\tilde X^\top \tilde X + \alpha I) w = \tilde X^\top \tilde y` on
    column-centered data; the intercept is recovered from the means.

    The system is symmetric positive definite for ``alpha > 0`` and is solved by
    Cholesky factorization.
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if X.ndim != 2 or X.shape[0] != y.shape[0]:
        raise ValidationError(f"shape mismatch: X {X.shape}, y {y.shape}")
    if X.shape[0] < 2:
        raise ValidationError("ridge needs at least 2 rows")
    if alpha < 0:
        raise ValidationError(f"alpha must be >= 0, got {alpha}")
    x_mean = X.mean(axis=0)
    y_mean = y.mean()
    Xc = X - x_mean
    yc = y - y_mean
    gram = Xc.T @ Xc
    gram[np.diag_indices_from(gram)] += alpha
    rhs = Xc.T @ yc
    if alpha == 0 and np.linalg.matrix_rank(gram) < gram.shape[0]:
        raise NumericalError("normal equations are singular with alpha=0; use alpha > 0")
    try:
        factor = linalg.cho_factor(gram, lower=False, check_finite=True)
        coef = linalg.cho_solve(factor, rhs)
    except (linalg.LinAlgError, ValueError) as exc:
        raise NumericalError(f"ridge solve failed ({exc}); use alpha > 0") from exc
    intercept = float(y_mean - x_mean @ coef)
    return RidgeModel(coef, intercept, float(alpha))


def ridge_predict(model: RidgeModel, X):
    return model.predict(X)
