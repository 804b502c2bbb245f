"""Model implementations and their JSON persistence."""

import json
from pathlib import Path

from .kmeans import KMeansModel, kmeans_assign, kmeans_fit
from .knn import KnnModel, kneighbors, knn_fit, knn_predict, predict_from_neighbors
from .logreg import LogRegModel, logreg_fit, logreg_predict, logreg_proba
from .ridge import RidgeModel, ridge_fit, ridge_predict
from .svr import SvrModel, svr_fit, svr_predict
from ..errors import ValidationError

SCHEMA_VERSION = 1

_MODEL_TYPES = {
    "ridge": RidgeModel,
    "knn": KnnModel,
    "svr": SvrModel,
    "logreg": LogRegModel,
    "kmeans": KMeansModel,
}
_TYPE_NAMES = {cls: name for name, cls in _MODEL_TYPES.items()}


def model_to_dict(model, **kwargs):
    name = _TYPE_NAMES[type(model)]
    return {"schema_version": SCHEMA_VERSION, "model": name, "params": model.to_dict(**kwargs)}


def model_from_dict(doc, **kwargs):
    version = doc.get("schema_version")
    if version != SCHEMA_VERSION:
        raise ValidationError(f"unsupported model schema_version {version!r}")
    if doc.get("model") not in _MODEL_TYPES:
        raise ValidationError(f"unknown model type {doc.get('model')!r}")
    return _MODEL_TYPES[doc["model"]].from_dict(doc["params"], **kwargs)


def save_model(model, path, **kwargs):
    Path(path).write_text(json.dumps(model_to_dict(model, **kwargs), sort_keys=True) + "\n")


def load_model(path, **kwargs):
    return model_from_dict(json.loads(Path(path).read_text()), **kwargs)


__all__ = [
    "KMeansModel", "KnnModel", "LogRegModel", "RidgeModel", "SvrModel",
    "kmeans_assign", "kmeans_fit", "kneighbors", "knn_fit", "knn_predict",
    "logreg_fit", "logreg_predict", "logreg_proba", "predict_from_neighbors",
    "ridge_fit", "ridge_predict", "svr_fit", "svr_predict",
    "load_model", "save_model", "model_from_dict", "model_to_dict",
]
