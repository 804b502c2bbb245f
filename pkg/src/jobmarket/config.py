"""Pipeline configuration: one JSON document, validated against ``CONFIG_SCHEMA``.

Every random stream is derived from the master ``seed`` by a fixed offset
(see ``SEED_OFFSETS``); the corpus itself uses the master seed unchanged.
"""

from __future__ import annotations

import copy
import hashlib
import json
from dataclasses import dataclass
from pathlib import Path

import jsonschema

from .errors import ValidationError
from .synth import GeneratorProfile

FEATURE_SETS = ("structured", "embed", "tfidf", "combined")
CLUSTER_FEATURE_SETS = ("tfidf", "embed")

SEED_OFFSETS = {
    "split": 1,
    "embed": 2,
    "perturb": 3,
    "svr": 4,
    "cluster": 5,
    "importance": 6,
    "probe": 7,
}

DEFAULTS = {
    "seed": 42,
    "out_dir": "runs/default",
    "leakage_mode": True,
    "generator": {
        "n_listings": 20000,
        "n_titles": 60,
        "n_companies": 2000,
        "skill_pool_per_title": 12,
        "salary_noise_sd": 500.0,
        "geo_cell_deg": 10.0,
    },
    "feature_sets": {
        "regression": list(FEATURE_SETS),
        "classification": list(FEATURE_SETS),
    },
    "grids": {
        "alpha": [0.01, 0.1, 1.0, 10.0],
        "C": [0.1, 1.0, 10.0],
        "k": [5, 15, 25],
    },
    "svr": {"epsilon": 500.0, "reg_strength": 1e-4, "epochs": 60, "learning_rate": 0.5, "batch_size": 64},
    "logreg": {"tol": 1e-5, "max_iter": 300},
    "text": {"tfidf_max_features": 300, "embed_dim": 384, "d_fused": 128, "perturb_sigma": 0.01},
    "clustering": {"k_values": [10, 25, 40], "feature_sets": list(CLUSTER_FEATURE_SETS),
                   "max_iter": 300, "tol": 1e-6},
    "importance": {"repeats": 5, "confusion_top_k": 10},
}

_pos_int = {"type": "integer", "minimum": 1}
_pos_num = {"type": "number", "exclusiveMinimum": 0}
_nonneg_num = {"type": "number", "minimum": 0}


def _obj(props, required=()):
    return {"type": "object", "properties": props, "required": list(required), "additionalProperties": False}


def _list(item, enum=None):
    inner = dict(item)
    if enum:
        inner["enum"] = list(enum)
    return {"type": "array", "items": inner, "minItems": 1, "uniqueItems": True}


CONFIG_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "jobmarket pipeline config",
    **_obj({
        "seed": {"type": "integer", "minimum": 0, "maximum": 2**64 - 1},
        "out_dir": {"type": "string", "minLength": 1},
        "leakage_mode": {"type": "boolean"},
        "generator": _obj({
            "n_listings": _pos_int,
            "n_titles": {"type": "integer", "minimum": 40},
            "n_companies": _pos_int,
            "skill_pool_per_title": _pos_int,
            "salary_noise_sd": _nonneg_num,
            "geo_cell_deg": _pos_num,
        }),
        "feature_sets": _obj({
            "regression": _list({"type": "string"}, FEATURE_SETS),
            "classification": _list({"type": "string"}, FEATURE_SETS),
        }),
        "grids": _obj({
            "alpha": _list(_nonneg_num),
            "C": _list(_pos_num),
            "k": _list(_pos_int),
        }),
        "svr": _obj({
            "epsilon": _nonneg_num,
            "reg_strength": _nonneg_num,
            "epochs": _pos_int,
            "learning_rate": _pos_num,
            "batch_size": _pos_int,
        }),
        "logreg": _obj({"tol": _pos_num, "max_iter": _pos_int}),
        "text": _obj({
            "tfidf_max_features": _pos_int,
            "embed_dim": _pos_int,
            "d_fused": _pos_int,
            "perturb_sigma": _nonneg_num,
        }),
        "clustering": _obj({
            "k_values": _list({"type": "integer", "minimum": 2}),
            "feature_sets": _list({"type": "string"}, CLUSTER_FEATURE_SETS),
            "max_iter": _pos_int,
            "tol": _nonneg_num,
        }),
        "importance": _obj({"repeats": _pos_int, "confusion_top_k": _pos_int}),
    }),
}


def _merge(base, override):
    out = copy.deepcopy(base)
    for key, val in override.items():
        if isinstance(val, dict) and isinstance(out.get(key), dict):
            out[key] = _merge(out[key], val)
        else:
            out[key] = copy.deepcopy(val)
    return out


@dataclass(frozen=True)
class PipelineConfig:
    """Validated, fully-resolved configuration (defaults filled in)."""

    doc: dict

    @classmethod
    def from_dict(cls, overrides: dict | None = None) -> PipelineConfig:
        doc = _merge(DEFAULTS, overrides or {})
        validator = jsonschema.Draft202012Validator(CONFIG_SCHEMA)
        errors = sorted(validator.iter_errors(doc), key=lambda e: list(e.absolute_path))
        if errors:
            err = errors[0]
            where = "/".join(str(p) for p in err.absolute_path) or "<root>"
            raise ValidationError(f"invalid config at {where}: {err.message}")
        if doc["text"]["d_fused"] > 2 * doc["text"]["embed_dim"]:
            raise ValidationError("invalid config at text/d_fused: exceeds 2 * embed_dim")
        return cls(doc)

    @classmethod
    def load(cls, path=None, **overrides) -> PipelineConfig:
        """Read a JSON config file (optional) and apply keyword overrides
        such as ``seed`` or ``out_dir``; ``None`` values are ignored."""
        doc = {}
        if path is not None:
            try:
                doc = json.loads(Path(path).read_text(encoding="utf-8"))
            except FileNotFoundError:
                raise ValidationError(f"config file not found: {path}") from None
            except json.JSONDecodeError as exc:
                raise ValidationError(f"config file {path} is not valid JSON: {exc}") from None
            if not isinstance(doc, dict):
                raise ValidationError(f"config file {path} must hold a JSON object")
        doc = _merge(doc, {k: v for k, v in overrides.items() if v is not None})
        return cls.from_dict(doc)

    def __getitem__(self, key):
        return self.doc[key]

    @property
    def seed(self) -> int:
        return self.doc["seed"]

    @property
    def out_dir(self) -> Path:
        return Path(self.doc["out_dir"])

    @property
    def leakage_mode(self) -> bool:
        return self.doc["leakage_mode"]

    def stage_seed(self, name: str) -> int:
        return (self.seed + SEED_OFFSETS[name]) % 2**64

    def profile(self) -> GeneratorProfile:
        return GeneratorProfile(seed=self.seed, **self.doc["generator"])

    def to_dict(self) -> dict:
        return copy.deepcopy(self.doc)

    def fingerprint(self) -> str:
        """Hash of everything that affects results (``out_dir`` excluded)."""
        doc = {k: v for k, v in self.doc.items() if k != "out_dir"}
        blob = json.dumps(doc, sort_keys=True, separators=(",", ":")).encode()
        return hashlib.sha256(blob).hexdigest()

    def dump(self, path):
        Path(path).write_text(json.dumps(self.doc, indent=2, sort_keys=True) + "\n", encoding="utf-8")
