"""Structured preprocessing: range parsing, geo binning, encoders, frequency
features, stratified splitting and numeric scaling.

Everything that is *fitted* here (encoders, frequency maps, scaler state) is
fitted on the training rows only and is immutable afterwards.
"""

from __future__ import annotations

import json
import math
import re
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import TYPE_CHECKING, Iterable, Mapping, Sequence

import numpy as np

from .errors import DomainError, ParseError, StateError, ValidationError

if TYPE_CHECKING:
    from .synth import JobListing

DROPPED_COLUMNS = ("Job Id", "Contact")

CATEGORICAL_FIELDS = {
    "country_enc": "country",
    "qualifications_enc": "qualifications",
    "work_type_enc": "work_type",
    "preference_enc": "preference",
    "job_portal_enc": "job_portal",
}

STRUCTURED_COLUMNS = (
    "exp_min",
    "exp_max",
    "exp_avg",
    "salary_min",
    "salary_max",
    "geo_region_id",
    "latitude",
    "longitude",
    "country_enc",
    "qualifications_enc",
    "work_type_enc",
    "preference_enc",
    "job_portal_enc",
    "company_freq",
    "role_freq",
    "company_size",
)
LEAKAGE_COLUMNS = ("salary_min", "salary_max")
QUANTILE_COLUMNS = ("company_freq", "role_freq", "company_size")

_EXPERIENCE_RE = re.compile(r"^\s*(\d+)\s+to\s+(\d+)\s+Years\s*$")
_SALARY_RE = re.compile(r"^\s*\$(\d+)K\s*-\s*\$(\d+)K\s*$")


def structured_columns(leakage_mode=True):
    if leakage_mode:
        return list(STRUCTURED_COLUMNS)
    return [c for c in STRUCTURED_COLUMNS if c not in LEAKAGE_COLUMNS]


# ---------------------------------------------------------------------------
# Feature matrix container


@dataclass
class FeatureMatrix:
    """Dense row-major float matrix with named columns."""

    values: np.ndarray
    columns: list[str]

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.float64)
        if self.values.ndim != 2:
            raise ValidationError(f"feature matrix must be 2-D, got shape {self.values.shape}")
        self.columns = list(self.columns)
        if self.values.shape[1] != len(self.columns):
            raise ValidationError(
                f"{self.values.shape[1]} value columns but {len(self.columns)} names"
            )

    @property
    def shape(self):
        return self.values.shape

    def __len__(self):
        return self.values.shape[0]

    def rows(self, index) -> FeatureMatrix:
        return FeatureMatrix(self.values[index], self.columns)

    def select(self, names: Sequence[str]) -> FeatureMatrix:
        pos = {c: i for i, c in enumerate(self.columns)}
        missing = [n for n in names if n not in pos]
        if missing:
            raise ValidationError(f"unknown feature column(s): {missing}")
        return FeatureMatrix(self.values[:, [pos[n] for n in names]], list(names))

    def column(self, name) -> np.ndarray:
        return self.values[:, self.columns.index(name)]

    @staticmethod
    def hstack(blocks: Sequence[FeatureMatrix]) -> FeatureMatrix:
        n = {len(b) for b in blocks}
        if len(n) != 1:
            raise ValidationError(f"cannot stack blocks with row counts {sorted(n)}")
        cols = [c for b in blocks for c in b.columns]
        if len(set(cols)) != len(cols):
            raise ValidationError("duplicate column names across stacked blocks")
        return FeatureMatrix(np.hstack([b.values for b in blocks]), cols)

    def to_csv(self, path, manifest: Mapping | None = None):
        """Write the matrix as CSV (17 significant digits, exact round trip)
        plus ``<stem>.manifest.json`` when a manifest is given."""
        path = Path(path)
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(",".join(self.columns) + "\n")
            if len(self):
                np.savetxt(fh, self.values, fmt="%.17g", delimiter=",")
        if manifest is not None:
            doc = {"columns": self.columns, "n_rows": len(self), **manifest}
            manifest_path(path).write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")

    @classmethod
    def from_csv(cls, path) -> FeatureMatrix:
        path = Path(path)
        with open(path, encoding="utf-8") as fh:
            header = fh.readline().rstrip("\n")
            columns = header.split(",") if header else []
            values = np.loadtxt(fh, delimiter=",", dtype=np.float64, ndmin=2)
        if values.size == 0:
            values = np.empty((0, len(columns)))
        return cls(values, columns)


def manifest_path(csv_path) -> Path:
    csv_path = Path(csv_path)
    return csv_path.with_name(csv_path.stem + ".manifest.json")


# ---------------------------------------------------------------------------
# Cleaning and parsing


def drop_irrelevant(listings: Iterable[JobListing]) -> list[dict]:
    """Feature view of each listing: every CSV field except the id and contact."""
    out = []
    for listing in listings:
        row = listing.to_row()
        for col in DROPPED_COLUMNS:
            row.pop(col)
        out.append(row)
    return out


def parse_experience(text: str) -> tuple[int, int, float]:
    m = _EXPERIENCE_RE.match(text)
    if m is None:
        raise ParseError(f"malformed experience text {text!r}; expected 'a to b Years'", text)
    lo, hi = int(m.group(1)), int(m.group(2))
    return lo, hi, (lo + hi) / 2


def parse_salary(text: str) -> tuple[int, int, float]:
    """``"$59K-$99K"`` -> ``(59000, 99000, 79000.0)``."""
    m = _SALARY_RE.match(text)
    if m is None:
        raise ParseError(f"malformed salary text {text!r}; expected '$xK-$yK'", text)
    lo, hi = int(m.group(1)) * 1000, int(m.group(2)) * 1000
    if lo >= hi:
        raise ParseError(f"salary range {text!r} is empty (x >= y)", text)
    return lo, hi, (lo + hi) / 2


def geo_region_id(latitude, longitude, cell_deg=10) -> int:
    if not (-90 <= latitude <= 90):
        raise DomainError(f"latitude {latitude} outside [-90, 90]")
    if not (-180 <= longitude <= 180):
        raise DomainError(f"longitude {longitude} outside [-180, 180]")
    if cell_deg <= 0 or (180 / cell_deg) != int(180 / cell_deg):
        raise ValidationError(f"cell_deg {cell_deg} must divide 180 evenly")
    n_lat = int(180 / cell_deg)
    n_lon = int(360 / cell_deg)
    row = min(math.floor((latitude + 90) / cell_deg), n_lat - 1)
    col = min(math.floor((longitude + 180) / cell_deg), n_lon - 1)
    return row * n_lon + col


# ---------------------------------------------------------------------------
# Encoders and frequency maps


@dataclass(frozen=True)
class LabelEncoder:
    """Lexicographic label codes; unseen categories map to ``len(categories)``."""

    column: str
    categories: tuple[str, ...]

    @property
    def cardinality(self):
        return len(self.categories)

    @property
    def mapping(self):
        return {c: i for i, c in enumerate(self.categories)}

    def apply(self, value) -> int:
        return self._codes.get(value, len(self.categories))

    def transform(self, values) -> np.ndarray:
        codes = self._codes
        sentinel = len(self.categories)
        return np.array([codes.get(v, sentinel) for v in values], dtype=np.int64)

    @property
    def _codes(self):
        cached = self.__dict__.get("_code_cache")
        if cached is None:
            cached = {c: i for i, c in enumerate(self.categories)}
            object.__setattr__(self, "_code_cache", cached)
        return cached

    def to_dict(self):
        return {"column": self.column, "categories": list(self.categories)}

    @classmethod
    def from_dict(cls, doc):
        return cls(doc["column"], tuple(doc["categories"]))


def fit_label_encoder(values: Iterable[str], column="") -> LabelEncoder:
    return LabelEncoder(column, tuple(sorted(set(values))))


def apply(enc: LabelEncoder, value) -> int:
    return enc.apply(value)


def frequency_feature(values: Iterable[str]) -> Counter:
    """Occurrence counts; being a Counter, lookups of unseen keys give 0."""
    return Counter(values)


# ---------------------------------------------------------------------------
# Stratified split


@dataclass(frozen=True)
class SplitIndices:
    train: np.ndarray
    dev: np.ndarray
    test: np.ndarray

    def to_dict(self):
        return {k: getattr(self, k).tolist() for k in ("train", "dev", "test")}

    @classmethod
    def from_dict(cls, doc):
        return cls(*(np.asarray(doc[k], dtype=np.int64) for k in ("train", "dev", "test")))


def _round_half_up(x):
    return int(math.floor(x + 0.5 + 1e-9))


def stratified_split(labels, ratios=(0.70, 0.15, 0.15), seed=0) -> SplitIndices:
    """Per-class split: dev and test get ``round(r * n_c)`` rows each, train the
    rest. Classes with fewer than 3 rows go entirely to train."""
    ratios = tuple(float(r) for r in ratios)
    if len(ratios) != 3 or any(r < 0 for r in ratios) or abs(sum(ratios) - 1.0) > 1e-9:
        raise ValidationError(f"ratios must be three non-negative numbers summing to 1, got {ratios}")
    labels = np.asarray(labels)
    rng = np.random.default_rng(seed)
    train, dev, test = [], [], []
    for cls in np.unique(labels):
        idx = np.flatnonzero(labels == cls)
        n_c = len(idx)
        if n_c < 3:
            train.append(idx)
            continue
        perm = rng.permutation(idx)
        n_dev = _round_half_up(ratios[1] * n_c)
        n_test = min(_round_half_up(ratios[2] * n_c), n_c - n_dev)
        dev.append(perm[:n_dev])
        test.append(perm[n_dev : n_dev + n_test])
        train.append(perm[n_dev + n_test :])

    def _cat(parts):
        if not parts:
            return np.empty(0, dtype=np.int64)
        return np.sort(np.concatenate(parts)).astype(np.int64)

    return SplitIndices(_cat(train), _cat(dev), _cat(test))


# ---------------------------------------------------------------------------
# Scaling


@dataclass
class ScalerState:
    """Per-column fitted scaling parameters.

    ``quantile`` columns keep a table of distinct sorted training values and
    their CDF positions; ``robust`` columns keep median and IQR.
    """

    columns: list[str]
    methods: dict[str, str]
    quantile_values: dict[str, np.ndarray] = field(default_factory=dict)
    quantile_positions: dict[str, np.ndarray] = field(default_factory=dict)
    median: dict[str, float] = field(default_factory=dict)
    iqr: dict[str, float] = field(default_factory=dict)

    def to_dict(self):
        return {
            "columns": self.columns,
            "methods": self.methods,
            "quantile_values": {k: v.tolist() for k, v in self.quantile_values.items()},
            "quantile_positions": {k: v.tolist() for k, v in self.quantile_positions.items()},
            "median": self.median,
            "iqr": self.iqr,
        }

    @classmethod
    def from_dict(cls, doc):
        return cls(
            columns=list(doc["columns"]),
            methods=dict(doc["methods"]),
            quantile_values={k: np.asarray(v, float) for k, v in doc["quantile_values"].items()},
            quantile_positions={k: np.asarray(v, float) for k, v in doc["quantile_positions"].items()},
            median={k: float(v) for k, v in doc["median"].items()},
            iqr={k: float(v) for k, v in doc["iqr"].items()},
        )


SCALER_METHODS = ("quantile", "robust", "identity")


def default_method_map(columns):
    return {c: ("quantile" if c in QUANTILE_COLUMNS else "robust") for c in columns}


def _quantile_table(x):
    x = np.sort(np.asarray(x, dtype=np.float64))
    n = len(x)
    values, first, counts = np.unique(x, return_index=True, return_counts=True)
    if n == 1 or len(values) == 1:
        return values, np.zeros(len(values))
    # tied training values share the mean of their order-statistic positions
    positions = (first + (counts - 1) / 2) / (n - 1)
    positions[0] = 0.0
    positions[-1] = 1.0
    return values, positions


def fit_scalers(matrix: FeatureMatrix, method_map: Mapping[str, str] | None = None) -> ScalerState:
    if len(matrix) == 0:
        raise ValidationError("cannot fit scalers on an empty matrix")
    method_map = dict(method_map or default_method_map(matrix.columns))
    state = ScalerState(columns=list(matrix.columns), methods={})
    for j, col in enumerate(matrix.columns):
        method = method_map.get(col, "robust")
        if method not in SCALER_METHODS:
            raise ValidationError(f"unknown scaling method {method!r} for column {col!r}")
        state.methods[col] = method
        x = matrix.values[:, j]
        if method == "quantile":
            values, positions = _quantile_table(x)
            state.quantile_values[col] = values
            state.quantile_positions[col] = positions
        elif method == "robust":
            q1, med, q3 = np.quantile(x, [0.25, 0.5, 0.75])
            state.median[col] = float(med)
            state.iqr[col] = float(q3 - q1)
    return state


def apply_scalers(state: ScalerState | None, matrix: FeatureMatrix) -> FeatureMatrix:
    if state is None or not state.methods:
        raise StateError("scaler state is not fitted")
    if list(matrix.columns) != list(state.columns):
        raise ValidationError(
            f"matrix columns {matrix.columns} do not match fitted columns {state.columns}"
        )
    out = np.empty_like(matrix.values)
    for j, col in enumerate(matrix.columns):
        x = matrix.values[:, j]
        method = state.methods[col]
        if method == "quantile":
            values = state.quantile_values[col]
            if len(values) == 1:
                out[:, j] = 0.0
            else:
                out[:, j] = np.interp(x, values, state.quantile_positions[col])
        elif method == "robust":
            iqr = state.iqr[col]
            out[:, j] = 0.0 if iqr == 0 else (x - state.median[col]) / iqr
        else:
            out[:, j] = x
    return FeatureMatrix(out, matrix.columns)


def inverse_robust_coefficient(state: ScalerState, column, coef):
    """Map a linear coefficient on a robust-scaled column back to raw units."""
    if state.methods.get(column) != "robust":
        raise ValidationError(f"column {column!r} is not robust-scaled")
    iqr = state.iqr[column]
    return 0.0 if iqr == 0 else coef / iqr


# ---------------------------------------------------------------------------
# Structured feature assembly


@dataclass
class StructuredPreprocessor:
    """All artifacts fitted on the training rows, bundled for reuse."""

    encoders: dict[str, LabelEncoder]
    company_freq: Counter
    role_freq: Counter
    scaler: ScalerState
    leakage_mode: bool = True
    cell_deg: float = 10

    @property
    def columns(self):
        return structured_columns(self.leakage_mode)

    def raw(self, listings) -> FeatureMatrix:
        return structured_raw(
            listings, self.encoders, {"company": self.company_freq, "role": self.role_freq},
            leakage_mode=self.leakage_mode, cell_deg=self.cell_deg,
        )

    def transform(self, listings) -> FeatureMatrix:
        return apply_scalers(self.scaler, self.raw(listings))

    def to_dict(self):
        return {
            "encoders": {k: e.to_dict() for k, e in self.encoders.items()},
            "company_freq": dict(sorted(self.company_freq.items())),
            "role_freq": dict(sorted(self.role_freq.items())),
            "scaler": self.scaler.to_dict(),
            "leakage_mode": self.leakage_mode,
            "cell_deg": self.cell_deg,
        }

    @classmethod
    def from_dict(cls, doc):
        return cls(
            encoders={k: LabelEncoder.from_dict(v) for k, v in doc["encoders"].items()},
            company_freq=Counter(doc["company_freq"]),
            role_freq=Counter(doc["role_freq"]),
            scaler=ScalerState.from_dict(doc["scaler"]),
            leakage_mode=doc["leakage_mode"],
            cell_deg=doc["cell_deg"],
        )


def structured_raw(listings, encoders, freq_maps, leakage_mode=True, cell_deg=10) -> FeatureMatrix:
    """Unscaled structured features, one row per listing."""
    for name in CATEGORICAL_FIELDS:
        if name not in encoders:
            raise StateError(f"label encoder for {name!r} is not fitted")
    for name in ("company", "role"):
        if name not in freq_maps:
            raise StateError(f"frequency map for {name!r} is not fitted")
    columns = structured_columns(leakage_mode)
    company_freq, role_freq = freq_maps["company"], freq_maps["role"]
    rows = []
    for lst in listings:
        e_lo, e_hi, e_avg = parse_experience(lst.experience_text)
        s_lo, s_hi, _ = parse_salary(lst.salary_text)
        feats = {
            "exp_min": e_lo,
            "exp_max": e_hi,
            "exp_avg": e_avg,
            "salary_min": s_lo,
            "salary_max": s_hi,
            "geo_region_id": geo_region_id(lst.latitude, lst.longitude, cell_deg),
            "latitude": lst.latitude,
            "longitude": lst.longitude,
            "company_freq": company_freq.get(lst.company, 0),
            "role_freq": role_freq.get(lst.role, 0),
            "company_size": lst.company_size,
        }
        for name, attr in CATEGORICAL_FIELDS.items():
            feats[name] = encoders[name].apply(getattr(lst, attr))
        rows.append([feats[c] for c in columns])
    values = np.asarray(rows, dtype=np.float64).reshape(len(rows), len(columns))
    return FeatureMatrix(values, columns)


def assemble_structured(listings, encoders, freq_maps, scaler, leakage_mode=True, cell_deg=10):
    """Scaled structured feature matrix in the documented column order.

    With ``leakage_mode`` on (the default) ``salary_min``/``salary_max`` are
    included; the target ``salary_avg`` never is.
    """
    if scaler is None:
        raise StateError("scaler state is not fitted")
    raw = structured_raw(listings, encoders, freq_maps, leakage_mode, cell_deg)
    return apply_scalers(scaler, raw)


def fit_structured(listings, train_idx, leakage_mode=True, cell_deg=10, method_map=None):
    """Fit encoders, frequency maps and scalers on ``listings[train_idx]``."""
    train = [listings[i] for i in train_idx]
    encoders = {
        name: fit_label_encoder((getattr(l, attr) for l in train), column=name)
        for name, attr in CATEGORICAL_FIELDS.items()
    }
    company_freq = frequency_feature(l.company for l in train)
    role_freq = frequency_feature(l.role for l in train)
    freq_maps = {"company": company_freq, "role": role_freq}
    raw_train = structured_raw(train, encoders, freq_maps, leakage_mode, cell_deg)
    scaler = fit_scalers(raw_train, method_map or default_method_map(raw_train.columns))
    return StructuredPreprocessor(encoders, company_freq, role_freq, scaler, leakage_mode, cell_deg)
