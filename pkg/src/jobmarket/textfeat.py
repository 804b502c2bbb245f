"""Text features: title masking, skills TF-IDF, a hashing sentence embedder,
PCA fusion of the two free-text embeddings, and dev/test perturbation."""

from __future__ import annotations

import hashlib
import json
import re
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import StateError, ValidationError

MASK_TOKEN = "[JOB_TITLE]"


def mask_job_titles(text: str, title_list: Sequence[str]) -> str:
    """Replace every case-insensitive occurrence of a known title with
    ``[JOB_TITLE]``; longer titles are tried first so supersets win."""
    if not title_list:
        raise ValidationError("title_list must not be empty")
    return _title_pattern(tuple(title_list)).sub(MASK_TOKEN, text)


_PATTERN_CACHE: dict[tuple[str, ...], re.Pattern] = {}


def _title_pattern(titles: tuple[str, ...]) -> re.Pattern:
    pat = _PATTERN_CACHE.get(titles)
    if pat is None:
        ordered = sorted({t for t in titles if t}, key=lambda t: (-len(t), t))
        pat = re.compile("|".join(re.escape(t) for t in ordered), re.IGNORECASE)
        if len(_PATTERN_CACHE) > 32:
            _PATTERN_CACHE.clear()
        _PATTERN_CACHE[titles] = pat
    return pat


def tokenize_skills(text: str) -> list[str]:
    return [t for t in (part.strip().lower() for part in text.split(",")) if t]


# ---------------------------------------------------------------------------
# TF-IDF


@dataclass
class TfidfModel:
    vocabulary: dict[str, int]
    df: dict[str, int]
    n_docs: int

    @property
    def tokens(self) -> list[str]:
        return sorted(self.vocabulary, key=self.vocabulary.__getitem__)

    @property
    def idf(self) -> np.ndarray:
        df = np.array([self.df[t] for t in self.tokens], dtype=np.float64)
        return np.log((1.0 + self.n_docs) / (1.0 + df)) + 1.0

    def feature_names(self, prefix="tfidf_"):
        return [f"{prefix}{i}" for i in range(len(self.vocabulary))]

    def to_dict(self):
        return {"n_docs": self.n_docs, "tokens": self.tokens, "df": [self.df[t] for t in self.tokens]}

    @classmethod
    def from_dict(cls, doc):
        tokens = doc["tokens"]
        return cls(
            vocabulary={t: i for i, t in enumerate(tokens)},
            df=dict(zip(tokens, doc["df"])),
            n_docs=doc["n_docs"],
        )

    def save(self, path):
        Path(path).write_text(json.dumps(self.to_dict(), indent=1) + "\n", encoding="utf-8")

    @classmethod
    def load(cls, path):
        return cls.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))


def tfidf_fit(corpus: Iterable[Sequence[str]], max_features=300) -> TfidfModel:
    """Fit on tokenized documents. The vocabulary keeps the ``max_features``
    tokens with highest document frequency (ties broken lexicographically);
    columns are then numbered in lexicographic token order."""
    df = Counter()
    n_docs = 0
    for doc in corpus:
        n_docs += 1
        df.update(set(doc))
    ranked = sorted(df.items(), key=lambda kv: (-kv[1], kv[0]))[:max_features]
    tokens = sorted(t for t, _ in ranked)
    return TfidfModel({t: i for i, t in enumerate(tokens)}, {t: df[t] for t in tokens}, n_docs)


def tfidf_transform(model: TfidfModel | None, doc: Sequence[str]) -> dict[int, float]:
    """Sparse ``{column: weight}`` vector of one document, L2-normalized."""
    if model is None or not model.vocabulary:
        raise StateError("TF-IDF model is not fitted")
    counts = Counter(t for t in doc if t in model.vocabulary)
    if not counts:
        return {}
    weights = {}
    for tok, tf in counts.items():
        idf = np.log((1.0 + model.n_docs) / (1.0 + model.df[tok])) + 1.0
        weights[model.vocabulary[tok]] = tf * idf
    norm = np.sqrt(sum(w * w for w in weights.values()))
    return {j: w / norm for j, w in sorted(weights.items())}


def tfidf_matrix(model: TfidfModel | None, docs: Iterable[Sequence[str]]) -> np.ndarray:
    """Dense document-term matrix; row ``i`` equals ``tfidf_transform(docs[i])``."""
    if model is None or not model.vocabulary:
        raise StateError("TF-IDF model is not fitted")
    docs = list(docs)
    out = np.zeros((len(docs), len(model.vocabulary)))
    vocab = model.vocabulary
    for i, doc in enumerate(docs):
        for tok in doc:
            j = vocab.get(tok)
            if j is not None:
                out[i, j] += 1.0
    out *= model.idf
    norms = np.linalg.norm(out, axis=1, keepdims=True)
    np.divide(out, norms, out=out, where=norms > 0)
    return out


# ---------------------------------------------------------------------------
# Hashing embedder

_WORD_RE = re.compile(r"\[job_title\]|[\w+#]+")


def words(text: str) -> list[str]:
    return _WORD_RE.findall(text.lower())


@dataclass(frozen=True)
class SemanticEmbedder:
    """Signed feature hashing of word 1-2-grams into ``dim`` buckets.

    A deterministic stand-in for a pretrained sentence encoder: same text and
    seed give the same unit vector; empty text gives the zero vector.
    """

    dim: int = 384
    seed: int = 0
    ngram_range: tuple[int, int] = (1, 2)
    _cache: dict = field(default_factory=dict, repr=False, compare=False, hash=False)

    def __post_init__(self):
        if self.dim < 1:
            raise ValidationError(f"embedding dim must be positive, got {self.dim}")
        lo, hi = self.ngram_range
        if not 1 <= lo <= hi:
            raise ValidationError(f"invalid ngram_range {self.ngram_range}")

    def _slot(self, gram: str) -> tuple[int, float]:
        hit = self._cache.get(gram)
        if hit is None:
            digest = hashlib.blake2b(f"{self.seed}\x00{gram}".encode(), digest_size=8).digest()
            h = int.from_bytes(digest, "little")
            hit = (h % self.dim, 1.0 if (h >> 63) & 1 else -1.0)
            self._cache[gram] = hit
        return hit

    def ngrams(self, text: str) -> list[str]:
        toks = words(text)
        lo, hi = self.ngram_range
        return [" ".join(toks[i : i + n]) for n in range(lo, hi + 1) for i in range(len(toks) - n + 1)]

    def embed(self, text: str) -> np.ndarray:
        vec = np.zeros(self.dim)
        for gram in self.ngrams(text):
            j, sign = self._slot(gram)
            vec[j] += sign
        norm = np.linalg.norm(vec)
        return vec / norm if norm > 0 else vec

    def embed_many(self, texts: Iterable[str]) -> np.ndarray:
        texts = list(texts)
        out = np.zeros((len(texts), self.dim))
        for i, text in enumerate(texts):
            out[i] = self.embed(text)
        return out

    def to_dict(self):
        return {"dim": self.dim, "seed": self.seed, "ngram_range": list(self.ngram_range)}


def embed_text(embedder: SemanticEmbedder, text: str) -> np.ndarray:
    return embedder.embed(text)


# ---------------------------------------------------------------------------
# PCA


@dataclass
class PcaModel:
    mean: np.ndarray
    components: np.ndarray  # (d_out, n_features), rows orthonormal
    explained_variance: np.ndarray
    total_variance: float = 0.0

    @property
    def explained_variance_ratio(self):
        if self.total_variance <= 0:
            return np.zeros_like(self.explained_variance)
        return self.explained_variance / self.total_variance

    def to_dict(self):
        return {
            "mean": self.mean.tolist(),
            "components": self.components.tolist(),
            "explained_variance": self.explained_variance.tolist(),
            "total_variance": self.total_variance,
        }

    @classmethod
    def from_dict(cls, doc):
        return cls(
            np.asarray(doc["mean"], float),
            np.asarray(doc["components"], float),
            np.asarray(doc["explained_variance"], float),
            float(doc["total_variance"]),
        )


def pca_fit(matrix, d_out: int) -> PcaModel:
    """Eigendecomposition of the sample covariance; components in descending
    eigenvalue order, each signed so its largest-magnitude entry is positive."""
    X = np.asarray(matrix, dtype=np.float64)
    n, p = X.shape
    if not 1 <= d_out <= min(n - 1, p):
        raise ValidationError(f"d_out={d_out} must be in [1, min(n_rows-1, n_cols)] = [1, {min(n - 1, p)}]")
    mean = X.mean(axis=0)
    Xc = X - mean
    cov = (Xc.T @ Xc) / (n - 1)
    evals, evecs = np.linalg.eigh(cov)
    order = np.argsort(evals)[::-1][:d_out]
    comps = evecs[:, order].T.copy()
    for row in comps:
        if row[np.argmax(np.abs(row))] < 0:
            row *= -1.0
    variances = np.clip(evals[order], 0.0, None)
    return PcaModel(mean, comps, variances, float(np.clip(evals, 0.0, None).sum()))


def pca_transform(model: PcaModel, matrix) -> np.ndarray:
    return (np.asarray(matrix, dtype=np.float64) - model.mean) @ model.components.T


def l2_normalize_rows(matrix) -> np.ndarray:
    X = np.array(matrix, dtype=np.float64)
    norms = np.linalg.norm(X, axis=1, keepdims=True)
    np.divide(X, norms, out=X, where=norms > 0)
    return X


@dataclass
class FusedEmbedding:
    matrix: np.ndarray
    pca: PcaModel


def fuse_embeddings(desc_emb, resp_emb, d_fused=128, fit_rows=None) -> FusedEmbedding:
    """Concatenate the two embedding blocks, project onto ``d_fused`` principal
    components (fitted on ``fit_rows`` when given) and L2-normalize rows.

    All-zero input rows stay all-zero.
    """
    desc_emb = np.asarray(desc_emb, dtype=np.float64)
    resp_emb = np.asarray(resp_emb, dtype=np.float64)
    if desc_emb.shape[0] != resp_emb.shape[0]:
        raise ValidationError(
            f"row-count mismatch: {desc_emb.shape[0]} description vs {resp_emb.shape[0]} responsibility rows"
        )
    joined = np.hstack([desc_emb, resp_emb])
    fit_on = joined if fit_rows is None else joined[fit_rows]
    pca = pca_fit(fit_on, d_fused)
    projected = pca_transform(pca, joined)
    zero = ~joined.any(axis=1)
    projected[zero] = 0.0
    return FusedEmbedding(l2_normalize_rows(projected), pca)


def perturb(matrix, sigma=0.01, seed=0) -> np.ndarray:
    """Add seeded Gaussian noise, then re-normalize the non-zero rows."""
    if sigma < 0:
        raise ValidationError(f"sigma must be >= 0, got {sigma}")
    X = np.array(matrix, dtype=np.float64)
    if sigma == 0:
        return X
    zero = ~X.any(axis=1)
    X += np.random.default_rng(seed).normal(0.0, sigma, X.shape)
    X[zero] = 0.0
    return l2_normalize_rows(X)
