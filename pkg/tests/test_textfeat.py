import itertools
import re

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import oracles
from jobmarket import _vocab
from jobmarket.errors import StateError, ValidationError
from jobmarket.textfeat import (
    MASK_TOKEN, PcaModel, SemanticEmbedder, TfidfModel, embed_text, fuse_embeddings,
    mask_job_titles, pca_fit, pca_transform, perturb, tfidf_fit, tfidf_matrix, tfidf_transform,
    tokenize_skills,
)

TITLES = ["Data Scientist", "Senior Data Scientist", "Web Developer"]


def test_mask_examples():
    assert mask_job_titles("Seeking a Data Scientist to...", TITLES) == "Seeking a [JOB_TITLE] to..."
    assert mask_job_titles("nothing to see", TITLES) == "nothing to see"
    assert mask_job_titles("Senior Data Scientist wanted", TITLES) == "[JOB_TITLE] wanted"
    assert mask_job_titles("a web developer", TITLES) == "a [JOB_TITLE]"
    with pytest.raises(ValidationError):
        mask_job_titles("x", [])


@settings(max_examples=200, deadline=None)
@given(parts=st.lists(st.one_of(st.sampled_from(list(_vocab.JOB_TITLES)), st.text(max_size=6)), max_size=8))
def test_mask_leaves_no_title(parts):
    text = " ".join(p.swapcase() if i % 2 else p for i, p in enumerate(parts))
    out = mask_job_titles(text, _vocab.JOB_TITLES).replace(MASK_TOKEN, "\x00")
    low = out.lower()
    assert not any(t.lower() in low for t in _vocab.JOB_TITLES)


def test_tokenize_skills():
    assert tokenize_skills("SQL, Python ") == ["sql", "python"]
    assert tokenize_skills("") == []
    assert tokenize_skills("a,,b") == ["a", "b"]
    assert tokenize_skills("b, a, b") == ["b", "a", "b"]


def test_tfidf_example():
    model = tfidf_fit([["python", "sql"], ["python", "excel"]])
    assert model.tokens == ["excel", "python", "sql"]
    idf = dict(zip(model.tokens, model.idf))
    assert idf["python"] == pytest.approx(1.0, abs=1e-15)
    assert idf["sql"] == pytest.approx(1.4054651, abs=1e-7)
    vec = tfidf_transform(model, ["python", "sql"])
    assert vec[1] == pytest.approx(0.5797, abs=5e-5)
    assert vec[2] == pytest.approx(0.8148, abs=5e-5)
    assert tfidf_transform(model, ["rust", "go"]) == {}
    twice = tfidf_transform(model, ["sql", "sql", "python"])
    assert twice[2] / twice[1] == pytest.approx(2 * idf["sql"])


def test_tfidf_unfitted():
    with pytest.raises(StateError):
        tfidf_transform(None, ["a"])
    with pytest.raises(StateError):
        tfidf_matrix(TfidfModel({}, {}, 0), [["a"]])


def test_tfidf_vocab_cap_and_ties():
    docs = [["b", "a"], ["c", "a"], ["d"]]
    model = tfidf_fit(docs, max_features=2)
    assert model.tokens == ["a", "b"]
    assert all(1 <= model.df[t] <= model.n_docs for t in model.tokens)


@settings(max_examples=60, deadline=None)
@given(
    train=st.lists(st.lists(st.sampled_from("abcdefghij"), max_size=6), min_size=1, max_size=15),
    docs=st.lists(st.lists(st.sampled_from("abcdefghijkl"), max_size=8), min_size=1, max_size=8),
    cap=st.integers(1, 12),
)
def test_tfidf_matches_oracle(train, docs, cap):
    model = tfidf_fit(train, max_features=cap)
    vocab, rows = oracles.tfidf(train, docs, cap)
    if not vocab:
        return
    assert model.tokens == vocab
    M = tfidf_matrix(model, docs)
    np.testing.assert_allclose(M, np.array(rows), rtol=0, atol=1e-12)
    for i, d in enumerate(docs):
        sparse = tfidf_transform(model, d)
        dense = np.zeros(len(vocab))
        for j, w in sparse.items():
            dense[j] = w
        np.testing.assert_allclose(dense, M[i], rtol=0, atol=1e-12)


def test_tfidf_json_round_trip(tmp_path):
    model = tfidf_fit([["x", "y"], ["y"]])
    model.save(tmp_path / "m.json")
    assert TfidfModel.load(tmp_path / "m.json") == model


def test_embedder_basics():
    e = SemanticEmbedder()
    a, b = embed_text(e, "data pipelines"), embed_text(e, "data pipelines")
    assert np.array_equal(a, b) and a.shape == (384,)
    assert not embed_text(e, "").any()
    assert abs(np.linalg.norm(embed_text(e, "build robust ETL jobs")) - 1) < 1e-9
    assert not np.array_equal(a, embed_text(SemanticEmbedder(seed=1), "data pipelines"))
    with pytest.raises(ValidationError):
        SemanticEmbedder(dim=0)


@settings(max_examples=100, deadline=None)
@given(st.text(min_size=1, max_size=80).filter(lambda s: re.search(r"\w", s)))
def test_embedder_unit_norm(text):
    assert abs(np.linalg.norm(SemanticEmbedder().embed(text)) - 1) < 1e-9


def test_embedder_unrelated_texts_near_orthogonal():
    rng = np.random.default_rng(0)
    vocab = [f"w{i}" for i in range(4000)]
    e = SemanticEmbedder()
    cos = []
    for _ in range(500):
        words = rng.choice(vocab, 20, replace=False)
        a, b = e.embed(" ".join(words[:10])), e.embed(" ".join(words[10:]))
        cos.append(abs(a @ b))
    assert np.mean(np.array(cos) < 0.2) >= 0.95


def test_pca_line():
    model = pca_fit([[1, 1], [2, 2], [3, 3]], 1)
    np.testing.assert_allclose(model.components[0], [2**-0.5, 2**-0.5], atol=1e-12)
    np.testing.assert_allclose(pca_transform(model, [model.mean]), [[0.0]], atol=1e-12)


def test_pca_too_many_components():
    with pytest.raises(ValidationError):
        pca_fit(np.zeros((3, 5)), 3)
    with pytest.raises(ValidationError):
        pca_fit(np.zeros((10, 2)), 3)


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32), n=st.integers(6, 40), p=st.integers(2, 8))
def test_pca_properties(seed, n, p):
    X = np.random.default_rng(seed).normal(size=(n, p)) @ np.diag(np.arange(1, p + 1))
    d = min(n - 1, p)
    model = pca_fit(X, d)
    np.testing.assert_allclose(model.components @ model.components.T, np.eye(d), atol=1e-8)
    assert np.all(np.diff(model.explained_variance) <= 1e-12)
    for row in model.components:
        assert row[np.argmax(np.abs(row))] > 0
    errs = []
    for k in range(1, d + 1):
        m = pca_fit(X, k)
        Z = pca_transform(m, X)
        errs.append(np.sum((X - m.mean - Z @ m.components) ** 2))
    assert all(b <= a + 1e-9 * max(1.0, a) for a, b in itertools.pairwise(errs))
    a, b = X[0], X[1]
    np.testing.assert_allclose(
        pca_transform(model, [a + b - model.mean])[0],
        pca_transform(model, [a])[0] + pca_transform(model, [b])[0], atol=1e-9)


def test_pca_json_round_trip():
    model = pca_fit(np.random.default_rng(1).normal(size=(20, 4)), 2)
    back = PcaModel.from_dict(model.to_dict())
    np.testing.assert_array_equal(back.components, model.components)


def test_fuse_shapes_and_norms():
    rng = np.random.default_rng(2)
    desc = rng.normal(size=(500, 384))
    resp = rng.normal(size=(500, 384))
    desc[7] = resp[7] = 0.0
    fused = fuse_embeddings(desc, resp, 128)
    assert fused.matrix.shape == (500, 128)
    norms = np.linalg.norm(fused.matrix, axis=1)
    assert norms[7] == 0.0
    assert np.all(np.abs(np.delete(norms, 7) - 1) < 1e-9)
    same = fuse_embeddings(desc, desc, 64)
    assert np.all(np.abs(np.delete(np.linalg.norm(same.matrix, axis=1), 7) - 1) < 1e-9)
    with pytest.raises(ValidationError):
        fuse_embeddings(desc, resp[:-1], 128)


def test_fuse_fit_rows_only():
    rng = np.random.default_rng(3)
    desc, resp = rng.normal(size=(60, 10)), rng.normal(size=(60, 10))
    a = fuse_embeddings(desc, resp, 4, fit_rows=np.arange(40))
    desc2 = desc.copy()
    desc2[40:] *= 7
    b = fuse_embeddings(desc2, resp, 4, fit_rows=np.arange(40))
    np.testing.assert_array_equal(a.matrix[:40], b.matrix[:40])


def test_perturb():
    X = np.random.default_rng(4).normal(size=(300, 128))
    X /= np.linalg.norm(X, axis=1, keepdims=True)
    X[0] = 0.0
    assert np.array_equal(perturb(X, 0.0), X)
    a, b = perturb(X, 0.01, seed=5), perturb(X, 0.01, seed=5)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, perturb(X, 0.01, seed=6))
    assert not a[0].any()
    cos = np.sum(a[1:] * X[1:], axis=1)
    assert cos.min() > 0.95
    with pytest.raises(ValidationError):
        perturb(X, -0.1)
