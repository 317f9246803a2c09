"""Embedding tests: vocabulary, init, gradients, kernel parity, vector IO."""

import math

import numpy as np
import pytest

from custspace.corpus import SentenceCorpus
from custspace.embed import (
    EmbeddingSpace,
    SubwordConfig,
    TrainConfig,
    VectorStore,
    Vocabulary,
    build_vocab,
    init_embeddings,
    load_vectors,
    negative_sampling_cdf,
    ngram_indices,
    save_vectors,
    sgns_loss_and_grads,
    sgns_step,
    train,
    vector_of,
)
from custspace.errors import ConfigError, CorpusTooSmallError, DomainError, FormatError
from custspace.hashing import fnv1a_64


def corpus_of(*sentences):
    return SentenceCorpus(sentences=[list(s) for s in sentences])


def small_space(dim=4, seed=3, tokens=("aa", "bb", "cc", "dd"), subword=None):
    corpus = corpus_of(tokens, tokens)
    cfg = TrainConfig(dim=dim, min_count=1, seed=seed, subword=subword or SubwordConfig())
    return init_embeddings(build_vocab(corpus, 1), cfg)


# ---------------------------------------------------------------- vocabulary


def test_build_vocab_min_count_filter():
    corpus = corpus_of(["a", "b", "a", "c"], ["a", "b"])
    vocab = build_vocab(corpus, 2)
    assert vocab.tokens == ["a", "b"]
    assert vocab.counts.tolist() == [3, 2]
    assert vocab.index == {"a": 0, "b": 1}
    assert vocab.total == 5


def test_build_vocab_tie_order_lexicographic():
    corpus = corpus_of(["z", "m", "a"], ["z", "m", "a"])
    vocab = build_vocab(corpus, 1)
    # equal counts fall back to token order
    assert vocab.tokens == ["a", "m", "z"]


def test_build_vocab_descending_counts():
    rng = np.random.default_rng(7)
    for _ in range(20):
        toks = [f"t{i}" for i in range(10)]
        reps = rng.integers(1, 8, size=10)
        sent = [t for t, r in zip(toks, reps) for _ in range(int(r))]
        vocab = build_vocab(corpus_of(sent), 1)
        counts = vocab.counts
        assert (counts[:-1] >= counts[1:]).all()
        assert vocab.total == len(sent)


def test_build_vocab_min_count_below_one_rejected():
    with pytest.raises(ConfigError):
        build_vocab(corpus_of(["a", "b"]), 0)


def test_build_vocab_nothing_survives():
    with pytest.raises(CorpusTooSmallError):
        build_vocab(corpus_of(["a", "b", "c"]), 2)


# ---------------------------------------------------------- initialization


def test_init_embeddings_ranges_and_shapes():
    space = small_space(dim=6, seed=11)
    v = len(space.vocab.tokens)
    assert space.input_vectors.shape == (v, 6)
    assert space.output_vectors.shape == (v, 6)
    assert np.all(space.output_vectors == 0.0)
    assert np.all(np.abs(space.input_vectors) <= 0.5 / 6)
    assert space.bucket_vectors is None


def test_init_embeddings_matches_generator():
    corpus = corpus_of(["a", "b", "c"], ["a", "b", "c"])
    vocab = build_vocab(corpus, 1)
    cfg = TrainConfig(dim=5, min_count=1, seed=42)
    space = init_embeddings(vocab, cfg)
    rng = np.random.default_rng(42)
    expected = (rng.random((3, 5)) - 0.5) / 5
    assert np.array_equal(space.input_vectors, expected)


def test_init_embeddings_subword_buckets():
    sub = SubwordConfig(enabled=True, buckets=64)
    space = small_space(dim=3, seed=9, subword=sub)
    assert space.bucket_vectors is not None
    assert space.bucket_vectors.shape == (64, 3)
    assert np.all(np.abs(space.bucket_vectors) <= 0.5 / 3)
    # input matrix is drawn before buckets, so it matches the plain init
    plain = small_space(dim=3, seed=9)
    assert np.array_equal(space.input_vectors, plain.input_vectors)


# ------------------------------------------------------------------ n-grams


def test_ngram_indices_count_oracle():
    sub = SubwordConfig(enabled=True, ngram_min=3, ngram_max=6, buckets=1000)
    # "<ab>" has length 4: two 3-grams and one 4-gram
    grams = ngram_indices("ab", sub)
    assert len(grams) == 3
    expected = [
        fnv1a_64(b"<ab") % 1000,
        fnv1a_64(b"ab>") % 1000,
        fnv1a_64(b"<ab>") % 1000,
    ]
    assert grams == expected


def test_ngram_indices_counts_and_range():
    sub = SubwordConfig(enabled=True, ngram_min=3, ngram_max=6, buckets=17)
    rng = np.random.default_rng(0)
    alphabet = "abcdef0123456789"
    for _ in range(50):
        n = int(rng.integers(1, 20))
        token = "".join(alphabet[int(i)] for i in rng.integers(0, 16, size=n))
        grams = ngram_indices(token, sub)
        wrapped_len = n + 2
        want = sum(
            max(0, wrapped_len - k + 1) for k in range(sub.ngram_min, sub.ngram_max + 1)
        )
        assert len(grams) == want
        assert all(0 <= g < 17 for g in grams)


def test_ngram_indices_short_token_empty():
    sub = SubwordConfig(enabled=True, ngram_min=4, ngram_max=6, buckets=10)
    assert ngram_indices("a", sub) == []  # "<a>" is length 3


# ------------------------------------------------------- negative sampling


def test_negative_sampling_cdf_formula():
    rng = np.random.default_rng(21)
    for _ in range(20):
        counts = rng.integers(1, 100, size=int(rng.integers(1, 12)))
        vocab = Vocabulary(
            tokens=[f"t{i}" for i in range(counts.size)],
            counts=counts.astype(np.int64),
            index={},
            total=int(counts.sum()),
        )
        cdf = negative_sampling_cdf(vocab)
        w = counts.astype(np.float64) ** 0.75
        expected = np.cumsum(w) / w.sum()
        assert np.allclose(cdf, expected, rtol=0, atol=1e-15)
        assert cdf[-1] == pytest.approx(1.0)
        assert (np.diff(cdf) >= 0).all()


# ---------------------------------------------------------- loss and grads


def test_fresh_model_loss_is_ln2_per_term():
    rng = np.random.default_rng(5)
    for k in (0, 1, 5, 10):
        v = rng.normal(size=8)
        loss, gv, gp, gn = sgns_loss_and_grads(v, np.zeros(8), np.zeros((k, 8)))
        assert loss == pytest.approx((1 + k) * math.log(2.0), rel=1e-12)
        assert gn.shape == (k, 8)


def test_sgns_gradients_match_finite_differences():
    rng = np.random.default_rng(13)
    h = 1e-6
    for _ in range(30):
        dim = int(rng.integers(2, 12))
        k = int(rng.integers(0, 6))
        v = rng.normal(scale=0.8, size=dim)
        u_pos = rng.normal(scale=0.8, size=dim)
        u_negs = rng.normal(scale=0.8, size=(k, dim))
        loss, gv, gp, gn = sgns_loss_and_grads(v, u_pos, u_negs)

        def loss_at(vv, pp, nn):
            return sgns_loss_and_grads(vv, pp, nn)[0]

        for d in range(dim):
            e = np.zeros(dim)
            e[d] = h
            num = (loss_at(v + e, u_pos, u_negs) - loss_at(v - e, u_pos, u_negs)) / (2 * h)
            assert abs(num - gv[d]) <= 1e-5 * max(1.0, abs(num))
            num = (loss_at(v, u_pos + e, u_negs) - loss_at(v, u_pos - e, u_negs)) / (2 * h)
            assert abs(num - gp[d]) <= 1e-5 * max(1.0, abs(num))
        for j in range(k):
            for d in range(dim):
                bump = np.zeros((k, dim))
                bump[j, d] = h
                num = (loss_at(v, u_pos, u_negs + bump) - loss_at(v, u_pos, u_negs - bump)) / (2 * h)
                assert abs(num - gn[j, d]) <= 1e-5 * max(1.0, abs(num))


# -------------------------------------------------------------- single step


def test_sgns_step_is_one_gradient_descent_update():
    rng = np.random.default_rng(31)
    for _ in range(20):
        space = small_space(dim=5, seed=int(rng.integers(0, 1000)), tokens=("a", "b", "c", "d"))
        space.output_vectors[:] = rng.normal(scale=0.3, size=space.output_vectors.shape)
        center, ctx = 0, 1
        negs = [2, 3]  # distinct from context and each other
        lr = 0.05
        v0 = space.input_vectors[center].copy()
        u0 = space.output_vectors[ctx].copy()
        n0 = space.output_vectors[list(negs)].copy()
        want_loss, gv, gp, gn = sgns_loss_and_grads(v0, u0, n0)

        loss = sgns_step(space, center, ctx, negs, lr)
        assert loss == pytest.approx(want_loss, rel=1e-12)
        assert np.allclose(space.output_vectors[ctx], u0 - lr * gp, atol=1e-12)
        for j, n in enumerate(negs):
            assert np.allclose(space.output_vectors[n], n0[j] - lr * gn[j], atol=1e-12)
        assert np.allclose(space.input_vectors[center], v0 - lr * gv, atol=1e-12)


def test_sgns_step_subword_spreads_gradient():
    sub = SubwordConfig(enabled=True, buckets=32)
    space = small_space(dim=4, seed=2, tokens=("aa", "bb", "cc", "dd"), subword=sub)
    space.output_vectors[:] = np.random.default_rng(6).normal(scale=0.3, size=(4, 4))
    rows = ngram_indices("aa", sub)
    before_tok = space.input_vectors[0].copy()
    before_buckets = space.bucket_vectors[rows].copy() if rows else None
    sgns_step(space, 0, 1, [2], 0.1)
    delta = space.input_vectors[0] - before_tok
    assert np.any(delta != 0.0)
    for i, g in enumerate(rows):
        assert np.allclose(space.bucket_vectors[g] - before_buckets[i], delta, atol=1e-12)


def test_sgns_step_validation():
    space = small_space()
    with pytest.raises(DomainError, match="center_index"):
        sgns_step(space, 9, 0, [1], 0.1)
    with pytest.raises(DomainError, match="context_index"):
        sgns_step(space, 0, -1, [1], 0.1)
    with pytest.raises(DomainError, match="negative"):
        sgns_step(space, 0, 1, [99], 0.1)
    with pytest.raises(DomainError, match="lr"):
        sgns_step(space, 0, 1, [2], 0.0)


# ------------------------------------------------------------------ training


def rng_corpus(seed, n_tokens=20, n_sentences=12, max_len=15):
    rng = np.random.default_rng(seed)
    sentences = []
    for _ in range(n_sentences):
        length = int(rng.integers(2, max_len + 1))
        sentences.append([f"c{int(i):02d}" for i in rng.integers(0, n_tokens, size=length)])
    return SentenceCorpus(sentences=sentences)


def test_train_kernel_matches_reference_exactly():
    corpus = rng_corpus(17)
    cfg = TrainConfig(dim=8, window=5, min_count=1, epochs=3, negatives=5, seed=6, threads=0)
    kern = train(corpus, cfg)
    ref = train(corpus, cfg, _reference=True)
    assert np.array_equal(kern.input_vectors, ref.input_vectors)
    assert np.array_equal(kern.output_vectors, ref.output_vectors)
    assert kern.epoch_losses == pytest.approx(ref.epoch_losses, rel=1e-12)


def test_train_deterministic_at_zero_threads():
    corpus = rng_corpus(23)
    cfg = TrainConfig(dim=6, window=4, min_count=1, epochs=2, seed=3, threads=0)
    a = train(corpus, cfg)
    b = train(corpus, cfg)
    assert np.array_equal(a.input_vectors, b.input_vectors)
    assert np.array_equal(a.output_vectors, b.output_vectors)
    assert a.epoch_losses == b.epoch_losses


def test_train_records_one_loss_per_epoch_and_improves():
    corpus = rng_corpus(29, n_tokens=10, n_sentences=20)
    cfg = TrainConfig(dim=6, window=5, min_count=1, epochs=8, seed=0, threads=0)
    space = train(corpus, cfg)
    assert len(space.epoch_losses) == 8
    assert all(math.isfinite(l) and l > 0 for l in space.epoch_losses)
    assert space.epoch_losses[-1] < space.epoch_losses[0]


def test_train_two_threads_runs_and_is_finite():
    corpus = rng_corpus(41, n_sentences=16)
    cfg = TrainConfig(dim=5, window=4, min_count=1, epochs=2, seed=8, threads=2)
    space = train(corpus, cfg)
    assert np.isfinite(space.input_vectors).all()
    assert np.isfinite(space.output_vectors).all()
    assert len(space.epoch_losses) == 2


def test_train_separates_two_cliques():
    # two disjoint co-occurrence groups must end up closer within than across
    left = [f"l{i}" for i in range(4)]
    right = [f"r{i}" for i in range(4)]
    rng = np.random.default_rng(2)
    sentences = []
    for _ in range(40):
        sentences.append([left[int(i)] for i in rng.integers(0, 4, size=8)])
        sentences.append([right[int(i)] for i in rng.integers(0, 4, size=8)])
    cfg = TrainConfig(dim=8, window=5, min_count=1, epochs=30, seed=4, threads=0)
    space = train(SentenceCorpus(sentences=sentences), cfg)

    def cos(a, b):
        va, vb = vector_of(space, a), vector_of(space, b)
        return float(np.dot(va, vb) / (np.linalg.norm(va) * np.linalg.norm(vb)))

    intra = np.mean([cos(a, b) for a in left for b in left if a < b])
    inter = np.mean([cos(a, b) for a in left for b in right])
    assert intra > inter + 0.3


def test_train_min_count_excludes_rare_tokens():
    sentences = [["a", "b", "rare"], ["a", "b"], ["a", "b"]]
    cfg = TrainConfig(dim=4, window=2, min_count=2, epochs=1, seed=0, threads=0)
    space = train(SentenceCorpus(sentences=sentences), cfg)
    assert set(space.vocab.tokens) == {"a", "b"}
    assert vector_of(space, "rare") is None


def test_train_no_trainable_sentence():
    # every sentence drops below two tokens once the rare ones are filtered out
    sentences = [["a", "solo"], ["b", "solo"], ["c", "solo"], ["d", "solo"]]
    cfg = TrainConfig(dim=4, window=2, min_count=2, epochs=1, seed=0, threads=0)
    with pytest.raises(CorpusTooSmallError):
        train(SentenceCorpus(sentences=sentences), cfg)


# ----------------------------------------------------------------- serving


def test_vector_of_returns_copy():
    space = small_space()
    vec = vector_of(space, "aa")
    vec[:] = 99.0
    assert not np.any(space.input_vectors[space.vocab.index["aa"]] == 99.0)


def test_vector_of_oov_without_subword():
    space = small_space()
    assert vector_of(space, "zz") is None


def test_vector_of_subword_composition():
    sub = SubwordConfig(enabled=True, buckets=128)
    space = small_space(dim=4, seed=7, tokens=("aaaa", "bbbb", "cccc", "dddd"), subword=sub)
    vec = vector_of(space, "aaaa")
    idx = space.vocab.index["aaaa"]
    expected = space.input_vectors[idx].copy()
    for g in ngram_indices("aaaa", sub):
        expected += space.bucket_vectors[g]
    assert np.allclose(vec, expected, atol=1e-15)


def test_vector_of_subword_resolves_oov():
    sub = SubwordConfig(enabled=True, buckets=128)
    space = small_space(dim=4, seed=7, tokens=("aaaa", "bbbb", "cccc", "dddd"), subword=sub)
    vec = vector_of(space, "zzzz")
    expected = np.zeros(4)
    for g in ngram_indices("zzzz", sub):
        expected += space.bucket_vectors[g]
    assert vec is not None
    assert np.allclose(vec, expected, atol=1e-15)


def test_vector_of_subword_none_when_no_grams():
    sub = SubwordConfig(enabled=True, ngram_min=4, ngram_max=6, buckets=16)
    space = small_space(dim=3, seed=1, tokens=("aaaa", "bbbb", "cccc", "dddd"), subword=sub)
    # "<z>" is length 3, below ngram_min, and the token is out of vocabulary
    assert vector_of(space, "z") is None


def test_space_get_aliases_vector_of():
    space = small_space()
    assert np.array_equal(space.get("aa"), vector_of(space, "aa"))
    assert space.get("nope") is None


# ---------------------------------------------------------------- vector IO


def test_save_load_round_trip_exact(tmp_path):
    corpus = rng_corpus(53)
    cfg = TrainConfig(dim=7, window=4, min_count=1, epochs=2, seed=12, threads=0)
    space = train(corpus, cfg)
    path = tmp_path / "vectors.txt"
    save_vectors(space, path)
    store = load_vectors(path)
    assert store.tokens == space.vocab.tokens
    assert store.dim == 7
    for t in space.vocab.tokens:
        assert np.array_equal(store.get(t), vector_of(space, t))


def test_save_vectors_subword_rows_are_served_vectors(tmp_path):
    sub = SubwordConfig(enabled=True, buckets=64)
    space = small_space(dim=3, seed=5, tokens=("aaa", "bbb", "ccc", "ddd"), subword=sub)
    path = tmp_path / "vec.txt"
    save_vectors(space, path)
    store = load_vectors(path)
    for t in space.vocab.tokens:
        assert np.array_equal(store.get(t), vector_of(space, t))


def test_save_vectors_from_store_round_trip(tmp_path):
    store = VectorStore(
        tokens=["x", "y"],
        vectors=np.array([[1.5, -2.25], [0.125, 3.0]]),
        index={"x": 0, "y": 1},
    )
    path = tmp_path / "store.txt"
    save_vectors(store, path)
    again = load_vectors(path)
    assert again.tokens == ["x", "y"]
    assert np.array_equal(again.vectors, store.vectors)


def test_load_vectors_hand_written(tmp_path):
    path = tmp_path / "hand.txt"
    path.write_text("2 2\nab 1.0 -0.5\ncd 0.25 2.0\n", encoding="utf-8")
    store = load_vectors(path)
    assert store.tokens == ["ab", "cd"]
    assert np.array_equal(store.vectors, np.array([[1.0, -0.5], [0.25, 2.0]]))
    got = store.get("ab")
    got[:] = 0.0
    assert store.vectors[0, 0] == 1.0  # get returns a copy
    assert store.get("zz") is None


def test_load_vectors_header_errors(tmp_path):
    cases = [
        "2\n",  # single field
        "two 3\n",  # not an integer
        "-1 3\n",  # negative count
        "1 0\n",  # dim below one
    ]
    for i, text in enumerate(cases):
        path = tmp_path / f"h{i}.txt"
        path.write_text(text, encoding="utf-8")
        with pytest.raises(FormatError) as err:
            load_vectors(path)
        assert "line 1" in str(err.value)


def test_load_vectors_width_mismatch(tmp_path):
    path = tmp_path / "w.txt"
    row = "tok " + " ".join("0.1" for _ in range(19))
    path.write_text("3 20\n" + row + "\n", encoding="utf-8")
    with pytest.raises(FormatError) as err:
        load_vectors(path)
    assert "20" in str(err.value) and "line 2" in str(err.value)


def test_load_vectors_row_errors(tmp_path):
    bad = {
        "dup.txt": "2 1\na 1.0\na 2.0\n",
        "nan.txt": "1 1\na nan\n",
        "word.txt": "1 1\na x\n",
        "extra.txt": "1 1\na 1.0\nb 2.0\n",
    }
    for name, text in bad.items():
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        with pytest.raises(FormatError):
            load_vectors(path)


def test_load_vectors_missing_rows(tmp_path):
    path = tmp_path / "short.txt"
    path.write_text("3 1\na 1.0\n", encoding="utf-8")
    with pytest.raises(FormatError, match="declared 3"):
        load_vectors(path)


# ------------------------------------------------------------ configuration


def test_train_config_validation():
    bad = [
        {"dim": 0},
        {"window": 0},
        {"min_count": 0},
        {"epochs": 0},
        {"negatives": -1},
        {"lr_start": 0.0},
        {"lr_floor": 0.0},
        {"lr_floor": 0.5, "lr_start": 0.1},
        {"threads": -1},
    ]
    for kwargs in bad:
        with pytest.raises(ConfigError):
            TrainConfig(**kwargs).validate()
    with pytest.raises(ConfigError):
        TrainConfig(subword=SubwordConfig(enabled=True, ngram_min=5, ngram_max=3)).validate()
    with pytest.raises(ConfigError):
        TrainConfig(subword=SubwordConfig(enabled=True, buckets=0)).validate()
    TrainConfig().validate()  # defaults pass
