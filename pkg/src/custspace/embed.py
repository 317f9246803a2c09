"""Skip-gram customer embeddings with negative sampling.

Trains dense vectors for customer-key tokens from co-occurrence
sentences.  Both vector matrices live in float64; the input matrix starts
uniform in [-0.5/dim, +0.5/dim] and the output matrix at zero, so the
expected fresh-model loss per pair is (1 + negatives) * ln 2.  All
randomness (window widths, negative draws) is pre-drawn with numpy
generators outside the inner loop; a pure-python reference path consumes
the same draws and produces bit-identical vectors, which the equivalence
tests pin down.

Optional subword mode hashes character n-grams of the wrapped token
("<" + token + ">") into a bucket matrix; a served vector is then the
token vector plus its bucket vectors, and tokens outside the vocabulary
still resolve from buckets alone.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .corpus import SentenceCorpus
from .errors import ConfigError, CorpusTooSmallError, DomainError, FormatError
from .hashing import fnv1a_64


@dataclass
class SubwordConfig:
    """Character n-gram hashing options; disabled by default."""

    enabled: bool = False
    ngram_min: int = 3
    ngram_max: int = 6
    buckets: int = 2_000_000


@dataclass
class TrainConfig:
    """Skip-gram training hyperparameters."""

    dim: int = 20
    window: int = 40
    min_count: int = 5
    epochs: int = 100
    negatives: int = 5
    lr_start: float = 0.025
    lr_floor: float = 1e-4
    seed: int = 1
    threads: int = 0
    subword: SubwordConfig = field(default_factory=SubwordConfig)

    def validate(self) -> None:
        for name in ("dim", "window", "min_count", "epochs"):
            if getattr(self, name) < 1:
                raise ConfigError(f"embed.{name} must be >= 1")
        if self.negatives < 0:
            raise ConfigError("embed.negatives must be >= 0")
        if self.lr_start <= 0.0:
            raise ConfigError("embed.lr_start must be > 0")
        if not 0.0 < self.lr_floor <= self.lr_start:
            raise ConfigError("embed.lr_floor must lie in (0, lr_start]")
        if self.threads < 0:
            raise ConfigError("embed.threads must be >= 0")
        if self.subword.enabled:
            if not 1 <= self.subword.ngram_min <= self.subword.ngram_max:
                raise ConfigError("embed.subword ngram bounds must satisfy 1 <= min <= max")
            if not 1 <= self.subword.buckets <= 2**31 - 1:
                raise ConfigError("embed.subword.buckets must lie in [1, 2^31 - 1]")


@dataclass
class Vocabulary:
    """Tokens surviving the min-count filter, ordered by frequency."""

    tokens: list[str]
    counts: np.ndarray
    index: dict[str, int]
    total: int


@dataclass
class EmbeddingSpace:
    """Trained embedding state: vocabulary plus vector matrices."""

    vocab: Vocabulary
    input_vectors: np.ndarray
    output_vectors: np.ndarray
    subword: SubwordConfig = field(default_factory=SubwordConfig)
    bucket_vectors: np.ndarray | None = None
    epoch_losses: list[float] = field(default_factory=list)

    @property
    def dim(self) -> int:
        return int(self.input_vectors.shape[1])

    def get(self, token: str) -> np.ndarray | None:
        return vector_of(self, token)


def build_vocab(corpus: SentenceCorpus, min_count: int) -> Vocabulary:
    """Count tokens and keep those seen at least ``min_count`` times.

    Tokens are ordered by descending count, ties lexicographic, so vocab
    indices are stable for a given corpus.  An empty result raises
    CorpusTooSmallError.
    """
    if min_count < 1:
        raise ConfigError("embed.min_count must be >= 1")
    freq: dict[str, int] = {}
    for sentence in corpus.sentences:
        for token in sentence:
            freq[token] = freq.get(token, 0) + 1
    kept = sorted(
        (t for t, c in freq.items() if c >= min_count),
        key=lambda t: (-freq[t], t),
    )
    if not kept:
        raise CorpusTooSmallError(f"no token appears at least min_count={min_count} times")
    counts = np.array([freq[t] for t in kept], dtype=np.int64)
    return Vocabulary(
        tokens=kept,
        counts=counts,
        index={t: i for i, t in enumerate(kept)},
        total=int(counts.sum()),
    )


def init_embeddings(vocab: Vocabulary, config: TrainConfig) -> EmbeddingSpace:
    """Allocate and seed the vector matrices for ``vocab``."""
    rng = np.random.default_rng(config.seed)
    v = len(vocab.tokens)
    inp = (rng.random((v, config.dim)) - 0.5) / config.dim
    out = np.zeros((v, config.dim), dtype=np.float64)
    buckets = None
    if config.subword.enabled:
        buckets = (rng.random((config.subword.buckets, config.dim)) - 0.5) / config.dim
    return EmbeddingSpace(
        vocab=vocab,
        input_vectors=inp,
        output_vectors=out,
        subword=config.subword,
        bucket_vectors=buckets,
    )


def ngram_indices(token: str, subword: SubwordConfig) -> list[int]:
    """Bucket indices of the wrapped token's character n-grams.

    The token is wrapped as "<token>"; n-grams of each length from
    ngram_min to ngram_max are enumerated left to right and hashed with
    FNV-1a 64 modulo the bucket count.
    """
    wrapped = f"<{token}>"
    out: list[int] = []
    for n in range(subword.ngram_min, subword.ngram_max + 1):
        for i in range(len(wrapped) - n + 1):
            out.append(fnv1a_64(wrapped[i : i + n].encode("utf-8")) % subword.buckets)
    return out


def vector_of(space: EmbeddingSpace, token: str) -> np.ndarray | None:
    """Served vector for ``token``, or None when the space has no vector.

    Without subword mode this is the token's input vector, None for
    out-of-vocabulary tokens.  With subword mode the token vector (when
    in vocabulary) and its n-gram bucket vectors are summed, so unseen
    tokens still resolve as long as they yield at least one n-gram.
    """
    idx = space.vocab.index.get(token)
    if not space.subword.enabled:
        if idx is None:
            return None
        return space.input_vectors[idx].copy()
    grams = ngram_indices(token, space.subword)
    if idx is None and not grams:
        return None
    vec = np.zeros(space.dim, dtype=np.float64)
    if idx is not None:
        vec += space.input_vectors[idx]
    for g in grams:
        vec += space.bucket_vectors[g]
    return vec


def negative_sampling_cdf(vocab: Vocabulary) -> np.ndarray:
    """Cumulative distribution over tokens with probability ~ count^0.75."""
    weights = vocab.counts.astype(np.float64) ** 0.75
    cdf = np.cumsum(weights)
    cdf /= cdf[-1]
    return cdf


def sgns_loss_and_grads(
    v: np.ndarray, u_pos: np.ndarray, u_negs: np.ndarray
) -> tuple[float, np.ndarray, np.ndarray, np.ndarray]:
    """Loss and exact gradients for one skip-gram negative-sampling pair.

    loss = -log sigmoid(u_pos . v) - sum_n log sigmoid(-u_n . v).
    Returns (loss, d/dv, d/du_pos, d/du_negs).  Pure; the
    finite-difference checks call this directly.
    """
    s_pos = float(np.dot(u_pos, v))
    loss = float(np.logaddexp(0.0, -s_pos))
    sig_pos = 1.0 / (1.0 + math.exp(-s_pos))
    grad_v = -(1.0 - sig_pos) * u_pos
    grad_u_pos = -(1.0 - sig_pos) * v
    grad_u_negs = np.zeros_like(u_negs)
    for j in range(u_negs.shape[0]):
        s = float(np.dot(u_negs[j], v))
        loss += float(np.logaddexp(0.0, s))
        sig = 1.0 / (1.0 + math.exp(-s))
        grad_v = grad_v + sig * u_negs[j]
        grad_u_negs[j] = sig * v
    return loss, grad_v, grad_u_pos, grad_u_negs


def _apply_pair(
    inp: np.ndarray,
    out: np.ndarray,
    buckets: np.ndarray | None,
    center_rows: Sequence[int] | None,
    center: int,
    context: int,
    negatives: np.ndarray,
    lr: float,
) -> float:
    """Reference single-pair update; mirrors the compiled kernel exactly.

    Dot products run over an explicit python loop so the summation order
    matches the kernel term for term.  When ``center_rows`` is given
    (subword mode) the served center vector is the token row plus those
    bucket rows, and the accumulated gradient lands on every constituent.
    """
    dim = inp.shape[1]
    if center_rows is None:
        v = inp[center]
    else:
        v = inp[center].copy()
        for gidx in center_rows:
            v += buckets[gidx]
    neu1e = np.zeros(dim)
    loss = 0.0

    u = out[context]
    s = 0.0
    for d in range(dim):
        s += u[d] * v[d]
    loss += float(np.logaddexp(0.0, -s))
    g = (1.0 - 1.0 / (1.0 + math.exp(-s))) * lr
    for d in range(dim):
        neu1e[d] += g * u[d]
        u[d] += g * v[d]

    for j in range(negatives.shape[0]):
        un = out[negatives[j]]
        s = 0.0
        for d in range(dim):
            s += un[d] * v[d]
        loss += float(np.logaddexp(0.0, s))
        g = (0.0 - 1.0 / (1.0 + math.exp(-s))) * lr
        for d in range(dim):
            neu1e[d] += g * un[d]
            un[d] += g * v[d]

    if center_rows is None:
        row = inp[center]
        for d in range(dim):
            row[d] += neu1e[d]
    else:
        inp[center] += neu1e
        for gidx in center_rows:
            buckets[gidx] += neu1e
    return loss


def sgns_step(
    space: EmbeddingSpace,
    center_index: int,
    context_index: int,
    negative_indices: Sequence[int],
    lr: float,
) -> float:
    """Apply one skip-gram negative-sampling update in place; return its loss.

    Output rows for the context and each negative move first, computed
    against the pre-update center vector; the center vector then absorbs
    the accumulated gradient.  With subword mode enabled the center's
    n-gram bucket rows receive the same accumulated gradient.
    """
    v_size = len(space.vocab.tokens)
    for name, idx in (("center_index", center_index), ("context_index", context_index)):
        if not 0 <= idx < v_size:
            raise DomainError(f"{name} {idx} outside vocabulary of size {v_size}")
    negs = np.asarray(list(negative_indices), dtype=np.int64)
    if negs.size and (negs.min() < 0 or negs.max() >= v_size):
        raise DomainError(f"negative index outside vocabulary of size {v_size}")
    if lr <= 0.0:
        raise DomainError(f"lr must be > 0, got {lr}")
    rows = None
    if space.subword.enabled:
        rows = ngram_indices(space.vocab.tokens[center_index], space.subword)
    return _apply_pair(
        space.input_vectors,
        space.output_vectors,
        space.bucket_vectors,
        rows,
        center_index,
        context_index,
        negs,
        lr,
    )


def _token_id_sentences(corpus: SentenceCorpus, vocab: Vocabulary) -> list[np.ndarray]:
    """In-vocabulary token-id sequences that can produce at least one pair."""
    ids = []
    for sentence in corpus.sentences:
        arr = np.array(
            [vocab.index[t] for t in sentence if t in vocab.index], dtype=np.int32
        )
        if arr.size >= 2:
            ids.append(arr)
    return ids


def _draw_pairs(
    flat: np.ndarray,
    starts: np.ndarray,
    lengths: np.ndarray,
    window: int,
    negatives: int,
    cdf: np.ndarray,
    rng: np.random.Generator,
    visit_base: int,
    horizon: int,
    lr_start: float,
    lr_floor: float,
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Draw one epoch of training pairs with negatives and learning rates.

    ``flat`` concatenates token-id sentences delimited by ``starts`` and
    ``lengths``.  Each position draws a reduced window uniformly from
    1..window and yields one pair per in-window context token.  The
    learning rate decays linearly from lr_start toward lr_floor across
    ``horizon`` position visits, of which ``visit_base`` already passed.
    Negatives follow ``cdf`` and are redrawn while colliding with the
    pair's context token (skipped for single-token vocabularies, where
    exclusion is impossible).
    """
    n_pos = flat.shape[0]
    sent_of = np.repeat(np.arange(starts.shape[0]), lengths)
    within = np.arange(n_pos) - starts[sent_of]

    b = rng.integers(1, window + 1, size=n_pos)
    lo = np.maximum(within - b, 0)
    hi = np.minimum(within + b, lengths[sent_of] - 1)
    cnt = hi - lo  # per-center context count, self excluded

    frac = np.minimum(1.0, (visit_base + np.arange(n_pos)) / max(1, horizon))
    lr_pos = np.maximum(lr_floor, lr_start - (lr_start - lr_floor) * frac)

    total = int(cnt.sum())
    if total == 0:
        empty = np.zeros(0, dtype=np.int32)
        return empty, empty, np.zeros((0, max(negatives, 0)), dtype=np.int32), np.zeros(0)

    block_start = np.repeat(np.cumsum(cnt) - cnt, cnt)
    k = np.arange(total) - block_start
    offs = np.repeat(lo, cnt) + k
    offs += offs >= np.repeat(within, cnt)
    ctx_pos = np.repeat(starts[sent_of], cnt) + offs

    centers = np.repeat(flat, cnt).astype(np.int32)
    contexts = flat[ctx_pos].astype(np.int32)
    lrs = np.repeat(lr_pos, cnt)

    if negatives > 0:
        neg = np.searchsorted(cdf, rng.random((total, negatives)), side="right")
        neg = neg.astype(np.int32)
        if cdf.shape[0] > 1:
            mask = neg == contexts[:, None]
            while mask.any():
                redraw = np.searchsorted(cdf, rng.random(int(mask.sum())), side="right")
                neg[mask] = redraw.astype(np.int32)
                mask = neg == contexts[:, None]
    else:
        neg = np.zeros((total, 0), dtype=np.int32)
    return centers, contexts, neg, lrs


def _run_pairs_reference(
    space: EmbeddingSpace,
    gram_rows: list[list[int]] | None,
    centers: np.ndarray,
    contexts: np.ndarray,
    negatives: np.ndarray,
    lrs: np.ndarray,
) -> float:
    loss = 0.0
    for i in range(centers.shape[0]):
        c = int(centers[i])
        rows = gram_rows[c] if gram_rows is not None else None
        loss += _apply_pair(
            space.input_vectors,
            space.output_vectors,
            space.bucket_vectors,
            rows,
            c,
            int(contexts[i]),
            negatives[i],
            float(lrs[i]),
        )
    return loss


@dataclass
class _Shard:
    """One training shard: concatenated sentences plus its own generator."""

    flat: np.ndarray
    starts: np.ndarray
    lengths: np.ndarray
    rng: np.random.Generator

    @property
    def n_positions(self) -> int:
        return int(self.flat.shape[0])


def _make_shard(sentences: list[np.ndarray], rng: np.random.Generator) -> _Shard:
    lengths = np.array([s.shape[0] for s in sentences], dtype=np.int64)
    starts = np.cumsum(lengths) - lengths
    flat = np.concatenate(sentences) if sentences else np.zeros(0, dtype=np.int32)
    return _Shard(flat=flat, starts=starts, lengths=lengths, rng=rng)


def train(corpus: SentenceCorpus, config: TrainConfig, *, _reference: bool = False) -> EmbeddingSpace:
    """Train an embedding space on a sentence corpus.

    With threads == 0 (or 1) training is single-threaded and fully
    deterministic for a given corpus and config.  With threads > 1,
    sentences are sharded round-robin and shards train concurrently on
    the shared matrices; results stay reproducible only in distribution,
    not bit for bit.  Subword training always runs the reference path.

    ``_reference`` forces the pure-python update loop; it exists so tests
    can pin the compiled kernel against it.
    """
    config.validate()
    vocab = build_vocab(corpus, config.min_count)
    space = init_embeddings(vocab, config)
    sents = _token_id_sentences(corpus, vocab)
    if not sents:
        raise CorpusTooSmallError("no sentence holds two in-vocabulary tokens")
    cdf = negative_sampling_cdf(vocab)

    use_reference = _reference or config.subword.enabled
    gram_rows = None
    if config.subword.enabled:
        gram_rows = [ngram_indices(t, config.subword) for t in vocab.tokens]

    n_threads = 0 if use_reference else config.threads
    if n_threads <= 1:
        shards = [_make_shard(sents, np.random.default_rng(config.seed))]
    else:
        parts = [sents[i::n_threads] for i in range(n_threads)]
        parts = [p for p in parts if p]
        seqs = np.random.SeedSequence(config.seed).spawn(len(parts))
        shards = [_make_shard(p, np.random.default_rng(s)) for p, s in zip(parts, seqs)]

    if not use_reference:
        from ._kernels import sgns_pairs

    def run_shard(shard: _Shard, epoch: int) -> tuple[float, int]:
        centers, contexts, negs, lrs = _draw_pairs(
            shard.flat,
            shard.starts,
            shard.lengths,
            config.window,
            config.negatives,
            cdf,
            shard.rng,
            visit_base=epoch * shard.n_positions,
            horizon=config.epochs * shard.n_positions,
            lr_start=config.lr_start,
            lr_floor=config.lr_floor,
        )
        if centers.shape[0] == 0:
            return 0.0, 0
        if use_reference:
            loss = _run_pairs_reference(space, gram_rows, centers, contexts, negs, lrs)
        else:
            loss = sgns_pairs(
                space.input_vectors, space.output_vectors, centers, contexts, negs, lrs
            )
        return float(loss), int(centers.shape[0])

    for epoch in range(config.epochs):
        if len(shards) == 1:
            results = [run_shard(shards[0], epoch)]
        else:
            with ThreadPoolExecutor(max_workers=len(shards)) as pool:
                results = list(pool.map(lambda sh: run_shard(sh, epoch), shards))
        loss_sum = sum(r[0] for r in results)
        n_pairs = sum(r[1] for r in results)
        space.epoch_losses.append(loss_sum / n_pairs if n_pairs else 0.0)
    return space


@dataclass
class VectorStore:
    """Immutable token-to-vector lookup loaded from the text format."""

    tokens: list[str]
    vectors: np.ndarray
    index: dict[str, int]

    @property
    def dim(self) -> int:
        return int(self.vectors.shape[1])

    def get(self, token: str) -> np.ndarray | None:
        idx = self.index.get(token)
        return None if idx is None else self.vectors[idx].copy()


def save_vectors(space: EmbeddingSpace | VectorStore, path: str | Path) -> None:
    """Write served vectors in the plain text format: header then rows.

    The header line holds the vector count and dimension; each following
    line holds a token and its coordinates, space separated.  Floats are
    written with ``repr`` so they round-trip exactly.
    """
    if isinstance(space, EmbeddingSpace):
        tokens = space.vocab.tokens
        rows = (vector_of(space, t) for t in tokens)
        dim = space.dim
    else:
        tokens = space.tokens
        rows = (space.vectors[i] for i in range(len(tokens)))
        dim = space.dim
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(f"{len(tokens)} {dim}\n")
        for token, vec in zip(tokens, rows):
            fh.write(token + " " + " ".join(repr(float(x)) for x in vec) + "\n")


def load_vectors(path: str | Path) -> VectorStore:
    """Load vectors written by :func:`save_vectors`."""
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().strip().split()
        if len(header) != 2:
            raise FormatError("header must be '<count> <dim>'", line=1)
        try:
            count, dim = int(header[0]), int(header[1])
        except ValueError:
            raise FormatError("header must hold two integers", line=1)
        if count < 0 or dim < 1:
            raise FormatError("header counts must be non-negative and dim >= 1", line=1)
        tokens: list[str] = []
        index: dict[str, int] = {}
        mat = np.zeros((count, dim), dtype=np.float64)
        row = 0
        for line_no, line in enumerate(fh, start=2):
            line = line.rstrip("\n")
            if not line:
                continue
            parts = line.split(" ")
            if len(parts) != dim + 1:
                raise FormatError(f"expected 1 token and {dim} values", line=line_no)
            if row >= count:
                raise FormatError(f"more than {count} vector rows", line=line_no)
            token = parts[0]
            if token in index:
                raise FormatError(f"duplicate token {token!r}", line=line_no)
            try:
                vals = [float(p) for p in parts[1:]]
            except ValueError as exc:
                raise FormatError(str(exc), line=line_no)
            if not all(math.isfinite(v) for v in vals):
                raise FormatError("vector values must be finite", line=line_no)
            index[token] = row
            tokens.append(token)
            mat[row] = vals
            row += 1
    if row != count:
        raise FormatError(f"header declared {count} vectors, found {row}")
    return VectorStore(tokens=tokens, vectors=mat, index=index)
