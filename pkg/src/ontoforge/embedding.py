"""Skip-gram negative-sampling embeddings trained per corpus partition.

The trainer is a plain SGD loop over (center, context) pairs. For each pair
the context vector is pushed toward the center's input vector and a handful
of noise words, drawn proportionally to count^0.75, are pushed away. The
learning rate decays linearly from ``initial_lr`` down to ``initial_lr/1e4``
over the total number of training pairs; the total is obtained by a counting
pass that replays the exact random choices (frequent-word subsampling and
per-center window shrinking) the training pass will make.
"""

from __future__ import annotations

import concurrent.futures
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Iterable, Iterator, Sequence

import numpy as np
from scipy.special import expit

from ontoforge.errors import EmbeddingError, OOVError

TokenStream = Sequence[Sequence[str]]

NOISE_EXPONENT = 0.75
LR_FLOOR_RATIO = 1e-4


@dataclass(frozen=True)
class TrainConfig:
    dim: int = 100
    window: int = 5
    negatives: int = 5
    epochs: int = 5
    initial_lr: float = 0.025
    min_count: int = 5
    subsample_t: float = 1e-3
    rng_seed: int = 1
    deterministic: bool = True
    workers: int = 1

    def validate(self) -> None:
        checks = [
            (self.dim >= 1, "dim must be >= 1"),
            (self.window >= 1, "window must be >= 1"),
            (self.negatives >= 1, "negatives must be >= 1"),
            (self.epochs >= 1, "epochs must be >= 1"),
            (self.initial_lr > 0, "initial_lr must be > 0"),
            (self.min_count >= 1, "min_count must be >= 1"),
            (self.subsample_t > 0, "subsample_t must be > 0"),
            (self.workers >= 1, "workers must be >= 1"),
        ]
        for ok, message in checks:
            if not ok:
                raise EmbeddingError(f"invalid train config: {message}")


class VocabTable:
    """Vocabulary with stable indices and a count^0.75 noise distribution."""

    def __init__(self, tokens: Sequence[str], counts: Sequence[int]):
        if len(tokens) != len(counts):
            raise EmbeddingError("tokens and counts length mismatch")
        if not tokens:
            raise EmbeddingError("empty vocabulary")
        self.tokens = list(tokens)
        self.counts = np.asarray(counts, dtype=np.int64)
        if (self.counts < 1).any():
            raise EmbeddingError("vocabulary counts must be positive")
        self.index = {token: i for i, token in enumerate(self.tokens)}
        if len(self.index) != len(self.tokens):
            raise EmbeddingError("duplicate token in vocabulary")
        weights = self.counts.astype(np.float64) ** NOISE_EXPONENT
        self.noise_probs = weights / weights.sum()
        self.noise_cdf = np.cumsum(self.noise_probs)
        self.noise_cdf[-1] = 1.0

    def __len__(self) -> int:
        return len(self.tokens)

    def __contains__(self, token: str) -> bool:
        return token in self.index


@dataclass
class EmbeddingModel:
    """Trained vectors for one partition: V x dim input and output matrices."""

    partition: int | None
    vocab: VocabTable
    vectors_in: np.ndarray
    vectors_out: np.ndarray
    config: TrainConfig

    def __post_init__(self):
        shape = (len(self.vocab), self.config.dim)
        if self.vectors_in.shape != shape or self.vectors_out.shape != shape:
            raise EmbeddingError(f"vector matrices must have shape {shape}")


def build_vocab(tokens: TokenStream, config: TrainConfig) -> VocabTable:
    """Count tokens and keep those with count >= min_count.

    Indices are assigned by count descending then token ascending, so equal
    corpora always produce identical tables.
    """
    config.validate()
    counts: dict[str, int] = {}
    for doc in tokens:
        for token in doc:
            counts[token] = counts.get(token, 0) + 1
    kept = [(t, c) for t, c in counts.items() if c >= config.min_count]
    if not kept:
        raise EmbeddingError(
            f"empty vocabulary: no token reaches min_count={config.min_count}"
        )
    kept.sort(key=lambda item: (-item[1], item[0]))
    return VocabTable([t for t, _ in kept], [c for _, c in kept])


def _keep_probs(vocab: VocabTable, subsample_t: float) -> np.ndarray:
    # Per-index probability of keeping an occurrence: min(1, sqrt(t / f)).
    freq = vocab.counts.astype(np.float64) / float(vocab.counts.sum())
    return np.minimum(1.0, np.sqrt(subsample_t / freq))


def _doc_ids(tokens: TokenStream, vocab: VocabTable) -> list[np.ndarray]:
    docs = []
    for doc in tokens:
        ids = [vocab.index[t] for t in doc if t in vocab.index]
        if ids:
            docs.append(np.asarray(ids, dtype=np.int64))
    return docs


def _iter_pairs(
    docs: list[np.ndarray],
    keep: np.ndarray,
    window: int,
    epochs: int,
    rng: np.random.Generator,
) -> Iterator[tuple[int, int]]:
    """Yield (center, context) index pairs in training order.

    Random draws happen once per document (subsampling) plus once per kept
    token (window size), so a second generator seeded identically replays
    the same pair sequence.
    """
    for _ in range(epochs):
        for ids in docs:
            kept = ids[rng.random(len(ids)) < keep[ids]]
            n = len(kept)
            if n == 0:
                continue
            spans = rng.integers(1, window + 1, size=n)
            for i in range(n):
                lo = max(0, i - spans[i])
                hi = min(n, i + spans[i] + 1)
                center = int(kept[i])
                for j in range(lo, hi):
                    if j != i:
                        yield center, int(kept[j])


def _draw_negatives(
    rng: np.random.Generator,
    cdf: np.ndarray,
    count: int,
    context: int,
    center: int,
    vocab_size: int,
) -> list[int]:
    # Noise words never equal the context or the center (a word must not be
    # pushed away from itself); degenerate vocabularies relax the exclusions
    # so the draw always terminates.
    negatives = []
    while len(negatives) < count:
        sample = int(np.searchsorted(cdf, rng.random(), side="right"))
        if vocab_size > 1 and sample == context:
            continue
        if vocab_size > 2 and sample == center:
            continue
        negatives.append(sample)
    return negatives


def _train_pairs(
    vectors_in: np.ndarray,
    vectors_out: np.ndarray,
    pairs: Iterable[tuple[int, int]],
    cdf: np.ndarray,
    config: TrainConfig,
    rng_neg: np.random.Generator,
    total_pairs: int,
    progress: list[int],
) -> None:
    lr0 = config.initial_lr
    lr_floor = lr0 * LR_FLOOR_RATIO
    vocab_size = vectors_in.shape[0]
    labels = np.zeros(config.negatives + 1, dtype=np.float32)
    labels[0] = 1.0
    indices = np.empty(config.negatives + 1, dtype=np.int64)
    for center, context in pairs:
        lr = max(lr_floor, lr0 - (lr0 - lr_floor) * (progress[0] / total_pairs))
        progress[0] += 1
        indices[0] = context
        indices[1:] = _draw_negatives(
            rng_neg, cdf, config.negatives, context, center, vocab_size
        )
        center_vec = vectors_in[center]
        out_rows = vectors_out[indices]  # fancy indexing copies: pre-update rows
        scores = expit(out_rows @ center_vec)
        step = (labels - scores) * np.float32(lr)
        np.add.at(vectors_out, indices, np.outer(step, center_vec))
        vectors_in[center] += step @ out_rows


def train(tokens: TokenStream, config: TrainConfig, partition: int | None = None) -> EmbeddingModel:
    """Train a skip-gram negative-sampling model over per-document token lists.

    With ``deterministic=True`` (one worker) equal seeds give bit-identical
    matrices. With more workers, documents are sharded and workers update the
    shared matrices without locks, so results vary run to run.
    """
    config.validate()
    vocab = build_vocab(tokens, config)
    docs = _doc_ids(tokens, vocab)
    keep = _keep_probs(vocab, config.subsample_t)

    workers = 1 if config.deterministic else config.workers
    # One child seed for init, then a (pairs, negatives) seed pair per worker.
    # The pair stream is replayed: once to count pairs for the lr schedule,
    # once to train.
    seeds = np.random.SeedSequence(config.rng_seed).spawn(1 + 2 * workers)
    init_rng = np.random.default_rng(seeds[0])
    vectors_in = (
        (init_rng.random((len(vocab), config.dim), dtype=np.float32) - 0.5) / config.dim
    )
    vectors_out = np.zeros((len(vocab), config.dim), dtype=np.float32)

    shards = [docs[i::workers] for i in range(workers)]

    def shard_streams(worker: int) -> tuple[np.random.Generator, np.random.Generator]:
        return (
            np.random.default_rng(seeds[1 + 2 * worker]),
            np.random.default_rng(seeds[2 + 2 * worker]),
        )

    totals = []
    for worker in range(workers):
        count_rng, _ = shard_streams(worker)
        totals.append(
            sum(1 for _ in _iter_pairs(shards[worker], keep, config.window, config.epochs, count_rng))
        )
    total_pairs = max(1, sum(totals))

    progress = [0]

    def run_worker(worker: int) -> None:
        pair_rng, neg_rng = shard_streams(worker)
        pairs = _iter_pairs(shards[worker], keep, config.window, config.epochs, pair_rng)
        _train_pairs(
            vectors_in, vectors_out, pairs, vocab.noise_cdf, config, neg_rng, total_pairs, progress
        )

    if workers == 1:
        run_worker(0)
    else:
        with concurrent.futures.ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(run_worker, range(workers)))

    if not np.isfinite(vectors_in).all() or not np.isfinite(vectors_out).all():
        raise EmbeddingError("training produced non-finite vectors")
    return EmbeddingModel(
        partition=partition,
        vocab=vocab,
        vectors_in=vectors_in,
        vectors_out=vectors_out,
        config=config,
    )


def pair_loss(
    vectors_in: np.ndarray,
    vectors_out: np.ndarray,
    center: int,
    context: int,
    negatives: Sequence[int],
) -> float:
    """Negative-sampling logistic loss for one (center, context, negatives) triple."""
    center_vec = vectors_in[center].astype(np.float64)
    loss = float(np.logaddexp(0.0, -(vectors_out[context].astype(np.float64) @ center_vec)))
    for neg in negatives:
        loss += float(np.logaddexp(0.0, vectors_out[neg].astype(np.float64) @ center_vec))
    return loss


def pair_gradients(
    vectors_in: np.ndarray,
    vectors_out: np.ndarray,
    center: int,
    context: int,
    negatives: Sequence[int],
) -> tuple[np.ndarray, np.ndarray]:
    """Analytic gradients of pair_loss w.r.t. both full matrices.

    Returned arrays are float64 and zero except for the rows the triple
    touches; duplicate negatives accumulate.
    """
    grad_in = np.zeros(vectors_in.shape, dtype=np.float64)
    grad_out = np.zeros(vectors_out.shape, dtype=np.float64)
    center_vec = vectors_in[center].astype(np.float64)
    pos_row = vectors_out[context].astype(np.float64)
    pos_err = expit(pos_row @ center_vec) - 1.0
    grad_out[context] += pos_err * center_vec
    grad_in[center] += pos_err * pos_row
    for neg in negatives:
        neg_row = vectors_out[neg].astype(np.float64)
        neg_err = expit(neg_row @ center_vec)
        grad_out[neg] += neg_err * center_vec
        grad_in[center] += neg_err * neg_row
    return grad_in, grad_out


def _require_token(model: EmbeddingModel, token: str) -> int:
    idx = model.vocab.index.get(token)
    if idx is None:
        raise OOVError(token)
    return idx


def cosine(model: EmbeddingModel, a: str, b: str) -> float:
    """Cosine similarity of the input vectors of two vocabulary tokens."""
    va = model.vectors_in[_require_token(model, a)].astype(np.float64)
    vb = model.vectors_in[_require_token(model, b)].astype(np.float64)
    denom = np.linalg.norm(va) * np.linalg.norm(vb)
    if denom == 0.0:
        return 0.0
    return float(np.clip(va @ vb / denom, -1.0, 1.0))


def nearest_neighbors(model: EmbeddingModel, query: str, k: int) -> list[tuple[str, float]]:
    """Top-k tokens by cosine to the query's input vector, query excluded.

    Sorted by similarity descending, ties broken by token ascending; fewer
    than k results only when the vocabulary is smaller.
    """
    if k < 1:
        raise EmbeddingError("k must be >= 1")
    query_idx = _require_token(model, query)
    matrix = model.vectors_in.astype(np.float64)
    query_vec = matrix[query_idx]
    norms = np.linalg.norm(matrix, axis=1)
    query_norm = np.linalg.norm(query_vec)
    denom = norms * query_norm
    denom[denom == 0.0] = np.inf
    sims = np.clip(matrix @ query_vec / denom, -1.0, 1.0)
    order = sorted(
        (i for i in range(len(model.vocab)) if i != query_idx),
        key=lambda i: (-sims[i], model.vocab.tokens[i]),
    )
    return [(model.vocab.tokens[i], float(sims[i])) for i in order[:k]]


def save_model(model: EmbeddingModel, path: str | Path) -> None:
    """Write a text vector file ("V dim" header, then "token v1 ... vdim" rows)
    plus a "<path>.counts" sidecar of "token count" lines.

    Values are printed with 9 significant digits, enough for float32
    round-trips to be bit-exact.
    """
    path = Path(path)
    with path.open("w", encoding="utf-8") as handle:
        handle.write(f"{len(model.vocab)} {model.config.dim}\n")
        for i, token in enumerate(model.vocab.tokens):
            values = " ".join(format(float(x), ".9g") for x in model.vectors_in[i])
            handle.write(f"{token} {values}\n")
    sidecar = path.with_name(path.name + ".counts")
    with sidecar.open("w", encoding="utf-8") as handle:
        for token, count in zip(model.vocab.tokens, model.vocab.counts):
            handle.write(f"{token} {int(count)}\n")


def load_model(path: str | Path, partition: int | None = None) -> EmbeddingModel:
    """Read a vector file written by save_model.

    The counts sidecar is optional; without it all counts default to 1.
    Output vectors are not persisted and come back as zeros.
    """
    path = Path(path)
    with path.open(encoding="utf-8") as handle:
        header = handle.readline()
        parts = header.split()
        if len(parts) != 2:
            raise EmbeddingError(f"{path}: line 1: expected header 'V dim'")
        try:
            vocab_size, dim = int(parts[0]), int(parts[1])
        except ValueError:
            raise EmbeddingError(f"{path}: line 1: non-integer header fields") from None
        if vocab_size < 1 or dim < 1:
            raise EmbeddingError(f"{path}: line 1: header values must be positive")
        tokens: list[str] = []
        rows = np.empty((vocab_size, dim), dtype=np.float32)
        lineno = 1
        for line in handle:
            lineno += 1
            line = line.rstrip("\n")
            if not line:
                continue
            if len(tokens) >= vocab_size:
                raise EmbeddingError(f"{path}: line {lineno}: more rows than header declares")
            fields = line.split(" ")
            if len(fields) != dim + 1:
                raise EmbeddingError(
                    f"{path}: line {lineno}: expected token plus {dim} values"
                )
            try:
                rows[len(tokens)] = [np.float32(v) for v in fields[1:]]
            except ValueError:
                raise EmbeddingError(f"{path}: line {lineno}: non-numeric vector value") from None
            tokens.append(fields[0])
        if len(tokens) != vocab_size:
            raise EmbeddingError(
                f"{path}: line {lineno}: header declares {vocab_size} rows, found {len(tokens)}"
            )

    counts = [1] * vocab_size
    sidecar = path.with_name(path.name + ".counts")
    if sidecar.exists():
        by_token: dict[str, int] = {}
        with sidecar.open(encoding="utf-8") as handle:
            for lineno, line in enumerate(handle, start=1):
                line = line.strip()
                if not line:
                    continue
                fields = line.split(" ")
                if len(fields) != 2:
                    raise EmbeddingError(f"{sidecar}: line {lineno}: expected 'token count'")
                try:
                    by_token[fields[0]] = int(fields[1])
                except ValueError:
                    raise EmbeddingError(f"{sidecar}: line {lineno}: non-integer count") from None
        missing = [t for t in tokens if t not in by_token]
        if missing:
            raise EmbeddingError(f"{sidecar}: missing counts for {missing[:3]}")
        counts = [by_token[t] for t in tokens]

    vocab = VocabTable(tokens, counts)
    config = replace(TrainConfig(), dim=dim, min_count=1)
    return EmbeddingModel(
        partition=partition,
        vocab=vocab,
        vectors_in=rows,
        vectors_out=np.zeros((vocab_size, dim), dtype=np.float32),
        config=config,
    )
