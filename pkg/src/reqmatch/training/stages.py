"""The four training stages: masked-LM, dropout-contrastive, denoising, supervised.

All stages share one skeleton: draw deterministic mini-batches, backprop
through the tape, apply Adam in place, periodically score the live weights
on the validation split, and return a checkpoint rebuilt from the best
snapshot (first argmax on ties; the final step always gets scored).
Batches trim to the longest real sequence they contain, which masked
attention makes exact rather than approximate. Every random draw derives
from the stage seed, so reruns are bit-identical.
"""

from __future__ import annotations

import math
import time

import numpy as np

from ..encoder import Checkpoint, forward_batch
from ..errors import DataError, UsageError
from ..matcher import build_index, recommend_requirements
from ..evalkit import one_shot_recall
from ..numcore import ops
from ..numcore.adam import AdamState, adam_step
from ..numcore.tensor import zero_grads
from ..textprep import MASK_ID, apply_mlm_mask, apply_tsdae_noise, encode
from .config import StageConfig
from .data import PipelineData
from .decoder import init_decoder_weights, reconstruction_loss
from .losses import cross_pair_infonce
from .report import StageReport

VALIDATION_K = 5


def _derive_seed(*parts) -> int:
    """Mix integers into one seed; deterministic across platforms."""
    out = 0
    for p in parts:
        out = (out * 1000003 + int(p) + 0x9E3779B9) % (2 ** 63)
    return out


def _encode_all(texts, vocab, max_len: int) -> list:
    return [encode(text, vocab, max_len) for text in texts]


def _batch_arrays(seqs):
    """Stack sequences and trim trailing PAD columns to the batch maximum."""
    ids = np.asarray([s.ids for s in seqs], dtype=np.int64)
    mask = np.asarray([s.attention_mask for s in seqs], dtype=np.int64)
    t = int(mask.sum(axis=1).max())
    return ids[:, :t], mask[:, :t]


def _sample_indices(rng, n: int, batch_size: int) -> np.ndarray:
    return rng.choice(n, size=batch_size, replace=n < batch_size)


def _validation_recall(weights, checkpoint: Checkpoint, data: PipelineData) -> float:
    """recall@5 of the live weights on the validation split, all requirements indexed."""
    probe = Checkpoint(
        config=checkpoint.config, weights=weights, vocab=checkpoint.vocab,
        provenance=list(checkpoint.provenance),
    )
    items = [
        (rid, "requirement", text)
        for rid, text in sorted(data.requirement_texts.items())
    ]
    index = build_index(items, probe)
    predictions = [
        recommend_requirements(
            data.val_paragraph_texts[pid], index, probe, k=VALIDATION_K, query_id=pid
        )
        for pid in sorted(data.val_gold)
    ]
    return one_shot_recall(predictions, data.val_gold, VALIDATION_K)


def _require_validation_data(data: PipelineData) -> None:
    if not data.val_gold or not data.requirement_texts:
        raise DataError("checkpoint selection needs a non-empty validation split")


def distinct_requirement_batch(rng, rids, batch_size: int) -> list:
    """Pair indices for one batch, never repeating a requirement id.

    Walks a fresh permutation and keeps the first batch_size pairs whose
    requirement ids are mutually distinct; duplicates wait for a later
    draw. Fewer distinct ids than batch_size shrinks the batch.
    """
    picked, used = [], set()
    for i in rng.permutation(len(rids)):
        rid = rids[int(i)]
        if rid in used:
            continue
        picked.append(int(i))
        used.add(rid)
        if len(picked) == batch_size:
            break
    return picked


def _run_stage(stage: StageConfig, weights, extra_params, step_fn, metric_fn):
    """Optimization loop shared by every stage; returns (best weights, report)."""
    params = weights.params() + list(extra_params)
    state = AdamState(params, learning_rate=stage.learning_rate)
    losses: list = []
    curve: list = []
    best_metric = -math.inf
    best_weights = None
    best_step = 0
    started = time.monotonic()

    for step in range(1, stage.max_steps + 1):
        loss = step_fn(step)
        if loss is not None:
            adam_step(params, [p.grad for p in params], state)
        losses.append(loss)
        zero_grads(params)

        if step % stage.eval_every == 0 or step == stage.max_steps:
            metric = float(metric_fn())
            curve.append((step, metric))
            if metric > best_metric:
                best_metric = metric
                best_weights = weights.copy()
                best_step = step

    if best_weights is None:
        raise DataError("validation metric never produced a comparable value")
    report = StageReport(
        stage_kind=stage.stage_kind,
        steps_run=stage.max_steps,
        losses=tuple(losses),
        validation_curve=tuple(curve),
        selected_step=best_step,
        best_metric=best_metric,
        wall_clock_seconds=time.monotonic() - started,
    )
    return best_weights, report


def _finish(checkpoint: Checkpoint, best_weights, stage: StageConfig, report: StageReport):
    out = Checkpoint(
        config=checkpoint.config,
        weights=best_weights,
        vocab=checkpoint.vocab,
        provenance=list(checkpoint.provenance) + [stage.descriptor()],
        best_validation=report.best_metric,
    )
    return out, report


def _require_kind(stage: StageConfig, kind: str) -> None:
    if stage.stage_kind != kind:
        raise UsageError(f"expected a {kind} stage config, got {stage.stage_kind!r}")


def masked_token_loss(states, triples, seq_len: int, weights, config):
    """Cross-entropy at masked positions; readout tied to the token embedding.

    triples are (batch_row, position, original_id); logits come from the
    encoder's own token embedding matrix, transposed, with no extra bias.
    """
    b = states.shape[0]
    flat = ops.reshape(states, (b * seq_len, config.hidden_dim))
    rows = np.asarray([row * seq_len + pos for row, pos, _ in triples], dtype=np.int64)
    originals = np.asarray([orig for _, _, orig in triples], dtype=np.int64)
    picked = ops.take_rows(flat, rows)
    logits = ops.matmul(picked, ops.transpose(weights["tok_emb"]))
    return ops.cross_entropy_rows(logits, originals)


def mlm_stage(data: PipelineData, checkpoint: Checkpoint, stage: StageConfig):
    """Masked-token reconstruction over the unsupervised text pool."""
    _require_kind(stage, "mlm")
    config, vocab = checkpoint.config, checkpoint.vocab
    vocab_size = len(vocab)
    train_seqs = _encode_all(data.unsupervised_texts, vocab, config.max_len)
    if not data.val_texts:
        raise DataError("checkpoint selection needs a non-empty validation split")

    # one fixed corruption per validation text keeps the metric comparable
    # across evaluations
    val_masked = []
    for i, seq in enumerate(_encode_all(data.val_texts, vocab, config.max_len)):
        corrupted, targets = apply_mlm_mask(
            seq, stage.mask_prob, _derive_seed(stage.rng_seed, 424242, i), vocab_size
        )
        if targets:
            val_masked.append((corrupted, targets))

    weights = checkpoint.weights.copy()
    rng = np.random.default_rng(stage.rng_seed)

    def step_fn(step: int):
        idx = _sample_indices(rng, len(train_seqs), stage.batch_size)
        corrupted = []
        triples = []
        base = _derive_seed(stage.rng_seed, step)
        for row, i in enumerate(idx):
            seq, targets = apply_mlm_mask(
                train_seqs[int(i)], stage.mask_prob, _derive_seed(base, row), vocab_size
            )
            corrupted.append(seq)
            triples.extend((row, pos, orig) for pos, orig in targets)
        if not triples:
            return None  # nothing to reconstruct; the step still counts
        ids, mask = _batch_arrays(corrupted)
        states = forward_batch(
            ids, mask, weights, config, train_mode=True,
            rng_seed=_derive_seed(base, 999983),
        )
        loss = masked_token_loss(states, triples, ids.shape[1], weights, config)
        loss.backward()
        return float(loss.data)

    def metric_fn() -> float:
        if not val_masked:
            return 0.0
        total, count = 0.0, 0
        for start in range(0, len(val_masked), stage.batch_size):
            chunk = val_masked[start:start + stage.batch_size]
            triples = [
                (row, pos, orig)
                for row, (_seq, targets) in enumerate(chunk)
                for pos, orig in targets
            ]
            ids, mask = _batch_arrays([seq for seq, _ in chunk])
            states = forward_batch(ids, mask, weights, config)
            loss = masked_token_loss(states, triples, ids.shape[1], weights, config)
            total += float(loss.data) * len(triples)
            count += len(triples)
        return -total / count

    best_weights, report = _run_stage(stage, weights, [], step_fn, metric_fn)
    return _finish(checkpoint, best_weights, stage, report)


def simcse_stage(data: PipelineData, checkpoint: Checkpoint, stage: StageConfig):
    """Two dropout-noised encodings of each text pull together, rest apart."""
    _require_kind(stage, "simcse")
    config = checkpoint.config
    train_seqs = _encode_all(data.unsupervised_texts, checkpoint.vocab, config.max_len)
    _require_validation_data(data)

    weights = checkpoint.weights.copy()
    rng = np.random.default_rng(stage.rng_seed)

    def step_fn(step: int):
        idx = _sample_indices(rng, len(train_seqs), stage.batch_size)
        ids, mask = _batch_arrays([train_seqs[int(i)] for i in idx])
        base = _derive_seed(stage.rng_seed, step)
        states_a = forward_batch(
            ids, mask, weights, config, train_mode=True, rng_seed=_derive_seed(base, 1)
        )
        states_b = forward_batch(
            ids, mask, weights, config, train_mode=True, rng_seed=_derive_seed(base, 2)
        )
        ha = ops.masked_mean(states_a, mask)
        hb = ops.masked_mean(states_b, mask)
        loss = cross_pair_infonce(ha, hb, stage.temperature)
        loss.backward()
        return float(loss.data)

    def metric_fn() -> float:
        return _validation_recall(weights, checkpoint, data)

    best_weights, report = _run_stage(stage, weights, [], step_fn, metric_fn)
    return _finish(checkpoint, best_weights, stage, report)


def tsdae_stage(data: PipelineData, checkpoint: Checkpoint, stage: StageConfig):
    """Reconstruct clean text from the pooled embedding of a masked input.

    A fresh decoder trains jointly with the encoder and is dropped on exit;
    only the encoder enters the returned checkpoint.
    """
    _require_kind(stage, "tsdae")
    config = checkpoint.config
    train_seqs = _encode_all(data.unsupervised_texts, checkpoint.vocab, config.max_len)
    _require_validation_data(data)

    weights = checkpoint.weights.copy()
    decoder = init_decoder_weights(config, _derive_seed(stage.rng_seed, 31337))
    rng = np.random.default_rng(stage.rng_seed)

    def corrupt(seq, seed: int):
        noisy = apply_tsdae_noise(seq, stage.noise_ratio, seed)
        content = seq.content_positions
        expected = int(math.floor(stage.noise_ratio * len(content) + 0.5))
        already = sum(1 for pos in content if seq.ids[pos] == MASK_ID)
        actual = sum(1 for pos in content if noisy.ids[pos] == MASK_ID)
        if not expected <= actual <= expected + already:
            raise DataError(
                f"corruption produced {actual} masked tokens, expected {expected}"
            )
        return noisy

    def step_fn(step: int):
        idx = _sample_indices(rng, len(train_seqs), stage.batch_size)
        clean = [train_seqs[int(i)] for i in idx]
        base = _derive_seed(stage.rng_seed, step)
        noisy = [corrupt(seq, _derive_seed(base, row)) for row, seq in enumerate(clean)]
        noisy_ids, noisy_mask = _batch_arrays(noisy)
        clean_ids, clean_mask = _batch_arrays(clean)
        states = forward_batch(
            noisy_ids, noisy_mask, weights, config, train_mode=True,
            rng_seed=_derive_seed(base, 101),
        )
        pooled = ops.masked_mean(states, noisy_mask)
        loss = reconstruction_loss(
            clean_ids, clean_mask, pooled, decoder, config, train_mode=True,
            rng_seed=_derive_seed(base, 102),
        )
        loss.backward()
        return float(loss.data)

    def metric_fn() -> float:
        return _validation_recall(weights, checkpoint, data)

    best_weights, report = _run_stage(stage, weights, decoder.params(), step_fn, metric_fn)
    return _finish(checkpoint, best_weights, stage, report)


def supervised_stage(data: PipelineData, checkpoint: Checkpoint, stage: StageConfig):
    """Cross-pair contrastive matching over annotated (paragraph, requirement) pairs.

    Every batch scores paragraph embeddings against requirement embeddings
    only; no paragraph-paragraph or requirement-requirement term exists.
    The sampler never places two pairs sharing a requirement id in one
    batch, so all off-diagonal entries are true negatives.
    """
    _require_kind(stage, "supervised")
    config, vocab = checkpoint.config, checkpoint.vocab
    pairs = data.supervised_pairs
    if len(pairs) < 2:
        raise UsageError("supervised stage needs at least two annotated pairs")
    rids = [rid for _p, _r, rid in pairs]
    if len(set(rids)) < 2:
        raise UsageError("supervised batches need at least two distinct requirement ids")
    _require_validation_data(data)

    para_seqs = _encode_all([p for p, _r, _rid in pairs], vocab, config.max_len)
    req_seqs = _encode_all([r for _p, r, _rid in pairs], vocab, config.max_len)

    weights = checkpoint.weights.copy()
    rng = np.random.default_rng(stage.rng_seed)

    def step_fn(step: int):
        idx = distinct_requirement_batch(rng, rids, stage.batch_size)
        n = len(idx)
        assert len({rids[i] for i in idx}) == n
        seqs = [para_seqs[i] for i in idx] + [req_seqs[i] for i in idx]
        ids, mask = _batch_arrays(seqs)
        base = _derive_seed(stage.rng_seed, step)
        states = forward_batch(
            ids, mask, weights, config, train_mode=True, rng_seed=_derive_seed(base, 7)
        )
        pooled = ops.masked_mean(states, mask)
        ha = ops.take_rows(pooled, np.arange(n))
        hb = ops.take_rows(pooled, np.arange(n, 2 * n))
        loss = cross_pair_infonce(ha, hb, stage.temperature)
        loss.backward()
        return float(loss.data)

    def metric_fn() -> float:
        return _validation_recall(weights, checkpoint, data)

    best_weights, report = _run_stage(stage, weights, [], step_fn, metric_fn)
    return _finish(checkpoint, best_weights, stage, report)
