"""Synthetic corpus generator with controllable lexical overlap.

Every requirement owns a theme: a pool of invented content words. Its
description and its annotated paragraphs sample from that pool, mixed with
filler words shared across the whole language, so a matcher can learn the
theme signal while fillers supply realistic noise. Distractor paragraphs
are filler-only and annotated to nothing. Two language tags with disjoint
filler and syllable inventories give the corpus a second axis.

The overlap dial goes further down: with desc_vocab_words > 0 each theme
grows a second, disjoint word pool that only its description uses, so a
paragraph and its requirement share few exact surface forms (a per-word
leak probability controls how few). bridge_fraction then converts part of
the distractor budget into unannotated texts mixing both pools of one
theme. Those bridges are the only place the two vocabularies co-occur:
matching such a corpus requires distributional evidence from unlabeled
text, not string overlap, which is the regime the staged training
pipeline exists for.

Generation is a pure function of the seed. After building, a bag-of-words
cosine baseline is scored over the corpus; failing to beat the random
k/n_requirements baseline raises, so an unlearnable parameterization never
leaves this module.
"""

from __future__ import annotations

from collections import Counter
from math import sqrt

import numpy as np

from ..errors import ConfigError
from .records import AnnotationRecord, Corpus, ParagraphRecord, RequirementRecord

# one syllable inventory for both languages: words stay globally unique
# (the taken set below), so filler POOLS are disjoint across languages,
# but subword pieces are shared the way real language pairs share them --
# nothing at the character level gives the language away for free
_SHARED_SYLLABLES = [c + v for c in "bdfgjklmnprstvwz" for v in "aeiou"]
_SYLLABLES = {0: _SHARED_SYLLABLES, 1: _SHARED_SYLLABLES}


def _make_words(rng, lang_index: int, count: int, taken: set) -> list:
    syllables = _SYLLABLES[lang_index]
    words = []
    while len(words) < count:
        n_syl = int(rng.integers(2, 4))
        word = "".join(rng.choice(syllables) for _ in range(n_syl))
        if word in taken:
            word = word + rng.choice(syllables)
            if word in taken:
                continue
        taken.add(word)
        words.append(word)
    return words


def generate_synthetic(
    seed: int,
    n_requirements: int,
    paragraphs_per_requirement: int,
    vocab_themes: int = 8,
    distractor_fraction: float = 0.2,
    languages: tuple = ("de", "en"),
    para_content_words: int = 4,
    para_filler_words: int = 8,
    desc_content_words: int = 4,
    desc_filler_words: int = 5,
    filler_pool_size: int = 40,
    paragraphs_per_report: int = 25,
    desc_vocab_words: int = 0,
    desc_leak_probability: float = 0.0,
    bridge_fraction: float = 0.0,
    check_learnable: bool = True,
) -> Corpus:
    if n_requirements < 2:
        raise ConfigError("n_requirements must be at least 2")
    if paragraphs_per_requirement < 1:
        raise ConfigError("paragraphs_per_requirement must be at least 1")
    if not 0.0 <= distractor_fraction < 1.0:
        raise ConfigError("distractor_fraction must lie in [0, 1)")
    if len(languages) != 2:
        raise ConfigError("exactly two language tags are required")
    if vocab_themes < para_content_words:
        raise ConfigError(
            f"theme pool of {vocab_themes} words is smaller than the "
            f"{para_content_words} content words a paragraph draws"
        )
    # descriptions draw from their own pool only when one exists
    desc_pool_size = desc_vocab_words if desc_vocab_words > 0 else vocab_themes
    if desc_pool_size < desc_content_words:
        raise ConfigError(
            f"description pool of {desc_pool_size} words is smaller than the "
            f"{desc_content_words} content words a description draws"
        )
    if not 0.0 <= desc_leak_probability <= 1.0:
        raise ConfigError("desc_leak_probability must lie in [0, 1]")
    if not 0.0 <= bridge_fraction <= 1.0:
        raise ConfigError("bridge_fraction must lie in [0, 1]")

    rng = np.random.default_rng(seed)
    taken: set = set()
    fillers = {
        lang: _make_words(rng, li, filler_pool_size, taken)
        for li, lang in enumerate(languages)
    }
    theme_pools = []
    desc_pools = []
    for i in range(n_requirements):
        li = i % 2
        theme_pools.append(_make_words(rng, li, vocab_themes, taken))
        if desc_vocab_words > 0:
            desc_pools.append(_make_words(rng, li, desc_vocab_words, taken))
        else:
            desc_pools.append(theme_pools[i])

    def sample_text(pool, n_content, filler_list, n_filler, leak_pool=None):
        content = list(rng.choice(pool, size=n_content, replace=False)) if n_content else []
        if leak_pool is not None and content and rng.random() < desc_leak_probability:
            content[0] = rng.choice(leak_pool)
        filler = list(rng.choice(filler_list, size=n_filler, replace=True))
        words = content + filler
        rng.shuffle(words)
        return " ".join(words)

    requirements = []
    for i in range(n_requirements):
        lang = languages[i % 2]
        rid = f"C_{i // 10 + 1}_{i % 10 + 1}"
        requirements.append(
            RequirementRecord(
                id=rid,
                language=lang,
                description=sample_text(
                    desc_pools[i], desc_content_words, fillers[lang], desc_filler_words
                ),
            )
        )

    paragraphs = []
    annotations = []
    counter = 0

    def next_pid():
        nonlocal counter
        counter += 1
        return f"P_{counter:05d}", f"B_{(counter - 1) // paragraphs_per_report + 1:03d}"

    leak_pools = desc_pools if desc_vocab_words > 0 else [None] * n_requirements
    for i, req in enumerate(requirements):
        for _ in range(paragraphs_per_requirement):
            pid, report = next_pid()
            paragraphs.append(
                ParagraphRecord(
                    id=pid,
                    report_id=report,
                    language=req.language,
                    text=sample_text(
                        theme_pools[i], para_content_words,
                        fillers[req.language], para_filler_words,
                        leak_pool=leak_pools[i],
                    ),
                )
            )
            annotations.append(AnnotationRecord(paragraph_id=pid, requirement_id=req.id))

    n_annotated = len(paragraphs)
    n_distractors = int(round(n_annotated * distractor_fraction / (1.0 - distractor_fraction)))
    n_bridges = int(round(n_distractors * bridge_fraction)) if desc_vocab_words > 0 else 0
    for j in range(n_bridges):
        # a bridge mixes both pools of one theme: the only co-occurrence of
        # paragraph vocabulary and description vocabulary in unlabeled text
        i = j % n_requirements
        lang = requirements[i].language
        pid, report = next_pid()
        # content-dominated on purpose: the co-occurrence signal has to
        # survive masking and pooling for pretraining to pick it up
        half = max(2, min((para_content_words * 3 + 3) // 4, vocab_themes, desc_pool_size))
        report_side = list(rng.choice(theme_pools[i], size=half, replace=False))
        desc_side = list(rng.choice(desc_pools[i], size=half, replace=False))
        filler = list(rng.choice(fillers[lang], size=para_filler_words // 2, replace=True))
        words = report_side + desc_side + filler
        rng.shuffle(words)
        paragraphs.append(
            ParagraphRecord(id=pid, report_id=report, language=lang, text=" ".join(words))
        )
    for j in range(n_distractors - n_bridges):
        lang = languages[j % 2]
        pid, report = next_pid()
        paragraphs.append(
            ParagraphRecord(
                id=pid,
                report_id=report,
                language=lang,
                text=sample_text([], 0, fillers[lang], para_content_words + para_filler_words),
            )
        )

    corpus = Corpus(paragraphs, requirements, annotations)
    # with k >= n_requirements every ranker scores 1.0, so there is no bar to clear
    if check_learnable and n_requirements > 5:
        baseline = 5.0 / n_requirements
        achieved = bow_recall(corpus, k=5)
        if achieved <= baseline:
            raise ConfigError(
                f"generated corpus is not learnable: bag-of-words recall@5 "
                f"{achieved:.3f} does not beat the random baseline {baseline:.3f}"
            )
    return corpus


def _bow_cosine(a: Counter, b: Counter) -> float:
    if not a or not b:
        return 0.0
    dot = sum(c * b[w] for w, c in a.items())
    na = sqrt(sum(c * c for c in a.values()))
    nb = sqrt(sum(c * c for c in b.values()))
    return dot / (na * nb)


def bow_recall(corpus: Corpus, k: int = 5) -> float:
    """One-shot recall@k of a plain bag-of-words cosine ranker.

    The floor a trained encoder should clear: it certifies the corpus
    carries enough lexical overlap to be matchable at all.
    """
    gold = corpus.gold_map()
    req_bows = [(r.id, Counter(r.description.split())) for r in corpus.requirements]
    hits = 0
    total = 0
    for p in corpus.paragraphs:
        want = gold.get(p.id)
        if not want:
            continue
        bow = Counter(p.text.split())
        scored = sorted(
            ((-_bow_cosine(bow, rb), rid) for rid, rb in req_bows)
        )[:k]
        total += 1
        if any(rid in want for _, rid in scored):
            hits += 1
    return hits / total if total else 0.0
