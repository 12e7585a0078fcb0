"""Shared builders for constructing bundles in tests."""

from __future__ import annotations

from pathlib import Path

import pytest

from halograph.bundle import (
    EntitySpan,
    NliScore,
    PassageBundle,
    SentenceLink,
    TokenRecord,
    TokenRef,
    Triple,
)

REPO_ROOT = Path(__file__).resolve().parent.parent
FIXTURES = REPO_ROOT / "fixtures"

DEFAULT_TOPK = (0.5, 0.3, 0.1)


def make_token(
    sentence: int,
    within: int,
    position: int,
    *,
    topk=DEFAULT_TOPK,
    realized: float | None = None,
    pos_tag: str | None = "NOUN",
    ner_type: str | None = None,
    surface: str | None = None,
) -> TokenRecord:
    topk = tuple(topk)
    return TokenRecord(
        surface=surface if surface is not None else f"w{position}",
        sentence_index=sentence,
        within_sentence_index=within,
        passage_position=position,
        topk_probs=topk,
        realized_prob=topk[0] if realized is None else realized,
        pos_tag=pos_tag,
        ner_type=ner_type,
    )


def make_bundle(
    counts,
    *,
    tokens=None,
    entities=(),
    triples=(),
    links=(),
    nli=(),
    labels=None,
    human=None,
    passage_id: str = "test-passage",
    topk=DEFAULT_TOPK,
) -> PassageBundle:
    """A valid bundle over ``counts`` with uniform default tokens.

    ``tokens`` overrides the generated token list; ``nli`` takes
    ``(premise, hypothesis, prob)`` tuples and ``links``
    ``(a, b)`` or ``(a, b, kind)`` tuples for brevity.
    """
    counts = tuple(counts)
    if tokens is None:
        tokens = []
        position = 0
        for sentence, count in enumerate(counts, start=1):
            for within in range(1, count + 1):
                position += 1
                tokens.append(make_token(sentence, within, position, topk=topk))
    return PassageBundle(
        passage_id=passage_id,
        sentence_token_counts=counts,
        tokens=tuple(tokens),
        entities=tuple(entities),
        triples=tuple(triples),
        links=tuple(
            link if isinstance(link, SentenceLink) else SentenceLink(link[0], link[1], link[2] if len(link) > 2 else "coreference")
            for link in links
        ),
        nli_scores=tuple(
            score if isinstance(score, NliScore) else NliScore(score[0], score[1], score[2])
            for score in nli
        ),
        sentence_labels=tuple(labels) if labels is not None else None,
        passage_human_score=human,
    )


def make_triple(
    subject: str,
    obj: str,
    *,
    sentence: int = 1,
    verb_position: int = 1,
    att_so: float = 0.5,
    att_sr: float = 0.5,
    att_ro: float = 0.5,
) -> Triple:
    return Triple(
        subject=subject,
        relation_token=TokenRef(sentence_index=sentence, within_sentence_index=verb_position),
        object=obj,
        att_subject_object=att_so,
        att_subject_relation=att_sr,
        att_relation_object=att_ro,
    )


def make_span(entity_id: str, sentence: int, lo: int, hi: int | None = None) -> EntitySpan:
    return EntitySpan(
        entity_id=entity_id,
        sentence_index=sentence,
        token_range=(lo, hi if hi is not None else lo),
    )


@pytest.fixture
def two_sentence_path() -> Path:
    return FIXTURES / "two_sentence.jsonl"
