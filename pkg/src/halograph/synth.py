"""Deterministic synthetic corpora for tests and cross-checks.

Generation is driven entirely by one ``random.Random(seed)`` consumed
in a fixed order, so a given (seed, shape) pair always produces the
same bundles byte for byte.  The generator aims for coverage rather
than realism: corpora include entity-free sentences, isolated
sentences, passages with no links at all, ties in probabilities, and
greedy as well as sampled realized tokens -- every structural edge the
scorer must handle.

All bundles come out valid under the wire-format invariants: entity
spans never overlap, entity tokens carry role-eligible tags, relation
tokens are verbs, and every linked pair gets both ordered NLI scores.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .bundle import (
    EntitySpan,
    NliScore,
    PassageBundle,
    SentenceLink,
    TokenRecord,
    TokenRef,
    Triple,
)
from .errors import ContractViolation

_WORDS = (
    "the", "a", "city", "river", "council", "report", "survey", "bridge",
    "museum", "station", "harbor", "market", "festival", "railway", "tower",
    "library", "garden", "north", "south", "old", "new", "large", "small",
    "famous", "local", "annual", "early", "late", "central", "nearby",
)

_VERBS = ("opened", "closed", "built", "founded", "hosted", "reached", "reported")

_NOMINAL_TAGS = ("PROPN", "NOUN", "NUM")
_OTHER_TAGS = ("ADJ", "ADV", "DET", "ADP", "AUX", "PRON")
_NER_SAMPLE = ("PERSON", "ORG", "GPE", "DATE", "CARDINAL", "EVENT", "LOC")


@dataclass(frozen=True)
class SynthShape:
    """Size and density knobs for a synthetic corpus."""

    num_passages: int = 100
    sentence_range: tuple[int, int] = (2, 6)
    token_range: tuple[int, int] = (4, 12)
    k: int = 3
    entity_prob: float = 0.35
    triple_prob: float = 0.4
    link_prob: float = 0.35
    labeled: bool = True

    def __post_init__(self):
        if self.num_passages < 0:
            raise ContractViolation("num_passages must be non-negative")
        if not 1 <= self.sentence_range[0] <= self.sentence_range[1]:
            raise ContractViolation(f"bad sentence range {self.sentence_range}")
        if not 1 <= self.token_range[0] <= self.token_range[1]:
            raise ContractViolation(f"bad token range {self.token_range}")
        if self.k < 1:
            raise ContractViolation("k must be at least 1")
        for name in ("entity_prob", "triple_prob", "link_prob"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ContractViolation(f"{name} must lie in [0, 1], got {value}")


def generate_corpus(seed: int, shape: SynthShape | None = None) -> list[PassageBundle]:
    """All passages for one (seed, shape) pair, in a fixed order."""
    if shape is None:
        shape = SynthShape()
    rng = random.Random(seed)
    return [
        _generate_passage(rng, f"synth-{seed}-{index:04d}", shape)
        for index in range(shape.num_passages)
    ]


def _generate_passage(rng: random.Random, passage_id: str, shape: SynthShape) -> PassageBundle:
    m = rng.randint(*shape.sentence_range)
    counts = tuple(rng.randint(*shape.token_range) for _ in range(m))

    tokens: list[TokenRecord] = []
    entities: list[EntitySpan] = []
    verbs_by_sentence: dict[int, list[TokenRef]] = {i: [] for i in range(1, m + 1)}
    position = 0
    total = sum(counts)
    entity_serial = 0

    for sentence in range(1, m + 1):
        count = counts[sentence - 1]
        # Lay out entity spans first: walk the sentence, starting a
        # span with probability entity_prob and leaving a one-token gap
        # after each so spans never touch ambiguously.
        j = 1
        spans: list[tuple[int, int]] = []
        while j <= count:
            if rng.random() < shape.entity_prob:
                length = 2 if j + 1 <= count and rng.random() < 0.4 else 1
                spans.append((j, j + length - 1))
                j += length + 1
            else:
                j += 1
        for lo, hi in spans:
            entity_serial += 1
            entities.append(
                EntitySpan(
                    entity_id=f"e{entity_serial:03d}",
                    sentence_index=sentence,
                    token_range=(lo, hi),
                )
            )

        entity_positions = {p for lo, hi in spans for p in range(lo, hi + 1)}
        for within in range(1, count + 1):
            position += 1
            if within in entity_positions:
                surface = rng.choice(_WORDS).capitalize()
                if rng.random() < 0.8:
                    pos_tag = rng.choice(_NOMINAL_TAGS)
                    ner_type = rng.choice(_NER_SAMPLE) if rng.random() < 0.5 else None
                else:
                    # Role eligibility through the entity type alone.
                    pos_tag = rng.choice(_OTHER_TAGS)
                    ner_type = rng.choice(_NER_SAMPLE)
            elif rng.random() < 0.35:
                surface = rng.choice(_VERBS)
                pos_tag = "VERB"
                ner_type = None
                verbs_by_sentence[sentence].append(TokenRef(sentence, within))
            else:
                surface = rng.choice(_WORDS)
                pos_tag = rng.choice(_OTHER_TAGS)
                ner_type = None
            topk, realized = _draw_probs(rng, shape.k)
            tokens.append(
                TokenRecord(
                    surface=surface,
                    sentence_index=sentence,
                    within_sentence_index=within,
                    passage_position=position,
                    topk_probs=topk,
                    realized_prob=realized,
                    pos_tag=pos_tag,
                    ner_type=ner_type,
                )
            )
    assert position == total

    triples: list[Triple] = []
    for sentence in range(1, m + 1):
        local = [e for e in entities if e.sentence_index == sentence]
        verbs = verbs_by_sentence[sentence]
        if len(local) < 2 or not verbs:
            continue
        for subject in local:
            for obj in local:
                if subject.entity_id == obj.entity_id:
                    continue
                if rng.random() >= shape.triple_prob:
                    continue
                triples.append(
                    Triple(
                        subject=subject.entity_id,
                        relation_token=rng.choice(verbs),
                        object=obj.entity_id,
                        att_subject_object=rng.uniform(0.05, 0.95),
                        att_subject_relation=rng.uniform(0.05, 0.95),
                        att_relation_object=rng.uniform(0.05, 0.95),
                    )
                )

    links: list[SentenceLink] = []
    for a in range(1, m + 1):
        for b in range(a + 1, m + 1):
            if rng.random() < shape.link_prob:
                links.append(
                    SentenceLink(
                        sentence_a=a,
                        sentence_b=b,
                        kind=rng.choice(("coreference", "entity-link")),
                    )
                )

    # NLI covers every ordered linked pair plus every adjacent pair, so
    # both the graph and the adjacent calibration always have their
    # scores.  Ordered pairs are emitted in a canonical order.
    pairs: set[tuple[int, int]] = set()
    for link in links:
        pairs.add((link.sentence_a, link.sentence_b))
        pairs.add((link.sentence_b, link.sentence_a))
    for i in range(1, m):
        pairs.add((i, i + 1))
        pairs.add((i + 1, i))
    nli_scores = [
        NliScore(
            premise_sentence=premise,
            hypothesis_sentence=hypothesis,
            contradiction_prob=rng.random(),
        )
        for premise, hypothesis in sorted(pairs)
    ]

    labels = None
    human = None
    if shape.labeled:
        labels = tuple(
            rng.choices((0.0, 0.5, 1.0), weights=(5, 2, 3))[0] for _ in range(m)
        )
        human = rng.random()

    return PassageBundle(
        passage_id=passage_id,
        sentence_token_counts=counts,
        tokens=tuple(tokens),
        entities=tuple(entities),
        triples=tuple(triples),
        links=tuple(links),
        nli_scores=tuple(nli_scores),
        sentence_labels=labels,
        passage_human_score=human,
    )


def _draw_probs(rng: random.Random, k: int) -> tuple[tuple[float, ...], float]:
    """A descending top-k row plus the realized probability.

    The row's mass is drawn first, then split across k slots; roughly
    a tenth of tokens get an exactly-flat row to exercise ties, and
    realized tokens are greedy (the top probability) 70% of the time.
    """
    mass = rng.uniform(0.35, 1.0)
    if rng.random() < 0.1:
        topk = tuple(mass / k for _ in range(k))
    else:
        raw = sorted((rng.random() + 1e-3 for _ in range(k)), reverse=True)
        raw_total = sum(raw)
        topk = tuple(r * mass / raw_total for r in raw)
    realized = topk[0] if rng.random() < 0.7 else rng.uniform(0.0, topk[0])
    return topk, realized
