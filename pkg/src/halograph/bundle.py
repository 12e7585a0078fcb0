"""Passage bundles: the JSON Lines wire format and its validation.

A *bundle* packages everything the scorer needs for one generated
passage: per-token top-k probabilities from the producing model,
entity spans, relation triples with attention weights, sentence links,
and directed contradiction (NLI) scores.  One passage per line,
``format_version`` 1.

Loading is split in two deliberately:

* :func:`load_bundle` / :func:`load_corpus` decode the wire schema and
  resolve cross-references.  Malformed input raises
  :class:`~halograph.errors.BundleParseError` (with a line number) and
  dangling references raise
  :class:`~halograph.errors.BundleIntegrityError`.
* :func:`validate_bundle` is a total function over decoded bundles: it
  never raises, it returns the full list of invariant violations so a
  caller can report all problems at once.
"""

from __future__ import annotations

import io
import json
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Iterable, Iterator

from .config import Config
from .errors import BundleIntegrityError, BundleParseError

FORMAT_VERSION = 1
LINK_KINDS = ("coreference", "entity-link")
#: Slack for floating-point mass checks on stored probabilities.
PROB_SUM_TOLERANCE = 1e-9
ALLOWED_LABELS = (0.0, 0.5, 1.0)


@dataclass(frozen=True)
class TokenRecord:
    """One generated token with its decoding statistics.

    ``topk_probs`` are the k largest next-token probabilities at this
    step, descending; ``realized_prob`` is the probability of the token
    actually emitted.  Indices are 1-based; ``passage_position`` counts
    across the whole passage.
    """

    surface: str
    sentence_index: int
    within_sentence_index: int
    passage_position: int
    topk_probs: tuple[float, ...]
    realized_prob: float
    pos_tag: str | None = None
    ner_type: str | None = None


@dataclass(frozen=True)
class TokenRef:
    """Coordinates of a token: sentence and position within it (1-based)."""

    sentence_index: int
    within_sentence_index: int


@dataclass(frozen=True)
class EntitySpan:
    """A contiguous entity mention; ``token_range`` is inclusive, 1-based."""

    entity_id: str
    sentence_index: int
    token_range: tuple[int, int]


@dataclass(frozen=True)
class Triple:
    """A (subject, relation, object) edge with pairwise attention weights."""

    subject: str
    relation_token: TokenRef
    object: str
    att_subject_object: float
    att_subject_relation: float
    att_relation_object: float


@dataclass(frozen=True)
class SentenceLink:
    """An undirected link between two sentences, stored with a < b."""

    sentence_a: int
    sentence_b: int
    kind: str


@dataclass(frozen=True)
class NliScore:
    """Directed contradiction probability for an ordered sentence pair."""

    premise_sentence: int
    hypothesis_sentence: int
    contradiction_prob: float


@dataclass(frozen=True)
class PassageBundle:
    """A decoded passage bundle; see the module docstring for the format."""

    passage_id: str
    sentence_token_counts: tuple[int, ...]
    tokens: tuple[TokenRecord, ...]
    entities: tuple[EntitySpan, ...]
    triples: tuple[Triple, ...]
    links: tuple[SentenceLink, ...]
    nli_scores: tuple[NliScore, ...]
    sentence_labels: tuple[float, ...] | None = None
    passage_human_score: float | None = None

    @property
    def num_sentences(self) -> int:
        return len(self.sentence_token_counts)

    @property
    def num_tokens(self) -> int:
        return sum(self.sentence_token_counts)

    def sentence_tokens(self, sentence_index: int) -> tuple[TokenRecord, ...]:
        """Tokens of one sentence, in order (assumes a validated bundle)."""
        start = sum(self.sentence_token_counts[: sentence_index - 1])
        return self.tokens[start : start + self.sentence_token_counts[sentence_index - 1]]

    def token_at(self, ref: TokenRef) -> TokenRecord:
        """Resolve a token reference (assumes a validated bundle)."""
        start = sum(self.sentence_token_counts[: ref.sentence_index - 1])
        return self.tokens[start + ref.within_sentence_index - 1]

    def entity_by_id(self) -> dict[str, EntitySpan]:
        return {span.entity_id: span for span in self.entities}

    def entity_tokens(self, span: EntitySpan) -> tuple[TokenRecord, ...]:
        """Tokens covered by an entity span (assumes a validated bundle)."""
        sentence = self.sentence_tokens(span.sentence_index)
        lo, hi = span.token_range
        return sentence[lo - 1 : hi]

    def nli_lookup(self) -> dict[tuple[int, int], float]:
        """Map (premise, hypothesis) -> contradiction probability."""
        return {
            (score.premise_sentence, score.hypothesis_sentence): score.contradiction_prob
            for score in self.nli_scores
        }


@dataclass(frozen=True)
class Violation:
    """One broken invariant found by :func:`validate_bundle`."""

    field: str
    rule: str
    message: str

    def __str__(self) -> str:
        return f"{self.field}: {self.message} [{self.rule}]"


# ---------------------------------------------------------------------------
# parsing


class _Parser:
    """Schema walker with uniform error messages and line tracking."""

    def __init__(self, line_number: int | None):
        self.line_number = line_number

    def fail(self, message: str) -> BundleParseError:
        return BundleParseError(message, line_number=self.line_number)

    def obj(self, value: Any, where: str, keys: dict[str, bool]) -> dict:
        """Check ``value`` is an object with exactly the allowed keys.

        ``keys`` maps field name -> required?.  Unknown keys are
        rejected so typos surface instead of silently dropping data.
        """
        if not isinstance(value, dict):
            raise self.fail(f"{where}: expected an object, got {_kind(value)}")
        unknown = set(value) - set(keys)
        if unknown:
            raise self.fail(f"{where}: unknown field(s) {', '.join(sorted(unknown))}")
        missing = [key for key, required in keys.items() if required and key not in value]
        if missing:
            raise self.fail(f"{where}: missing required field(s) {', '.join(missing)}")
        return value

    def string(self, obj: dict, key: str, where: str) -> str:
        value = obj[key]
        if not isinstance(value, str):
            raise self.fail(f"{where}.{key}: expected a string, got {_kind(value)}")
        return value

    def integer(self, value: Any, where: str) -> int:
        if isinstance(value, bool) or not isinstance(value, int):
            raise self.fail(f"{where}: expected an integer, got {_kind(value)}")
        return value

    def number(self, value: Any, where: str) -> float:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise self.fail(f"{where}: expected a number, got {_kind(value)}")
        return float(value)

    def array(self, value: Any, where: str) -> list:
        if not isinstance(value, list):
            raise self.fail(f"{where}: expected an array, got {_kind(value)}")
        return value


def _kind(value: Any) -> str:
    if isinstance(value, bool):
        return "boolean"
    if value is None:
        return "null"
    return {str: "string", int: "integer", float: "number", list: "array", dict: "object"}.get(
        type(value), type(value).__name__
    )


_BUNDLE_KEYS = {
    "format_version": True,
    "passage_id": True,
    "sentence_token_counts": True,
    "tokens": True,
    "entities": True,
    "triples": True,
    "links": True,
    "nli_scores": True,
    "sentence_labels": False,
    "passage_human_score": False,
}

_TOKEN_KEYS = {
    "surface": True,
    "sentence_index": True,
    "within_sentence_index": True,
    "passage_position": True,
    "topk_probs": True,
    "realized_prob": True,
    "pos_tag": False,
    "ner_type": False,
}

_ENTITY_KEYS = {"entity_id": True, "sentence_index": True, "token_range": True}

_TRIPLE_KEYS = {
    "subject": True,
    "relation_token": True,
    "object": True,
    "att_subject_object": True,
    "att_subject_relation": True,
    "att_relation_object": True,
}

_LINK_KEYS = {"sentence_a": True, "sentence_b": True, "kind": True}

_NLI_KEYS = {
    "premise_sentence": True,
    "hypothesis_sentence": True,
    "contradiction_prob": True,
}


def bundle_from_obj(obj: Any, *, line_number: int | None = None) -> PassageBundle:
    """Decode one JSON object into a :class:`PassageBundle`.

    Raises :class:`BundleParseError` for schema problems and
    :class:`BundleIntegrityError` for dangling cross-references.
    """
    p = _Parser(line_number)
    record = p.obj(obj, "bundle", _BUNDLE_KEYS)

    version = p.integer(record["format_version"], "bundle.format_version")
    if version != FORMAT_VERSION:
        raise p.fail(
            f"bundle.format_version: unsupported version {version} "
            f"(this reader handles {FORMAT_VERSION})"
        )

    passage_id = p.string(record, "passage_id", "bundle")

    counts = tuple(
        p.integer(item, f"bundle.sentence_token_counts[{idx}]")
        for idx, item in enumerate(p.array(record["sentence_token_counts"], "bundle.sentence_token_counts"))
    )

    tokens = []
    for idx, raw in enumerate(p.array(record["tokens"], "bundle.tokens")):
        where = f"bundle.tokens[{idx}]"
        tok = p.obj(raw, where, _TOKEN_KEYS)
        topk = tuple(
            p.number(item, f"{where}.topk_probs[{j}]")
            for j, item in enumerate(p.array(tok["topk_probs"], f"{where}.topk_probs"))
        )
        pos_tag = tok.get("pos_tag")
        if pos_tag is not None and not isinstance(pos_tag, str):
            raise p.fail(f"{where}.pos_tag: expected a string or null, got {_kind(pos_tag)}")
        ner_type = tok.get("ner_type")
        if ner_type is not None and not isinstance(ner_type, str):
            raise p.fail(f"{where}.ner_type: expected a string or null, got {_kind(ner_type)}")
        tokens.append(
            TokenRecord(
                surface=p.string(tok, "surface", where),
                sentence_index=p.integer(tok["sentence_index"], f"{where}.sentence_index"),
                within_sentence_index=p.integer(
                    tok["within_sentence_index"], f"{where}.within_sentence_index"
                ),
                passage_position=p.integer(tok["passage_position"], f"{where}.passage_position"),
                topk_probs=topk,
                realized_prob=p.number(tok["realized_prob"], f"{where}.realized_prob"),
                pos_tag=pos_tag,
                ner_type=ner_type,
            )
        )

    entities = []
    for idx, raw in enumerate(p.array(record["entities"], "bundle.entities")):
        where = f"bundle.entities[{idx}]"
        ent = p.obj(raw, where, _ENTITY_KEYS)
        rng = p.array(ent["token_range"], f"{where}.token_range")
        if len(rng) != 2:
            raise p.fail(f"{where}.token_range: expected [start, end], got {len(rng)} item(s)")
        entities.append(
            EntitySpan(
                entity_id=p.string(ent, "entity_id", where),
                sentence_index=p.integer(ent["sentence_index"], f"{where}.sentence_index"),
                token_range=(
                    p.integer(rng[0], f"{where}.token_range[0]"),
                    p.integer(rng[1], f"{where}.token_range[1]"),
                ),
            )
        )

    triples = []
    for idx, raw in enumerate(p.array(record["triples"], "bundle.triples")):
        where = f"bundle.triples[{idx}]"
        tri = p.obj(raw, where, _TRIPLE_KEYS)
        ref_obj = p.obj(
            tri["relation_token"],
            f"{where}.relation_token",
            {"sentence_index": True, "within_sentence_index": True},
        )
        triples.append(
            Triple(
                subject=p.string(tri, "subject", where),
                relation_token=TokenRef(
                    sentence_index=p.integer(
                        ref_obj["sentence_index"], f"{where}.relation_token.sentence_index"
                    ),
                    within_sentence_index=p.integer(
                        ref_obj["within_sentence_index"],
                        f"{where}.relation_token.within_sentence_index",
                    ),
                ),
                object=p.string(tri, "object", where),
                att_subject_object=p.number(tri["att_subject_object"], f"{where}.att_subject_object"),
                att_subject_relation=p.number(
                    tri["att_subject_relation"], f"{where}.att_subject_relation"
                ),
                att_relation_object=p.number(
                    tri["att_relation_object"], f"{where}.att_relation_object"
                ),
            )
        )

    links = []
    for idx, raw in enumerate(p.array(record["links"], "bundle.links")):
        where = f"bundle.links[{idx}]"
        link = p.obj(raw, where, _LINK_KEYS)
        links.append(
            SentenceLink(
                sentence_a=p.integer(link["sentence_a"], f"{where}.sentence_a"),
                sentence_b=p.integer(link["sentence_b"], f"{where}.sentence_b"),
                kind=p.string(link, "kind", where),
            )
        )

    nli_scores = []
    for idx, raw in enumerate(p.array(record["nli_scores"], "bundle.nli_scores")):
        where = f"bundle.nli_scores[{idx}]"
        nli = p.obj(raw, where, _NLI_KEYS)
        nli_scores.append(
            NliScore(
                premise_sentence=p.integer(nli["premise_sentence"], f"{where}.premise_sentence"),
                hypothesis_sentence=p.integer(
                    nli["hypothesis_sentence"], f"{where}.hypothesis_sentence"
                ),
                contradiction_prob=p.number(
                    nli["contradiction_prob"], f"{where}.contradiction_prob"
                ),
            )
        )

    labels = None
    if record.get("sentence_labels") is not None:
        labels = tuple(
            p.number(item, f"bundle.sentence_labels[{idx}]")
            for idx, item in enumerate(p.array(record["sentence_labels"], "bundle.sentence_labels"))
        )

    human = None
    if record.get("passage_human_score") is not None:
        human = p.number(record["passage_human_score"], "bundle.passage_human_score")

    bundle = PassageBundle(
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
    _check_references(bundle, line_number)
    return bundle


def _check_references(bundle: PassageBundle, line_number: int | None) -> None:
    """Reject dangling or ambiguous cross-references at load time."""
    seen: set[str] = set()
    for span in bundle.entities:
        if span.entity_id in seen:
            raise BundleIntegrityError(
                "duplicate entity id makes triple references ambiguous",
                reference=f"entity_id {span.entity_id!r}",
                line_number=line_number,
            )
        seen.add(span.entity_id)

    m = bundle.num_sentences
    for idx, triple in enumerate(bundle.triples):
        for role in ("subject", "object"):
            entity_id = getattr(triple, role)
            if entity_id not in seen:
                raise BundleIntegrityError(
                    f"triples[{idx}].{role} names an unknown entity",
                    reference=f"entity_id {entity_id!r}",
                    line_number=line_number,
                )
        ref = triple.relation_token
        if not 1 <= ref.sentence_index <= m:
            raise BundleIntegrityError(
                f"triples[{idx}].relation_token sentence is out of range 1..{m}",
                reference=f"sentence_index {ref.sentence_index}",
                line_number=line_number,
            )
        count = bundle.sentence_token_counts[ref.sentence_index - 1]
        if not 1 <= ref.within_sentence_index <= count:
            raise BundleIntegrityError(
                f"triples[{idx}].relation_token position is out of range "
                f"1..{count} for sentence {ref.sentence_index}",
                reference=f"within_sentence_index {ref.within_sentence_index}",
                line_number=line_number,
            )


def load_bundle(source: bytes | str | os.PathLike | io.IOBase) -> PassageBundle:
    """Load a single passage bundle from a path, string, bytes, or stream.

    The source must contain exactly one non-empty line; use
    :func:`load_corpus` for multi-passage files.
    """
    bundles = list(iter_bundles(source))
    if len(bundles) != 1:
        raise BundleParseError(
            f"expected exactly one passage record, found {len(bundles)}"
        )
    return bundles[0]


def load_corpus(source: bytes | str | os.PathLike | io.IOBase) -> list[PassageBundle]:
    """Load every passage bundle from a JSON Lines source, in order."""
    return list(iter_bundles(source))


def iter_bundles(source: bytes | str | os.PathLike | io.IOBase) -> Iterator[PassageBundle]:
    """Stream bundles one line at a time; blank lines are skipped."""
    for line_number, line in _lines(source):
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise BundleParseError(f"invalid JSON ({exc.msg})", line_number=line_number) from exc
        yield bundle_from_obj(obj, line_number=line_number)


def _is_existing_path(candidate: str) -> bool:
    # A raw JSON record can exceed the OS filename limit, which makes
    # Path.exists() raise instead of returning False.
    try:
        return Path(candidate).exists()
    except OSError:
        return False


def _lines(source: bytes | str | os.PathLike | io.IOBase) -> Iterator[tuple[int, str]]:
    if isinstance(source, bytes):
        text = source.decode("utf-8")
    elif isinstance(source, io.IOBase):
        data = source.read()
        text = data.decode("utf-8") if isinstance(data, bytes) else data
    elif isinstance(source, os.PathLike) or (
        isinstance(source, str) and "\n" not in source and _is_existing_path(source)
    ):
        text = Path(source).read_text(encoding="utf-8")
    elif isinstance(source, str):
        text = source
    else:
        raise TypeError(f"cannot read bundles from {type(source).__name__}")
    for line_number, line in enumerate(text.splitlines(), start=1):
        if line.strip():
            yield line_number, line


# ---------------------------------------------------------------------------
# serialization


def bundle_to_obj(bundle: PassageBundle) -> dict[str, Any]:
    """Encode a bundle back into its wire-format object."""
    obj: dict[str, Any] = {
        "format_version": FORMAT_VERSION,
        "passage_id": bundle.passage_id,
        "sentence_token_counts": list(bundle.sentence_token_counts),
        "tokens": [_token_to_obj(token) for token in bundle.tokens],
        "entities": [
            {
                "entity_id": span.entity_id,
                "sentence_index": span.sentence_index,
                "token_range": list(span.token_range),
            }
            for span in bundle.entities
        ],
        "triples": [
            {
                "subject": triple.subject,
                "relation_token": {
                    "sentence_index": triple.relation_token.sentence_index,
                    "within_sentence_index": triple.relation_token.within_sentence_index,
                },
                "object": triple.object,
                "att_subject_object": triple.att_subject_object,
                "att_subject_relation": triple.att_subject_relation,
                "att_relation_object": triple.att_relation_object,
            }
            for triple in bundle.triples
        ],
        "links": [
            {"sentence_a": link.sentence_a, "sentence_b": link.sentence_b, "kind": link.kind}
            for link in bundle.links
        ],
        "nli_scores": [
            {
                "premise_sentence": score.premise_sentence,
                "hypothesis_sentence": score.hypothesis_sentence,
                "contradiction_prob": score.contradiction_prob,
            }
            for score in bundle.nli_scores
        ],
    }
    if bundle.sentence_labels is not None:
        obj["sentence_labels"] = list(bundle.sentence_labels)
    if bundle.passage_human_score is not None:
        obj["passage_human_score"] = bundle.passage_human_score
    return obj


def _token_to_obj(token: TokenRecord) -> dict[str, Any]:
    obj: dict[str, Any] = {
        "surface": token.surface,
        "sentence_index": token.sentence_index,
        "within_sentence_index": token.within_sentence_index,
        "passage_position": token.passage_position,
        "topk_probs": list(token.topk_probs),
        "realized_prob": token.realized_prob,
    }
    if token.pos_tag is not None:
        obj["pos_tag"] = token.pos_tag
    if token.ner_type is not None:
        obj["ner_type"] = token.ner_type
    return obj


def dump_bundle(bundle: PassageBundle) -> str:
    """Serialize one bundle to its JSON Lines record (no trailing newline)."""
    return json.dumps(bundle_to_obj(bundle), separators=(",", ":"))


def write_corpus(bundles: Iterable[PassageBundle], path: str | os.PathLike) -> None:
    """Write bundles as JSON Lines, one record per line."""
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        for bundle in bundles:
            handle.write(dump_bundle(bundle))
            handle.write("\n")


# ---------------------------------------------------------------------------
# validation


def validate_bundle(bundle: PassageBundle, config: Config | None = None) -> list[Violation]:
    """Check every wire-format invariant; returns all violations found.

    Total by design: any decodable bundle gets a (possibly empty) list,
    never an exception, so callers can report every problem at once.
    ``config`` supplies the expected top-k width (defaults to
    :class:`~halograph.config.Config`).
    """
    if config is None:
        config = Config()
    out: list[Violation] = []
    add = out.append

    m = bundle.num_sentences
    if m < 1:
        add(
            Violation(
                "sentence_token_counts",
                "nonempty-passage",
                "a passage must contain at least one sentence",
            )
        )
    for idx, count in enumerate(bundle.sentence_token_counts):
        if count < 1:
            add(
                Violation(
                    f"sentence_token_counts[{idx}]",
                    "nonempty-sentence",
                    f"sentence {idx + 1} declares {count} tokens; every sentence needs at least one",
                )
            )

    _validate_tokens(bundle, config, add)
    _validate_entities(bundle, add)
    _validate_triples(bundle, add)
    _validate_links_and_nli(bundle, add)

    if bundle.sentence_labels is not None:
        if len(bundle.sentence_labels) != m:
            add(
                Violation(
                    "sentence_labels",
                    "label-count",
                    f"expected {m} labels (one per sentence), got {len(bundle.sentence_labels)}",
                )
            )
        for idx, label in enumerate(bundle.sentence_labels):
            if label not in ALLOWED_LABELS:
                add(
                    Violation(
                        f"sentence_labels[{idx}]",
                        "label-value",
                        f"label must be one of {{0, 0.5, 1}}, got {label!r}",
                    )
                )

    if bundle.passage_human_score is not None and not 0.0 <= bundle.passage_human_score <= 1.0:
        add(
            Violation(
                "passage_human_score",
                "human-score-range",
                f"passage score must lie in [0, 1], got {bundle.passage_human_score!r}",
            )
        )

    return out


def _validate_tokens(bundle: PassageBundle, config: Config, add) -> None:
    expected_total = bundle.num_tokens
    if len(bundle.tokens) != expected_total:
        add(
            Violation(
                "tokens",
                "token-count",
                f"sentence_token_counts promises {expected_total} tokens, "
                f"the token array holds {len(bundle.tokens)}",
            )
        )

    # Walk the expected (sentence, within, passage) coordinates in
    # parallel with the stored tokens so reordering is pinpointed.
    expected = _expected_coordinates(bundle.sentence_token_counts)
    for idx, token in enumerate(bundle.tokens):
        where = f"tokens[{idx}]"
        if idx < len(expected):
            sentence, within, position = expected[idx]
            actual = (token.sentence_index, token.within_sentence_index, token.passage_position)
            if actual != (sentence, within, position):
                add(
                    Violation(
                        where,
                        "token-order",
                        f"expected coordinates (sentence={sentence}, within={within}, "
                        f"position={position}), got (sentence={actual[0]}, "
                        f"within={actual[1]}, position={actual[2]})",
                    )
                )
        _validate_topk(token, where, config, add)

    if len(bundle.tokens) < len(expected):
        add(
            Violation(
                "tokens",
                "token-order",
                "token array ends before covering every declared sentence position",
            )
        )


def _expected_coordinates(counts: tuple[int, ...]) -> list[tuple[int, int, int]]:
    coords = []
    position = 0
    for sentence, count in enumerate(counts, start=1):
        for within in range(1, count + 1):
            position += 1
            coords.append((sentence, within, position))
    return coords


def _validate_topk(token: TokenRecord, where: str, config: Config, add) -> None:
    topk = token.topk_probs
    if len(topk) != config.k:
        add(
            Violation(
                f"{where}.topk_probs",
                "topk-width",
                f"expected {config.k} probabilities, got {len(topk)}",
            )
        )
    total = 0.0
    descending = True
    in_range = True
    for j, p in enumerate(topk):
        if not 0.0 <= p <= 1.0:
            in_range = False
            add(
                Violation(
                    f"{where}.topk_probs[{j}]",
                    "prob-range",
                    f"probability must lie in [0, 1], got {p!r}",
                )
            )
        if j > 0 and topk[j] > topk[j - 1]:
            descending = False
        total += p
    if not descending:
        add(
            Violation(
                f"{where}.topk_probs",
                "topk-descending",
                "top-k probabilities must be sorted in non-increasing order",
            )
        )
    if in_range and total > 1.0 + PROB_SUM_TOLERANCE:
        add(
            Violation(
                f"{where}.topk_probs",
                "topk-mass",
                f"top-k probabilities sum to {total!r}, above 1",
            )
        )
    if not 0.0 <= token.realized_prob <= 1.0:
        add(
            Violation(
                f"{where}.realized_prob",
                "prob-range",
                f"probability must lie in [0, 1], got {token.realized_prob!r}",
            )
        )
    elif topk and token.realized_prob > topk[0] + PROB_SUM_TOLERANCE:
        add(
            Violation(
                f"{where}.realized_prob",
                "realized-below-top",
                f"realized probability {token.realized_prob!r} exceeds the "
                f"largest recorded probability {topk[0]!r}",
            )
        )


def _validate_entities(bundle: PassageBundle, add) -> None:
    m = bundle.num_sentences
    by_sentence: dict[int, list[tuple[int, EntitySpan]]] = {}
    for idx, span in enumerate(bundle.entities):
        where = f"entities[{idx}]"
        if not 1 <= span.sentence_index <= m:
            add(
                Violation(
                    f"{where}.sentence_index",
                    "sentence-range",
                    f"sentence index must lie in 1..{m}, got {span.sentence_index}",
                )
            )
            continue
        count = bundle.sentence_token_counts[span.sentence_index - 1]
        lo, hi = span.token_range
        if not (1 <= lo <= hi <= count):
            add(
                Violation(
                    f"{where}.token_range",
                    "span-bounds",
                    f"span [{lo}, {hi}] does not fit sentence {span.sentence_index} "
                    f"(valid positions 1..{count})",
                )
            )
            continue
        by_sentence.setdefault(span.sentence_index, []).append((idx, span))

    for spans in by_sentence.values():
        spans.sort(key=lambda item: item[1].token_range)
        for (_, prev), (idx, span) in zip(spans, spans[1:]):
            if span.token_range[0] <= prev.token_range[1]:
                add(
                    Violation(
                        f"entities[{idx}].token_range",
                        "span-overlap",
                        f"span of {span.entity_id!r} overlaps span of {prev.entity_id!r} "
                        f"in sentence {span.sentence_index}",
                    )
                )


def _validate_triples(bundle: PassageBundle, add) -> None:
    spans = bundle.entity_by_id()
    for idx, triple in enumerate(bundle.triples):
        where = f"triples[{idx}]"
        sentence = triple.relation_token.sentence_index
        for role in ("subject", "object"):
            span = spans.get(getattr(triple, role))
            if span is not None and span.sentence_index != sentence:
                add(
                    Violation(
                        f"{where}.{role}",
                        "triple-same-sentence",
                        f"{role} lives in sentence {span.sentence_index} but the "
                        f"relation token is in sentence {sentence}",
                    )
                )
        for name in ("att_subject_object", "att_subject_relation", "att_relation_object"):
            weight = getattr(triple, name)
            if not weight >= 0.0:  # also catches NaN
                add(
                    Violation(
                        f"{where}.{name}",
                        "attention-nonnegative",
                        f"attention weight must be non-negative, got {weight!r}",
                    )
                )


def _validate_links_and_nli(bundle: PassageBundle, add) -> None:
    m = bundle.num_sentences
    seen_links: set[tuple[int, int]] = set()
    valid_links: list[SentenceLink] = []
    for idx, link in enumerate(bundle.links):
        where = f"links[{idx}]"
        if link.kind not in LINK_KINDS:
            add(
                Violation(
                    f"{where}.kind",
                    "link-kind",
                    f"link kind must be one of {LINK_KINDS}, got {link.kind!r}",
                )
            )
        if not (1 <= link.sentence_a < link.sentence_b <= m):
            add(
                Violation(
                    where,
                    "link-order",
                    f"links must satisfy 1 <= a < b <= {m}, got "
                    f"(a={link.sentence_a}, b={link.sentence_b})",
                )
            )
            continue
        pair = (link.sentence_a, link.sentence_b)
        if pair in seen_links:
            add(
                Violation(
                    where,
                    "link-duplicate",
                    f"link between sentences {pair[0]} and {pair[1]} appears more than once",
                )
            )
            continue
        seen_links.add(pair)
        valid_links.append(link)

    seen_pairs: set[tuple[int, int]] = set()
    for idx, score in enumerate(bundle.nli_scores):
        where = f"nli_scores[{idx}]"
        ok = True
        for name, value in (
            ("premise_sentence", score.premise_sentence),
            ("hypothesis_sentence", score.hypothesis_sentence),
        ):
            if not 1 <= value <= m:
                ok = False
                add(
                    Violation(
                        f"{where}.{name}",
                        "sentence-range",
                        f"sentence index must lie in 1..{m}, got {value}",
                    )
                )
        if not 0.0 <= score.contradiction_prob <= 1.0:
            add(
                Violation(
                    f"{where}.contradiction_prob",
                    "prob-range",
                    f"probability must lie in [0, 1], got {score.contradiction_prob!r}",
                )
            )
        if not ok:
            continue
        pair = (score.premise_sentence, score.hypothesis_sentence)
        if pair in seen_pairs:
            add(
                Violation(
                    where,
                    "nli-duplicate",
                    f"ordered pair (premise={pair[0]}, hypothesis={pair[1]}) "
                    "is scored more than once",
                )
            )
        seen_pairs.add(pair)

    for link in valid_links:
        for premise, hypothesis in (
            (link.sentence_a, link.sentence_b),
            (link.sentence_b, link.sentence_a),
        ):
            if (premise, hypothesis) not in seen_pairs:
                add(
                    Violation(
                        "nli_scores",
                        "nli-complete",
                        "missing NLI score for ordered pair "
                        f"(premise={premise}, hypothesis={hypothesis})",
                    )
                )
