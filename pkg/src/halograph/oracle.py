"""Straight-line reference scorer used to cross-check the pipeline.

This module recomputes every score from first principles with nothing
but ``json`` and ``math``: no kernels, no graph objects, no shared
helpers -- even the quantile and the median are reimplemented inline.
The duplication is deliberate.  The pipeline and this file are two
independent routes to the same numbers, so a bug in shared code cannot
cancel itself out when the two are compared.

Keep it that way: never import from the other halograph modules, and
never "clean up" a local helper by delegating to one of theirs.

The output mirrors the pipeline's report schema (header line followed
by one record per passage) except that operational ``warnings`` fields
are omitted -- they describe the run, not the scores.  Scores are
expected to agree with the pipeline to floating-point reordering
error, far inside the 1e-9 relative band the acceptance tests use.
"""

from __future__ import annotations

import json
import math


def score_file(
    input_path,
    output_path=None,
    *,
    alpha: float = 0.8,
    beta: float = 0.65,
    lam: float = 0.7,
    sentence_projection: str = "logistic",
    passage_projection: str = "inverse",
    isolated_sentence_policy: str = "adjacent-fallback",
) -> list[str]:
    """Score every passage in a bundle file; returns the report lines.

    Writes the lines to ``output_path`` when given.  Input bundles are
    assumed valid; this scorer checks nothing.
    """
    with open(input_path, encoding="utf-8") as handle:
        records = [json.loads(line) for line in handle if line.strip()]

    scored = [_score_passage(rec, alpha, beta, lam, isolated_sentence_policy) for rec in records]

    pooled = []
    for passage in scored:
        for sentence in passage["sentences"]:
            pooled.append(sentence["sentence_uncertainty"])
    sentence_spec = _fit_projection(sentence_projection, pooled)
    passage_specs = {}
    for method in ("adjacent", "average", "graph"):
        passage_specs[method] = _fit_projection(
            passage_projection, [p["passage"][method]["raw"] for p in scored]
        )

    for passage in scored:
        for sentence in passage["sentences"]:
            sentence["projected_uncertainty"] = _apply_projection(
                sentence["sentence_uncertainty"], sentence_spec
            )
        for method in ("graph", "adjacent", "average"):
            entry = passage["passage"][method]
            entry["projected"] = _apply_projection(entry["raw"], passage_specs[method])

    header = {
        "report_version": 1,
        "config": {
            "alpha": alpha,
            "beta": beta,
            "lambda": lam,
            "k": len(records[0]["tokens"][0]["topk_probs"]) if records else 3,
            "sentence_projection": sentence_projection,
            "passage_projection": passage_projection,
            "isolated_sentence_policy": isolated_sentence_policy,
        },
        "substitute": None,
        "sentence_projection": sentence_spec,
        "passage_projections": {m: passage_specs[m] for m in sorted(passage_specs)},
        "num_passages": len(scored),
    }
    lines = [json.dumps(header, separators=(",", ":"))]
    lines.extend(json.dumps(passage, separators=(",", ":")) for passage in scored)

    if output_path is not None:
        with open(output_path, "w", encoding="utf-8", newline="\n") as handle:
            for line in lines:
                handle.write(line)
                handle.write("\n")
    return lines


def _score_passage(rec, alpha, beta, lam, isolated_sentence_policy):
    counts = rec["sentence_token_counts"]
    m = len(counts)
    tokens = rec["tokens"]
    n = len(tokens)

    # --- token level: decayed flatness of the recorded distribution
    token_u = []
    for token in tokens:
        probs = token["topk_probs"]
        k = len(probs)
        biggest = probs[0]
        for p in probs:
            if p > biggest:
                biggest = p
        mean = sum(probs) / k
        variance = sum((p - mean) ** 2 for p in probs) / k
        decay = 1.0 + math.exp(token["passage_position"] / n - 1.0)
        token_u.append(decay / (biggest + variance))

    # token scores slice per sentence
    offsets = []
    running = 0
    for count in counts:
        offsets.append(running)
        running += count
    per_sentence = [
        token_u[offsets[i] : offsets[i] + counts[i]] for i in range(m)
    ]

    # --- entity level: own span mean, then one hop of propagation
    self_u = {}
    for ent in rec["entities"]:
        lo, hi = ent["token_range"]
        window = per_sentence[ent["sentence_index"] - 1][lo - 1 : hi]
        self_u[ent["entity_id"]] = sum(window) / len(window)

    incoming = {}
    for triple in rec["triples"]:
        incoming.setdefault(triple["object"], []).append(triple)

    propagated = {}
    for ent in rec["entities"]:
        eid = ent["entity_id"]
        triples = incoming.get(eid, [])
        if not triples:
            propagated[eid] = 0.0
            continue
        intensity = sum(
            (t["att_subject_relation"] + t["att_relation_object"]) / 2.0 for t in triples
        ) / len(triples)
        if intensity < 1e-9:
            intensity = 1e-9
        propagated[eid] = sum(
            (t["att_subject_object"] / intensity) * self_u[t["subject"]] for t in triples
        )

    entities_out = [
        {
            "entity_id": eid,
            "self_uncertainty": self_u[eid],
            "propagated_uncertainty": propagated[eid],
        }
        for eid in sorted(self_u)
    ]

    # --- sentence level: entity mean mixed with a token quantile
    entities_by_sentence = [[] for _ in range(m)]
    for ent in rec["entities"]:
        entities_by_sentence[ent["sentence_index"] - 1].append(ent["entity_id"])

    sentences_out = []
    sentence_u = []
    for i in range(m):
        global_u = _quantile(per_sentence[i], alpha)
        ids = entities_by_sentence[i]
        if ids:
            entity_u = sum(self_u[eid] + beta * propagated[eid] for eid in ids) / len(ids)
        else:
            entity_u = global_u
        mixed = lam * entity_u + (1.0 - lam) * global_u
        sentence_u.append(mixed)
        sentences_out.append(
            {
                "sentence_index": i + 1,
                "entity_uncertainty": entity_u,
                "global_uncertainty": global_u,
                "sentence_uncertainty": mixed,
            }
        )

    # --- passage level: three aggregates over the sentence scores
    linked = {i: set() for i in range(1, m + 1)}
    for link in rec["links"]:
        linked[link["sentence_a"]].add(link["sentence_b"])
        linked[link["sentence_b"]].add(link["sentence_a"])
    nli = {
        (s["premise_sentence"], s["hypothesis_sentence"]): s["contradiction_prob"]
        for s in rec["nli_scores"]
    }

    def weighted(neighbor_sets):
        numerator = 0.0
        total = 0
        for i in range(1, m + 1):
            for j in sorted(neighbor_sets[i]):
                numerator += sentence_u[i - 1] * nli[(j, i)]
                total += 1
        return numerator / total if total else None

    def adjacent_sets():
        return {
            i: [j for j in (i - 1, i + 1) if 1 <= j <= m] for i in range(1, m + 1)
        }

    mean_u = sum(sentence_u) / m

    if not rec["links"]:
        # No links anywhere: the graph aggregate is the plain average.
        graph_score = mean_u
    else:
        graph_sets = {}
        for i in range(1, m + 1):
            if linked[i]:
                graph_sets[i] = linked[i]
            elif isolated_sentence_policy == "adjacent-fallback":
                graph_sets[i] = [j for j in (i - 1, i + 1) if 1 <= j <= m]
            else:
                graph_sets[i] = []
        graph_score = weighted(graph_sets)
        if graph_score is None:
            graph_score = mean_u
    adjacent_score = weighted(adjacent_sets())
    if adjacent_score is None:
        adjacent_score = mean_u

    return {
        "passage_id": rec["passage_id"],
        "tokens": [
            {
                "sentence_index": token["sentence_index"],
                "within_sentence_index": token["within_sentence_index"],
                "passage_position": token["passage_position"],
                "uncertainty": value,
            }
            for token, value in zip(tokens, token_u)
        ],
        "entities": entities_out,
        "sentences": sentences_out,
        "passage": {
            "graph": {"raw": graph_score},
            "adjacent": {"raw": adjacent_score},
            "average": {"raw": mean_u},
        },
    }


def _quantile(values, level):
    xs = sorted(values)
    n = len(xs)
    if n == 1:
        return xs[0]
    h = (n - 1) * level
    lo = int(h)
    if lo >= n - 1:
        return xs[-1]
    return xs[lo] + (h - lo) * (xs[lo + 1] - xs[lo])


def _median(values):
    xs = sorted(values)
    n = len(xs)
    mid = n // 2
    if n % 2:
        return xs[mid]
    return (xs[mid - 1] + xs[mid]) / 2.0


def _fit_projection(kind, corpus_scores):
    if kind == "logistic":
        return {"kind": "logistic", "mu": _median(corpus_scores), "tau": 1.0}
    return {"kind": kind}


def _apply_projection(score, spec):
    kind = spec["kind"]
    if kind == "inverse":
        return score / (1.0 + score)
    if kind == "sigmoid":
        return 2.0 * (1.0 / (1.0 + math.exp(-score)) - 0.5)
    return 1.0 / (1.0 + math.exp(-((score - spec["mu"]) / spec["tau"])))
