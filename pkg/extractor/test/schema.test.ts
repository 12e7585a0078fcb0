import { describe, expect, it } from "vitest";

import { PassageBundle, checkBundle, dumpBundle } from "../src/schema.js";

function minimalBundle(): PassageBundle {
  return {
    passage_id: "p1",
    sentence_token_counts: [2],
    tokens: [
      {
        surface: "It",
        sentence_index: 1,
        within_sentence_index: 1,
        passage_position: 1,
        topk_probs: [0.5, 0.3, 0.1],
        realized_prob: 0.5,
        pos_tag: "PRON",
        ner_type: undefined,
      },
      {
        surface: "rained",
        sentence_index: 1,
        within_sentence_index: 2,
        passage_position: 2,
        topk_probs: [0.4, 0.2, 0.1],
        realized_prob: 0.4,
        pos_tag: "VERB",
        ner_type: undefined,
      },
    ],
    entities: [],
    triples: [],
    links: [],
    nli_scores: [],
  };
}

describe("dumpBundle", () => {
  it("emits the wire fields in canonical order", () => {
    const record = JSON.parse(dumpBundle(minimalBundle()));
    expect(Object.keys(record)).toEqual([
      "format_version",
      "passage_id",
      "sentence_token_counts",
      "tokens",
      "entities",
      "triples",
      "links",
      "nli_scores",
    ]);
    expect(record.format_version).toBe(1);
    // Unset optional tags are omitted entirely, not emitted as null.
    expect("ner_type" in record.tokens[0]).toBe(false);
    expect(record.tokens[0].pos_tag).toBe("PRON");
  });

  it("includes labels only when present", () => {
    const bundle = minimalBundle();
    bundle.sentence_labels = [1.0];
    bundle.passage_human_score = 0.5;
    const record = JSON.parse(dumpBundle(bundle));
    expect(record.sentence_labels).toEqual([1.0]);
    expect(record.passage_human_score).toBe(0.5);
  });
});

describe("checkBundle", () => {
  it("accepts a well-formed bundle", () => {
    expect(checkBundle(minimalBundle())).toEqual([]);
  });

  it("flags token count mismatches", () => {
    const bundle = minimalBundle();
    bundle.sentence_token_counts = [3];
    expect(checkBundle(bundle).join("; ")).toMatch(/token count/);
  });

  it("flags non-descending top-k and inflated realized probability", () => {
    const bundle = minimalBundle();
    bundle.tokens[0].topk_probs = [0.3, 0.5, 0.1];
    bundle.tokens[1].realized_prob = 0.9;
    const problems = checkBundle(bundle).join("; ");
    expect(problems).toMatch(/not descending/);
    expect(problems).toMatch(/realized above top-1/);
  });

  it("flags links without NLI coverage", () => {
    const bundle = minimalBundle();
    bundle.sentence_token_counts = [1, 1];
    bundle.tokens[0] = { ...bundle.tokens[0] };
    bundle.tokens[1] = {
      ...bundle.tokens[1],
      sentence_index: 2,
      within_sentence_index: 1,
    };
    bundle.links = [{ sentence_a: 1, sentence_b: 2, kind: "entity-link" }];
    expect(checkBundle(bundle).join("; ")).toMatch(/no NLI score/);
  });

  it("flags out-of-bounds entity spans and dangling triple references", () => {
    const bundle = minimalBundle();
    bundle.entities = [
      { entity_id: "e001", sentence_index: 1, token_range: [1, 5] },
    ];
    bundle.triples = [
      {
        subject: "e001",
        relation_token: { sentence_index: 1, within_sentence_index: 2 },
        object: "e999",
        att_subject_object: 0.5,
        att_subject_relation: 0.5,
        att_relation_object: 0.5,
      },
    ];
    const problems = checkBundle(bundle).join("; ");
    expect(problems).toMatch(/out of bounds/);
    expect(problems).toMatch(/e999 unknown/);
  });
});
