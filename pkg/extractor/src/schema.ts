/**
 * Wire-format types for passage bundles, mirroring the scorer's JSON
 * Lines schema exactly.  The extractor only ever talks to the scorer
 * through serialized bundles, so this file is the entire contract:
 * field names, nesting, and the invariants the scorer validates.
 */

export const FORMAT_VERSION = 1;

export interface TokenRecord {
  surface: string;
  sentence_index: number; // 1-based
  within_sentence_index: number; // 1-based within the sentence
  passage_position: number; // 1-based over the whole passage
  topk_probs: number[]; // descending, sum <= 1
  realized_prob: number; // <= topk_probs[0]
  pos_tag?: string;
  ner_type?: string;
}

export interface EntitySpan {
  entity_id: string;
  sentence_index: number;
  token_range: [number, number]; // inclusive, 1-based within the sentence
}

export interface TokenRef {
  sentence_index: number;
  within_sentence_index: number;
}

export interface Triple {
  subject: string; // entity id
  relation_token: TokenRef;
  object: string; // entity id
  att_subject_object: number;
  att_subject_relation: number;
  att_relation_object: number;
}

export type LinkKind = "coreference" | "entity-link";

export interface SentenceLink {
  sentence_a: number; // always < sentence_b
  sentence_b: number;
  kind: LinkKind;
}

export interface NliScore {
  premise_sentence: number;
  hypothesis_sentence: number;
  contradiction_prob: number;
}

export interface PassageBundle {
  passage_id: string;
  sentence_token_counts: number[];
  tokens: TokenRecord[];
  entities: EntitySpan[];
  triples: Triple[];
  links: SentenceLink[];
  nli_scores: NliScore[];
  sentence_labels?: number[];
  passage_human_score?: number;
}

/** Serialize one bundle to its JSON Lines record (no trailing newline). */
export function dumpBundle(bundle: PassageBundle): string {
  // Field order matches the scorer's own writer so files diff cleanly.
  const obj: Record<string, unknown> = {
    format_version: FORMAT_VERSION,
    passage_id: bundle.passage_id,
    sentence_token_counts: bundle.sentence_token_counts,
    tokens: bundle.tokens.map((token) => {
      const record: Record<string, unknown> = {
        surface: token.surface,
        sentence_index: token.sentence_index,
        within_sentence_index: token.within_sentence_index,
        passage_position: token.passage_position,
        topk_probs: token.topk_probs,
        realized_prob: token.realized_prob,
      };
      if (token.pos_tag !== undefined) record.pos_tag = token.pos_tag;
      if (token.ner_type !== undefined) record.ner_type = token.ner_type;
      return record;
    }),
    entities: bundle.entities.map((span) => ({
      entity_id: span.entity_id,
      sentence_index: span.sentence_index,
      token_range: span.token_range,
    })),
    triples: bundle.triples.map((triple) => ({
      subject: triple.subject,
      relation_token: {
        sentence_index: triple.relation_token.sentence_index,
        within_sentence_index: triple.relation_token.within_sentence_index,
      },
      object: triple.object,
      att_subject_object: triple.att_subject_object,
      att_subject_relation: triple.att_subject_relation,
      att_relation_object: triple.att_relation_object,
    })),
    links: bundle.links.map((link) => ({
      sentence_a: link.sentence_a,
      sentence_b: link.sentence_b,
      kind: link.kind,
    })),
    nli_scores: bundle.nli_scores.map((score) => ({
      premise_sentence: score.premise_sentence,
      hypothesis_sentence: score.hypothesis_sentence,
      contradiction_prob: score.contradiction_prob,
    })),
  };
  if (bundle.sentence_labels !== undefined) {
    obj.sentence_labels = bundle.sentence_labels;
  }
  if (bundle.passage_human_score !== undefined) {
    obj.passage_human_score = bundle.passage_human_score;
  }
  return JSON.stringify(obj);
}

/**
 * Cheap local sanity check before anything touches disk.  The scorer's
 * validator is the authority; this only catches extractor bugs early
 * with better stack traces.
 */
export function checkBundle(bundle: PassageBundle): string[] {
  const problems: string[] = [];
  const m = bundle.sentence_token_counts.length;
  if (m === 0) problems.push("no sentences");
  if (bundle.sentence_token_counts.some((c) => c < 1)) {
    problems.push("empty sentence");
  }
  const total = bundle.sentence_token_counts.reduce((a, b) => a + b, 0);
  if (bundle.tokens.length !== total) {
    problems.push(`token count ${bundle.tokens.length} != declared ${total}`);
  }
  bundle.tokens.forEach((token, i) => {
    if (token.passage_position !== i + 1) {
      problems.push(`token ${i}: passage_position out of order`);
    }
    const sum = token.topk_probs.reduce((a, b) => a + b, 0);
    if (sum > 1 + 1e-9) problems.push(`token ${i}: top-k mass ${sum} > 1`);
    for (let j = 1; j < token.topk_probs.length; j++) {
      if (token.topk_probs[j] > token.topk_probs[j - 1]) {
        problems.push(`token ${i}: top-k not descending`);
      }
    }
    if (token.realized_prob > token.topk_probs[0] + 1e-9) {
      problems.push(`token ${i}: realized above top-1`);
    }
  });
  const ids = new Set<string>();
  for (const span of bundle.entities) {
    if (ids.has(span.entity_id)) problems.push(`duplicate entity ${span.entity_id}`);
    ids.add(span.entity_id);
    const count = bundle.sentence_token_counts[span.sentence_index - 1];
    const [lo, hi] = span.token_range;
    if (!(lo >= 1 && lo <= hi && hi <= count)) {
      problems.push(`entity ${span.entity_id}: span [${lo}, ${hi}] out of bounds`);
    }
  }
  for (const triple of bundle.triples) {
    if (!ids.has(triple.subject)) problems.push(`triple subject ${triple.subject} unknown`);
    if (!ids.has(triple.object)) problems.push(`triple object ${triple.object} unknown`);
  }
  const pairs = new Set<string>();
  for (const score of bundle.nli_scores) {
    const key = `${score.premise_sentence}|${score.hypothesis_sentence}`;
    if (pairs.has(key)) problems.push(`duplicate NLI pair ${key}`);
    pairs.add(key);
    if (score.contradiction_prob < 0 || score.contradiction_prob > 1) {
      problems.push(`NLI pair ${key}: probability out of range`);
    }
  }
  for (const link of bundle.links) {
    if (!(link.sentence_a < link.sentence_b)) problems.push("link not ordered a < b");
    for (const [p, h] of [
      [link.sentence_a, link.sentence_b],
      [link.sentence_b, link.sentence_a],
    ]) {
      if (!pairs.has(`${p}|${h}`)) problems.push(`link (${p}, ${h}) has no NLI score`);
    }
  }
  return problems;
}
