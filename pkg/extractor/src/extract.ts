/**
 * Passage text -> scoring bundle.
 *
 * The pipeline: sentence split, tokenize, POS/NER tag, attach token
 * probabilities, mark entity spans, derive subject-verb-object triples
 * with attention weights, link sentences that mention the same entity
 * or that open with a pronoun referring back, and score sentence pairs
 * for contradiction.  NLI scores cover linked pairs and adjacent pairs
 * in both directions, because the scorer always computes its
 * adjacent-neighbor aggregate in addition to the graph one.
 */

import {
  EntitySpan,
  NliScore,
  PassageBundle,
  SentenceLink,
  TokenRecord,
  Triple,
  checkBundle,
} from "./schema.js";
import {
  Sentence,
  Tagged,
  capitalizedVocabulary,
  splitSentences,
  tagWord,
  upgradeInitialName,
} from "./text.js";
import { NliBackend, ProbabilityBackend } from "./backends.js";

export interface ExtractOptions {
  k: number;
  probabilities: ProbabilityBackend;
  nli: NliBackend;
}

interface SentenceTokens {
  sentence: Sentence;
  tags: Tagged[];
}

const REFERRING_PRONOUNS = new Set([
  "he", "she", "it", "they", "his", "her", "its", "their",
]);

function tagSentences(sentences: Sentence[]): SentenceTokens[] {
  const vocabulary = capitalizedVocabulary(sentences);
  return sentences.map((sentence) => {
    const tags = sentence.words.map((word, index) =>
      tagWord(word, index === 0, vocabulary),
    );
    upgradeInitialName(sentence.words, tags);
    return { sentence, tags };
  });
}

/** Maximal runs of nominal tokens (PROPN or NUM) form entity spans. */
function findEntityRuns(tags: Tagged[]): Array<[number, number]> {
  const runs: Array<[number, number]> = [];
  let start = -1;
  for (let i = 0; i <= tags.length; i++) {
    const nominal =
      i < tags.length && (tags[i].pos === "PROPN" || tags[i].pos === "NUM");
    if (nominal && start < 0) start = i;
    if (!nominal && start >= 0) {
      runs.push([start, i - 1]);
      start = -1;
    }
  }
  return runs;
}

function canonicalName(sentence: Sentence, run: [number, number]): string {
  return sentence.words
    .slice(run[0], run[1] + 1)
    .join(" ")
    .toLowerCase();
}

export function extractBundle(
  passageId: string,
  text: string,
  options: ExtractOptions,
): PassageBundle {
  const sentences = splitSentences(text).filter((s) => s.words.length > 0);
  if (sentences.length === 0) {
    throw new Error(`passage ${passageId}: no sentences found`);
  }
  const tagged = tagSentences(sentences);

  // Tokens with probabilities, positions 1-based on all three axes.
  const surfaces = tagged.flatMap((st) => st.sentence.words);
  const probs = options.probabilities.tokenProbabilities(
    passageId,
    surfaces,
    options.k,
  );
  const tokens: TokenRecord[] = [];
  let passagePosition = 0;
  tagged.forEach((st, sentenceIdx) => {
    st.sentence.words.forEach((word, wordIdx) => {
      const p = probs[passagePosition];
      passagePosition += 1;
      tokens.push({
        surface: word,
        sentence_index: sentenceIdx + 1,
        within_sentence_index: wordIdx + 1,
        passage_position: passagePosition,
        topk_probs: p.topk,
        realized_prob: p.realized,
        pos_tag: st.tags[wordIdx].pos,
        ner_type: st.tags[wordIdx].ner,
      });
    });
  });

  // Entity spans, ids assigned in reading order; canonical surface
  // names group mentions of the same thing across sentences.
  const entities: EntitySpan[] = [];
  const mentionsByName = new Map<string, { id: string; sentence: number }[]>();
  const spansBySentence: Array<Array<{ id: string; run: [number, number] }>> =
    tagged.map(() => []);
  let nextEntity = 1;
  tagged.forEach((st, sentenceIdx) => {
    for (const run of findEntityRuns(st.tags)) {
      const id = `e${String(nextEntity).padStart(3, "0")}`;
      nextEntity += 1;
      entities.push({
        entity_id: id,
        sentence_index: sentenceIdx + 1,
        token_range: [run[0] + 1, run[1] + 1],
      });
      spansBySentence[sentenceIdx].push({ id, run });
      const name = canonicalName(st.sentence, run);
      const seen = mentionsByName.get(name) ?? [];
      seen.push({ id, sentence: sentenceIdx + 1 });
      mentionsByName.set(name, seen);
    }
  });

  // Triples: ordered entity pair with a verb strictly between them;
  // the first such verb is the relation token.
  const triples: Triple[] = [];
  tagged.forEach((st, sentenceIdx) => {
    const spans = spansBySentence[sentenceIdx];
    for (const subject of spans) {
      for (const object of spans) {
        if (object.run[0] <= subject.run[1]) continue;
        let relation = -1;
        for (let i = subject.run[1] + 1; i < object.run[0]; i++) {
          if (st.tags[i].pos === "VERB") {
            relation = i;
            break;
          }
        }
        if (relation < 0) continue;
        const key = (a: string, b: string) => `${sentenceIdx + 1}:${a}>${b}`;
        const rel = `v@${relation + 1}`;
        triples.push({
          subject: subject.id,
          relation_token: {
            sentence_index: sentenceIdx + 1,
            within_sentence_index: relation + 1,
          },
          object: object.id,
          att_subject_object: options.probabilities.attention(
            passageId, key(subject.id, object.id), "so",
          ),
          att_subject_relation: options.probabilities.attention(
            passageId, key(subject.id, rel), "sr",
          ),
          att_relation_object: options.probabilities.attention(
            passageId, key(rel, object.id), "ro",
          ),
        });
      }
    }
  });

  // Links: sentences sharing an entity name form a complete subgraph;
  // a sentence opening with a referring pronoun links to the previous
  // sentence.  Entity links win when both rules fire on a pair.
  const linkKinds = new Map<string, "entity-link" | "coreference">();
  tagged.forEach((st, sentenceIdx) => {
    if (sentenceIdx === 0) return;
    const first = st.sentence.words[0]?.toLowerCase();
    if (first !== undefined && REFERRING_PRONOUNS.has(first)) {
      linkKinds.set(`${sentenceIdx}:${sentenceIdx + 1}`, "coreference");
    }
  });
  for (const mentions of mentionsByName.values()) {
    const sentencesSeen = [...new Set(mentions.map((m) => m.sentence))].sort(
      (a, b) => a - b,
    );
    for (let i = 0; i < sentencesSeen.length; i++) {
      for (let j = i + 1; j < sentencesSeen.length; j++) {
        linkKinds.set(`${sentencesSeen[i]}:${sentencesSeen[j]}`, "entity-link");
      }
    }
  }
  const links: SentenceLink[] = [...linkKinds.entries()]
    .map(([pair, kind]) => {
      const [a, b] = pair.split(":").map(Number);
      return { sentence_a: a, sentence_b: b, kind };
    })
    .sort((x, y) => x.sentence_a - y.sentence_a || x.sentence_b - y.sentence_b);

  // NLI over linked plus adjacent pairs, both directions.
  const pairs = new Set<string>();
  for (const link of links) {
    pairs.add(`${link.sentence_a}:${link.sentence_b}`);
    pairs.add(`${link.sentence_b}:${link.sentence_a}`);
  }
  for (let i = 1; i < sentences.length; i++) {
    pairs.add(`${i}:${i + 1}`);
    pairs.add(`${i + 1}:${i}`);
  }
  const nli_scores: NliScore[] = [...pairs]
    .map((pair) => {
      const [premise, hypothesis] = pair.split(":").map(Number);
      return {
        premise_sentence: premise,
        hypothesis_sentence: hypothesis,
        contradiction_prob: options.nli.contradiction(
          sentences[premise - 1].text,
          sentences[hypothesis - 1].text,
        ),
      };
    })
    .sort(
      (x, y) =>
        x.premise_sentence - y.premise_sentence ||
        x.hypothesis_sentence - y.hypothesis_sentence,
    );

  const bundle: PassageBundle = {
    passage_id: passageId,
    sentence_token_counts: sentences.map((s) => s.words.length),
    tokens,
    entities,
    triples,
    links,
    nli_scores,
  };
  const problems = checkBundle(bundle);
  if (problems.length > 0) {
    throw new Error(
      `passage ${passageId}: internal extraction error: ${problems.join("; ")}`,
    );
  }
  return bundle;
}
