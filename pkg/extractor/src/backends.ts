/**
 * Model backends behind narrow interfaces.
 *
 * Real extraction needs three models: a causal LM for token
 * probabilities and attention, and an NLI cross-encoder for
 * contradiction scores.  This module ships deterministic rule-based
 * stand-ins so the full pipeline runs, validates, and scores without
 * any model downloads; inference-backed implementations plug into the
 * same interfaces.
 */

export interface TokenProbabilities {
  topk: number[]; // descending, sums below 1
  realized: number;
}

export interface ProbabilityBackend {
  /** Per-token top-k distribution plus the realized probability. */
  tokenProbabilities(
    passageId: string,
    surfaces: readonly string[],
    k: number,
  ): TokenProbabilities[];
  /** Aggregated attention between two token groups, in [0, 1]. */
  attention(passageId: string, from: string, to: string): number;
}

export interface NliBackend {
  /** Probability that `hypothesis` contradicts `premise`, in [0, 1]. */
  contradiction(premise: string, hypothesis: string): number;
}

// ---------------------------------------------------------------------------
// deterministic pseudo-random plumbing

/** 32-bit FNV-1a hash of a string. */
export function fnv1a(text: string): number {
  let hash = 0x811c9dc5;
  for (let i = 0; i < text.length; i++) {
    hash ^= text.charCodeAt(i);
    hash = Math.imul(hash, 0x01000193);
  }
  return hash >>> 0;
}

/** Small, fast, seedable PRNG (mulberry32); returns floats in [0, 1). */
export function mulberry32(seed: number): () => number {
  let state = seed >>> 0;
  return () => {
    state = (state + 0x6d2b79f5) >>> 0;
    let t = state;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

// ---------------------------------------------------------------------------
// rule-based implementations

/**
 * Hash-seeded pseudo-LM: every (passage, position, surface) triple maps
 * to a fixed distribution, so extraction is reproducible run to run
 * and sensitive to the text, without pretending to model language.
 * Decoding is greedy -- the realized token is always the top one.
 */
export class PseudoProbabilityBackend implements ProbabilityBackend {
  constructor(private readonly seed: number = 0) {}

  tokenProbabilities(
    passageId: string,
    surfaces: readonly string[],
    k: number,
  ): TokenProbabilities[] {
    return surfaces.map((surface, index) => {
      const rng = mulberry32(
        fnv1a(`${this.seed}|prob|${passageId}|${index + 1}|${surface}`),
      );
      const mass = 0.4 + 0.58 * rng();
      const raw = Array.from({ length: k }, () => 0.001 + rng());
      raw.sort((a, b) => b - a);
      const total = raw.reduce((a, b) => a + b, 0);
      const topk = raw.map((value) => (value * mass) / total);
      return { topk, realized: topk[0] };
    });
  }

  attention(passageId: string, from: string, to: string): number {
    const rng = mulberry32(fnv1a(`${this.seed}|att|${passageId}|${from}|${to}`));
    return 0.05 + 0.9 * rng();
  }
}

const NEGATIONS = new Set(["not", "no", "never", "none", "neither", "nor", "n't"]);
const STOPWORDS = new Set([
  "the", "a", "an", "in", "on", "at", "of", "to", "and", "or", "is", "was",
  "are", "were", "he", "she", "it", "they", "his", "her", "their",
]);

function contentWords(sentence: string): Set<string> {
  const words = sentence.toLowerCase().match(/[a-z]+(?:'[a-z]+)?|\d+/g) ?? [];
  return new Set(words.filter((word) => !STOPWORDS.has(word)));
}

function hasNegation(sentence: string): boolean {
  const words = sentence.toLowerCase().match(/[a-z']+/g) ?? [];
  return words.some((word) => NEGATIONS.has(word) || word.endsWith("n't"));
}

/**
 * Lexical-overlap contradiction heuristic.  Identical sentences score
 * near zero; sentences that share content but disagree on negation
 * score high; unrelated sentences land in a low band.  Deterministic
 * jitter keeps scores distinct without affecting the bands.
 */
export class HeuristicNliBackend implements NliBackend {
  constructor(private readonly seed: number = 0) {}

  contradiction(premise: string, hypothesis: string): number {
    const jitter =
      0.04 * mulberry32(fnv1a(`${this.seed}|nli|${premise}|${hypothesis}`))();
    if (premise.trim() === hypothesis.trim()) {
      return 0.01 + jitter; // self pairs must stay well under 0.2
    }
    const a = contentWords(premise);
    const b = contentWords(hypothesis);
    const union = new Set([...a, ...b]);
    let shared = 0;
    for (const word of a) if (b.has(word)) shared += 1;
    const overlap = union.size === 0 ? 0 : shared / union.size;

    let base: number;
    if (hasNegation(premise) !== hasNegation(hypothesis) && overlap > 0.2) {
      base = 0.55 + 0.3 * overlap; // same topic, flipped polarity
    } else {
      base = 0.05 + 0.3 * (1 - overlap);
    }
    return Math.min(0.99, Math.max(0.01, base + jitter));
  }
}
