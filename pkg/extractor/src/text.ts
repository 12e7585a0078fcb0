/**
 * Sentence segmentation, tokenization, and a small deterministic
 * part-of-speech / entity-type tagger.
 *
 * The tagger is rule-based on purpose: it gives the extraction
 * pipeline honest, reproducible structure (proper nouns, numbers,
 * verbs) without any model downloads.  It is not a linguistic claim --
 * swap in a real tagger through the same Tagged interface when model
 * inference is available.
 */

export interface Sentence {
  text: string;
  words: string[];
}

export interface Tagged {
  pos: string | undefined;
  ner: string | undefined;
}

const ABBREVIATIONS = new Set(["mr", "mrs", "ms", "dr", "prof", "st", "no", "vs"]);

/** Split a passage into sentences on terminal punctuation. */
export function splitSentences(passage: string): Sentence[] {
  const sentences: Sentence[] = [];
  let current = "";
  for (let i = 0; i < passage.length; i++) {
    current += passage[i];
    if (!".!?".includes(passage[i])) continue;
    const lastWord = current
      .slice(0, -1)
      .split(/\s+/)
      .pop()
      ?.toLowerCase()
      .replace(/[^a-z]/g, "");
    if (passage[i] === "." && lastWord !== undefined && ABBREVIATIONS.has(lastWord)) {
      continue;
    }
    if (current.trim()) sentences.push(toSentence(current));
    current = "";
  }
  if (current.trim()) sentences.push(toSentence(current));
  return sentences;
}

function toSentence(text: string): Sentence {
  return { text: text.trim(), words: tokenize(text) };
}

/** Words, numbers, and standalone punctuation marks, in order. */
export function tokenize(text: string): string[] {
  const matches = text.match(/[A-Za-z]+(?:'[A-Za-z]+)?|\d+(?:[.,]\d+)*|[^\sA-Za-z\d]/g);
  return matches ?? [];
}

const DETERMINERS = new Set(["the", "a", "an", "this", "that", "these", "those"]);
const PRONOUNS = new Set([
  "he", "she", "it", "they", "him", "her", "them", "his", "hers", "its",
  "their", "theirs", "i", "we", "you", "me", "us",
]);
const PREPOSITIONS = new Set([
  "in", "on", "at", "of", "to", "from", "by", "with", "for", "as", "into",
  "over", "under", "between", "through", "during", "until", "about",
]);
const CONJUNCTIONS = new Set(["and", "or", "but", "nor", "so", "yet", "while", "because"]);
const AUXILIARIES = new Set([
  "is", "are", "was", "were", "be", "been", "being", "am",
  "has", "have", "had", "do", "does", "did", "will", "would",
  "can", "could", "may", "might", "shall", "should", "must", "not",
]);
const COMMON_VERBS = new Set([
  "said", "made", "found", "became", "won", "held", "led", "met", "wrote",
  "took", "began", "left", "went", "came", "saw", "gave", "got", "knew",
  "lived", "died", "worked", "played", "moved", "built", "opened", "closed",
  "founded", "served", "joined", "studied", "taught", "published", "released",
  "directed", "produced", "raced", "retired", "graduated", "married",
  "represented", "competed", "debuted", "signed", "scored", "earned",
]);
const MONTHS = new Set([
  "january", "february", "march", "april", "may", "june", "july",
  "august", "september", "october", "november", "december",
]);
const PLACE_SUFFIXES = ["land", "ton", "ville", "burg", "shire", "stan", "ia"];

/** Tag one word given its sentence position and the passage's capitalized vocabulary. */
export function tagWord(
  word: string,
  isSentenceInitial: boolean,
  capitalizedElsewhere: Set<string>,
): Tagged {
  const lower = word.toLowerCase();
  if (/^\d/.test(word)) {
    const ner = /^(1[5-9]|20)\d{2}$/.test(word) ? "DATE" : "CARDINAL";
    return { pos: "NUM", ner };
  }
  if (!/[a-z]/i.test(word)) return { pos: "PUNCT", ner: undefined };
  if (MONTHS.has(lower)) return { pos: "PROPN", ner: "DATE" };
  if (DETERMINERS.has(lower) && !isCapitalizedContentWord(word, isSentenceInitial, capitalizedElsewhere)) {
    return { pos: "DET", ner: undefined };
  }
  if (PRONOUNS.has(lower)) return { pos: "PRON", ner: undefined };
  if (PREPOSITIONS.has(lower)) return { pos: "ADP", ner: undefined };
  if (CONJUNCTIONS.has(lower)) return { pos: "CCONJ", ner: undefined };
  if (AUXILIARIES.has(lower)) return { pos: "AUX", ner: undefined };
  if (COMMON_VERBS.has(lower)) return { pos: "VERB", ner: undefined };
  if (isCapitalizedContentWord(word, isSentenceInitial, capitalizedElsewhere)) {
    return { pos: "PROPN", ner: guessEntityType(word) };
  }
  if (/(ed|es)$/.test(lower) && lower.length > 4) {
    return { pos: "VERB", ner: undefined };
  }
  return { pos: "NOUN", ner: undefined };
}

function isCapitalizedContentWord(
  word: string,
  isSentenceInitial: boolean,
  capitalizedElsewhere: Set<string>,
): boolean {
  if (!/^[A-Z]/.test(word)) return false;
  // A sentence-initial capital only counts as a name when the same
  // word also shows up capitalized in a non-initial position.
  return !isSentenceInitial || capitalizedElsewhere.has(word);
}

function guessEntityType(word: string): string {
  const lower = word.toLowerCase();
  for (const suffix of PLACE_SUFFIXES) {
    if (lower.endsWith(suffix)) return "GPE";
  }
  return "PERSON";
}

/**
 * Second pass over a tagged sentence: a capitalized opening word
 * directly followed by a proper noun is almost always the first half
 * of a name ("Anna Kovats raced", "New York is"), so upgrade it.
 * Closed-class openers ("The Ferrari won") are left alone.
 */
export function upgradeInitialName(words: string[], tags: Tagged[]): void {
  if (words.length < 2 || tags.length < 2) return;
  const head = tags[0];
  const headIsOpenClass = head.pos === "NOUN" || head.pos === "VERB";
  if (
    headIsOpenClass &&
    /^[A-Z]/.test(words[0]) &&
    tags[1].pos === "PROPN" &&
    /^[A-Z]/.test(words[1])
  ) {
    tags[0] = { pos: "PROPN", ner: tags[1].ner };
  }
}

/** Every word that appears capitalized in a non-sentence-initial slot. */
export function capitalizedVocabulary(sentences: Sentence[]): Set<string> {
  const seen = new Set<string>();
  for (const sentence of sentences) {
    sentence.words.forEach((word, index) => {
      if (index > 0 && /^[A-Z]/.test(word)) seen.add(word);
    });
  }
  return seen;
}
