import { describe, expect, it } from "vitest";

import {
  capitalizedVocabulary,
  splitSentences,
  tagWord,
  tokenize,
  upgradeInitialName,
} from "../src/text.js";

describe("splitSentences", () => {
  it("splits on terminal punctuation", () => {
    const got = splitSentences("Anna raced in Monza. She won the race!");
    expect(got.map((s) => s.text)).toEqual([
      "Anna raced in Monza.",
      "She won the race!",
    ]);
  });

  it("does not split after common abbreviations", () => {
    const got = splitSentences("Dr. Webb lived in Espoo. He taught physics.");
    expect(got).toHaveLength(2);
    expect(got[0].text).toBe("Dr. Webb lived in Espoo.");
  });

  it("keeps trailing text without terminal punctuation", () => {
    const got = splitSentences("One sentence. And a fragment");
    expect(got.map((s) => s.text)).toEqual(["One sentence.", "And a fragment"]);
  });

  it("returns nothing for blank input", () => {
    expect(splitSentences("   ")).toEqual([]);
  });
});

describe("tokenize", () => {
  it("separates words, numbers, and punctuation", () => {
    expect(tokenize("Anna won in 1998.")).toEqual([
      "Anna", "won", "in", "1998", ".",
    ]);
  });

  it("keeps contractions and decimal numbers whole", () => {
    expect(tokenize("It wasn't 3.5 meters")).toEqual([
      "It", "wasn't", "3.5", "meters",
    ]);
  });
});

describe("tagWord", () => {
  const noVocab = new Set<string>();

  it("tags years as dates and other numbers as cardinals", () => {
    expect(tagWord("1987", false, noVocab)).toEqual({ pos: "NUM", ner: "DATE" });
    expect(tagWord("42", false, noVocab)).toEqual({ pos: "NUM", ner: "CARDINAL" });
  });

  it("tags mid-sentence capitalized words as proper nouns", () => {
    const tagged = tagWord("Monza", false, noVocab);
    expect(tagged.pos).toBe("PROPN");
    expect(tagged.ner).toBeDefined();
  });

  it("only treats a sentence-initial capital as a name when seen elsewhere", () => {
    expect(tagWord("Espoo", true, noVocab).pos).not.toBe("PROPN");
    expect(tagWord("Espoo", true, new Set(["Espoo"])).pos).toBe("PROPN");
  });

  it("uses place suffixes to pick a location type", () => {
    expect(tagWord("Finland", false, noVocab).ner).toBe("GPE");
    expect(tagWord("Anna", false, noVocab).ner).toBe("PERSON");
  });

  it("tags known verbs and closed-class words", () => {
    expect(tagWord("raced", false, noVocab).pos).toBe("VERB");
    expect(tagWord("the", false, noVocab).pos).toBe("DET");
    expect(tagWord("she", false, noVocab).pos).toBe("PRON");
    expect(tagWord(".", false, noVocab).pos).toBe("PUNCT");
  });
});

describe("upgradeInitialName", () => {
  const vocab = new Set<string>();

  function tagAll(words: string[]) {
    const tags = words.map((word, i) => tagWord(word, i === 0, vocab));
    upgradeInitialName(words, tags);
    return tags;
  }

  it("joins a capitalized opener to a following proper noun", () => {
    const tags = tagAll(["Anna", "Kovats", "raced", "."]);
    expect(tags[0].pos).toBe("PROPN");
    expect(tags[0].ner).toBe(tags[1].ner);
  });

  it("leaves closed-class openers alone", () => {
    expect(tagAll(["The", "Ferrari", "won", "."])[0].pos).toBe("DET");
    expect(tagAll(["She", "met", "Anna", "."])[0].pos).toBe("PRON");
  });

  it("leaves openers before lowercase words alone", () => {
    expect(tagAll(["Rain", "fell", "."])[0].pos).toBe("NOUN");
  });
});

describe("capitalizedVocabulary", () => {
  it("collects capitals that appear in non-initial positions", () => {
    const sentences = splitSentences("Espoo is cold. The town of Espoo grew.");
    const vocab = capitalizedVocabulary(sentences);
    expect(vocab.has("Espoo")).toBe(true);
    expect(vocab.has("The")).toBe(false);
  });
});
