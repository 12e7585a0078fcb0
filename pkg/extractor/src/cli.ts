#!/usr/bin/env node
/**
 * Command-line entry point: read passages, emit a scoring bundle file.
 *
 * Input formats:
 *   text  -- one passage per line
 *   jsonl -- one object per line with a "text" field and optional
 *            "passage_id"
 *
 * The output is JSON Lines, one bundle per passage, written atomically.
 */

import { readFileSync } from "node:fs";
import { pathToFileURL } from "node:url";
import yargs from "yargs";
import { hideBin } from "yargs/helpers";

import { HeuristicNliBackend, PseudoProbabilityBackend } from "./backends.js";
import { extractBundle } from "./extract.js";
import { writeFileAtomic } from "./io.js";
import { dumpBundle } from "./schema.js";

interface PassageInput {
  id: string;
  text: string;
}

export function readPassages(path: string, format: "text" | "jsonl"): PassageInput[] {
  const raw = readFileSync(path, "utf8");
  const lines = raw.split("\n").filter((line) => line.trim().length > 0);
  if (lines.length === 0) {
    throw new Error(`${path}: no passages found`);
  }
  return lines.map((line, index) => {
    const fallbackId = `passage-${String(index + 1).padStart(4, "0")}`;
    if (format === "text") {
      return { id: fallbackId, text: line };
    }
    let record: unknown;
    try {
      record = JSON.parse(line);
    } catch (error) {
      throw new Error(`${path}:${index + 1}: not valid JSON: ${String(error)}`);
    }
    if (typeof record !== "object" || record === null) {
      throw new Error(`${path}:${index + 1}: expected a JSON object`);
    }
    const obj = record as Record<string, unknown>;
    if (typeof obj.text !== "string" || obj.text.trim().length === 0) {
      throw new Error(`${path}:${index + 1}: missing non-empty "text" field`);
    }
    const id = typeof obj.passage_id === "string" ? obj.passage_id : fallbackId;
    return { id, text: obj.text };
  });
}

export function runExtract(argv: {
  input: string;
  out: string;
  k: number;
  seed: number;
  format: "text" | "jsonl";
}): number {
  const passages = readPassages(argv.input, argv.format);
  const probabilities = new PseudoProbabilityBackend(argv.seed);
  const nli = new HeuristicNliBackend(argv.seed);
  const lines = passages.map((passage) =>
    dumpBundle(
      extractBundle(passage.id, passage.text, {
        k: argv.k,
        probabilities,
        nli,
      }),
    ),
  );
  writeFileAtomic(argv.out, lines.join("\n") + "\n");
  process.stderr.write(
    `wrote ${passages.length} bundle(s) to ${argv.out}\n`,
  );
  return 0;
}

export function main(args: string[]): void {
  yargs(args)
    .scriptName("extract-bundles")
    .command(
      "extract",
      "extract scoring bundles from passage text",
      (y) =>
        y
          .option("input", {
            type: "string",
            demandOption: true,
            describe: "passage file (text or JSON Lines)",
          })
          .option("out", {
            type: "string",
            demandOption: true,
            describe: "output bundle file (JSON Lines)",
          })
          .option("k", {
            type: "number",
            default: 3,
            describe: "top-k distribution size per token",
          })
          .option("seed", {
            type: "number",
            default: 0,
            describe: "seed for the deterministic backends",
          })
          .option("format", {
            choices: ["text", "jsonl"] as const,
            default: "text" as const,
            describe: "input file format",
          }),
      (argv) => {
        const parsed = argv as unknown as {
          input: string;
          out: string;
          k: number;
          seed: number;
          format: "text" | "jsonl";
        };
        try {
          process.exitCode = runExtract(parsed);
        } catch (error) {
          process.stderr.write(`error: ${(error as Error).message}\n`);
          process.exitCode = 2;
        }
      },
    )
    .demandCommand(1, "choose a command (try: extract)")
    .strict()
    .help()
    .parse();
}

const invokedDirectly =
  process.argv[1] !== undefined &&
  import.meta.url === pathToFileURL(process.argv[1]).href;
if (invokedDirectly) {
  main(hideBin(process.argv));
}
