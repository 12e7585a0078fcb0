/** File output helpers: never leave a half-written bundle file behind. */

import { mkdtempSync, renameSync, rmSync, writeFileSync } from "node:fs";
import { dirname, join } from "node:path";

/**
 * Write atomically: stage in a temp directory next to the target, then
 * rename into place.  A crash mid-write leaves the old file untouched.
 */
export function writeFileAtomic(path: string, content: string): void {
  const staging = mkdtempSync(join(dirname(path), ".extract-"));
  const temp = join(staging, "out");
  try {
    writeFileSync(temp, content, "utf8");
    renameSync(temp, path);
  } finally {
    rmSync(staging, { recursive: true, force: true });
  }
}
