/**
 * Minimal local typings for yargs, covering exactly the surface this
 * CLI uses.  The runtime package ships without type declarations in
 * this environment, so we declare our own instead of widening
 * everything to `any`.
 */

declare module "yargs" {
  export interface Argv<T = Record<string, unknown>> {
    scriptName(name: string): Argv<T>;
    command<U>(
      command: string,
      description: string,
      builder: (y: Argv<T>) => Argv<U>,
      handler: (argv: U & { _: Array<string | number>; $0: string }) => void,
    ): Argv<T>;
    option(
      name: string,
      config: {
        type?: "string" | "number" | "boolean";
        choices?: readonly string[];
        default?: unknown;
        demandOption?: boolean;
        describe?: string;
      },
    ): Argv<Record<string, unknown>>;
    demandCommand(min: number, message?: string): Argv<T>;
    strict(): Argv<T>;
    help(): Argv<T>;
    parse(): unknown;
  }

  function yargs(args: readonly string[]): Argv;
  export default yargs;
}

declare module "yargs/helpers" {
  export function hideBin(argv: readonly string[]): string[];
}
