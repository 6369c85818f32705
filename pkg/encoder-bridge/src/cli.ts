#!/usr/bin/env node
import { realpathSync } from "node:fs";
import { pathToFileURL } from "node:url";
import { parseArgs } from "node:util";

import { encodeFile } from "./encodeFile.js";
import {
  DEFAULT_BATCH_SIZE,
  DEFAULT_MODEL,
  Encoder,
  EncoderSpec,
  resolveSpec,
} from "./encoder.js";

const USAGE = `usage: encode --in sentences.txt --out sentences.aemb [--model NAME] [--batch-size N] [--no-normalize]

Encodes one sentence per input line into a .aemb embedding matrix.

  --in PATH         input text file, UTF-8, one sentence per line
  --out PATH        output .aemb file; a PATH.meta.json sidecar records the model
  --model NAME      feature-extraction model (default ${DEFAULT_MODEL})
  --batch-size N    sentences per model call (default ${DEFAULT_BATCH_SIZE})
  --no-normalize    keep raw vectors instead of unit-normalizing them
`;

export class UsageError extends Error {
  constructor(message: string) {
    super(message);
    this.name = "UsageError";
  }
}

export interface CliJob {
  textPath: string;
  outPath: string;
  overrides: Partial<EncoderSpec>;
}

export function parseCliArgs(argv: string[]): CliJob {
  let values;
  try {
    ({ values } = parseArgs({
      args: argv,
      options: {
        in: { type: "string" },
        out: { type: "string" },
        model: { type: "string" },
        "batch-size": { type: "string" },
        "no-normalize": { type: "boolean" },
      },
      allowPositionals: false,
    }));
  } catch (err) {
    throw new UsageError(err instanceof Error ? err.message : String(err));
  }

  const missing: string[] = [];
  if (values.in === undefined) missing.push("--in");
  if (values.out === undefined) missing.push("--out");
  if (missing.length > 0) {
    throw new UsageError(`missing required ${missing.join(" and ")}`);
  }

  const overrides: Partial<EncoderSpec> = {};
  if (values.model !== undefined) {
    overrides.modelName = values.model;
  }
  if (values["batch-size"] !== undefined) {
    const n = Number(values["batch-size"]);
    if (!Number.isInteger(n) || n < 1) {
      throw new UsageError(
        `--batch-size must be a positive integer, got "${values["batch-size"]}"`,
      );
    }
    overrides.batchSize = n;
  }
  if (values["no-normalize"]) {
    overrides.normalize = false;
  }
  return { textPath: values.in!, outPath: values.out!, overrides };
}

export async function runCli(argv: string[], encoder?: Encoder): Promise<number> {
  let job: CliJob;
  try {
    job = parseCliArgs(argv);
  } catch (err) {
    console.error(`encode: ${err instanceof Error ? err.message : String(err)}`);
    console.error(USAGE);
    return 2;
  }
  try {
    const spec = resolveSpec(job.overrides);
    const summary = await encodeFile(job.textPath, job.outPath, spec, encoder);
    console.log(`rows=${summary.rows} dim=${summary.dim}`);
    return 0;
  } catch (err) {
    console.error(
      `encode: error: ${err instanceof Error ? err.message : String(err)}`,
    );
    return 1;
  }
}

const invokedAs = process.argv[1]
  ? pathToFileURL(realpathSync(process.argv[1])).href
  : "";
if (import.meta.url === invokedAs) {
  process.exit(await runCli(process.argv.slice(2)));
}
