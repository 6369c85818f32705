import { readFile, writeFile } from "node:fs/promises";

import { encodeMatrix } from "./aemb.js";
import {
  Encoder,
  EncoderSpec,
  ExtractionResult,
  loadEncoder,
} from "./encoder.js";

export class EmptyInputError extends Error {
  constructor(message: string) {
    super(message);
    this.name = "EmptyInput";
  }
}

export class EncoderOutputError extends Error {
  constructor(message: string) {
    super(message);
    this.name = "EncoderOutputError";
  }
}

export interface EncodeSummary {
  rows: number;
  dim: number;
}

/** Split file content into sentences, one per line, dropping the trailing newline. */
export function splitSentences(text: string): string[] {
  const lines = text.split(/\r?\n/);
  if (lines.length > 0 && lines[lines.length - 1] === "") {
    lines.pop();
  }
  return lines;
}

function warnTruncated(encoder: Encoder, sentences: string[]): void {
  if (!encoder.countTokens || encoder.maxTokens === undefined) {
    return;
  }
  for (let i = 0; i < sentences.length; i++) {
    const n = encoder.countTokens(sentences[i]);
    if (n > encoder.maxTokens) {
      console.warn(
        `warning: line ${i + 1} has ${n} tokens, over the model limit of ` +
          `${encoder.maxTokens}; the tokenizer truncated it`,
      );
    }
  }
}

function sliceRows(
  result: ExtractionResult,
  batchLen: number,
  expectedDim: number,
): Float32Array[] {
  const { data, dims } = result;
  if (dims.length !== 2 || dims[0] !== batchLen) {
    throw new EncoderOutputError(
      `encoder returned shape [${dims.join(", ")}] for a batch of ${batchLen}`,
    );
  }
  const dim = dims[1];
  if (expectedDim !== 0 && dim !== expectedDim) {
    throw new EncoderOutputError(
      `encoder dimension changed from ${expectedDim} to ${dim} between batches`,
    );
  }
  if (data.length !== batchLen * dim) {
    throw new EncoderOutputError(
      `encoder returned ${data.length} values for shape [${batchLen}, ${dim}]`,
    );
  }
  const flat =
    data instanceof Float32Array ? data : Float32Array.from(data);
  const rows: Float32Array[] = [];
  for (let i = 0; i < batchLen; i++) {
    rows.push(flat.slice(i * dim, (i + 1) * dim));
  }
  return rows;
}

/**
 * Encode a one-sentence-per-line text file into a .aemb matrix file.
 *
 * Writes one embedding row per input line, in input order, plus a
 * `<outPath>.meta.json` sidecar recording the model identifier. Returns the
 * written row count and dimension. When `encoder` is omitted the model named
 * by `spec.modelName` is loaded; tests pass a stub instead.
 */
export async function encodeFile(
  textPath: string,
  outPath: string,
  spec: EncoderSpec,
  encoder?: Encoder,
): Promise<EncodeSummary> {
  const text = await readFile(textPath, "utf8");
  const sentences = splitSentences(text);
  if (sentences.length === 0) {
    throw new EmptyInputError(`input file has no sentences: ${textPath}`);
  }

  const enc = encoder ?? (await loadEncoder(spec.modelName));
  warnTruncated(enc, sentences);

  const rows: Float32Array[] = [];
  let dim = 0;
  for (let start = 0; start < sentences.length; start += spec.batchSize) {
    const batch = sentences.slice(start, start + spec.batchSize);
    const result = await enc.extract(batch, {
      pooling: "mean",
      normalize: spec.normalize,
    });
    const batchRows = sliceRows(result, batch.length, dim);
    dim = batchRows[0].length;
    rows.push(...batchRows);
  }

  await writeFile(outPath, encodeMatrix(rows));
  const meta = {
    model: spec.modelName,
    rows: rows.length,
    dim,
    normalized: spec.normalize,
    batchSize: spec.batchSize,
  };
  await writeFile(`${outPath}.meta.json`, JSON.stringify(meta, null, 2) + "\n");
  return { rows: rows.length, dim };
}
