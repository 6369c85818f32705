/** Settings for one encoding run. */
export interface EncoderSpec {
  modelName: string;
  batchSize: number;
  normalize: boolean;
}

export const DEFAULT_MODEL = "Xenova/LaBSE";
export const DEFAULT_BATCH_SIZE = 32;

export class BadSpecError extends Error {
  constructor(message: string) {
    super(message);
    this.name = "BadSpecError";
  }
}

export class ModelLoadError extends Error {
  constructor(message: string) {
    super(message);
    this.name = "ModelLoadError";
  }
}

export function resolveSpec(overrides: Partial<EncoderSpec> = {}): EncoderSpec {
  const spec: EncoderSpec = {
    modelName: DEFAULT_MODEL,
    batchSize: DEFAULT_BATCH_SIZE,
    normalize: true,
    ...overrides,
  };
  if (!Number.isInteger(spec.batchSize) || spec.batchSize < 1) {
    throw new BadSpecError(
      `batch size must be a positive integer, got ${spec.batchSize}`,
    );
  }
  if (spec.modelName.length === 0) {
    throw new BadSpecError("model name must not be empty");
  }
  return spec;
}

export interface ExtractionOptions {
  pooling: "mean";
  normalize: boolean;
}

/** One pooled vector per input text, flattened row-major into `data`. */
export interface ExtractionResult {
  data: Float32Array | number[];
  dims: number[];
}

export type Extractor = (
  texts: string[],
  options: ExtractionOptions,
) => Promise<ExtractionResult>;

/**
 * A loaded model plus enough tokenizer access to warn about truncation.
 * Tests substitute their own implementation; nothing here is model-specific.
 */
export interface Encoder {
  extract: Extractor;
  countTokens?: (text: string) => number;
  maxTokens?: number;
}

/**
 * Download (or reuse from cache) the model and wrap it as an Encoder.
 *
 * The transformers import happens here rather than at module load so that
 * everything else in this package works without the native onnx runtime.
 */
export async function loadEncoder(modelName: string): Promise<Encoder> {
  let pipe: any;
  try {
    const { pipeline } = await import("@xenova/transformers");
    pipe = await pipeline("feature-extraction", modelName);
  } catch (err) {
    const reason = err instanceof Error ? err.message : String(err);
    throw new ModelLoadError(`could not load model "${modelName}": ${reason}`);
  }
  const tokenizer = pipe.tokenizer as {
    encode: (text: string) => number[];
    model_max_length?: number;
  };
  const maxTokens =
    typeof tokenizer.model_max_length === "number" &&
    Number.isFinite(tokenizer.model_max_length)
      ? tokenizer.model_max_length
      : undefined;
  return {
    extract: (texts, options) =>
      pipe(texts, options) as Promise<ExtractionResult>,
    countTokens: (text) => tokenizer.encode(text).length,
    maxTokens,
  };
}
