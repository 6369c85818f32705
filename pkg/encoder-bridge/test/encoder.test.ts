import { describe, expect, it } from "vitest";

import {
  BadSpecError,
  DEFAULT_BATCH_SIZE,
  DEFAULT_MODEL,
  resolveSpec,
} from "../src/encoder.js";

describe("resolveSpec", () => {
  it("fills in defaults", () => {
    expect(resolveSpec()).toEqual({
      modelName: DEFAULT_MODEL,
      batchSize: DEFAULT_BATCH_SIZE,
      normalize: true,
    });
    expect(DEFAULT_BATCH_SIZE).toBe(32);
  });

  it("applies overrides", () => {
    const spec = resolveSpec({ modelName: "x/y", batchSize: 1, normalize: false });
    expect(spec).toEqual({ modelName: "x/y", batchSize: 1, normalize: false });
  });

  it("rejects non-positive and fractional batch sizes", () => {
    expect(() => resolveSpec({ batchSize: 0 })).toThrow(BadSpecError);
    expect(() => resolveSpec({ batchSize: -3 })).toThrow(BadSpecError);
    expect(() => resolveSpec({ batchSize: 2.5 })).toThrow(BadSpecError);
  });

  it("rejects an empty model name", () => {
    expect(() => resolveSpec({ modelName: "" })).toThrow(BadSpecError);
  });
});
