/**
 * Binary matrix serialization for sentence embedding exports.
 *
 * Layout, all integers little-endian:
 *
 *   offset 0   4 bytes  magic "AEMB"
 *   offset 4   4 bytes  u32 format version (currently 1)
 *   offset 8   4 bytes  u32 row count
 *   offset 12  4 bytes  u32 dimension
 *   offset 16  rows * dim * 4 bytes  float32 payload, row-major
 */

export const AEMB_MAGIC = "AEMB";
export const AEMB_VERSION = 1;
const HEADER_BYTES = 16;

export class MatrixFormatError extends Error {
  constructor(message: string) {
    super(message);
    this.name = "MatrixFormatError";
  }
}

/** Serialize embedding rows into a complete .aemb buffer. */
export function encodeMatrix(rows: readonly Float32Array[]): Buffer {
  if (rows.length === 0) {
    throw new MatrixFormatError("cannot encode a matrix with no rows");
  }
  const dim = rows[0].length;
  if (dim === 0) {
    throw new MatrixFormatError("cannot encode zero-dimensional rows");
  }
  for (let i = 0; i < rows.length; i++) {
    if (rows[i].length !== dim) {
      throw new MatrixFormatError(
        `row ${i} has ${rows[i].length} values, expected ${dim}`,
      );
    }
    for (let j = 0; j < dim; j++) {
      if (!Number.isFinite(rows[i][j])) {
        throw new MatrixFormatError(`row ${i} contains a non-finite value`);
      }
    }
  }

  const buf = Buffer.alloc(HEADER_BYTES + rows.length * dim * 4);
  buf.write(AEMB_MAGIC, 0, "ascii");
  buf.writeUInt32LE(AEMB_VERSION, 4);
  buf.writeUInt32LE(rows.length, 8);
  buf.writeUInt32LE(dim, 12);
  const view = new DataView(buf.buffer, buf.byteOffset, buf.byteLength);
  let offset = HEADER_BYTES;
  for (const row of rows) {
    for (let j = 0; j < row.length; j++) {
      view.setFloat32(offset, row[j], true);
      offset += 4;
    }
  }
  return buf;
}

/** Parse a complete .aemb buffer back into rows. Validates header and size. */
export function decodeMatrix(buf: Buffer): Float32Array[] {
  if (buf.length < HEADER_BYTES) {
    throw new MatrixFormatError(
      `file too short for a header: ${buf.length} bytes`,
    );
  }
  const magic = buf.toString("ascii", 0, 4);
  if (magic !== AEMB_MAGIC) {
    throw new MatrixFormatError(`bad magic "${magic}", expected "AEMB"`);
  }
  const version = buf.readUInt32LE(4);
  if (version !== AEMB_VERSION) {
    throw new MatrixFormatError(`unsupported format version ${version}`);
  }
  const rows = buf.readUInt32LE(8);
  const dim = buf.readUInt32LE(12);
  const expected = HEADER_BYTES + rows * dim * 4;
  if (buf.length !== expected) {
    throw new MatrixFormatError(
      `payload size mismatch: ${buf.length} bytes, expected ${expected}`,
    );
  }
  const view = new DataView(buf.buffer, buf.byteOffset, buf.byteLength);
  const out: Float32Array[] = [];
  let offset = HEADER_BYTES;
  for (let i = 0; i < rows; i++) {
    const row = new Float32Array(dim);
    for (let j = 0; j < dim; j++) {
      row[j] = view.getFloat32(offset, true);
      offset += 4;
    }
    out.push(row);
  }
  return out;
}
