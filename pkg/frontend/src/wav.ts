/** Decoded audio ready for the oscilloscope. */
export interface DecodedWav {
  sampleRate: number;
  samples: Float32Array;
}

/**
 * Decode a 16 bit PCM RIFF/WAVE file into normalized samples.
 *
 * The service renders mono 16 bit WAV, so only that layout is supported;
 * anything else is a malformed response and raises.
 */
export function decodeWav(buffer: ArrayBuffer): DecodedWav {
  const view = new DataView(buffer);
  const tag = (offset: number): string =>
    String.fromCharCode(
      view.getUint8(offset),
      view.getUint8(offset + 1),
      view.getUint8(offset + 2),
      view.getUint8(offset + 3),
    );

  if (buffer.byteLength < 44 || tag(0) !== "RIFF" || tag(8) !== "WAVE") {
    throw new Error("not a RIFF/WAVE file");
  }

  let sampleRate = 0;
  let bitsPerSample = 0;
  let channels = 0;
  let dataOffset = -1;
  let dataLength = 0;

  // Walk the chunk list; chunk sizes are padded to even byte counts.
  let offset = 12;
  while (offset + 8 <= buffer.byteLength) {
    const id = tag(offset);
    const size = view.getUint32(offset + 4, true);
    if (id === "fmt ") {
      const format = view.getUint16(offset + 8, true);
      channels = view.getUint16(offset + 10, true);
      sampleRate = view.getUint32(offset + 12, true);
      bitsPerSample = view.getUint16(offset + 22, true);
      if (format !== 1) throw new Error(`unsupported WAV format code ${format}`);
    } else if (id === "data") {
      dataOffset = offset + 8;
      dataLength = size;
    }
    offset += 8 + size + (size % 2);
  }

  if (dataOffset < 0) throw new Error("WAV file has no data chunk");
  if (bitsPerSample !== 16 || channels !== 1) {
    throw new Error(`expected mono 16 bit PCM, got ${channels}ch ${bitsPerSample} bit`);
  }

  const count = Math.min(dataLength, buffer.byteLength - dataOffset) >> 1;
  const samples = new Float32Array(count);
  for (let i = 0; i < count; i++) {
    samples[i] = view.getInt16(dataOffset + 2 * i, true) / 32768;
  }
  return { sampleRate, samples };
}
