"""Recording container and RIFF WAV export (PCM 16-bit mono)."""

from __future__ import annotations

import io
import wave
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class Recording:
    """Mono PCM frames, float32 in [-1, 1]."""

    samples: np.ndarray
    sample_rate: int

    @property
    def duration(self) -> float:
        return len(self.samples) / self.sample_rate

    def wav_bytes(self) -> bytes:
        """Encode as RIFF PCM, 16-bit mono. Rounding is rint (ties to even)."""
        pcm = np.clip(np.rint(self.samples.astype(np.float64) * 32767.0), -32768, 32767)
        buf = io.BytesIO()
        with wave.open(buf, "wb") as w:
            w.setnchannels(1)
            w.setsampwidth(2)
            w.setframerate(self.sample_rate)
            w.writeframes(pcm.astype("<i2").tobytes())
        return buf.getvalue()

    def save_wav(self, path) -> None:
        with open(path, "wb") as f:
            f.write(self.wav_bytes())
