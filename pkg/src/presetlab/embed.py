"""Embedding vectors and providers.

A provider places recordings (and optionally text) in one joint vector
space so cosine similarity measures closeness. Two providers ship here:

* SpectralProvider: deterministic audio features (log-mel band energies
  averaged over the attack and release windows, plus spectral
  centroid/flatness/rolloff per window), 134 dims. No text support.
* FileProvider: precomputed vectors keyed by preset id or quoted query
  text, e.g. produced offline by a neural text/audio model. The file
  carries its own dimension.

HybridProvider overlays a vector file (for text queries and known ids) on
top of the spectral extractor so freshly mixed presets stay searchable;
the file must have been produced in the spectral feature space.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import kernels
from .audio import Recording
from .bank import Generation
from .errors import NotEmbeddedError, ProviderError, TextNotSupportedError
from .preset import Preset
from .render import DEFAULT_CONFIG, SynthConfig, render
from .schema import ParameterSchema

EMBEDDING_FORMAT = "format presetlab-embeddings 1"

MEL_BANDS = 64
SCALARS_PER_WINDOW = 3
SPECTRAL_DIM = MEL_BANDS * 2 + SCALARS_PER_WINDOW * 2  # 134
N_FFT = 2048
HOP = 2048  # non-overlapping frames
_POWER_FLOOR = 1e-12
_LOG_FLOOR = 1e-10


@dataclass(frozen=True)
class EmbeddingVector:
    """Unit-norm vector in the joint text/audio space."""

    values: np.ndarray

    @property
    def dims(self) -> int:
        return len(self.values)

    @classmethod
    def normalized(cls, raw) -> "EmbeddingVector":
        arr = np.asarray(raw, dtype=np.float64)
        norm = float(np.linalg.norm(arr))
        if norm < 1e-12:
            raise ProviderError("cannot normalize a zero vector")
        return cls(values=arr / norm)


def _hz_to_mel(f):
    return 2595.0 * np.log10(1.0 + np.asarray(f, dtype=np.float64) / 700.0)


def _mel_to_hz(m):
    return 700.0 * (10.0 ** (np.asarray(m, dtype=np.float64) / 2595.0) - 1.0)


def mel_filterbank(sr: int, n_fft: int, n_bands: int) -> np.ndarray:
    """Triangular mel filters (peak 1) over the rfft bins."""
    freqs = np.fft.rfftfreq(n_fft, d=1.0 / sr)
    points = _mel_to_hz(np.linspace(0.0, _hz_to_mel(sr / 2.0), n_bands + 2))
    bank = np.zeros((n_bands, len(freqs)))
    for i in range(n_bands):
        lo, mid, hi = points[i], points[i + 1], points[i + 2]
        up = (freqs - lo) / max(mid - lo, 1e-9)
        down = (hi - freqs) / max(hi - mid, 1e-9)
        bank[i] = np.clip(np.minimum(up, down), 0.0, None)
    return bank


_FREQ_GRIDS: dict = {}


def _rfft_freqs(sr: int) -> np.ndarray:
    grid = _FREQ_GRIDS.get(sr)
    if grid is None:
        grid = _FREQ_GRIDS.setdefault(sr, np.fft.rfftfreq(N_FFT, d=1.0 / sr))
    return grid


def _window_scalars(mean_power: np.ndarray, freqs: np.ndarray, nyquist: float):
    p = mean_power + _POWER_FLOOR
    total = p.sum()
    centroid = float((freqs * p).sum() / total) / nyquist
    flatness = float(np.exp(np.mean(np.log(p))) / np.mean(p))
    rolloff_idx = int(np.searchsorted(np.cumsum(p), 0.85 * total))
    rolloff = float(freqs[min(rolloff_idx, len(freqs) - 1)]) / nyquist
    return centroid, flatness, rolloff


class SpectralProvider:
    """Deterministic stand-in extractor; same recording, same vector, always."""

    name = "spectral"
    dimension = SPECTRAL_DIM
    needs_audio = True

    def __init__(self, config: SynthConfig = DEFAULT_CONFIG):
        self.config = config
        self._window = np.hanning(N_FFT + 1)[:N_FFT].astype(np.float32)
        self._mel = mel_filterbank(config.sample_rate, N_FFT, MEL_BANDS).T

    def embed_audio(self, recording: Recording, key: str | None = None) -> EmbeddingVector:
        from scipy.fft import rfft  # float32 path; numpy.fft would upcast

        x = np.asarray(recording.samples, dtype=np.float32)
        n_frames = 1 + (len(x) - N_FFT) // HOP
        if n_frames < 2:
            raise ProviderError("recording too short to embed")
        frames = np.lib.stride_tricks.as_strided(
            x, shape=(n_frames, N_FFT),
            strides=(HOP * x.strides[0], x.strides[0]))
        spec = rfft(frames * self._window, axis=1)
        power = kernels.power_c64(spec)  # float32, reduced in float64
        gate_sample = int(recording.sample_rate * self.config.gate_time)
        # frames whose start falls before the gate close form the attack window
        n_attack = -(-gate_sample // HOP)
        if not 0 < n_attack < n_frames:
            raise ProviderError("gate leaves an empty attack or release window")
        freqs = _rfft_freqs(recording.sample_rate)
        nyquist = recording.sample_rate / 2.0
        feats = []
        # mean power first: the mel projection is linear, so projecting the
        # window-mean spectrum equals averaging per-frame mel rows
        mean_powers = [power[:n_attack].mean(axis=0, dtype=np.float64),
                       power[n_attack:].mean(axis=0, dtype=np.float64)]
        for mean_power in mean_powers:
            feats.append(np.log10(mean_power @ self._mel + _LOG_FLOOR))
        for mean_power in mean_powers:
            feats.append(np.array(_window_scalars(mean_power, freqs, nyquist)))
        return EmbeddingVector.normalized(np.concatenate(feats))

    def embed_text(self, query: str) -> EmbeddingVector:
        raise TextNotSupportedError(
            "the spectral provider has no text model; use a vector file provider"
        )


class FileProvider:
    """Looks up precomputed unit vectors by preset id or query text."""

    name = "file"
    needs_audio = False

    def __init__(self, dimension: int, audio_vectors: dict[str, np.ndarray],
                 text_vectors: dict[str, np.ndarray]):
        self.dimension = dimension
        self._audio = audio_vectors
        self._text = text_vectors

    @classmethod
    def load(cls, path: str | Path) -> "FileProvider":
        dimension, audio, text = load_embeddings(path)
        return cls(dimension, audio, text)

    def embed_audio(self, recording: Recording | None = None,
                    key: str | None = None) -> EmbeddingVector:
        if key is None or key not in self._audio:
            raise NotEmbeddedError(f"preset {key!r} is not embedded in the vector file")
        return EmbeddingVector.normalized(self._audio[key])

    def embed_text(self, query: str) -> EmbeddingVector:
        if query not in self._text:
            raise NotEmbeddedError(f"text {query!r} is not embedded in the vector file")
        return EmbeddingVector.normalized(self._text[query])


class HybridProvider:
    """File vectors where available, spectral extraction for everything else."""

    name = "hybrid"
    needs_audio = True

    def __init__(self, file_provider: FileProvider, spectral: SpectralProvider | None = None):
        self.spectral = spectral or SpectralProvider()
        if file_provider.dimension != self.spectral.dimension:
            raise ProviderError(
                "hybrid provider needs a vector file in the spectral feature space "
                f"(dim {self.spectral.dimension}, file has {file_provider.dimension})"
            )
        self.file = file_provider
        self.dimension = self.spectral.dimension

    def embed_audio(self, recording: Recording | None = None,
                    key: str | None = None) -> EmbeddingVector:
        if key is not None and key in self.file._audio:
            return self.file.embed_audio(key=key)
        if recording is None:
            raise NotEmbeddedError(f"preset {key!r} has no stored vector and no recording")
        return self.spectral.embed_audio(recording, key=key)

    def embed_text(self, query: str) -> EmbeddingVector:
        return self.file.embed_text(query)


def provider_from_spec(spec: str, config: SynthConfig = DEFAULT_CONFIG):
    """Parse a provider selector: ``spectral``, ``file:PATH`` or ``hybrid:PATH``."""
    if spec == "spectral":
        return SpectralProvider(config)
    kind, sep, path = spec.partition(":")
    if sep and kind == "file":
        return FileProvider.load(path)
    if sep and kind == "hybrid":
        return HybridProvider(FileProvider.load(path), SpectralProvider(config))
    raise ProviderError(f"unknown provider spec {spec!r}")


def embed_generation(
    gen: Generation,
    provider,
    schema: ParameterSchema,
    config: SynthConfig = DEFAULT_CONFIG,
) -> Generation:
    """Attach one embedding per preset, in preset order. Idempotent."""
    if gen.embedded:
        return gen
    if len(gen) == 0:
        gen.embedding_matrix = np.zeros((0, provider.dimension))
        return gen
    rows = np.empty((len(gen), provider.dimension))
    for i, preset in enumerate(gen.presets):
        try:
            rec = render(preset, schema, config) if provider.needs_audio else None
            rows[i] = provider.embed_audio(rec, key=preset.id).values
        except ProviderError as exc:
            raise ProviderError(f"preset {preset.id!r}: {exc}") from exc
    gen.embedding_matrix = rows
    return gen


def _format_vector(vec: np.ndarray) -> str:
    return " ".join(format(x, ".9e") for x in vec)


def save_embeddings(path: str | Path, dimension: int, audio: dict[str, np.ndarray],
                    text: dict[str, np.ndarray] | None = None) -> None:
    lines = [f"{EMBEDDING_FORMAT} dim={dimension}"]
    for key, vec in audio.items():
        lines.append(f"{key} {_format_vector(np.asarray(vec))}")
    for key, vec in (text or {}).items():
        lines.append(f'"{key}" {_format_vector(np.asarray(vec))}')
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def load_embeddings(path: str | Path):
    """Returns (dimension, audio_vectors, text_vectors). Every row must match
    the header dimension; vectors are re-checked for unit norm on use."""
    try:
        lines = Path(path).read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise ProviderError(f"cannot read embedding file: {exc}") from exc
    if not lines or not lines[0].startswith(EMBEDDING_FORMAT):
        raise ProviderError(f"missing header {EMBEDDING_FORMAT!r}")
    try:
        dimension = int(lines[0].rsplit("dim=", 1)[1])
    except (IndexError, ValueError):
        raise ProviderError("embedding header missing dim=") from None
    audio: dict[str, np.ndarray] = {}
    text: dict[str, np.ndarray] = {}
    for lineno, line in enumerate(lines[1:], start=2):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith('"'):
            key, _, rest = line[1:].partition('"')
            target = text
        else:
            key, _, rest = line.partition(" ")
            target = audio
        try:
            vec = np.array(rest.split(), dtype=np.float64)
        except ValueError:
            raise ProviderError(f"line {lineno}: non-numeric vector component") from None
        if len(vec) != dimension:
            raise ProviderError(
                f"line {lineno}: vector has {len(vec)} dims, header says {dimension}"
            )
        target[key] = vec
    return dimension, audio, text
