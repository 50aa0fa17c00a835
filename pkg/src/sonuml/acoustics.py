"""Acoustic timbre features and pairwise distances.

A 17-dimensional vector (13 mel-band log energies, spectral centroid,
spectral flatness, zero-crossing rate, RMS) stands in for timbre; distances
are Euclidean in z-scored feature space with the normalization statistics
drawn from the sound set under test. Thresholding is the caller's policy.

Analysis is level-free: features are computed on a peak-normalized copy of
the input, so a pure gain change cannot masquerade as a timbre difference
(the rms dimension measures waveform density relative to peak, not absolute
level).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .audio import AudioBuffer

FRAME = 2048
HOP = 512
N_MELS = 13
MEL_FMIN_HZ = 0.0
MEL_FMAX_HZ = 8000.0
#: Frames quieter than this are leading/trailing silence and are skipped.
SILENCE_FLOOR_DBFS = -60.0
_EPS = 1e-12

FEATURE_NAMES = tuple(f"mel_{i}" for i in range(N_MELS)) + (
    "spectral_centroid_hz",
    "spectral_flatness",
    "zero_crossing_rate",
    "rms",
)


@dataclass(frozen=True)
class FeatureVector:
    mel_band_log_energies: tuple[float, ...]
    spectral_centroid_hz: float
    spectral_flatness: float
    zero_crossing_rate: float
    rms: float

    def __post_init__(self):
        if len(self.mel_band_log_energies) != N_MELS:
            raise ValueError(f"expected {N_MELS} mel bands")
        if not np.all(np.isfinite(self.as_array())):
            raise ValueError("feature vector must be finite")
        if not 0.0 <= self.spectral_flatness <= 1.0:
            raise ValueError("flatness must lie in [0, 1]")

    def as_array(self) -> np.ndarray:
        return np.array(
            list(self.mel_band_log_energies)
            + [
                self.spectral_centroid_hz,
                self.spectral_flatness,
                self.zero_crossing_rate,
                self.rms,
            ]
        )


def _hz_to_mel(f):
    return 2595.0 * np.log10(1.0 + np.asarray(f) / 700.0)


def _mel_to_hz(m):
    return 700.0 * (10.0 ** (np.asarray(m) / 2595.0) - 1.0)


def _mel_filterbank(sample_rate: int) -> np.ndarray:
    """Triangular filters over the positive-frequency bins of a FRAME FFT."""
    n_bins = FRAME // 2 + 1
    freqs = np.fft.rfftfreq(FRAME, d=1.0 / sample_rate)
    edges = _mel_to_hz(np.linspace(_hz_to_mel(MEL_FMIN_HZ), _hz_to_mel(MEL_FMAX_HZ), N_MELS + 2))
    bank = np.zeros((N_MELS, n_bins))
    for i in range(N_MELS):
        lo, center, hi = edges[i], edges[i + 1], edges[i + 2]
        rising = (freqs - lo) / max(center - lo, _EPS)
        falling = (hi - freqs) / max(hi - center, _EPS)
        bank[i] = np.clip(np.minimum(rising, falling), 0.0, None)
    return bank


def extract_features(buf: AudioBuffer) -> FeatureVector:
    """Frame-averaged features (Hann window, 2048-sample frames, hop 512).

    Stereo is downmixed by averaging, then the signal is peak-normalized so
    the vector describes timbre rather than level; frames below the silence
    floor are excluded so padding cannot skew the averages.
    """
    if buf.duration_s < 0.05:
        raise ValueError("buffer too short for feature extraction (< 0.05 s)")
    x = buf.to_mono().samples[0]
    peak = np.max(np.abs(x))
    if peak == 0.0:
        raise ValueError("buffer is silent throughout; no frames above the floor")
    x = x / peak
    sr = buf.sample_rate
    if x.shape[0] < FRAME:
        x = np.concatenate([x, np.zeros(FRAME - x.shape[0])])

    window = np.hanning(FRAME)
    bank = _mel_filterbank(sr)
    freqs = np.fft.rfftfreq(FRAME, d=1.0 / sr)
    floor = 10.0 ** (SILENCE_FLOOR_DBFS / 20.0)

    mel_acc = np.zeros(N_MELS)
    centroid_acc = 0.0
    flatness_acc = 0.0
    zcr_acc = 0.0
    square_acc = 0.0
    kept = 0
    for start in range(0, x.shape[0] - FRAME + 1, HOP):
        frame = x[start : start + FRAME]
        frame_rms = np.sqrt(np.mean(frame**2))
        if frame_rms <= floor:
            continue
        spectrum = np.fft.rfft(frame * window)
        power = np.abs(spectrum) ** 2
        magnitude = np.sqrt(power)

        mel_acc += np.log10(bank @ power + _EPS)
        centroid_acc += float(np.sum(freqs * magnitude) / (np.sum(magnitude) + _EPS))
        geometric = np.exp(np.mean(np.log(power + _EPS)))
        flatness_acc += float(geometric / (np.mean(power) + _EPS))
        zcr_acc += float(np.count_nonzero(np.diff(np.signbit(frame)))) / FRAME
        square_acc += float(np.mean(frame**2))
        kept += 1

    if kept == 0:
        raise ValueError("buffer is silent throughout; no frames above the floor")

    return FeatureVector(
        mel_band_log_energies=tuple(mel_acc / kept),
        spectral_centroid_hz=centroid_acc / kept,
        spectral_flatness=min(1.0, flatness_acc / kept),
        zero_crossing_rate=zcr_acc / kept,
        rms=float(np.sqrt(square_acc / kept)),
    )


@dataclass(frozen=True)
class NormalizationStats:
    """Per-dimension mean/stddev of a feature population; zero-variance
    dimensions are dropped from distances and recorded here."""

    means: tuple[float, ...]
    stds: tuple[float, ...]
    dropped: tuple[str, ...]

    @classmethod
    def from_vectors(cls, vectors, min_std: float = 1e-9) -> "NormalizationStats":
        arr = np.stack([v.as_array() for v in vectors])
        means = arr.mean(axis=0)
        stds = arr.std(axis=0)
        dropped = tuple(
            FEATURE_NAMES[i] for i in range(len(FEATURE_NAMES)) if stds[i] < min_std
        )
        return cls(tuple(means), tuple(stds), dropped)


def feature_distance(a: FeatureVector, b: FeatureVector, norm: NormalizationStats) -> float:
    """Euclidean distance between z-scored vectors; dropped dims contribute 0."""
    va, vb = a.as_array(), b.as_array()
    means = np.asarray(norm.means)
    stds = np.asarray(norm.stds)
    kept = np.array([name not in norm.dropped for name in FEATURE_NAMES])
    if not np.any(kept):
        return 0.0
    za = (va[kept] - means[kept]) / stds[kept]
    zb = (vb[kept] - means[kept]) / stds[kept]
    return float(np.linalg.norm(za - zb))


def discriminability_matrix(sounds) -> tuple[np.ndarray, NormalizationStats]:
    """Pairwise distance matrix over the sounds, z-normalized across them."""
    if len(sounds) < 2:
        raise ValueError("need at least 2 sounds")
    vectors = []
    for i, s in enumerate(sounds):
        try:
            vectors.append(extract_features(s))
        except ValueError as exc:
            raise ValueError(f"sound {i}: {exc}") from exc
    norm = NormalizationStats.from_vectors(vectors)
    n = len(vectors)
    out = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            d = feature_distance(vectors[i], vectors[j], norm)
            out[i, j] = out[j, i] = d
    return out, norm
