"""PCM synthesis, the auditory-variable effect chain, mixing, and WAV I/O.

Everything here is a pure function over :class:`AudioBuffer` values; nothing
touches shared state, so callers may parallelize freely.
"""

from __future__ import annotations

import io
import math
import wave
from dataclasses import dataclass, field, replace

import numpy as np
from scipy import signal as _dsp

SAMPLE_RATE = 44100

#: Schroeder-style comb bank used for depth reverb: (delay seconds, feedback).
COMB_DELAYS_S = (0.0297, 0.0371, 0.0411, 0.0437)
COMB_FEEDBACK = 0.75
#: Wet gain per unit of depth, and its ceiling.
REVERB_WET_PER_DEPTH = 0.15
REVERB_WET_MAX = 0.6
#: Extra output appended when the wet path is active, long enough for the
#: comb feedback to fall below -60 dB.
REVERB_TAIL_S = 1.0

#: Soft limiting engages only when a mix peaks above this.
LIMITER_KNEE = 0.99

GENERATORS = ("sine", "square", "noise", "filtered_noise", "chirp", "pluck")


class AudioFormatError(Exception):
    """Raised for malformed or unsupported WAV data."""


class NormalizeError(Exception):
    """Raised when a buffer cannot be normalized (all-zero input)."""


@dataclass(frozen=True)
class AudioBuffer:
    """PCM sample container: ``samples`` has shape (channels, frames).

    Samples are float64 with nominal range [-1.0, +1.0]; channels is 1 or 2.
    """

    samples: np.ndarray
    sample_rate: int = SAMPLE_RATE

    def __post_init__(self):
        data = np.asarray(self.samples, dtype=np.float64)
        if data.ndim == 1:
            data = data[np.newaxis, :]
        if data.ndim != 2 or data.shape[0] not in (1, 2):
            raise ValueError(f"expected 1 or 2 channels, got shape {data.shape}")
        if self.sample_rate <= 0:
            raise ValueError("sample_rate must be positive")
        object.__setattr__(self, "samples", data)

    @property
    def channels(self) -> int:
        return self.samples.shape[0]

    @property
    def frames(self) -> int:
        return self.samples.shape[1]

    @property
    def duration_s(self) -> float:
        return self.frames / self.sample_rate

    def peak(self) -> float:
        if self.frames == 0:
            return 0.0
        return float(np.max(np.abs(self.samples)))

    def rms(self) -> float:
        if self.frames == 0:
            return 0.0
        return float(np.sqrt(np.mean(self.samples**2)))

    def to_mono(self) -> "AudioBuffer":
        if self.channels == 1:
            return self
        return AudioBuffer(np.mean(self.samples, axis=0), self.sample_rate)

    def scaled(self, gain: float) -> "AudioBuffer":
        return AudioBuffer(self.samples * gain, self.sample_rate)


@dataclass(frozen=True)
class AuditoryVariables:
    """Per-cue rendering parameters: gain, pitch, pan, envelope, reverb, placement."""

    loudness_db: float = 0.0
    pitch_semitones: float = 0.0
    pan: float = 0.0
    duration_scale: float = 1.0
    attack_s: float = 0.0
    decay_s: float = 0.0
    reverb_depth: int = 0
    start_offset_s: float = 0.0

    def __post_init__(self):
        if not -1.0 <= self.pan <= 1.0:
            raise ValueError(f"pan must be in [-1, 1], got {self.pan}")
        if self.duration_scale <= 0:
            raise ValueError("duration_scale must be positive")
        if self.attack_s < 0 or self.decay_s < 0:
            raise ValueError("attack_s and decay_s must be non-negative")
        if self.reverb_depth < 0:
            raise ValueError("reverb_depth must be non-negative")

    def but(self, **changes) -> "AuditoryVariables":
        return replace(self, **changes)


@dataclass(frozen=True)
class SynthSpec:
    """Procedural description of a sound asset.

    ``params`` is generator-specific. All generators accept ``seed`` (noise
    determinism) plus post-synthesis tremolo via ``am_hz``/``am_depth``.
    Oscillators (sine, square) also take slow pitch modulation via
    ``fm_hz``/``fm_semitones``; filtered_noise takes ``cutoff_hz`` and an
    optional ``highpass_hz``; chirp takes ``end_freq_hz``.
    """

    generator: str
    base_freq_hz: float = 440.0
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.generator not in GENERATORS:
            raise ValueError(f"unknown generator {self.generator!r}")
        if self.generator not in ("noise", "filtered_noise") and self.base_freq_hz <= 0:
            raise ValueError("base_freq_hz must be positive")


def equal_power_gains(pan: float) -> tuple[float, float]:
    """Left/right gains for pan in [-1, +1]; gains satisfy L^2 + R^2 = 1."""
    theta = (pan + 1.0) * math.pi / 4.0
    return math.cos(theta), math.sin(theta)


def _oscillator_phase(freq_hz, n, sample_rate, fm_hz=0.0, fm_semitones=0.0):
    t = np.arange(n) / sample_rate
    if fm_hz > 0.0 and fm_semitones != 0.0:
        inst = freq_hz * 2.0 ** (fm_semitones * np.sin(2 * np.pi * fm_hz * t) / 12.0)
        return 2 * np.pi * np.cumsum(inst) / sample_rate
    return 2 * np.pi * freq_hz * t


def synth(spec: SynthSpec, duration_s: float, sample_rate: int = SAMPLE_RATE) -> AudioBuffer:
    """Render a mono buffer of round(duration_s * sample_rate) samples, peak <= 1."""
    if duration_s <= 0:
        raise ValueError("duration_s must be positive")
    if sample_rate <= 0:
        raise ValueError("sample_rate must be positive")
    n = round(duration_s * sample_rate)
    p = spec.params
    rng = np.random.default_rng(int(p.get("seed", 0)))
    gen = spec.generator

    if gen == "sine":
        phase = _oscillator_phase(
            spec.base_freq_hz, n, sample_rate, p.get("fm_hz", 0.0), p.get("fm_semitones", 0.0)
        )
        x = np.sin(phase)
    elif gen == "square":
        phase = _oscillator_phase(
            spec.base_freq_hz, n, sample_rate, p.get("fm_hz", 0.0), p.get("fm_semitones", 0.0)
        )
        x = np.sign(np.sin(phase))
        x[x == 0] = 1.0
    elif gen == "noise":
        x = rng.standard_normal(n)
    elif gen == "filtered_noise":
        x = rng.standard_normal(n)
        nyq = sample_rate / 2.0
        cutoff = float(p.get("cutoff_hz", 1000.0))
        if not 0 < cutoff < nyq:
            raise ValueError(f"cutoff_hz must be in (0, {nyq})")
        sos = _dsp.butter(4, cutoff / nyq, btype="low", output="sos")
        x = _dsp.sosfilt(sos, x)
        highpass = float(p.get("highpass_hz", 0.0))
        if highpass > 0.0:
            sos_hp = _dsp.butter(2, highpass / nyq, btype="high", output="sos")
            x = _dsp.sosfilt(sos_hp, x)
    elif gen == "chirp":
        end = float(p.get("end_freq_hz", spec.base_freq_hz * 2))
        if end <= 0:
            raise ValueError("end_freq_hz must be positive")
        t = np.arange(n) / sample_rate
        total = n / sample_rate
        phase = 2 * np.pi * (spec.base_freq_hz * t + (end - spec.base_freq_hz) * t**2 / (2 * total))
        x = np.sin(phase)
    elif gen == "pluck":
        x = _karplus_strong(spec.base_freq_hz, n, sample_rate, rng)
    else:  # pragma: no cover - guarded by SynthSpec validation
        raise ValueError(gen)

    am_hz = float(p.get("am_hz", 0.0))
    am_depth = float(p.get("am_depth", 0.0))
    if am_hz > 0.0 and am_depth > 0.0:
        t = np.arange(n) / sample_rate
        x = x * (1.0 - am_depth * 0.5 * (1.0 + np.sin(2 * np.pi * am_hz * t)))

    peak = np.max(np.abs(x))
    if peak > 0:
        x = x * (0.9 / peak)
    return AudioBuffer(x, sample_rate)


def _karplus_strong(freq_hz, n, sample_rate, rng):
    delay = max(2, int(sample_rate / freq_hz))
    burst = np.zeros(n)
    burst[: min(delay, n)] = rng.uniform(-1.0, 1.0, size=min(delay, n))
    a = np.zeros(delay + 2)
    a[0] = 1.0
    a[delay] = -0.499
    a[delay + 1] = -0.499
    return _dsp.lfilter([1.0], a, burst)


def _resample_by_rate(x: np.ndarray, rate: float) -> np.ndarray:
    """Playback-rate resampling: rate 2 halves the length an octave up."""
    n = x.shape[-1]
    out_len = max(1, round(n / rate))
    positions = np.arange(out_len) * rate
    return np.interp(positions, np.arange(n), x, left=0.0, right=0.0)


def _envelope(x: np.ndarray, sample_rate: int, attack_s: float, decay_s: float) -> np.ndarray:
    n = x.shape[-1]
    if n == 0:
        return x
    gain = np.ones(n)
    if attack_s > 0:
        k = min(n, round(attack_s * sample_rate))
        if k > 0:
            gain[:k] *= np.linspace(0.0, 1.0, k, endpoint=False) + 0.5 / k
    if decay_s > 0:
        win = min(n, round(decay_s * sample_rate))
        if win > 0:
            u = np.arange(win) / sample_rate
            gain[n - win :] *= 10.0 ** (-3.0 * u / decay_s)
    return x * gain


def _comb_reverb(x: np.ndarray, sample_rate: int) -> np.ndarray:
    """Average of four feedback combs, evaluated over x padded with the tail.

    y[n] = x[n] + g*y[n-D] only ever reaches D samples back, so whole blocks
    of length D can be computed at once.
    """
    tail = round(REVERB_TAIL_S * sample_rate)
    n = x.shape[-1] + tail
    padded = np.zeros(n)
    padded[: x.shape[-1]] = x
    acc = np.zeros(n)
    for delay_s in COMB_DELAYS_S:
        d = max(1, round(delay_s * sample_rate))
        y = np.zeros(n)
        for start in range(0, n, d):
            end = min(start + d, n)
            block = padded[start:end].copy()
            if start >= d:
                block += COMB_FEEDBACK * y[start - d : end - d]
            y[start:end] = block
        acc += y
    return acc / len(COMB_DELAYS_S)


def apply_variables(buf: AudioBuffer, v: AuditoryVariables) -> AudioBuffer:
    """Run the effect chain and pan to stereo.

    Order: pitch shift (resampling, so duration divides by 2^(semitones/12)),
    duration scaling (tail truncate/zero-pad, never a resample), envelope,
    gain, depth reverb, equal-power pan. Stereo input is downmixed first;
    the chain is defined over mono material.
    """
    x = buf.to_mono().samples[0]
    sr = buf.sample_rate

    if v.pitch_semitones != 0.0:
        x = _resample_by_rate(x, 2.0 ** (v.pitch_semitones / 12.0))

    if v.duration_scale != 1.0:
        target = max(1, round(x.shape[-1] * v.duration_scale))
        if target <= x.shape[-1]:
            x = x[:target]
        else:
            x = np.concatenate([x, np.zeros(target - x.shape[-1])])

    if v.attack_s > 0 or v.decay_s > 0:
        x = _envelope(x, sr, v.attack_s, v.decay_s)

    if v.loudness_db != 0.0:
        x = x * 10.0 ** (v.loudness_db / 20.0)

    wet_mix = min(REVERB_WET_PER_DEPTH * v.reverb_depth, REVERB_WET_MAX)
    if wet_mix > 0.0:
        wet = _comb_reverb(x, sr)
        dry = np.concatenate([x, np.zeros(wet.shape[-1] - x.shape[-1])])
        x = (1.0 - wet_mix) * dry + wet_mix * wet

    gain_l, gain_r = equal_power_gains(v.pan)
    return AudioBuffer(np.stack([gain_l * x, gain_r * x]), sr)


def _soft_limit(x: np.ndarray) -> np.ndarray:
    """tanh knee above LIMITER_KNEE; identity below; asymptote at 1.0."""
    knee = LIMITER_KNEE
    mag = np.abs(x)
    over = mag > knee
    if not np.any(over):
        return x
    out = x.copy()
    span = 1.0 - knee
    out[over] = np.sign(x[over]) * (knee + span * np.tanh((mag[over] - knee) / span))
    return out


def mix(buffers: list[tuple[AudioBuffer, float]]) -> AudioBuffer:
    """Sum buffers at start offsets (seconds); soft-limit only if peak > 0.99.

    Mono inputs are duplicated to both channels when any input is stereo.
    """
    if not buffers:
        raise ValueError("mix requires at least one buffer")
    rates = {b.sample_rate for b, _ in buffers}
    if len(rates) != 1:
        raise ValueError(f"mismatched sample rates: {sorted(rates)}")
    sr = rates.pop()
    channels = max(b.channels for b, _ in buffers)
    total = 0
    placed = []
    for b, offset_s in buffers:
        if offset_s < 0:
            raise ValueError("start offsets must be non-negative")
        start = round(offset_s * sr)
        placed.append((b, start))
        total = max(total, start + b.frames)
    out = np.zeros((channels, total))
    for b, start in placed:
        data = b.samples
        if b.channels < channels:
            data = np.repeat(data, channels, axis=0)
        out[:, start : start + b.frames] += data
    if total and np.max(np.abs(out)) > LIMITER_KNEE:
        out = _soft_limit(out)
    return AudioBuffer(out, sr)


def normalize(buf: AudioBuffer, target_peak_db: float) -> AudioBuffer:
    """Scale so the peak sits at 10^(target_peak_db/20)."""
    peak = buf.peak()
    if peak == 0.0:
        raise NormalizeError("cannot normalize an all-zero buffer")
    return buf.scaled(10.0 ** (target_peak_db / 20.0) / peak)


def rms_normalize(buf: AudioBuffer, target_rms_db: float) -> AudioBuffer:
    """Scale so the RMS sits at 10^(target_rms_db/20)."""
    rms = buf.rms()
    if rms == 0.0:
        raise NormalizeError("cannot normalize an all-zero buffer")
    return buf.scaled(10.0 ** (target_rms_db / 20.0) / rms)


def gated_loudness_db(buf: AudioBuffer, gate_rel_db: float = -40.0) -> float:
    """Loudness as dBFS RMS of the instantaneous channel-power envelope,
    gated relative to its own peak so silent tails (reverb decay, padding)
    do not dilute the measure. Summing power across channels makes the value
    invariant under equal-power panning."""
    power = np.sum(buf.samples**2, axis=0)
    peak = float(np.max(power)) if power.size else 0.0
    if peak <= 0.0:
        raise NormalizeError("cannot measure loudness of an all-zero buffer")
    kept = power >= peak * 10.0 ** (gate_rel_db / 10.0)
    return 10.0 * float(np.log10(np.mean(power[kept])))


def loudness_normalize(buf: AudioBuffer, target_db: float) -> AudioBuffer:
    """Scale so the gated loudness sits at target_db."""
    return buf.scaled(10.0 ** ((target_db - gated_loudness_db(buf)) / 20.0))


def _to_int16(buf: AudioBuffer) -> np.ndarray:
    clipped = np.clip(buf.samples, -1.0, 1.0)
    return np.round(clipped * 32767.0).astype("<i2")


def wav_bytes(buf: AudioBuffer) -> bytes:
    """Encode as RIFF/WAVE PCM 16-bit little-endian, interleaved."""
    pcm = _to_int16(buf)
    out = io.BytesIO()
    with wave.open(out, "wb") as w:
        w.setnchannels(buf.channels)
        w.setsampwidth(2)
        w.setframerate(buf.sample_rate)
        w.writeframes(pcm.T.tobytes())
    return out.getvalue()


def write_wav(buf: AudioBuffer, path) -> None:
    with open(path, "wb") as f:
        f.write(wav_bytes(buf))


def read_wav_bytes(data: bytes) -> AudioBuffer:
    try:
        with wave.open(io.BytesIO(data), "rb") as w:
            channels = w.getnchannels()
            width = w.getsampwidth()
            rate = w.getframerate()
            nframes = w.getnframes()
            raw = w.readframes(nframes)
    except (wave.Error, EOFError) as exc:
        raise AudioFormatError(f"malformed WAV data: {exc}") from exc
    if width != 2:
        raise AudioFormatError(f"unsupported sample width {width * 8} bits (need 16)")
    if channels not in (1, 2):
        raise AudioFormatError(f"unsupported channel count {channels}")
    if len(raw) < nframes * channels * 2:
        raise AudioFormatError("truncated WAV data chunk")
    pcm = np.frombuffer(raw, dtype="<i2").reshape(-1, channels).T
    return AudioBuffer(pcm.astype(np.float64) / 32767.0, rate)


def read_wav(path) -> AudioBuffer:
    with open(path, "rb") as f:
        return read_wav_bytes(f.read())
