from __future__ import annotations

import numpy as np
import pytest

from sonuml.acoustics import (
    FEATURE_NAMES,
    FeatureVector,
    NormalizationStats,
    discriminability_matrix,
    extract_features,
    feature_distance,
)
from sonuml.audio import AudioBuffer, SynthSpec, synth

SR = 44100


def tone(freq, dur=1.0):
    return synth(SynthSpec("sine", freq), dur)


def white(dur=1.0, seed=0):
    return synth(SynthSpec("noise", 0.0, {"seed": seed}), dur)


class TestExtractFeatures:
    def test_pure_tone_centroid_and_flatness(self):
        fv = extract_features(tone(440.0))
        assert fv.spectral_centroid_hz == pytest.approx(440.0, abs=25.0)
        assert fv.spectral_flatness < 0.1

    def test_white_noise_is_flat(self):
        fv = extract_features(white())
        assert fv.spectral_flatness > 0.5

    def test_silence_padding_does_not_move_mel(self):
        buf = white(0.6, seed=4)
        padded = AudioBuffer(
            np.concatenate([np.zeros(SR // 2), buf.samples[0], np.zeros(SR // 2)]), SR
        )
        a = np.array(extract_features(buf).mel_band_log_energies)
        b = np.array(extract_features(padded).mel_band_log_energies)
        assert np.all(np.abs(a - b) <= 0.05 * np.abs(a))

    def test_too_short_rejected(self):
        with pytest.raises(ValueError):
            extract_features(AudioBuffer(np.ones(1000), SR))

    def test_all_silent_rejected(self):
        with pytest.raises(ValueError):
            extract_features(AudioBuffer(np.zeros(SR), SR))

    def test_deterministic(self):
        buf = white(0.5, seed=9)
        a = extract_features(buf).as_array()
        b = extract_features(buf).as_array()
        assert np.array_equal(a, b)

    def test_stereo_downmix(self):
        mono = tone(880.0, 0.5)
        stereo = AudioBuffer(np.stack([mono.samples[0], mono.samples[0]]), SR)
        a = extract_features(mono).as_array()
        b = extract_features(stereo).as_array()
        assert np.allclose(a, b)

    def test_vector_shape(self):
        fv = extract_features(tone(440.0, 0.2))
        assert len(fv.mel_band_log_energies) == 13
        assert fv.as_array().shape == (17,)
        assert len(FEATURE_NAMES) == 17


class TestFeatureDistance:
    @pytest.fixture()
    def population(self):
        sounds = [tone(440.0), tone(466.2), white(seed=1), tone(1200.0, 0.8)]
        vectors = [extract_features(s) for s in sounds]
        return vectors, NormalizationStats.from_vectors(vectors)

    def test_identity(self, population):
        vectors, norm = population
        assert feature_distance(vectors[0], vectors[0], norm) == 0.0

    def test_symmetry(self, population):
        vectors, norm = population
        d_ab = feature_distance(vectors[0], vectors[2], norm)
        d_ba = feature_distance(vectors[2], vectors[0], norm)
        assert d_ab == pytest.approx(d_ba)

    def test_noise_is_farther_than_neighbour_semitone(self, population):
        vectors, norm = population
        d_noise = feature_distance(vectors[0], vectors[2], norm)
        d_semitone = feature_distance(vectors[0], vectors[1], norm)
        assert d_noise > d_semitone

    def test_zero_variance_dimension_dropped(self):
        fv = extract_features(tone(440.0, 0.3))
        norm = NormalizationStats.from_vectors([fv, fv])
        assert set(norm.dropped) == set(FEATURE_NAMES)
        assert feature_distance(fv, fv, norm) == 0.0

    def test_amplitude_change_is_nearly_invariant(self):
        # The analysis is level-free: halving the gain shifts no feature and
        # the z-scored distance stays (far) below the 0.2 bound.
        sounds = [tone(440.0), tone(880.0), white(seed=2), tone(1500.0)]
        quiet = AudioBuffer(sounds[0].samples * 0.5, SR)
        vectors = [extract_features(s) for s in sounds + [quiet]]
        norm = NormalizationStats.from_vectors(vectors[:4])
        assert feature_distance(vectors[0], vectors[4], norm) < 0.2
        mel_delta = np.array(vectors[4].mel_band_log_energies) - np.array(
            vectors[0].mel_band_log_energies
        )
        # Any residual mel shift must be uniform across bands.
        assert np.ptp(mel_delta) < 1e-9
        assert vectors[4].spectral_centroid_hz == pytest.approx(
            vectors[0].spectral_centroid_hz
        )
        assert vectors[4].zero_crossing_rate == pytest.approx(
            vectors[0].zero_crossing_rate
        )


class TestDiscriminabilityMatrix:
    def test_identical_sounds_give_zero_matrix(self):
        buf = tone(440.0, 0.5)
        matrix, _ = discriminability_matrix([buf, buf])
        assert np.array_equal(matrix, np.zeros((2, 2)))

    def test_three_sounds_symmetric_zero_diagonal(self):
        matrix, _ = discriminability_matrix([tone(440.0, 0.5), tone(660.0, 0.5), white(0.5)])
        assert matrix.shape == (3, 3)
        assert np.array_equal(matrix, matrix.T)
        assert np.all(np.diag(matrix) == 0.0)

    def test_requires_two_sounds(self):
        with pytest.raises(ValueError):
            discriminability_matrix([tone(440.0, 0.5)])

    def test_extraction_error_names_offender(self):
        with pytest.raises(ValueError, match="sound 1"):
            discriminability_matrix([tone(440.0, 0.5), AudioBuffer(np.zeros(SR), SR)])


class TestFeatureVectorValidation:
    def test_wrong_band_count(self):
        with pytest.raises(ValueError):
            FeatureVector((0.0,) * 5, 100.0, 0.5, 0.1, 0.2)

    def test_flatness_bounds(self):
        with pytest.raises(ValueError):
            FeatureVector((0.0,) * 13, 100.0, 1.5, 0.1, 0.2)

    def test_non_finite_rejected(self):
        with pytest.raises(ValueError):
            FeatureVector((float("nan"),) * 13, 100.0, 0.5, 0.1, 0.2)
