import numpy as np
import pytest

from qpcp import (AudioClip, ClipScores, aggregate, nsdr, score_clip, sdr)
from qpcp.metrics import DB_CAP

SR = 22050


def noise_clip(seed, n=2000, channels=1):
    rng = np.random.default_rng(seed)
    if channels == 1:
        return AudioClip.mono(rng.standard_normal(n), SR)
    return AudioClip.stereo(rng.standard_normal(n), rng.standard_normal(n),
                            SR)


class TestSdr:
    def test_perfect_estimate_capped(self):
        ref = noise_clip(0)
        assert sdr(ref, ref) == DB_CAP

    def test_scaled_estimate_capped(self):
        ref = noise_clip(1)
        assert sdr(2.0 * ref, ref) == DB_CAP

    def test_orthogonal_estimate_floor(self):
        n = 2000
        t = np.arange(n)
        ref = AudioClip.mono(np.sin(2 * np.pi * t / 100), SR)
        est = AudioClip.mono(np.cos(2 * np.pi * t / 100), SR)
        assert sdr(est, ref) == -DB_CAP

    def test_silent_estimate_floor(self):
        ref = noise_clip(2)
        est = AudioClip.mono(np.zeros(ref.length), SR)
        assert sdr(est, ref) == -DB_CAP

    def test_scale_invariance(self):
        rng = np.random.default_rng(3)
        ref = noise_clip(4)
        est = AudioClip.mono(ref.channel(0) + 0.3 * rng.standard_normal(
            ref.length), SR)
        base = sdr(est, ref)
        for alpha in (0.1, 2.0, 17.5):
            assert sdr(alpha * est, ref) == pytest.approx(base, abs=1e-10)

    def test_known_snr(self):
        # distortion orthogonal to the reference with 1/100 the energy
        n = 10000
        t = np.arange(n)
        ref = AudioClip.mono(np.sin(2 * np.pi * t / 50), SR)
        noise = AudioClip.mono(np.cos(2 * np.pi * t / 50), SR)
        est = ref + 0.1 * noise
        assert sdr(est, ref) == pytest.approx(20.0, abs=1e-9)

    def test_silent_reference_rejected(self):
        ref = AudioClip.mono(np.zeros(100), SR)
        with pytest.raises(ValueError):
            sdr(noise_clip(5, 100), ref)

    def test_length_mismatch_rejected(self):
        with pytest.raises(ValueError):
            sdr(noise_clip(6, 100), noise_clip(6, 200))

    def test_stereo_concatenates_channels(self):
        ref = noise_clip(7, channels=2)
        est = noise_clip(8, channels=2)
        flat_ref = AudioClip.mono(ref.data.T.ravel(), SR)
        flat_est = AudioClip.mono(est.data.T.ravel(), SR)
        assert sdr(est, ref) == pytest.approx(sdr(flat_est, flat_ref))


class TestNsdr:
    def test_mixture_estimate_is_zero(self):
        ref = noise_clip(9)
        mixture = ref + noise_clip(10)
        assert nsdr(mixture, ref, mixture) == 0.0

    def test_perfect_estimate(self):
        ref = noise_clip(11)
        mixture = ref + noise_clip(12)
        value = nsdr(ref, ref, mixture)
        assert value == DB_CAP - sdr(mixture, ref)

    def test_improvement_positive_for_denoised(self):
        rng = np.random.default_rng(13)
        ref = noise_clip(14)
        noise = AudioClip.mono(rng.standard_normal(ref.length), SR)
        mixture = ref + noise
        est = ref + 0.1 * noise
        assert nsdr(est, ref, mixture) > 0


class TestScoreClip:
    def test_reports_lengths_and_consistency(self):
        ref_v, ref_a = noise_clip(15), noise_clip(16)
        mixture = ref_v + ref_a
        scores = score_clip(ref_v, ref_a, ref_v, ref_a, mixture)
        assert scores.clip_length == ref_v.length
        assert scores.sdr_voice == DB_CAP
        assert scores.nsdr_voice == DB_CAP - sdr(mixture, ref_v)


class TestAggregate:
    def mk(self, nsdr_v, length):
        return ClipScores(sdr_voice=1.0, sdr_accomp=2.0, nsdr_voice=nsdr_v,
                          nsdr_accomp=0.0, clip_length=length)

    def test_single_clip_identity(self):
        s = self.mk(3.0, 1000)
        agg = aggregate([s])
        assert agg.gnsdr_voice == pytest.approx(3.0)
        assert agg.gsdr_voice == pytest.approx(1.0)
        assert agg.total_length == 1000

    def test_equal_lengths_average(self):
        agg = aggregate([self.mk(2.0, 500), self.mk(4.0, 500)])
        assert agg.gnsdr_voice == pytest.approx(3.0)

    def test_length_weighting(self):
        agg = aggregate([self.mk(0.0, SR), self.mk(4.0, 3 * SR)])
        assert agg.gnsdr_voice == pytest.approx(3.0)

    def test_identical_scores_independent_of_lengths(self):
        agg = aggregate([self.mk(2.5, 100), self.mk(2.5, 100000)])
        assert agg.gnsdr_voice == pytest.approx(2.5)

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            aggregate([])
