import random

import numpy as np
import pytest
from scipy import stats

from sdkx.algebra import ELEMENTS, GRMatrix, GroupRingElem, mat_aug
from sdkx.paramgen import (
    PARAM_FILE_BYTES,
    SecurityParams,
    TriangularFactor,
    dump_params,
    generate_params,
    load_params,
    sample_exponent,
    sample_factor,
    sample_gre_aug_zero,
    sample_H,
    sample_M,
    triangular_inverse,
)
from sdkx.algebra import perm_inverse
from sdkx.semidirect import run_exchange, sd_pow


class ZeroRng(random.Random):
    """Every draw returns the bottom of its range."""

    def randrange(self, start, stop=None, step=1):
        return 0 if stop is None else start


class RecordingRng(random.Random):
    """Remembers the last position drawn from ``range(60)``."""

    last_pos = None

    def randrange(self, start, stop=None, step=1):
        value = super().randrange(start, stop, step)
        if stop is None and start == 60:
            self.last_pos = value
        return value


class TestExponents:
    def test_ranges(self, rng):
        assert {sample_exponent(2, rng) for _ in range(200)} == {2, 3}
        for _ in range(200):
            assert 128 <= sample_exponent(8, rng) < 256

    def test_bit_length_exact(self, rng):
        for t in (2, 3, 8, 64, 183):
            for _ in range(50):
                assert sample_exponent(t, rng).bit_length() == t

    def test_uniform(self):
        r = random.Random(1)
        draws = np.array([sample_exponent(8, r) for _ in range(10_000)])
        assert ((draws >= 128) & (draws < 256)).all()
        counts = np.bincount((draws - 128) // 16, minlength=8)
        assert stats.chisquare(counts).pvalue > 0.01

    def test_rejects_small_t(self, rng):
        with pytest.raises(ValueError):
            sample_exponent(1, rng)
        with pytest.raises(ValueError):
            SecurityParams(t=1)
        with pytest.raises(ValueError):
            SecurityParams(factor_count=0)


class TestSamplingM:
    def test_aug_zero_element(self, rng):
        for _ in range(200):
            assert sample_gre_aug_zero(rng).augmentation() == 0

    def test_all_zero_draw_unchanged(self):
        assert sample_gre_aug_zero(ZeroRng()) == GroupRingElem.zero()

    def test_untouched_coefficients_uniform(self):
        r = RecordingRng(2)
        counts = np.zeros(7, dtype=int)
        for _ in range(10_000):
            x = sample_gre_aug_zero(r)
            idx = 0 if r.last_pos != 0 else 1
            counts[x.coeffs[idx]] += 1
        assert stats.chisquare(counts).pvalue > 0.01

    def test_sample_M(self, rng):
        for _ in range(20):
            M = sample_M(rng)
            assert not mat_aug(M).any()
            assert M.data.shape == (3, 3, 60)
            assert M.data.min() >= 0 and M.data.max() <= 6

    def test_transmissions_aug_zero(self, params, rng):
        A = sd_pow(params.M, params, sample_exponent(40, rng))
        assert not mat_aug(A).any()


class TestTriangular:
    def test_identity_factor(self):
        zero = GroupRingElem.zero()
        f = TriangularFactor(True, (0, 0, 0), (zero, zero, zero))
        assert triangular_inverse(f) == GRMatrix.identity()

    def test_single_off_diagonal(self):
        r = random.Random(3)
        g1, g2, g3 = (ELEMENTS[r.randrange(60)] for _ in range(3))
        u1 = GroupRingElem([r.randrange(7) for _ in range(60)])
        zero = GroupRingElem.zero()
        f = TriangularFactor(True, (g1.index, g2.index, g3.index), (u1, zero, zero))
        inv = triangular_inverse(f)
        expected = -(GroupRingElem.monomial(perm_inverse(g1)) * u1 * GroupRingElem.monomial(perm_inverse(g2)))
        assert inv[0, 1] == expected
        assert f.matrix() @ inv == GRMatrix.identity()

    def test_two_sided_inverse(self):
        r = random.Random(4)
        ident = GRMatrix.identity()
        for i in range(1000):
            f = sample_factor(r, upper=bool(i % 2))
            F, inv = f.matrix(), triangular_inverse(f)
            assert F @ inv == ident
            assert inv @ F == ident

    def test_factor_shape(self):
        r = random.Random(5)
        upper, lower = sample_factor(r, True).matrix(), sample_factor(r, False).matrix()
        for i, j in [(1, 0), (2, 0), (2, 1)]:
            assert not upper.data[i, j].any()
        for i, j in [(0, 1), (0, 2), (1, 2)]:
            assert not lower.data[i, j].any()
        for i in range(3):
            assert upper.data[i, i].sum() == 1 and lower.data[i, i].sum() == 1


class TestSampleH:
    def test_single_identity_factor(self):
        H, H_inv = sample_H(ZeroRng(), factor_count=1)
        assert H == H_inv == GRMatrix.identity()

    def test_inverse(self, rng):
        H, H_inv = sample_H(rng)
        ident = GRMatrix.identity()
        assert H @ H_inv == ident == H_inv @ H

    def test_alternating_orientation(self):
        # Replaying the stream reproduces H as upper * lower * upper ...
        H, _ = sample_H(random.Random(6), factor_count=4)
        r = random.Random(6)
        factors = [sample_factor(r, upper=(i % 2 == 0)).matrix() for i in range(4)]
        assert H == factors[0] @ factors[1] @ factors[2] @ factors[3]

    def test_rejects_zero_factors(self, rng):
        with pytest.raises(ValueError):
            sample_H(rng, factor_count=0)


class TestGenerate:
    def test_hundred_generations_validate(self):
        r = random.Random(8)
        for _ in range(100):
            generate_params(r).validate()

    def test_deterministic(self):
        a = generate_params(random.Random(9))
        b = generate_params(random.Random(9))
        assert dump_params(a, 64) == dump_params(b, 64)
        assert sample_exponent(64, random.Random(9)) == sample_exponent(64, random.Random(9))

    def test_file_round_trip(self, params):
        data = dump_params(params, 64)
        assert len(data) == PARAM_FILE_BYTES == 1627
        assert data[:7] == b"SDKX\x01\x00\x40"
        loaded, t = load_params(data)
        assert t == 64 and loaded == params
        assert run_exchange(loaded.M, loaded, 5, 9)[0] == run_exchange(params.M, params, 5, 9)[1]

    @pytest.mark.parametrize(
        "mutate",
        [
            lambda d: d[:-1],
            lambda d: b"XDKS" + d[4:],
            lambda d: d[:4] + b"\x02" + d[5:],
            lambda d: d[:5] + b"\x00\x01" + d[7:],
            lambda d: d[:7] + b"\x07" + d[8:],
        ],
    )
    def test_load_rejects_corruption(self, params, mutate):
        with pytest.raises(ValueError):
            load_params(mutate(dump_params(params, 64)))

    def test_load_rejects_bad_M(self, params):
        data = bytearray(dump_params(params, 64))
        data[7] = (data[7] + 1) % 7  # first coefficient of M[0, 0]
        with pytest.raises(ValueError, match="augmentation"):
            load_params(bytes(data))
