import random

import numpy as np
import pytest
from sympy import primerange

from sdkx.algebra import GRMatrix, mat_aug, mat_pow
from sdkx.paramgen import sample_M
from sdkx.platforms import (
    MatrixParams,
    ToyParams,
    geometric_exponent,
    matrix_apply,
    matrix_closed_form,
    matrix_shared_key,
    toy_apply,
    toy_closed_form,
)
from sdkx.semidirect import run_exchange, sd_pow, sd_pow_linear

from conftest import random_matrix


class TestToy:
    def test_apply_examples(self):
        params = ToyParams(23, 5, 3)
        assert toy_apply(params, 0, 17) == 17
        assert toy_apply(params, 5, 1) == 1
        # 5^(3^2) = 5^9 by nine multiplications
        acc = 1
        for _ in range(9):
            acc = acc * 5 % 23
        assert toy_apply(params, 2, 5) == acc == 11

    def test_apply_rejects_zero(self):
        with pytest.raises(ValueError):
            toy_apply(ToyParams(23, 5, 3), 1, 46)

    def test_closed_form_examples(self):
        params = ToyParams(23, 5, 3)
        assert toy_closed_form(5, 3, 23, 1) == 5
        assert toy_closed_form(5, 3, 23, 2) == pow(5, 4, 23)
        assert geometric_exponent(3, 4) == 40
        assert toy_closed_form(5, 3, 23, 4) == sd_pow_linear(5, params, 4) == pow(5, 40, 23) == 6

    def test_closed_form_agrees_with_generic(self):
        r = random.Random(1)
        primes = list(primerange(3, 1000))
        for p in r.sample(primes, 40):
            g = r.randrange(2, p)
            for k in (2, 3, 5):
                params = ToyParams(p, g, k)
                for m in range(1, 65):
                    expected = pow(g, geometric_exponent(k, m), p)
                    assert toy_closed_form(g, k, p, m) == expected
                    assert sd_pow(g, params, m) == expected

    def test_closed_form_huge_exponent(self):
        params = ToyParams(1009, 11, 3)
        m = 10**30 + 7
        assert toy_closed_form(11, 3, 1009, m) == sd_pow(11, params, m)

    def test_automorphism_flag(self):
        assert ToyParams(23, 5, 3).is_automorphism
        assert not ToyParams(23, 5, 2).is_automorphism

    def test_validation(self):
        with pytest.raises(ValueError):
            ToyParams(21, 5, 3)
        with pytest.raises(ValueError):
            ToyParams(23, 1, 3)
        with pytest.raises(ValueError):
            ToyParams(23, 5, 1)

    def test_endomorphism_law(self):
        params = ToyParams(1009, 11, 4)
        r = random.Random(2)
        for _ in range(200):
            x, y = r.randrange(1, 1009), r.randrange(1, 1009)
            assert params.apply(1, x * y % 1009) == params.apply(1, x) * params.apply(1, y) % 1009

    def test_reduces_to_classical_dh(self):
        # At tiny p, the classical problem (g, g^(k^m), g^(k^n)) -> g^(k^(m+n))
        # solved by brute force, lines up with the toy key: K^(k-1) * g.
        params = ToyParams(101, 2, 3)
        p, g, k = params.p, params.g, params.k
        r = random.Random(3)
        for _ in range(30):
            m, n = r.randrange(1, 500), r.randrange(1, 500)
            k_a, k_b = run_exchange(g, params, m, n)
            assert k_a == k_b
            gm, gn = pow(g, pow(k, m), p), pow(g, pow(k, n), p)
            x = next(e for e in range(1, p) if pow(g, e, p) == gm)
            dh = pow(gn, x, p)
            assert dh == pow(g, pow(k, m + n), p)
            assert dh == pow(k_a, k - 1, p) * g % p


class TestMatrixPlatform:
    def test_apply_examples(self, params):
        X = random_matrix(random.Random(4))
        assert matrix_apply(params, 0, X) == X
        for s in (1, 5, 1000):
            assert matrix_apply(params, s, GRMatrix.identity()) == GRMatrix.identity()
        once = lambda Y: params.H_inv @ Y @ params.H
        assert matrix_apply(params, 3, X) == once(once(once(X)))

    def test_h_powers(self, params):
        for s in (0, 1, 2, 3, 13, 64, 1000):
            pos, neg = params.h_powers(s)
            assert pos == mat_pow(params.H, s)
            assert neg == mat_pow(params.H_inv, s)

    def test_conjugation_is_automorphism(self, params):
        r = random.Random(5)
        for _ in range(5):
            X, Y = random_matrix(r), random_matrix(r)
            assert matrix_apply(params, 1, X @ Y) == matrix_apply(params, 1, X) @ matrix_apply(params, 1, Y)

    def test_closed_form_small(self, params):
        H, M, H_inv = params.H, params.M, params.H_inv
        assert matrix_closed_form(params, 1) == M
        assert matrix_closed_form(params, 2) == H_inv @ M @ H @ M

    def test_closed_form_29(self, params):
        assert matrix_closed_form(params, 29) == sd_pow_linear(params.M, params, 29)

    def test_closed_form_agrees_with_generic(self, params_pool):
        for p in params_pool:
            linear = p.M
            for m in range(1, 65):
                if m > 1:
                    linear = matrix_apply(p, 1, linear) @ p.M
                assert matrix_closed_form(p, m) == linear
                assert sd_pow(p.M, p, m) == linear

    def test_shared_key(self, params):
        H, M, H_inv = params.H, params.M, params.H_inv
        A = B = sd_pow(M, params, 1)
        expected = mat_pow(H_inv, 2) @ mat_pow(H @ M, 2)
        assert matrix_shared_key(params, 1, B, A) == expected
        r = random.Random(6)
        for _ in range(10):
            m, n = r.randrange(1, 51), r.randrange(1, 51)
            A, B = sd_pow(M, params, m), sd_pow(M, params, n)
            k_a = matrix_shared_key(params, m, B, A)
            k_b = matrix_shared_key(params, n, A, B)
            assert k_a == k_b == matrix_closed_form(params, m + n)
            assert not mat_aug(k_a).any()

    def test_non_commutation(self, params_pool):
        for p in params_pool:
            HM = p.H @ p.M
            assert p.H @ HM != HM @ p.H

    def test_rejects_invalid(self, params):
        r = random.Random(7)
        with pytest.raises(ValueError, match="inverse"):
            MatrixParams(params.M, params.H, params.H)
        bad_M = random_matrix(r)
        assert mat_aug(bad_M).any()
        with pytest.raises(ValueError, match="augmentation"):
            MatrixParams(bad_M, params.H, params.H_inv)
        ident = GRMatrix.identity()
        with pytest.raises(ValueError, match="commutes"):
            MatrixParams(sample_M(r), ident, ident)

    def test_equality(self, params):
        clone = MatrixParams(params.M, params.H, params.H_inv)
        assert clone == params
        assert np.array_equal(clone.M.data, params.M.data)
