import random

import pytest

from sdkx.algebra import GRMatrix
from sdkx.paramgen import sample_exponent
from sdkx.platforms import ToyParams, matrix_apply
from sdkx.semidirect import (
    MulCounter,
    ProtocolSession,
    Role,
    SdElement,
    derive_shared,
    run_exchange,
    sd_mul,
    sd_pow,
    sd_pow_linear,
)

from conftest import random_matrix

TOY = ToyParams(1009, 11, 3)


def literal_product(g, phi, n):
    """phi^(n-1)(g) * ... * phi(g) * g, each factor from scratch."""
    acc = phi.apply(n - 1, g)
    for s in range(n - 2, -1, -1):
        acc = phi.mul(acc, phi.apply(s, g))
    return acc


class TestSdMul:
    def test_identity_endomorphism(self, params):
        r = random.Random(1)
        g, h = random_matrix(r), random_matrix(r)
        assert sd_mul(SdElement(g, 0), SdElement(h, 0), params) == SdElement(g @ h, 0)

    def test_rule(self, params):
        g = params.M
        assert sd_mul(SdElement(g, 1), SdElement(g, 1), params) == SdElement(matrix_apply(params, 1, g) @ g, 2)

    def test_associative_matrix(self, params):
        r = random.Random(2)
        for _ in range(5):
            u, v, w = (SdElement(random_matrix(r), r.randrange(0, 40)) for _ in range(3))
            assert sd_mul(sd_mul(u, v, params), w, params) == sd_mul(u, sd_mul(v, w, params), params)

    def test_associative_toy(self):
        r = random.Random(3)
        for _ in range(200):
            u, v, w = (SdElement(r.randrange(1, TOY.p), r.randrange(0, 100)) for _ in range(3))
            assert sd_mul(sd_mul(u, v, TOY), w, TOY) == sd_mul(u, sd_mul(v, w, TOY), TOY)

    def test_negative_exponent_rejected(self):
        with pytest.raises(ValueError):
            SdElement(1, -1)


class TestSdPow:
    def test_small_cases(self, params):
        g = params.M
        assert sd_pow(g, params, 1) == g
        assert sd_pow(g, params, 2) == matrix_apply(params, 1, g) @ g

    def test_rejects_zero(self, params):
        with pytest.raises(ValueError):
            sd_pow(params.M, params, 0)

    def test_37_matches_literal_product(self, params):
        assert sd_pow(params.M, params, 37) == literal_product(params.M, params, 37)

    def test_linear_oracle_matches_literal(self, params):
        for n in (1, 2, 5, 11):
            assert sd_pow_linear(params.M, params, n) == literal_product(params.M, params, n)

    def test_toy_all_small_n(self):
        for n in range(1, 80):
            assert sd_pow(TOY.g, TOY, n) == literal_product(TOY.g, TOY, n)

    @pytest.mark.parametrize("n", [1, 2, 3, 7, 8, 255, 256, 2**20 + 5, 10**44, 2**61 - 1])
    def test_operation_count(self, n):
        counter = MulCounter()
        sd_pow(TOY.g, TOY, n, counter)
        assert counter.count <= 2 * (n.bit_length() - 1) + 1
        assert counter.count == (n.bit_length() - 1) + (bin(n).count("1") - 1)

    def test_exponent_additivity(self, params):
        # (g, phi)^(m+n) = (g, phi)^m (g, phi)^n
        r = random.Random(4)
        for _ in range(5):
            m, n = r.randrange(1, 10**6), r.randrange(1, 10**6)
            lhs = sd_pow(params.M, params, m + n)
            rhs = matrix_apply(params, n, sd_pow(params.M, params, m)) @ sd_pow(params.M, params, n)
            assert lhs == rhs


class TestKeyDerivation:
    def test_base_case(self, params):
        k_a, k_b = run_exchange(params.M, params, 1, 1)
        assert k_a == k_b == matrix_apply(params, 1, params.M) @ params.M

    def test_matrix_agreement_against_sd_pow(self, params):
        r = random.Random(5)
        for _ in range(10):
            m, n = r.randrange(1, 101), r.randrange(1, 101)
            k_a, k_b = run_exchange(params.M, params, m, n)
            assert k_a == k_b == sd_pow_linear(params.M, params, m + n)

    def test_toy_closed_form_key(self):
        r = random.Random(6)
        for _ in range(50):
            m, n = r.randrange(1, 200), r.randrange(1, 200)
            a, b = sd_pow(TOY.g, TOY, m), sd_pow(TOY.g, TOY, n)
            exponent = (TOY.k ** (m + n) - 1) // (TOY.k - 1)
            expected = pow(TOY.g, exponent, TOY.p)
            assert derive_shared(b, m, a, TOY) == derive_shared(a, n, b, TOY) == expected

    def test_session(self, params):
        r = random.Random(7)
        alice = ProtocolSession(Role.INITIATOR, params.M, params, sample_exponent(32, r))
        bob = ProtocolSession(Role.RESPONDER, params.M, params, sample_exponent(32, r))
        assert isinstance(alice.outbound, GRMatrix)
        assert alice.receive(bob.outbound) == bob.receive(alice.outbound)
        assert "private_exp" not in repr(alice)

    def test_session_rejects_zero_exponent(self, params):
        with pytest.raises(ValueError):
            ProtocolSession(Role.INITIATOR, params.M, params, 0)
