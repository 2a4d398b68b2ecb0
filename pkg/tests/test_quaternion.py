import math

import numpy as np
import pytest

from qpcp import (COMPLEX_FIELD, QUATERNION_FIELD, REAL_FIELD, Quaternion,
                  ScalarField)

I = Quaternion(0, 1, 0, 0)
J = Quaternion(0, 0, 1, 0)
K = Quaternion(0, 0, 0, 1)
ONE = Quaternion(1, 0, 0, 0)


def rand_quaternion(rng):
    return Quaternion(*rng.standard_normal(4))


class TestMultiplication:
    def test_unit_table(self):
        # i*j = k, j*k = i, k*i = j and squares are -1
        assert I * J == K
        assert J * K == I
        assert K * I == J
        for unit in (I, J, K):
            assert unit * unit == -ONE
        # anti-commutation of distinct imaginary units
        assert J * I == -K
        assert K * J == -I
        assert I * K == -J

    def test_identity(self):
        rng = np.random.default_rng(1)
        for _ in range(20):
            q = rand_quaternion(rng)
            assert ONE * q == q
            assert q * ONE == q

    def test_worked_product(self):
        # expanded by hand from the 16-term multiplication table
        p = Quaternion(1, 2, 3, 4)
        q = Quaternion(5, 6, 7, 8)
        assert p * q == Quaternion(-60, 12, 30, 24)

    def test_not_commutative(self):
        p = Quaternion(1, 2, 3, 4)
        q = Quaternion(5, 6, 7, 8)
        assert p * q != q * p

    def test_associative(self):
        rng = np.random.default_rng(2)
        for _ in range(50):
            p, q, r = (rand_quaternion(rng) for _ in range(3))
            lhs = (p * q) * r
            rhs = p * (q * r)
            assert lhs.is_close(rhs, 1e-12)

    def test_real_scalar_mixing(self):
        q = Quaternion(1, 2, 3, 4)
        assert 2 * q == Quaternion(2, 4, 6, 8)
        assert q * 0.5 == Quaternion(0.5, 1, 1.5, 2)
        assert q + 1 == Quaternion(2, 2, 3, 4)
        assert 1 - q == Quaternion(0, -2, -3, -4)


class TestConjugateAndMagnitude:
    def test_conjugate_components(self):
        assert Quaternion(1, 2, 3, 4).conj() == Quaternion(1, -2, -3, -4)

    def test_conjugate_of_real(self):
        assert Quaternion.from_real(2.5).conj() == Quaternion.from_real(2.5)

    def test_involution(self):
        rng = np.random.default_rng(3)
        for _ in range(20):
            q = rand_quaternion(rng)
            assert q.conj().conj() == q

    def test_q_times_conjugate_is_squared_magnitude(self):
        rng = np.random.default_rng(4)
        for _ in range(50):
            q = rand_quaternion(rng)
            prod = q * q.conj()
            assert prod.is_close(Quaternion.from_real(abs(q) ** 2), 1e-12)

    def test_conjugate_reverses_products(self):
        rng = np.random.default_rng(5)
        for _ in range(50):
            p, q = rand_quaternion(rng), rand_quaternion(rng)
            assert (p * q).conj().is_close(q.conj() * p.conj(), 1e-12)

    def test_magnitude_multiplicative(self):
        rng = np.random.default_rng(6)
        for _ in range(200):
            p, q = rand_quaternion(rng), rand_quaternion(rng)
            assert abs(p * q) == pytest.approx(abs(p) * abs(q), rel=1e-12)

    def test_inverse_law(self):
        rng = np.random.default_rng(7)
        for _ in range(100):
            q = rand_quaternion(rng)
            inv = q.conj() * (1.0 / abs(q) ** 2)
            assert (q * inv).is_close(ONE, 1e-12)

    def test_magnitude_zero_iff_zero(self):
        assert abs(Quaternion()) == 0.0
        assert abs(Quaternion(0, 0, 1e-300, 0)) > 0.0

    def test_magnitude_no_overflow(self):
        # hypot-style scaling: squaring these would overflow to inf
        q = Quaternion(3e307, 4e307, 0, 0)
        assert abs(q) == pytest.approx(5e307, rel=1e-12)
        assert math.isfinite(abs(q))


class TestComplexPair:
    def test_split(self):
        x, y = Quaternion(1, 2, 3, 4).to_complex_pair()
        assert x == 1 + 2j
        assert y == 3 + 4j

    def test_pure_complex_embeds(self):
        x, y = Quaternion(1.5, -2.5, 0, 0).to_complex_pair()
        assert x == 1.5 - 2.5j
        assert y == 0

    def test_round_trip_bit_exact(self):
        rng = np.random.default_rng(8)
        for _ in range(1000):
            q = rand_quaternion(rng)
            assert Quaternion.from_complex_pair(*q.to_complex_pair()) == q

    def test_pair_multiplication_consistent(self):
        # q = x + y*j multiplication in pair form matches the Hamilton
        # product: (x1 x2 - y1 conj(y2)) + (x1 y2 + y1 conj(x2)) j
        rng = np.random.default_rng(9)
        for _ in range(100):
            p, q = rand_quaternion(rng), rand_quaternion(rng)
            x1, y1 = p.to_complex_pair()
            x2, y2 = q.to_complex_pair()
            expected = Quaternion.from_complex_pair(
                x1 * x2 - y1 * y2.conjugate(),
                x1 * y2 + y1 * x2.conjugate())
            assert (p * q).is_close(expected, 1e-12)


class TestComplexEmbedding:
    def test_operations_match_complex_arithmetic(self):
        rng = np.random.default_rng(10)
        for _ in range(100):
            a, b = rng.standard_normal(2) + 1j * rng.standard_normal(2)
            p = Quaternion.from_complex_pair(a, 0)
            q = Quaternion.from_complex_pair(b, 0)
            assert (p * q).to_complex_pair() == ((a * b), 0)
            assert (p + q).to_complex_pair() == ((a + b), 0)
            assert p.conj().to_complex_pair() == (a.conjugate(), 0)


class TestScalarField:
    @pytest.mark.parametrize("field", [REAL_FIELD, COMPLEX_FIELD,
                                       QUATERNION_FIELD])
    def test_ring_identities(self, field: ScalarField):
        rng = np.random.default_rng(11)
        for _ in range(20):
            p = _rand_scalar(field, rng)
            q = _rand_scalar(field, rng)
            assert field.magnitude(field.sub(field.add(p, q),
                                             field.add(q, p))) < 1e-12
            assert field.magnitude(field.sub(field.mul(p, field.one),
                                             p)) < 1e-12
            assert field.magnitude(field.mul(p, field.zero)) < 1e-12

    @pytest.mark.parametrize("field", [REAL_FIELD, COMPLEX_FIELD,
                                       QUATERNION_FIELD])
    def test_magnitude_multiplicative(self, field: ScalarField):
        rng = np.random.default_rng(12)
        for _ in range(100):
            p = _rand_scalar(field, rng)
            q = _rand_scalar(field, rng)
            assert field.magnitude(field.mul(p, q)) == pytest.approx(
                field.magnitude(p) * field.magnitude(q), rel=1e-12)

    def test_commutativity_flags(self):
        assert REAL_FIELD.is_commutative
        assert COMPLEX_FIELD.is_commutative
        assert not QUATERNION_FIELD.is_commutative

    def test_quaternions_genuinely_do_not_commute(self):
        f = QUATERNION_FIELD
        assert f.mul(I, J) != f.mul(J, I)

    @pytest.mark.parametrize("field", [REAL_FIELD, COMPLEX_FIELD,
                                       QUATERNION_FIELD])
    def test_conj_reverses_products(self, field: ScalarField):
        rng = np.random.default_rng(13)
        for _ in range(50):
            p = _rand_scalar(field, rng)
            q = _rand_scalar(field, rng)
            lhs = field.conj(field.mul(p, q))
            rhs = field.mul(field.conj(q), field.conj(p))
            assert field.magnitude(field.sub(lhs, rhs)) < 1e-12

    @pytest.mark.parametrize("field", [REAL_FIELD, COMPLEX_FIELD,
                                       QUATERNION_FIELD])
    def test_from_real(self, field: ScalarField):
        v = field.from_real(2.5)
        assert field.magnitude(v) == pytest.approx(2.5)
        assert field.magnitude(field.sub(v, field.mul(field.from_real(2.5),
                                                      field.one))) < 1e-15


def _rand_scalar(field: ScalarField, rng):
    if field is REAL_FIELD:
        return float(rng.standard_normal())
    if field is COMPLEX_FIELD:
        return complex(rng.standard_normal(), rng.standard_normal())
    return Quaternion(*rng.standard_normal(4))
