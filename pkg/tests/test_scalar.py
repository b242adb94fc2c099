import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from dualdet.config import using
from dualdet.errors import DomainError, NotAppreciable
from dualdet.scalar import (
    I,
    J,
    K,
    DualComplex,
    DualQuaternion,
    DualReal,
    Quaternion,
    abs2,
    dual_abs,
    dual_inv,
    dual_mul,
    dual_pow,
    magnitude,
    sqrt_dual,
    total_cmp,
)

reals = st.floats(min_value=-1e3, max_value=1e3, allow_nan=False)
appreciable_reals = reals.filter(lambda x: abs(x) > 1e-3)
dual_reals = st.builds(DualReal, reals, reals)
quats = st.builds(Quaternion, reals, reals, reals, reals)
dual_quats = st.builds(DualQuaternion, quats, quats)


def close(a, b, tol=1e-12):
    scale = max(1.0, abs(a), abs(b))
    return abs(a - b) <= tol * scale


def test_mul_examples():
    assert dual_mul(DualReal(2, 3), DualReal(5, -1)) == DualReal(10, 13)
    assert DualReal(1, 0) * DualReal(7, 9) == DualReal(7, 9)
    assert DualQuaternion(J) * DualQuaternion(K) == DualQuaternion(I)


def test_quaternion_table():
    one = Quaternion(1)
    table = {
        (I, I): -one, (J, J): -one, (K, K): -one,
        (I, J): K, (J, K): I, (K, I): J,
        (J, I): -K, (K, J): -I, (I, K): -J,
    }
    for (a, b), want in table.items():
        assert a * b == want
    assert I * J * K == -one


def test_inverse_examples():
    assert dual_inv(DualReal(2, 4)) == DualReal(0.5, -1.0)
    assert dual_inv(DualReal(1, 0)) == DualReal(1, 0)
    with pytest.raises(NotAppreciable):
        dual_inv(DualReal(0, 1))


def test_inverse_quaternion_order():
    q = DualQuaternion(Quaternion(1, 2, 0, 1), Quaternion(0, 1, 3, -1))
    p = q * dual_inv(q)
    assert all(math.isclose(a, b, abs_tol=1e-12) for a, b in zip(p.st, Quaternion(1)))
    assert all(abs(c) < 1e-12 for c in p.in_)


def test_total_cmp_examples():
    assert total_cmp(DualReal(1, -100), DualReal(0.5, 100)) == 1
    assert total_cmp(DualReal(1, 2), DualReal(1, 3)) == -1
    assert total_cmp(DualReal(1, 2), DualReal(1, 2)) == 0
    assert DualReal(1, 2) < DualReal(1, 3)


def test_abs_examples():
    assert dual_abs(DualReal(-2, 5)) == DualReal(2, -5)
    assert dual_abs(DualReal(0, -3)) == DualReal(0, 3)
    assert dual_abs(DualReal(4, 0)) == DualReal(4, 0)


def test_abs_follows_threshold():
    with using(tau_zero=1e-3):
        assert dual_abs(DualReal(-1e-4, 2)) == DualReal(0, 2)


def test_pow_examples():
    assert dual_pow(DualReal(2, 1), 3) == DualReal(8, 12)
    assert dual_pow(DualReal(3, 7), 0) == DualReal(1, 0)
    assert dual_pow(DualReal(0, 5), 2) == DualReal(0, 0)
    with pytest.raises(NotAppreciable):
        dual_pow(DualReal(0, 1), -1)


def test_pow_exact_matches_repeated_mul():
    a = DualReal(Fraction(3, 2), Fraction(-5, 7))
    acc = DualReal(Fraction(1), Fraction(0))
    for k in range(7):
        assert dual_pow(a, k) == acc
        acc = acc * a
    assert dual_pow(a, -2) == dual_inv(a) * dual_inv(a)


def test_magnitude_examples():
    m = magnitude(DualQuaternion(Quaternion(1, 1, 0, 0)))
    assert m.st == pytest.approx(math.sqrt(2)) and m.in_ == 0
    assert magnitude(DualQuaternion(Quaternion(), Quaternion(0, 0, 3, 0))) == DualReal(0, 3)
    assert magnitude(DualQuaternion(Quaternion(1), Quaternion(0, 1, 0, 0))) == DualReal(1, 0)
    assert magnitude(DualComplex(3 + 4j, 0j)).st == 5


def test_sqrt_examples():
    assert sqrt_dual(DualReal(4, 4)) == DualReal(2, 1)
    assert sqrt_dual(DualReal(1, 0)) == DualReal(1, 0)
    for bad in (DualReal(0, 1), DualReal(-4, 0)):
        with pytest.raises(DomainError):
            sqrt_dual(bad)


def test_complex_parts():
    z = DualComplex(1 + 2j, 3 - 4j)
    assert z.real == DualReal(1, 3)
    assert z.imag == DualReal(2, -4)
    assert z.conjugate() == DualComplex(1 - 2j, 3 + 4j)


def test_promotion():
    assert DualReal(2, 1) * DualComplex(1j, 0j) == DualComplex(2j, 1j)
    assert 2 * DualReal(1, 1) == DualReal(2, 2)
    assert isinstance(DualComplex(1j, 0j) * DualQuaternion(J), DualQuaternion)


@given(st.builds(DualReal, appreciable_reals, reals))
def test_real_inverse_roundtrip(a):
    p = a * dual_inv(a)
    assert close(p.st, 1) and abs(p.in_) <= 1e-12 * max(1.0, abs(a.in_ / a.st))


@given(st.builds(DualQuaternion, quats.filter(lambda q: abs(q) > 1e-2), quats))
def test_quaternion_inverse_roundtrip(q):
    for p in (q * dual_inv(q), dual_inv(q) * q):
        scale = max(1.0, abs(q.in_) / abs(q.st))
        assert all(abs(a - b) <= 1e-9 for a, b in zip(p.st, Quaternion(1)))
        assert all(abs(c) <= 1e-9 * scale for c in p.in_)


@given(dual_reals, dual_reals, dual_reals)
def test_total_order_laws(a, b, c):
    assert total_cmp(a, b) == -total_cmp(b, a)
    assert sum(x for x in (a < b, a == b, b < a)) == 1
    if total_cmp(a, b) <= 0 and total_cmp(b, c) <= 0:
        assert total_cmp(a, c) <= 0


@given(dual_reals, dual_reals)
def test_nonnegative_products(a, b):
    zero = DualReal(0.0, 0.0)
    if a.st == 0 or b.st == 0:
        return  # rounding of the ε product is not sign-exact at the boundary
    if total_cmp(a, zero) >= 0 and total_cmp(b, zero) >= 0:
        assert total_cmp(a * b, zero) >= 0


@given(dual_quats.filter(lambda q: abs(q.st) > 1e-3))
def test_magnitude_squared(q):
    m2 = magnitude(q) ** 2
    qq = q * q.conjugate()
    assert close(m2.st, qq.st.w, 1e-12)
    assert abs(m2.in_ - qq.in_.w) <= 1e-12 * max(1.0, abs(qq.in_.w), abs(q.st) * abs(q.in_))
    assert close(abs2(q).in_, qq.in_.w, 1e-9)
