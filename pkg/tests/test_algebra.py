import math

import pytest
from hypothesis import given, settings, strategies as st

from hashlab.algebra import (
    AlgebraSpec,
    barrel_rotate,
    clmul,
    default_irreducible,
    divisor_count,
    divisor_max,
    divisor_series,
    inv,
    irreducible_polys,
    is_irreducible,
    is_prime,
    LCM_EXACT_LIMIT,
    LCM_LOG_LIMIT,
    lcm_upto,
    log2_factorial,
    log2_lcm_upto,
    poly_mod,
    power,
)
from hashlab.errors import CapacityError, DomainError, StructuralError, UnsupportedError

FIELDS = [
    AlgebraSpec.prime_field(2),
    AlgebraSpec.prime_field(7),
    AlgebraSpec.prime_field(251),
    AlgebraSpec.binary_field(1),
    AlgebraSpec.binary_field(4),
    AlgebraSpec.binary_field(8),
]


def _trial_division_irreducible(poly):
    d = poly.bit_length() - 1
    if d < 1:
        return False
    return all(poly_mod(poly, q) for q in range(2, 1 << (d // 2 + 1)))


def test_clmul_and_poly_mod():
    assert clmul(0b11, 0b11) == 0b101
    assert clmul(0b101, 0b1) == 0b101
    assert poly_mod(0b101, 0b11) == 0
    assert poly_mod(0b1000, 0b1011) == 0b011
    with pytest.raises(ZeroDivisionError):
        poly_mod(5, 0)


def test_irreducible_enumeration():
    assert irreducible_polys(1) == (0b10, 0b11)
    assert irreducible_polys(2) == (0b111,)
    assert irreducible_polys(3) == (0b1011, 0b1101)
    assert len(irreducible_polys(4)) == 3
    assert len(irreducible_polys(8)) == 30
    assert default_irreducible(8) == 0x11B


def test_irreducible_limit():
    with pytest.raises(CapacityError):
        irreducible_polys(21, limit=20)
    with pytest.raises(DomainError):
        irreducible_polys(0)


@settings(max_examples=200)
@given(st.integers(min_value=1 << 13, max_value=(1 << 15) - 1))
def test_rabin_test_agrees_with_trial_division(poly):
    assert is_irreducible(poly) == _trial_division_irreducible(poly)


@pytest.mark.parametrize("poly", [0x1002B, 0x10000008D, 0x1000000000000001B])
def test_standard_reduction_polynomials_are_irreducible(poly):
    assert is_irreducible(poly)


def test_is_prime():
    primes = [2, 3, 5, 97, 257, 65537, 2**31 - 1, 2**61 - 1, 16777619, 1099511628211]
    composites = [0, 1, 4, 561, 1105, 3215031751, 2**32 + 1, 1000001]
    assert all(is_prime(p) for p in primes)
    assert not any(is_prime(n) for n in composites)
    assert [n for n in range(50) if is_prime(n)] == [n for n in range(2, 50) if all(n % d for d in range(2, n))]


@pytest.mark.parametrize("field", FIELDS, ids=lambda f: f.describe())
def test_field_axioms_exhaustive_small(field):
    values = range(min(field.size, 16))
    for a in values:
        assert field.add_int(a, field.neg_int(a)) == 0
        assert field.sub_int(a, a) == 0
        assert field.mul_int(a, 1) == a
        if a:
            assert field.mul_int(a, field.inv_int(a)) == 1
        for b in values:
            assert field.add_int(a, b) == field.add_int(b, a)
            assert field.mul_int(a, b) == field.mul_int(b, a)


@given(st.integers(0, 255), st.integers(0, 255), st.integers(0, 255))
def test_gf256_distributes(a, b, c):
    field = AlgebraSpec.binary_field(8)
    left = field.mul_int(a, field.add_int(b, c))
    right = field.add_int(field.mul_int(a, b), field.mul_int(a, c))
    assert left == right


@given(st.integers(1, 255))
def test_gf256_inverse(a):
    field = AlgebraSpec.binary_field(8)
    assert field.mul_int(a, field.inv_int(a)) == 1
    assert field.pow_int(a, 255) == 1


@given(st.integers(1, 250), st.integers(0, 20))
def test_prime_power_matches_builtin(a, e):
    field = AlgebraSpec.prime_field(251)
    assert power(field.element(a), e).value == pow(a, e, 251)


def test_mul_x_reduces():
    field = AlgebraSpec.binary_field(2)  # x^2 + x + 1
    assert field.mul_x_int(0b10) == 0b11
    assert field.mul_x_int(0b11) == 0b01
    ring = AlgebraSpec.binary_ring(3)
    assert ring.mul_x_int(0b100) == 0b001
    with pytest.raises(UnsupportedError):
        AlgebraSpec.mod2l(3).mul_x_int(1)


def test_rings_have_no_inverse():
    for ring in (AlgebraSpec.binary_ring(4), AlgebraSpec.mod2l(4)):
        with pytest.raises(UnsupportedError):
            ring.inv_int(3)
    with pytest.raises(ZeroDivisionError):
        AlgebraSpec.prime_field(7).inv_int(0)


def test_elements():
    f7 = AlgebraSpec.prime_field(7)
    a, b = f7.element(3), f7.element(5)
    assert (a + b).value == 1
    assert (a - b).value == 5
    assert (a * b).value == 1
    assert (-a).value == 4
    assert inv(a) == b
    assert (a / b).value == 2
    assert int(a ** 6) == 1
    with pytest.raises(StructuralError):
        a + AlgebraSpec.prime_field(5).element(3)
    with pytest.raises(DomainError):
        f7.element(7)


def test_structure_validation():
    with pytest.raises(DomainError):
        AlgebraSpec.prime_field(9)
    with pytest.raises(DomainError):
        AlgebraSpec.binary_field(2, 0b101)  # (x+1)^2
    assert AlgebraSpec.binary_field(4).describe() == "GF(2^4)/0x13"
    assert AlgebraSpec.prime_field(5).word_bits == 3


@given(st.integers(1, 16).flatmap(lambda L: st.tuples(st.just(L), st.integers(0, (1 << L) - 1))))
def test_barrel_rotate_is_a_permutation_of_order_L(args):
    L, y = args
    z = y
    for _ in range(L):
        z = barrel_rotate(z, L)
    assert z == y
    assert bin(barrel_rotate(y, L)).count("1") == bin(y).count("1")


def test_lcm_and_divisors():
    assert [lcm_upto(k) for k in (1, 2, 3, 4, 5, 6)] == [1, 2, 6, 12, 60, 60]
    assert lcm_upto(16) == 720720
    assert lcm_upto(4) == math.lcm(*range(1, 5))
    assert [divisor_count(n) for n in (1, 2, 12, 36, 97)] == [1, 2, 6, 9, 2]
    assert divisor_max(13) == 6
    assert divisor_series(5) == [(2, 1), (3, 2), (4, 2), (5, 3)]
    with pytest.raises(DomainError):
        lcm_upto(0)


def test_lcm_size_limits():
    assert lcm_upto(1000) == math.lcm(*range(1, 1001))
    assert log2_lcm_upto(1000) == pytest.approx(math.log2(lcm_upto(1000)), rel=1e-12)
    assert log2_lcm_upto(1) == 0
    with pytest.raises(CapacityError):
        lcm_upto(LCM_EXACT_LIMIT + 1)
    with pytest.raises(CapacityError):
        log2_lcm_upto(LCM_LOG_LIMIT + 1)
    with pytest.raises(DomainError):
        log2_lcm_upto(0)


@pytest.mark.parametrize("n", [2, 10, 100, 1000])
def test_log2_factorial_methods_agree(n):
    exact = math.log2(math.factorial(n))
    assert log2_factorial(n) == pytest.approx(exact, rel=1e-12)
    assert log2_factorial(n, method="lgamma") == pytest.approx(exact, rel=1e-12)
    assert log2_factorial(n, method="stirling") == pytest.approx(exact, rel=1e-4)


def test_log2_factorial_lgamma_at_table_sizes():
    assert log2_factorial(2**16, method="lgamma") == pytest.approx(log2_factorial(2**16), rel=1e-12)
