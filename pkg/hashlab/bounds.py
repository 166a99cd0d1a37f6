"""
Impossibility bounds on the string length for iterated hashing, and the
minimum family sizes.

Cardinality bounds count hash functions; structural bounds come from the
cycle structure of unary strings. Integer columns are exact.
"""
from dataclasses import dataclass
from fractions import Fraction
import math

import pandas as pd

from hashlab.algebra import LCM_LOG_LIMIT, divisor_series, lcm_upto, log2_factorial, log2_lcm_upto
from hashlab.errors import DomainError

EXACT_FACTORIAL_L = 16  # lg(2^L!) floor certified with integers up to here
EXACT_LCM_L = 16  # structural_almost column is an integer up to here, a log2 magnitude above
LOG_DOMAIN_BITS = 10**6  # cardinality_almost switches to log2 above this size
SUMMARY_COLUMNS = ["L", "card_universal", "card_strong", "struct_universal"]


@dataclass
class BoundsRow:
    L: int
    cardinality_universal: int
    cardinality_strong: int
    cardinality_almost: int | float
    cardinality_almost_is_log2: bool
    structural_universal: int
    structural_strong: int
    structural_almost: int | float | None
    structural_almost_is_log2: bool
    epsilon: Fraction

    def summary(self):
        return [self.L, self.cardinality_universal, self.cardinality_strong, self.structural_universal]


def cardinality_universal(L):
    """2L + L 2^(L+1)."""
    return 2 * L + L * (1 << (L + 1))


def cardinality_strong(L):
    """
    floor(L + 2 lg(2^L!) - lg(2^L - 1) - 1).

    Up to L = 16 the floor is taken in integers: floor(lg x) for the rational
    x = (2^L!)^2 / (2^L - 1) equals floor(lg floor(x)).
    """
    if L < 1:
        raise DomainError(f"L must be >= 1, got {L}")
    V = 1 << L
    if L <= EXACT_FACTORIAL_L:
        quotient = math.factorial(V) ** 2 // (V - 1)
        return L - 1 + quotient.bit_length() - 1
    return math.floor(L + 2 * log2_factorial(V, method="lgamma") - math.log2(V - 1) - 1)


def cardinality_almost(L, epsilon):
    """
    L (eps 2^(L (2^(L+1) + 1)) + 1), floored; (value, is_log2).

    Returned as a log2 magnitude when the exponent passes LOG_DOMAIN_BITS.
    """
    epsilon = Fraction(epsilon)
    exponent = L * ((1 << (L + 1)) + 1)
    if exponent <= LOG_DOMAIN_BITS:
        return math.floor(L * (epsilon * (1 << exponent) + 1)), False
    return math.log2(L) + exponent + math.log2(epsilon), True


def structural_universal(L):
    return (1 << L) + 1


def structural_strong(L):
    return (1 << L) + 1


def structural_almost(L):
    """2^L + LCM(1..2^L) - 1."""
    return (1 << L) + lcm_upto(1 << L) - 1


def structural_almost_log2(L):
    """
    lg(2^L + LCM(1..2^L) - 1); None past the sieve limit.

    Above EXACT_LCM_L the 2^L - 1 term is below the float resolution of lg LCM.
    """
    V = 1 << L
    if V > LCM_LOG_LIMIT:
        return None
    if L <= EXACT_LCM_L:
        return math.log2(structural_almost(L))
    return log2_lcm_upto(V)


def table_bounds(L, epsilon=Fraction(1, 2)):
    """One BoundsRow: every cardinality and structural column for word size L."""
    if L < 1:
        raise DomainError(f"L must be >= 1, got {L}")
    epsilon = Fraction(epsilon)
    if not 0 < epsilon < 1:
        raise DomainError(f"epsilon must lie in (0, 1), got {epsilon}")
    almost, is_log2 = cardinality_almost(L, epsilon)
    structural_is_log2 = L > EXACT_LCM_L
    structural = structural_almost_log2(L) if structural_is_log2 else structural_almost(L)
    return BoundsRow(
        L=L,
        cardinality_universal=cardinality_universal(L),
        cardinality_strong=cardinality_strong(L),
        cardinality_almost=almost,
        cardinality_almost_is_log2=is_log2,
        structural_universal=structural_universal(L),
        structural_strong=structural_strong(L),
        structural_almost=structural,
        structural_almost_is_log2=structural_is_log2,
        epsilon=epsilon,
    )


def bounds_table(Ls, epsilon=Fraction(1, 2)):
    """DataFrame of BoundsRow data, one row per L."""
    records = []
    for L in Ls:
        row = table_bounds(L, epsilon)
        records.append(
            {
                "L": row.L,
                "card_universal": row.cardinality_universal,
                "card_strong": row.cardinality_strong,
                "card_almost": row.cardinality_almost,
                "card_almost_log2": row.cardinality_almost_is_log2,
                "struct_universal": row.structural_universal,
                "struct_strong": row.structural_strong,
                "struct_almost": row.structural_almost,
                "struct_almost_log2": row.structural_almost_is_log2,
            }
        )
    return pd.DataFrame.from_records(records)


def bounds_csv(Ls):
    return bounds_table(Ls)[SUMMARY_COLUMNS].to_csv(index=False, lineterminator="\n")


def min_family_size(K, L, epsilon):
    """ceil(ceil(K/L - 1) / eps): hash functions needed for K-bit items on L-bit values."""
    epsilon = Fraction(epsilon)
    if K < L:
        raise DomainError(f"need K >= L, got K={K}, L={L}")
    if epsilon <= 0:
        raise DomainError(f"epsilon must be positive, got {epsilon}")
    blocks = math.ceil(Fraction(K, L) - 1)
    return math.ceil(blocks / epsilon)


def stinson_min_size(num_strings, num_values, strong):
    """Strong: 1 + a(b - 1). Universal: ceil(a / b)."""
    if num_strings < 1 or num_values < 1:
        raise DomainError("inputs must be >= 1")
    if strong:
        return 1 + num_strings * (num_values - 1)
    return -(-num_strings // num_values)


def epsilon_impossible_length(L, epsilon):
    """2^L + LCM(1..2^L + 1 - floor(1/eps)), for 1/2^L < eps < 1 with 1/eps not an integer."""
    epsilon = Fraction(epsilon)
    V = 1 << L
    if not Fraction(1, V) < epsilon < 1:
        raise DomainError(f"epsilon must lie strictly between 1/{V} and 1, got {epsilon}")
    inverse = 1 / epsilon
    if inverse.denominator == 1:
        raise DomainError(f"1/epsilon must not be an integer, got {inverse}")
    return V + lcm_upto(V + 1 - math.floor(inverse))


def iterated_family_bound(L, sigma):
    """|H| <= 2^(L (2^L sigma + 1)); (exponent, integer or None when the exponent passes 4096)."""
    exponent = L * ((1 << L) * sigma + 1)
    return exponent, (1 << exponent if exponent <= 4096 else None)


def divisor_table(n_max):
    """n and max_{i<n} d(i) for n = 2..n_max."""
    return pd.DataFrame(divisor_series(n_max), columns=["n", "max_divisor_count"])
