"""
Exact arithmetic for every structure the hash families compute in:
prime fields F_p, binary fields GF(2)[x]/p(x), the shift ring
GF(2)[x]/(x^L+1) and the integers modulo 2^L. Also the number theory the
bounds need (LCM of 1..k, the divisor function, primality).

Polynomials over GF(2) are integer bitmasks, bit i = coefficient of x^i,
so x^2+x+1 is 0b111 = 0x7.
"""
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
import math

import numpy as np

from config.lab_config import get_lab_config
from hashlab.errors import CapacityError, DomainError, StructuralError, UnsupportedError


class AlgebraKind(str, Enum):
    PRIME_FIELD = "prime-field"
    BINARY_FIELD = "binary-field"
    BINARY_RING = "binary-ring"
    MOD2L = "mod2L"


# ---------------------------------------------------------------------------
# GF(2)[x] on bitmasks
# ---------------------------------------------------------------------------

def clmul(a, b):
    """Carry-less (GF(2)[x]) product of two bitmask polynomials."""
    result = 0
    while b:
        if b & 1:
            result ^= a
        a <<= 1
        b >>= 1
    return result


def poly_degree(a):
    return a.bit_length() - 1


def poly_mod(a, m):
    """Remainder of a divided by m in GF(2)[x]."""
    if m == 0:
        raise ZeroDivisionError("polynomial modulus is zero")
    dm = m.bit_length()
    while a.bit_length() >= dm:
        a ^= m << (a.bit_length() - dm)
    return a


def poly_gcd(a, b):
    while b:
        a, b = b, poly_mod(a, b)
    return a


def poly_mulmod(a, b, m):
    return poly_mod(clmul(a, b), m)


def poly_powmod(base, exponent, m):
    result = 1
    base = poly_mod(base, m)
    while exponent:
        if exponent & 1:
            result = poly_mulmod(result, base, m)
        base = poly_mulmod(base, base, m)
        exponent >>= 1
    return poly_mod(result, m)


def _prime_factors(n):
    factors = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            factors.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        factors.append(n)
    return factors


def is_irreducible(poly):
    """
    Irreducibility over GF(2).

    Trial division by every polynomial of degree 1..deg/2 up to degree 12;
    Rabin's test above (x^(2^d) = x mod f, and gcd(x^(2^(d/q)) - x, f) = 1
    for every prime q dividing d).
    """
    d = poly_degree(poly)
    if d < 1:
        return False
    if d == 1:
        return True
    if not poly & 1:
        return False
    if d <= 12:
        for divisor in range(2, 1 << (d // 2 + 1)):
            if poly_mod(poly, divisor) == 0:
                return False
        return True
    x = 0b10
    for q in _prime_factors(d):
        h = x
        for _ in range(d // q):
            h = poly_mulmod(h, h, poly)
        if poly_gcd(poly, h ^ x) != 1:
            return False
    h = x
    for _ in range(d):
        h = poly_mulmod(h, h, poly)
    return h == x


@lru_cache(maxsize=None)
def irreducible_polys(L, limit=None):
    """All monic irreducible degree-L polynomials over GF(2), ascending bitmask order."""
    limit = limit if limit is not None else get_lab_config()["irreducible_limit"]
    if L < 1:
        raise DomainError(f"degree must be at least 1, got {L}")
    if L > limit:
        raise CapacityError(
            f"irreducible polynomial enumeration is limited to L <= {limit}, got {L}",
            count=L,
            budget=limit,
        )
    return tuple(p for p in range(1 << L, 1 << (L + 1)) if is_irreducible(p))


@lru_cache(maxsize=None)
def default_irreducible(L):
    """Lexicographically smallest irreducible of degree L (the reproducible default p(x))."""
    if L < 1:
        raise DomainError(f"degree must be at least 1, got {L}")
    for p in range(1 << L, 1 << (L + 1)):
        if is_irreducible(p):
            return p
    raise DomainError(f"no irreducible polynomial of degree {L}")  # unreachable


def format_poly(poly):
    return hex(poly)


def parse_poly(text):
    return int(text, 16) if text.lower().startswith("0x") else int(text, 0)


# ---------------------------------------------------------------------------
# Integers
# ---------------------------------------------------------------------------

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


def is_prime(n):
    """Miller-Rabin with fixed bases; deterministic for n < 3.3e24."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    if n < 1000:
        return all(n % d for d in range(43, math.isqrt(n) + 1, 2))
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = pow(x, 2, n)
            if x == n - 1:
                break
        else:
            return False
    return True


LCM_EXACT_LIMIT = 1 << 20  # lcm_upto builds the integer only up to here
LCM_LOG_LIMIT = 1 << 26  # sieve size for log2_lcm_upto


def _primes_upto(k):
    sieve = np.ones(k + 1, dtype=bool)
    sieve[:2] = False
    for i in range(2, math.isqrt(k) + 1):
        if sieve[i]:
            sieve[i * i :: i] = False
    return np.flatnonzero(sieve)


@lru_cache(maxsize=64)
def lcm_upto(k):
    """LCM(1, 2, ..., k) as an exact integer: the product of the largest prime powers <= k."""
    if k < 1:
        raise DomainError(f"lcm_upto needs k >= 1, got {k}")
    if k > LCM_EXACT_LIMIT:
        raise CapacityError(f"exact LCM(1..{k}) is limited to k <= {LCM_EXACT_LIMIT}", count=k, budget=LCM_EXACT_LIMIT)
    factors = []
    for p in _primes_upto(k).tolist():
        power = p
        while power * p <= k:
            power *= p
        factors.append(power)
    # balanced product tree
    while len(factors) > 1:
        paired = [a * b for a, b in zip(factors[::2], factors[1::2])]
        if len(factors) % 2:
            paired.append(factors[-1])
        factors = paired
    return factors[0] if factors else 1


def log2_lcm_upto(k):
    """lg LCM(1..k) = sum over primes p <= k of floor(log_p k) lg p, without building the integer."""
    if k < 1:
        raise DomainError(f"log2_lcm_upto needs k >= 1, got {k}")
    if k > LCM_LOG_LIMIT:
        raise CapacityError(f"LCM(1..{k}) magnitude is limited to k <= {LCM_LOG_LIMIT}", count=k, budget=LCM_LOG_LIMIT)
    primes = _primes_upto(k)
    root = math.isqrt(k)
    terms = []
    for p in primes[primes <= root].tolist():
        exponent = 1
        while p ** (exponent + 1) <= k:
            exponent += 1
        terms.append(exponent * math.log2(p))
    terms.extend(np.log2(primes[primes > root]).tolist())
    return math.fsum(terms)


def divisor_count(n):
    """d(n): number of positive divisors of n."""
    if n < 1:
        raise DomainError(f"divisor count needs n >= 1, got {n}")
    count = 0
    for d in range(1, math.isqrt(n) + 1):
        if n % d == 0:
            count += 1 if d * d == n else 2
    return count


def divisor_max(n):
    """max over 1 <= i < n of d(i)."""
    if n < 2:
        raise DomainError(f"divisor_max needs n >= 2, got {n}")
    return max(divisor_count(i) for i in range(1, n))


def divisor_series(n_max):
    """[(n, divisor_max(n)) for n = 2..n_max], computed incrementally."""
    series = []
    best = 0
    for n in range(2, n_max + 1):
        best = max(best, divisor_count(n - 1))
        series.append((n, best))
    return series


def log2_factorial(n, method="fsum"):
    """
    lg(n!).

    "fsum" is a compensated sum of log2 k, "lgamma" uses math.lgamma(n + 1)
    and "stirling" is the asymptotic series.
    """
    if n < 0:
        raise DomainError(f"factorial of negative number {n}")
    if n < 2:
        return 0.0
    if method == "fsum":
        return math.fsum(math.log2(k) for k in range(2, n + 1))
    if method == "lgamma":
        return math.lgamma(n + 1) / math.log(2)
    if method == "stirling":
        ln = n * math.log(n) - n + 0.5 * math.log(2 * math.pi * n) + 1 / (12 * n) - 1 / (360 * n**3)
        return ln / math.log(2)
    raise DomainError(f"unknown method {method!r}")


# ---------------------------------------------------------------------------
# Structures and elements
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AlgebraSpec:
    """The arithmetic structure a family computes over."""

    kind: AlgebraKind
    modulus: int
    reduction_poly: int | None
    word_bits: int

    def __post_init__(self):
        kind = AlgebraKind(self.kind)
        object.__setattr__(self, "kind", kind)
        if self.word_bits < 1:
            raise DomainError(f"word_bits must be >= 1, got {self.word_bits}")
        if kind is AlgebraKind.PRIME_FIELD:
            if not is_prime(self.modulus):
                raise DomainError(f"{self.modulus} is not prime")
        elif kind is AlgebraKind.BINARY_FIELD:
            if self.modulus != 1 << self.word_bits:
                raise DomainError("binary field modulus must be 2^L")
            if self.reduction_poly is None or poly_degree(self.reduction_poly) != self.word_bits:
                raise DomainError(f"reduction polynomial must have degree {self.word_bits}")
            if not is_irreducible(self.reduction_poly):
                raise DomainError(f"{format_poly(self.reduction_poly)} is not irreducible over GF(2)")
        elif kind is AlgebraKind.BINARY_RING:
            if self.modulus != 1 << self.word_bits:
                raise DomainError("binary ring modulus must be 2^L")
            if self.reduction_poly != (1 << self.word_bits) | 1:
                raise DomainError("binary ring reduction polynomial is fixed to x^L+1")
        elif self.modulus != 1 << self.word_bits:
            raise DomainError("mod2L modulus must be 2^L")

    # constructors
    @classmethod
    def prime_field(cls, p):
        return cls(AlgebraKind.PRIME_FIELD, p, None, max(1, (p - 1).bit_length()))

    @classmethod
    def binary_field(cls, L, poly=None):
        return cls(AlgebraKind.BINARY_FIELD, 1 << L, poly if poly is not None else default_irreducible(L), L)

    @classmethod
    def binary_ring(cls, L):
        return cls(AlgebraKind.BINARY_RING, 1 << L, (1 << L) | 1, L)

    @classmethod
    def mod2l(cls, L):
        return cls(AlgebraKind.MOD2L, 1 << L, None, L)

    @property
    def size(self):
        return self.modulus

    @property
    def is_field(self):
        return self.kind in (AlgebraKind.PRIME_FIELD, AlgebraKind.BINARY_FIELD)

    @property
    def is_binary(self):
        return self.kind in (AlgebraKind.BINARY_FIELD, AlgebraKind.BINARY_RING)

    def describe(self):
        if self.kind is AlgebraKind.PRIME_FIELD:
            return f"F_{self.modulus}"
        if self.kind is AlgebraKind.BINARY_FIELD:
            return f"GF(2^{self.word_bits})/{format_poly(self.reduction_poly)}"
        if self.kind is AlgebraKind.BINARY_RING:
            return f"GF(2)[x]/(x^{self.word_bits}+1)"
        return f"Z/2^{self.word_bits}"

    # integer-level operations on canonical representatives
    def check(self, value):
        if not 0 <= value < self.modulus:
            raise DomainError(f"{value} is not a canonical element of {self.describe()}")
        return value

    def add_int(self, a, b):
        if self.is_binary:
            return a ^ b
        return (a + b) % self.modulus

    def neg_int(self, a):
        if self.is_binary:
            return a
        return (-a) % self.modulus

    def sub_int(self, a, b):
        if self.is_binary:
            return a ^ b
        return (a - b) % self.modulus

    def mul_int(self, a, b):
        if self.is_binary:
            return poly_mod(clmul(a, b), self.reduction_poly)
        return (a * b) % self.modulus

    def mul_x_int(self, a):
        """Multiply by x: left shift, then fold the overflow bit back through the reduction."""
        if not self.is_binary:
            raise UnsupportedError(f"multiplication by x is undefined in {self.describe()}")
        a <<= 1
        if a >> self.word_bits:
            a ^= self.reduction_poly
        return a

    def pow_int(self, a, exponent):
        if exponent < 0:
            return self.pow_int(self.inv_int(a), -exponent)
        result = 1 if self.modulus > 1 else 0
        while exponent:
            if exponent & 1:
                result = self.mul_int(result, a)
            a = self.mul_int(a, a)
            exponent >>= 1
        return result

    def inv_int(self, a):
        if not self.is_field:
            raise UnsupportedError(f"{self.describe()} is not a field; inverses are undefined")
        if a == 0:
            raise ZeroDivisionError(f"zero has no inverse in {self.describe()}")
        if self.kind is AlgebraKind.PRIME_FIELD:
            return pow(a, -1, self.modulus)
        # a^(2^L - 2) in GF(2^L)
        return self.pow_int(a, self.modulus - 2)

    # element-level helpers
    def element(self, value):
        return Element(value, self)

    @property
    def zero(self):
        return Element(0, self)

    @property
    def one(self):
        return Element(1, self)

    def elements(self):
        return [Element(v, self) for v in range(self.modulus)]


@dataclass(frozen=True)
class Element:
    value: int
    algebra: AlgebraSpec

    def __post_init__(self):
        self.algebra.check(self.value)

    def _same(self, other):
        if not isinstance(other, Element):
            raise StructuralError(f"cannot combine an element of {self.algebra.describe()} with {other!r}")
        if other.algebra != self.algebra:
            raise StructuralError(
                f"cannot combine elements of {self.algebra.describe()} and {other.algebra.describe()}"
            )
        return other

    def __add__(self, other):
        other = self._same(other)
        return Element(self.algebra.add_int(self.value, other.value), self.algebra)

    def __sub__(self, other):
        other = self._same(other)
        return Element(self.algebra.sub_int(self.value, other.value), self.algebra)

    def __mul__(self, other):
        other = self._same(other)
        return Element(self.algebra.mul_int(self.value, other.value), self.algebra)

    def __neg__(self):
        return Element(self.algebra.neg_int(self.value), self.algebra)

    def __pow__(self, exponent):
        return Element(self.algebra.pow_int(self.value, exponent), self.algebra)

    def __truediv__(self, other):
        return self * inv(self._same(other))

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"<{self.value} in {self.algebra.describe()}>"


def add(a, b):
    return a + b


def sub(a, b):
    return a - b


def neg(a):
    return -a


def mul(a, b):
    return a * b


def power(a, exponent):
    return a ** exponent


def inv(a):
    return Element(a.algebra.inv_int(a.value), a.algebra)


def barrel_rotate(y, L):
    """Circular left shift by one of an L-bit value: (y << 1) xor (y >> L-1)."""
    if L < 1:
        raise DomainError(f"bit count must be >= 1, got {L}")
    if not 0 <= y < 1 << L:
        raise DomainError(f"{y} does not fit in {L} bits")
    return ((y << 1) | (y >> (L - 1))) & ((1 << L) - 1)
