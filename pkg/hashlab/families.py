"""
Hash families: every construction under one interface.

A family is described by a FamilySpec. One member of the family is a
HashInstance (compression parameters plus initial value H_0); hashing a
string is the left fold H_i = F(H_{i-1}, s_i) starting from H_0.

Characters are integers 0..sigma-1 and hash values are integers
0..V-1, where V = p for prime fields and 2^L otherwise.

Enumeration order is fixed: parameters in itertools.product order
(first coordinate most significant), and for each parameter record the
initial values in ascending order. Instance index = param_index * I + init_index.
"""
from dataclasses import dataclass, field, asdict
import itertools
import math
import random

import numpy as np

from config.family_presets import (
    BYTE_ALPHABET,
    CONSTRUCTIONS,
    DEFAULT_MAX_LEN,
    DEFAULT_SHIFTS,
    FIXED_WORD_BITS,
    FNV_PRIMES,
    INIT_ALIASES,
    REFERENCE_SHIFT_BITS,
    get_default_init,
)
from config.lab_config import get_lab_config
from hashlab.algebra import (
    AlgebraKind,
    AlgebraSpec,
    barrel_rotate,
    clmul,
    format_poly,
    irreducible_polys,
    is_irreducible,
    is_prime,
    parse_poly,
    poly_mod,
)
from hashlab.errors import CapacityError, DomainError, UnsupportedError, UsageError

SPEC_GRAMMAR = (
    "<construction>:L=<bits>[,sigma=<n>][,poly=0x..][,p=<prime>][,l=..,r=..]"
    "[,init=zero|one|random][,maxlen=..][,mult=odd|all][,fnvp=<odd>]"
)


# ---------------------------------------------------------------------------
# Records
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FamilySpec:
    construction: str
    word_bits: int
    alphabet_size: int
    algebra: AlgebraSpec | None = None
    shift_params: tuple | None = None
    fnv_prime: int | None = None
    max_len: int | None = None
    init_policy: str = "uniform-random"
    odd_multiplier: bool = True
    fixed_poly: int | None = None

    @property
    def construction_impl(self):
        return CONSTRUCTION_REGISTRY[self.construction]

    @property
    def value_count(self):
        if self.algebra is not None and self.algebra.kind is AlgebraKind.PRIME_FIELD:
            return self.algebra.modulus
        return 1 << self.word_bits

    @property
    def is_iterated(self):
        return self.construction_impl.iterated

    @property
    def is_generalized(self):
        return self.construction_impl.generalized

    @property
    def uses_field_subtraction(self):
        """Prime-field families measure differences by subtraction instead of XOR."""
        return self.algebra is not None and self.algebra.kind is AlgebraKind.PRIME_FIELD

    def __str__(self):
        return render_family_spec(self)


@dataclass(frozen=True)
class HashParams:
    """Construction-specific compression parameters; unused fields stay None."""

    t: int | None = None
    zeta: int | None = None
    table: tuple | None = None
    coefficients: tuple | None = None
    position_tables: tuple | None = None
    poly: int | None = None
    multiplier: int | None = None

    def to_dict(self):
        return {k: (list(v) if isinstance(v, tuple) else v) for k, v in asdict(self).items() if v is not None}


@dataclass(frozen=True)
class HashInstance:
    spec: FamilySpec
    params: HashParams = field(default_factory=HashParams)
    init_value: int = 0

    def compress(self, state, c, position=1):
        return compress(self, state, c, position)

    def hash(self, s):
        return hash_string(self, s)

    def to_dict(self):
        return {
            "family": render_family_spec(self.spec),
            "params": self.params.to_dict(),
            "init_value": self.init_value,
        }


# ---------------------------------------------------------------------------
# Constructions
# ---------------------------------------------------------------------------

def value_dtype(value_count):
    if value_count <= 1 << 8:
        return np.uint8
    if value_count <= 1 << 16:
        return np.uint16
    if value_count <= 1 << 62:
        return np.int64
    return object


def _digit_array(count, base, width, dtype):
    """Rows of base-`base` digits (most significant first) for indices 0..count-1."""
    idx = np.arange(count, dtype=np.int64)[:, None]
    weights = base ** np.arange(width - 1, -1, -1, dtype=np.int64)
    return ((idx // weights) % base).astype(dtype)


class Construction:
    """One hash construction. Subclasses override what differs."""

    name = ""
    iterated = True
    generalized = False
    char_is_value = True  # characters enter the arithmetic, so sigma <= V

    def validate(self, spec):
        if spec.alphabet_size < 1:
            raise DomainError(f"alphabet size must be >= 1, got {spec.alphabet_size}")
        if self.char_is_value and spec.alphabet_size > spec.value_count:
            raise DomainError(
                f"{self.name}: characters must be hash values, sigma={spec.alphabet_size} > {spec.value_count}"
            )

    def param_count(self, spec):
        return 1

    def params(self, spec):
        yield HashParams()

    def sample_params(self, spec, rng):
        return HashParams()

    def init_values(self, spec):
        policy = spec.init_policy
        if policy == "fixed-zero":
            return [0]
        if policy == "fixed-one":
            return [1 % spec.value_count]
        return list(range(spec.value_count))

    def sample_init(self, spec, rng):
        policy = spec.init_policy
        if policy == "fixed-zero":
            return 0
        if policy == "fixed-one":
            return 1 % spec.value_count
        return rng.randrange(spec.value_count)

    def compress(self, spec, params, y, c, position):
        raise NotImplementedError

    def transition_tables(self, spec):
        """
        All compression functions as one array: (M, V, sigma) for iterated
        constructions, (M, n, V, sigma) for generalized ones.
        """
        V, sigma = spec.value_count, spec.alphabet_size
        M = self.param_count(spec)
        dtype = value_dtype(V)
        if self.generalized:
            n = spec.max_len
            tables = np.empty((M, n, V, sigma), dtype=dtype)
            for m, params in enumerate(self.params(spec)):
                for i in range(n):
                    for y in range(V):
                        for c in range(sigma):
                            tables[m, i, y, c] = self.compress(spec, params, y, c, i + 1)
            return tables
        tables = np.empty((M, V, sigma), dtype=dtype)
        for m, params in enumerate(self.params(spec)):
            for y in range(V):
                for c in range(sigma):
                    tables[m, y, c] = self.compress(spec, params, y, c, 1)
        return tables


class ConstantConstruction(Construction):
    name = "constant"
    char_is_value = False

    def compress(self, spec, params, y, c, position):
        return y


class MultilinearConstruction(Construction):
    """h(s) = m_1 + sum m_{i+1} s_i; H_0 plays the role of m_1."""

    name = "multilinear"
    generalized = True

    def param_count(self, spec):
        return spec.value_count ** spec.max_len

    def params(self, spec):
        for coefficients in itertools.product(range(spec.value_count), repeat=spec.max_len):
            yield HashParams(coefficients=coefficients)

    def sample_params(self, spec, rng):
        return HashParams(coefficients=tuple(rng.randrange(spec.value_count) for _ in range(spec.max_len)))

    def compress(self, spec, params, y, c, position):
        if position > len(params.coefficients):
            raise CapacityError(
                f"multilinear has {len(params.coefficients)} coefficients, position {position} requested",
                count=position,
                budget=len(params.coefficients),
            )
        algebra = spec.algebra
        return algebra.add_int(y, algebra.mul_int(params.coefficients[position - 1], c))


class ZobristConstruction(Construction):
    """h(s) = h_1(s_1) xor ... xor h_n(s_n), one fully random table per position."""

    name = "zobrist"
    generalized = True
    char_is_value = False

    def param_count(self, spec):
        return spec.value_count ** (spec.max_len * spec.alphabet_size)

    def params(self, spec):
        sigma = spec.alphabet_size
        for flat in itertools.product(range(spec.value_count), repeat=spec.max_len * sigma):
            yield HashParams(
                position_tables=tuple(flat[i * sigma : (i + 1) * sigma] for i in range(spec.max_len))
            )

    def sample_params(self, spec, rng):
        return HashParams(
            position_tables=tuple(
                tuple(rng.randrange(spec.value_count) for _ in range(spec.alphabet_size))
                for _ in range(spec.max_len)
            )
        )

    def compress(self, spec, params, y, c, position):
        if position > len(params.position_tables):
            raise CapacityError(
                f"zobrist has {len(params.position_tables)} position tables, position {position} requested",
                count=position,
                budget=len(params.position_tables),
            )
        return y ^ params.position_tables[position - 1][c]


class CWPolyConstruction(Construction):
    """F(y, c) = t y + c over a field."""

    name = "cwpoly"

    def param_count(self, spec):
        return spec.value_count

    def params(self, spec):
        for t in range(spec.value_count):
            yield HashParams(t=t)

    def sample_params(self, spec, rng):
        return HashParams(t=rng.randrange(spec.value_count))

    def compress(self, spec, params, y, c, position):
        algebra = spec.algebra
        return algebra.add_int(algebra.mul_int(params.t, y), c)


class CWPolyStrongConstruction(Construction):
    """h(s) = t^(|s|+1) + sum_i t^i s_i + zeta with t != 0. Not an iterated hash."""

    name = "cwpoly-strong"
    iterated = False

    def param_count(self, spec):
        return (spec.value_count - 1) * spec.value_count

    def params(self, spec):
        for t in range(1, spec.value_count):
            for zeta in range(spec.value_count):
                yield HashParams(t=t, zeta=zeta)

    def sample_params(self, spec, rng):
        return HashParams(t=rng.randrange(1, spec.value_count), zeta=rng.randrange(spec.value_count))

    def init_values(self, spec):
        return [0]

    def sample_init(self, spec, rng):
        return 0

    def compress(self, spec, params, y, c, position):
        raise UnsupportedError("cwpoly-strong is not an iterated hash; it has no compression function")

    def direct_hash(self, spec, params, s):
        algebra = spec.algebra
        t = params.t
        value = algebra.pow_int(t, len(s) + 1)
        power = 1
        for c in s:
            power = algebra.mul_int(power, t)
            value = algebra.add_int(value, algebra.mul_int(power, c))
        return algebra.add_int(value, params.zeta)


class TabulatedConstruction(Construction):
    """F(y, c) = x y + Gamma(c) in GF(2^L)."""

    name = "tabulated"
    char_is_value = False

    def param_count(self, spec):
        return spec.value_count ** spec.alphabet_size

    def params(self, spec):
        for table in itertools.product(range(spec.value_count), repeat=spec.alphabet_size):
            yield HashParams(table=table)

    def sample_params(self, spec, rng):
        return HashParams(table=tuple(rng.randrange(spec.value_count) for _ in range(spec.alphabet_size)))

    def _state_map(self, spec, y):
        return spec.algebra.mul_x_int(y)

    def compress(self, spec, params, y, c, position):
        return self._state_map(spec, y) ^ params.table[c]

    def transition_tables(self, spec):
        V, sigma = spec.value_count, spec.alphabet_size
        dtype = value_dtype(V)
        gammas = _digit_array(self.param_count(spec), V, sigma, np.int64)
        moved = np.array([self._state_map(spec, y) for y in range(V)], dtype=np.int64)
        return (moved[None, :, None] ^ gammas[:, None, :]).astype(dtype)


class ShiftTabulatedConstruction(TabulatedConstruction):
    """F(y, c) = rotate_left(y, 1) xor Gamma(c) in GF(2)[x]/(x^L+1)."""

    name = "shift-tabulated"

    def _state_map(self, spec, y):
        return barrel_rotate(y, spec.word_bits)


class PearsonConstruction(Construction):
    """F(y, c) = A[y xor c] with A a permutation of 0..2^L-1."""

    name = "pearson"

    def param_count(self, spec):
        return math.factorial(spec.value_count)

    def params(self, spec):
        for table in itertools.permutations(range(spec.value_count)):
            yield HashParams(table=table)

    def sample_params(self, spec, rng):
        table = list(range(spec.value_count))
        rng.shuffle(table)
        return HashParams(table=tuple(table))

    def compress(self, spec, params, y, c, position):
        return params.table[y ^ c]

    def _param_array(self, spec):
        return np.array(list(itertools.permutations(range(spec.value_count))), dtype=np.int64)

    def transition_tables(self, spec):
        V, sigma = spec.value_count, spec.alphabet_size
        arrays = self._param_array(spec)
        index = np.arange(V)[:, None] ^ np.arange(sigma)[None, :]
        return arrays[:, index].astype(value_dtype(V))


class GeneralizedPearsonConstruction(PearsonConstruction):
    """F(y, c) = A[y xor c] with A an arbitrary map on 0..2^L-1."""

    name = "generalized-pearson"

    def param_count(self, spec):
        return spec.value_count ** spec.value_count

    def params(self, spec):
        for table in itertools.product(range(spec.value_count), repeat=spec.value_count):
            yield HashParams(table=table)

    def sample_params(self, spec, rng):
        return HashParams(table=tuple(rng.randrange(spec.value_count) for _ in range(spec.value_count)))

    def _param_array(self, spec):
        V = spec.value_count
        return _digit_array(self.param_count(spec), V, V, np.int64)


class DivisionConstruction(Construction):
    """F(y, c) = y x^L + c mod p(x), p(x) drawn among the irreducibles of degree L."""

    name = "division"

    def _polys(self, spec):
        if spec.fixed_poly is not None:
            return (spec.fixed_poly,)
        return irreducible_polys(spec.word_bits)

    def param_count(self, spec):
        return len(self._polys(spec))

    def params(self, spec):
        for poly in self._polys(spec):
            yield HashParams(poly=poly)

    def sample_params(self, spec, rng):
        if spec.fixed_poly is not None:
            return HashParams(poly=spec.fixed_poly)
        L = spec.word_bits
        while True:
            candidate = (1 << L) | rng.getrandbits(L)
            if is_irreducible(candidate):
                return HashParams(poly=candidate)

    def compress(self, spec, params, y, c, position):
        return poly_mod(clmul(y, 1 << spec.word_bits) ^ c, params.poly)


class ShiftAddConstruction(Construction):
    """Single-instance compression functions on L-bit words; only H_0 varies."""

    def mask(self, spec):
        return (1 << spec.word_bits) - 1


class BernsteinConstruction(ShiftAddConstruction):
    name = "bernstein"

    def compress(self, spec, params, y, c, position):
        l = spec.shift_params[0]
        return (((y << l) + y) ^ c) & self.mask(spec)


class FNV1Construction(ShiftAddConstruction):
    name = "fnv1"

    def params(self, spec):
        yield HashParams(multiplier=spec.fnv_prime)

    def sample_params(self, spec, rng):
        return HashParams(multiplier=spec.fnv_prime)

    def compress(self, spec, params, y, c, position):
        return ((y * spec.fnv_prime) & self.mask(spec)) ^ c


class FNV1aConstruction(FNV1Construction):
    name = "fnv1a"

    def compress(self, spec, params, y, c, position):
        return ((y ^ c) * spec.fnv_prime) & self.mask(spec)


class SAXConstruction(ShiftAddConstruction):
    name = "sax"

    def compress(self, spec, params, y, c, position):
        l, r = spec.shift_params
        return (y ^ ((y << l) + (y >> r) + c)) & self.mask(spec)


class SXXConstruction(ShiftAddConstruction):
    name = "sxx"

    def compress(self, spec, params, y, c, position):
        l, r = spec.shift_params
        return (y ^ ((y << l) ^ (y >> r) ^ c)) & self.mask(spec)


class GccCppConstruction(ShiftAddConstruction):
    name = "gcc-cpp"
    multiplier = 5

    def params(self, spec):
        yield HashParams(multiplier=self.multiplier)

    def sample_params(self, spec, rng):
        return HashParams(multiplier=self.multiplier)

    def compress(self, spec, params, y, c, position):
        return (self.multiplier * y + c) & self.mask(spec)


class JavaStringConstruction(GccCppConstruction):
    name = "java-string"
    multiplier = 31


class PowerOfTwoConstruction(ShiftAddConstruction):
    """F(y, c) = B y + c mod 2^L; B odd unless mult=all."""

    name = "power-of-two"

    def _multipliers(self, spec):
        if spec.odd_multiplier:
            return range(1, spec.value_count, 2)
        return range(spec.value_count)

    def param_count(self, spec):
        return len(self._multipliers(spec))

    def params(self, spec):
        for b in self._multipliers(spec):
            yield HashParams(multiplier=b)

    def sample_params(self, spec, rng):
        b = rng.randrange(spec.value_count)
        if spec.odd_multiplier:
            b |= 1
        return HashParams(multiplier=b)

    def compress(self, spec, params, y, c, position):
        return (params.multiplier * y + c) & self.mask(spec)


CONSTRUCTION_REGISTRY = {
    impl.name: impl
    for impl in (
        ConstantConstruction(),
        MultilinearConstruction(),
        ZobristConstruction(),
        CWPolyConstruction(),
        CWPolyStrongConstruction(),
        TabulatedConstruction(),
        ShiftTabulatedConstruction(),
        PearsonConstruction(),
        GeneralizedPearsonConstruction(),
        DivisionConstruction(),
        BernsteinConstruction(),
        FNV1Construction(),
        FNV1aConstruction(),
        SAXConstruction(),
        SXXConstruction(),
        GccCppConstruction(),
        JavaStringConstruction(),
        PowerOfTwoConstruction(),
    )
}
assert set(CONSTRUCTION_REGISTRY) == set(CONSTRUCTIONS)


# ---------------------------------------------------------------------------
# Building and parsing specs
# ---------------------------------------------------------------------------

def default_fnv_prime(L):
    """Standard FNV prime at 32/64 bits, else the largest odd prime below 2^L (1 at L=1)."""
    if L in FNV_PRIMES:
        return FNV_PRIMES[L]
    if L == 1:
        return 1
    candidate = (1 << L) - 1
    while candidate > 2 and not is_prime(candidate):
        candidate -= 2
    return candidate


def default_shifts(construction, L):
    """Reference shift amounts scaled to the word size, clamped to 1..L-1."""
    l_ref, r_ref = DEFAULT_SHIFTS[construction]
    hi = max(1, L - 1)
    l = min(hi, max(1, round(l_ref * L / REFERENCE_SHIFT_BITS)))
    if r_ref is None:
        return (l,)
    r = min(hi, max(1, round(r_ref * L / REFERENCE_SHIFT_BITS)))
    return (l, r)


def make_family_spec(
    construction,
    L=None,
    sigma=None,
    p=None,
    poly=None,
    l=None,
    r=None,
    init=None,
    max_len=None,
    mult="odd",
    fnv_prime=None,
    algebra=None,
):
    """
    Build and validate a FamilySpec.

    Args:
        construction: one of config.family_presets.CONSTRUCTIONS
        L: word size in bits (implied by p or by algebra when given)
        sigma: alphabet size (default 2^L, or 256 for the reference hashers)
        p: prime modulus for the prime-field constructions
        poly: reduction polynomial bitmask (binary fields) or fixed p(x) for division
        l, r: shift amounts for bernstein / sax / sxx
        init: zero | one | random (or the long policy names)
        max_len: length capacity for multilinear / zobrist
        mult: odd | all multiplier space for power-of-two
        fnv_prime: FNV multiplier
        algebra: an explicit AlgebraSpec (overrides L / p / poly)

    Returns:
        FamilySpec
    """
    if construction not in CONSTRUCTION_REGISTRY:
        raise DomainError(f"unknown construction {construction!r}")
    impl = CONSTRUCTION_REGISTRY[construction]

    if construction in FIXED_WORD_BITS:
        fixed = FIXED_WORD_BITS[construction]
        if L is not None and L != fixed:
            raise DomainError(f"{construction} is defined for L={fixed} only")
        L = fixed

    field_based = construction in ("multilinear", "cwpoly", "cwpoly-strong")
    if algebra is not None:
        L = algebra.word_bits
    elif field_based:
        if p is not None:
            algebra = AlgebraSpec.prime_field(p)
            L = algebra.word_bits
        elif L is not None:
            algebra = AlgebraSpec.binary_field(L, poly)
        else:
            raise DomainError(f"{construction} needs L= or p=")
    else:
        if p is not None:
            raise DomainError(f"{construction} does not take a prime modulus")
        if L is None:
            raise DomainError(f"{construction} needs L=")
        if L < 1:
            raise DomainError(f"L must be >= 1, got {L}")
        if construction == "tabulated":
            algebra = AlgebraSpec.binary_field(L, poly)
        elif construction == "shift-tabulated":
            algebra = AlgebraSpec.binary_ring(L)
        else:
            algebra = AlgebraSpec.mod2l(L)

    if construction == "cwpoly-strong" and not algebra.is_field:
        raise DomainError("cwpoly-strong needs a field")
    if field_based and not algebra.is_field:
        raise DomainError(f"{construction} needs a field, got {algebra.describe()}")

    fixed_poly = None
    if construction == "division" and poly is not None:
        if poly.bit_length() - 1 != L or not is_irreducible(poly):
            raise DomainError(f"{format_poly(poly)} is not an irreducible polynomial of degree {L}")
        fixed_poly = poly

    value_count = algebra.modulus if algebra.kind is AlgebraKind.PRIME_FIELD else 1 << L
    if sigma is None:
        sigma = 256 if construction in BYTE_ALPHABET else value_count

    shift_params = None
    if construction in DEFAULT_SHIFTS:
        defaults = default_shifts(construction, L)
        if construction == "bernstein":
            shift_params = (l if l is not None else defaults[0],)
            if shift_params[0] < 1:
                raise DomainError(f"bernstein needs l >= 1, got {shift_params[0]}")
        else:
            shift_params = (l if l is not None else defaults[0], r if r is not None else defaults[1])
            if not (0 < shift_params[0] < L and 0 < shift_params[1] < L):
                raise DomainError(f"{construction} needs 0 < l, r < L (L={L}), got {shift_params}")
    elif l is not None or r is not None:
        raise DomainError(f"{construction} does not take shift amounts")

    if construction in ("fnv1", "fnv1a"):
        fnv_prime = fnv_prime if fnv_prime is not None else default_fnv_prime(L)
        if fnv_prime % 2 == 0:
            raise DomainError(f"FNV multiplier must be odd, got {fnv_prime}")
    elif fnv_prime is not None:
        raise DomainError(f"{construction} does not take an FNV multiplier")

    if impl.generalized:
        max_len = max_len if max_len is not None else DEFAULT_MAX_LEN
        if max_len < 1:
            raise DomainError(f"max_len must be >= 1, got {max_len}")

    policy = INIT_ALIASES.get(init) if init is not None else get_default_init(construction)
    if policy is None:
        raise DomainError(f"unknown init policy {init!r}")

    if mult not in ("odd", "all"):
        raise DomainError(f"mult must be odd or all, got {mult!r}")

    spec = FamilySpec(
        construction=construction,
        word_bits=L,
        alphabet_size=sigma,
        algebra=algebra,
        shift_params=shift_params,
        fnv_prime=fnv_prime,
        max_len=max_len,
        init_policy=policy,
        odd_multiplier=(mult == "odd"),
        fixed_poly=fixed_poly,
    )
    impl.validate(spec)
    return spec


_GRAMMAR_KEYS = {
    "L": ("L", int),
    "sigma": ("sigma", int),
    "poly": ("poly", parse_poly),
    "p": ("p", int),
    "l": ("l", int),
    "r": ("r", int),
    "init": ("init", str),
    "maxlen": ("max_len", int),
    "mult": ("mult", str),
    "fnvp": ("fnv_prime", lambda text: int(text, 0)),
}


def parse_family_spec(text):
    """
    Parse `<construction>:key=value,...` into a FamilySpec.

    Malformed text raises UsageError with the grammar; well-formed text
    naming an invalid family raises DomainError from make_family_spec.
    """
    text = text.strip()
    construction, _, rest = text.partition(":")
    construction = construction.strip()
    if construction not in CONSTRUCTION_REGISTRY:
        raise UsageError(
            f"unknown construction {construction!r}; expected one of {', '.join(CONSTRUCTIONS)}\n"
            f"family spec grammar: {SPEC_GRAMMAR}"
        )
    kwargs = {}
    for item in filter(None, (part.strip() for part in rest.split(","))):
        key, sep, value = item.partition("=")
        if not sep or key.strip() not in _GRAMMAR_KEYS:
            raise UsageError(f"bad family spec item {item!r}\nfamily spec grammar: {SPEC_GRAMMAR}")
        name, convert = _GRAMMAR_KEYS[key.strip()]
        try:
            kwargs[name] = convert(value.strip())
        except ValueError:
            raise UsageError(f"bad value in {item!r}\nfamily spec grammar: {SPEC_GRAMMAR}") from None
    return make_family_spec(construction, **kwargs)


def render_family_spec(spec):
    """Inverse of parse_family_spec: the canonical spec string."""
    parts = []
    algebra = spec.algebra
    if algebra is not None and algebra.kind is AlgebraKind.PRIME_FIELD:
        parts.append(f"p={algebra.modulus}")
    else:
        parts.append(f"L={spec.word_bits}")
    value_count = spec.value_count
    default_sigma = 256 if spec.construction in BYTE_ALPHABET else value_count
    if spec.alphabet_size != default_sigma:
        parts.append(f"sigma={spec.alphabet_size}")
    if algebra is not None and algebra.kind is AlgebraKind.BINARY_FIELD and spec.construction != "division":
        parts.append(f"poly={format_poly(algebra.reduction_poly)}")
    if spec.fixed_poly is not None:
        parts.append(f"poly={format_poly(spec.fixed_poly)}")
    if spec.shift_params is not None:
        parts.append(f"l={spec.shift_params[0]}")
        if len(spec.shift_params) > 1:
            parts.append(f"r={spec.shift_params[1]}")
    short = {v: k for k, v in INIT_ALIASES.items() if k in ("zero", "one", "random")}
    if spec.init_policy != get_default_init(spec.construction):
        parts.append(f"init={short[spec.init_policy]}")
    if spec.construction_impl.generalized:
        parts.append(f"maxlen={spec.max_len}")
    if spec.construction == "power-of-two" and not spec.odd_multiplier:
        parts.append("mult=all")
    if spec.fnv_prime is not None and spec.fnv_prime != default_fnv_prime(spec.word_bits):
        parts.append(f"fnvp={spec.fnv_prime}")
    return f"{spec.construction}:{','.join(parts)}"


# ---------------------------------------------------------------------------
# Instances
# ---------------------------------------------------------------------------

def family_size(spec):
    """Parameter-space size times number of initial values, without enumerating."""
    impl = spec.construction_impl
    return impl.param_count(spec) * len(impl.init_values(spec))


def enumerate_instances(spec, budget=None):
    """Every instance exactly once, params-major and inits-minor."""
    budget = budget if budget is not None else get_lab_config()["budget"]
    count = family_size(spec)
    if count > budget:
        raise CapacityError(
            f"{render_family_spec(spec)} has {count} instances, over the budget of {budget}",
            count=count,
            budget=budget,
        )
    impl = spec.construction_impl
    inits = impl.init_values(spec)
    for params in impl.params(spec):
        for h0 in inits:
            yield HashInstance(spec, params, h0)


def sample_instance(spec, seed):
    """Deterministic instance for (spec, seed); permutations come from an unbiased shuffle."""
    rng = random.Random(seed)
    impl = spec.construction_impl
    params = impl.sample_params(spec, rng)
    return HashInstance(spec, params, impl.sample_init(spec, rng))


def _check_char(spec, c):
    if not 0 <= c < spec.alphabet_size:
        raise DomainError(f"character {c} outside the alphabet 0..{spec.alphabet_size - 1}")


def compress(instance, state, c, position=1):
    spec = instance.spec
    if not 0 <= state < spec.value_count:
        raise DomainError(f"state {state} is not a hash value of {render_family_spec(spec)}")
    _check_char(spec, c)
    return spec.construction_impl.compress(spec, instance.params, state, c, position)


def check_string(spec, s):
    """Raise if s cannot be hashed by the family."""
    for c in s:
        _check_char(spec, c)
    if spec.construction == "multilinear" and s and s[-1] == 0:
        raise DomainError("multilinear hashing forbids strings ending with the character 0")
    if spec.construction_impl.generalized and len(s) > spec.max_len:
        raise CapacityError(
            f"{spec.construction} is parameterized for strings of length <= {spec.max_len}, got {len(s)}",
            count=len(s),
            budget=spec.max_len,
        )


def hash_string(instance, s):
    """Left fold of the compression function from H_0; the empty string hashes to H_0."""
    spec = instance.spec
    impl = spec.construction_impl
    check_string(spec, s)
    if not impl.iterated:
        return impl.direct_hash(spec, instance.params, s)
    y = instance.init_value
    for position, c in enumerate(s, start=1):
        y = impl.compress(spec, instance.params, y, c, position)
    return y


def unary_value(instance, c, r):
    """
    Hash of the unary string s_{r,c} for any r >= 0, using cycle detection
    on the state sequence (at most V + 1 compressions).
    """
    spec = instance.spec
    impl = spec.construction_impl
    _check_char(spec, c)
    if not impl.iterated or impl.generalized:
        return hash_string(instance, (c,) * r)
    seen = {}
    states = []
    y = instance.init_value
    while y not in seen:
        if len(states) == r:
            return y
        seen[y] = len(states)
        states.append(y)
        y = impl.compress(spec, instance.params, y, c, 1)
    if r < len(states):
        return states[r]
    start = seen[y]
    period = len(states) - start
    return states[start + (r - start) % period]


def java_signed(value):
    """Two's complement rendering of a 32-bit Java hash."""
    value &= 0xFFFFFFFF
    return value - (1 << 32) if value >= 1 << 31 else value


# ---------------------------------------------------------------------------
# Structural checks
# ---------------------------------------------------------------------------

def _states(instance, reachable_states):
    if reachable_states is None:
        return range(instance.spec.value_count)
    return sorted(set(reachable_states))


def is_permuting(instance, reachable_states=None):
    """True iff y -> F(y, c) is injective on the given states for every character c."""
    spec = instance.spec
    if not spec.is_iterated:
        raise UnsupportedError(f"{spec.construction} has no compression function")
    states = _states(instance, reachable_states)
    impl = spec.construction_impl
    for c in range(spec.alphabet_size):
        images = {impl.compress(spec, instance.params, y, c, 1) for y in states}
        if len(images) != len(states):
            return False
    return True


def is_strongly_permuting(instance, reachable_states=None):
    """Permuting, and F(y, c) = F(y, c') implies c = c' at every state."""
    if not is_permuting(instance, reachable_states):
        return False
    spec = instance.spec
    impl = spec.construction_impl
    for y in _states(instance, reachable_states):
        images = {impl.compress(spec, instance.params, y, c, 1) for c in range(spec.alphabet_size)}
        if len(images) != spec.alphabet_size:
            return False
    return True


# ---------------------------------------------------------------------------
# Vectorized view of a whole family
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class InstanceBundle:
    """
    The enumerated family in array form.

    tables: (M, V, sigma) or (M, n, V, sigma) transition arrays, None for the
    scalar path; inits: (I,) initial values. Instance k = (k // I, k % I).
    """

    spec: FamilySpec
    tables: np.ndarray | None
    inits: np.ndarray
    param_count: int

    @property
    def count(self):
        return self.param_count * len(self.inits)


def instance_bundle(spec, budget=None):
    """Transition tables for the whole family when they fit the table limit, else a scalar bundle."""
    config = get_lab_config()
    budget = budget if budget is not None else config["budget"]
    count = family_size(spec)
    if count > budget:
        raise CapacityError(
            f"{render_family_spec(spec)} has {count} instances, over the budget of {budget}",
            count=count,
            budget=budget,
        )
    impl = spec.construction_impl
    M = impl.param_count(spec)
    inits = np.array(impl.init_values(spec), dtype=value_dtype(spec.value_count))
    entries = M * spec.value_count * spec.alphabet_size * (spec.max_len if impl.generalized else 1)
    if not impl.iterated or entries > config["table_entry_limit"] or value_dtype(spec.value_count) is object:
        return InstanceBundle(spec, None, inits, M)
    return InstanceBundle(spec, impl.transition_tables(spec), inits, M)
