"""
Forced-collision and extremal witnesses.

Each constructor builds its object, then checks the claim through the
verifier's enumeration and attaches the outcome as a Certificate. A
failed check raises CertificateError.

Unary hash values are relabelled 0..2^L-1 (the cycle construction is
usually written on 1..2^L).
"""
from dataclasses import dataclass, field
from fractions import Fraction
import math
import random

import numpy as np

from config.lab_config import get_lab_config
from hashlab.algebra import AlgebraSpec, lcm_upto
from hashlab.errors import CertificateError, DomainError, UnsupportedError
from hashlab.families import (
    HashInstance,
    HashParams,
    make_family_spec,
    render_family_spec,
    sample_instance,
    unary_value,
)
from hashlab.verifier import collision_prob, unary_collision_prob, value_matrix
from utils.log_utils import get_logger

logger = get_logger("witnesses")

EXHAUSTIVE_BINOMIAL_L = 8
EXHAUSTIVE_UNARY_L = 2
SAMPLED_CHECKS = 256


@dataclass
class Certificate:
    mode: str  # exhaustive | sampled
    passed: bool
    measured: object = None
    detail: str = ""


@dataclass
class Witness:
    kind: str
    strings: tuple = ()
    claim: object = None
    parameters: dict = field(default_factory=dict)
    certificate: Certificate | None = None
    lengths: tuple = ()
    values: dict = field(default_factory=dict)


def _certify(witness, certificate):
    witness.certificate = certificate
    if not certificate.passed:
        raise CertificateError(f"{witness.kind} witness failed its check: {certificate.detail}")
    logger.info(f"{witness.kind}: certificate {certificate.mode} passed ({certificate.detail})")
    return witness


# ---------------------------------------------------------------------------
# CWPoly tightness
# ---------------------------------------------------------------------------

def tau_polynomial(n, field):
    """Coefficients of prod_{i<n} (t - i), highest degree first, over `field`."""
    coeffs = [1]
    for i in range(n):
        root = field.neg_int(i)
        # multiply by (t + root)
        shifted = coeffs + [0]
        scaled = [0] + [field.mul_int(root, a) for a in coeffs]
        coeffs = [field.add_int(a, b) for a, b in zip(shifted, scaled)]
    return coeffs


def tau_collision_pair(n, field):
    """
    Two strings of length n+1 colliding under CWPoly (init 1) with probability n/p.

    The pair is the zero string and the negated coefficients of tau(t); equal
    lengths cancel the initial-value term, leaving the difference tau(t),
    whose roots are exactly 0..n-1.
    """
    p = field.size
    if not field.is_field:
        raise UnsupportedError(f"{field.describe()} is not a field")
    if not 1 <= n <= p:
        raise DomainError(f"tau pair needs 1 <= n <= p={p}, got n={n}")
    coeffs = tau_polynomial(n, field)
    first = tuple([0] * (n + 1))
    second = tuple(field.neg_int(a) for a in coeffs)
    claim = Fraction(n, p)
    witness = Witness(
        kind="tau-pair",
        strings=(first, second),
        claim=claim,
        parameters={"n": n, "field": field.describe(), "family": "cwpoly init=one"},
    )
    spec = make_family_spec("cwpoly", algebra=field, sigma=p, init="one")
    measured = collision_prob(spec, first, second)
    return _certify(
        witness,
        Certificate("exhaustive", measured == claim, measured, f"enumerated all {p} values of t"),
    )


# ---------------------------------------------------------------------------
# PowerOfTwo
# ---------------------------------------------------------------------------

def binomial_collision_pair(L, seed=None):
    """
    (C(L,0), ..., C(L,L)) mod 2^L against L+1 zeros: the difference is
    (B+1)^L, divisible by 2^L for every odd B, whatever H_0.
    """
    if L < 1:
        raise DomainError(f"L must be >= 1, got {L}")
    mask = (1 << L) - 1
    first = tuple(math.comb(L, k) & mask for k in range(L + 1))
    second = tuple([0] * (L + 1))
    witness = Witness(
        kind="binomial-pair",
        strings=(first, second),
        claim=Fraction(1),
        parameters={"L": L, "family": "power-of-two mult=odd"},
    )
    spec = make_family_spec("power-of-two", L=L)
    if L <= EXHAUSTIVE_BINOMIAL_L:
        measured = collision_prob(spec, first, second)
        return _certify(
            witness,
            Certificate(
                "exhaustive",
                measured == 1,
                measured,
                f"all {1 << (L - 1)} odd multipliers x {1 << L} initial values",
            ),
        )
    seed = seed if seed is not None else get_lab_config()["seed"]
    rng = random.Random(seed)
    hits = 0
    for _ in range(SAMPLED_CHECKS):
        instance = sample_instance(spec, rng.getrandbits(63))
        hits += instance.hash(first) == instance.hash(second)
    measured = Fraction(hits, SAMPLED_CHECKS)
    return _certify(
        witness,
        Certificate("sampled", hits == SAMPLED_CHECKS, measured, f"{SAMPLED_CHECKS} sampled odd B and H_0"),
    )


# ---------------------------------------------------------------------------
# Unary strings
# ---------------------------------------------------------------------------

def unary_forced_collision(L, c=0, seed=None):
    """
    Lengths 2^L and 2^L + LCM(1..2^L): every iterated hash on L bits sends
    both unary strings to the same value (the tail has length < 2^L and the
    period divides the LCM).
    """
    if L < 1:
        raise DomainError(f"L must be >= 1, got {L}")
    V = 1 << L
    r, r2 = V, V + lcm_upto(V)
    witness = Witness(
        kind="unary-forced",
        claim=Fraction(1),
        parameters={"L": L, "character": c},
        lengths=(r, r2),
    )
    # any compression on a unary alphabet is y -> A[y]: generalized Pearson with sigma=1
    spec = make_family_spec("generalized-pearson", L=L, sigma=1)
    if L <= EXHAUSTIVE_UNARY_L:
        measured = unary_collision_prob(spec, r, r2, 0)
        return _certify(
            witness,
            Certificate(
                "exhaustive",
                measured == 1,
                measured,
                f"all {V ** V} unary compression functions x {V} initial values",
            ),
        )
    seed = seed if seed is not None else get_lab_config()["seed"]
    rng = random.Random(seed)
    hits = 0
    for _ in range(SAMPLED_CHECKS):
        instance = sample_instance(spec, rng.getrandbits(63))
        hits += unary_value(instance, 0, r) == unary_value(instance, 0, r2)
    measured = Fraction(hits, SAMPLED_CHECKS)
    return _certify(
        witness,
        Certificate("sampled", hits == SAMPLED_CHECKS, measured, f"{SAMPLED_CHECKS} sampled compression functions"),
    )


@dataclass
class HTFamily:
    """The 2^L unary functions h_T, T = 1..2^L, that separate unary strings."""

    L: int
    wrap: str = "published"
    witness: Witness | None = None

    @property
    def size(self):
        return 1 << self.L

    def value(self, T, r):
        V = self.size
        if not 1 <= T <= V:
            raise DomainError(f"T must be in 1..{V}, got {T}")
        if r < V:
            return r
        if self.wrap == "published":
            return V - T - ((r - V) % T)
        return V - T + ((r - V) % T)

    def values(self, T, max_r):
        return [self.value(T, r) for r in range(max_r + 1)]

    def separation_limit(self):
        return self.size + lcm_upto(self.size) - 2

    def value_rows(self, max_r):
        """(max_r + 1, 2^L) array: row r holds h_T(r) for T = 1..2^L."""
        V = self.size
        r = np.arange(max_r + 1, dtype=np.int64)[:, None]
        T = np.arange(1, V + 1, dtype=np.int64)[None, :]
        wrapped = (r - V) % T
        tail = V - T - wrapped if self.wrap == "published" else V - T + wrapped
        return np.where(r < V, np.broadcast_to(r, tail.shape), tail)


def reconstruct_compression(values):
    """
    Rebuild F(y) from a unary value sequence h(s_0), h(s_1), ... by F(h(s_r)) = h(s_{r+1}).

    Returns:
        dict y -> F(y), or None when two equal values have different successors
    """
    mapping = {}
    for current, following in zip(values, values[1:]):
        if mapping.setdefault(current, following) != following:
            return None
    return mapping


def hT_family(L, wrap="published", seed=None):
    """
    The separating family of unary functions.

    wrap="published": h_T(r) = 2^L - T - ((r - 2^L) mod T) for r >= 2^L.
    wrap="counter": h_T(r) = 2^L - T + ((r - 2^L) mod T), a cyclic counter that is
    realizable as an iterated hash.
    """
    if not 1 <= L <= 16:
        raise DomainError(f"hT family needs 1 <= L <= 16, got {L}")
    if wrap not in ("published", "counter"):
        raise DomainError(f"wrap must be published or counter, got {wrap!r}")
    family = HTFamily(L, wrap)
    limit = family.separation_limit()
    witness = Witness(
        kind="hT-family",
        claim="separates all unary pairs",
        parameters={"L": L, "wrap": wrap, "functions": family.size, "max_length": limit},
        lengths=(0, limit),
    )
    config = get_lab_config()
    V = family.size
    if (limit + 1) * V <= config["table_entry_limit"]:
        rows = family.value_rows(limit)
        distinct = len(np.unique(rows, axis=0))
        measured = Fraction(distinct, limit + 1)
        certificate = Certificate(
            "exhaustive", distinct == limit + 1, measured, f"all unary lengths 0..{limit} have distinct value rows"
        )
    else:
        seed = seed if seed is not None else config["seed"]
        rng = random.Random(seed)
        separated = 0
        for _ in range(SAMPLED_CHECKS):
            r, r2 = rng.sample(range(limit + 1), 2) if limit < 1 << 62 else (rng.randrange(limit), rng.randrange(limit))
            separated += r == r2 or any(family.value(T, r) != family.value(T, r2) for T in range(1, V + 1))
        measured = Fraction(separated, SAMPLED_CHECKS)
        certificate = Certificate("sampled", separated == SAMPLED_CHECKS, measured, f"{SAMPLED_CHECKS} sampled length pairs")
    if wrap == "counter":
        realizable = all(
            reconstruct_compression(family.values(T, min(limit, 4 * V))) is not None for T in range(1, V + 1)
        )
        certificate.detail += "; every h_T is an iterated hash" if realizable else "; not realizable"
        certificate.passed = certificate.passed and realizable
    family.witness = _certify(witness, certificate)
    return family


def perfect_unary_hash(L):
    """
    Unary hash with no collision among lengths 1..2^L: F(y, 0) = y + 1 mod 2^L
    (a single 2^L-cycle) from H_0 = 0, so h(s_r) = r mod 2^L.
    """
    if not 1 <= L <= 16:
        raise DomainError(f"perfect unary hash needs 1 <= L <= 16, got {L}")
    V = 1 << L
    spec = make_family_spec("generalized-pearson", L=L, sigma=1)
    instance = HashInstance(spec, HashParams(table=tuple((k + 1) % V for k in range(V))), 0)
    values = []
    y = instance.init_value
    for _ in range(V):
        y = instance.compress(y, 0)
        values.append(y)
    distinct = len(set(values))
    if distinct != V:
        raise CertificateError(f"perfect unary hash repeats a value among lengths 1..{V}")
    logger.info(f"perfect unary hash L={L}: lengths 1..{V} map to {distinct} distinct values")
    return instance


# ---------------------------------------------------------------------------
# Independence breaks
# ---------------------------------------------------------------------------

def threewise_break(spec, budget=None):
    """
    First (a, b, y) with P(h(a)=y, h(ab)=y) > 0: then F(y, b) = y on those
    instances, so the same event forces h(abb) = y and the two probabilities
    are equal, which 3-wise independence forbids.
    """
    if not spec.is_iterated or spec.is_generalized:
        raise UnsupportedError(f"{spec.construction} is not a plain iterated family")
    sigma, V = spec.alphabet_size, spec.value_count
    strings = []
    for a in range(sigma):
        for b in range(sigma):
            strings.extend([(a,), (a, b), (a, b, b)])
    unique = sorted(set(strings), key=lambda s: (len(s), s))
    index = {s: i for i, s in enumerate(unique)}
    X = value_matrix(spec, unique, budget)
    N = X.shape[0]
    for a in range(sigma):
        for b in range(sigma):
            ha, hab, habb = X[:, index[(a,)]], X[:, index[(a, b)]], X[:, index[(a, b, b)]]
            for y in np.unique(ha[ha == hab]).tolist():
                both = (ha == y) & (hab == y)
                left = int(both.sum())
                right = int((both & (habb == y)).sum())
                witness = Witness(
                    kind="threewise-break",
                    strings=((a,), (a, b), (a, b, b)),
                    claim=Fraction(left, N),
                    parameters={"family": render_family_spec(spec), "a": a, "b": b, "y": y},
                    values={"left": Fraction(left, N), "right": Fraction(right, N), "required": Fraction(1, V**3)},
                )
                return _certify(
                    witness,
                    Certificate(
                        "exhaustive",
                        left == right,
                        Fraction(right, N),
                        f"P(h(a)=y, h(ab)=y) = P(h(a)=y, h(ab)=y, h(abb)=y) = {left}/{N} over {N} instances",
                    ),
                )
    witness = Witness(
        kind="threewise-break",
        claim="absent",
        parameters={"family": render_family_spec(spec)},
    )
    witness.certificate = Certificate("exhaustive", True, Fraction(0), "no (a, b, y) with a non-zero left side")
    return witness


def fourwise_break(spec, budget=None):
    """
    Zobrist strings s=0, s'=1, s0, s'0: once h(s) = h(s') the extensions agree,
    so P(h(s)=h(s')=y, h(s0)=z, h(s'0)=z') = 0 for z != z'.
    """
    if spec.construction != "zobrist":
        raise DomainError(f"fourwise_break takes a zobrist family, got {spec.construction}")
    if spec.alphabet_size < 2 or spec.max_len < 2:
        raise DomainError("fourwise_break needs sigma >= 2 and maxlen >= 2")
    V = spec.value_count
    strings = ((0,), (1,), (0, 0), (1, 0))
    X = value_matrix(spec, strings, budget)
    N = X.shape[0]
    y, z, z2 = 0, 0, 1 % V
    base = (X[:, 0] == y) & (X[:, 1] == y)
    split = int((base & (X[:, 2] == z) & (X[:, 3] == z2)).sum())
    joined = int((base & (X[:, 2] == z) & (X[:, 3] == z)).sum())
    witness = Witness(
        kind="fourwise-break",
        strings=strings,
        claim=Fraction(0),
        parameters={"family": render_family_spec(spec), "y": y, "z": z, "z_prime": z2},
        values={
            "probability": Fraction(split, N),
            "required": Fraction(1, V**4),
            "equal_extension_probability": Fraction(joined, N),
        },
    )
    return _certify(
        witness,
        Certificate(
            "exhaustive",
            split == 0 and joined > 0,
            Fraction(split, N),
            f"z != z' never occurs, z = z' occurs on {joined}/{N} instances",
        ),
    )


def perfect_unary_witness(L):
    """perfect_unary_hash wrapped as a Witness: distinct values on lengths 1..2^L, wrap at 2^L."""
    instance = perfect_unary_hash(L)
    V = 1 << L
    values = [unary_value(instance, 0, r) for r in range(1, V + 1)]
    wraps = unary_value(instance, 0, 1) == unary_value(instance, 0, 1 + V)
    witness = Witness(
        kind="perfect-unary",
        claim="no collision among unary lengths 1..2^L",
        parameters={"L": L, "table": "A[k] = k + 1 mod 2^L", "init": 0},
        lengths=(1, V),
    )
    return _certify(
        witness,
        Certificate(
            "exhaustive",
            len(set(values)) == V and wraps,
            Fraction(len(set(values)), V),
            f"{V} distinct values; lengths r and r + {V} collide",
        ),
    )


WITNESS_KINDS = {
    "tau-pair": tau_collision_pair,
    "binomial-pair": binomial_collision_pair,
    "unary-forced": unary_forced_collision,
    "hT-family": lambda L, wrap="published": hT_family(L, wrap).witness,
    "perfect-unary": perfect_unary_witness,
    "threewise-break": threewise_break,
    "fourwise-break": fourwise_break,
}


def field_for(p=None, L=None):
    """Prime field F_p, or GF(2^L) with the default reduction polynomial."""
    if p is not None:
        return AlgebraSpec.prime_field(p)
    if L is not None:
        return AlgebraSpec.binary_field(L)
    raise DomainError("give p= or L=")
