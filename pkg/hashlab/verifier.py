"""
Measurement engine: exact enumeration and Monte-Carlo estimation of
uniformity, almost (XOR / strong) universality and k-wise independence.

Every exact operation starts from the value matrix: the hash value of each
string under each enumerated instance, shape (instances, strings). Pair
statistics are integer counts over its columns; probabilities are
fractions.Fraction with the family size as denominator.
"""
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
import math
from statistics import NormalDist

import numpy as np

from config.lab_config import get_lab_config
from hashlab.errors import CapacityError, DomainError, UnsupportedError
from hashlab.families import (
    check_string,
    enumerate_instances,
    family_size,
    instance_bundle,
    render_family_spec,
    sample_instance,
    unary_value,
    value_dtype,
)
from hashlab.strings import StringSet, format_string
from utils.log_utils import get_logger
from utils.progress_utils import notify_complete, notify_progress, notify_started

logger = get_logger("verifier")

DENSE_LIMIT = 1 << 24  # bincount cells per call
NOT_APPLICABLE = "not applicable (singleton family)"


@dataclass
class VerificationReport:
    family: str
    strings: dict
    mode: str
    instance_count: int
    value_count: int
    uniform: object = None
    uniformity_max: object = None
    eps_au: object = None
    eps_axu: object = None
    eps_asu: object = None
    difference_operation: str = "xor"
    pairwise_independent: object = None
    kwise: dict = field(default_factory=dict)
    kwise_collision: dict = field(default_factory=dict)
    witnesses: dict = field(default_factory=dict)
    monte_carlo: dict | None = None
    intervals: dict = field(default_factory=dict)


# ---------------------------------------------------------------------------
# Value matrix
# ---------------------------------------------------------------------------

def _string_list(strings):
    if isinstance(strings, StringSet):
        return list(strings.members)
    return [tuple(s) for s in strings]


def value_matrix(spec, strings, budget=None):
    """
    Exact hash values, shape (instance_count, len(strings)).

    Raises CapacityError when instances x strings exceeds the budget.
    """
    budget = budget if budget is not None else get_lab_config()["budget"]
    strings = _string_list(strings)
    for s in strings:
        check_string(spec, s)
    count = family_size(spec)
    work = count * max(1, len(strings))
    if work > budget:
        raise CapacityError(
            f"exact evaluation of {render_family_spec(spec)} needs {count} instances x "
            f"{len(strings)} strings = {work} evaluations, over the budget of {budget}; "
            "use monte_carlo_report instead",
            count=work,
            budget=budget,
        )
    bundle = instance_bundle(spec, budget)
    if bundle.tables is None:
        return _scalar_values(spec, strings, budget)
    return _table_values(bundle, strings)


def _table_values(bundle, strings):
    tables, inits = bundle.tables, bundle.inits
    M, I = bundle.param_count, len(inits)
    generalized = bundle.spec.is_generalized
    rows = np.arange(M)[:, None]
    cache = {(): np.broadcast_to(inits[None, :], (M, I))}

    def states_of(s):
        k = len(s)
        j = k
        while s[:j] not in cache:
            j -= 1
        state = cache[s[:j]]
        for pos in range(j, k):
            c = s[pos]
            if generalized:
                state = tables[rows, pos, state, c]
            else:
                state = tables[rows, state, c]
            cache[s[: pos + 1]] = state
        return state

    out = np.empty((M * I, len(strings)), dtype=tables.dtype)
    for col, s in enumerate(strings):
        out[:, col] = states_of(s).reshape(-1)
    return out


def _scalar_values(spec, strings, budget):
    impl = spec.construction_impl
    instances = list(enumerate_instances(spec, budget))
    out = np.empty((len(instances), len(strings)), dtype=value_dtype(spec.value_count))
    for row, instance in enumerate(instances):
        if not impl.iterated:
            for col, s in enumerate(strings):
                out[row, col] = impl.direct_hash(spec, instance.params, s)
            continue
        cache = {(): instance.init_value}
        for col, s in enumerate(strings):
            j = len(s)
            while s[:j] not in cache:
                j -= 1
            y = cache[s[:j]]
            for pos in range(j, len(s)):
                y = impl.compress(spec, instance.params, y, s[pos], pos + 1)
                cache[s[: pos + 1]] = y
            out[row, col] = y
    return out


# ---------------------------------------------------------------------------
# Column statistics
# ---------------------------------------------------------------------------

def _as_int(a, value_count=None, k=1):
    """int64 view of a value array; Python ints once value_count**k no longer fits."""
    if a.dtype == object:
        return a
    if value_count is not None and value_count**k >= 1 << 63:
        return a.astype(object)
    return a.astype(np.int64)


def _column_modes(values):
    """Per column of an (N, C) array: the largest multiplicity and the smallest value attaining it."""
    N, C = values.shape
    decode = None
    ints = None
    if values.dtype != object and values.size:
        ints = values.astype(np.int64)
        width = int(ints.max()) + 1
        if ints.min() < 0 or width * C > DENSE_LIMIT:
            ints = None
    if ints is None:
        decode, inverse = np.unique(values, return_inverse=True)
        ints = np.asarray(inverse, dtype=np.int64).reshape(N, C)
        width = len(decode)
    offsets = np.arange(C, dtype=np.int64)[None, :] * width
    if width * C <= DENSE_LIMIT:
        counts = np.bincount((ints + offsets).ravel(), minlength=width * C).reshape(C, width)
        best_value = counts.argmax(axis=1)
        best = counts[np.arange(C), best_value]
    else:
        codes, cnt = np.unique((ints + offsets).ravel(), return_counts=True)
        col = codes // width
        order = np.lexsort((-cnt, col))
        col_sorted = col[order]
        first = np.flatnonzero(np.r_[True, col_sorted[1:] != col_sorted[:-1]])
        best = cnt[order][first]
        best_value = (codes % width)[order][first]
    if decode is not None:
        best_value = decode[best_value]
    return best, best_value


def _row_best(X, j, kind, value_count, modulus):
    """Best pair (j, k > j) for one statistic: (count, j, k, value)."""
    rest = X[:, j + 1 :]
    if rest.shape[1] == 0:
        return None
    col = X[:, [j]]
    if kind == "collision":
        counts = (rest == col).sum(axis=0)
        k = int(counts.argmax())
        return int(counts[k]), j, j + 1 + k, None
    if kind == "difference":
        if modulus:
            diffs = (_as_int(col) - _as_int(rest)) % modulus
        else:
            diffs = col ^ rest
        best, values = _column_modes(diffs)
        k = int(best.argmax())
        return int(best[k]), j, j + 1 + k, int(values[k])
    if kind == "joint":
        codes = _as_int(col, value_count, 2) * value_count + _as_int(rest, value_count, 2)
        best, values = _column_modes(codes)
        k = int(best.argmax())
        return int(best[k]), j, j + 1 + k, divmod(int(values[k]), value_count)
    raise ValueError(kind)


def _scan_pairs(X, kind, value_count, modulus=None, workers=None):
    """Maximum of a pair statistic over all distinct pairs, rows split across threads."""
    S = X.shape[1]
    workers = workers or get_lab_config()["workers"]
    if S < 2:
        return None
    rows = list(range(S - 1))
    if workers > 1:
        chunks = [rows[i::workers] for i in range(workers)]

        def run(chunk):
            return [_row_best(X, j, kind, value_count, modulus) for j in chunk]

        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = [r for part in pool.map(run, chunks) for r in part]
        results.sort(key=lambda r: r[1])
    else:
        results = [_row_best(X, j, kind, value_count, modulus) for j in rows]
    best = None
    for result in results:
        if result is not None and (best is None or result[0] > best[0]):
            best = result
    return best


def _meter_pairs(N, S, budget, what):
    work = N * S * (S - 1) // 2
    if work > budget:
        raise CapacityError(
            f"{what} needs {work} pair evaluations, over the pair budget of {budget}; "
            "use monte_carlo_report instead",
            count=work,
            budget=budget,
        )


def _kwise_independent(X, value_count, k, strings, budget):
    """(verdict, witness) for k-wise independence over every k-subset of columns."""
    N, S = X.shape
    if S < k:
        return True, None
    cells = value_count**k
    subsets = math.comb(S, k)
    if N % cells:
        first = tuple(range(k))
        return False, {
            "strings": [list(strings[i]) for i in first],
            "detail": f"{N} instances cannot spread evenly over {cells} value tuples",
        }
    required = N // cells
    work = 0
    for subset in combinations(range(S), k):
        work += N
        if work > budget:
            raise CapacityError(
                f"{k}-wise independence check over {subsets} subsets exceeds the budget of {budget}",
                count=subsets * N,
                budget=budget,
            )
        codes = _as_int(X[:, subset[0]], value_count, k)
        for idx in subset[1:]:
            codes = codes * value_count + _as_int(X[:, idx], value_count, k)
        best, values = _column_modes(np.asarray(codes).reshape(N, 1))
        if int(best[0]) != required:
            tuple_values = []
            code = int(values[0])
            for _ in range(k):
                code, digit = divmod(code, value_count)
                tuple_values.append(digit)
            return False, {
                "strings": [list(strings[i]) for i in subset],
                "values": tuple_values[::-1],
                "probability": Fraction(int(best[0]), N),
                "required": Fraction(1, cells),
            }
    return True, None


def _kwise_collision(X, k, strings, budget):
    """Max over k-subsets of P(all k hash values equal)."""
    N, S = X.shape
    if S < k:
        return Fraction(0), None
    work = math.comb(S, k) * N
    if work > budget:
        raise CapacityError(
            f"{k}-way collision scan needs {work} evaluations, over the budget of {budget}",
            count=work,
            budget=budget,
        )
    best = (-1, None)

    def extend(prefix, mask, start):
        nonlocal best
        if len(prefix) == k - 1:
            rest = X[:, start:]
            if rest.shape[1] == 0:
                return
            counts = ((rest == X[:, [prefix[0]]]) & mask[:, None]).sum(axis=0)
            idx = int(counts.argmax())
            if counts[idx] > best[0]:
                best = (int(counts[idx]), prefix + (start + idx,))
            return
        for nxt in range(start, S):
            extend(prefix + (nxt,), mask & (X[:, nxt] == X[:, prefix[0]]), nxt + 1)

    for first in range(S):
        extend((first,), np.ones(N, dtype=bool), first + 1)
    count, subset = best
    return Fraction(max(count, 0), N), ([list(strings[i]) for i in subset] if subset else None)


# ---------------------------------------------------------------------------
# Exact reports
# ---------------------------------------------------------------------------

def _difference_modulus(spec):
    return spec.value_count if spec.uses_field_subtraction else None


def exact_report(spec, strings, k_max=2, budget=None, workers=None):
    """
    Exhaustive measurement over every instance of the family.

    Args:
        spec: FamilySpec
        strings: StringSet or list of strings
        k_max: largest k for the k-wise verdicts and k-way collision maxima (2..4)
        budget: instances x strings limit (config default when None)
        workers: threads for the pair scans

    Returns:
        VerificationReport with Fraction probabilities
    """
    if not 2 <= k_max <= 4:
        raise DomainError(f"k_max must be 2, 3 or 4, got {k_max}")
    config = get_lab_config()
    budget = budget if budget is not None else config["budget"]
    pair_budget = max(budget, config["pair_budget"])
    string_set = strings if isinstance(strings, StringSet) else StringSet.of(strings, spec.alphabet_size)
    members = _string_list(strings)
    task = f"exact_report {render_family_spec(spec)}"
    notify_started(task, len(members))

    X = value_matrix(spec, members, budget)
    N, S = X.shape
    V = spec.value_count
    _meter_pairs(N, S, pair_budget, task)
    modulus = _difference_modulus(spec)

    report = VerificationReport(
        family=render_family_spec(spec),
        strings=string_set.describe(),
        mode="exact",
        instance_count=N,
        value_count=V,
        difference_operation="field-subtraction" if modulus else "xor",
    )

    # uniformity
    if S:
        best, values = _column_modes(X)
        j = int(best.argmax())
        report.uniformity_max = Fraction(int(best[j]), N)
        report.witnesses["uniformity"] = {"string": list(members[j]), "value": int(values[j])}
        if N == 1:
            report.uniform = NOT_APPLICABLE
        else:
            report.uniform = bool(N % V == 0 and int(best.max()) == N // V)
    notify_progress(task, 1, 4)

    # pairs
    zero = Fraction(0)
    collision = _scan_pairs(X, "collision", V, workers=workers)
    notify_progress(task, 2, 4)
    difference = _scan_pairs(X, "difference", V, modulus, workers=workers)
    notify_progress(task, 3, 4)
    joint = _scan_pairs(X, "joint", V, workers=workers)
    if collision is None:
        report.eps_au = report.eps_axu = report.eps_asu = zero
        report.pairwise_independent = True
    else:
        count, j, k, _ = collision
        report.eps_au = Fraction(count, N)
        report.witnesses["au"] = {"pair": [list(members[j]), list(members[k])]}
        count, j, k, y = difference
        report.eps_axu = Fraction(count, N)
        report.witnesses["axu"] = {"pair": [list(members[j]), list(members[k])], "difference": y}
        count, j, k, (y1, y2) = joint
        report.eps_asu = V * Fraction(count, N)
        report.witnesses["asu"] = {"pair": [list(members[j]), list(members[k])], "values": [y1, y2]}
        report.pairwise_independent = bool(N % (V * V) == 0 and count == N // (V * V))
        report.witnesses["asu"]["max_joint"] = Fraction(count, N)
    report.kwise[2] = report.pairwise_independent
    report.kwise_collision[2] = report.eps_au

    for k in range(3, k_max + 1):
        if report.kwise[k - 1] is False:
            report.kwise[k] = False
            report.witnesses.setdefault("kwise", {})[k] = {"detail": f"implied by the {k - 1}-wise failure"}
        else:
            verdict, witness = _kwise_independent(X, V, k, members, budget)
            report.kwise[k] = verdict
            if witness:
                report.witnesses.setdefault("kwise", {})[k] = witness
        prob, subset = _kwise_collision(X, k, members, budget)
        report.kwise_collision[k] = prob
        if subset:
            report.witnesses.setdefault("kwise_collision", {})[k] = {"strings": subset}

    notify_complete(task, {"eps_au": str(report.eps_au), "instances": N, "strings": S})
    return report


def collision_prob(spec, s, s2, budget=None):
    """Exact P(h(s) = h(s2)) over the family."""
    s, s2 = tuple(s), tuple(s2)
    if s == s2:
        return Fraction(1)
    X = value_matrix(spec, [s, s2], budget)
    return Fraction(int((X[:, 0] == X[:, 1]).sum()), X.shape[0])


def pairwise_joint(spec, s, s2, masked_bits, budget=None):
    """
    Exact P(low bits of h(s) = y and low bits of h(s2) = y') for every (y, y').

    Returns:
        dict {(y, y'): Fraction}, all 4^masked_bits entries
    """
    if not 0 <= masked_bits <= spec.word_bits:
        raise DomainError(f"masked_bits must be in 0..{spec.word_bits}, got {masked_bits}")
    width = 1 << masked_bits
    if width * width > DENSE_LIMIT:
        raise CapacityError(
            f"a joint table over {masked_bits} bits has {width * width} cells, over {DENSE_LIMIT}",
            count=width * width,
            budget=DENSE_LIMIT,
        )
    s, s2 = tuple(s), tuple(s2)
    X = _as_int(value_matrix(spec, [s, s2], budget))
    N = X.shape[0]
    mask = (1 << masked_bits) - 1
    codes = np.asarray((X[:, 0] & mask) * width + (X[:, 1] & mask), dtype=np.int64)
    counts = np.bincount(codes, minlength=width * width)
    return {divmod(code, width): Fraction(int(counts[code]), N) for code in range(width * width)}


def unary_collision_prob(spec, r, r2, c=0, budget=None):
    """Exact P(h(s_{r,c}) = h(s_{r2,c})) over the family."""
    if r < 0 or r2 < 0:
        raise DomainError("unary lengths must be non-negative")
    if r == r2:
        return Fraction(1)
    if not 0 <= c < spec.alphabet_size:
        raise DomainError(f"character {c} outside the alphabet")
    bundle = instance_bundle(spec, budget)
    if bundle.tables is not None and not spec.is_generalized:
        tables, inits = bundle.tables, bundle.inits
        M = bundle.param_count
        rows = np.arange(M)[:, None]
        state = np.broadcast_to(inits[None, :], (M, len(inits)))
        snapshots = {}
        for step in range(max(r, r2) + 1):
            if step in (r, r2):
                snapshots[step] = state
            if step < max(r, r2):
                state = tables[rows, state, c]
        equal = snapshots[r] == snapshots[r2]
        return Fraction(int(equal.sum()), equal.size)
    hits = 0
    total = 0
    for instance in enumerate_instances(spec, budget):
        hits += unary_value(instance, c, r) == unary_value(instance, c, r2)
        total += 1
    return Fraction(hits, total)


# ---------------------------------------------------------------------------
# Monte-Carlo
# ---------------------------------------------------------------------------

def wilson_interval(successes, trials, confidence=0.95):
    """Wilson score interval for a binomial proportion."""
    if trials < 1:
        raise DomainError("trials must be >= 1")
    z = NormalDist().inv_cdf(0.5 + confidence / 2)
    p = successes / trials
    denom = 1 + z * z / trials
    center = (p + z * z / (2 * trials)) / denom
    half = z / denom * math.sqrt(p * (1 - p) / trials + z * z / (4 * trials * trials))
    lo = 0.0 if successes == 0 else max(0.0, center - half)
    hi = 1.0 if successes == trials else min(1.0, center + half)
    return lo, hi


def _sample_chunk(spec, strings, seed, chunk_index, size):
    rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(chunk_index,)))
    seeds = rng.integers(0, 2**63 - 1, size=size, dtype=np.int64)
    rows = np.empty((size, len(strings)), dtype=value_dtype(spec.value_count))
    for i, instance_seed in enumerate(seeds):
        instance = sample_instance(spec, int(instance_seed))
        for col, s in enumerate(strings):
            rows[i, col] = instance.hash(s)
    return rows


def monte_carlo_report(spec, strings=None, pair=None, trials=10_000, seed=None, workers=None, confidence=0.95):
    """
    Estimate the pair statistics from `trials` sampled instances.

    Chunk i of the trials is drawn from SeedSequence(seed, spawn_key=(i,)), so the
    report depends on (seed, trials) only, never on the number of workers.
    """
    if trials < 1:
        raise DomainError("trials must be >= 1")
    if (strings is None) == (pair is None):
        raise DomainError("give either a string set or a pair")
    config = get_lab_config()
    seed = seed if seed is not None else config["seed"]
    workers = workers or config["workers"]
    chunk = config["mc_chunk"]
    members = [tuple(pair[0]), tuple(pair[1])] if pair is not None else _string_list(strings)
    for s in members:
        check_string(spec, s)

    sizes = [min(chunk, trials - start) for start in range(0, trials, chunk)]
    task = f"monte_carlo {render_family_spec(spec)}"
    notify_started(task, trials)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda a: _sample_chunk(spec, members, seed, *a), enumerate(sizes)))
    else:
        parts = [_sample_chunk(spec, members, seed, i, n) for i, n in enumerate(sizes)]
    X = np.concatenate(parts, axis=0)
    V = spec.value_count
    modulus = _difference_modulus(spec)

    if pair is not None:
        described = {"rule": "pair", "strings": [list(s) for s in members]}
    elif isinstance(strings, StringSet):
        described = strings.describe()
    else:
        described = StringSet.of(members, spec.alphabet_size).describe()
    report = VerificationReport(
        family=render_family_spec(spec),
        strings=described,
        mode="monte-carlo",
        instance_count=trials,
        value_count=V,
        difference_operation="field-subtraction" if modulus else "xor",
        monte_carlo={"trials": trials, "seed": seed, "confidence": confidence},
    )

    if pair is not None:
        a, b = X[:, [0]], X[:, [1]]
        collision = (int((a == b).sum()), 0, 1, None)
        diffs = (_as_int(a) - _as_int(b)) % modulus if modulus else a ^ b
        best, values = _column_modes(diffs)
        difference = (int(best[0]), 0, 1, int(values[0]))
        best, values = _column_modes(_as_int(a, V, 2) * V + _as_int(b, V, 2))
        joint = (int(best[0]), 0, 1, divmod(int(values[0]), V))
    else:
        collision = _scan_pairs(X, "collision", V, workers=workers)
        difference = _scan_pairs(X, "difference", V, modulus, workers=workers)
        joint = _scan_pairs(X, "joint", V, workers=workers)

    if collision is not None:
        for name, result in (("au", collision), ("axu", difference), ("asu", joint)):
            count, j, k, extra = result
            estimate = count / trials
            lo, hi = wilson_interval(count, trials, confidence)
            if name == "asu":
                estimate, lo, hi = V * estimate, V * lo, V * hi
            setattr(report, f"eps_{name}", estimate)
            report.intervals[name] = (lo, hi)
            witness = {"pair": [list(members[j]), list(members[k])]}
            if name == "axu":
                witness["difference"] = extra
            if name == "asu":
                witness["values"] = list(extra)
            report.witnesses[name] = witness
    notify_complete(task, {"eps_au": report.eps_au, "trials": trials})
    return report


# ---------------------------------------------------------------------------
# Signature search for certain collisions
# ---------------------------------------------------------------------------

_MIX = np.uint64(0x9E3779B97F4A7C15)
_MUL = np.uint64(0xBF58476D1CE4E5B9)


def _digest(signatures):
    """64-bit digest per row of an (n, W) unsigned array."""
    data = np.ascontiguousarray(signatures).view(np.uint8).reshape(len(signatures), -1)
    pad = (-data.shape[1]) % 8
    if pad:
        data = np.concatenate([data, np.zeros((len(data), pad), dtype=np.uint8)], axis=1)
    words = data.view(np.uint64)
    h = np.full(len(words), _MIX, dtype=np.uint64)
    with np.errstate(over="ignore"):
        for w in range(words.shape[1]):
            h = (h ^ words[:, w]) * _MUL
            h ^= h >> np.uint64(31)
    return h


class _SignatureSystem:
    """
    Deterministic transition system on whole-family signatures.

    A string's signature is, for every parameter record, the map
    init -> state (packed into one code when V^I is small), so two strings
    collide under every instance iff their signatures are equal.
    """

    def __init__(self, bundle, table_limit):
        tables, inits = bundle.tables, bundle.inits
        self.M = bundle.param_count
        self.I = len(inits)
        self.V = bundle.spec.value_count
        self.sigma = bundle.spec.alphabet_size
        self.tables = tables
        codes = self.V**self.I
        if codes <= 1 << 16 and self.M * codes * self.sigma <= table_limit:
            digits = (np.arange(codes)[:, None] // self.V ** np.arange(self.I)) % self.V
            weights = self.V ** np.arange(self.I)
            dtype = np.uint8 if codes <= 1 << 8 else np.uint16
            # (M, codes, I, sigma) -> (M, codes, sigma)
            self.code_table = (tables[:, digits, :].astype(np.int64) * weights[None, None, :, None]).sum(axis=2)
            self.code_table = self.code_table.astype(dtype)
            root_code = int((inits.astype(np.int64) * weights).sum())
            self.root = np.full((1, self.M), root_code, dtype=dtype)
            self.param_of = np.arange(self.M)[None, :]
            self.packed = True
        else:
            self.code_table = None
            self.root = np.tile(inits, self.M)[None, :]
            self.param_of = np.repeat(np.arange(self.M), self.I)[None, :]
            self.packed = False
        self.width = self.root.shape[1]

    def step(self, parents, c):
        if self.packed:
            return self.code_table[self.param_of, parents, c]
        return self.tables[self.param_of, parents, c]

    def signature(self, s):
        sig = self.root
        for c in s:
            sig = self.step(sig, c)
        return sig[0]


def _string_at(level, index, sigma):
    digits = []
    for _ in range(level):
        index, c = divmod(index, sigma)
        digits.append(c)
    return tuple(reversed(digits))


def find_certain_collision(spec, max_len, budget=None):
    """
    Search strings of length 1..max_len for two distinct strings that collide
    under every instance of the family.

    Strings are explored by length, lexicographically within a length. The
    search stops at the first length where a repeated signature appears and
    returns, among those, the pair (s, s') smallest in that order.

    Returns:
        (s, s') or None when no certain collision exists up to max_len
    """
    if not spec.is_iterated or spec.is_generalized:
        raise UnsupportedError(f"signature search needs a plain iterated family, got {spec.construction}")
    config = get_lab_config()
    budget = budget if budget is not None else config["budget"]
    bundle = instance_bundle(spec, budget)
    if bundle.tables is None:
        raise CapacityError(
            f"{render_family_spec(spec)} is too large for transition tables",
            count=family_size(spec),
            budget=config["table_entry_limit"],
        )
    system = _SignatureSystem(bundle, config["table_entry_limit"])
    sigma = system.sigma
    task = f"certain_collision {render_family_spec(spec)}"
    notify_started(task, max_len)

    frontier = system.root
    digests = []  # per level, in string order
    offsets = []
    total = 0
    for level in range(1, max_len + 1):
        size = len(frontier) * sigma
        keep = level < max_len
        if keep and size * system.width > budget:
            raise CapacityError(
                f"signature frontier at length {level} holds {size * system.width} entries, over the budget of {budget}",
                count=size * system.width,
                budget=budget,
            )
        level_digests = np.empty(size, dtype=np.uint64)
        children = np.empty((size, system.width), dtype=frontier.dtype) if keep else None
        block = max(1, (1 << 22) // max(1, system.width * sigma))
        for start in range(0, len(frontier), block):
            parents = frontier[start : start + block]
            kids = np.stack([system.step(parents, c) for c in range(sigma)], axis=1).reshape(-1, system.width)
            lo = start * sigma
            level_digests[lo : lo + len(kids)] = _digest(kids)
            if keep:
                children[lo : lo + len(kids)] = kids
        offsets.append(total)
        total += size
        digests.append(level_digests)
        notify_progress(task, level, max_len)

        pair = _first_repeat(digests, offsets, sigma, system)
        if pair is not None:
            logger.info(f"certain collision at length {level}: {format_string(pair[0])} / {format_string(pair[1])}")
            notify_complete(task, {"length": level})
            return pair
        frontier = children
    notify_complete(task, {"length": None})
    return None


def _first_repeat(digests, offsets, sigma, system):
    everything = np.concatenate(digests)
    order = np.argsort(everything, kind="stable")
    ordered = everything[order]
    same = np.flatnonzero(ordered[1:] == ordered[:-1])
    if not len(same):
        return None

    def locate(position):
        level = int(np.searchsorted(offsets, position, side="right"))
        return _string_at(level, position - offsets[level - 1], sigma)

    # candidate pairs: first two members of each run of equal digests
    starts = same[np.r_[True, same[1:] != same[:-1] + 1]]
    candidates = sorted((int(order[i]), int(order[i + 1])) for i in starts)
    for first, second in candidates:
        s, s2 = locate(first), locate(second)
        if np.array_equal(system.signature(s), system.signature(s2)):
            return s, s2
        logger.warning(f"digest clash without signature match: {format_string(s)} / {format_string(s2)}")
    return None
