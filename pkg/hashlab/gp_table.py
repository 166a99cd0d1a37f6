"""
Collision table for Generalized Pearson hashing: for each length bound n,
the largest collision probability over pairs of distinct strings of
length 1..n, taken over the whole enumerated family.

Exact rows come from one blocked matrix product of one-hot encodings
(the count of instances on which two strings agree is the dot product of
their one-hot rows). Rows past the pair budget are lower bounds, unless
the certain-collision search settles them at probability one.
"""
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
import pandas as pd

from config.lab_config import get_lab_config
from hashlab.errors import CapacityError
from hashlab.families import family_size, make_family_spec, render_family_spec
from hashlab.strings import StringSet, format_string
from hashlab.verifier import find_certain_collision, value_matrix
from utils.log_utils import get_logger
from utils.progress_utils import notify_complete, notify_progress, notify_started

logger = get_logger("gp_table")

ONEHOT_BYTES = 1 << 31
BLOCK_BYTES = 1 << 27
TOP_PAIRS = 32


@dataclass
class GPRow:
    n: int
    probability: Fraction
    mode: str  # exact | lower-bound
    pair: tuple | None = None
    certain: bool = False

    @property
    def display(self):
        return round_half_up(self.probability)


def round_half_up(value, digits=2):
    """Decimal rendering of a Fraction rounded half-up, computed in integers."""
    value = Fraction(value)
    scale = 10**digits
    scaled = (2 * value.numerator * scale + value.denominator) // (2 * value.denominator)
    whole, frac = divmod(scaled, scale)
    return f"{whole}.{frac:0{digits}d}"


def _count_dtype(N):
    if N < 1 << 24:
        return np.float32
    if N < 1 << 53:
        return np.float64
    raise CapacityError(f"{N} instances exceed exact floating point counting", count=N, budget=1 << 53)


def onehot_matrix(X, value_count, dtype=np.float32):
    """Rows = strings, columns = (instance, value) cells; 1 where the string hashes to the value."""
    N, S = X.shape
    O = np.zeros((S, N * value_count), dtype=dtype)
    cols = np.arange(N, dtype=np.int64)[None, :] * value_count + X.T.astype(np.int64)
    O[np.arange(S)[:, None], cols] = 1
    return O


def level_pair_maxima(X, value_count, level_bounds, top=TOP_PAIRS, task=None):
    """
    Blocked upper-triangle scan of O O^T.

    Args:
        X: (N, S) value matrix, columns sorted by length
        level_bounds: [(lo, hi)] column range of each length, in length order
        top: number of best pairs to keep

    Returns:
        (maxima, best_pair, top_pairs): per-level max count over pairs whose
        later string lies in that level, the arg-max pair per level, and the
        overall best pairs as (count, j, k)
    """
    N, S = X.shape
    dtype = _count_dtype(N)
    O = onehot_matrix(X, value_count, dtype)
    block = max(1, min(S, BLOCK_BYTES // (4 * max(1, S))))
    maxima = [-1] * len(level_bounds)
    best_pair = [None] * len(level_bounds)
    best = []
    for a in range(0, S, block):
        b = min(S, a + block)
        C = np.rint(O[a:b] @ O[a:].T).astype(np.int32)  # columns a..S-1
        jj = np.arange(a, b)[:, None]
        kk = np.arange(a, S)[None, :]
        C[kk <= jj] = -1
        for level, (lo, hi) in enumerate(level_bounds):
            if hi <= a:
                continue
            sub = C[:, max(lo, a) - a : hi - a]
            if sub.size == 0:
                continue
            flat = int(sub.argmax())
            r, c = divmod(flat, sub.shape[1])
            if sub[r, c] > maxima[level]:
                maxima[level] = int(sub[r, c])
                best_pair[level] = (a + r, max(lo, a) + c)
        flat = C.ravel()
        keep = min(top, flat.size)
        idx = np.argpartition(-flat, keep - 1)[:keep]
        for i in idx:
            if flat[i] >= 0:
                r, c = divmod(int(i), C.shape[1])
                best.append((int(flat[i]), a + r, a + c))
        best.sort(key=lambda t: (-t[0], t[1], t[2]))
        del best[top:]
        if task:
            notify_progress(task, b, S)
    return maxima, best_pair, best


def _exact_rows(spec, n_exact, budget):
    strings = StringSet.for_family(spec, n_exact)
    members = strings.members
    X = value_matrix(spec, members, budget)
    N = X.shape[0]
    sizes = strings.prefix_sizes()
    bounds = [(sizes[n - 1], sizes[n]) for n in range(1, n_exact + 1)]
    task = f"gp_table exact rows 1..{n_exact}"
    notify_started(task, len(members))
    maxima, best_pair, top = level_pair_maxima(X, spec.value_count, bounds, task=task)
    notify_complete(task)
    rows = []
    running, running_pair = 0, None
    for n in range(1, n_exact + 1):
        if maxima[n - 1] > running:
            running, running_pair = maxima[n - 1], best_pair[n - 1]
        pair = (members[running_pair[0]], members[running_pair[1]]) if running_pair else None
        rows.append(GPRow(n, Fraction(max(running, 0), N), "exact", pair))
    top_pairs = [(Fraction(count, N), members[j], members[k]) for count, j, k in top]
    return rows, top_pairs


def _suffixes(sigma, max_len):
    out = [()]
    frontier = [()]
    for _ in range(max_len):
        frontier = [w + (c,) for w in frontier for c in range(sigma)]
        out.extend(frontier)
    return out


def _lower_bound(spec, n, seeds, budget):
    """Best collision probability among seed pairs extended by a common suffix, lengths <= n."""
    candidates = []
    for _, s, s2 in seeds:
        room = n - max(len(s), len(s2))
        if room < 0:
            continue
        for w in _suffixes(spec.alphabet_size, room):
            candidates.append((s + w, s2 + w))
    if not candidates:
        return Fraction(0), None
    strings = sorted({s for pair in candidates for s in pair}, key=lambda s: (len(s), s))
    index = {s: i for i, s in enumerate(strings)}
    X = value_matrix(spec, strings, budget)
    N = X.shape[0]
    best, best_pair = -1, None
    for s, s2 in candidates:
        count = int((X[:, index[s]] == X[:, index[s2]]).sum())
        if count > best:
            best, best_pair = count, (s, s2)
    return Fraction(best, N), best_pair


def emit_gp_table(L=2, n_max=7, budget=None, pair_budget=None, sigma=None, certain=True):
    """
    Rows n = 1..n_max of the Generalized Pearson collision table.

    Args:
        L: word size (the family has 2^(L 2^L) * 2^L instances)
        n_max: largest string length
        budget: instances x strings budget
        pair_budget: instances x string pairs allowed for exact rows
        sigma: alphabet size (default 2^L)
        certain: run the certain-collision search for rows past the exact ones

    Returns:
        list of GPRow
    """
    config = get_lab_config()
    budget = budget if budget is not None else config["budget"]
    pair_budget = pair_budget if pair_budget is not None else config["pair_budget"]
    spec = make_family_spec("generalized-pearson", L=L, sigma=sigma)
    N = family_size(spec)
    V = spec.value_count

    n_exact = 0
    for n in range(1, n_max + 1):
        S = StringSet.for_family(spec, n).count()
        if N * S * S // 2 > pair_budget or S * N * V * 4 > ONEHOT_BYTES:
            break
        n_exact = n
    logger.info(f"{render_family_spec(spec)}: exact rows up to n={n_exact}, requested n={n_max}")

    rows, seeds = _exact_rows(spec, n_exact, budget) if n_exact else ([], [])
    if n_exact == n_max:
        return rows

    certain_pair = None
    if certain:
        certain_pair = find_certain_collision(spec, n_max, budget)
    certain_len = max(len(certain_pair[0]), len(certain_pair[1])) if certain_pair else None

    previous = rows[-1].probability if rows else Fraction(0)
    previous_pair = rows[-1].pair if rows else None
    for n in range(n_exact + 1, n_max + 1):
        if certain_len is not None and n >= certain_len:
            rows.append(GPRow(n, Fraction(1), "exact", certain_pair, certain=True))
            continue
        bound, pair = _lower_bound(spec, n, seeds, budget)
        if bound > previous:
            previous, previous_pair = bound, pair
        rows.append(GPRow(n, previous, "lower-bound", previous_pair))
    return rows


def gp_table_frame(rows):
    """Table layout: n, rounded maximum, mode, exact fraction and the attaining pair."""
    return pd.DataFrame(
        {
            "n": [row.n for row in rows],
            "max_collision": [row.display for row in rows],
            "mode": [row.mode for row in rows],
            "probability": [f"{row.probability.numerator}/{row.probability.denominator}" for row in rows],
            "pair": [
                f"{format_string(row.pair[0])} | {format_string(row.pair[1])}" if row.pair else "" for row in rows
            ],
        }
    )
