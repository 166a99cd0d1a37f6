"""
Compression throughput on the reference corpus.

The only non-deterministic output of the lab: timings vary from run to run,
the corpus and the sampled instances do not.
"""
import time

import pandas as pd

from config.family_presets import BENCH_FAMILIES, BENCH_WORD_BITS, FIXED_WORD_BITS, REFERENCE_CORPUS
from config.lab_config import get_lab_config
from hashlab.errors import DomainError
from hashlab.families import make_family_spec, render_family_spec, sample_instance
from utils.log_utils import get_logger

logger = get_logger("bench")

DEFAULT_ROUNDS = 200


def corpus_strings(corpus=REFERENCE_CORPUS):
    """Corpus text as byte tuples."""
    return [tuple(text.encode("utf-8")) for text in corpus]


def bench_family(construction, L, rounds=DEFAULT_ROUNDS, seed=None):
    """
    Time `rounds` passes of one sampled instance over the corpus.

    Returns:
        dict with family, L, compressions, seconds, compressions_per_second
    """
    if rounds < 1:
        raise DomainError(f"rounds must be >= 1, got {rounds}")
    seed = seed if seed is not None else get_lab_config()["seed"]
    spec = make_family_spec(construction, L=L, sigma=256)
    instance = sample_instance(spec, seed)
    strings = corpus_strings()
    per_round = sum(len(s) for s in strings)

    start = time.perf_counter()
    for _ in range(rounds):
        for s in strings:
            instance.hash(s)
    seconds = time.perf_counter() - start

    compressions = per_round * rounds
    rate = compressions / seconds if seconds > 0 else float("inf")
    logger.debug(f"{render_family_spec(spec)}: {rate:.0f} compressions/s")
    return {
        "family": construction,
        "L": L,
        "compressions": compressions,
        "seconds": seconds,
        "compressions_per_second": rate,
    }


def run_bench(families=BENCH_FAMILIES, word_bits=BENCH_WORD_BITS, rounds=DEFAULT_ROUNDS, seed=None):
    """Benchmark table, one row per (family, L); fixed-width hashers run at their own L once."""
    rows = []
    for construction in families:
        sizes = (FIXED_WORD_BITS[construction],) if construction in FIXED_WORD_BITS else word_bits
        for L in sizes:
            rows.append(bench_family(construction, L, rounds, seed))
    logger.info(f"bench: {len(rows)} families timed, {rounds} rounds over {len(REFERENCE_CORPUS)} strings")
    return pd.DataFrame(rows)
