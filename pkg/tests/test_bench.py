import pytest

from hashlab.bench import bench_family, corpus_strings, run_bench
from hashlab.errors import DomainError


def test_corpus_strings_are_bytes():
    strings = corpus_strings()
    assert strings[0] == ()
    assert strings[2] == (122,)
    assert all(0 <= c < 256 for s in strings for c in s)


def test_bench_family_counts_compressions():
    row = bench_family("fnv1a", 32, rounds=3, seed=1)
    per_round = sum(len(s) for s in corpus_strings())
    assert row["family"] == "fnv1a"
    assert row["compressions"] == 3 * per_round
    assert row["compressions_per_second"] > 0
    with pytest.raises(DomainError):
        bench_family("fnv1a", 32, rounds=0)


def test_run_bench_table():
    frame = run_bench(families=("bernstein", "gcc-cpp"), word_bits=(16, 32), rounds=1, seed=1)
    assert list(frame.columns) == ["family", "L", "compressions", "seconds", "compressions_per_second"]
    assert list(zip(frame["family"], frame["L"])) == [("bernstein", 16), ("bernstein", 32), ("gcc-cpp", 32)]
