from fractions import Fraction
import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from hashlab.families import make_family_spec
from hashlab.gp_table import (
    GPRow,
    emit_gp_table,
    gp_table_frame,
    level_pair_maxima,
    onehot_matrix,
    round_half_up,
)
from hashlab.verifier import collision_prob

TABLE_ROWS = {1: "0.25", 2: "0.53", 3: "0.72", 4: "0.84", 5: "0.88"}


@pytest.fixture(scope="module")
def exact_rows():
    return emit_gp_table(L=2, n_max=5, certain=False)


def test_round_half_up():
    assert round_half_up(Fraction(1, 8)) == "0.13"
    assert round_half_up(Fraction(5, 6)) == "0.83"
    assert round_half_up(Fraction(1, 200)) == "0.01"
    assert round_half_up(Fraction(1)) == "1.00"
    assert round_half_up(Fraction(0)) == "0.00"
    assert round_half_up(Fraction(2, 3), digits=3) == "0.667"


@given(st.integers(0, 10**6), st.integers(1, 10**6))
def test_round_half_up_is_within_half_a_unit(num, den):
    value = Fraction(num, den)
    rounded = Fraction(round_half_up(value).replace(".", "")) / 100
    assert abs(rounded - value) <= Fraction(1, 200)


def test_onehot_matrix():
    X = np.array([[0, 1], [1, 1]])
    O = onehot_matrix(X, 2)
    assert O.shape == (2, 4)
    assert O.tolist() == [[1, 0, 0, 1], [0, 1, 0, 1]]
    assert (O @ O.T)[0, 1] == 1


def test_level_pair_maxima_matches_brute_force():
    rng = np.random.default_rng(7)
    X = rng.integers(0, 3, size=(9, 7))
    bounds = [(0, 2), (2, 7)]
    maxima, best_pair, top = level_pair_maxima(X, 3, bounds)
    for level, (lo, hi) in enumerate(bounds):
        expected = max(int((X[:, j] == X[:, k]).sum()) for k in range(lo, hi) for j in range(k))
        assert maxima[level] == expected
        j, k = best_pair[level]
        assert j < k and lo <= k < hi
        assert int((X[:, j] == X[:, k]).sum()) == expected
    counts = sorted(
        (int((X[:, j] == X[:, k]).sum()) for j, k in itertools.combinations(range(7), 2)),
        reverse=True,
    )
    assert [count for count, _, _ in top] == counts[: len(top)]


def test_exact_rows_reproduce_the_collision_table(exact_rows):
    assert [row.n for row in exact_rows] == [1, 2, 3, 4, 5]
    assert all(row.mode == "exact" for row in exact_rows)
    assert {row.n: row.display for row in exact_rows} == TABLE_ROWS
    assert exact_rows[0].probability == Fraction(1, 4)
    spec = make_family_spec("generalized-pearson", L=2)
    for row in exact_rows[1:]:
        s, s2 = row.pair
        assert max(len(s), len(s2)) <= row.n
        assert collision_prob(spec, s, s2) == row.probability


def test_rows_never_decrease(exact_rows):
    for earlier, later in zip(exact_rows, exact_rows[1:]):
        assert later.probability >= earlier.probability


def test_single_bit_table_reaches_certainty():
    rows = emit_gp_table(L=1, n_max=3)
    assert [row.probability for row in rows] == [Fraction(1, 2), 1, 1]
    assert all(row.mode == "exact" for row in rows)


def test_lower_bound_rows_past_the_pair_budget():
    rows = emit_gp_table(L=1, n_max=3, pair_budget=100, certain=False)
    assert rows[0].mode == "exact"
    assert [row.mode for row in rows[1:]] == ["lower-bound", "lower-bound"]
    assert rows[1].probability == Fraction(1, 2)
    assert not any(row.certain for row in rows)


def test_certain_search_settles_rows_past_the_pair_budget():
    rows = emit_gp_table(L=1, n_max=3, pair_budget=100, certain=True)
    assert rows[1] == GPRow(2, Fraction(1), "exact", ((0, 0), (1, 1)), certain=True)
    assert rows[2].certain


def test_gp_table_frame(exact_rows):
    frame = gp_table_frame(exact_rows)
    assert list(frame.columns) == ["n", "max_collision", "mode", "probability", "pair"]
    assert frame["max_collision"].tolist() == list(TABLE_ROWS.values())
    assert frame["probability"].iloc[0] == "1/4"


@pytest.mark.slow
def test_long_rows_and_certain_collision():
    rows = emit_gp_table(L=2, n_max=11)
    by_n = {row.n: row for row in rows}
    assert by_n[6].mode == by_n[7].mode == "exact"
    assert by_n[6].display == "0.89"
    assert by_n[7].display == "0.95"
    for n in range(8, 11):
        assert by_n[n].probability >= by_n[n - 1].probability
    assert by_n[11].certain and by_n[11].display == "1.00"
