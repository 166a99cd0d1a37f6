from fractions import Fraction

import pytest

from hashlab.algebra import lcm_upto
from hashlab.errors import DomainError, UnsupportedError
from hashlab.families import make_family_spec, parse_family_spec, unary_value
from hashlab.verifier import collision_prob, unary_collision_prob
from hashlab.witnesses import (
    HTFamily,
    WITNESS_KINDS,
    binomial_collision_pair,
    field_for,
    fourwise_break,
    hT_family,
    perfect_unary_hash,
    perfect_unary_witness,
    reconstruct_compression,
    tau_collision_pair,
    tau_polynomial,
    threewise_break,
    unary_forced_collision,
)


# ---------------------------------------------------------------------------
# CWPoly tightness
# ---------------------------------------------------------------------------

def test_tau_polynomial_over_f3():
    assert tau_polynomial(3, field_for(p=3)) == [1, 0, 2, 0]


def test_tau_pair_examples():
    witness = tau_collision_pair(3, field_for(p=3))
    assert witness.strings == ((0, 0, 0, 0), (2, 0, 1, 0))
    assert witness.claim == 1
    witness = tau_collision_pair(2, field_for(L=2))
    assert witness.strings == ((0, 0, 0), (1, 1, 0))
    assert witness.certificate.measured == Fraction(2, 4)


@pytest.mark.parametrize(
    "field",
    [field_for(p=2), field_for(p=3), field_for(L=2), field_for(p=5), field_for(p=7), field_for(L=3)],
    ids=lambda f: f.describe(),
)
def test_tau_pair_probability_is_n_over_p(field):
    p = field.size
    spec = make_family_spec("cwpoly", algebra=field, sigma=p, init="one")
    for n in range(1, p + 1):
        witness = tau_collision_pair(n, field)
        assert witness.certificate.mode == "exhaustive"
        assert witness.certificate.passed
        assert collision_prob(spec, *witness.strings) == Fraction(n, p)


def test_tau_pair_domain():
    with pytest.raises(DomainError):
        tau_collision_pair(6, field_for(p=5))
    with pytest.raises(DomainError):
        field_for()


# ---------------------------------------------------------------------------
# PowerOfTwo
# ---------------------------------------------------------------------------

def test_binomial_pair_examples():
    assert binomial_collision_pair(1).strings == ((1, 1), (0, 0))
    assert binomial_collision_pair(2).strings == ((1, 2, 1), (0, 0, 0))
    assert binomial_collision_pair(8).strings[0] == (1, 8, 28, 56, 70, 56, 28, 8, 1)


@pytest.mark.parametrize("L", range(1, 9))
def test_binomial_pair_collides_for_every_odd_multiplier(L):
    witness = binomial_collision_pair(L)
    assert witness.certificate.mode == "exhaustive"
    assert witness.certificate.measured == 1
    spec = make_family_spec("power-of-two", L=L)
    assert collision_prob(spec, *witness.strings) == 1


def test_binomial_pair_sampled_beyond_exhaustive_range():
    witness = binomial_collision_pair(12, seed=4)
    assert witness.certificate.mode == "sampled"
    assert witness.certificate.passed


# ---------------------------------------------------------------------------
# Unary strings
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("L, lengths", [(1, (2, 4)), (2, (4, 16))])
def test_unary_forced_collision(L, lengths):
    witness = unary_forced_collision(L)
    assert witness.lengths == lengths
    assert witness.certificate.mode == "exhaustive"
    spec = make_family_spec("generalized-pearson", L=L, sigma=1)
    assert unary_collision_prob(spec, *lengths) == 1


def test_unary_forced_collision_holds_for_any_alphabet():
    spec = make_family_spec("generalized-pearson", L=2, sigma=2)
    assert unary_collision_prob(spec, 4, 16, c=1) == 1
    assert unary_collision_prob(spec, 2, 14, c=1) < 1


def test_unary_forced_collision_sampled():
    witness = unary_forced_collision(3, seed=9)
    assert witness.lengths == (8, 8 + 840)
    assert witness.certificate.mode == "sampled"
    assert witness.certificate.passed


def test_hT_values():
    family = HTFamily(2)
    assert [family.value(2, r) for r in (1, 4, 5, 6)] == [1, 2, 1, 2]
    assert {family.value(1, r) for r in range(4, 20)} == {3}
    assert family.separation_limit() == 14
    rows = family.value_rows(14)
    assert rows.shape == (15, 4)
    assert rows[5].tolist() == [family.value(T, 5) for T in range(1, 5)]
    with pytest.raises(DomainError):
        family.value(5, 1)


@pytest.mark.parametrize("wrap", ["published", "counter"])
@pytest.mark.parametrize("L", [1, 2, 3])
def test_hT_family_separates_unary_lengths(L, wrap):
    family = hT_family(L, wrap)
    witness = family.witness
    assert witness.parameters["max_length"] == (1 << L) + lcm_upto(1 << L) - 2
    assert witness.certificate.mode == "exhaustive"
    assert witness.certificate.passed


def test_hT_separation_limit_is_sharp():
    family = HTFamily(2, "counter")
    limit = family.separation_limit()
    rows = family.value_rows(limit + 1)
    assert (rows[limit + 1] == rows[3]).all()


def test_counter_wrap_is_an_iterated_hash():
    family = HTFamily(2, "counter")
    for T in range(1, 5):
        mapping = reconstruct_compression(family.values(T, 20))
        assert mapping is not None
        y, values = 0, []
        for _ in range(20):
            values.append(y)
            y = mapping[y]
        assert values == family.values(T, 19)
    assert reconstruct_compression([0, 1, 0, 2]) is None
    assert "iterated hash" in hT_family(2, "counter").witness.certificate.detail


def test_perfect_unary_hash():
    instance = perfect_unary_hash(2)
    values = [unary_value(instance, 0, r) for r in range(1, 5)]
    assert len(set(values)) == 4
    assert unary_value(instance, 0, 1) == unary_value(instance, 0, 5)
    one_bit = perfect_unary_hash(1)
    assert unary_value(one_bit, 0, 1) != unary_value(one_bit, 0, 2)


@pytest.mark.parametrize("L", range(1, 9))
def test_perfect_unary_witness(L):
    witness = perfect_unary_witness(L)
    assert witness.lengths == (1, 1 << L)
    assert witness.certificate.measured == 1


# ---------------------------------------------------------------------------
# Independence breaks
# ---------------------------------------------------------------------------

@pytest.mark.parametrize(
    "text",
    ["tabulated:L=2,sigma=2", "shift-tabulated:L=3,sigma=2", "pearson:L=2", "generalized-pearson:L=2", "cwpoly:L=2"],
)
def test_threewise_break(text):
    witness = threewise_break(parse_family_spec(text))
    values = witness.values
    assert witness.certificate.passed
    assert values["left"] == values["right"] > values["required"]
    a, ab, abb = witness.strings
    assert ab == a + (ab[-1],) and abb == ab + (ab[-1],)


def test_threewise_break_tabulated_sides():
    witness = threewise_break(make_family_spec("tabulated", L=2, sigma=2))
    assert witness.values["left"] == Fraction(1, 16)


def test_threewise_break_singleton_family():
    witness = threewise_break(make_family_spec("gcc-cpp", sigma=4))
    assert witness.values["left"] == witness.values["right"] == 1


def test_threewise_break_needs_plain_iteration():
    with pytest.raises(UnsupportedError):
        threewise_break(make_family_spec("zobrist", L=1, sigma=2, max_len=3))


def test_fourwise_break_zobrist():
    witness = fourwise_break(make_family_spec("zobrist", L=1, sigma=2, max_len=2))
    assert witness.strings == ((0,), (1,), (0, 0), (1, 0))
    assert witness.values["probability"] == 0
    assert witness.values["required"] == Fraction(1, 16)
    assert witness.values["equal_extension_probability"] > 0
    with pytest.raises(DomainError):
        fourwise_break(make_family_spec("tabulated", L=2, sigma=2))


def test_witness_registry():
    assert set(WITNESS_KINDS) == {
        "tau-pair",
        "binomial-pair",
        "unary-forced",
        "hT-family",
        "perfect-unary",
        "threewise-break",
        "fourwise-break",
    }
    assert WITNESS_KINDS["hT-family"](2).kind == "hT-family"
