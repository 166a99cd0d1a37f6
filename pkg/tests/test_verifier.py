from fractions import Fraction
import itertools

import pytest

from hashlab.algebra import divisor_count
from hashlab.errors import CapacityError, DomainError, UnsupportedError
from hashlab.families import make_family_spec, parse_family_spec
from hashlab.gp_table import round_half_up
from hashlab.strings import StringSet
from hashlab.verifier import (
    NOT_APPLICABLE,
    collision_prob,
    exact_report,
    find_certain_collision,
    monte_carlo_report,
    pairwise_joint,
    unary_collision_prob,
    value_matrix,
    wilson_interval,
)


def _report(text, max_len, k_max=2, **kwargs):
    spec = parse_family_spec(text)
    return exact_report(spec, StringSet.for_family(spec, max_len), k_max=k_max, **kwargs)


# ---------------------------------------------------------------------------
# exact reports
# ---------------------------------------------------------------------------

def test_tabulated_is_pairwise_independent_up_to_L():
    report = _report("tabulated:L=2,sigma=2", 2)
    assert report.instance_count == 64
    assert report.uniform is True
    assert report.pairwise_independent is True
    assert report.witnesses["asu"]["max_joint"] == Fraction(1, 16)
    assert report.eps_au == Fraction(1, 4)
    assert report.eps_asu == Fraction(1, 4)
    assert report.difference_operation == "xor"


def test_constant_family_is_uniform_but_always_collides():
    report = _report("constant:L=2,sigma=2", 2)
    assert report.uniform is True
    assert report.eps_au == 1
    assert report.pairwise_independent is False


def test_singleton_family_uniformity_not_applicable():
    spec = make_family_spec("java-string")
    report = exact_report(spec, [tuple(b"ab"), tuple(b"Aa"), tuple(b"BB")])
    assert report.uniform == NOT_APPLICABLE
    assert report.eps_au == 1
    assert sorted(report.witnesses["au"]["pair"]) == [list(b"Aa"), list(b"BB")]


def test_pearson_collision_bound_at_length_four():
    report = _report("pearson:L=2", 4)
    assert report.instance_count == 96
    assert report.eps_au == Fraction(5, 6)
    assert report.eps_au <= report.eps_axu


def test_generalized_pearson_short_strings():
    report = _report("generalized-pearson:L=2", 2)
    assert round_half_up(report.eps_au) == "0.53"
    assert 1024 % report.eps_au.denominator == 0


@pytest.mark.parametrize("n", [1, 2, 3])
def test_cwpoly_last_character_difference_is_constant(n):
    report = _report("cwpoly:L=2", n)
    assert report.eps_axu == 1
    witness = report.witnesses["axu"]
    s, s2 = (tuple(x) for x in witness["pair"])
    assert len(s) == len(s2) and s[:-1] == s2[:-1]
    assert witness["difference"] == s[-1] ^ s2[-1]
    assert collision_prob(make_family_spec("cwpoly", L=2), (0,), (1,)) == 0


@pytest.mark.parametrize("n", [1, 2, 3])
def test_cwpoly_almost_universal(n):
    report = _report("cwpoly:L=2", n)
    assert report.eps_au <= Fraction(n, 4)


@pytest.mark.parametrize("n", [2, 3])
def test_cwpoly_xor_universal_with_a_shared_last_character(n):
    spec = make_family_spec("cwpoly", L=2)
    strings = [s + (0,) for length in range(n) for s in itertools.product(range(4), repeat=length)]
    report = exact_report(spec, StringSet.of(strings, spec.alphabet_size))
    assert report.eps_axu <= Fraction(n, 4)


@pytest.mark.parametrize("p", [3, 5])
def test_cwpoly_strong_almost_strong_universality(p):
    spec = make_family_spec("cwpoly-strong", p=p)
    report = exact_report(spec, StringSet.for_family(spec, 2))
    assert report.difference_operation == "field-subtraction"
    assert report.eps_asu <= Fraction(3, p - 1)


def test_multilinear_pairwise_independent_without_trailing_zero():
    report = _report("multilinear:p=3,maxlen=2", 2)
    assert report.strings["exclusion"] == "no-trailing-zero"
    assert report.pairwise_independent is True
    assert report.witnesses["asu"]["max_joint"] == Fraction(1, 9)
    assert report.eps_au == Fraction(1, 3)


def test_zobrist_three_wise_but_not_four_wise():
    report = _report("zobrist:L=1,sigma=2,maxlen=2", 2, k_max=4)
    assert report.kwise[2] is True
    assert report.kwise[3] is True
    assert report.kwise[4] is False
    assert len(report.witnesses["kwise"][4]["strings"]) == 4


@pytest.mark.parametrize("text", ["tabulated:L=2,sigma=2", "shift-tabulated:L=2,sigma=2", "pearson:L=1"])
def test_iterated_families_are_not_three_wise_independent(text):
    report = _report(text, 3, k_max=4)
    assert report.kwise[3] is False
    assert report.kwise[4] is False
    for k in (3, 4):
        assert report.kwise_collision[k] <= report.kwise_collision[k - 1]


def test_kwise_verdicts_are_monotone():
    for text in ("tabulated:L=2,sigma=2", "zobrist:L=1,sigma=2,maxlen=2", "multilinear:p=3,maxlen=2"):
        report = _report(text, 2, k_max=4)
        for k in (3, 4):
            if report.kwise[k]:
                assert report.kwise[k - 1]


def test_pairwise_independence_pins_epsilons():
    for text in ("tabulated:L=2,sigma=2", "multilinear:p=3,maxlen=2"):
        report = _report(text, 2)
        V = report.value_count
        assert report.pairwise_independent
        assert report.eps_au == Fraction(1, V)
        assert report.eps_asu == Fraction(1, V)


def test_worker_count_does_not_change_the_report():
    single = _report("pearson:L=2", 3, workers=1)
    threaded = _report("pearson:L=2", 3, workers=4)
    assert single == threaded


def test_exact_report_rejects_bad_arguments():
    spec = make_family_spec("pearson", L=2)
    with pytest.raises(DomainError):
        exact_report(spec, StringSet.for_family(spec, 2), k_max=5)
    with pytest.raises(CapacityError, match="monte_carlo_report"):
        exact_report(spec, StringSet.for_family(spec, 2), budget=100)


def test_value_matrix_shape_and_budget():
    spec = make_family_spec("tabulated", L=2, sigma=2)
    X = value_matrix(spec, StringSet.for_family(spec, 2))
    assert X.shape == (64, 6)
    with pytest.raises(CapacityError) as info:
        value_matrix(spec, StringSet.for_family(spec, 2), budget=10)
    assert info.value.count == 64 * 6


# ---------------------------------------------------------------------------
# pair probabilities
# ---------------------------------------------------------------------------

def test_pairwise_joint_tabulated_full_word():
    spec = make_family_spec("tabulated", L=2, sigma=2)
    table = pairwise_joint(spec, (0,), (1, 1), masked_bits=2)
    assert len(table) == 16
    assert set(table.values()) == {Fraction(1, 16)}


def test_pairwise_joint_shift_tabulated_low_bits():
    spec = make_family_spec("shift-tabulated", L=3, sigma=2)
    strings = StringSet.for_family(spec, 2).members
    for s, s2 in itertools.combinations(strings, 2):
        table = pairwise_joint(spec, s, s2, masked_bits=2)
        assert set(table.values()) == {Fraction(1, 16)}, (s, s2)


def test_pairwise_joint_edges():
    spec = make_family_spec("tabulated", L=2, sigma=2)
    assert pairwise_joint(spec, (0,), (1,), masked_bits=0) == {(0, 0): Fraction(1)}
    with pytest.raises(DomainError):
        pairwise_joint(spec, (0,), (1,), masked_bits=3)


def test_collision_prob():
    spec = make_family_spec("pearson", L=2)
    assert collision_prob(spec, (1, 2), (1, 2)) == 1
    assert collision_prob(spec, (0,), (1,)) == 0


def test_pearson_unary_examples():
    spec = make_family_spec("pearson", L=2)
    assert unary_collision_prob(spec, 3, 4) == Fraction(1, 4)
    assert unary_collision_prob(spec, 3, 5) == Fraction(2, 4)
    assert unary_collision_prob(spec, 5, 5) == 1
    with pytest.raises(DomainError):
        unary_collision_prob(spec, -1, 2)


@pytest.mark.parametrize("L", [2, 3])
def test_pearson_unary_collisions_follow_divisor_count(L):
    spec = make_family_spec("pearson", L=L)
    V = 1 << L
    for r in (0, 1, 4):
        for gap in range(1, V):
            expected = Fraction(divisor_count(gap), V)
            assert unary_collision_prob(spec, r, r + gap, c=1) == expected


def test_unary_collision_generalized_family_matches_direct_count():
    spec = make_family_spec("zobrist", L=1, sigma=2, max_len=3)
    assert unary_collision_prob(spec, 1, 3, c=1) == collision_prob(spec, (1,), (1, 1, 1))


# ---------------------------------------------------------------------------
# Monte-Carlo
# ---------------------------------------------------------------------------

def test_wilson_interval():
    lo, hi = wilson_interval(0, 10)
    assert lo == 0.0 and 0 < hi < 0.35
    lo, hi = wilson_interval(10, 10)
    assert hi == 1.0 and lo > 0.65
    lo, hi = wilson_interval(50, 100)
    assert lo < 0.5 < hi
    assert hi - lo == pytest.approx(2 * (0.5 - lo))
    assert wilson_interval(0, 1)[0] == 0.0
    assert wilson_interval(7, 7)[1] == 1.0
    assert wilson_interval(3, 3000)[0] > 0.0
    with pytest.raises(DomainError):
        wilson_interval(0, 0)


def test_monte_carlo_degenerate_pair():
    spec = make_family_spec("sax", L=32)
    report = monte_carlo_report(spec, pair=((1, 2), (1, 2)), trials=50, seed=3)
    assert report.eps_au == 1.0
    assert report.mode == "monte-carlo"
    assert report.monte_carlo == {"trials": 50, "seed": 3, "confidence": 0.95}


def test_monte_carlo_is_deterministic_and_worker_independent():
    spec = make_family_spec("pearson", L=3)
    strings = StringSet.for_family(spec, 1)
    first = monte_carlo_report(spec, strings, trials=3000, seed=11, workers=1)
    again = monte_carlo_report(spec, strings, trials=3000, seed=11, workers=1)
    threaded = monte_carlo_report(spec, strings, trials=3000, seed=11, workers=3)
    assert first == again == threaded
    other = monte_carlo_report(spec, strings, trials=3000, seed=12, workers=1)
    assert other.monte_carlo["seed"] == 12


def test_monte_carlo_cwpoly_interval_covers_exact_value():
    spec = make_family_spec("cwpoly", L=8)
    pair = ((1, 2), (2, 1))
    exact = collision_prob(spec, *pair)
    assert exact <= Fraction(2, 256)
    report = monte_carlo_report(spec, pair=pair, trials=20_000, seed=5, confidence=0.999)
    lo, hi = report.intervals["au"]
    assert lo <= float(exact) <= hi


def test_monte_carlo_estimates_converge():
    spec = make_family_spec("tabulated", L=2, sigma=2)
    pair = ((0,), (1,))
    exact = float(collision_prob(spec, *pair))
    covered = 0
    for seed in range(100):
        report = monte_carlo_report(spec, pair=pair, trials=400, seed=seed)
        lo, hi = report.intervals["au"]
        covered += lo <= exact <= hi
    assert covered >= 88


def test_monte_carlo_arguments():
    spec = make_family_spec("pearson", L=2)
    with pytest.raises(DomainError):
        monte_carlo_report(spec, pair=((0,), (1,)), trials=0)
    with pytest.raises(DomainError):
        monte_carlo_report(spec, StringSet.for_family(spec, 1), pair=((0,), (1,)))
    with pytest.raises(DomainError):
        monte_carlo_report(spec)


# ---------------------------------------------------------------------------
# certain collisions
# ---------------------------------------------------------------------------

def test_certain_collision_generalized_pearson_L1():
    spec = make_family_spec("generalized-pearson", L=1)
    assert find_certain_collision(spec, 2) == ((0, 0), (1, 1))


def test_no_certain_collision_for_tabulated():
    spec = make_family_spec("tabulated", L=2, sigma=2)
    assert find_certain_collision(spec, 2) is None


def test_certain_collision_needs_an_iterated_family():
    with pytest.raises(UnsupportedError):
        find_certain_collision(make_family_spec("zobrist", L=1, sigma=2, max_len=2), 2)
    with pytest.raises(UnsupportedError):
        find_certain_collision(make_family_spec("cwpoly-strong", p=3), 2)


@pytest.mark.slow
def test_certain_collision_generalized_pearson_L2():
    spec = make_family_spec("generalized-pearson", L=2)
    pair = find_certain_collision(spec, 11)
    assert pair is not None
    s, s2 = pair
    assert s != s2 and max(len(s), len(s2)) <= 11
    assert collision_prob(spec, s, s2) == 1
