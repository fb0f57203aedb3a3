from fractions import Fraction
from itertools import combinations, combinations_with_replacement
from math import comb

import pytest

from batchcodes.bounds import (
    capacity_ratio,
    johnson_upper_A,
    minimal_s,
    new_range_check,
    optimality_report,
    storage_lower,
    table_exact_N,
    uniform_upper,
)
from batchcodes.codes import construct_affine_cbc, construct_c1, construct_c2, construct_c3, construct_ctd
from batchcodes.errors import OutOfRange

PRIME_POWERS = [3, 4, 5, 7, 8, 9, 11, 13]


def ctd_nkm(q):
    return q * q + q - 1, q * q - q - 1, q * q - q


def test_minimal_s_examples():
    assert minimal_s(*ctd_nkm(4)) == 4
    assert minimal_s(*ctd_nkm(3)) == 3
    assert minimal_s(1, 5, 9) == 1


def test_minimal_s_out_of_range():
    with pytest.raises(OutOfRange):
        minimal_s((3 - 1) * comb(5, 2) + 1, 3, 5)


def test_storage_lower_examples():
    assert storage_lower(11, 5, 6) == 24
    assert storage_lower(19, 11, 12) == 60
    for n, k in [(7, 3), (10, 4), (12, 12)]:
        assert storage_lower(n, k, n) == n
        assert table_exact_N(n, k, n) == n


def test_uniform_upper_examples():
    assert uniform_upper(9, 3, 9) == 12
    assert uniform_upper(12, 3, 11) == 18
    assert uniform_upper(12, 3, 11) - construct_c1(4).n == 2
    assert uniform_upper(11, 3, 11) == 13 == construct_c3(4).n
    with pytest.raises(OutOfRange):
        uniform_upper(5, 4, 4)


@pytest.mark.parametrize("m,k", [(6, 5), (12, 11), (20, 19), (9, 9), (16, 16), (10, 4), (30, 7)])
def test_capacity_ratio_nondecreasing_in_s(m, k):
    values = [capacity_ratio(m, k, s) for s in range(1, k)]
    assert all(a <= b for a, b in zip(values, values[1:]))
    for s, (a, b) in enumerate(zip(values, values[1:]), start=1):
        if Fraction(comb(m, s + 1), comb(k - 1, s + 1)) > Fraction(comb(m, s), comb(k - 1, s)):
            assert a < b


def test_johnson_examples():
    assert johnson_upper_A(6, 2) == 3
    assert johnson_upper_A(5, 0) == 1
    for m in range(8, 40):
        chain = (m * ((m - 1) * ((m - 2) // 2) // 3)) // 4
        assert johnson_upper_A(m, 4) <= chain
        assert johnson_upper_A(m, m - 4) == johnson_upper_A(m, 4)


def exact_A(m, w):
    """Largest set of weight-w words of length m, pairwise distance >= 4 (search)."""
    words = [frozenset(c) for c in combinations(range(m), w)]
    best = 0

    def grow(chosen, rest):
        nonlocal best
        best = max(best, len(chosen))
        if len(chosen) + len(rest) <= best:
            return
        for i, x in enumerate(rest):
            nxt = [y for y in rest[i + 1 :] if len(x & y) <= w - 2]
            grow(chosen + [x], nxt)

    grow([], words)
    return best


@pytest.mark.parametrize("m", range(1, 8))
def test_johnson_bound_is_sound(m):
    for w in range(0, m + 1):
        assert johnson_upper_A(m, w) >= exact_A(m, w)


def test_exact_A_6_4_2():
    assert exact_A(6, 2) == 3


def test_new_range_q3():
    r = new_range_check(3)
    assert r.extra["A_upper"] == 3
    assert (r.achieved, r.bound) == (11, 14)
    assert r.verdict == "holds"


def test_new_range_q4():
    # C(12, 9) - 2 * floor(12/4 * floor(11/3 * floor(10/2))) = 220 - 2 * 54
    r = new_range_check(4)
    assert r.extra["A_upper"] == 54
    assert r.bound == 112
    assert r.gap >= 0


@pytest.mark.parametrize("q", [4, 5, 7, 8, 9, 11, 13])
def test_new_range_exceeds_cubic(q):
    r = new_range_check(q)
    m = q * q - q
    assert r.gap >= 0
    assert Fraction(r.bound) >= Fraction(m * (m - 1) * (m - 2), 12)
    assert r.extra["exceeds_cubic"]


def test_table_examples():
    assert table_exact_N(10, 3, 3) == 24
    assert table_exact_N(7, 3, 7) == 7
    assert table_exact_N(8, 3, 7) == 10


def test_table_inapplicable():
    assert table_exact_N(5, 3, 6) is None
    # m = 8, k = 4: C(8, 2) = 28 > 20, and n is not m + 1 or m + 2
    assert table_exact_N(20, 4, 8) is None


def serves(cols, k):
    for r in range(1, k + 1):
        for s in combinations(cols, r):
            u = 0
            for c in s:
                u |= c
            if bin(u).count("1") < r:
                return False
    return True


def brute_N(n, k, m):
    best = None
    for cols in combinations_with_replacement(range(1, 1 << m), n):
        total = sum(bin(c).count("1") for c in cols)
        if best is not None and total >= best:
            continue
        if serves(cols, k):
            best = total
    return best


SMALL = [(m, n, k) for m in range(1, 5) for n in range(m, m + (3 if m == 4 else 4)) for k in range(1, m + 1)]


@pytest.mark.parametrize("m,n,k", SMALL)
def test_table_and_lower_bound_against_brute_force(m, n, k):
    exact = brute_N(n, k, m)
    tab = table_exact_N(n, k, m)
    if tab is not None:
        assert tab == exact
    try:
        lower = storage_lower(n, k, m)
    except OutOfRange:
        return
    assert lower <= exact


def test_table_n_plus_two_both_branches_hit():
    # m + 1 - k >= ceil(sqrt(k + 1)) selects the first branch
    assert table_exact_N(6, 2, 4) == 4 + 2 - 2 + 4
    assert table_exact_N(4, 2, 2) == 2 * 2 - 2 + 4


@pytest.mark.parametrize("k", range(1, 30))
def test_table_n_plus_two_integer_and_bounded(k):
    for m in range(k, k + 12):
        n = m + 2
        val = table_exact_N(n, k, m)
        assert isinstance(val, int)
        # between the trivial bounds n <= N <= k n - m (k - 1)
        assert n <= val <= max(n, k * n - m * (k - 1))


@pytest.mark.parametrize("q", PRIME_POWERS)
def test_optimality_identities(q):
    n, k, m = ctd_nkm(q)
    assert minimal_s(n, k, m) == q
    assert storage_lower(n, k, m) == q**3 - q
    assert uniform_upper(m, q - 1, k) - q * q == q - 2
    assert uniform_upper(q * q, q, q * q) == q * (q + 1)
    if q >= 4:
        assert uniform_upper(m, q - 1, k) - (q * q + q - 3) == 1
        assert uniform_upper(m - 1, q - 1, k) - (q * q - 3) == 0


@pytest.mark.parametrize("q", [3, 4, 5])
def test_optimality_report_constructions(q):
    (r,) = optimality_report(construct_ctd(q), q * q - q - 1)
    assert (r.name, r.gap, r.verdict) == ("storage_lower", 0, "optimal")
    (r,) = optimality_report(construct_affine_cbc(q), q * q)
    assert (r.name, r.gap, r.verdict) == ("uniform_upper", 0, "optimal")
    (r,) = optimality_report(construct_c1(q), q * q - q - 1)
    assert r.gap == q - 2
    if q >= 4:
        assert optimality_report(construct_c2(q), q * q - q - 1)[0].verdict == "gap=1"
        assert optimality_report(construct_c3(q), q * q - q - 1)[0].verdict == "optimal"


def test_optimality_report_inapplicable():
    (r,) = optimality_report(construct_c1(4), 2)
    assert r.verdict == "inapplicable"
