from __future__ import annotations

import itertools
import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from baxtoda.baxter import expansion_check
from baxtoda.errors import CutoffError, DimensionError, DomainError
from baxtoda.fock_schur import (FockState, Partition, cauchy_check, classical_character, complete_homogeneous,
                                fock_states, grade_restricted_trace, grade_restricted_trace_joint, graded_trace,
                                mode_tail_bound, partitions, schur, shintani_from_lattice, shintani_gl2,
                                trace_vs_character)
from baxtoda.qspecial import q_factorial
from baxtoda.whittaker import q_character

fracs = st.fractions(-3, 3, max_denominator=7)


# ---------------------------------------------------------------------------
# Fock traces

def test_fock_state_accessors():
    s = FockState.from_map({(0, 1): 2, (3, 2): 1, (1, 1): 0})
    assert s.grade == 3
    assert s.energy == 3
    assert s.charge(1) == 2 and s.charge(2) == 1
    assert FockState().grade == 0


def test_fock_state_count():
    # states of grade n over c colours and M+1 modes: C(c(M+1) + n - 1, n)
    assert sum(1 for _ in fock_states(2, 3, 3)) == math.comb(8 + 2, 3)
    assert list(fock_states(1, 2, 0)) == [FockState()]


def test_vacuum():
    assert grade_restricted_trace(0, [Fraction(2), Fraction(3)], Fraction(1, 3), 12) == 1
    assert mode_tail_bound(0, [2, 3], 0.5, 4) == 0.0


@pytest.mark.parametrize("n", range(9))
def test_single_colour(n):
    q, t = Fraction(1, 2), Fraction(3, 2)
    val = grade_restricted_trace(n, [t], q, 12)
    ref = 1 / (q_factorial(n, q) * t**n)
    assert abs(val - ref) <= mode_tail_bound(n, [t], q, 12)


def test_two_colour_example():
    q, ts = Fraction(1, 3), [Fraction(2), Fraction(3)]
    diff, bound = trace_vs_character(3, ts, q, 12)
    assert diff <= bound
    assert bound < 1e-5


@given(st.integers(0, 4), st.integers(1, 3), st.fractions(Fraction(-1, 2), Fraction(1, 2)),
       st.lists(st.fractions(Fraction(1, 2), 4), min_size=1, max_size=3))
def test_joint_enumeration_matches_factorized(n, m, q, ts):
    assert grade_restricted_trace(n, ts, q, m) == grade_restricted_trace_joint(n, ts, q, m)


@given(st.integers(1, 6), st.integers(2, 8), st.fractions(Fraction(1, 10), Fraction(3, 4)),
       st.lists(st.fractions(Fraction(1, 2), 4), min_size=1, max_size=3))
def test_tail_bound_holds(n, m, q, ts):
    diff, bound = trace_vs_character(n, ts, q, m)
    assert diff <= bound


def test_trace_monotone_in_cutoff():
    q, ts = Fraction(1, 2), [Fraction(1), Fraction(2)]
    diffs = [trace_vs_character(4, ts, q, m)[0] for m in (2, 4, 8, 12)]
    assert all(b < a for a, b in zip(diffs, diffs[1:]))


def test_graded_trace_and_cutoff_error():
    total, bound = graded_trace(Fraction(1, 3), Fraction(1, 10), [Fraction(2), Fraction(3)], 12, 6)
    ref = sum(Fraction(1, 10) ** n * q_character(n, [2, 3], Fraction(1, 3)) for n in range(7))
    assert abs(total - ref) <= bound
    with pytest.raises(CutoffError):
        graded_trace(0.9, 0.5, [1.0], 2, 5, mode="float", tol=1e-12)
    with pytest.raises(DomainError):
        graded_trace(1.5, 0.1, [2.0], 4, 2)


def test_float_mode():
    ex = grade_restricted_trace(4, [2, 3], Fraction(1, 3), 8)
    fl = grade_restricted_trace(4, [2.0, 3.0], 1 / 3, 8, mode="float")
    assert abs(fl - float(ex)) <= 1e-14 * float(ex)


def test_consistency_square():
    q, ts, t = Fraction(1, 2), [Fraction(2), Fraction(3)], Fraction(1, 10)
    for n in range(6):
        diff, bound = trace_vs_character(n, ts, q, 40)
        assert diff <= bound < 1e-11
    err, bound = expansion_check(t, ts, q, 20)
    assert err <= bound


# ---------------------------------------------------------------------------
# Schur polynomials

def test_partition_type():
    assert Partition((3, 1, 0)).parts == (3, 1)
    assert Partition((3, 1)).size == 4 and len(Partition((3, 1))) == 2
    with pytest.raises(DomainError):
        Partition((1, 2))


def test_partition_counts():
    assert [sum(1 for _ in partitions(n)) for n in range(8)] == [1, 1, 2, 3, 5, 7, 11, 15]
    assert sum(1 for _ in partitions(6, 2)) == 4


def test_schur_examples():
    z = [Fraction(2), Fraction(5), Fraction(-1, 3)]
    assert schur((1,), z) == sum(z)
    a, b = Fraction(2), Fraction(7)
    assert schur((2,), [a, b]) == a * a + a * b + b * b
    assert schur((1, 1), [a, b]) == a * b
    assert schur((), z) == 1
    with pytest.raises(DimensionError):
        schur((1, 1, 1), [a, b])


def bialternant(lam, zs):
    n = len(zs)
    parts = list(lam) + [0] * (n - len(lam))
    num = [[z ** (parts[j] + n - 1 - j) for j in range(n)] for z in zs]
    den = [[z ** (n - 1 - j) for j in range(n)] for z in zs]

    def det(m):
        size = len(m)
        total = Fraction(0)
        for perm in itertools.permutations(range(size)):
            sign = 1
            for i in range(size):
                for j in range(i + 1, size):
                    if perm[i] > perm[j]:
                        sign = -sign
            term = Fraction(sign)
            for i in range(size):
                term *= m[i][perm[i]]
            total += term
        return total

    return det(num) / det(den)


@given(st.lists(fracs, min_size=3, max_size=3, unique=True), st.integers(0, 5))
def test_jacobi_trudi_matches_bialternant(zs, n):
    for p in partitions(n, 3):
        assert schur(p, zs) == bialternant(p.parts, zs)


@given(st.lists(fracs, min_size=1, max_size=4), st.integers(0, 5))
def test_schur_one_row_is_complete(zs, k):
    assert schur((k,) if k else (), zs) == complete_homogeneous(k, zs)


@given(st.lists(fracs, min_size=2, max_size=3), st.integers(1, 4))
def test_schur_symmetric(zs, n):
    for p in partitions(n, len(zs)):
        assert schur(p, zs) == schur(p, zs[::-1])


def test_cauchy_exact():
    zs = [Fraction(1, 2), Fraction(-2, 3), Fraction(3)]
    ws = [Fraction(5, 7), Fraction(1, 4), Fraction(-1)]
    assert cauchy_check(4, zs, ws) == 0


@given(st.lists(fracs, min_size=1, max_size=3), st.lists(fracs, min_size=1, max_size=3))
def test_cauchy_property(zs, ws):
    assert cauchy_check(3, zs, ws) == 0


def test_cauchy_float():
    assert cauchy_check(4, [0.3, -0.2, 0.7], [0.1, 0.5, -0.4], mode="float") < 1e-14


# ---------------------------------------------------------------------------
# Shintani

def test_shintani_target():
    r = shintani_gl2(2, 1, 2, 0)
    assert r.target == Fraction(8, 3)
    assert r.partial_sum == 1
    assert r.target - r.partial_sum <= r.remainder_bound


def test_shintani_partial_sums():
    prev = Fraction(0)
    for n in range(31):
        r = shintani_gl2(2, 1, 2, n)
        assert r.partial_sum > prev
        assert r.partial_sum < r.target
        assert r.target - r.partial_sum <= r.remainder_bound
        prev = r.partial_sum


def test_shintani_float_path():
    r = shintani_gl2(3, 0.5, 1.5, 20)
    assert abs(r.target - r.partial_sum) <= r.remainder_bound


def test_shintani_matches_lattice_at_q_zero():
    for n in range(10):
        assert shintani_from_lattice(n, 2, 1, 2) == classical_character(n, Fraction(1, 2), Fraction(1, 4))


def test_shintani_domain():
    with pytest.raises(DomainError):
        shintani_gl2(1, 1, 2, 3)
    with pytest.raises(DomainError):
        shintani_gl2(2, 0, 2, 3)
