import json
import random

import pytest
import sympy

from quadfields.arith import is_perfect_square, is_squarefree
from quadfields.census import (
    count_Q,
    count_Q_total,
    distinct_fields,
    s_matches,
    same_field,
    squarefree_kernel,
)
from quadfields.sequences import Polynomial, validate


@pytest.fixture(scope="module")
def dipped():
    # u(n) = 2^n - 5 goes negative for n <= 2
    return validate(Polynomial.parse("-5,1"), 2)


def test_same_field_examples():
    assert same_field(8, 2)
    assert not same_field(17, 41)
    assert same_field(12, 3) and same_field(5, 45)
    for a in (1, 7, 10**40 + 1):
        assert same_field(a, a)
    with pytest.raises(ValueError):
        same_field(0, 3)
    with pytest.raises(ValueError):
        same_field(5, -5)


def test_same_field_transitive_seeded():
    rng = random.Random(41)
    kernels = (1, 2, 3, 5, 6, 17, 41)
    vals = [rng.choice(kernels) * rng.randint(1, 10**6) ** 2 for _ in range(60)]
    for _ in range(300):
        a, b, c = rng.sample(vals, 3)
        if same_field(a, b) and same_field(b, c):
            assert same_field(a, c)


def test_s_matches(shanks, dipped):
    assert s_matches(shanks, 1, 17)  # 17 * 17 = 289
    assert not s_matches(shanks, 2, 17)
    assert not s_matches(dipped, 1, 3)  # u(1) = -3, no field at all


def test_count_Q_examples(shanks):
    assert count_Q(shanks, 0, 10, 17) == 1
    assert count_Q(shanks, 10, 5, 17) == 0
    assert count_Q(shanks, 0, 10, 41) == 1


def test_count_Q_rejections(shanks):
    inseparable = validate(Polynomial.parse("1,-2,1"), 2)
    with pytest.raises(ValueError, match="separable"):
        count_Q(inseparable, 0, 5, 1)
    with pytest.raises(ValueError, match="squarefree"):
        count_Q(shanks, 0, 5, 12)
    with pytest.raises(ValueError):
        count_Q(shanks, 0, 5, 0)
    with pytest.raises(ValueError, match="64 bits"):
        count_Q(shanks, 0, 5, 2**64)
    with pytest.raises(ValueError):
        count_Q(shanks, -1, 5, 1)
    with pytest.raises(ValueError):
        count_Q(shanks, 0, 0, 1)


def test_count_Q_total_small_window(shanks):
    # u(1..5) = 17, 41, 113, 353, 1217: five primes, kernels are themselves
    res = count_Q_total(shanks, 0, 5, 50)
    assert res.total == 2
    assert res.per_s == {17: 1, 41: 1}
    assert res.skipped == ()
    assert count_Q_total(shanks, 0, 5, 1300).total == 5
    assert count_Q_total(shanks, 0, 5, 1).total == 0


def test_count_Q_total_all_squares():
    squares = validate(Polynomial.parse("0,1"), 4)  # u(n) = 4^n
    res = count_Q_total(squares, 0, 6, 1)
    assert res.total == 6 and res.per_s == {1: 6}


def test_count_Q_total_fallback_matches_definition(shanks):
    # B < S forces the fallback scan; compare against the plain s-loop
    res = count_Q_total(shanks, 0, 5, 200, B=50)
    brute = sum(
        count_Q(shanks, 0, 5, s) for s in range(1, 201) if is_squarefree(s)
    )
    assert res.total == brute == 3
    assert res.per_s == {17: 1, 41: 1, 113: 1}


def test_count_Q_total_skips_negative(dipped):
    res = count_Q_total(dipped, 0, 5, 50)
    assert res.skipped == (1, 2)
    assert res.per_s == {3: 2, 11: 1}  # u(3) = 3, u(5) = 27, u(4) = 11


def test_census_json_roundtrip(shanks):
    res = count_Q_total(shanks, 0, 5, 1300)
    doc = json.loads(res.to_json())
    assert doc["M"] == 0 and doc["N"] == 5 and doc["S"] == 1300
    assert doc["per_s"] == [[17, 1], [41, 1], [113, 1], [353, 1], [1217, 1]]
    assert res.to_json() == count_Q_total(shanks, 0, 5, 1300).to_json()


def test_distinct_fields_small(shanks, dipped):
    res = distinct_fields(shanks, 0, 5)
    assert len(res.classes) == 5 and res.total == 5
    assert distinct_fields(shanks, 0, 1).classes == ((1, (1,)),)
    res = distinct_fields(dipped, 0, 5)
    assert res.skipped == (1, 2)
    assert res.classes == ((3, (3, 5)), (4, (4,)))  # 3 and 27 share a field


def test_distinct_fields_class_validity(cubic2):
    from quadfields.sequences import u_eval

    res = distinct_fields(cubic2, 0, 12)
    reps = [rep for rep, _ in res.classes]
    for rep, members in res.classes:
        for n in members:
            assert same_field(u_eval(cubic2, rep), u_eval(cubic2, n))
    for i, a in enumerate(reps):
        for b in reps[i + 1 :]:
            assert not same_field(u_eval(cubic2, a), u_eval(cubic2, b))
    # kernel view must carve out the identical partition
    by_kernel = {}
    for n in range(1, 13):
        k = squarefree_kernel(u_eval(cubic2, n), 10**6)
        assert k.complete
        by_kernel.setdefault(k.kernel, []).append(n)
    assert sorted(tuple(v) for v in by_kernel.values()) == sorted(
        members for _, members in res.classes
    )


def test_squarefree_kernel_examples():
    k = squarefree_kernel(72, 10)
    assert (k.kernel, k.complete) == (2, True)
    k = squarefree_kernel(17 * 2**100 * 9, 10**6)
    assert (k.kernel, k.complete) == (17, True)
    assert k.small_part == 17
    k = squarefree_kernel(49, 10)
    assert (k.kernel, k.complete) == (1, True)
    # leftover certified prime above B still yields an exact kernel
    k = squarefree_kernel(5 * 2796203, 10**6)
    assert (k.kernel, k.complete) == (5 * 2796203, True)
    assert (k.small_part, k.cofactor) == (5, 2796203)
    with pytest.raises(ValueError):
        squarefree_kernel(0, 10)
    with pytest.raises(ValueError):
        squarefree_kernel(10, 1)


def test_squarefree_kernel_incomplete_is_certified_lower_bound():
    p = sympy.nextprime(2**40)
    q = sympy.nextprime(p)
    k = squarefree_kernel(3 * p * q, 10**6)
    assert not k.complete
    assert k.kernel > 10**6
    assert k.small_part == 3
    assert k.cofactor == p * q


def test_squarefree_kernel_reconstruction_seeded():
    rng = random.Random(9)
    for _ in range(200):
        n = rng.randint(1, 10**12)
        k = squarefree_kernel(n, 10**4)
        if k.complete:
            assert n % k.kernel == 0
            assert is_perfect_square(n // k.kernel)
            assert is_squarefree(k.kernel)
        else:
            assert k.cofactor > 10**4 and not is_perfect_square(k.cofactor)
