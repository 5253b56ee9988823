import math
import random

import pytest
from hypothesis import given, strategies as st

from polyprod.criteria import (
    DiscriminantProfile,
    check_applicability,
    explicit_bound,
    j_f,
    j_f_prime,
    legendre_pattern_classes,
    minimize_cf,
    monic_variant_bound,
    nonresidue_classes,
    square_subsets,
)
from polyprod.errors import DomainError, InvalidInput
from polyprod.modarith import get_sieve, jacobi
from polyprod.polycore import IntPolynomial, is_square

P = IntPolynomial.of


def nsq(D):
    """n^2 + D, whose discriminant is -4D."""
    return P(D, 0, 1)


def test_j_f_examples():
    assert j_f(DiscriminantProfile((-4, -8))) == 1
    assert j_f(DiscriminantProfile((-4, -8, -32))) == 2
    assert j_f(DiscriminantProfile((-4, -4 * 81))) == 0


def test_j_f_prime_examples():
    assert j_f_prime(DiscriminantProfile((-4, -8))) == 1
    assert j_f_prime(DiscriminantProfile((-4, -8, -32))) == 2
    assert j_f_prime(DiscriminantProfile((-3, -12))) == 2


def test_profile_rejects_squares():
    for D in ((4,), (-4, 9), (0,)):
        with pytest.raises(InvalidInput):
            DiscriminantProfile(D)


nonsquare = st.integers(-60, 60).filter(lambda d: d != 0 and not is_square(d))


@given(st.lists(nonsquare, min_size=2, max_size=5), st.randoms())
def test_permutation_invariance(D, rnd):
    head, tail = D[0], D[1:]
    shuffled = tail[:]
    rnd.shuffle(shuffled)
    a, b = DiscriminantProfile(tuple(D)), DiscriminantProfile((head, *shuffled))
    assert j_f(a) == j_f(b) and j_f_prime(a) == j_f_prime(b)


@given(st.lists(nonsquare, min_size=1, max_size=5), st.data())
def test_square_multiplier_invariance(D, data):
    i = data.draw(st.integers(0, len(D) - 1))
    m = data.draw(st.integers(2, 9))
    E = list(D)
    E[i] *= m * m
    assert j_f(DiscriminantProfile(tuple(D))) == j_f(DiscriminantProfile(tuple(E)))


def test_k3_never_exactly_two_square_pairs():
    rng = random.Random(7)
    pool = [d for d in range(-200, 201) if d and not is_square(d)]
    for _ in range(10_000):
        D = [rng.choice(pool) for _ in range(3)]
        pairs = sum(is_square(D[i] * D[j]) for i, j in ((0, 1), (0, 2), (1, 2)))
        assert pairs != 2


def test_square_subsets_enumeration():
    assert square_subsets(DiscriminantProfile((-4, -8, -32))) == [(1, 2)]


@pytest.mark.parametrize("D", [(-4,), (-4, -8), (-4, -8, -32), (-3, 5), (-7, -4, 13), (8, -20)])
def test_pattern_classes_hold_for_primes(D):
    prof = DiscriminantProfile(D)
    crit = legendre_pattern_classes(prof)
    assert crit.modulus == 4 * math.prod(abs(d) for d in D)
    assert list(crit.classes) == sorted(crit.classes)
    want = (1,) + (-1,) * (len(D) - 1)
    hits = 0
    for p in get_sieve(10**4).primes_in(3, 10**4):
        if p in crit:
            hits += 1
            assert tuple(jacobi(d, p) for d in D) == want
    assert hits > 0


def test_pattern_classes_examples():
    crit = legendre_pattern_classes(DiscriminantProfile((-4, -8)))
    assert crit.modulus == 128 and 13 in crit
    assert all(a % 8 == 5 for a in crit.classes)
    one = legendre_pattern_classes(DiscriminantProfile((-4,)))
    assert one.modulus == 16 and set(one.classes) == {1, 5, 9, 13}
    with pytest.raises(DomainError):
        legendre_pattern_classes(DiscriminantProfile((-4, -4 * 81)))


def test_class_count_matches_j_f():
    # each class count is phi(M) J_f / 2^I
    for D in [(-4, -8), (-4, -8, -32), (-3, 5, -7)]:
        prof = DiscriminantProfile(D)
        M = 4 * math.prod(abs(d) for d in D)
        phi = sum(1 for a in range(M) if math.gcd(a, M) == 1)
        assert len(legendre_pattern_classes(prof).classes) * 2 ** len(D) == phi * j_f(prof)


def test_nonresidue_classes():
    crit = nonresidue_classes(DiscriminantProfile((-4,)))
    assert set(crit.classes) == {3, 7, 11, 15}


def test_applicability_examples():
    rep = check_applicability([nsq(1), nsq(2)])
    assert rep.matched == "ThmStrong" and "J_f = 1" in rep.get("ThmStrong").reason
    assert check_applicability([nsq(1), nsq(9)]).matched == "ThmWeak"
    rep = check_applicability([nsq(1)], [P(1, 2), P(1, 3)])
    assert not rep.get("QuadLinearCoprime").applies
    assert "gcd(a=2" in rep.get("QuadLinearCoprime").reason


def test_applicability_three_quadratics():
    assert check_applicability([nsq(1), nsq(2), nsq(3)]).matched == "ThmStrong"
    rep = check_applicability([nsq(1), nsq(2), nsq(8)])
    assert rep.matched == "ThmStrong" and "J_f = 2" in rep.get("ThmStrong").reason
    assert check_applicability([nsq(1), nsq(9), nsq(25)]).matched == "ThmWeak"


def test_applicability_linear_terms():
    rep = check_applicability([nsq(1)], [P(1, 3), P(2, 5)])
    assert rep.get("QuadLinearCoprime").applies
    rep = check_applicability([nsq(1)], [P(1, 3), P(4, 3)])
    assert rep.get("QuadLinearCoprime").applies and "twin" in rep.get("QuadLinearCoprime").reason
    # 1 + 2 = 0 mod 3 blocks the twin relaxation
    assert not check_applicability([nsq(1)], [P(1, 3), P(2, 3)]).get("QuadLinearCoprime").applies
    rep = check_applicability([nsq(1)], [P(1, 3), P(4, 3), P(7, 3)])
    assert not rep.get("QuadLinearCoprime").applies
    assert check_applicability([], [P(1, 3)]).get("QuadLinearSquare").applies


def test_applicability_rejects_bad_input():
    with pytest.raises(InvalidInput):
        check_applicability([P(-1, 0, 1)])
    with pytest.raises(InvalidInput):
        check_applicability([nsq(1)], [P(-2, 1)])


def test_report_json_shape():
    import json

    data = json.loads(check_applicability([nsq(1), nsq(2)]).to_json())
    assert set(data) == {"matched", "theorems"}
    assert all(set(t) == {"theorem", "applies", "reason"} for t in data["theorems"])


def test_explicit_bound_examples():
    assert explicit_bound(1, 1) == pytest.approx(math.exp(22.4))
    assert explicit_bound(2, 1) == pytest.approx(math.exp(8 * 26 / 5))
    assert monic_variant_bound(-0.5, 1, 1) == pytest.approx(math.exp(8 * 14.5 / 5))
    assert explicit_bound(10**6, 1) == math.inf


@given(st.integers(1, 30), st.integers(1, 30), st.floats(0.1, 5), st.floats(0.1, 5))
def test_explicit_bound_monotone(D1, D2, c1, c2):
    if D1 <= D2 and c1 <= c2:
        assert explicit_bound(D1, c1) <= explicit_bound(D2, c2)


def test_minimize_cf_examples():
    c = minimize_cf(nsq(1))
    assert -1e-5 < c < 0
    # (n-2)^2 + 1 = n^2 - 4n + 5; smallest ratio f(n)/n^2 is 2/9 at n = 3
    c = minimize_cf(P(5, -4, 1))
    assert c < math.log(2 / 9) and c == pytest.approx(math.log(2 / 9))
    c = minimize_cf(P(3, -2, 1))
    assert c < 0


@given(st.integers(-20, 20), st.integers(1, 30))
def test_minimize_cf_is_a_lower_bound(b, c):
    f = P(c, b, 1)
    if not (b * b - 4 * c < 0 or not is_square(b * b - 4 * c)):
        return
    cf = minimize_cf(f)
    assert cf < 0
    for n in range(1, 3000):
        assert math.log(abs(f(n)) / (n * n)) > cf
