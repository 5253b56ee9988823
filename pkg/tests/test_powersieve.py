import math
import random

import pytest
from hypothesis import given, strategies as st

from polyprod.errors import (
    DomainError,
    EmptyPrimeSet,
    InvalidSeed,
    NoSuchCharacter,
    NotApplicable,
    TheoremInapplicable,
)
from polyprod.modarith import get_sieve
from polyprod.polycore import FactoredPolynomial, IntPolynomial, parse_factored, shifted_product
from polyprod.powersieve import (
    build_prime_seq,
    char_sum,
    count_pth_residue_values,
    estimate_galois_profile,
    fk_not_power_check,
    gap_lemma_check,
    gap_lemma_report,
    gap_structure,
    power_scan,
    pth_power_census,
    squarefull_scan,
    turan_experiment,
    verify_prime_seq,
)

P = IntPolynomial.of
SQ1 = P(1, 0, 1)


def brute_chi_sum(F, q, p):
    g = next(g for g in range(2, q) if all(pow(g, (q - 1) // r, q) != 1 for r in {p, *_pf(q - 1)}))
    log = {pow(g, i, q): i for i in range(q - 1)}
    import cmath

    total = 0
    for a in range(q):
        v = int(F(a)) % q
        if v:
            total += cmath.exp(2j * math.pi * log[v] / p)
    return abs(total)


def _pf(n):
    import sympy

    return sympy.primefactors(n)


def test_profile_examples():
    prof = estimate_galois_profile(SQ1)
    assert prof.d_F == 2 and set(prof.histogram) == {0, 2} and prof.g_F == 2
    assert abs(prof.densities[2] - 0.5) < 0.05
    prof = estimate_galois_profile(parse_factored("1,0,1;2,0,1"))
    assert prof.d_F == 2 and set(prof.histogram) == {0, 2, 4}
    assert estimate_galois_profile(P(0, 1)).d_F == 1
    with pytest.raises(DomainError):
        estimate_galois_profile(SQ1, P=10)


def test_prime_seq_example():
    seq = build_prime_seq(SQ1, 5, 101, 6)
    assert seq.primes[:2] == [101, 293] and seq.m == 3
    lo, hi = seq.windows[0]
    assert lo == pytest.approx(303 * (1 - 2 * math.log(101) / 101)) and hi == 303
    assert verify_prime_seq(SQ1, seq)
    assert build_prime_seq(SQ1, 5, 101, 1).primes == [101]
    with pytest.raises(DomainError):
        build_prime_seq(SQ1, 2, 101, 3)
    with pytest.raises(InvalidSeed):
        build_prime_seq(SQ1, 5, 103, 3)


@pytest.mark.parametrize("F,p,q1", [(SQ1, 7, 13), (P(1, 0, 0, 1), 3, 5), (parse_factored("1,0,1;2,0,1"), 5, 13)], ids=str)
def test_prime_seq_post_hoc(F, p, q1):
    seq = build_prime_seq(F, p, q1, 5)
    assert verify_prime_seq(F, seq)


def test_char_sum_examples():
    r = char_sum(SQ1, 0, 13, 2)
    assert r["magnitude"] == pytest.approx(1) and r["bound"] == pytest.approx(math.sqrt(13)) and r["ok"]
    r = char_sum(SQ1, 0, 7, 3)
    assert r["magnitude"] <= math.sqrt(7) + 1e-9 and r["ok"]
    with pytest.raises(NoSuchCharacter):
        char_sum(SQ1, 0, 11, 3)
    with pytest.raises(TheoremInapplicable):
        char_sum(FactoredPolynomial.build([(SQ1, 2)]), 0, 13, 2)


@pytest.mark.parametrize("q,p,k", [(13, 2, 0), (37, 3, 1), (31, 5, 2), (61, 3, 2), (101, 5, 0)])
def test_char_sum_brute_force(q, p, k):
    Fk = shifted_product(FactoredPolynomial.build([(SQ1, 1)]), k)
    assert char_sum(SQ1, k, q, p)["magnitude"] == pytest.approx(brute_chi_sum(Fk, q, p), abs=1e-9)


def test_residue_count_examples():
    r = count_pth_residue_values(SQ1, 0, 7, 3)
    assert r["S"] == 1 and r["lhs"] == 4 and r["ok"]
    r = count_pth_residue_values(SQ1, 0, 13, 2)
    # values a^2 + 1 mod 13 that are 0 or squares, by enumeration
    sq = {a * a % 13 for a in range(13)}
    assert r["S"] == sum(1 for a in range(13) if (a * a + 1) % 13 in sq)


def test_residue_count_grid():
    for q in get_sieve(300).primes_in(3, 300):
        for p in (2, 3, 5):
            if (q - 1) % p:
                continue
            for k in (0, 1, 2):
                if q <= 2 * k:
                    continue
                r = count_pth_residue_values(SQ1, k, q, p)
                assert r["ok"] and r["ok_exact_correction"]
                assert char_sum(SQ1, k, q, p)["ok"]


def test_fk_not_power():
    assert fk_not_power_check(SQ1, 1, 13, 2)
    assert fk_not_power_check(SQ1, 0, 5, 2)
    with pytest.raises(TheoremInapplicable):
        fk_not_power_check(FactoredPolynomial.build([(SQ1, 2)]), 0, 13, 2)
    with pytest.raises(DomainError):
        fk_not_power_check(SQ1, 0, 2, 2)


def test_turan_examples():
    r = turan_experiment(SQ1, 0, 2, 10**4, 100)
    assert r["ok"] and r["survivors"] <= r["bound"]
    r = turan_experiment(parse_factored("1,0,1;2,0,1"), 1, 2, 10**4, 200)
    assert r["ok"] and r["primes"] > 0
    with pytest.raises(EmptyPrimeSet):
        turan_experiment(SQ1, 0, 2, 10, 1)


def test_turan_survivors_brute_force():
    # survivors: n whose F(n) is a square (or 0) modulo every q in the set
    r = turan_experiment(SQ1, 0, 3, 500, 30)
    qs = [q for q in get_sieve(60).primes_in(31, 60) if q % 3 == 1]
    cubes = {q: {pow(a, 3, q) for a in range(q)} for q in qs}
    want = sum(1 for n in range(1, 501) if all((n * n + 1) % q in cubes[q] for q in qs))
    assert r["survivors"] == want and r["primes"] == len(qs)


def test_gap_examples():
    assert gap_structure([1, 2, 3, 4, 5, 6], 10) == {1: 5}
    assert gap_lemma_check([1, 2, 3, 4, 5, 6], 10, 2)
    with pytest.raises(NotApplicable):
        gap_lemma_check(list(range(1, 11, 2)), 10, 2)


def test_gap_lemma_counterexample():
    # gaps 1,1,2,2,3: |S_1| = |S_2| = 2 < 2*10/8, although |S| = 6 > 10/2
    rep = gap_lemma_report([1, 2, 3, 5, 7, 10], 10, 2)
    assert rep["gaps"] == {1: 2, 2: 2, 3: 1} and rep["threshold"] == 2.5
    assert not rep["holds"]


@given(st.integers(2, 300), st.data())
def test_gap_counts_bounded_by_size(X, data):
    S = sorted(data.draw(st.sets(st.integers(1, X), max_size=X)))
    gaps = gap_structure(S, X)
    assert sum(gaps.values()) == max(len(S) - 1, 0)


def test_gap_lemma_counterexample_k3():
    # |S| = 5 > 14/3, gaps 1,2,3,4 each occur once, below 2*14/27 rounded up
    rep = gap_lemma_report([1, 2, 4, 7, 11], 14, 3)
    assert rep["gaps"] == {1: 1, 2: 1, 3: 1, 4: 1} and not rep["holds"]


def test_gap_lemma_dense_sets_hold():
    # once |S| > X/2 and K >= 2 is small against X, some gap k <= K is frequent
    rng = random.Random(3)
    for _ in range(500):
        X = rng.randint(200, 500)
        S = rng.sample(range(1, X + 1), rng.randint(X // 2 + 1, X))
        assert gap_lemma_check(S, X, 3)


def test_census_examples():
    assert pth_power_census(SQ1, 2, 2000)["hits"] == [3]
    assert pth_power_census(P(1, 0, 4), 2, 2000)["hits"] == []
    r = pth_power_census(P(1, -2, 2), 2, 2000)
    assert r["hits"] == [] and r["trivial_units"] == [1]
    r = pth_power_census(SQ1, 2, 100)
    assert r["fixed_root_exponent"] is None and r["fixed_root_bound"] == math.inf
    r = pth_power_census(SQ1, 5, 100)
    assert r["fixed_root_exponent"] == pytest.approx(math.log(3) / math.log(3))
    assert r["general_bound"] == pytest.approx(100 ** 0.96)
    with pytest.raises(TheoremInapplicable):
        pth_power_census(FactoredPolynomial.build([(SQ1, 3)]), 3, 10)


def test_census_nonincreasing_in_p():
    F = parse_factored("1,0,1^2;2,0,1")
    counts = [pth_power_census(F, p, 300)["count"] for p in (2, 3, 5, 7)]
    assert all(a >= b for a, b in zip(counts, counts[1:]))


def test_scans():
    assert power_scan(SQ1, 2, 50)["hits"] == [3]
    assert power_scan(P(-1, 0, -1), 2, 50)["hits"] == []
    assert power_scan(P(-3, 1), 2, 10)["zero_from"] == 3
    assert squarefull_scan(P(1, 0, 0, 1), 1000, x_min=2)["hits"] == []
    assert squarefull_scan(SQ1, 10)["hits"] == [3]
