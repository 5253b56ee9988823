import math

import pytest
import sympy
from hypothesis import given, strategies as st

from polyprod.analytic import (
    ap_sum_table,
    brun_titchmarsh_check,
    brun_titchmarsh_scan,
    chebyshev_checks,
    chebyshev_scan,
    estimate_C0,
    euler_phi,
    first_prime_remark,
    geometric_grid,
    s_deviation,
    sup_s_deviation,
    theta_linear_check,
)
from polyprod.errors import DomainError
from polyprod.modarith import PrimeSieve


@pytest.fixture(scope="module")
def sieve():
    return PrimeSieve(2 * 10**5)


def oracle_S(z, q, a):
    total = math.fsum(math.log(p) / p for p in sympy.primerange(2, math.floor(z) + 1) if p % q == a % q)
    return abs(total - math.log(z) / sympy.totient(q))


def test_s_deviation_examples(sieve):
    assert s_deviation(10, 1, 1, sieve) == pytest.approx(0.990, abs=1e-3)
    assert 0 <= s_deviation(100, 4, 1, sieve) <= 6
    # below the first prime 1 mod 4 the sum is empty
    assert s_deviation(4.5, 4, 1, sieve) == pytest.approx(math.log(4.5) / 2)
    with pytest.raises(DomainError):
        s_deviation(100, 4, 2, sieve)


@given(st.floats(2, 5000), st.integers(1, 30), st.integers(0, 29))
def test_s_deviation_oracle(z, q, a):
    a %= q
    if math.gcd(a, q) != 1:
        return
    assert s_deviation(z, q, a) == pytest.approx(oracle_S(z, q, a), abs=1e-12)


def test_jumps_only_at_class_primes(sieve):
    q, a = 4, 3
    zs = [2 + k / 7 for k in range(7 * 300)]
    for z0, z1 in zip(zs, zs[1:]):
        crossed = [p for p in sympy.primerange(math.floor(z0) + 1, math.floor(z1) + 1) if p % q == a]
        d = s_deviation(z1, q, a, sieve) - s_deviation(z0, q, a, sieve)
        if not crossed:
            # without a crossing only the smooth log z term moves
            assert abs(d) <= (math.log(z1) - math.log(z0)) / 2 + 1e-12


def test_sup_matches_dense_scan(sieve):
    best, (q, a, z) = sup_s_deviation(6, 3000, sieve)
    # the sup may sit just below a prime, approached from the left
    near = max(s_deviation(z, q, a, sieve), s_deviation(z - 1e-9, q, a, sieve))
    assert near == pytest.approx(best, abs=1e-8)
    for qq in range(1, 7):
        for aa in range(qq):
            if math.gcd(aa, qq) != 1:
                continue
            for zz in range(2, 3001):
                assert s_deviation(zz, qq, aa, sieve) <= best + 1e-12
    one, _ = sup_s_deviation(1, 10, sieve)
    assert one >= s_deviation(10, 1, 1, sieve)


def test_c0_monotone_and_floor(sieve):
    assert estimate_C0(5, 1.5) == 0.1
    a = estimate_C0(6, 10**4, sieve)
    b = estimate_C0(6, 2 * 10**4, sieve)
    assert 0.1 <= a <= b


def test_brun_titchmarsh_examples(sieve):
    n, bound, ok = brun_titchmarsh_check(100, 4, 1, sieve)
    assert n == 11 and bound == pytest.approx(200 / (2 * math.log(25))) and ok
    assert brun_titchmarsh_check(10**5, 3, 2, sieve)[2]
    assert brun_titchmarsh_check(8, 7, 1, sieve)[2]
    with pytest.raises(DomainError):
        brun_titchmarsh_check(4, 4, 1, sieve)
    for q in (1, 2, 3, 7, 12):
        assert brun_titchmarsh_scan(q, 10**5, sieve)["ok"]


def test_chebyshev(sieve):
    r = chebyshev_checks(10, sieve)
    assert r["theta"] == pytest.approx(math.log(210)) and r["theta_ok"]
    assert r["pi"] == 4 and r["pi_bound"] == pytest.approx(8.686, abs=1e-3) and r["pi_ok"]
    r = chebyshev_checks(3, sieve)
    assert r["theta"] == pytest.approx(math.log(6)) and r["theta_ok"]
    s = chebyshev_scan(2 * 10**5, sieve)
    assert s["theta_ok"] and s["pi_ok"]


def test_theta_partition_identity(sieve):
    for q in range(1, 31):
        for z in (97.5, 10**4, 10**5):
            theta = math.fsum(math.log(p) for p in sieve.primes_in(2, int(z)))
            outside = math.fsum(math.log(p) for p in sympy.primefactors(q) if p <= z)
            parts = []
            for a in range(q):
                if math.gcd(a, q) == 1:
                    parts.append(ap_sum_table(q, a if q > 1 else 0, [z], sieve).theta[0])
            assert math.fsum(parts) == pytest.approx(theta - outside, rel=1e-12)


def test_theta_linear_small_q(sieve):
    for q in (2, 3, 4, 5, 6, 7, 8, 9, 10):
        r = theta_linear_check(q, 2 * 10**5, sieve)
        assert r["ok"] and r["checked"] > 0


def test_first_prime_remark(sieve):
    r = first_prime_remark(1000, 4, 1, sieve)
    assert r["first_prime"] == 5 and r["first_prime_term"] == pytest.approx(0.3219, abs=1e-4)
    assert first_prime_remark(1000, 10, 3, sieve)["first_prime"] == 3
    r = first_prime_remark(10**5, 12, 11, sieve)
    assert set(r) >= {"refined_deviation", "q_pow_minus_third", "asserted"}


def test_table_and_grid(sieve):
    g = geometric_grid(10, 1000)
    assert g[0] == 10 and g[-1] == 1000 and all(b > a for a, b in zip(g, g[1:]))
    t = ap_sum_table(4, 1, [10, 100], sieve)
    assert t.pi == [1, 11]
    assert t.to_csv().splitlines()[0] == "z,q,a,theta,pi,sum_logp_over_p,deviation"


def test_phi():
    for q in range(1, 200):
        assert euler_phi(q) == sympy.totient(q)
