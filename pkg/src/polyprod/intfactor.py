"""Integer factorization for polynomial values.

Trial division by primes up to ``TRIAL_BOUND`` (stopping early once the
cofactor is prime or smaller than p^2), then Pollard rho in Brent's form with
a deterministic Miller-Rabin test.  The 13 prime bases up to 41 make
Miller-Rabin exact below 3.3e24; above that more bases are used and the test
is only probabilistic, which is outside the supported range anyway.
"""

from __future__ import annotations

import math
from functools import lru_cache

TRIAL_BOUND = 10**6
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
_MR_EXACT_BELOW = 3_317_044_064_679_887_385_961_981
_MR_EXTRA = (43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97)


@lru_cache(maxsize=4)
def small_primes(bound: int) -> tuple[int, ...]:
    if bound < 2:
        return ()
    flags = bytearray([1]) * (bound + 1)
    flags[0:2] = b"\x00\x00"
    for p in range(2, math.isqrt(bound) + 1):
        if flags[p]:
            flags[p * p :: p] = bytes(len(range(p * p, bound + 1, p)))
    return tuple(i for i, f in enumerate(flags) if f)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    bases = _MR_BASES if n < _MR_EXACT_BELOW else _MR_BASES + _MR_EXTRA
    for a in bases:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def pollard_brent(n: int) -> int:
    """Return a nontrivial divisor of the odd composite ``n``."""
    if n % 2 == 0:
        return 2
    c = 1
    while True:
        y, m, g, r, q = 2, 128, 1, 1, 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g
        c += 1


def _add(out: dict[int, int], p: int, e: int = 1) -> None:
    out[p] = out.get(p, 0) + e


def factorint(n: int, trial_bound: int = TRIAL_BOUND) -> dict[int, int]:
    """Prime factorization of ``|n|`` as ``{prime: exponent}``; empty for 0 and 1."""
    n = abs(n)
    out: dict[int, int] = {}
    if n < 2:
        return out
    primes = small_primes(trial_bound)
    checked_prime = False
    for i, p in enumerate(primes):
        if p * p > n:
            break
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out[p] = e
            checked_prime = False
        # past the first few primes, a prime cofactor ends the scan early
        if i >= 168 and (i & 255) == 0 and not checked_prime:
            if is_prime(n):
                break
            checked_prime = True
    if n == 1:
        return out
    stack = [n]
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if is_prime(m):
            _add(out, m)
            continue
        r = math.isqrt(m)
        if r * r == m:
            stack.extend((r, r))
            continue
        d = pollard_brent(m)
        stack.extend((d, m // d))
    return dict(sorted(out.items()))
