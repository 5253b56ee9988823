"""Primes, residue symbols, modular roots and order-p characters."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import CapExceeded, DomainError, NoSuchCharacter, SieveTooSmall
from .intfactor import factorint, is_prime
from .polycore import IntPolynomial

ENUMERATION_CAP = 10**6


# --------------------------------------------------------------------------
# Sieve


def _sieve_flags(limit: int) -> np.ndarray:
    flags = np.ones(limit + 1, dtype=bool)
    flags[: min(2, limit + 1)] = False
    for p in range(2, math.isqrt(limit) + 1):
        if flags[p]:
            flags[p * p :: p] = False
    return flags


@dataclass
class PrimeSieve:
    """All primes up to ``limit``, with a lazily built per-class index."""

    limit: int
    flags: np.ndarray = field(repr=False, default=None)
    _primes: np.ndarray = field(init=False, repr=False, default=None)
    _classes: dict = field(init=False, repr=False, default_factory=dict)

    def __post_init__(self):
        if self.limit < 1:
            raise DomainError("sieve limit must be >= 1")
        if self.flags is None:
            self.flags = _sieve_flags(self.limit)
        elif len(self.flags) != self.limit + 1:
            raise DomainError("flag array does not match limit")
        self._primes = np.flatnonzero(self.flags).astype(np.int64)

    @property
    def primes(self) -> np.ndarray:
        return self._primes

    def __contains__(self, n: int) -> bool:
        if n > self.limit:
            raise SieveTooSmall(f"{n} exceeds sieve limit {self.limit}")
        return n >= 2 and bool(self.flags[n])

    def _check(self, hi: int) -> None:
        if hi > self.limit:
            raise SieveTooSmall(f"{hi} exceeds sieve limit {self.limit}")

    def class_primes(self, q: int, a: int) -> np.ndarray:
        key = (q, a % q)
        if key not in self._classes:
            ps = self._primes
            self._classes[key] = ps[ps % q == a % q]
        return self._classes[key]

    def primes_array(self, lo: int, hi: int, cls: tuple[int, int] | None = None) -> np.ndarray:
        self._check(hi)
        ps = self._primes if cls is None else self.class_primes(*cls)
        i = np.searchsorted(ps, lo, side="left")
        j = np.searchsorted(ps, hi, side="right")
        return ps[i:j]

    def primes_in(self, lo: int, hi: int, cls: tuple[int, int] | None = None) -> list[int]:
        return [int(p) for p in self.primes_array(lo, hi, cls)]

    def pi(self, z: float) -> int:
        """Prime counting function (z may be fractional)."""
        zi = math.floor(z)
        self._check(zi)
        return int(np.searchsorted(self._primes, zi, side="right"))


_default_sieve: PrimeSieve | None = None


def get_sieve(limit: int) -> PrimeSieve:
    """Shared process-wide sieve, rebuilt larger on demand."""
    global _default_sieve
    if _default_sieve is None or _default_sieve.limit < limit:
        size = max(limit, 1000)
        if _default_sieve is not None:
            size = max(size, 2 * _default_sieve.limit)
        _default_sieve = PrimeSieve(size)
    return _default_sieve


def install_sieve(sieve: PrimeSieve) -> None:
    """Make ``sieve`` the shared one if it is larger than the current one."""
    global _default_sieve
    if _default_sieve is None or _default_sieve.limit < sieve.limit:
        _default_sieve = sieve


def primes_in(lo: int, hi: int, cls: tuple[int, int] | None = None, sieve: PrimeSieve | None = None) -> list[int]:
    sieve = sieve if sieve is not None else get_sieve(hi)
    return sieve.primes_in(lo, hi, cls)


# --------------------------------------------------------------------------
# Symbols and square roots


def jacobi(a: int, n: int) -> int:
    if n < 1 or n % 2 == 0:
        raise DomainError(f"Jacobi symbol needs odd positive modulus, got {n}")
    a %= n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def legendre(a: int, p: int) -> int:
    """Legendre symbol for any prime p, including p = 2 (as the Kronecker symbol)."""
    if p == 2:
        return 0 if a % 2 == 0 else (1 if a % 8 in (1, 7) else -1)
    return jacobi(a, p)


def _tonelli_shanks(a: int, p: int) -> int:
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while jacobi(z, p) != -1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c = i, b * b % p
        t, r = t * c % p, r * b % p
    return r


def sqrt_mod_p(a: int, p: int, *, check_prime: bool = True) -> tuple[int, ...]:
    """Square roots of ``a`` modulo the prime ``p`` as a sorted tuple (possibly empty)."""
    if check_prime and not is_prime(p):
        raise DomainError(f"{p} is not prime")
    a %= p
    if a == 0:
        return (0,)
    if p == 2:
        return (1,)
    if jacobi(a, p) != 1:
        return ()
    r = _tonelli_shanks(a, p)
    return tuple(sorted({r, p - r}))


# --------------------------------------------------------------------------
# Polynomial roots modulo p and p^j


def _reduce(P: IntPolynomial, m: int) -> list[int]:
    out = [c % m for c in P.coeffs]
    while out and out[-1] == 0:
        out.pop()
    return out


def _enumerate_roots(coeffs: Sequence[int], p: int) -> list[int]:
    if p > ENUMERATION_CAP:
        raise CapExceeded(f"root enumeration modulo {p} exceeds cap {ENUMERATION_CAP}")
    r = np.arange(p, dtype=np.int64)
    acc = np.zeros(p, dtype=np.int64)
    for c in reversed(coeffs):
        acc = (acc * r + c) % p
    return [int(v) for v in np.flatnonzero(acc == 0)]


def roots_mod_p(P: IntPolynomial, p: int) -> list[int]:
    """Distinct roots of P in [0, p), sorted.  ``p`` must be prime."""
    c = _reduce(P, p)
    if not c:
        if p > ENUMERATION_CAP:
            raise CapExceeded(f"P vanishes identically modulo {p}")
        return list(range(p))
    d = len(c) - 1
    if d == 0:
        return []
    if d == 1:
        return [(-c[0]) * pow(c[1], -1, p) % p]
    if d == 2 and p != 2:
        c0, b, a = c
        disc = (b * b - 4 * a * c0) % p
        inv2a = pow(2 * a, -1, p)
        return sorted({(-b + s) * inv2a % p for s in sqrt_mod_p(disc, p, check_prime=False)})
    return _enumerate_roots(c, p)


def lift_roots(P: IntPolynomial, p: int, j: int) -> list[int]:
    """All roots of P modulo ``p**j``.

    Simple roots lift uniquely by Newton/Hensel steps; roots where P' vanishes
    mod p are lifted by testing all p candidates at each level.
    """
    if j < 1:
        raise DomainError("j must be >= 1")
    dP = P.derivative()
    roots = roots_mod_p(P, p)
    mod = p
    for _ in range(j - 1):
        nxt = mod * p
        lifted = set()
        for r in roots:
            d = dP(r) % p
            if d:
                lifted.add((r - P(r) * pow(d, -1, p)) % nxt)
            else:
                for t in range(p):
                    cand = r + t * mod
                    if P(cand) % nxt == 0:
                        lifted.add(cand)
        roots = sorted(lifted)
        mod = nxt
    return roots


# --------------------------------------------------------------------------
# Polynomials over F_q, as ascending coefficient lists without trailing zeros


def gf_strip(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def gf_from_int(P: IntPolynomial, q: int) -> list[int]:
    return _reduce(P, q)


def gf_monic(a: list[int], q: int) -> list[int]:
    if not a:
        return []
    inv = pow(a[-1], -1, q)
    return [x * inv % q for x in a]


def gf_mul(a: list[int], b: list[int], q: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % q
    return gf_strip(out)


def gf_divmod(a: list[int], b: list[int], q: int) -> tuple[list[int], list[int]]:
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    a = list(a)
    db = len(b) - 1
    inv = pow(b[-1], -1, q)
    if len(a) - 1 < db:
        return [], a
    quo = [0] * (len(a) - db)
    for i in range(len(a) - 1, db - 1, -1):
        coef = a[i] * inv % q
        quo[i - db] = coef
        if coef:
            for j in range(db + 1):
                a[i - db + j] = (a[i - db + j] - coef * b[j]) % q
    return gf_strip(quo), gf_strip(a[:db])


def gf_gcd(a: list[int], b: list[int], q: int) -> list[int]:
    a, b = gf_strip(list(a)), gf_strip(list(b))
    while b:
        a, b = b, gf_divmod(a, b, q)[1]
    return gf_monic(a, q)


def gf_deriv(a: list[int], q: int) -> list[int]:
    return gf_strip([i * c % q for i, c in enumerate(a)][1:])


def gf_pth_root(a: list[int], q: int) -> list[int]:
    """Inverse of Frobenius for a polynomial whose derivative vanishes."""
    # over a prime field x^q = x on coefficients, so only exponents shrink
    return [a[i] for i in range(0, len(a), q)]


def gf_sqf_list(a: list[int], q: int) -> list[tuple[list[int], int]]:
    """Squarefree decomposition of a nonconstant polynomial over F_q.

    Returns ``[(g_i, i)]`` with ``monic(a) = prod g_i^i`` and the g_i squarefree
    and pairwise coprime.
    """
    a = gf_monic(gf_strip(list(a)), q)
    out: dict[int, list[int]] = {}

    def rec(f: list[int], mult: int) -> None:
        if len(f) <= 1:
            return
        df = gf_deriv(f, q)
        if not df:
            rec(gf_pth_root(f, q), mult * q)
            return
        c = gf_gcd(f, df, q)
        w = gf_divmod(f, c, q)[0]
        i = 1
        while len(w) > 1:
            y = gf_gcd(w, c, q)
            z = gf_divmod(w, y, q)[0]
            if len(z) > 1:
                prev = out.get(i * mult)
                out[i * mult] = z if prev is None else gf_mul(prev, z, q)
            i += 1
            w = y
            c = gf_divmod(c, y, q)[0]
        if len(c) > 1:
            rec(gf_pth_root(c, q), mult * q)

    rec(a, 1)
    return [(gf_monic(g, q), m) for m, g in sorted(out.items())]


def poly_gcd_mod_q(P1: IntPolynomial, P2: IntPolynomial, q: int) -> list[int]:
    """Monic gcd over F_q as an ascending coefficient list (``[1]`` for coprime)."""
    if not is_prime(q):
        raise DomainError(f"{q} is not prime")
    a, b = gf_from_int(P1, q), gf_from_int(P2, q)
    if not a and not b:
        raise DomainError("both polynomials vanish modulo q")
    return gf_gcd(a, b, q)


# --------------------------------------------------------------------------
# Multiplicative characters of prime order


def primitive_root(q: int) -> int:
    if q == 2:
        return 1
    factors = list(factorint(q - 1))
    g = 2
    while any(pow(g, (q - 1) // f, q) == 1 for f in factors):
        g += 1
    return g


@dataclass(frozen=True)
class CharacterTable:
    """One nontrivial character chi of order ``p`` modulo the prime ``q``.

    ``exponents[a]`` is ``ind_g(a) mod p`` so that ``chi(a) = omega**exponents[a]``
    with ``omega = exp(2 pi i / p)``; ``exponents[0] == -1`` marks chi(0) = 0.
    """

    q: int
    p: int
    g: int
    exponents: np.ndarray = field(repr=False, compare=False)

    def exponent(self, a: int) -> int:
        return int(self.exponents[a % self.q])

    def __call__(self, a: int) -> complex:
        e = self.exponent(a)
        return 0j if e < 0 else cmath.exp(2j * math.pi * e / self.p)

    def is_pth_power(self, a: int) -> bool:
        """True for nonzero p-th power residues."""
        return self.exponent(a) == 0

    def sum_of(self, values: np.ndarray) -> complex:
        """Sum of chi over ``values`` (already reduced mod q).

        Counts per exponent class are accumulated exactly; only the final
        combination with the roots of unity is done in floating point.
        """
        ex = self.exponents[values]
        counts = np.bincount(ex[ex >= 0], minlength=self.p)
        return sum(int(c) * cmath.exp(2j * math.pi * j / self.p) for j, c in enumerate(counts))


def build_character(q: int, p: int) -> CharacterTable:
    if not is_prime(q):
        raise DomainError(f"{q} is not prime")
    if (q - 1) % p != 0 or p < 2:
        raise NoSuchCharacter(f"no character of order {p} modulo {q}")
    g = primitive_root(q)
    ex = np.full(q, -1, dtype=np.int64)
    x = 1
    for k in range(q - 1):
        ex[x] = k % p
        x = x * g % q
    return CharacterTable(q, p, g, ex)
