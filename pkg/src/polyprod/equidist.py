"""Root equidistribution experiments for quadratics.

The pairs (p, v) with f(v) = 0 mod p and 0 <= v < p are enumerated prime by
prime; the lemmas built on their equidistribution are then checked by direct
counting.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import Iterator

from .errors import DomainError, InvalidInput, XTooSmall
from .ledger import FactorLedger
from .modarith import PrimeSieve, get_sieve, roots_mod_p
from .polycore import IntPolynomial, discriminant_quadratic, is_irreducible, is_square


@dataclass(frozen=True)
class RootPair:
    p: int
    v: int

    @property
    def ratio(self) -> float:
        return self.v / self.p


def _require_irreducible_quadratic(f: IntPolynomial) -> None:
    if f.degree != 2 or not is_irreducible(f):
        raise InvalidInput(f"{f} is not an irreducible quadratic")


def _sieve(hi: int, sieve: PrimeSieve | None) -> PrimeSieve:
    return sieve if sieve is not None else get_sieve(hi)


def root_pairs(f: IntPolynomial, x: int, sieve: PrimeSieve | None = None) -> Iterator[RootPair]:
    for p in _sieve(x, sieve).primes_in(2, x):
        for v in roots_mod_p(f, p):
            yield RootPair(p, v)


def dfit_count(
    f: IntPolynomial, x: int, alpha: float = 0.0, beta: float = 1.0, sieve: PrimeSieve | None = None
) -> tuple[int, float]:
    """Count pairs with alpha <= v/p < beta and compare with (beta - alpha) pi(x)."""
    if not (0 <= alpha < beta <= 1):
        raise DomainError(f"need 0 <= alpha < beta <= 1, got ({alpha}, {beta})")
    _require_irreducible_quadratic(f)
    sieve = _sieve(x, sieve)
    K = 0
    for p in sieve.primes_in(2, x):
        for v in roots_mod_p(f, p):
            # exact comparison alpha <= v/p < beta without rounding v/p
            if alpha * p <= v < beta * p:
                K += 1
    pi = sieve.pi(x)
    return K, K / ((beta - alpha) * pi) if pi else math.nan


def dfit_csv(f: IntPolynomial, x: int, sieve: PrimeSieve | None = None) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["p", "v", "v_over_p"])
    for rp in root_pairs(f, x, sieve):
        w.writerow([rp.p, rp.v, f"{rp.ratio:.12g}"])
    return buf.getvalue()


def epsilon_for_delta(delta: float, slack: float = 0.1) -> float:
    """Smallest epsilon with 1/2 + eps/2 > 1/(2 - delta), inflated by ``slack``."""
    return (1 + slack) * delta / (2 - delta)


def exact_once_primes(f: IntPolynomial, x: int, delta: float, sieve: PrimeSieve | None = None) -> dict:
    """Primes in ((2-delta)x, 2x] dividing prod_{n<=x} f(n) exactly once."""
    if f.degree != 2 or f.lc != 1:
        raise InvalidInput(f"{f} is not a monic quadratic")
    _require_irreducible_quadratic(f)
    if not (0 < delta < 1):
        raise DomainError("delta must lie in (0, 1)")
    lo = (2 - delta) * x
    if lo * lo <= f(x):
        raise XTooSmall(f"((2-delta)x)^2 = {lo * lo} does not exceed f(x) = {f(x)}")
    # also need f(n) > 0 on [1, x] so every prime divides a value at most once
    if any(f(n) <= 0 for n in range(1, min(x, 10**4) + 1)) or lo * lo <= max(abs(f(1)), abs(f(x))):
        raise XTooSmall("values of f are not all positive and below ((2-delta)x)^2")
    sieve = _sieve(2 * x, sieve)
    window = sieve.primes_in(math.floor(lo) + 1, 2 * x)
    count = 0
    for p in window:
        hits = sum(1 for r in roots_mod_p(f, p) if 1 <= r <= x)
        if hits == 1:
            count += 1
    eps = epsilon_for_delta(delta)
    total = len(window)
    threshold = (0.5 - eps) * total
    return {
        "x": x,
        "delta": delta,
        "epsilon": eps,
        "window_primes": total,
        "count": count,
        "threshold": threshold,
        "meets": count >= threshold,
    }


def prime_in_window(f: IntPolynomial, x: int, a: float, b: float, sieve: PrimeSieve | None = None):
    """First prime a*x < p < b*x dividing some f(n), 1 <= n <= x, with that n; or None."""
    if not (2 < a < b):
        raise DomainError("need 2 < a < b")
    hi = math.ceil(b * x) - 1
    sieve = _sieve(hi, sieve)
    for p in sieve.primes_in(math.floor(a * x) + 1, hi):
        if not (a * x < p < b * x):
            continue
        for v in roots_mod_p(f, p):
            if 1 <= v <= x:
                return p, v
    return None


def common_prime_bound(f1: IntPolynomial, f2: IntPolynomial, x: int) -> dict:
    """Largest prime dividing both prod f1(n) and prod f2(n) (n <= x) against (2|a1 d| + 2|a2 D1| + 1) x."""
    _require_irreducible_quadratic(f1)
    _require_irreducible_quadratic(f2)
    if f1 == f2:
        raise InvalidInput("f1 and f2 must be distinct")
    D1, D2 = discriminant_quadratic(f1), discriminant_quadratic(f2)
    if not is_square(D1 * D2):
        raise InvalidInput(f"D1*D2 = {D1 * D2} is not a square")
    d = math.isqrt(D1 * D2)
    a1, a2 = f1.lc, f2.lc
    L1 = FactorLedger(f1).extend(x)
    L2 = FactorLedger(f2).extend(x)
    common = set(L1.exponents) & set(L2.exponents)
    top = max(common, default=None)
    bound = (2 * abs(a1 * d) + 2 * abs(a2 * D1) + 1) * x
    return {
        "x": x,
        "d": d,
        "max_common_prime": top,
        "bound": bound,
        "ok": top is None or top < bound,
        "degenerate": _vanishing_pair(f1, f2, d, D1, x),
    }


def _vanishing_pair(f1, f2, d, D1, x):
    """First (n, m) in [1, x]^2 with d(2 a1 n + b1) = +-D1(2 a2 m + b2), else None.

    At such a pair f1(n) and f2(m) share every prime factor (up to the
    constants), so no linear bound on common primes can hold.
    """
    b1, a1 = f1.coeffs[1], f1.lc
    b2, a2 = f2.coeffs[1], f2.lc
    for n in range(1, x + 1):
        lhs = d * (2 * a1 * n + b1)
        for s in (1, -1):
            num = s * lhs - D1 * b2
            den = 2 * a2 * D1
            if num % den == 0 and 1 <= num // den <= x:
                return (n, num // den)
    return None


def p_square_bound(f: IntPolynomial, x: int) -> dict:
    """Largest p with p^2 | prod_{n<=x} f(n) against (2 + |b| + |c|) x, f = n^2 + bn + c."""
    if f.degree != 2 or f.lc != 1:
        raise InvalidInput(f"{f} is not a monic quadratic")
    c, b, _ = f.coeffs
    L = FactorLedger(f).extend(x)
    sq = [p for p, e in L.exponents.items() if e >= 2]
    top = max(sq, default=None)
    bound = (2 + abs(b) + abs(c)) * x
    return {"x": x, "max_square_prime": top, "bound": bound, "ok": top is None or top < bound}
