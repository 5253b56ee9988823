"""Prime-exponent ledger of N_x = F(1) F(2) ... F(x).

The ledger factors each value F(n) once and folds the result into a map
``prime -> exponent``.  Power and squarefull questions are judged on |N_x|;
the sign is tracked separately through ``negative_count``.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterator

from .errors import InvalidInput, NoPrimes, UndefinedProduct
from .intfactor import factorint
from .polycore import FactoredPolynomial, IntPolynomial, factor_terms

BLOCK = 1000


@dataclass(frozen=True)
class ValueFactorization:
    n: int
    value: int
    factors: tuple[tuple[int, int], ...]
    sign: int

    def product(self) -> int:
        out = self.sign
        for p, e in self.factors:
            out *= p**e
        return out


def factor_value(F, n: int) -> ValueFactorization:
    scale, factors = factor_terms(F)
    value = scale
    sign = 1 if scale > 0 else -1
    exps: dict[int, int] = {}
    for f, e in factors:
        v = f(n)
        if v == 0:
            return ValueFactorization(n, 0, (), 0)
        value *= v**e
        if v < 0 and e % 2:
            sign = -sign
        for p, a in factorint(v).items():
            exps[p] = exps.get(p, 0) + a * e
    if value.denominator != 1:
        raise InvalidInput(f"F({n}) = {value} is not an integer")
    for p, a in factorint(scale.numerator).items():
        exps[p] = exps.get(p, 0) + a
    for p, a in factorint(scale.denominator).items():
        exps[p] = exps.get(p, 0) - a
    return ValueFactorization(n, int(value), tuple(sorted((p, e) for p, e in exps.items() if e)), sign)


def _factor_range(F, lo: int, hi: int) -> list[ValueFactorization]:
    return [factor_value(F, n) for n in range(lo, hi + 1)]


@dataclass
class FactorLedger:
    poly: IntPolynomial | FactoredPolynomial
    x: int = 0
    exponents: dict[int, int] = field(default_factory=dict)
    negative_count: int = 0
    zero_seen: bool = False
    zeros: list[int] = field(default_factory=list)
    _ones: int = field(default=0, repr=False)
    _max_prime: int = field(default=1, repr=False)

    # -- building -------------------------------------------------------

    def apply(self, vf: ValueFactorization) -> None:
        """Fold the factorization of F(cursor + 1) into the ledger."""
        if vf.n != self.x + 1:
            raise InvalidInput(f"expected n={self.x + 1}, got {vf.n}")
        self.x = vf.n
        if vf.value == 0:
            self.zero_seen = True
            self.zeros.append(vf.n)
            return
        if vf.sign < 0:
            self.negative_count += 1
        ex = self.exponents
        for p, e in vf.factors:
            old = ex.get(p, 0)
            new = old + e
            ex[p] = new
            if old == 1:
                self._ones -= 1
            if new == 1:
                self._ones += 1
            if p > self._max_prime:
                self._max_prime = p

    def steps(self, to_x: int, cache=None) -> Iterator[ValueFactorization]:
        """Extend one value at a time, yielding each factorization after it is applied."""
        if to_x < self.x:
            raise InvalidInput(f"cannot extend backwards from {self.x} to {to_x}")
        while self.x < to_x:
            n = self.x + 1
            block_start = (n - 1) // BLOCK * BLOCK + 1
            block_end = block_start + BLOCK - 1
            if cache is not None and block_end <= to_x:
                block = cache.get_block(self.poly, block_start, block_end)
                if block is None:
                    block = _factor_range(self.poly, block_start, block_end)
                    cache.put_block(self.poly, block_start, block_end, block)
                batch = block[n - block_start :]
            else:
                batch = _factor_range(self.poly, n, min(to_x, block_end))
            for vf in batch:
                self.apply(vf)
                yield vf

    def extend(self, to_x: int, workers: int = 1, cache=None) -> FactorLedger:
        if to_x < self.x:
            raise InvalidInput(f"cannot extend backwards from {self.x} to {to_x}")
        if workers > 1 and cache is None and to_x - self.x > 4 * BLOCK:
            bounds = []
            lo = self.x + 1
            while lo <= to_x:
                hi = min(to_x, lo + BLOCK - 1)
                bounds.append((lo, hi))
                lo = hi + 1
            with ProcessPoolExecutor(max_workers=workers) as pool:
                futures = [pool.submit(_factor_range, self.poly, a, b) for a, b in bounds]
                for fut in futures:
                    for vf in fut.result():
                        self.apply(vf)
            return self
        for _ in self.steps(to_x, cache=cache):
            pass
        return self

    # -- queries --------------------------------------------------------

    def _require_defined(self) -> None:
        if self.zero_seen:
            raise UndefinedProduct(f"F vanishes at n={self.zeros[0]}")

    @property
    def sign(self) -> int:
        if self.zero_seen:
            return 0
        return -1 if self.negative_count % 2 else 1

    def alpha(self, p: int) -> int:
        return self.exponents.get(p, 0)

    def is_unit(self) -> bool:
        return not self.exponents

    def is_squarefull(self) -> bool:
        self._require_defined()
        return self._ones == 0

    def perfect_power_exponent(self) -> int:
        """gcd of all exponents; 0 stands for |N_x| = 1."""
        self._require_defined()
        g = 0
        for e in self.exponents.values():
            g = math.gcd(g, e)
            if g == 1:
                break
        return g

    def is_perfect_pth(self, p: int) -> bool:
        self._require_defined()
        if p % 2 == 0 and self.negative_count % 2:
            return False
        return all(e % p == 0 for e in self.exponents.values())

    def largest_prime(self) -> int:
        self._require_defined()
        if not self.exponents:
            raise NoPrimes("|N_x| = 1 has no prime factors")
        return self._max_prime

    def log_abs(self) -> float:
        return math.fsum(e * math.log(p) for p, e in self.exponents.items())

    def squarefree_part_statistic(self) -> float:
        """log(squarefree part) / log|N_x|; reported, never asserted."""
        self._require_defined()
        total = self.log_abs()
        if total == 0:
            return 0.0
        odd = math.fsum(math.log(p) for p, e in self.exponents.items() if e % 2)
        return odd / total

    def reconstruct(self) -> int:
        out = -1 if self.negative_count % 2 else 1
        for p, e in self.exponents.items():
            out *= p**e
        return 0 if self.zero_seen else out

    # -- serialization --------------------------------------------------

    def snapshot(self) -> dict:
        return {
            "poly": self.poly.to_text(),
            "x": self.x,
            "sign": self.sign,
            "exponents": [[p, e] for p, e in sorted(self.exponents.items())],
        }

    def to_json(self) -> str:
        return json.dumps(self.snapshot(), sort_keys=True)

    @classmethod
    def from_snapshot(cls, data: dict, poly) -> FactorLedger:
        L = cls(poly)
        L.x = data["x"]
        L.exponents = {int(p): int(e) for p, e in data["exponents"]}
        L.zero_seen = data["sign"] == 0
        L.negative_count = 1 if data["sign"] < 0 else 0
        L._ones = sum(1 for e in L.exponents.values() if e == 1)
        L._max_prime = max(L.exponents, default=1)
        return L


def build_ledger(F, x: int, **kw) -> FactorLedger:
    return FactorLedger(F).extend(x, **kw)


# --------------------------------------------------------------------------
# Checks specific to F(n) = n^2 + D


def monic_shift_constant(F) -> int:
    """Return D when F is n^2 + D, else raise."""
    scale, factors = factor_terms(F)
    if scale == 1 and len(factors) == 1 and factors[0][1] == 1:
        P = factors[0][0]
        if P.degree == 2 and P.coeffs[1] == 0 and P.coeffs[2] == 1:
            return P.coeffs[0]
    raise InvalidInput(f"{F} is not of the form n^2 + D")


def log_lower_bound_check(L: FactorLedger) -> tuple[float, float, bool]:
    """Compare log N_x with 2x log x - 2x for F = n^2 + D."""
    D = monic_shift_constant(L.poly)
    if D < 1 or L.x < 1:
        raise InvalidInput("needs D >= 1 and x >= 1")
    x = L.x
    lhs = math.fsum(math.log(n * n + D) for n in range(1, x + 1))
    rhs = 2 * x * math.log(x) - 2 * x
    return lhs, rhs, lhs >= rhs


def p_adic_valuation(n: int, p: int) -> int:
    if n == 0:
        raise InvalidInput("valuation of zero")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def alpha_bound(x: int, p: int, D: int) -> float:
    """Upper bound on the exponent of p in prod_{n<=x}(n^2 + D)."""
    scale = p ** p_adic_valuation(D, p)
    return scale * (2 * x / (p - 1) + 2 * math.log(x * x + D) / math.log(p))


def alpha_bound_check(L: FactorLedger, p: int, D: int | None = None) -> tuple[int, float, bool]:
    if D is None:
        D = monic_shift_constant(L.poly)
    a = L.alpha(p)
    b = alpha_bound(L.x, p, D)
    return a, b, a <= b
