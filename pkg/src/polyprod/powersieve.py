"""Perfect p-th power machinery: fixed-root profiles, prime sequences,
order-p character sums, the Turan sieve and the gap lemma, plus exact
censuses of x with N_x a perfect power or squarefull.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import (
    DomainError,
    EmptyPrimeSet,
    InvalidInput,
    InvalidSeed,
    NoSuchCharacter,
    NotApplicable,
    TheoremInapplicable,
)
from .intfactor import is_prime
from .ledger import FactorLedger
from .modarith import build_character, get_sieve, gf_from_int, gf_mul, gf_sqf_list, roots_mod_p
from .polycore import (
    FactoredPolynomial,
    as_factored,
    is_scaled_pth_power,
    sdisc,
    shifted_product,
)

INT64_Q_LIMIT = 2**31


# --------------------------------------------------------------------------
# d_F and g_F


def _bad_modulus(F: FactoredPolynomial) -> int:
    """Primes dividing this are excluded from root counting."""
    bad = abs(sdisc(F)) * abs(F.scale.numerator) * F.scale.denominator
    for f, _ in F.factors:
        bad *= abs(f.lc)
    return bad


def root_count(F: FactoredPolynomial, q: int) -> int:
    """Number of distinct roots of F modulo the prime q."""
    return len(roots_mod_p(F.radical(), q))


@dataclass
class GaloisProfile:
    d_F: int
    g_F: int
    histogram: dict[int, int]
    primes_scanned: int
    budget: int
    g_F_estimated: bool = True

    @property
    def densities(self) -> dict[int, float]:
        return {k: v / self.primes_scanned for k, v in sorted(self.histogram.items())}

    def to_dict(self) -> dict:
        return {
            "d_F": self.d_F,
            "g_F": self.g_F,
            "g_F_estimated": self.g_F_estimated,
            "budget": self.budget,
            "primes_scanned": self.primes_scanned,
            "histogram": [[k, v] for k, v in sorted(self.histogram.items())],
        }


def estimate_galois_profile(F, P: int = 10**4, g_F: int | None = None) -> GaloisProfile:
    """Histogram of root counts over good primes up to P.

    d_F is the smallest nonzero count seen; g_F defaults to the rounded
    reciprocal of that count's density.  Both are estimates.
    """
    if P < 1000:
        raise DomainError("prime budget must be at least 1000")
    F = as_factored(F)
    if not F.factors:
        raise DomainError("constant polynomial")
    bad = _bad_modulus(F)
    hist: Counter[int] = Counter()
    for q in get_sieve(P).primes_in(2, P):
        if bad % q:
            hist[root_count(F, q)] += 1
    total = sum(hist.values())
    nonzero = [k for k in hist if k > 0]
    if not total or not nonzero:
        raise DomainError("no good primes with a root below the budget")
    d = min(nonzero)
    estimated = g_F is None
    if g_F is None:
        g_F = max(1, round(total / hist[d]))
    return GaloisProfile(d, g_F, dict(hist), total, P, estimated)


# --------------------------------------------------------------------------
# prime sequence


@dataclass
class PrimeSeq:
    p: int
    m: int
    d_F: int
    g_F: int
    primes: list[int]
    windows: list[tuple[float, int]] = field(default_factory=list)
    stopped: str | None = None

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "multiplier": self.m,
            "d_F": self.d_F,
            "g_F": self.g_F,
            "primes": self.primes,
            "windows": [[lo, hi] for lo, hi in self.windows],
            "stopped": self.stopped,
        }


def seq_window(q: int, m: int, g_F: int) -> tuple[float, int]:
    return m * q * (1 - g_F * math.log(q) / q), m * q


def _qualifies(F: FactoredPolynomial, q: int, d: int, bad: int) -> bool:
    return is_prime(q) and bad % q != 0 and root_count(F, q) == d


def build_prime_seq(F, p: int, q1: int, count: int, profile: GaloisProfile | None = None) -> PrimeSeq:
    """Greedy chain q1 < q2 < ... taking the largest qualifying prime in each window."""
    F = as_factored(F)
    if profile is None:
        profile = estimate_galois_profile(F)
    d, g = profile.d_F, profile.g_F
    m = -(-p // d)
    if m < 2:
        raise DomainError(f"ceil(p/d_F) = {m}; windows degenerate")
    if count < 1:
        raise InvalidInput("count must be >= 1")
    bad = _bad_modulus(F)
    if not _qualifies(F, q1, d, bad):
        raise InvalidSeed(f"F does not have exactly {d} roots modulo the good prime {q1}")
    seq = PrimeSeq(p, m, d, g, [q1])
    q = q1
    while len(seq.primes) < count:
        lo, hi = seq_window(q, m, g)
        seq.windows.append((lo, hi))
        nxt = next((c for c in range(hi, max(math.ceil(lo), q + 1) - 1, -1) if _qualifies(F, c, d, bad)), None)
        if nxt is None:
            seq.stopped = f"WindowEmpty: no qualifying prime in [{lo:.6g}, {hi}]"
            break
        seq.primes.append(nxt)
        q = nxt
    return seq


def verify_prime_seq(F, seq: PrimeSeq) -> bool:
    F = as_factored(F)
    bad = _bad_modulus(F)
    if not all(_qualifies(F, q, seq.d_F, bad) for q in seq.primes):
        return False
    for a, b in zip(seq.primes, seq.primes[1:]):
        lo, hi = seq_window(a, seq.m, seq.g_F)
        if not (lo <= b <= hi):
            return False
    return True


# --------------------------------------------------------------------------
# character sums


def _values_mod_q(F: FactoredPolynomial, q: int, ns: np.ndarray) -> np.ndarray:
    """F(n) mod q for an int64 array of n."""
    if q >= INT64_Q_LIMIT:
        raise DomainError(f"q = {q} too large for vectorized evaluation")
    s = F.scale
    if s.numerator % q == 0 or s.denominator % q == 0:
        raise DomainError(f"q = {q} divides the scale {s}")
    out = np.full(ns.shape, s.numerator * pow(s.denominator, -1, q) % q, dtype=np.int64)
    n = ns % q
    for f, e in F.factors:
        v = np.zeros(ns.shape, dtype=np.int64)
        for c in reversed(f.coeffs):
            v = (v * n + c % q) % q
        for _ in range(e):
            out = out * v % q
    return out


def _check_char_preconditions(F: FactoredPolynomial, k: int, q: int, p: int) -> None:
    if not is_prime(p):
        raise DomainError(f"p = {p} is not prime")
    if not is_prime(q):
        raise DomainError(f"q = {q} is not prime")
    if (q - 1) % p:
        raise NoSuchCharacter(f"no character of order {p} modulo {q}")
    if k < 0:
        raise DomainError("k must be >= 0")
    if sdisc(F) % q == 0:
        raise DomainError(f"q = {q} divides sdisc(F)")
    if q <= F.degree * k:
        raise DomainError(f"q = {q} is not larger than deg(F) k = {F.degree * k}")
    if is_scaled_pth_power(F, p):
        raise TheoremInapplicable(f"F is a constant times a {p}-th power")


def _fk_values(F, k: int, q: int, p: int) -> tuple[FactoredPolynomial, np.ndarray]:
    F = as_factored(F)
    _check_char_preconditions(F, k, q, p)
    Fk = shifted_product(F, k)
    return Fk, _values_mod_q(Fk, q, np.arange(q, dtype=np.int64))


def weil_bound(Fk: FactoredPolynomial, q: int) -> float:
    return (Fk.degree - 1) * math.sqrt(q)


def char_sum(F, k: int, q: int, p: int, slack: float = 1e-6) -> dict:
    """|sum_a chi_p(F_k(a))| against (deg F_k - 1) sqrt q."""
    Fk, vals = _fk_values(F, k, q, p)
    s = build_character(q, p).sum_of(vals)
    bound = weil_bound(Fk, q)
    mag = abs(s)
    return {"q": q, "p": p, "k": k, "magnitude": mag, "bound": bound, "ok": mag <= bound + slack}


def count_pth_residue_values(F, k: int, q: int, p: int, slack: float = 1e-6) -> dict:
    """S_k = #{a mod q : F_k(a) is 0 or a nonzero p-th power}.

    Off zeros, |p S - q| equals a sum of p - 1 nontrivial character sums.
    Each zero shifts p S - q by p - 1, so the tight correction is (p-1)*zeros;
    ``ok`` uses the looser p*zeros correction.
    """
    Fk, vals = _fk_values(F, k, q, p)
    chi = build_character(q, p)
    ex = chi.exponents[vals]
    zeros = int(np.count_nonzero(vals == 0))
    S = int(np.count_nonzero(ex == 0)) + zeros
    lhs = abs(p * S - q)
    base = (p - 1) * weil_bound(Fk, q)
    return {
        "q": q,
        "p": p,
        "k": k,
        "S": S,
        "zeros": zeros,
        "lhs": lhs,
        "bound": base,
        "bound_zero_corrected": base + p * zeros,
        "bound_exact_correction": base + (p - 1) * zeros,
        "ok": lhs <= base + p * zeros + slack,
        "ok_exact_correction": lhs <= base + (p - 1) * zeros + slack,
    }


def _gf_expand(Fk: FactoredPolynomial, q: int) -> list[int]:
    s = Fk.scale
    out = [s.numerator * pow(s.denominator, -1, q) % q]
    for f, e in Fk.factors:
        g = gf_from_int(f, q)
        for _ in range(e):
            out = gf_mul(out, g, q)
    return out


def fk_not_power_check(F, k: int, q: int, p: int) -> bool:
    """True iff F_k mod q has an irreducible factor of multiplicity prime to p."""
    F = as_factored(F)
    if not is_prime(q):
        raise DomainError(f"q = {q} is not prime")
    if sdisc(F) % q == 0:
        raise DomainError(f"q = {q} divides sdisc(F)")
    if q <= F.degree * k:
        raise DomainError(f"q = {q} is not larger than deg(F) k = {F.degree * k}")
    if is_scaled_pth_power(F, p):
        raise TheoremInapplicable(f"F is a constant times a {p}-th power")
    if F.scale.numerator % q == 0 or F.scale.denominator % q == 0:
        raise DomainError(f"q = {q} divides the scale")
    poly = _gf_expand(shifted_product(F, k), q)
    return any(e % p for g, e in gf_sqf_list(poly, q) if len(g) > 1)


# --------------------------------------------------------------------------
# Turan sieve


def turan_experiment(F, k: int, p: int, X: int, z: float) -> dict:
    """Direct counts behind the Turan sieve bound for the p-th power residue property of F_k.

    A_q = {n <= X : F_k(n) is not 0 or a p-th power mod q}, delta_q = (p-1)/p,
    over primes q in (z, 2z] with q = 1 mod p and q not dividing sdisc(F_k).
    The pair sum runs over all ordered pairs, diagonal included.
    """
    F = as_factored(F)
    if X < 1:
        raise InvalidInput("X must be >= 1")
    Fk = shifted_product(F, k)
    disc = sdisc(Fk)
    hi = math.floor(2 * z)
    P = [q for q in get_sieve(max(hi, 2)).primes_in(math.floor(z) + 1, hi) if q % p == 1 and disc % q and q > z]
    P = [q for q in P if Fk.scale.numerator % q and Fk.scale.denominator % q]
    if not P:
        raise EmptyPrimeSet(f"no primes q in ({z}, {2 * z}] with q = 1 mod {p} off sdisc(F_k)")
    ns = np.arange(1, X + 1, dtype=np.int64)
    M = np.empty((len(P), X), dtype=np.int64)
    for i, q in enumerate(P):
        vals = _values_mod_q(Fk, q, ns)
        ex = build_character(q, p).exponents[vals]
        M[i] = (ex > 0)
    delta = (p - 1) / p
    U = delta * len(P)
    A = M.sum(axis=1)
    pairs = M @ M.T
    R = A - delta * X
    R2 = pairs - delta * delta * X
    sum_R = float(np.abs(R).sum())
    sum_R2 = float(np.abs(R2).sum())
    survivors = int(np.count_nonzero(M.sum(axis=0) == 0))
    bound = X / U + 2 * sum_R / U + sum_R2 / U**2
    return {
        "X": X,
        "z": z,
        "k": k,
        "p": p,
        "primes": len(P),
        "U": U,
        "sum_abs_R": sum_R,
        "sum_abs_R_pairs": sum_R2,
        "survivors": survivors,
        "bound": bound,
        "ok": survivors <= bound,
    }


# --------------------------------------------------------------------------
# gap lemma


def _validate_set(S: Sequence[int], X: int) -> list[int]:
    s = sorted(set(int(v) for v in S))
    if len(s) != len(S):
        raise InvalidInput("S has repeated elements")
    if s and (s[0] < 1 or s[-1] > X):
        raise InvalidInput(f"S must lie in [1, {X}]")
    return s


def gap_structure(S: Sequence[int], X: int) -> dict[int, int]:
    """k -> |S(X)_k|, the number of s in S whose successor in S is s + k."""
    s = _validate_set(S, X)
    return dict(sorted(Counter(np.diff(np.asarray(s, dtype=np.int64)).tolist()).items()))


def gap_lemma_report(S: Sequence[int], X: int, K: float) -> dict:
    s = _validate_set(S, X)
    if not K < X:
        raise NotApplicable(f"needs K < X, got K={K}, X={X}")
    if not len(s) * K > X:
        raise NotApplicable(f"needs |S| > X/K, got |S|={len(s)}, X/K={X / K}")
    gaps = gap_structure(s, X)
    need = 2 * X / K**3
    witness = next((k for k in range(1, math.floor(K) + 1) if gaps.get(k, 0) >= need), None)
    return {"X": X, "K": K, "size": len(s), "threshold": need, "gaps": gaps, "witness": witness, "holds": witness is not None}


def gap_lemma_check(S: Sequence[int], X: int, K: float) -> bool:
    return gap_lemma_report(S, X, K)["holds"]


# --------------------------------------------------------------------------
# exact censuses over x <= X


def _sweep(F, X: int, modulus: int, cache=None):
    """Yield (x, ledger, bad) where bad counts primes whose exponent is not divisible by ``modulus``."""
    L = FactorLedger(F)
    bad = 0
    for vf in L.steps(X, cache=cache):
        for q, e in vf.factors:
            new = L.exponents[q]
            old = new - e
            bad += (new % modulus != 0) - (old % modulus != 0)
        yield vf.n, L, bad


def power_scan(F, power: int, X: int, cache=None) -> dict:
    """x <= X with |N_x| > 1 a perfect ``power``-th power (sign respected for even powers)."""
    if power < 2:
        raise DomainError("power must be >= 2")
    hits, trivial = [], []
    zero_from = None
    for x, L, bad in _sweep(F, X, power, cache):
        if L.zero_seen:
            zero_from = L.zeros[0]
            break
        if L.is_unit():
            trivial.append(x)
        elif bad == 0 and not (power % 2 == 0 and L.negative_count % 2):
            hits.append(x)
    return {"X": X, "power": power, "hits": hits, "count": len(hits), "trivial_units": trivial, "zero_from": zero_from}


def squarefull_scan(F, X: int, x_min: int = 1, cache=None) -> dict:
    hits, trivial = [], []
    zero_from = None
    L = FactorLedger(F)
    for vf in L.steps(X, cache=cache):
        x = vf.n
        if L.zero_seen:
            zero_from = L.zeros[0]
            break
        if x < x_min:
            continue
        if L.is_unit():
            trivial.append(x)
        elif L.is_squarefull():
            hits.append(x)
    return {"X": X, "x_min": x_min, "hits": hits, "count": len(hits), "trivial_units": trivial, "zero_from": zero_from}


def pth_power_census(F, p: int, X: int, profile: GaloisProfile | None = None, cache=None) -> dict:
    """Exact list of x <= X with N_x a perfect p-th power, next to both growth exponents."""
    if not is_prime(p):
        raise DomainError(f"p = {p} is not prime")
    G = as_factored(F)
    if is_scaled_pth_power(G, p):
        raise TheoremInapplicable(f"F is a constant times a {p}-th power")
    if profile is None:
        profile = estimate_galois_profile(G)
    scan = power_scan(F, p, X, cache)
    m = -(-p // profile.d_F)
    if m >= 2:
        expo = math.log(profile.d_F + 1) / math.log(m)
        fixed_root_bound = X**expo
    else:
        expo, fixed_root_bound = None, math.inf
    return {
        "p": p,
        "X": X,
        "hits": scan["hits"],
        "count": scan["count"],
        "trivial_units": scan["trivial_units"],
        "zero_from": scan["zero_from"],
        "d_F": profile.d_F,
        "multiplier": m,
        "general_bound": X ** (24 / 25),
        "fixed_root_exponent": expo,
        "fixed_root_bound": fixed_root_bound,
    }
