"""Discriminant criteria deciding which squarefull theorem covers a product.

Given quadratics f_i with discriminants D_i (the first one distinguished),
``j_f`` and ``j_f_prime`` are the signed counts over square-product subsets
that gate the theorems; ``legendre_pattern_classes`` turns a positive
``j_f`` into explicit residue classes of primes that divide values of f_1
and never values of the other f_i.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from .errors import DomainError, InternalInconsistency, InvalidInput
from .intfactor import is_prime
from .modarith import jacobi
from .polycore import IntPolynomial, discriminant_quadratic, is_irreducible, is_square


@dataclass(frozen=True)
class DiscriminantProfile:
    D: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "D", tuple(int(d) for d in self.D))
        if not self.D:
            raise InvalidInput("empty discriminant profile")
        for d in self.D:
            if d == 0 or is_square(d):
                raise InvalidInput(f"discriminant {d} is zero or a square (reducible quadratic)")

    @classmethod
    def of(cls, fs: Sequence[IntPolynomial]) -> DiscriminantProfile:
        return cls(tuple(discriminant_quadratic(f) for f in fs))

    def reindexed(self, first: int) -> DiscriminantProfile:
        rest = self.D[:first] + self.D[first + 1 :]
        return DiscriminantProfile((self.D[first],) + rest)


def square_subsets(profile: DiscriminantProfile) -> list[tuple[int, ...]]:
    """Nonempty index subsets (0-based) whose discriminant product is a square."""
    idx = range(len(profile.D))
    out = []
    for r in range(1, len(profile.D) + 1):
        for J in combinations(idx, r):
            if is_square(math.prod(profile.D[j] for j in J)):
                out.append(J)
    return out


def j_f(profile: DiscriminantProfile) -> int:
    return 1 + sum((-1) ** len([j for j in J if j != 0]) for J in square_subsets(profile))


def j_f_prime(profile: DiscriminantProfile) -> int:
    return 1 + sum((-1) ** len(J) for J in square_subsets(profile))


@dataclass(frozen=True)
class ResidueCriterion:
    modulus: int
    classes: tuple[int, ...]

    def __contains__(self, p: int) -> bool:
        return math.gcd(p, self.modulus) == 1 and p % self.modulus in set(self.classes)


def _pattern_classes(profile: DiscriminantProfile, signs: Sequence[int]) -> ResidueCriterion:
    M = 4 * math.prod(abs(d) for d in profile.D)
    classes = tuple(
        a
        for a in range(1, M, 2)
        if math.gcd(a, M) == 1 and all(jacobi(d, a) == s for d, s in zip(profile.D, signs))
    )
    return ResidueCriterion(M, classes)


def legendre_pattern_classes(profile: DiscriminantProfile) -> ResidueCriterion:
    """Units a mod 4*prod|D_i| such that primes p = a have (D_1|p) = 1 and (D_i|p) = -1 for i > 1.

    For odd positive a the Jacobi symbol (D|a) depends only on a mod 4|D|,
    so the pattern read off the representative holds for every prime in the
    class.  The number of classes is exactly phi(M) * j_f / 2^I.
    """
    jf = j_f(profile)
    if jf <= 0:
        raise DomainError(f"J_f = {jf} is not positive")
    crit = _pattern_classes(profile, (1,) + (-1,) * (len(profile.D) - 1))
    if not crit.classes:
        raise InternalInconsistency(f"J_f = {jf} > 0 but no residue class has the pattern")
    return crit


def nonresidue_classes(profile: DiscriminantProfile) -> ResidueCriterion:
    """Classes of primes dividing no value of any f_i (every (D_i|p) = -1)."""
    return _pattern_classes(profile, (-1,) * len(profile.D))


# --------------------------------------------------------------------------
# Theorem applicability


@dataclass
class TheoremCheck:
    theorem: str
    applies: bool
    reason: str


@dataclass
class ApplicabilityReport:
    checks: list[TheoremCheck] = field(default_factory=list)
    matched: str = "none"

    def add(self, theorem: str, applies: bool, reason: str) -> None:
        self.checks.append(TheoremCheck(theorem, applies, reason))

    def get(self, theorem: str) -> TheoremCheck:
        for c in self.checks:
            if c.theorem == theorem:
                return c
        raise KeyError(theorem)

    def to_dict(self) -> dict:
        return {
            "matched": self.matched,
            "theorems": [
                {"theorem": c.theorem, "applies": c.applies, "reason": c.reason} for c in self.checks
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


# order in which a match is reported; conclusions are "finitely often squarefull"
# except QuadLinearSquare, which concludes "finitely often a perfect square"
THEOREM_ORDER = ("ThmWeak", "ThmStrong", "QuadLinearCoprime", "QuadLinearSquare")


def _is_monic(f: IntPolynomial) -> bool:
    return f.lc == 1


def _best_distinguished(fs: Sequence[IntPolynomial], profile: DiscriminantProfile):
    """First monic f_i that, moved to the front, makes J_f positive."""
    tried = []
    for i, f in enumerate(fs):
        if not _is_monic(f):
            continue
        jf = j_f(profile.reindexed(i))
        tried.append((i, jf))
        if jf > 0:
            return i, jf, tried
    return None, None, tried


def _validate_inputs(fs: Sequence[IntPolynomial], gs: Sequence[IntPolynomial]) -> None:
    for f in fs:
        if f.degree != 2:
            raise InvalidInput(f"{f} is not quadratic")
        if not is_irreducible(f):
            raise InvalidInput(f"{f} is reducible")
    for i in range(len(fs)):
        for j in range(i + 1, len(fs)):
            if fs[i] == fs[j]:
                raise InvalidInput(f"duplicate quadratic {fs[i]}")
    for g in gs:
        if g.degree != 1:
            raise InvalidInput(f"{g} is not linear")
        b, a = g.coeffs
        if b % a == 0 and -b // a >= 1:
            raise InvalidInput(f"{g} vanishes at n = {-b // a}")
    for i in range(len(gs)):
        for j in range(i + 1, len(gs)):
            if gs[i] == gs[j]:
                raise InvalidInput(f"duplicate linear term {gs[i]}")


def check_applicability(fs: Sequence[IntPolynomial], gs: Sequence[IntPolynomial] = ()) -> ApplicabilityReport:
    fs, gs = list(fs), list(gs)
    _validate_inputs(fs, gs)
    rep = ApplicabilityReport()
    profile = DiscriminantProfile.of(fs) if fs else None
    Ds = profile.D if profile else ()
    all_monic = all(_is_monic(f) for f in fs)

    # ThmWeak: monic quadratics only, D_1 D_i square for every i
    if not fs:
        rep.add("ThmWeak", False, "no quadratic factors")
    elif gs:
        rep.add("ThmWeak", False, "linear factors present")
    elif not all_monic:
        rep.add("ThmWeak", False, "some quadratic is not monic")
    else:
        bad = [i + 1 for i in range(len(Ds)) if not is_square(Ds[0] * Ds[i])]
        if bad:
            rep.add("ThmWeak", False, f"D_1*D_i not a square for i in {bad}")
        else:
            rep.add("ThmWeak", True, "D_1*D_i is a square for all i")

    # ThmStrong (and NotSquarefull for f_1 alone): monic f_1 with J_f > 0
    first, jf, tried = _best_distinguished(fs, profile) if fs else (None, None, [])
    if first is None:
        why = "no quadratic factors" if not fs else (
            "no monic quadratic" if not tried else f"J_f <= 0 for every monic choice of f_1: {tried}"
        )
        rep.add("NotSquarefull", False, why)
        rep.add("ThmStrong", False, why)
    else:
        tag = f"f_1 = {fs[first]} (index {first + 1}), J_f = {jf}"
        rep.add("NotSquarefull", True, tag)
        odd = [str(g) for g in gs if g.coeffs[1] != 1]
        if odd:
            rep.add("ThmStrong", False, f"{tag}; linear factors with leading coefficient != 1: {odd}")
        else:
            rep.add("ThmStrong", True, tag + ("; linear factors of the form n+b" if gs else ""))

    # first theorem of the linear-terms section
    rep.add("QuadLinearCoprime", *_quad_linear_coprime(fs, gs, Ds, first, jf))
    rep.add("QuadLinearSquare", *_quad_linear_square(fs, gs, profile))
    rep.add("CaseSplitK23", *_case_split_k23(fs, gs, profile))

    for name in THEOREM_ORDER:
        if rep.get(name).applies:
            rep.matched = name
            break
    return rep


def _quad_linear_coprime(fs, gs, Ds, first, jf) -> tuple[bool, str]:
    if not gs:
        return False, "no linear factors"
    if first is None:
        return False, "needs a monic f_1 with J_f > 0"
    notes = []
    by_a: dict[int, list[int]] = {}
    for g in gs:
        b, a = g.coeffs
        if a <= 0:
            return False, f"leading coefficient {a} of {g} is not positive (flagged)"
        if a == 1:
            notes.append(f"{g} has a = 1, excluded from the coprimality test")
            continue
        by_a.setdefault(a, []).append(b)
    D_prod = math.prod(abs(d) for d in Ds)
    for a, bs in sorted(by_a.items()):
        g = math.gcd(a, D_prod)
        if g != 1:
            return False, f"gcd(a={a}, prod|D_i|={D_prod}) = {g}"
        if len(bs) == 2:
            if not is_prime(a):
                return False, f"two linear terms share a = {a}, which is not prime"
            if (bs[0] + bs[1]) % a == 0:
                return False, f"two linear terms with a = {a} have b = -b' mod a"
            notes.append(f"twin linear terms with prime a = {a}")
        elif len(bs) > 2:
            return False, f"{len(bs)} linear terms share a = {a}"
    keys = sorted(by_a)
    for i in range(len(keys)):
        for j in range(i + 1, len(keys)):
            if math.gcd(keys[i], keys[j]) != 1:
                return False, f"a = {keys[i]} and a = {keys[j]} are not coprime"
    return True, "; ".join([f"f_1 index {first + 1}, J_f = {jf}"] + notes)


def _quad_linear_square(fs, gs, profile) -> tuple[bool, str]:
    if not gs:
        return False, "no linear factors"
    for g in gs:
        b, a = g.coeffs
        if b == 0 or math.gcd(a, b) != 1:
            return False, f"{g} does not have nonzero coprime coefficients"
    jfp = j_f_prime(profile) if profile else 1
    if jfp == 0:
        return False, "J'_f = 0"
    amax = max(abs(g.coeffs[1]) for g in gs)
    D_prod = math.prod(abs(d) for d in profile.D) if profile else 1
    reasons = []
    for k, g1 in enumerate(gs):
        b1, a1 = g1.coeffs
        if a1 != amax:
            continue
        if math.gcd(a1, D_prod) != 1:
            reasons.append(f"gcd(a_1={a1}, prod|D_i|) != 1")
            continue
        clash = [
            str(g) for j, g in enumerate(gs)
            if j != k and abs(g.coeffs[1]) == a1 and (g.coeffs[0] - b1) % a1 == 0
        ]
        if clash:
            reasons.append(f"g_1 = {g1}: b_k = b_1 mod a_1 for {clash}")
            continue
        return True, f"g_1 = {g1}, J'_f = {jfp}"
    if not reasons:
        reasons.append(f"no linear term with positive leading coefficient {amax} = max|a_k|")
    return False, "; ".join(reasons)


def _case_split_k23(fs, gs, profile) -> tuple[bool, str]:
    if gs or len(fs) not in (2, 3):
        return False, "needs exactly 2 or 3 quadratics and no linear terms"
    if not all(_is_monic(f) for f in fs):
        return False, "quadratics must be monic"
    D = profile.D
    if len(fs) == 2:
        if is_square(D[0] * D[1]):
            return True, "D_1*D_2 square: ThmWeak"
        return True, f"D_1*D_2 not square: ThmStrong with J_f = {j_f(profile)}"
    pairs = [(i, j) for i, j in combinations(range(3), 2) if is_square(D[i] * D[j])]
    triple = is_square(D[0] * D[1] * D[2])
    if len(pairs) == 2 or (pairs and triple):
        raise InternalInconsistency(f"impossible square pattern for {D}")
    if len(pairs) == 3:
        return True, "all pairwise products square: ThmWeak"
    if len(pairs) == 1:
        i, j = pairs[0]
        first = ({0, 1, 2} - {i, j}).pop()
        return True, (
            f"only D_{i + 1}*D_{j + 1} square: reindex f_{first + 1} first, "
            f"ThmStrong with J_f = {j_f(profile.reindexed(first))}"
        )
    if triple:
        return True, f"only D_1*D_2*D_3 square: ThmStrong with J_f = {j_f(profile)}"
    return True, f"no square products: ThmStrong with J_f = {j_f(profile)}"


# --------------------------------------------------------------------------
# Explicit bounds


def explicit_bound(D: int, C0: float) -> float:
    """Largest x for which N_x = prod(n^2 + D) can be squarefull."""
    if D < 1 or C0 <= 0:
        raise InvalidInput("needs D >= 1 and C0 > 0")
    try:
        return math.exp(8 * ((4 * C0 + 8) * D + 2) / 5)
    except OverflowError:
        return math.inf


def monic_variant_bound(C_f: float, D: float, C0: float) -> float:
    """Bound for monic (n - alpha)^2 + D given a constant C_f < 0."""
    try:
        return math.exp(8 / 5 * (2 - C_f + 4 * C0 * D + 8 * D))
    except OverflowError:
        return math.inf


def completed_square(f: IntPolynomial) -> tuple[Fraction, Fraction]:
    """``(alpha, D)`` with f(n) = (n - alpha)^2 + D for monic quadratic f."""
    if f.degree != 2 or f.lc != 1:
        raise InvalidInput(f"{f} is not a monic quadratic")
    c, b, _ = f.coeffs
    alpha = Fraction(-b, 2)
    return alpha, c - alpha * alpha


def minimize_cf(f: IntPolynomial, scan_min: int = 1000) -> float:
    """A constant C_f < 0 with log|f(n)/n^2| > C_f for every integer n >= 1.

    Scans n up to a point N beyond which t(n) = |b|/n + |c|/n^2 < 1/2, so
    that log|f(n)/n^2| >= log(1 - t(N+1)) on the tail.
    """
    if f.degree != 2 or f.lc != 1:
        raise InvalidInput(f"{f} is not a monic quadratic")
    if not is_irreducible(f):
        raise InvalidInput(f"{f} has rational roots")
    c, b, _ = f.coeffs

    def t(n: int) -> float:
        return abs(b) / n + abs(c) / (n * n)

    N = scan_min
    while t(N + 1) >= 0.5:
        N *= 2
    lo = min(math.log(abs(f(n))) - 2 * math.log(n) for n in range(1, N + 1))
    lo = min(lo, math.log1p(-t(N + 1)))
    lo -= 1e-12 * max(1.0, abs(lo))
    return min(lo, -1e-12)
