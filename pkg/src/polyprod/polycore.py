"""Exact integer polynomials in one variable.

Coefficients are stored in ascending order, ``coeffs[i]`` multiplying
``n**i``.  The text format used by the CLI and serializers is the same
ascending list, comma separated: ``"1,0,1"`` is ``n^2 + 1``.  A factored
polynomial is written as semicolon separated ``coeffs^mult`` terms with an
optional leading ``s=<rational>`` scale, e.g. ``"s=1/2;0,1;1,1"`` for
``n(n+1)/2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import DegreeError, InvalidFactorization, InvalidInput, UnsupportedDegree


def _strip(coeffs: Iterable[int]) -> tuple[int, ...]:
    out = [int(c) for c in coeffs]
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


@dataclass(frozen=True)
class IntPolynomial:
    coeffs: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _strip(self.coeffs))

    @classmethod
    def of(cls, *coeffs: int) -> IntPolynomial:
        return cls(tuple(coeffs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lc(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def is_zero(self) -> bool:
        return not self.coeffs

    def __call__(self, n):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * n + c
        return acc

    def __add__(self, other: IntPolynomial) -> IntPolynomial:
        a, b = self.coeffs, other.coeffs
        m = max(len(a), len(b))
        return IntPolynomial(
            tuple((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(m))
        )

    def __neg__(self) -> IntPolynomial:
        return IntPolynomial(tuple(-c for c in self.coeffs))

    def __sub__(self, other: IntPolynomial) -> IntPolynomial:
        return self + (-other)

    def __mul__(self, other) -> IntPolynomial:
        if isinstance(other, int):
            return IntPolynomial(tuple(c * other for c in self.coeffs))
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return IntPolynomial(())
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return IntPolynomial(tuple(out))

    __rmul__ = __mul__

    def __pow__(self, e: int) -> IntPolynomial:
        out = IntPolynomial((1,))
        for _ in range(e):
            out = out * self
        return out

    def derivative(self) -> IntPolynomial:
        return IntPolynomial(tuple(i * c for i, c in enumerate(self.coeffs))[1:])

    def shift(self, j: int) -> IntPolynomial:
        """Return the polynomial ``n -> P(n + j)``."""
        out = IntPolynomial(())
        lin = IntPolynomial((j, 1))
        for c in reversed(self.coeffs):
            out = out * lin + IntPolynomial((c,))
        return out

    def content(self) -> int:
        g = 0
        for c in self.coeffs:
            g = math.gcd(g, c)
        return g

    def primitive(self) -> tuple[int, IntPolynomial]:
        """Split into ``(c, Q)`` with ``self == c*Q``, Q primitive, lc(Q) > 0."""
        if self.is_zero():
            return 0, self
        c = self.content()
        if self.lc < 0:
            c = -c
        return c, IntPolynomial(tuple(x // c for x in self.coeffs))

    def to_text(self) -> str:
        return ",".join(str(c) for c in self.coeffs) if self.coeffs else "0"

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            mag = abs(c)
            if i == 0:
                body = str(mag)
            else:
                var = "n" if i == 1 else f"n^{i}"
                body = var if mag == 1 else f"{mag}*{var}"
            sign = "-" if c < 0 else "+"
            terms.append((sign, body))
        first_sign, first = terms[0]
        s = ("-" if first_sign == "-" else "") + first
        for sign, body in terms[1:]:
            s += f" {sign} {body}"
        return s


def eval_poly(P: IntPolynomial, n: int) -> int:
    return P(n)


def discriminant_quadratic(P: IntPolynomial) -> int:
    if P.degree != 2:
        raise DegreeError(f"expected a quadratic, got degree {P.degree}")
    c, b, a = P.coeffs
    return b * b - 4 * a * c


def is_square(n: int) -> bool:
    """Perfect-square test on integers; negatives are never squares."""
    return n >= 0 and math.isqrt(n) ** 2 == n


def is_irreducible(P: IntPolynomial) -> bool:
    if P.degree == 1:
        return True
    if P.degree == 2:
        return not is_square(discriminant_quadratic(P))
    raise UnsupportedDegree(f"irreducibility is only decided for degree 1 or 2, got {P.degree}")


def _bareiss_det(m: list[list[int]]) -> int:
    n = len(m)
    if n == 0:
        return 1
    a = [row[:] for row in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for r in range(k + 1, n):
                if a[r][k] != 0:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def resultant(P: IntPolynomial, Q: IntPolynomial) -> int:
    """Resultant via the Sylvester determinant (fraction-free Bareiss)."""
    m, n = P.degree, Q.degree
    if m < 0 or n < 0:
        return 0
    if m == 0:
        return P.lc**n
    if n == 0:
        return Q.lc**m
    size = m + n
    p_desc = list(reversed(P.coeffs))
    q_desc = list(reversed(Q.coeffs))
    rows = []
    for i in range(n):
        rows.append([0] * i + p_desc + [0] * (size - i - m - 1))
    for i in range(m):
        rows.append([0] * i + q_desc + [0] * (size - i - n - 1))
    return _bareiss_det(rows)


def discriminant(P: IntPolynomial) -> int:
    d = P.degree
    if d < 1:
        raise DegreeError("discriminant needs degree >= 1")
    if d == 1:
        return 1
    r = resultant(P, P.derivative())
    sign = -1 if (d * (d - 1) // 2) % 2 else 1
    q, rem = divmod(sign * r, P.lc)
    assert rem == 0
    return q


@dataclass(frozen=True)
class FactoredPolynomial:
    """``scale * prod(f_i ** e_i)`` with primitive, pairwise distinct f_i.

    Use :meth:`build` to construct from arbitrary integer factors; it moves
    contents and signs into ``scale`` and checks irreducibility.
    """

    scale: Fraction
    factors: tuple[tuple[IntPolynomial, int], ...]
    asserted: bool = field(default=False, compare=False)

    @classmethod
    def build(
        cls,
        factors: Sequence[tuple[IntPolynomial, int]] | Sequence[IntPolynomial],
        scale: Fraction | int = 1,
        assume_irreducible: bool = False,
        merge: bool = False,
    ) -> FactoredPolynomial:
        s = Fraction(scale)
        if s == 0:
            raise InvalidFactorization("scale must be nonzero")
        out: list[tuple[IntPolynomial, int]] = []
        asserted = False
        for item in factors:
            f, e = item if isinstance(item, tuple) else (item, 1)
            if e < 1:
                raise InvalidFactorization(f"multiplicity must be >= 1, got {e}")
            if f.is_zero():
                raise InvalidFactorization("zero factor")
            c, g = f.primitive()
            s *= Fraction(c) ** e
            if g.degree == 0:
                continue
            if g.degree <= 2:
                if not is_irreducible(g):
                    raise InvalidFactorization(f"factor {g} is reducible over Q")
            elif not assume_irreducible:
                raise UnsupportedDegree(
                    f"factor {g} has degree {g.degree}; pass assume_irreducible to accept it"
                )
            else:
                asserted = True
            for i, (h, eh) in enumerate(out):
                if h == g:
                    if not merge:
                        raise InvalidFactorization(f"duplicate factor {g}")
                    out[i] = (h, eh + e)
                    break
            else:
                out.append((g, e))
        return cls(s, tuple(out), asserted)

    @classmethod
    def of(cls, P: IntPolynomial, assume_irreducible: bool = False) -> FactoredPolynomial:
        return cls.build([(P, 1)], assume_irreducible=assume_irreducible)

    @property
    def degree(self) -> int:
        return sum(f.degree * e for f, e in self.factors)

    def radical(self) -> IntPolynomial:
        out = IntPolynomial((1,))
        for f, _ in self.factors:
            out = out * f
        return out

    def expand(self) -> IntPolynomial:
        """The represented polynomial; raises if it has non-integer coefficients."""
        body = IntPolynomial((1,))
        for f, e in self.factors:
            body = body * (f**e)
        coeffs = [self.scale * c for c in body.coeffs]
        if any(c.denominator != 1 for c in coeffs):
            raise InvalidInput("factored polynomial does not have integer coefficients")
        return IntPolynomial(tuple(int(c) for c in coeffs))

    def __call__(self, n: int):
        v = self.scale
        for f, e in self.factors:
            v *= f(n) ** e
        return int(v) if v.denominator == 1 else v

    def to_text(self) -> str:
        parts = []
        if self.scale != 1:
            parts.append(f"s={self.scale}")
        for f, e in self.factors:
            parts.append(f.to_text() if e == 1 else f"{f.to_text()}^{e}")
        return ";".join(parts) if parts else "s=1"

    def __str__(self) -> str:
        parts = [] if self.scale == 1 else [str(self.scale)]
        for f, e in self.factors:
            parts.append(f"({f})" + ("" if e == 1 else f"^{e}"))
        return " * ".join(parts) or "1"


def sdisc(F: FactoredPolynomial) -> int:
    """Discriminant of the product of the distinct irreducible factors."""
    polys = [f for f, _ in F.factors]
    if len(set(polys)) != len(polys):
        raise InvalidFactorization("duplicate factors")
    if not polys:
        raise DegreeError("constant polynomial has no discriminant")
    return discriminant(F.radical())


def shifted_product(F: FactoredPolynomial, k: int, start: int = 0) -> FactoredPolynomial:
    """``F(n+start) F(n+start+1) ... F(n+start+k)`` with factors kept unexpanded."""
    if k < 0:
        raise InvalidInput("k must be >= 0")
    merged: dict[IntPolynomial, int] = {}
    for j in range(start, start + k + 1):
        for f, e in F.factors:
            g = f.shift(j)
            merged[g] = merged.get(g, 0) + e
    return FactoredPolynomial(F.scale ** (k + 1), tuple(merged.items()), F.asserted)


def is_scaled_pth_power(F: FactoredPolynomial, p: int) -> bool:
    return all(e % p == 0 for _, e in F.factors)


def parse_poly(text: str) -> IntPolynomial:
    try:
        coeffs = [int(t) for t in text.replace(" ", "").split(",")]
    except ValueError as exc:
        raise InvalidInput(f"bad polynomial text {text!r}") from exc
    P = IntPolynomial(tuple(coeffs))
    if P.is_zero():
        raise InvalidInput("zero polynomial")
    return P


def parse_factored(text: str, assume_irreducible: bool = False) -> FactoredPolynomial:
    scale = Fraction(1)
    factors = []
    for term in text.replace(" ", "").split(";"):
        if not term:
            continue
        if term.startswith("s="):
            try:
                scale = Fraction(term[2:])
            except (ValueError, ZeroDivisionError) as exc:
                raise InvalidInput(f"bad scale {term!r}") from exc
            continue
        body, _, mult = term.partition("^")
        try:
            e = int(mult) if mult else 1
        except ValueError as exc:
            raise InvalidInput(f"bad multiplicity in {term!r}") from exc
        factors.append((parse_poly(body), e))
    if not factors:
        raise InvalidInput(f"no factors in {text!r}")
    return FactoredPolynomial.build(factors, scale, assume_irreducible=assume_irreducible)


def factor_terms(F) -> tuple[Fraction, tuple[tuple[IntPolynomial, int], ...]]:
    """Uniform ``(scale, factors)`` view of an IntPolynomial or FactoredPolynomial."""
    if isinstance(F, FactoredPolynomial):
        return F.scale, F.factors
    return Fraction(1), ((F, 1),)


def poly_text(F) -> str:
    return F.to_text()


# --------------------------------------------------------------------------
# Squarefree decomposition over Q (Yun), for inputs given as a single polynomial


def _q_strip(a: list[Fraction]) -> list[Fraction]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _q_divmod(a: list[Fraction], b: list[Fraction]) -> tuple[list[Fraction], list[Fraction]]:
    a = list(a)
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
    while len(a) >= len(b) and a:
        c = a[-1] / b[-1]
        shift = len(a) - len(b)
        q[shift] = c
        for i, bc in enumerate(b):
            a[shift + i] -= c * bc
        _q_strip(a)
    return _q_strip(q), a


def _q_sub(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    n = max(len(a), len(b))
    a = a + [Fraction(0)] * (n - len(a))
    b = b + [Fraction(0)] * (n - len(b))
    return _q_strip([x - y for x, y in zip(a, b)])


def _q_gcd(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    while b:
        a, b = b, _q_divmod(a, b)[1]
    return [c / a[-1] for c in a]


def _q_to_int(a: list[Fraction]) -> IntPolynomial:
    den = math.lcm(*(c.denominator for c in a))
    return IntPolynomial(tuple(int(c * den) for c in a)).primitive()[1]


def squarefree_factored(P: IntPolynomial) -> FactoredPolynomial:
    """Yun decomposition ``P = s * prod g_i^i`` with squarefree, pairwise coprime g_i.

    The g_i need not be irreducible; the result is flagged as asserted when
    any part has degree >= 3 or is a reducible quadratic split into linears.
    """
    if P.degree < 1:
        raise DegreeError("constant polynomial")
    f = [Fraction(c) for c in P.coeffs]
    df = [Fraction(c) for c in P.derivative().coeffs]
    a = _q_gcd(f, df)
    b = _q_divmod(f, a)[0]
    c = _q_divmod(df, a)[0]
    parts: list[tuple[IntPolynomial, int]] = []
    i = 1
    while len(b) > 1:
        db = [k * x for k, x in enumerate(b)][1:]
        d = _q_sub(c, db)
        g = _q_gcd(b, d) if d else [c / b[-1] for c in b]
        if len(g) > 1:
            parts.append((_q_to_int(g), i))
        b = _q_divmod(b, g)[0]
        c = _q_divmod(d, g)[0] if d else []
        i += 1
    factors: list[tuple[IntPolynomial, int]] = []
    asserted = False
    for g, e in parts:
        if g.degree == 2 and not is_irreducible(g):
            c0, c1, c2 = g.coeffs
            r = math.isqrt(c1 * c1 - 4 * c0 * c2)
            # roots (-c1 +- r) / 2c2 give factors 2c2 n + c1 -+ r
            factors.append((IntPolynomial((c1 - r, 2 * c2)).primitive()[1], e))
            factors.append((IntPolynomial((c1 + r, 2 * c2)).primitive()[1], e))
        else:
            asserted = asserted or g.degree >= 3
            factors.append((g, e))
    body = FactoredPolynomial.build(factors, assume_irreducible=True, merge=True)
    scale = Fraction(P.lc, body.expand().lc)
    return FactoredPolynomial(scale * body.scale, body.factors, asserted)


def as_factored(F) -> FactoredPolynomial:
    if isinstance(F, FactoredPolynomial):
        return F
    return squarefree_factored(F)
