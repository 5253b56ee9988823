"""Prime sums over arithmetic progressions and the classical inequalities they rest on.

Everything here is computed by exact prime enumeration.  Suprema over real
z are taken exactly: the sums are step functions jumping at primes, so on
each gap between consecutive primes of a class only the endpoints (and, for
Brun-Titchmarsh, the single turning point of the bound) need checking.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, SieveTooSmall
from .intfactor import factorint
from .modarith import PrimeSieve, get_sieve

C0_FLOOR = 0.1


def euler_phi(q: int) -> int:
    out = q
    for p in factorint(q):
        out = out // p * (p - 1)
    return out


def units(q: int) -> list[int]:
    return [a for a in range(q) if math.gcd(a, q) == 1] if q > 1 else [0]


def _sieve_for(z: float, sieve: PrimeSieve | None) -> PrimeSieve:
    if sieve is None:
        return get_sieve(int(z))
    if z > sieve.limit:
        raise SieveTooSmall(f"z = {z} exceeds sieve limit {sieve.limit}")
    return sieve


def _class(sieve: PrimeSieve, q: int, a: int, z: float) -> np.ndarray:
    ps = sieve.class_primes(q, a) if q > 1 else sieve.primes
    return ps[: np.searchsorted(ps, math.floor(z), side="right")]


def s_deviation(z: float, q: int, a: int, sieve: PrimeSieve | None = None) -> float:
    """|sum_{p <= z, p = a (q)} log p / p - log z / phi(q)|."""
    if math.gcd(a, q) != 1:
        raise DomainError(f"gcd({a}, {q}) != 1")
    if z < 2:
        raise DomainError("z must be >= 2")
    sieve = _sieve_for(z, sieve)
    ps = _class(sieve, q, a, z)
    s = math.fsum(math.log(p) / p for p in ps.tolist())
    return abs(s - math.log(z) / euler_phi(q))


def _class_partition(sieve: PrimeSieve, q: int, Z: float):
    """Yield ``(a, primes)`` for every unit class mod q, primes <= Z ascending."""
    ps = sieve.primes[: np.searchsorted(sieve.primes, math.floor(Z), side="right")]
    if q == 1:
        yield 0, ps
        return
    res = ps % q
    order = np.argsort(res, kind="stable")
    sr = res[order]
    bounds = np.searchsorted(sr, np.arange(q + 1))
    for a in units(q):
        yield a, ps[order[bounds[a] : bounds[a + 1]]]


def sup_s_deviation(Q: int, Z: float, sieve: PrimeSieve | None = None) -> tuple[float, tuple[int, int, float]]:
    """Exact sup of S(z; q, a) over q <= Q, unit a, 2 <= z <= Z, with its argmax."""
    sieve = _sieve_for(Z, sieve)
    best, arg = -1.0, (1, 0, 2.0)
    for q in range(1, Q + 1):
        phi = euler_phi(q)
        for a, ps in _class_partition(sieve, q, Z):
            c = np.cumsum(np.log(ps) / ps) if len(ps) else np.zeros(0)
            # left endpoints z = p_i, right endpoints just below the next prime (or Z)
            lefts = np.concatenate(([2.0], ps.astype(float)))
            rights = np.concatenate((ps.astype(float), [float(Z)]))
            vals = np.concatenate(([0.0], c))
            if len(ps) and ps[0] == 2:
                lefts, rights, vals = lefts[1:], rights[1:], vals[1:]
            cand_l = np.abs(vals - np.log(lefts) / phi)
            cand_r = np.abs(vals - np.log(rights) / phi)
            for cand, zs in ((cand_l, lefts), (cand_r, rights)):
                i = int(np.argmax(cand))
                if cand[i] > best:
                    best, arg = float(cand[i]), (q, a, float(zs[i]))
    return best, arg


def estimate_C0(Q: int, Z: float, sieve: PrimeSieve | None = None, floor: float = C0_FLOOR) -> float:
    """sup of sum_{p<=z, p=a(q)} log p/(p-1) - log z/phi(q), floored at ``floor``.

    Between consecutive primes of a class the expression decreases, so the
    supremum over real z in [2, Z] is attained at z = 2 or at a prime.
    """
    if Z < 2:
        return floor
    sieve = _sieve_for(Z, sieve)
    best = -math.inf
    for q in range(1, Q + 1):
        phi = euler_phi(q)
        for _, ps in _class_partition(sieve, q, Z):
            best = max(best, -math.log(2) / phi)
            if len(ps):
                c = np.cumsum(np.log(ps) / (ps - 1))
                best = max(best, float(np.max(c - np.log(ps) / phi)))
    return max(best, floor)


@dataclass
class APSumTable:
    q: int
    a: int
    z: list[float]
    theta: list[float] = field(default_factory=list)
    pi: list[int] = field(default_factory=list)
    sum_logp_over_p: list[float] = field(default_factory=list)
    sum_logp_over_pm1: list[float] = field(default_factory=list)
    deviation: list[float] = field(default_factory=list)

    def rows(self):
        for i, z in enumerate(self.z):
            yield {
                "z": z,
                "q": self.q,
                "a": self.a,
                "theta": self.theta[i],
                "pi": self.pi[i],
                "sum_logp_over_p": self.sum_logp_over_p[i],
                "deviation": self.deviation[i],
            }

    def to_csv(self) -> str:
        buf = io.StringIO()
        cols = ["z", "q", "a", "theta", "pi", "sum_logp_over_p", "deviation"]
        w = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n")
        w.writeheader()
        for r in self.rows():
            w.writerow({k: (f"{v:.12g}" if isinstance(v, float) else v) for k, v in r.items()})
        return buf.getvalue()


def geometric_grid(lo: float, hi: float, ratio: float = 1.1) -> list[float]:
    out, z = [], lo
    while z < hi:
        out.append(z)
        z *= ratio
    out.append(hi)
    return out


def ap_sum_table(q: int, a: int, zs: list[float], sieve: PrimeSieve | None = None) -> APSumTable:
    if math.gcd(a, q) != 1:
        raise DomainError(f"gcd({a}, {q}) != 1")
    zs = sorted(zs)
    sieve = _sieve_for(zs[-1], sieve)
    ps = _class(sieve, q, a, zs[-1])
    logs = np.log(ps)
    th = np.cumsum(logs)
    s1 = np.cumsum(logs / ps)
    s2 = np.cumsum(logs / (ps - 1))
    phi = euler_phi(q)
    t = APSumTable(q, a, list(zs))
    for z in zs:
        k = int(np.searchsorted(ps, math.floor(z), side="right"))
        t.pi.append(k)
        t.theta.append(float(th[k - 1]) if k else 0.0)
        t.sum_logp_over_p.append(float(s1[k - 1]) if k else 0.0)
        t.sum_logp_over_pm1.append(float(s2[k - 1]) if k else 0.0)
        t.deviation.append(abs(t.sum_logp_over_p[-1] - math.log(z) / phi))
    return t


def brun_titchmarsh_bound(z: float, q: int) -> float:
    return 2 * z / (euler_phi(q) * math.log(z / q))


def brun_titchmarsh_check(z: float, q: int, a: int, sieve: PrimeSieve | None = None) -> tuple[int, float, bool]:
    if z <= q:
        raise DomainError(f"needs z > q, got z={z}, q={q}")
    sieve = _sieve_for(z, sieve)
    count = len(_class(sieve, q, a, z))
    bound = brun_titchmarsh_bound(z, q)
    return count, bound, count <= bound


def brun_titchmarsh_scan(q: int, Z: float, sieve: PrimeSieve | None = None) -> dict:
    """Check pi(z; q, a) <= 2z / (phi(q) log(z/q)) for all real q < z <= Z and every unit a.

    On each gap the count is constant and the bound is unimodal in z with its
    minimum at z = e*q, so gap endpoints plus that point cover every z.
    """
    sieve = _sieve_for(Z, sieve)
    phi = euler_phi(q)
    zc = math.e * q
    worst, violations = 0.0, []
    for a, ps in _class_partition(sieve, q, Z):
        start = int(np.searchsorted(ps, q, side="right"))
        edges = np.concatenate(([float(q)], ps[start:].astype(float), [float(Z)]))
        counts = np.arange(start, len(ps) + 1)
        lefts, rights = edges[:-1], edges[1:]
        keep = rights > lefts
        lefts, rights, counts = lefts[keep], rights[keep], counts[keep]

        def B(z):
            with np.errstate(divide="ignore"):
                return np.where(z > q, 2 * z / (phi * np.log(z / q)), np.inf)

        m = np.minimum(B(lefts), B(rights))
        inside = (lefts < zc) & (zc < rights)
        m = np.where(inside, np.minimum(m, 2 * zc / phi), m)
        ratio = counts / m
        if len(ratio):
            worst = max(worst, float(np.max(ratio)))
        bad = np.flatnonzero(counts > m)
        violations.extend((a, float(lefts[i])) for i in bad[:5])
    return {"q": q, "Z": Z, "max_ratio": worst, "violations": violations, "ok": not violations}


def chebyshev_checks(z: float, sieve: PrimeSieve | None = None) -> dict:
    if z < 3:
        raise DomainError("needs z >= 3")
    sieve = _sieve_for(z, sieve)
    ps = _class(sieve, 1, 0, z)
    theta = math.fsum(math.log(p) for p in ps.tolist())
    pi = len(ps)
    return {
        "z": z,
        "theta": theta,
        "theta_bound": 2 * z * math.log(2),
        "theta_ok": theta <= 2 * z * math.log(2),
        "pi": pi,
        "pi_bound": 2 * z / math.log(z),
        "pi_ok": pi < 2 * z / math.log(z),
    }


def chebyshev_scan(Z: float, sieve: PrimeSieve | None = None) -> dict:
    """Both Chebyshev inequalities for every real 3 <= z <= Z (checked at primes, where they are tightest)."""
    sieve = _sieve_for(Z, sieve)
    ps = _class(sieve, 1, 0, Z)
    theta = np.cumsum(np.log(ps))
    theta_ok = bool(np.all(theta <= 2 * ps * math.log(2)))
    sel = ps >= 3
    counts = np.arange(1, len(ps) + 1)[sel]
    pi_ok = bool(np.all(counts < 2 * ps[sel] / np.log(ps[sel]))) if len(counts) else True
    return {"Z": Z, "theta_ok": theta_ok, "pi_ok": pi_ok}


def theta_linear_check(q: int, Z: float, sieve: PrimeSieve | None = None) -> dict:
    """theta(z; q, a) <= 8z/phi(q) for e^{sqrt q} < z <= Z, every unit a."""
    sieve = _sieve_for(Z, sieve)
    phi = euler_phi(q)
    z0 = math.exp(math.sqrt(q))
    ok, checked = True, 0
    for _, ps in _class_partition(sieve, q, Z):
        th = np.cumsum(np.log(ps))
        sel = ps > z0
        checked += int(np.count_nonzero(sel))
        if np.any(th[sel] > 8 * ps[sel] / phi):
            ok = False
    return {"q": q, "Z": Z, "z0": z0, "checked": checked, "ok": ok}


def first_prime_remark(z: float, q: int, a: int, sieve: PrimeSieve | None = None) -> dict:
    """Report S(z;q,a) - log p(q;a)/p(q;a) next to q^{-1/3}; no pass/fail."""
    if math.gcd(a, q) != 1:
        raise DomainError(f"gcd({a}, {q}) != 1")
    sieve = _sieve_for(z, sieve)
    ps = sieve.class_primes(q, a) if q > 1 else sieve.primes
    if not len(ps):
        raise SieveTooSmall(f"no prime = {a} mod {q} below {sieve.limit}")
    p0 = int(ps[0])
    term = math.log(p0) / p0
    s = s_deviation(z, q, a, sieve)
    return {
        "z": z,
        "q": q,
        "a": a,
        "first_prime": p0,
        "first_prime_term": term,
        "refined_deviation": s - term,
        "q_pow_minus_third": q ** (-1 / 3),
        "asserted": z > math.exp(q ** (2 / 3)),
    }
