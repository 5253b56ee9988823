"""Command-line front end: one experiment per invocation, one document on stdout."""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import sys
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import analytic, criteria, equidist, powersieve
from .cache import Cache, default_cache_dir
from .errors import LimitError, PolyprodError, ValidationError
from .ledger import FactorLedger
from .modarith import get_sieve
from .polycore import IntPolynomial, parse_factored, parse_poly

SCHEMA_VERSION = 1
MAX_DIGITS = 1000

log = logging.getLogger("polyprod")


@dataclass
class RunConfig:
    subcommand: str
    polys: list = field(default_factory=list)
    params: dict = field(default_factory=dict)
    fmt: str = "json"
    cache_dir: str | None = None
    threads: int = 1

    def cache(self) -> Cache | None:
        return Cache(self.cache_dir) if self.cache_dir else None


# --------------------------------------------------------------------------
# serialization


def _clean(obj):
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return float(f"{x:.12g}")
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, IntPolynomial):
        return obj.to_text()
    return obj


def to_json(doc: dict) -> str:
    return json.dumps(_clean(doc), sort_keys=True)


def to_csv(rows: list[dict], columns: list[str]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n", extrasaction="ignore")
    w.writeheader()
    for r in rows:
        w.writerow({k: json.dumps(v) if isinstance(v, (list, dict)) else v for k, v in _clean(r).items()})
    return buf.getvalue()


# --------------------------------------------------------------------------
# polynomial arguments


def read_poly(text: str, assume_irreducible: bool = False):
    if any(ch in text for ch in ";^=") or "/" in text:
        return parse_factored(text, assume_irreducible=assume_irreducible)
    return parse_poly(text)


def _one_poly(cfg: RunConfig):
    if len(cfg.polys) != 1:
        raise ValidationError("exactly one --poly is required")
    return cfg.polys[0]


def _int_poly(cfg: RunConfig) -> IntPolynomial:
    P = _one_poly(cfg)
    if not isinstance(P, IntPolynomial):
        raise ValidationError("this subcommand takes a plain coefficient list")
    return P


# --------------------------------------------------------------------------
# subcommands; each returns (document, csv rows, csv columns)


def cmd_analyze(cfg: RunConfig):
    F = _one_poly(cfg)
    x = cfg.params["x"]
    L = FactorLedger(F).extend(x, workers=cfg.threads, cache=cfg.cache())
    doc = L.snapshot()
    if not L.zero_seen:
        doc["squarefull"] = L.is_squarefull()
        doc["perfect_power"] = L.perfect_power_exponent()
        doc["largest_prime"] = L.largest_prime() if L.exponents else None
        doc["log_abs"] = L.log_abs()
        doc["squarefree_part_statistic"] = L.squarefree_part_statistic()
        digits = L.log_abs() / math.log(10)
        doc["N_x"] = str(L.reconstruct()) if digits < MAX_DIGITS else None
    rows = [{"p": p, "e": e} for p, e in doc["exponents"]]
    return doc, rows, ["p", "e"]


def cmd_power_scan(cfg: RunConfig):
    P = cfg.params
    doc = powersieve.power_scan(_one_poly(cfg), P["power"], P["xmax"], cache=cfg.cache())
    return doc, [{"x": x} for x in doc["hits"]], ["x"]


def cmd_squarefull_scan(cfg: RunConfig):
    P = cfg.params
    doc = powersieve.squarefull_scan(_one_poly(cfg), P["xmax"], P["xmin"], cache=cfg.cache())
    return doc, [{"x": x} for x in doc["hits"]], ["x"]


def cmd_dfit(cfg: RunConfig):
    f = _int_poly(cfg)
    P = cfg.params
    K, ratio = equidist.dfit_count(f, P["x"], P["alpha"], P["beta"])
    doc = {"x": P["x"], "alpha": P["alpha"], "beta": P["beta"], "K": K, "ratio": ratio}
    rows = [{"p": r.p, "v": r.v, "v_over_p": r.ratio} for r in equidist.root_pairs(f, P["x"])]
    return doc, rows, ["p", "v", "v_over_p"]


def cmd_exact_once(cfg: RunConfig):
    P = cfg.params
    doc = equidist.exact_once_primes(_int_poly(cfg), P["x"], P["delta"])
    return doc, [doc], list(doc)


def cmd_window_prime(cfg: RunConfig):
    P = cfg.params
    hit = equidist.prime_in_window(_int_poly(cfg), P["x"], P["a"], P["b"])
    doc = {"x": P["x"], "a": P["a"], "b": P["b"], "found": hit is not None}
    doc["p"], doc["n"] = hit if hit else (None, None)
    return doc, [doc], ["x", "a", "b", "found", "p", "n"]


def cmd_criteria(cfg: RunConfig):
    polys = cfg.polys
    if not polys or not all(isinstance(p, IntPolynomial) for p in polys):
        raise ValidationError("criteria takes one or more plain --poly coefficient lists")
    fs = [p for p in polys if p.degree == 2]
    gs = [p for p in polys if p.degree == 1]
    if len(fs) + len(gs) != len(polys):
        raise ValidationError("criteria accepts only quadratic and linear factors")
    rep = criteria.check_applicability(fs, gs)
    doc = rep.to_dict()
    if fs:
        prof = criteria.DiscriminantProfile.of(fs)
        doc["discriminants"] = list(prof.D)
        doc["J_f"] = criteria.j_f(prof)
        doc["J_f_prime"] = criteria.j_f_prime(prof)
    return doc, doc["theorems"], ["theorem", "applies", "reason"]


def cmd_ap_sums(cfg: RunConfig):
    P = cfg.params
    zs = analytic.geometric_grid(P["zmin"], P["zmax"], P["ratio"])
    t = analytic.ap_sum_table(P["q"], P["a"], zs)
    rows = list(t.rows())
    doc = {"q": P["q"], "a": P["a"], "rows": rows}
    return doc, rows, ["z", "q", "a", "theta", "pi", "sum_logp_over_p", "deviation"]


def cmd_estimate_c0(cfg: RunConfig):
    P = cfg.params
    c0 = analytic.estimate_C0(P["Q"], P["Z"])
    sup, (q, a, z) = analytic.sup_s_deviation(P["Q"], P["Z"]) if P["Z"] >= 2 else (0.0, (1, 0, 2.0))
    doc = {"Q": P["Q"], "Z": P["Z"], "C0": c0, "sup_S": sup, "argmax": {"q": q, "a": a, "z": z}}
    if P.get("D") is not None:
        doc["D"] = P["D"]
        doc["explicit_bound"] = criteria.explicit_bound(P["D"], c0)
    return doc, [doc], ["Q", "Z", "C0", "sup_S"]


def cmd_charsum(cfg: RunConfig):
    F = _one_poly(cfg)
    P = cfg.params
    if P["q"] is not None:
        qs = [P["q"]]
    elif P["qmax"] is not None:
        qs = [q for q in get_sieve(P["qmax"]).primes_in(2, P["qmax"]) if q % P["p"] == 1]
    else:
        raise ValidationError("charsum needs --q or --qmax")
    rows, skipped = [], []
    for q in qs:
        try:
            cs = powersieve.char_sum(F, P["k"], q, P["p"])
            sk = powersieve.count_pth_residue_values(F, P["k"], q, P["p"])
        except ValidationError as exc:
            if len(qs) == 1:
                raise
            skipped.append({"q": q, "reason": str(exc)})
            continue
        rows.append(
            {
                "q": q,
                "magnitude": cs["magnitude"],
                "bound": cs["bound"],
                "ok": cs["ok"],
                "S": sk["S"],
                "zeros": sk["zeros"],
                "lhs": sk["lhs"],
                "bound_zero_corrected": sk["bound_zero_corrected"],
                "S_ok": sk["ok"],
            }
        )
    doc = {"p": P["p"], "k": P["k"], "rows": rows, "skipped": skipped, "all_ok": all(r["ok"] and r["S_ok"] for r in rows)}
    return doc, rows, ["q", "magnitude", "bound", "ok", "S", "zeros", "lhs", "bound_zero_corrected", "S_ok"]


def cmd_turan(cfg: RunConfig):
    P = cfg.params
    doc = powersieve.turan_experiment(_one_poly(cfg), P["k"], P["p"], P["X"], P["z"])
    return doc, [doc], list(doc)


def cmd_primeseq(cfg: RunConfig):
    F = _one_poly(cfg)
    P = cfg.params
    prof = powersieve.estimate_galois_profile(F, P["budget"], P["g_f"])
    seq = powersieve.build_prime_seq(F, P["p"], P["q1"], P["count"], prof)
    doc = seq.to_dict()
    doc["profile"] = prof.to_dict()
    doc["verified"] = powersieve.verify_prime_seq(F, seq)
    return doc, [{"i": i + 1, "q": q} for i, q in enumerate(seq.primes)], ["i", "q"]


def cmd_gaplemma(cfg: RunConfig):
    P = cfg.params
    if P["set"] is None:
        raise ValidationError("gaplemma needs --set")
    try:
        S = [int(t) for t in P["set"].split(",") if t.strip()]
    except ValueError as exc:
        raise ValidationError(f"bad --set {P['set']!r}") from exc
    doc = powersieve.gap_lemma_report(S, P["X"], P["K"])
    rows = [{"k": k, "count": c} for k, c in doc["gaps"].items()]
    doc["gaps"] = [[k, c] for k, c in doc["gaps"].items()]
    return doc, rows, ["k", "count"]


def cmd_census(cfg: RunConfig):
    F = _one_poly(cfg)
    P = cfg.params
    prof = powersieve.estimate_galois_profile(F, P["budget"])
    doc = powersieve.pth_power_census(F, P["p"], P["X"], prof, cache=cfg.cache())
    return doc, [{"x": x} for x in doc["hits"]], ["x"]


COMMANDS = {
    "analyze": cmd_analyze,
    "power-scan": cmd_power_scan,
    "squarefull-scan": cmd_squarefull_scan,
    "dfit": cmd_dfit,
    "exact-once": cmd_exact_once,
    "window-prime": cmd_window_prime,
    "criteria": cmd_criteria,
    "ap-sums": cmd_ap_sums,
    "estimate-c0": cmd_estimate_c0,
    "charsum": cmd_charsum,
    "turan": cmd_turan,
    "primeseq": cmd_primeseq,
    "gaplemma": cmd_gaplemma,
    "census": cmd_census,
}


# --------------------------------------------------------------------------
# argument grammar


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("--cache-dir", default=None, help="defaults to $POLYPROD_CACHE or ~/.cache/polyprod")
    common.add_argument("--no-cache", action="store_true")
    common.add_argument("--assume-irreducible", action="store_true", help="accept factors of degree >= 3 as irreducible")
    common.add_argument("-v", "--verbose", action="store_true")

    ap = argparse.ArgumentParser(prog="polyprod", description="Experiments on products of polynomial values.")
    sub = ap.add_subparsers(dest="subcommand", required=True)

    def add(name, help_, poly="one"):
        p = sub.add_parser(name, parents=[common], help=help_)
        if poly == "one":
            p.add_argument("--poly", action="append", required=True, help="ascending coefficients, or factored s=..;c0,c1^e;...")
        elif poly == "many":
            p.add_argument("--poly", action="append", required=True)
        return p

    p = add("analyze", "prime-exponent ledger of N_x")
    p.add_argument("--x", type=int, required=True)

    p = add("power-scan", "x <= xmax with N_x a perfect power")
    p.add_argument("--xmax", type=int, required=True)
    p.add_argument("--power", type=int, default=2)

    p = add("squarefull-scan", "x <= xmax with N_x squarefull")
    p.add_argument("--xmax", type=int, required=True)
    p.add_argument("--xmin", type=int, default=1)

    p = add("dfit", "count root pairs (p, v) with alpha <= v/p < beta")
    p.add_argument("--x", type=int, required=True)
    p.add_argument("--alpha", type=float, default=0.0)
    p.add_argument("--beta", type=float, default=1.0)

    p = add("exact-once", "primes in ((2-delta)x, 2x] dividing N_x exactly once")
    p.add_argument("--x", type=int, required=True)
    p.add_argument("--delta", type=float, required=True)

    p = add("window-prime", "first prime in (ax, bx) dividing N_x")
    p.add_argument("--x", type=int, required=True)
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--b", type=float, required=True)

    add("criteria", "which squarefull theorems apply", poly="many")

    p = add("ap-sums", "prime sums in a progression on a geometric grid", poly=None)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--zmin", type=float, default=2.0)
    p.add_argument("--zmax", type=float, required=True)
    p.add_argument("--ratio", type=float, default=1.5)

    p = add("estimate-c0", "empirical C0 and sup of S(z; q, a)", poly=None)
    p.add_argument("--Q", type=int, required=True)
    p.add_argument("--Z", type=float, required=True)
    p.add_argument("--D", type=int, default=None, help="also evaluate the explicit bound for this D")

    p = add("charsum", "order-p character sums of F_k against the Weil bound")
    p.add_argument("--k", type=int, default=0)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--q", type=int, default=None)
    p.add_argument("--qmax", type=int, default=None)

    p = add("turan", "Turan sieve quantities for F_k")
    p.add_argument("--k", type=int, default=0)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--X", type=int, required=True)
    p.add_argument("--z", type=float, required=True)

    p = add("primeseq", "greedy prime chain with d_F roots")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--q1", type=int, required=True)
    p.add_argument("--count", type=int, default=5)
    p.add_argument("--budget", type=int, default=10**4)
    p.add_argument("--g-f", dest="g_f", type=int, default=None)

    p = add("gaplemma", "gap structure of a set and the gap lemma", poly=None)
    p.add_argument("--X", type=int, required=True)
    p.add_argument("--K", type=float, required=True)
    p.add_argument("--set", default=None, help="comma separated elements of S")

    p = add("census", "exact census of perfect p-th power N_x")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--X", type=int, required=True)
    p.add_argument("--budget", type=int, default=10**4)

    return ap


def sieve_limit(cfg: RunConfig) -> int | None:
    """Largest integer the subcommand will need sieved, when known up front."""
    P = cfg.params
    sub = cfg.subcommand
    if sub == "dfit":
        return P["x"]
    if sub == "exact-once":
        return 2 * P["x"]
    if sub == "window-prime":
        return math.ceil(P["b"] * P["x"])
    if sub == "ap-sums":
        return int(P["zmax"])
    if sub == "estimate-c0":
        return int(P["Z"])
    if sub == "charsum":
        return P["qmax"] or P["q"]
    if sub == "turan":
        return int(2 * P["z"])
    if sub in ("census", "primeseq"):
        return P["budget"]
    return None


_NON_PARAMS = {"subcommand", "format", "threads", "cache_dir", "no_cache", "assume_irreducible", "verbose", "poly"}


def make_config(ns: argparse.Namespace) -> RunConfig:
    if ns.threads < 1:
        raise ValidationError("--threads must be >= 1")
    polys = [read_poly(t, ns.assume_irreducible) for t in (getattr(ns, "poly", None) or [])]
    params = {k: v for k, v in vars(ns).items() if k not in _NON_PARAMS}
    for k, v in params.items():
        if isinstance(v, float) and not math.isfinite(v):
            raise ValidationError(f"--{k} must be finite")
    cache_dir = None if ns.no_cache else str(ns.cache_dir or default_cache_dir())
    return RunConfig(ns.subcommand, polys, params, ns.format, cache_dir, ns.threads)


def run(argv: list[str] | None = None, out=None) -> int:
    out = out if out is not None else sys.stdout
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if ns.verbose else logging.WARNING, stream=sys.stderr)
    try:
        cfg = make_config(ns)
        limit = sieve_limit(cfg)
        cache = cfg.cache()
        if cache is not None and limit is not None and 2 <= limit <= 10**9:
            cache.sieve(limit)
        doc, rows, cols = COMMANDS[cfg.subcommand](cfg)
    except ValidationError as exc:
        print(f"polyprod {ns.subcommand}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except LimitError as exc:
        print(f"polyprod {ns.subcommand}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3
    except PolyprodError as exc:
        print(f"polyprod {ns.subcommand}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    if cfg.fmt == "csv":
        out.write(to_csv(rows, cols))
    else:
        doc = dict(doc)
        doc["schema"] = f"polyprod.{cfg.subcommand}/{SCHEMA_VERSION}"
        doc["subcommand"] = cfg.subcommand
        if cfg.polys:
            doc["poly"] = [p.to_text() for p in cfg.polys] if len(cfg.polys) > 1 else cfg.polys[0].to_text()
        out.write(to_json(doc) + "\n")
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
