"""Batch command-line front end.

Every command returns a ``RunReport``; ``main`` renders it as a table or as
JSON and maps the verdict to the exit status (0 pass/informational, 1 fail,
2 usage error).
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime, timezone
from functools import partial
from pathlib import Path

from . import __version__
from .cache import DEFAULT_AUDIT_RATE, ApCache, ApCacheEntry, default_cache_path
from .elliptic import WeierstrassCurve, local_ap, parse_curve
from .errors import ModcheckError, UsageError
from .fermat import FreyParameters, fermat_search, frey_bad_primes, frey_curve
from .lfunctions import LQuery, eichler_shimura_check, l_value, local_factors, verify_rationality
from .modular_group import (
    INFINITY,
    classify_element,
    coset_invariants,
    cusp_count,
    elliptic_point_counts,
    genus_X0,
    index_gamma0,
    parabolic_fixed_point,
    parse_matrix,
)
from .numtheory import primes_up_to
from .qseries import j_invariant, newform_level11

log = logging.getLogger(__name__)

SCHEMA_VERSION = 1
SUPPORTED_LEVELS = (11,)
BSD_BANNER = "UNCERTIFIED, EXPLORATORY: partial Euler products at s <= 3/2 carry no error guarantee"


@dataclass
class RunReport:
    command: str
    inputs: dict
    results: dict
    verdict: str  # pass | fail | informational
    banner: str | None = None
    text_rows: list[str] = field(default_factory=list)

    def payload(self) -> dict:
        out = {
            "schema": SCHEMA_VERSION,
            "command": self.command,
            "inputs": self.inputs,
            "results": self.results,
            "verdict": self.verdict,
        }
        if self.banner:
            out["banner"] = self.banner
        return out

    def to_json(self, envelope: bool = True) -> str:
        doc = self.payload()
        if envelope:
            doc["envelope"] = {
                "version": __version__,
                "generated_at": datetime.now(timezone.utc).isoformat(timespec="seconds"),
            }
        return json.dumps(doc, sort_keys=True)

    def to_text(self) -> str:
        lines = [f"== {self.command}  " + "  ".join(f"{k}={v}" for k, v in self.inputs.items())]
        if self.banner:
            lines.append(f"!! {self.banner}")
        lines.extend(self.text_rows)
        lines.append(f"verdict: {self.verdict}")
        return "\n".join(lines)

    @property
    def exit_code(self) -> int:
        return 1 if self.verdict == "fail" else 0


def _resolve_cache(cache, audit_rate: float, seed: int | None = None) -> ApCache | None:
    if isinstance(cache, ApCache):
        return cache
    path = Path(cache) if cache else default_cache_path()
    if path is None:
        return None
    return ApCache.open(path, audit_rate=audit_rate, seed=seed)


def _parallel_map(fn, items: list, jobs: int | None) -> list:
    if jobs is None:
        jobs = os.cpu_count() or 1
    if jobs <= 1 or len(items) < 64:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items, chunksize=max(1, len(items) // (4 * jobs))))


def ap_table(E: WeierstrassCurve, pmax: int, cache: ApCache | None = None,
             jobs: int | None = 1) -> dict[int, tuple[int, bool]]:
    """(a_p, good) for every p <= pmax, ordered by p."""
    primes = primes_up_to(pmax)
    compute = partial(local_ap, E)
    if cache is None:
        return dict(zip(primes, _parallel_map(compute, primes, jobs)))
    cid = E.curve_id
    misses = [p for p in primes if (cid, p) not in cache.entries]
    for p, (ap, good) in zip(misses, _parallel_map(compute, misses, jobs)):
        cache.put(ApCacheEntry(cid, p, ap, good))
    return {p: cache.get(cid, p, compute) for p in primes}


def _audit_results(cache: ApCache | None) -> dict | None:
    if cache is None:
        return None
    return {
        "path": str(cache.path),
        "hits": cache.hits,
        "audited": cache.audited,
        "failures": [f.as_dict() for f in cache.failures],
    }


def _curve(curve) -> WeierstrassCurve:
    return curve if isinstance(curve, WeierstrassCurve) else parse_curve(curve)


# ---------------------------------------------------------------------------
# commands


def cmd_ap(curve, pmax: int, cache=None, audit_rate: float = DEFAULT_AUDIT_RATE,
           jobs: int | None = 1, seed: int | None = None) -> RunReport:
    E = _curve(curve)
    store = _resolve_cache(cache, audit_rate, seed)
    table = ap_table(E, pmax, store, jobs)
    rows = [{"p": p, "ap": ap, "good": good} for p, (ap, good) in table.items()]
    results = {"rows": rows}
    audit = _audit_results(store)
    verdict = "informational"
    text = [f"{'p':>6} {'a_p':>5}  reduction"] + [
        f"{r['p']:>6} {r['ap']:>5}  {'good' if r['good'] else 'bad'}" for r in rows]
    if store is not None:
        store.save()
        results["cache"] = audit
        if audit["failures"]:
            verdict = "fail"
            for f in audit["failures"]:
                where = f"line {f['line']}" if f["line"] else f"{f['curveId']} p={f['p']}"
                text.append(f"cache audit failure ({where}): {f['reason']}")
    return RunReport("ap", {"curve": E.curve_id, "pmax": pmax}, results, verdict, text_rows=text)


def cmd_zeta(curve, p: int, depth: int) -> RunReport:
    E = _curve(curve)
    inputs = {"curve": E.curve_id, "p": p, "depth": depth}
    try:
        rep = verify_rationality(E, p, depth)
    except UsageError as exc:
        return RunReport("zeta", inputs, {"error": str(exc)}, "fail", text_rows=[f"error: {exc}"])
    d = rep.as_dict()
    text = [
        f"|E(F_p^n)|, n=1..{depth}: {rep.counts}",
        f"a_p = {rep.ap}",
        f"exp(sum |E(F_p^n)| u^n/n)         : {d['exponential']}",
        f"(1 - a_p u + p u^2)/((1-u)(1-pu)) : {d['closed_form']}",
        f"exp(sum (p^n+1-|E|) u^n/n)        : {d['from_traces']}",
        f"1/(1 - a_p u + p u^2)             : {d['rational']}",
        f"closed form matches: {rep.closed_form_match}; trace series matches: {rep.trace_match}; "
        f"count series equals 1/(1 - a_p u + p u^2): {rep.literal_match}",
    ]
    return RunReport("zeta", inputs, d, "pass" if rep.passed else "fail", text_rows=text)


def cmd_modularity(curve, level: int, pmax: int, cache=None,
                   audit_rate: float = DEFAULT_AUDIT_RATE, jobs: int | None = 1) -> RunReport:
    if level not in SUPPORTED_LEVELS:
        raise UsageError(f"level {level} not implemented; supported levels: {', '.join(map(str, SUPPORTED_LEVELS))}")
    E = _curve(curve)
    store = _resolve_cache(cache, audit_rate)
    table = ap_table(E, pmax, store, jobs)
    form = newform_level11(max(pmax, 1))
    rep = eichler_shimura_check(E, form, pmax, ap_source=table.__getitem__)
    results = rep.as_dict()
    verdict = "pass" if rep.verdict else "fail"
    if store is not None:
        store.save()
        results["cache"] = _audit_results(store)
        if store.failures:
            verdict = "fail"
    return RunReport("modularity", {"curve": E.curve_id, "level": level, "pmax": pmax},
                     results, verdict, text_rows=rep.to_text().splitlines())


def cmd_lvalue(curve, s: float, cutoff: int, method: str = "euler_product") -> RunReport:
    E = _curve(curve)
    q = LQuery(s, cutoff, method)
    val = l_value(q, factors=local_factors(E, cutoff))
    results = {"value": val.value, "warning": val.warning}
    text = [f"L(E, {s}) ~ {val.value:.12f}  ({method}, cutoff {cutoff})"]
    if val.warning:
        text.append(f"warning: {val.warning}")
    return RunReport("lvalue", {"curve": E.curve_id, "s": s, "cutoff": cutoff, "method": method},
                     results, "informational", text_rows=text)


def cmd_jinv(terms: int) -> RunReport:
    if terms < 1:
        raise UsageError("terms must be >= 1")
    j = j_invariant(max(terms - 2, 0))
    shown = j.format(terms)
    coeffs = {str(j.lead_exp + i): c for i, c in enumerate(j.coeffs[:terms])}
    return RunReport("jinv", {"terms": terms}, {"series": shown, "coefficients": coeffs},
                     "informational", text_rows=[shown])


def cmd_genus(N: int) -> RunReport:
    e2, e3 = elliptic_point_counts(N)
    res = {"N": N, "genus": genus_X0(N), "index": index_gamma0(N), "cusps": cusp_count(N), "e2": e2, "e3": e3}
    if N <= 30:
        res["oracle"] = coset_invariants(N)
    return RunReport("genus", {"N": N}, res, "informational",
                     text_rows=[f"g(X_0({N})) = {res['genus']}  (index {res['index']}, cusps {res['cusps']}, "
                                f"e2 {e2}, e3 {e3})"])


def cmd_cusps(N: int) -> RunReport:
    c = cusp_count(N)
    return RunReport("cusps", {"N": N}, {"cusps": c}, "informational", text_rows=[f"X_0({N}) has {c} cusps"])


def cmd_classify(matrix) -> RunReport:
    g = parse_matrix(matrix) if isinstance(matrix, str) else matrix
    kind = classify_element(g)
    res = {"matrix": str(g), "trace": g.trace, "class": kind}
    text = [f"{g}: trace {g.trace}, {kind}"]
    if kind == "parabolic":
        x = parabolic_fixed_point(g)
        res["fixed_point"] = "oo" if x is INFINITY else str(x)
        text.append(f"fixed point on the boundary: {res['fixed_point']}")
    return RunReport("classify", {"matrix": str(g)}, res, "informational", text_rows=text)


def cmd_frey(a: int, b: int, p: int) -> RunReport:
    fp = FreyParameters(a, b, p)
    E = frey_curve(fp)
    bad = frey_bad_primes(fp)
    res = {"curve": E.curve_id, "discriminant": str(E.discriminant), "bad_primes": bad}
    text = [f"Frey curve y^2 = x(x - {a}^{p})(x + {b}^{p}) = {E.curve_id}",
            f"discriminant {E.discriminant} = 16 (A B (A+B))^2",
            f"bad primes (illustration): {bad}"]
    return RunReport("frey", {"a": a, "b": b, "p": p}, res, "informational", text_rows=text)


def cmd_fermat(bound: int, nmax: int, nmin: int = 3) -> RunReport:
    hits = fermat_search(bound, nmin, nmax)
    cubic_or_higher = [h for h in hits if h.n >= 3]
    res = {"hits": [[h.X, h.Y, h.Z, h.n] for h in hits]}
    verdict = "fail" if cubic_or_higher else "pass"
    text = [f"{len(hits)} nontrivial solutions with X <= Y <= {bound}, {nmin} <= n <= {nmax}"]
    text += [f"  {h.X}^{h.n} + {h.Y}^{h.n} = {h.Z}^{h.n}" for h in hits[:20]]
    return RunReport("fermat", {"bound": bound, "nmin": nmin, "nmax": nmax}, res, verdict, text_rows=text)


BSD_S_VALUES = (2.0, 1.5, 1.25, 1.1, 1.05, 1.01, 1.0)


def cmd_bsd_explore(curve, cutoffs=(100, 1000, 10000), s_values=BSD_S_VALUES) -> RunReport:
    E = _curve(curve)
    cutoffs = sorted(cutoffs)
    factors = local_factors(E, cutoffs[-1])
    rows = []
    for s in s_values:
        for c in cutoffs:
            v = l_value(LQuery(s, c, "euler_product"), factors=factors)
            rows.append({"s": s, "cutoff": c, "value": v.value, "certified": v.warning is None})
    text = [f"{'s':>6} {'cutoff':>8} {'partial L':>16}"] + [
        f"{r['s']:>6} {r['cutoff']:>8} {r['value']:>16.10f}" + ("" if r["certified"] else "  *") for r in rows]
    return RunReport("bsd-explore", {"curve": E.curve_id, "cutoffs": cutoffs}, {"rows": rows},
                     "informational", banner=BSD_BANNER, text_rows=text)


# ---------------------------------------------------------------------------
# argument parsing


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="modcheck", description=__doc__.splitlines()[0])
    parser.add_argument("--json", action="store_true", help="emit a JSON report on stdout")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def cache_opts(p):
        p.add_argument("--cache", help="a_p cache CSV (default: $MODCHECK_CACHE_DIR/ap_cache.csv if set)")
        p.add_argument("--audit-rate", type=float, default=DEFAULT_AUDIT_RATE)
        p.add_argument("--jobs", type=int, default=None, help="worker processes (default: all cores)")

    p = sub.add_parser("ap", help="a_p table for p <= pmax")
    p.add_argument("curve")
    p.add_argument("pmax", type=int)
    cache_opts(p)

    p = sub.add_parser("zeta", help="local zeta rationality check")
    p.add_argument("curve")
    p.add_argument("p", type=int)
    p.add_argument("depth", type=int)

    p = sub.add_parser("modularity", help="compare a_p with the level-N newform")
    p.add_argument("curve")
    p.add_argument("level", type=int)
    p.add_argument("pmax", type=int)
    cache_opts(p)

    p = sub.add_parser("lvalue", help="partial L-value")
    p.add_argument("curve")
    p.add_argument("s", type=float)
    p.add_argument("cutoff", type=int)
    p.add_argument("--method", choices=("euler_product", "dirichlet_sum"), default="euler_product")

    p = sub.add_parser("jinv", help="first terms of j")
    p.add_argument("terms", type=int)

    for name in ("genus", "cusps"):
        p = sub.add_parser(name, help=f"{name} of X_0(N)")
        p.add_argument("N", type=int)

    p = sub.add_parser("classify", help="classify [[a,b],[c,d]] in SL2(Z)")
    p.add_argument("matrix")

    p = sub.add_parser("frey", help="Frey curve for (a, b, p)")
    p.add_argument("a", type=int)
    p.add_argument("b", type=int)
    p.add_argument("p", type=int)

    p = sub.add_parser("fermat", help="exhaustive Fermat box search")
    p.add_argument("bound", type=int)
    p.add_argument("nmax", type=int)
    p.add_argument("--nmin", type=int, default=3, help="use 2 for the Pythagorean control run")

    p = sub.add_parser("bsd-explore", help="uncertified partial L-values as s approaches 1")
    p.add_argument("curve")
    p.add_argument("--cutoffs", type=_int_list, default=[100, 1000, 10000])
    return parser


def dispatch(args: argparse.Namespace) -> RunReport:
    c = args.command
    if c == "ap":
        return cmd_ap(args.curve, args.pmax, args.cache, args.audit_rate, args.jobs)
    if c == "zeta":
        return cmd_zeta(args.curve, args.p, args.depth)
    if c == "modularity":
        return cmd_modularity(args.curve, args.level, args.pmax, args.cache, args.audit_rate, args.jobs)
    if c == "lvalue":
        return cmd_lvalue(args.curve, args.s, args.cutoff, args.method)
    if c == "jinv":
        return cmd_jinv(args.terms)
    if c == "genus":
        return cmd_genus(args.N)
    if c == "cusps":
        return cmd_cusps(args.N)
    if c == "classify":
        return cmd_classify(args.matrix)
    if c == "frey":
        return cmd_frey(args.a, args.b, args.p)
    if c == "fermat":
        return cmd_fermat(args.bound, args.nmax, args.nmin)
    if c == "bsd-explore":
        return cmd_bsd_explore(args.curve, args.cutoffs)
    raise UsageError(f"unknown command {c!r}")


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        report = dispatch(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except ModcheckError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    print(report.to_json() if args.json else report.to_text())
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
