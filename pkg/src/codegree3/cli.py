"""Command line front end.

Exit status: 0 success or accepted, 1 rejected or failed check, 2 usage
error, 3 capability error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import certificate as cert_mod
from . import constructions as cons
from . import extensions as ext
from . import search
from .enumeration import enumerate_admissible, enumerate_flags, enumerate_types
from .errors import CapabilityError, CertificateError, PreconditionError, ValidationError
from .graphs import (
    RootedGraph,
    ThreeGraph,
    canonical_mask,
    encode,
    is_f32_free,
    min_codegree,
    named_graph,
    parse_any,
)
from .linalg import format_rational, parse_rational

EXIT_OK, EXIT_REJECTED, EXIT_USAGE, EXIT_CAPABILITY = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _rational(s: str) -> Fraction:
    try:
        return parse_rational(s)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _graph(s: str) -> ThreeGraph:
    try:
        return named_graph(s)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _forbid(s: str) -> list[ThreeGraph]:
    if s.strip().lower() in ("", "none"):
        return []
    return [_graph(x.strip()) for x in s.split(",") if x.strip()]


def _ints(s: str) -> list[int]:
    try:
        return [int(x) for x in s.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"expected comma-separated integers, got {s!r}") from None


def _pairs(s: str) -> list[tuple[int, int]]:
    """``"12,13"`` or ``"1-2,1-3"`` -> [(1, 2), (1, 3)]."""
    out = []
    for tok in s.split(","):
        tok = tok.strip()
        if not tok:
            continue
        try:
            a, b = tok.split("-") if "-" in tok else (tok[0], tok[1:])
            out.append(tuple(sorted((int(a), int(b)))))
        except ValueError:
            raise UsageError(f"bad pair {tok!r}") from None
    return out


def _emit(args, obj, text):
    if args.json:
        print(json.dumps(obj))
    else:
        print(text)


# --- subcommands -------------------------------------------------------------

def cmd_enumerate(args):
    forbidden = _forbid(args.forbid)
    if args.kind == "admissible":
        items = [encode(g) for g in enumerate_admissible(forbidden, args.n, jobs=args.jobs).graphs]
    elif args.kind == "types":
        sizes = _ints(args.sizes) if args.sizes else list(range(args.n % 2, args.n, 2))
        items = [t.encode() for t in enumerate_types(forbidden, sizes)]
    else:
        if not args.type:
            raise UsageError("--type is required for flags")
        tau = parse_any(args.type)
        tau = tau.graph if isinstance(tau, RootedGraph) else tau
        order = args.order if args.order is not None else args.n
        items = [f.encode() for f in enumerate_flags(tau, order, forbidden).flags]
    if args.count_only:
        _emit(args, {"count": len(items)}, str(len(items)))
    elif args.json:
        print(json.dumps({"count": len(items), "items": items}))
    else:
        print(len(items))
        for s in items:
            print(s)
    return EXIT_OK


def _load(path):
    try:
        return cert_mod.load_certificate(path)
    except OSError as exc:
        raise UsageError(str(exc)) from None


def cmd_verify(args):
    try:
        cert = _load(args.file)
    except CertificateError as exc:
        _emit(args, {"verdict": "rejected", "error": exc.code, "message": str(exc)}, f"rejected\n{exc}")
        return EXIT_REJECTED
    report = cert_mod.verify(cert)
    _emit(args, report.to_json(), report.to_text())
    return EXIT_OK if report.accepted else EXIT_REJECTED


def construction_sharp_indices(problem) -> list[int]:
    lookup = {g.mask: i for i, g in enumerate(problem.admissible.graphs)}
    return sorted(lookup[canonical_mask(g.order, g.mask)]
                  for g in cons.sharp_compatible_graphs(problem.N, phantom=True))


def cmd_sharp(args):
    try:
        cert = _load(args.file)
    except CertificateError as exc:
        _emit(args, {"error": exc.code, "message": str(exc)}, str(exc))
        return EXIT_REJECTED
    report = cert_mod.verify(cert)
    sharp = report.sharp_indices
    out = {"sharp_indices": sharp, "count": len(sharp)}
    text = [f"{len(sharp)} sharp graphs"] + [f"{i} {encode(cert.problem.admissible.graphs[i])}" for i in sharp]
    code = EXIT_OK
    if args.compare_construction:
        expected = construction_sharp_indices(cert.problem)
        equal = cert_mod.compare_sharp(report, set(expected))
        contains_all = set(expected) <= set(sharp)
        out.update(expected=expected, equal=equal, contains_expected=contains_all)
        text.append(f"construction set ({len(expected)}): {'equal' if equal else 'different'}")
        code = EXIT_OK if equal else EXIT_REJECTED
    _emit(args, out, "\n".join(text))
    return code


def _build(args) -> tuple[ThreeGraph, dict]:
    fam = args.family
    params: dict = {"family": fam}
    if fam in ("D", "T"):
        if not args.parts:
            raise UsageError("--parts is required")
        parts = _ints(args.parts)
        params["parts"] = parts
        g = cons.build_D(*parts) if fam == "D" else cons.build_T(*parts)
    elif fam in ("CT0", "CT2"):
        if args.n is None:
            raise UsageError("--n is required")
        params["n"] = args.n
        g = cons.build_CT(args.n) if fam == "CT0" else cons.build_CT_mod2(args.n)
    elif fam in ("CT1a", "CT1b", "CT1c"):
        if args.m is None:
            raise UsageError("--m is required")
        params["m"] = args.m
        if fam == "CT1a":
            g = cons.build_CT1(args.m)
        elif fam == "CT1b":
            params["k"] = args.k
            g = cons.build_CT2(args.m, args.k)
        else:
            S = cons.ct3_cycle(args.m) if args.cycle else (_pairs(args.S) if args.S else [])
            params["S"] = [list(q) for q in S]
            g = cons.build_CT3(args.m, S)
    else:
        raise UsageError(f"unknown family {fam!r}")
    return g, params


def cmd_construct(args):
    g, params = _build(args)
    stats = cons.construction_stats(g)
    stats.update(params)
    stats["graph"] = encode(g)
    if args.json:
        print(json.dumps(stats))
    else:
        print(encode(g))
        print(json.dumps({k: v for k, v in stats.items() if k != "graph"}))
    return EXIT_OK


def cmd_stats(args):
    try:
        fh = sys.stdin if args.file == "-" else open(args.file, encoding="utf-8")
    except OSError as exc:
        raise UsageError(str(exc)) from None
    with fh:
        lines = [ln.strip() for ln in fh if ln.strip() and not ln.startswith("#")]
    for ln in lines:
        g = _graph(ln)
        rec = {"graph": encode(g), "n": g.order, "e": g.size,
               "min_codegree": min_codegree(g) if g.order >= 2 else None,
               "f32_free": is_f32_free(g)}
        if args.json:
            print(json.dumps(rec))
        else:
            print(f"{rec['graph']} n={rec['n']} e={rec['e']} min_codegree={rec['min_codegree']} "
                  f"f32_free={rec['f32_free']}")
    return EXIT_OK


def cmd_extend_check(args):
    host = _graph(args.host)
    weights = {}
    for spec in args.weight or []:
        if "=" not in spec:
            raise UsageError("--weight expects PAIRS=VALUE")
        lhs, rhs = spec.split("=", 1)
        val = _rational(rhs)
        for q in _pairs(lhs):
            weights[q] = val
    w = ext.PairWeighting(host, weights)
    targets = [_graph(t) for t in (args.target or ["F32"])]
    res = ext.check_extension_lemma(host, w, _rational(args.threshold), targets, strict=not args.non_strict)
    out = {"verified": res.verified, "weight_total": format_rational(w.total()),
           "links_examined": res.links_examined, "links_above_threshold": res.links_above_threshold,
           "counterexample": None if res.counterexample is None else [list(q) for q in res.counterexample]}
    if res.counterexample is not None:
        out["counterexample_weight"] = format_rational(res.counterexample_weight)
    if res.verified:
        text = "verified"
    else:
        link = " ".join(f"{a}{b}" for a, b in res.counterexample) or "(empty link)"
        text = f"counterexample {link} weight {format_rational(res.counterexample_weight)}"
    _emit(args, out, text)
    return EXIT_OK if res.verified else EXIT_REJECTED


def cmd_lemma_suite(args):
    suite = ext.lemma_suite(args.kmax)
    ok_all = True
    records = []
    lines = []
    for name in ext.LEMMA_ORDER:
        checks = suite[name]
        ok = all(r.verified for _, r in checks)
        ok_all &= ok
        bad = [(label, r) for label, r in checks if not r.verified]
        labels = ", ".join(label for label, _ in checks)
        if ok:
            lines.append(f"{name}: verified ({labels})")
        else:
            label, r = bad[0]
            lines.append(f"{name}: FAILED at {label}, counterexample {r.counterexample}")
        records.append({"lemma": name, "verified": ok,
                        "checks": [{"case": label, "verified": r.verified,
                                    "links_examined": r.links_examined} for label, r in checks]})
    _emit(args, {"verified": ok_all, "lemmas": records}, "\n".join(lines))
    return EXIT_OK if ok_all else EXIT_REJECTED


def cmd_bruteforce(args):
    forbidden = _forbid(args.forbid)
    if args.local_search:
        d, g = search.local_search_coex(args.n, forbidden, args.iterations, args.seed)
        _emit(args, {"n": args.n, "lower_bound": d, "witness": encode(g), "exact": False},
              f"lower bound {d} (local search, not exact)\n{encode(g)}")
        return EXIT_OK
    d, g = search.brute_force_coex(args.n, forbidden, jobs=args.jobs)
    _emit(args, {"n": args.n, "value": d, "witness": encode(g), "exact": True}, f"{d}\n{encode(g)}")
    return EXIT_OK


def cmd_mixed_bound(args):
    c = _rational(args.c)
    b = search.mixed_bound(c, args.n)
    out = {"c": format_rational(c), "n": args.n, "bound": format_rational(b)}
    text = [f"{format_rational(b)} ({float(b):.6f})"]
    if args.construction:
        r = search.interpolating_construction(c, args.n)
        out.update(parts=list(r.parts), edges=r.edges, min_codegree=r.min_codegree)
        text.append(f"T{r.parts}: e={r.edges} min_codegree={r.min_codegree}")
    _emit(args, out, "\n".join(text))
    return EXIT_OK


def cmd_export_sdp(args):
    from .sdpa import export_sdp
    text = export_sdp(_forbid(args.forbid), args.n, _rational(args.bound))
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_eigenprofile(args):
    forbidden = _forbid(args.forbid)
    tau = parse_any(args.type)
    tau = tau.graph if isinstance(tau, RootedGraph) else tau
    order = args.order if args.order is not None else (args.n + tau.order) // 2
    basis = enumerate_flags(tau, order, forbidden)
    placements = [tuple(_ints(args.parts))] if args.parts else cert_mod.inducing_placements(tau)
    records = []
    for p in placements:
        z = cert_mod.limit_profile(tau, p, basis)
        records.append({"parts": list(p), "profile": z,
                        "support": [basis.flags[i].encode() for i, x in enumerate(z) if x]})
    code = EXIT_OK
    check = None
    if args.cert:
        cert = _load(args.cert)
        pr = cert.problem
        t_idx = next((i for i, t in enumerate(pr.types) if t.graph == tau), None)
        if t_idx is None or t_idx not in cert.blocks:
            check = None
        else:
            check = cert_mod.zero_eigenvector_check(cert)[t_idx]
            code = EXIT_OK if check else EXIT_REJECTED
    if args.json:
        print(json.dumps({"type": encode(tau), "flags": len(basis), "profiles": records,
                          "zero_eigenvectors": check}))
    else:
        for r in records:
            print(f"parts {''.join(map(str, r['parts']))}: {sum(1 for x in r['profile'] if x)} nonzero of "
                  f"{len(basis)}: " + " ".join(r["support"]))
        if args.cert:
            print("zero eigenvectors: " + ("n/a" if check is None else ("ok" if check else "FAILED")))
    return code


# --- parser -----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    def global_flags(parser, suppress):
        kw = {"default": argparse.SUPPRESS} if suppress else {}
        parser.add_argument("--jobs", type=int, help="worker processes (output does not depend on it)",
                            **(kw or {"default": 1}))
        parser.add_argument("--seed", type=int, help="seed for randomized modes", **(kw or {"default": 0}))
        parser.add_argument("--json", action="store_true", help="machine-readable output", **kw)

    # global flags may come before or after the subcommand
    common = argparse.ArgumentParser(add_help=False)
    global_flags(common, suppress=True)

    p = argparse.ArgumentParser(prog="codegree3", description="Codegree Turan tools for 3-graphs.")
    global_flags(p, suppress=False)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("enumerate", parents=[common], help="admissible graphs, types or flags")
    s.add_argument("--forbid", default="F32")
    s.add_argument("--n", type=int, default=6)
    s.add_argument("--kind", choices=["admissible", "types", "flags"], default="admissible")
    s.add_argument("--sizes", help="type sizes, e.g. 0,2,4")
    s.add_argument("--type", help="type graph string for --kind flags")
    s.add_argument("--order", type=int, help="flag order for --kind flags")
    s.add_argument("--count-only", action="store_true")
    s.set_defaults(func=cmd_enumerate)

    s = sub.add_parser("verify-cert", parents=[common], help="verify a certificate file")
    s.add_argument("file")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("sharp", parents=[common], help="sharp graphs of a certificate")
    s.add_argument("file")
    s.add_argument("--compare-construction", action="store_true")
    s.set_defaults(func=cmd_sharp)

    s = sub.add_parser("construct", parents=[common], help="build a construction")
    s.add_argument("--family", required=True, choices=list(cons.FAMILIES))
    s.add_argument("--parts", help="part sizes for D and T, e.g. 4,4,4")
    s.add_argument("--n", type=int)
    s.add_argument("--m", type=int)
    s.add_argument("--k", type=int, default=0)
    s.add_argument("--S", help="special pairs for CT1c, e.g. 1-6,6-10")
    s.add_argument("--cycle", action="store_true", help="use a 3-cycle of special pairs for CT1c")
    s.set_defaults(func=cmd_construct)

    s = sub.add_parser("stats", parents=[common], help="n, e, min codegree, F32-freeness per graph")
    s.add_argument("file", help="file with one graph per line, or - for stdin")
    s.set_defaults(func=cmd_stats)

    s = sub.add_parser("extend-check", parents=[common], help="check a weighted extension statement")
    s.add_argument("--host", required=True)
    s.add_argument("--weight", action="append", help="PAIRS=VALUE, e.g. 12,13,23=1/3")
    s.add_argument("--threshold", required=True)
    s.add_argument("--target", action="append")
    s.add_argument("--non-strict", action="store_true")
    s.set_defaults(func=cmd_extend_check)

    s = sub.add_parser("lemma-suite", parents=[common], help="run the scripted extension checks")
    s.add_argument("--kmax", type=int, default=5)
    s.set_defaults(func=cmd_lemma_suite)

    s = sub.add_parser("bruteforce-coex", parents=[common], help="exact small-n codegree threshold")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--forbid", default="F32")
    s.add_argument("--local-search", action="store_true", help="randomized lower bound instead")
    s.add_argument("--iterations", type=int, default=50)
    s.set_defaults(func=cmd_bruteforce)

    s = sub.add_parser("mixed-bound", parents=[common], help="the mixed Turan/codegree lower bound")
    s.add_argument("--c", required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--construction", action="store_true")
    s.set_defaults(func=cmd_mixed_bound)

    s = sub.add_parser("export-sdp", parents=[common], help="write the SDP in SDPA sparse format")
    s.add_argument("--forbid", default="F32")
    s.add_argument("--n", type=int, default=6)
    s.add_argument("--bound", default="1/3")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_export_sdp)

    s = sub.add_parser("eigenprofile", parents=[common], help="limit profiles of a type in T")
    s.add_argument("--type", required=True)
    s.add_argument("--parts", help="part of each root, e.g. 2,1,1,1")
    s.add_argument("--order", type=int)
    s.add_argument("--n", type=int, default=6)
    s.add_argument("--forbid", default="F32")
    s.add_argument("--cert", help="check z Q z^T = 0 against this certificate")
    s.set_defaults(func=cmd_eigenprofile)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CapabilityError as exc:
        print(f"capability error: {exc}", file=sys.stderr)
        return EXIT_CAPABILITY
    except CertificateError as exc:
        print(f"rejected: {exc}", file=sys.stderr)
        return EXIT_REJECTED
    except ValidationError as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_REJECTED
    except PreconditionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
