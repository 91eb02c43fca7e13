"""Command-line interface: ``symrack <command> ...``; every command prints a JSON report.

Exit codes: 0 success, 1 a validation failure or mathematical finding,
2 usage error, 3 resource guard.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import os
import sys
import time

from . import __version__
from .abgrp import FiniteAbelianGroup, subquotient
from .assoc_group import (abelianization, associated_group, group_h1, tietze_reduce,
                          verify_iso)
from .catalog import (CatalogError, default_catalog, load_module, load_rack, parse_coeff,
                      rack_by_name, small_modules)
from .cohomology import Complex, CohomologyError, ResourceGuard, coeff_action
from .ext import (ExtensionError, FactorSet, _z2_b2, equivalent, h2_ext, validate_factor_set,
                  zero_factor_set)
from .modules import ModuleError, SQModule, trivial_module
from .oracles import OracleTooLarge, brute_force_h2
from .racks import FiniteSymmetricRack, RackError

EXIT_OK, EXIT_FINDING, EXIT_USAGE, EXIT_GUARD = 0, 1, 2, 3


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# reports
# ---------------------------------------------------------------------------

def _digest(ref):
    if ref and os.path.exists(ref):
        with open(ref, "rb") as fh:
            return "sha256:" + hashlib.sha256(fh.read()).hexdigest()
    return f"name:{ref}"


def _report(args, inputs, results, t0, ok=True, lines=()):
    return {
        "command": args.argv,
        "version": __version__,
        "inputs": {k: _digest(v) for k, v in inputs.items() if v is not None},
        "results": results,
        "ok": ok,
        "lines": list(lines),
        "timing": round(time.perf_counter() - t0, 4),
    }


def _factors(G: FiniteAbelianGroup):
    return list(G.factors)


# ---------------------------------------------------------------------------
# loading helpers
# ---------------------------------------------------------------------------

def _read_json(path):
    with open(path) as fh:
        return json.load(fh)


def _rack(args):
    if not getattr(args, "rack", None):
        raise UsageError("--rack is required")
    return load_rack(args.rack)


def _module(args, X):
    """Module from --module (file or name) or from --coeff as a trivial module."""
    if getattr(args, "module", None):
        return load_module(args.module, X)
    if getattr(args, "coeff", None):
        if X is None:
            raise UsageError("--coeff needs --rack")
        M = trivial_module(X, parse_coeff(args.coeff))
        M.name = f"trivial-{args.coeff}"
        return M
    raise UsageError("give --module or --coeff")


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_validate(args):
    t0 = time.perf_counter()
    ref = args.target
    if os.path.exists(ref):
        obj = _read_json(ref)
        if "sigma" in obj:
            kind = "factor-set"
            M = SQModule.from_json(obj["module"])
            fs = FactorSet.from_json(obj, module=M)
            rep = validate_factor_set(M, fs.sigma, args.variant)
        elif "phi" in obj:
            kind = "module"
            X = load_rack(args.rack) if args.rack else None
            rep = SQModule.from_json(obj, base=X).validate()
        else:
            kind = "rack"
            rep = FiniteSymmetricRack.from_json(obj, check=False).validate()
    else:
        kind = "rack"
        try:
            X = rack_by_name(ref)
        except CatalogError as exc:
            raise UsageError(str(exc)) from None
        rep = X.validate()
        if args.module:
            kind = "module"
            rep = load_module(args.module, X).validate()
    out = {"kind": kind, "valid": rep.ok, "violations": rep.to_json()}
    lines = [f"{v.axiom} fails at {list(v.witness)}" for v in rep.violations]
    return _report(args, {"target": ref}, out, t0, rep.ok, lines), (EXIT_OK if rep.ok else EXIT_FINDING)


def _emit_complex(Cx: Complex, n, path):
    data = {"variant": Cx.variant, "slices": [Cx.slice(d).to_json() for d in range(1, n + 2)]}
    with open(path, "w") as fh:
        json.dump(data, fh)


def cmd_cohomology(args):
    t0 = time.perf_counter()
    X = _rack(args)
    M = _module(args, X)
    C = coeff_action(M)
    Cx = Complex(C, args.variant, args.basepoint)
    n = args.degree
    if n < 0:
        raise UsageError("degree must be non-negative")
    if n > args.max_degree:
        raise ResourceGuard(f"degree {n} exceeds the cap {args.max_degree} (raise --max-degree)")
    G = Cx.homology(n) if args.homology else Cx.cohomology(n)
    res = {"degree": n, "variant": Cx.variant, "invariant_factors": _factors(G),
           "basepoint": args.basepoint, "homology": bool(args.homology)}
    ok = True
    lines = []
    if args.oracle and not args.homology and n == 2:
        other = h2_ext(M, Cx.variant).group
        res["h2_ext"] = _factors(other)
        try:
            _, _, brute = brute_force_h2(M, Cx.variant, limit=args.max_candidates)
            res["brute_force"] = _factors(brute)
            ok = ok and brute == G
        except OracleTooLarge as exc:
            lines.append(f"brute force skipped: {exc}")
        ok = ok and other == G
        if not ok:
            lines.append("pipelines disagree")
    if args.emit_complex:
        _emit_complex(Cx, n, args.emit_complex)
        res["complex_file"] = args.emit_complex
    return (_report(args, {"rack": args.rack, "module": args.module}, res, t0, ok, lines),
            EXIT_OK if ok else EXIT_FINDING)


def _h2_payload(M, variant, oracle, max_candidates):
    H = h2_ext(M, variant)
    res = {"variant": H.variant, "invariant_factors": H.invariants}
    ok, lines = True, []
    if oracle:
        L, Z, B = _z2_b2(M, H.variant)
        res["cocycles"] = subquotient(Z, [], L.m2).order if Z else 1
        res["coboundaries"] = subquotient(B, [], L.m2).order if B else 1
        try:
            z, b, g = brute_force_h2(M, H.variant, limit=max_candidates)
            res["brute_force"] = {"cocycles": z, "coboundaries": b, "invariant_factors": _factors(g)}
            ok = g == H.group and (z, b) == (res["cocycles"], res["coboundaries"])
            if not ok:
                lines.append("linear algebra and brute force disagree")
        except OracleTooLarge as exc:
            lines.append(f"brute force skipped: {exc}")
    return res, ok, lines


def cmd_h2ext(args):
    t0 = time.perf_counter()
    X = load_rack(args.rack) if args.rack else None
    M = _module(args, X)
    res, ok, lines = _h2_payload(M, args.variant, args.oracle, args.max_candidates)
    return (_report(args, {"rack": args.rack, "module": args.module}, res, t0, ok, lines),
            EXIT_OK if ok else EXIT_FINDING)


def cmd_ext_enumerate(args):
    t0 = time.perf_counter()
    X = load_rack(args.rack) if args.rack else None
    M = _module(args, X)
    variant = args.variant or ("sq" if M.base.quandle else "sr")
    z, b, g = brute_force_h2(M, variant, limit=int(float(args.max)))
    res = {"variant": variant, "cocycles": z, "coboundaries": b, "invariant_factors": _factors(g)}
    return _report(args, {"module": args.module}, res, t0), EXIT_OK


def cmd_ext_split(args):
    t0 = time.perf_counter()
    obj = _read_json(args.sigma)
    M = SQModule.from_json(obj["module"]) if "module" in obj else _module(args, _rack(args))
    fs = FactorSet.from_json(obj, module=M)
    variant = args.variant
    rep = validate_factor_set(M, fs.sigma, variant)
    if not rep.ok:
        res = {"valid": False, "violations": rep.to_json()}
        return _report(args, {"sigma": args.sigma}, res, t0, False), EXIT_FINDING
    v = equivalent(M, zero_factor_set(M), fs.sigma)
    res = {"valid": True, "split": v is not None,
           "witness": None if v is None else [list(a) for a in v]}
    return _report(args, {"sigma": args.sigma}, res, t0), EXIT_OK


def cmd_group_show(args):
    t0 = time.perf_counter()
    X = _rack(args)
    P = associated_group(X)
    T = tietze_reduce(P)
    res = {"presentation": P.to_json(), "tietze": T.to_json(),
           "abelianization": _factors(abelianization(P))}
    return _report(args, {"rack": args.rack}, res, t0), EXIT_OK


def cmd_group_h1(args):
    t0 = time.perf_counter()
    X = _rack(args)
    A = parse_coeff(args.coeff)
    r = group_h1(X, A, args.coefficients)
    res = {"coefficients": args.coefficients, "module_order": _order(r.module.group()),
           "invariant_factors": _factors(r.group)}
    return _report(args, {"rack": args.rack}, res, t0), EXIT_OK


def _order(G):
    return G.order if G.is_finite else "infinite"


def cmd_verify_iso(args):
    t0 = time.perf_counter()
    X = _rack(args)
    A = parse_coeff(args.coeff)
    rep = verify_iso(X, A, args.coefficients)
    return (_report(args, {"rack": args.rack}, rep.to_json(), t0, rep.equal, rep.findings),
            EXIT_OK if rep.equal else EXIT_FINDING)


def cmd_suite(args):
    from .suite import run_suite

    t0 = time.perf_counter()
    only = set(args.only) if args.only else None
    if only is not None and not only <= set(range(1, 10)):
        raise UsageError("criteria are numbered 1..9")
    results = run_suite(seed=args.seed, only=only, fault=args.inject)
    if not results:
        raise UsageError("nothing to run")
    ok = all(r.passed for r in results)
    lines = [r.line() for r in results]
    if not args.quiet:
        for line in lines:
            print(line, file=sys.stderr)
    return (_report(args, {}, [r.to_json() for r in results], t0, ok, lines),
            EXIT_OK if ok else EXIT_FINDING)


def cmd_census(args):
    t0 = time.perf_counter()
    racks = ([load_rack(r) for r in args.racks] if args.racks else default_catalog(args.max_n))
    if not racks:
        raise UsageError("empty catalog")
    rows = []
    for X in racks:
        mods = ([_module(argparse.Namespace(module=None, coeff=c), X) for c in args.coeff]
                if args.coeff else small_modules(X, args.max_order))
        for M in mods:
            C = coeff_action(M)
            variant = args.variant or ("sq" if X.quandle else "sr")
            if variant == "sq" and not X.quandle:
                continue
            Cx = Complex(C, variant)
            for d in args.degrees:
                G = Cx.homology(d) if args.homology else Cx.cohomology(d)
                rows.append({"rack": X.name, "module": getattr(M, "name", ""), "variant": variant,
                             "degree": d, "kind": "homology" if args.homology else "cohomology",
                             "factors": " ".join(map(str, G.factors))})
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            w = csv.DictWriter(fh, fieldnames=list(rows[0]) if rows else ["rack"])
            w.writeheader()
            w.writerows(rows)
    return _report(args, {}, {"rows": rows, "csv": args.csv}, t0), EXIT_OK


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def _common(p, module=True, coeff=True):
    p.add_argument("--rack", help="catalog name or rack JSON file")
    if module:
        p.add_argument("--module", help="module JSON file or name such as trivial-Z2")
    if coeff:
        p.add_argument("--coeff", help='coefficient group, e.g. "Z/2+Z/4" (trivial module)')


def build_parser():
    P = argparse.ArgumentParser(prog="symrack", description=__doc__.splitlines()[0])
    P.add_argument("--version", action="version", version=__version__)
    P.add_argument("--seed", type=int, default=None, help="seed for randomised choices")
    P.add_argument("--out", help="write the JSON report here instead of stdout")
    sub = P.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="validate a rack, module or factor set")
    p.add_argument("target", help="catalog rack name or JSON file")
    p.add_argument("--rack", help="base rack for a module file")
    p.add_argument("--module", help="module name to validate over a catalog rack")
    p.add_argument("--variant", choices=["sq", "sr"])
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("cohomology", help="(co)homology of a homogeneous module")
    _common(p)
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--variant", choices=["sq", "sr"])
    p.add_argument("--basepoint", type=int, default=0)
    p.add_argument("--homology", action="store_true")
    p.add_argument("--emit-complex", metavar="FILE")
    p.add_argument("--oracle", action="store_true", help="cross-check against independent pipelines")
    p.add_argument("--max-degree", type=int, default=4)
    p.add_argument("--max-candidates", type=int, default=10 ** 6)
    p.set_defaults(func=cmd_cohomology)

    p = sub.add_parser("h2ext", help="second cohomology from factor sets")
    _common(p)
    p.add_argument("--variant", choices=["sq", "sr"])
    p.add_argument("--oracle", action="store_true")
    p.add_argument("--max-candidates", type=int, default=10 ** 6)
    p.set_defaults(func=cmd_h2ext)

    ext = sub.add_parser("ext", help="extension tools").add_subparsers(dest="ext_command", required=True)
    p = ext.add_parser("h2")
    _common(p)
    p.add_argument("--variant", choices=["sq", "sr"])
    p.add_argument("--oracle", action="store_true")
    p.add_argument("--max-candidates", type=int, default=10 ** 6)
    p.set_defaults(func=cmd_h2ext)
    p = ext.add_parser("enumerate")
    _common(p)
    p.add_argument("--variant", choices=["sq", "sr"])
    p.add_argument("--max", default="1e6")
    p.set_defaults(func=cmd_ext_enumerate)
    p = ext.add_parser("split")
    _common(p)
    p.add_argument("--sigma", required=True, help="factor set JSON file")
    p.add_argument("--variant", choices=["sq", "sr"])
    p.set_defaults(func=cmd_ext_split)

    grp = sub.add_parser("group", help="associated group tools").add_subparsers(
        dest="group_command", required=True)
    p = grp.add_parser("show")
    _common(p, module=False, coeff=False)
    p.set_defaults(func=cmd_group_show)
    for name, func in (("h1", cmd_group_h1), ("verify-iso", cmd_verify_iso)):
        p = grp.add_parser(name)
        _common(p, module=False)
        p.add_argument("--coefficients", choices=["hom", "functions"], default="hom")
        p.set_defaults(func=func)
    p = sub.add_parser("verify-iso", help="same as 'group verify-iso'")
    _common(p, module=False)
    p.add_argument("--coefficients", choices=["hom", "functions"], default="hom")
    p.set_defaults(func=cmd_verify_iso)

    p = sub.add_parser("suite", help="run the acceptance matrix")
    p.add_argument("--only", type=int, nargs="+", metavar="N")
    p.add_argument("--inject", choices=["sign"], help="corrupt a boundary sign (self-test)")
    p.add_argument("--quiet", action="store_true")
    p.set_defaults(func=cmd_suite)

    p = sub.add_parser("census", help="sweep racks and modules, optionally writing CSV")
    p.add_argument("--racks", nargs="+")
    p.add_argument("--max-n", type=int, default=3)
    p.add_argument("--max-order", type=int, default=4)
    p.add_argument("--coeff", nargs="+")
    p.add_argument("--degrees", type=int, nargs="+", default=[1, 2])
    p.add_argument("--variant", choices=["sq", "sr"])
    p.add_argument("--homology", action="store_true")
    p.add_argument("--csv")
    p.set_defaults(func=cmd_census)
    return P


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    args.argv = ["symrack"] + argv
    try:
        report, code = args.func(args)
    except (UsageError, CatalogError, FileNotFoundError, json.JSONDecodeError) as exc:
        print(json.dumps({"error": "usage", "message": str(exc)}), file=sys.stderr)
        return EXIT_USAGE
    except (ResourceGuard, OracleTooLarge) as exc:
        print(json.dumps({"error": "resource", "message": str(exc)}), file=sys.stderr)
        return EXIT_GUARD
    except (RackError, ModuleError, ExtensionError, CohomologyError) as exc:
        print(json.dumps({"error": "invalid", "message": str(exc)}), file=sys.stderr)
        return EXIT_FINDING
    text = json.dumps(report, indent=2)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
