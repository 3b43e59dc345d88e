"""Command-line interface; every subcommand prints one JSON document.

Exit status: 0 completed, 1 validation failure, 2 input error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from fractions import Fraction
from pathlib import Path

from . import cmtools, grouplab, modcurves, survey
from .ellcurves import QuadFieldElem, curve_from_j, elkies7_j, elkies7_point_search, global_isogeny_test, local_scan
from .ellcurves.elkies import elkies7_j_at_infinity
from .modpoly import ModularPolynomialError, load_modular_polynomial

EXIT_OK, EXIT_INVALID, EXIT_INPUT = 0, 1, 2

KIND_NAMES = {"split": "split-normalizer", "A4": "A4", "S4": "S4", "A5": "A5", "borel": "borel"}


class InputError(ValueError):
    pass


def parse_j(text: str, D: int) -> QuadFieldElem:
    """``num/den`` for a rational j, or ``a,b`` for a + b sqrt(D)."""
    try:
        if "," in text:
            a, b = text.split(",", 1)
            if D == 1:
                raise InputError("a,b form needs --field-sqrt")
            return QuadFieldElem(Fraction(a.strip()), Fraction(b.strip()), D)
        return QuadFieldElem(Fraction(text.strip()), 0, D)
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"cannot parse j = {text!r}: {exc}") from exc


def read_js(path: str, D: int) -> list[tuple[str, QuadFieldElem]]:
    out = []
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if line:
            out.append((f"{Path(path).name}:{lineno}", parse_j(line, D)))
    return out


def field_of(D: int | None) -> survey.NumberFieldDesc:
    try:
        return survey.NumberFieldDesc.quadratic(D if D is not None else 1)
    except ValueError as exc:
        raise InputError(str(exc)) from exc


# ---------------------------------------------------------------- handlers return (payload, ok)


def cmd_bound(a):
    try:
        K = survey.NumberFieldDesc(a.degree, a.disc)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    return {"degree": K.d, "disc": K.disc, "bound": survey.exceptional_bound(K)}, True


def cmd_window(a):
    if a.degree < 1:
        raise InputError("degree must be at least 1")
    return {"degree": a.degree, "window": survey.theorem4_window(a.degree)}, True


def cmd_group_scan(a):
    report = grouplab.enumerate_exceptional(a.ell, a.mode, cap=a.cap)
    violations = []
    if a.mode in ("split", "all"):
        violations += grouplab.verify_lemma_split(a.ell, report)
    if a.mode in ("sl2", "all"):
        violations += grouplab.verify_lemma_sl2(a.ell, report)
    report.violations = violations
    payload = report.to_json()
    if a.out:
        Path(a.out).write_text(json.dumps(payload, indent=2) + "\n")
    return payload, not violations


def cmd_genus(a):
    kind = KIND_NAMES[a.kind]
    out = {"ell": a.ell, "kind": kind}
    if a.method in ("closed", "both"):
        if kind == "borel":
            if a.method == "closed":
                raise InputError("no closed form is implemented for the Borel curve; use --method cosets")
        else:
            out["closed"] = modcurves.genus_closed(a.ell, kind)
    if a.method in ("cosets", "both"):
        out["cosets"] = modcurves.genus_from_cosets(kind, a.ell).to_json()
    ok = True
    if "closed" in out and "cosets" in out:
        out["agree"] = out["closed"] == out["cosets"]["genus"]
        ok = out["agree"]
    out["genus"] = out["closed"] if "closed" in out else out["cosets"]["genus"]
    return out, ok


def cmd_local_scan(a):
    D = a.field_sqrt or 1
    field_of(D)
    E = curve_from_j(parse_j(a.j, D), D)
    return local_scan(E, a.ell, a.bound).to_json(), True


def cmd_global_test(a):
    D = a.field_sqrt or 1
    field_of(D)
    try:
        phi = load_modular_polynomial(a.ell, a.modpoly_dir)
    except ModularPolynomialError as exc:
        return {"ell": a.ell, "error": str(exc), "cause": exc.cause}, False
    return global_isogeny_test(parse_j(a.j, D), a.ell, D, phi).to_json(), True


def cmd_elkies7(a):
    D = a.field_sqrt or 1
    field_of(D)
    points = elkies7_point_search(a.height, D)
    rows = [{"point": "infinity", "t": "-1/2", "j": elkies7_j_at_infinity().to_json()}]
    for P in points:
        row = P.to_json()
        try:
            row["j"] = elkies7_j(P.u, P.v).to_json()
        except (ValueError, ZeroDivisionError) as exc:
            row["j"] = None
            row["note"] = str(exc)
        rows.append(row)
    finite = sum(1 for P in points if P.v != 0)
    return {
        "field": {"D": D},
        "height": a.height,
        "points": rows,
        "points_with_v_nonzero": finite,
        "rank": "not computed",
        "evidence": "points with v != 0 found" if finite else "no points with v != 0 up to this height",
    }, True


def cmd_cusp5(a):
    res = modcurves.cusp_galois_stability()
    return _jsonable(res), bool(res["stable"])


def cmd_classnum(a):
    forms = cmtools.reduced_forms(a.disc)
    return {"D": a.disc, "h": len(forms), "forms": [f.as_list() for f in forms]}, True


def cmd_cm_check(a):
    rep = cmtools.isogenous_order_ratio_check(a.disc, a.ell)
    out = rep.to_json()
    out["cm_guard_over_Q"] = cmtools.cm_guard(a.ell, 1)
    return out, rep.match


def cmd_survey(a):
    K = field_of(a.field_sqrt)
    D = K.D
    js = read_js(a.js, D) if a.js else []
    if a.elkies_height is not None:
        if a.ell != 7:
            raise InputError("--elkies-height needs --ell 7")
        js += survey.elkies7_js(a.elkies_height, D)
    if not js:
        raise InputError("nothing to survey: give --js and/or --elkies-height")
    report = survey.survey(K, a.ell, js, a.bound)
    return report.to_json(), not report.violations()


def cmd_five(a):
    res = survey.five_infinitude_check(field_of(a.field_sqrt), a.bound)
    return res, res["verdict"] != "unresolved"


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, set, frozenset)):
        items = [_jsonable(v) for v in x]
        return sorted(items, key=repr) if isinstance(x, (set, frozenset)) else items
    if hasattr(x, "to_json"):
        return x.to_json()
    if isinstance(x, (int, float, str, bool)) or x is None:
        return x
    return str(x)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="exceptional-pairs", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("bound", help="the bound max(|disc|, 6d+1)")
    s.add_argument("--degree", type=int, required=True)
    s.add_argument("--disc", type=int, required=True)
    s.set_defaults(func=cmd_bound)

    s = sub.add_parser("window", help="primes ell = 3 mod 4 in [7, 6d+1]")
    s.add_argument("--degree", type=int, required=True)
    s.set_defaults(func=cmd_window)

    s = sub.add_parser("group-scan", help="enumerate exceptional subgroups and check the lemmas")
    s.add_argument("--ell", type=int, required=True)
    s.add_argument("--mode", choices=grouplab.MODES, required=True)
    s.add_argument("--out")
    s.add_argument("--cap", type=int, default=grouplab.EXHAUSTIVE_CAP,
                   help="largest ell scanned exhaustively")
    s.set_defaults(func=cmd_group_scan)

    s = sub.add_parser("genus", help="genus of a modular curve")
    s.add_argument("--ell", type=int, required=True)
    s.add_argument("--kind", choices=tuple(KIND_NAMES), required=True)
    s.add_argument("--method", choices=("closed", "cosets", "both"), default="both")
    s.set_defaults(func=cmd_genus)

    s = sub.add_parser("local-scan", help="local ell-isogeny test at good primes")
    s.add_argument("--ell", type=int, required=True)
    s.add_argument("--j", required=True)
    s.add_argument("--field-sqrt", type=int)
    s.add_argument("--bound", type=int, required=True)
    s.set_defaults(func=cmd_local_scan)

    s = sub.add_parser("global-test", help="ell-isogeny over K and K(sqrt -ell)")
    s.add_argument("--ell", type=int, required=True)
    s.add_argument("--j", required=True)
    s.add_argument("--field-sqrt", type=int)
    s.add_argument("--modpoly-dir", help="directory with phi_<ell>.txt (default: shipped tables)")
    s.set_defaults(func=cmd_global_test)

    s = sub.add_parser("elkies7", help="point search on v^2 = u^3 - 1715u + 33614")
    s.add_argument("--height", type=int, required=True)
    s.add_argument("--field-sqrt", type=int)
    s.set_defaults(func=cmd_elkies7)

    sub.add_parser("cusp5", help="Galois stability of the cusp class on X_G(5)").set_defaults(func=cmd_cusp5)

    s = sub.add_parser("classnum", help="reduced forms and class number")
    s.add_argument("--disc", type=int, required=True)
    s.set_defaults(func=cmd_classnum)

    s = sub.add_parser("cm-check", help="class number ratio for the order of conductor ell")
    s.add_argument("--disc", type=int, required=True)
    s.add_argument("--ell", type=int, required=True)
    s.set_defaults(func=cmd_cm_check)

    s = sub.add_parser("survey", help="classify j-invariants over Q or Q(sqrt D)")
    s.add_argument("--ell", type=int, required=True)
    s.add_argument("--field-sqrt", type=int, default=1)
    s.add_argument("--bound", type=int, default=survey.DEFAULT_BOUND)
    s.add_argument("--js", help="file with one j per line (num/den, or a,b for a + b sqrt D)")
    s.add_argument("--elkies-height", type=int, help="also survey j-invariants from points of E' (ell = 7)")
    s.set_defaults(func=cmd_survey)

    s = sub.add_parser("five-check", help="evidence for the ell = 5 dichotomy over a field")
    s.add_argument("--field-sqrt", type=int, default=1)
    s.add_argument("--bound", type=int, default=survey.DEFAULT_BOUND)
    s.set_defaults(func=cmd_five)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        payload, ok = args.func(args)
    except (InputError, ValueError, FileNotFoundError) as exc:
        print(json.dumps({"error": str(exc), "command": args.command}))
        return EXIT_INPUT
    except ArithmeticError as exc:
        print(json.dumps({"error": str(exc), "command": args.command, "kind": "validation"}))
        return EXIT_INVALID
    print(json.dumps(payload, indent=2))
    return EXIT_OK if ok else EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
