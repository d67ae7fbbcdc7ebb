"""Command-line entry point: ``todamaps <subcommand> [flags]``.

Exit status is 0 on success, 1 when an invariant check fails and 2 for bad
configuration (unknown flags, out-of-range parameters, infeasible requests).
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction

import mpmath

from . import numeric as _numeric


class InvariantFailure(Exception):
    pass


class ConfigError(Exception):
    pass


# --------------------------------------------------------------------------
# serialisation
# --------------------------------------------------------------------------


def _plain(obj, digits: int):
    """Turn results into JSON-ready data: rationals as "p/q", reals at fixed precision."""
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, float):
        return repr(obj)
    if isinstance(obj, mpmath.mpc):
        return {"re": mpmath.nstr(obj.real, digits), "im": mpmath.nstr(obj.imag, digits)}
    if isinstance(obj, mpmath.mpf):
        return mpmath.nstr(obj, digits)
    if isinstance(obj, dict):
        return {str(k): _plain(v, digits) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v, digits) for v in obj]
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def _flatten(obj, prefix=""):
    if isinstance(obj, dict):
        for k in sorted(obj):
            yield from _flatten(obj[k], f"{prefix}.{k}" if prefix else k)
    elif isinstance(obj, list):
        for i, v in enumerate(obj):
            yield from _flatten(v, f"{prefix}[{i}]")
    else:
        yield prefix, obj


def render(doc, emit: str) -> str:
    if emit == "json":
        return json.dumps(doc, sort_keys=True, indent=2) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["key", "value"])
    for k, v in _flatten(doc):
        w.writerow([k, "" if v is None else v])
    return buf.getvalue()


def _series_doc(ps) -> dict:
    return ps.to_dict()


# --------------------------------------------------------------------------
# subcommands
# --------------------------------------------------------------------------


def cmd_series(args) -> dict:
    from .equilibrium import equilibrium_series, ideal_residuals

    eq = equilibrium_series(args.order)
    g1, g2 = ideal_residuals(eq)
    if not (g1.is_zero() and g2.is_zero()):
        raise InvariantFailure(f"equilibrium ideal residual nonzero through s^{args.order}")
    return {"order": args.order, "z0": _series_doc(eq.z0), "u0": _series_doc(eq.u0)}


def cmd_motzkin(args) -> dict:
    from .motzkin import difference_string_system, enumerate_motzkin, operator_entry, operator_entry_band, toda_system

    doc: dict = {}
    if args.system:
        systems = difference_string_system(args.length) if args.system == "string" else toda_system(args.length)
        doc["system"] = [
            {"kind": e.kind, "component": e.component, "lhs": e.lhs, "rhs": e.rhs.to_list(),
             "divided_by": e.divided_by}
            for e in systems
        ]
        return doc
    entry = operator_entry(args.length, args.m1, args.m2)
    if entry != operator_entry_band(args.length, args.m1, args.m2):
        raise InvariantFailure("motzkin: path-sum and band-matrix entries differ")
    paths = list(enumerate_motzkin(args.length, args.m1, args.m2))
    doc.update(length=args.length, m1=args.m1, m2=args.m2, path_count=len(paths), entry=entry.to_list(), entry_text=str(entry))
    if args.list_paths:
        doc["paths"] = ["".join(p.steps) for p in paths]
    return doc


def cmd_equilibrium(args) -> dict:
    from .equilibrium import critical_coupling, density_grid, endpoint_residuals_numeric, equilibrium_numeric

    point = equilibrium_numeric(args.t3, args.digits)
    r1, r2 = endpoint_residuals_numeric(point)
    doc = {
        "t3": args.t3, "digits": args.digits, "z0": point.z0, "u0": point.u0, "A": point.A, "B": point.B,
        "critical_coupling": critical_coupling(args.digits), "endpoint_residuals": [r1, r2],
    }
    if args.grid:
        doc["density"] = [{"lambda": x, "rho": y} for x, y in density_grid(point, args.grid)]
    return doc


def cmd_hierarchy(args) -> dict:
    from .asymptotics import solve_hierarchy, string_residual, toda_residual

    hier = solve_hierarchy(args.gmax, args.order)
    h, f = hier.families()
    R = 2 * args.gmax + 1
    checks = {}
    for name, (r1, r2) in (("string", string_residual(h, f, R)), ("toda", toda_residual(h, f, R))):
        ok = r1.vanishes_through(R) and r2.vanishes_through(R)
        checks[name] = ok
        if not ok:
            raise InvariantFailure(f"hierarchy: {name} residual nonzero through n^-{R} (gmax={args.gmax}, order={args.order})")
    return {
        "gmax": args.gmax, "order": args.order, "residuals_vanish_through": R, "checks": checks,
        "u": {str(g): _series_doc(s) for g, s in sorted(hier.u.items())},
        "z": {str(g): _series_doc(s) for g, s in sorted(hier.z.items())},
        "provenance": hier.provenance,
    }


def cmd_genus(args) -> dict:
    from .equilibrium import equilibrium_series
    from .genus import eg_closed, solve_free_energies, taylor_e1_contour

    fe = solve_free_energies(args.gmax, args.order)
    z0 = equilibrium_series(args.order).z0
    out = {}
    for g, F in sorted(fe.items()):
        entry = {
            "coeffs": {str(j): {"value": c, "provenance": F.provenance[j]} for j, c in enumerate(F.series.coeffs)},
        }
        if g <= 2:
            match = F.series == eg_closed(g, z0)
            entry["matches_closed_form"] = match
            if not match:
                raise InvariantFailure(f"genus: e_{g} differs from its closed form through s^{args.order}")
        out[str(g)] = entry
    contour, closed = taylor_e1_contour(1), eg_closed(1, z0)[2] if args.order >= 2 else None
    return {
        "gmax": args.gmax, "order": args.order, "e": out,
        "discrepancies": [{
            "quantity": "e1 s^2 coefficient",
            "contour_formula": contour,
            "closed_form": closed,
            "flagged": contour != closed,
        }],
    }


def cmd_count_maps(args) -> dict:
    from .oracle import count_maps, genus_census

    try:
        profile = tuple(int(x) for x in args.profile.split(",") if x.strip())
    except ValueError as exc:
        raise ConfigError(f"bad profile {args.profile!r}") from exc
    if args.all_genera:
        census = genus_census(profile, max_darts=args.max_darts)
        return {str(g): n for g, n in sorted(census.by_genus.items())}
    if args.genus is None:
        raise ConfigError("give --genus or --all-genera")
    rec = count_maps(profile, args.genus, max_darts=args.max_darts)
    return {str(args.genus): rec.count}


def cmd_numeric(args) -> dict:
    from .numeric import (
        ContourSpec, agreement_digits, compare_asymptotics, compute_moments, hankel_recurrence,
        hirota_check, stieltjes_recurrence,
    )

    if args.nmax < 1 or args.bigN < 1:
        raise ConfigError("--nmax and --bigN must be positive")
    spec = ContourSpec(args.t3, args.bigN, args.digits)
    table = compute_moments(spec, 2 * args.nmax + 2)
    hk = hankel_recurrence(table, args.nmax)
    st = stieltjes_recurrence(table, args.nmax)
    rows = []
    for n in range(len(hk.a)):
        row = {"n": n, "a": hk.a[n], "a_route_digits": round(agreement_digits(hk.a[n], st.a[n]), 1)}
        if n >= 1:
            row["b2"] = hk.b2[n]
            row["b2_route_digits"] = round(agreement_digits(hk.b2[n], st.b2[n]), 1)
        rows.append(row)
    hir = hirota_check(args.t3, args.bigN, range(1, len(hk.a) - 1), args.digits) if hk.first_zero is None else []
    doc = {
        "t3": args.t3, "bigN": args.bigN, "nmax": args.nmax, "digits": args.digits,
        "contour": {"work_dps": table.work_dps, "nodes": len(table.nodes), "max_imag_moment": table.max_imag,
                    "tail_bound": table.tail},
        "recurrence": rows,
        "hankel_first_zero": hk.first_zero,
        "hirota": [{"n": r.n, "residual": r.residual, "second_difference": r.second_difference,
                    "genus_zero": r.leading} for r in hir],
    }
    if args.compare:
        ns = [int(x) for x in args.compare.split(",")]
        rep = compare_asymptotics(args.t3, ns, args.digits)
        doc["asymptotics"] = {
            "rows": [{"n": r.n, "a_err": r.a_err, "b2_err": r.b2_err, "route_digits": round(r.route_agreement, 1)}
                     for r in rep.rows],
            "ratios": [{"n1": n1, "n2": n2, "a": round(ra, 6), "b2": round(rb, 6)} for n1, n2, ra, rb in rep.ratios()],
            "a_exponent": round(rep.a_exponent, 4),
            "b2_exponent": round(rep.b2_exponent, 4),
        }
    return doc


def cmd_verify(args) -> int:
    from .verify import CHECKS

    for key, fn in CHECKS:
        if args.quick and key == "7":
            continue
        res = fn()
        print(f"[{key}] {res.line()}", file=args.out)
        if not res.passed:
            print(f"first failing invariant: criterion {key} ({res.name})", file=args.out)
            return 1
    return 0


# --------------------------------------------------------------------------
# parser
# --------------------------------------------------------------------------


def _nonneg(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="todamaps", description="Exact and numeric tables for cubic-potential map enumeration.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, digits=False):
        sp.add_argument("--emit", choices=["json", "csv"], default="json")
        sp.add_argument("--output", "-o", help="write here instead of standard output")
        if digits:
            sp.add_argument("--digits", type=int, default=_numeric.DEFAULT_DIGITS)

    sp = sub.add_parser("series", help="equilibrium Taylor series z0, u0")
    sp.add_argument("--order", type=_nonneg, default=24)
    common(sp)

    sp = sub.add_parser("motzkin", help="operator entries as Motzkin path sums")
    sp.add_argument("--length", type=_nonneg, default=3)
    sp.add_argument("--m1", type=_nonneg, default=1)
    sp.add_argument("--m2", type=_nonneg, default=0)
    sp.add_argument("--list-paths", action="store_true")
    sp.add_argument("--system", choices=["string", "toda"], help="emit the valence-LENGTH equation system instead")
    common(sp)

    sp = sub.add_parser("equilibrium", help="numeric equilibrium point and density")
    sp.add_argument("--t3", required=True)
    sp.add_argument("--grid", type=_nonneg, default=0)
    common(sp, digits=True)

    sp = sub.add_parser("hierarchy", help="solve the string hierarchy for u_g, z_g")
    sp.add_argument("--gmax", type=_nonneg, default=2)
    sp.add_argument("--order", type=_nonneg, default=16)
    common(sp)

    sp = sub.add_parser("genus", help="free energies e_g with provenance")
    sp.add_argument("--gmax", type=_nonneg, default=2)
    sp.add_argument("--order", type=_nonneg, default=12)
    common(sp)

    sp = sub.add_parser("count-maps", help="exhaustive map count for a valence profile")
    sp.add_argument("--profile", required=True, help="comma-separated valences, e.g. 3,3")
    g = sp.add_mutually_exclusive_group()
    g.add_argument("--genus", type=_nonneg)
    g.add_argument("--all-genera", action="store_true")
    sp.add_argument("--max-darts", type=_nonneg, default=20)
    common(sp)

    sp = sub.add_parser("numeric", help="recurrence coefficients from contour moments")
    sp.add_argument("--t3", required=True)
    sp.add_argument("--bigN", type=int, required=True)
    sp.add_argument("--nmax", type=int, required=True)
    sp.add_argument("--compare", help="comma-separated n values for the asymptotic comparison at n = N")
    common(sp, digits=True)

    sp = sub.add_parser("verify", help="run every cross-check; exit 1 on the first failure")
    sp.add_argument("--quick", action="store_true", help="skip the numeric criterion")
    return p


COMMANDS = {
    "series": cmd_series, "motzkin": cmd_motzkin, "equilibrium": cmd_equilibrium, "hierarchy": cmd_hierarchy,
    "genus": cmd_genus, "count-maps": cmd_count_maps, "numeric": cmd_numeric,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)  # exits 2 on unknown flags
    if args.command == "verify":
        args.out = sys.stdout
        return cmd_verify(args)
    digits = getattr(args, "digits", _numeric.DEFAULT_DIGITS)
    if digits < _numeric.MIN_DIGITS:
        print(f"error: --digits must be at least {_numeric.MIN_DIGITS}", file=sys.stderr)
        return 2
    try:
        doc = COMMANDS[args.command](args)
    except InvariantFailure as exc:
        print(f"invariant failure: {exc}", file=sys.stderr)
        return 1
    except ArithmeticError as exc:
        print(f"invariant failure in {args.command}: {exc}", file=sys.stderr)
        return 1
    except (ConfigError, ValueError) as exc:
        print(f"error in {args.command}: {exc}", file=sys.stderr)
        return 2
    text = render(_plain(doc, digits), args.emit)
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
