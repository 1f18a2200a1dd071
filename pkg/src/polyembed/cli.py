"""Command-line front end.

Exit status: 0 on success, 1 on domain errors (out-of-range input, invalid
building), 2 on parse errors. Output is deterministic for fixed arguments.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from typing import Optional, Sequence

from polyembed import capacities as caps
from polyembed import enumerator as enum
from polyembed.core import (
    SCHEMA_VERSION,
    building_from_dict,
    building_to_dict,
    dumps,
    format_rational,
    parse_rational,
    validate_building,
)
from polyembed.cz_spectrum import AsymptoticOperatorSpec, asymptotic_operator_spectrum
from polyembed.errors import NotNeeded, PolyembedError

FORMATS = ("json", "csv")


class UsageError(Exception):
    """Bad arguments detected after argparse (exit status 2)."""


def _rational(text: str):
    try:
        return parse_rational(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _window(text: str) -> tuple:
    try:
        lo, hi = (float(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"window must be 'a,b', got {text!r}") from None
    return lo, hi


def _domain(text: str):
    try:
        return caps.parse_domain(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _cls(c) -> list:
    return [c.k, c.l]


def _rules(args) -> enum.RuleSet:
    return enum.RuleSet(g1_blowdown=not args.no_g1_blowdown, unique_leaf=not args.no_unique_leaf)


def _header(**kw) -> dict:
    return {"schema": SCHEMA_VERSION, **kw}


def _emit_csv(out, header: Sequence[str], rows) -> None:
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)


def _require_json(args) -> None:
    if args.format != "json":
        raise UsageError(f"{args.verb} output is not tabular; only json is supported")


# verbs ----------------------------------------------------------------------

def cmd_fiber_limits(args, out) -> int:
    _require_json(args)
    configs = enum.enumerate_fiber_limits(args.R, _rules(args))
    payload = []
    for cfg in configs:
        payload.append({
            "kind": cfg.kind,
            "case": cfg.case,
            "c0_class": _cls(cfg.c0_class) if cfg.c0_class else None,
            "c1_class": _cls(cfg.c1_class) if cfg.c1_class else None,
            "exclusion": cfg.exclusion,
            "building": building_to_dict(cfg.building()),
        })
    out.write(dumps(_header(R=format_rational(args.R), configs=payload)) + "\n")
    return 0


def cmd_feasible(args, out) -> int:
    _require_json(args)
    res = enum.degree_d_feasibility(args.R, args.d, _rules(args))
    body = _header(R=format_rational(res.R), d=res.d, feasible=res.feasible)
    if res.feasible:
        cfg = res.config
        body["witness"] = {
            "m": cfg.m,
            "d_prime": cfg.d_prime,
            "s": cfg.s,
            "positive_ends": cfg.positive_ends,
            "sign_mode": cfg.sign_mode.value,
            "area_bound": format_rational(cfg.area_bound),
        }
        if cfg.assemblable:
            body["witness"]["building"] = building_to_dict(cfg.building())
    else:
        cert = res.certificate
        body["certificate"] = {
            "m": cert.m,
            "d_prime": cert.d_prime,
            "s": cert.s,
            "max_area_bound": format_rational(cert.max_area_bound) if cert.max_area_bound is not None else None,
            "inequality": cert.inequality,
            "frontier": cert.frontier,
            "pruned": cert.pruned,
        }
    out.write(dumps(body) + "\n")
    return 0


def cmd_witness(args, out) -> int:
    _require_json(args)
    try:
        d = enum.witness_degree(args.R, _rules(args))
    except NotNeeded as exc:
        print(str(exc), file=sys.stderr)
        out.write(dumps(_header(R=format_rational(args.R), witness_degree=None, status="not-needed")) + "\n")
        return 0
    out.write(dumps(_header(R=format_rational(args.R), witness_degree=d)) + "\n")
    return 0


def cmd_bound(args, out) -> int:
    res = enum.embedding_bound_polydisk12(args.max_degree)
    if args.format == "csv":
        _emit_csv(out, ["d", "frontier"], [[d, format_rational(f)] for d, f in res.schedule])
        return 0
    body = _header(
        target=res.target,
        bound=format_rational(res.bound),
        schedule=[[str(d), format_rational(f)] for d, f in res.schedule],
        inclusion_bound=format_rational(res.inclusion_bound),
        sharp=res.sharp,
    )
    out.write(dumps(body) + "\n")
    return 0


def cmd_capacities(args, out) -> int:
    shape = args.domain
    rows = caps.ech_table(shape, args.k_max)
    if args.format == "csv":
        _emit_csv(out, ["k", "c_k(domain)", "d_k", "ratio"],
                  [[k, format_rational(c), dk, format_rational(r) if r is not None else ""] for k, c, dk, r in rows])
        return 0
    body = _header(
        domain=str(shape),
        k_max=args.k_max,
        rows=[[k, format_rational(c), dk, format_rational(r) if r is not None else None] for k, c, dk, r in rows],
    )
    if isinstance(shape, caps.Polydisk):
        vol = caps.volume_bound(shape)
        fold = caps.folding_bound(shape)
        body.update(
            ech_bound=format_rational(caps.ech_bound(shape, args.k_max)) if args.k_max >= 1 else None,
            volume_bound=str(vol),
            volume_bound_decimal=vol.decimal,
            inclusion_bound=format_rational(caps.inclusion_bound(shape)),
            folding_bound=format_rational(fold) if fold is not None else None,
        )
    out.write(dumps(body) + "\n")
    return 0


def cmd_spectrum(args, out) -> int:
    spec = AsymptoticOperatorSpec(args.T, args.grid)
    points = asymptotic_operator_spectrum(spec, args.window)
    rows = [[round(p.eigenvalue, 10) + 0.0, p.winding, p.multiplicity] for p in points]
    if args.format == "csv":
        _emit_csv(out, ["eigenvalue", "winding", "multiplicity"], rows)
        return 0
    body = _header(T=args.T, grid=args.grid, window=list(args.window),
                   points=[{"eigenvalue": e, "winding": w, "multiplicity": m} for e, w, m in rows])
    out.write(dumps(body) + "\n")
    return 0


def cmd_check_building(args, out) -> int:
    _require_json(args)
    try:
        with open(args.path, encoding="utf-8") as fh:
            raw = json.load(fh)
        building = building_from_dict(raw)
    except (OSError, ValueError) as exc:
        raise UsageError(f"cannot read building {args.path}: {exc}") from None
    report = validate_building(building, allow_unmatched=args.allow_unmatched)
    out.write(dumps(_header(valid=report.ok, violations=[
        {"rule": v.rule, "detail": v.detail} for v in report.violations])) + "\n")
    for v in report.violations:
        print(f"{v.rule} rule: {v.detail}", file=sys.stderr)
    return 0 if report.ok else 1


# parser ---------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="polyembed", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="verb", required=True)

    def verb(name, func, help_):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--format", choices=FORMATS, default="json")
        p.set_defaults(func=func)
        return p

    def with_rules(p):
        p.add_argument("--no-g1-blowdown", action="store_true", help="disable the case-2 exclusion rule")
        p.add_argument("--no-unique-leaf", action="store_true", help="disable the unique-leaf rule")

    p = verb("fiber-limits", cmd_fiber_limits, "limits of fiber-class spheres")
    p.add_argument("--R", type=_rational, required=True)
    with_rules(p)

    p = verb("feasible", cmd_feasible, "feasibility search for degree-d limits")
    p.add_argument("--R", type=_rational, required=True)
    p.add_argument("--d", type=int, required=True)
    with_rules(p)

    p = verb("witness", cmd_witness, "least obstructing degree")
    p.add_argument("--R", type=_rational, required=True)
    with_rules(p)

    p = verb("bound", cmd_bound, "embedding bound for P(1,2) into a ball")
    p.add_argument("--max-degree", type=int, default=12)

    p = verb("capacities", cmd_capacities, "ECH capacity table and classical bounds")
    p.add_argument("--domain", type=_domain, required=True, help="polydisk:r,s or ball:a")
    p.add_argument("--k-max", type=int, default=100)

    p = verb("spectrum", cmd_spectrum, "asymptotic operator spectrum with windings")
    p.add_argument("--T", type=float, required=True)
    p.add_argument("--grid", type=int, default=256)
    p.add_argument("--window", type=_window, required=True, help="a,b")

    p = verb("check-building", cmd_check_building, "validate a building JSON file")
    p.add_argument("path")
    p.add_argument("--allow-unmatched", action="store_true", help="treat as a sub-building")
    return parser


_NUMERIC_OPTIONS = ("--R", "--T", "--window")


def _glue_negative_values(argv: Sequence[str]) -> list:
    # argparse reads "-1.5,0.5" as an option flag; "--window=-1.5,0.5" is unambiguous
    out, i = [], 0
    while i < len(argv):
        tok = argv[i]
        if tok in _NUMERIC_OPTIONS and i + 1 < len(argv) and argv[i + 1].startswith("-"):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def main(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = out if out is not None else sys.stdout
    parser = build_parser()
    argv = _glue_negative_values(list(sys.argv[1:] if argv is None else argv))
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args, out)
    except UsageError as exc:
        print(f"polyembed {args.verb}: {exc}", file=sys.stderr)
        return 2
    except (PolyembedError, ValueError) as exc:
        print(f"polyembed {args.verb}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
