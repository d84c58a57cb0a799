"""Command-line front end.

Exit status: 0 on success, 1 when a verification suite fails, 2 on usage
errors.  JSON is written with sorted keys so identical requests give
byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from . import __version__
from .covertorus import (CoverTorusModel, EnumerationCapExceeded, associated_lattices,
                         associated_linear_datum, linear_inclusion_failures,
                         maximal_abelian_check, verify_associativity,
                         verify_center, verify_commutator_axiom, verify_steinberg)
from .genchar import (DynkinDiagram, admissible_subsets, check_gamma_star_relation, gamma_star,
                      structure_signs, tsharp_embed, weyl_invariance_check)
from .plancherel import gk_coefficient, plancherel_rank_one, reducibility_report
from .rootdatum import ISOGENIES, build_root_datum, standard_form
from .symbols import SQUARE_CLASSES, LocalFieldModel, gamma_solutions

SCHEMA_VERSION = "1.0"
OUTPUT_DIR_ENV = "METAPLECTIC_OUTPUT_DIR"
CONFIG_KEYS = {"q": int, "n": int, "d": Fraction}
CENTER_LIMIT = 4096


class UsageError(Exception):
    pass


@dataclass
class CommandRequest:
    subcommand: str
    params: dict = field(default_factory=dict)


# --------------------------------------------------------------------------
# helpers


def read_config(path: str) -> dict:
    """Parse a ``key=value`` file; blank lines and ``#`` comments are ignored."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"--config: cannot read {path}: {exc.strerror}") from None
    out = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"--config line {lineno}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in CONFIG_KEYS:
            raise UsageError(f"--config line {lineno}: unknown key {key!r} (allowed: q, n, d)")
        try:
            out[key] = CONFIG_KEYS[key](value)
        except ValueError:
            raise UsageError(f"--config line {lineno}: bad value for {key}: {value!r}") from None
    return out


def _merge(args: argparse.Namespace, defaults: dict) -> None:
    cfg = read_config(args.config) if getattr(args, "config", None) else {}
    for key, default in defaults.items():
        if getattr(args, key, None) is None:
            setattr(args, key, cfg.get(key, default))


def _require(args: argparse.Namespace, *names: str) -> None:
    for name in names:
        if getattr(args, name, None) is None:
            raise UsageError(f"--{name} is required")


def _datum(args):
    try:
        return build_root_datum(args.family, args.rank, args.isogeny)
    except ValueError as exc:
        raise UsageError(f"--family/--rank: {exc}") from None


def _field(q, n):
    try:
        return LocalFieldModel(q, n)
    except ValueError as exc:
        raise UsageError(f"--q/--n: {exc}") from None


def _frac_rows(rows) -> list[list[str]]:
    return [[str(Fraction(x)) for x in r] for r in rows]


# --------------------------------------------------------------------------
# subcommands


def cmd_datum(args) -> tuple[dict, int]:
    d = _datum(args)
    d.check()
    try:
        gram = [list(r) for r in standard_form(d).gram]
    except ValueError:
        gram = None
    return {
        "datum": d.to_dict(),
        "cartan_matrix": d.cartan,
        "positive_roots": len(d.positive),
        "lengths": list(d.lengths),
        "isogeny_class": d.classify_isogeny(),
        "invariant_form": gram,
        "valid": True,
    }, 0


def cmd_sharp(args) -> tuple[dict, int]:
    _require(args, "n")
    if args.n < 1:
        raise UsageError("--n must be a positive integer")
    d = _datum(args)
    try:
        form = standard_form(d)
    except ValueError as exc:
        raise UsageError(f"--isogeny: {exc}") from None
    lat = associated_lattices(d, form, args.n)
    failures = [] if args.modified else linear_inclusion_failures(d, form, args.n)
    lin = None if failures else associated_linear_datum(d, form, args.n, modified=args.modified)
    ys = lat.y_sharp.canonical
    scalar = None
    if d.rank == 1:
        scalar = str(ys.basis[0][0])
    if failures:
        print(f"inclusion check failed: {failures[0]}", file=sys.stderr)
    return {
        "family": d.family,
        "rank": d.rank,
        "n": args.n,
        "modified": args.modified,
        "y_sharp": _frac_rows(ys.basis),
        "y_sharp_multiple_of_y": scalar,
        "y_prime": _frac_rows(lat.y_prime.basis),
        "x_prime": _frac_rows(lat.x_prime.basis),
        "inclusion_failures": failures,
        "associated_datum": lin.to_dict() if lin else None,
        "associated_isogeny": lin.isogeny if lin else None,
    }, 1 if failures else 0


def cmd_plancherel(args) -> tuple[dict | str, int]:
    _require(args, "q", "n")
    try:
        mu = plancherel_rank_one(args.q, args.n, args.d)
        c = gk_coefficient(args.q, args.n, args.d)
    except ValueError as exc:
        raise UsageError(f"--q/--n/--d: {exc}") from None
    rep = reducibility_report(mu, args.q, args.n)
    if args.format == "csv":
        return rep.to_csv(), 0
    return {"q": str(args.q), "n": args.n, "d": str(args.d), "mu": mu.to_dict(),
            "gk_coefficient": c.to_dict(), "report": rep.to_dict()}, 0


def cmd_verify(args) -> tuple[dict, int]:
    _require(args, "q", "n")
    d = _datum(args)
    fld = _field(args.q, args.n)
    try:
        form = standard_form(d)
    except ValueError as exc:
        raise UsageError(f"--isogeny: {exc}") from None
    m = CoverTorusModel(d, form, fld)
    suites = ["torus", "weyl", "tsharp"] if args.suite == "all" else [args.suite]
    reports = []
    skipped = []
    for suite in suites:
        if suite == "torus":
            reports += [verify_steinberg(m), verify_commutator_axiom(m), verify_associativity(m)]
            if m.order <= CENTER_LIMIT:
                reports += [verify_center(m), maximal_abelian_check(m)]
            else:
                skipped.append(f"center: model order {m.order} exceeds {CENTER_LIMIT}")
        elif suite == "weyl":
            if args.n != 2 or not d.is_simply_laced:
                if args.suite == "weyl":
                    raise UsageError("--suite weyl needs --n 2 and a simply-laced family")
                skipped.append("weyl: needs n = 2 and a simply-laced family")
                continue
            reports.append(weyl_invariance_check(None, m, structure_signs(m)))
        elif suite == "tsharp":
            if args.q % 2 == 0:
                if args.suite == "tsharp":
                    raise UsageError("--suite tsharp needs q odd")
                skipped.append("tsharp: needs q odd")
                continue
            reports.append(tsharp_embed(args.n, fld)[2])
    ok = all(r.ok for r in reports)
    out = {"family": d.family, "rank": d.rank, "q": args.q, "n": args.n, "ok": ok,
           "reports": [r.to_dict() for r in reports], "skipped": skipped}
    if not ok:
        first = next(r for r in reports if not r.ok)
        print(f"verification failed: {first.title}: {first.first_counterexample()}", file=sys.stderr)
    return out, 0 if ok else 1


def cmd_chars(args) -> tuple[dict, int]:
    if args.q % 2 == 0:
        raise UsageError("--q must be odd")
    _field(args.q, 2)
    try:
        diagram = DynkinDiagram.of_type(args.family, args.rank)
    except ValueError as exc:
        raise UsageError(f"--family/--rank: {exc}") from None
    subsets = admissible_subsets(diagram)
    gammas = gamma_solutions(args.q)
    chars = []
    ok = True
    for s in subsets:
        if not len(s):
            continue
        for k, g in enumerate(gammas):
            table = {f"eps={e},t={v}{u}": gamma_star(s, g, e, (v, u))
                     for e in (1, -1) for v, u in SQUARE_CLASSES}
            rel = check_gamma_star_relation(s, g, args.q)
            ok &= rel.ok
            chars.append({"subset": s.labels, "gamma_index": k, "values": table,
                          "relation_holds": rel.ok})
    return {
        "diagram": diagram.label,
        "q": args.q,
        "subsets": [s.labels for s in subsets],
        "nonempty_count": sum(1 for s in subsets if len(s)),
        "gamma_solutions": [{f"{v},{u}": e for (v, u), e in g.values} for g in gammas],
        "characters": chars,
    }, 0 if ok else 1


COMMANDS = {
    "datum": cmd_datum,
    "sharp": cmd_sharp,
    "plancherel": cmd_plancherel,
    "verify": cmd_verify,
    "chars": cmd_chars,
}


# --------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="metaplectic",
        description="Root data, sharp lattices, Plancherel measures and genuine characters "
                    "for metaplectic covers of split groups.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="subcommand", required=True, metavar="COMMAND")

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", "-o", help="write to this file (relative paths resolve "
                        f"against ${OUTPUT_DIR_ENV} when set)")
    common.add_argument("--config", help="key=value file presetting q, n, d")

    def typed(p_: argparse.ArgumentParser, isogeny: bool = True) -> None:
        p_.add_argument("--family", required=True, choices=list("ABCDEFG"))
        p_.add_argument("--rank", required=True, type=int)
        if isogeny:
            p_.add_argument("--isogeny", default="simply-connected", choices=ISOGENIES)

    sp = sub.add_parser("datum", parents=[common], help="build and validate a root datum")
    typed(sp)
    sp = sub.add_parser("sharp", parents=[common], help="sharp lattice and associated linear datum")
    typed(sp)
    sp.add_argument("--n", type=int)
    sp.add_argument("--modified", action="store_true",
                    help="rescale short roots by gcd(n, Q(coroot)) so the result is always a root datum")
    sp = sub.add_parser("plancherel", parents=[common],
                        help="rank-one Plancherel measure and reducibility table")
    sp.add_argument("--q", type=int)
    sp.add_argument("--n", type=int)
    sp.add_argument("--d", type=Fraction, help="discriminant weight (default 1)")
    sp.add_argument("--format", choices=["json", "csv"], default="json")
    sp = sub.add_parser("verify", parents=[common], help="run verification suites on a torus model")
    typed(sp)
    sp.add_argument("--q", type=int)
    sp.add_argument("--n", type=int)
    sp.add_argument("--suite", choices=["torus", "weyl", "tsharp", "all"], default="torus")
    sp = sub.add_parser("chars", parents=[common], help="admissible subsets and gamma-star tables")
    typed(sp, isogeny=False)
    sp.add_argument("--q", type=int)
    return p


def _emit(payload, args) -> None:
    if isinstance(payload, str):
        text = payload
    else:
        payload = {"schema_version": SCHEMA_VERSION, "command": args.subcommand, **payload}
        text = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    if args.output:
        path = Path(args.output)
        base = os.environ.get(OUTPUT_DIR_ENV)
        if base and not path.is_absolute():
            path = Path(base) / path
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text)
    else:
        sys.stdout.write(text)


def run(request: CommandRequest) -> int:
    """Dispatch a parsed request; returns the exit status."""
    args = argparse.Namespace(subcommand=request.subcommand, **request.params)
    defaults = {"plancherel": {"d": Fraction(1)}, "chars": {"q": 7}}.get(request.subcommand, {})
    defaults = {"q": None, "n": None, **defaults}
    try:
        _merge(args, defaults)
        payload, status = COMMANDS[request.subcommand](args)
        _emit(payload, args)
        return status
    except UsageError as exc:
        print(f"metaplectic {request.subcommand}: error: {exc}", file=sys.stderr)
        return 2
    except EnumerationCapExceeded as exc:
        print(f"metaplectic {request.subcommand}: error: {exc}", file=sys.stderr)
        return 2


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    params = {k: v for k, v in vars(ns).items() if k != "subcommand"}
    return run(CommandRequest(ns.subcommand, params))


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
