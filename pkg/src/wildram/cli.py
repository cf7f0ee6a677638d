"""Command-line interface: ``wildram <command> [input] [flags]``.

Input is a cover description file (JSON), ``-`` or nothing for standard
input.  Output is canonical JSON (``--json``, the default) or a plain
rendering (``--table``).  Exit codes: 0 success, 1 domain error, 2 precision
exhausted, 3 parse error.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

from . import fpspace
from .acceptance import GridRun, summary_table
from .asred import reduce_rhs
from .coverspec import canonical_json, emit_cover_spec, parse_cover_spec
from .errors import DomainError, ParseError, PrecisionExhausted, WildramError
from .ffield import field
from .fpspace import Subspace
from .inertia import (LocalCoverPair, compositum, g2_characterize, jump_at_two, kill_wild,
                      quotient_filtration, restrict_filtration, rh_genus, tame_pullback,
                      transitivity_check)
from .laurent import default_window, parse_series, precision_window
from .tower import (different_hilbert, different_via_derivative, norm_valuation,
                    ramification_filtration, uniformizer)

EXIT_OK, EXIT_DOMAIN, EXIT_PRECISION, EXIT_PARSE = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ParseError(f"usage: {message}")


def _read(path: Optional[str]) -> str:
    if path in (None, "-"):
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None


def _load(path):
    return parse_cover_spec(_read(path))


def _subgroup(text: Optional[str], p: int, n: int) -> Subspace:
    if not text:
        return Subspace.zero(p, n)
    try:
        rows = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"subgroup is not JSON: {exc}") from None
    if not isinstance(rows, list) or any(
            not isinstance(r, list) or len(r) != n or not all(isinstance(c, int) for c in r)
            for r in rows):
        raise ParseError(f"subgroup must be a list of length-{n} integer rows")
    return Subspace(p, n, rows)


def _sigma_table(filt) -> list:
    return [{"sigma": list(c), "j": j} for c, j in sorted(filt.jumps.items())]


# ---------------------------------------------------------------------------
# commands; each returns (report, exit code)


def cmd_validate(args, cover):
    from .asred import validate_tower

    val = validate_tower(cover.series())
    return {"validation": val.to_json()}, EXIT_OK if val.ok else EXIT_DOMAIN


def cmd_reduce(args, _cover):
    F = field(args.p, args.e)
    return reduce_rhs(parse_series(args.series, F)).to_json(), EXIT_OK


def cmd_breaks(args, cover):
    t = cover.tower()
    return {"lines": [{"coeffs": list(c), "break": m} for c, m in sorted(t.line_breaks.items())]}, EXIT_OK


def cmd_filtration(args, cover):
    t = cover.tower()
    filt = ramification_filtration(t)
    return {"filtration": filt.to_json(), "jumps": _sigma_table(filt), "breaks": filt.breaks(),
            "different": different_hilbert(filt)}, EXIT_OK


def cmd_different(args, cover):
    t = cover.tower()
    d = different_hilbert(ramification_filtration(t))
    dd = different_via_derivative(t) if t.ell == 1 else None
    return {"hilbert": d, "derivative": dd, "agree": dd is None or dd == d}, EXIT_OK


def cmd_g2(args, cover):
    t = cover.tower()
    g2 = g2_characterize(t)
    oracle = ramification_filtration(t).G(2)
    return {"basis": g2.to_json(), "order": g2.order, "agree": g2 == oracle}, EXIT_OK


def cmd_jump2(args, cover):
    t = cover.tower()
    j = jump_at_two(t)
    oracle = ramification_filtration(t).G(2) != t.group()
    return {"jump_at_two": j, "agree": j == oracle}, EXIT_OK


def cmd_restrict(args, cover):
    t = cover.tower()
    H = _subgroup(args.subgroup, t.p, t.ell)
    a = restrict_filtration(t, H)
    b = restrict_filtration(t, H, method="relative")
    return {"subgroup": H.to_json(), "filtration": a.to_json(), "agree": a == b}, EXIT_OK


def cmd_quotient(args, cover):
    t = cover.tower()
    filt = ramification_filtration(t)
    a = quotient_filtration(t, args.j, filt=filt)
    b = quotient_filtration(t, args.j, method="oracle", filt=filt)
    return {"j": args.j, "subgroup": filt.G(args.j).to_json(), "filtration": a.to_json(),
            "agree": a == b}, EXIT_OK


def cmd_transitivity(args, cover):
    t = cover.tower()
    filt = ramification_filtration(t)
    rows = []
    for H in fpspace.all_subspaces(t.p, t.ell):
        lhs, rhs = transitivity_check(t, H, filt)
        rows.append({"subgroup": H.to_json(), "lhs": lhs, "rhs": rhs, "equal": lhs == rhs})
    return {"checks": rows, "all_equal": all(r["equal"] for r in rows)}, EXIT_OK


def cmd_compose(args, cover):
    other = _load(args.other)
    res = compositum(LocalCoverPair(cover.tower(), other.tower()))
    return {"cover": emit_cover_spec(res.tower), "span_collapse": res.span_collapse,
            "degree": res.tower.degree}, EXIT_OK


def cmd_kill_wild(args, cover):
    t = cover.tower()
    N = _subgroup(args.subgroup, t.p, t.ell)
    res = kill_wild(t, N)
    return {"cover": emit_cover_spec(res.towerZ), "relative_inertia": N.to_json(),
            "relative_filtration": res.relative_filtration.to_json(),
            "relative_different": res.relative_different}, EXIT_OK


def cmd_tame_pullback(args, cover):
    t = cover.tower()
    return {"cover": emit_cover_spec(tame_pullback(t, args.n))}, EXIT_OK


def cmd_uniformizer(args, cover):
    t = cover.tower()
    pi = uniformizer(t)
    return {"uniformizer": pi.to_json(), "valuation": norm_valuation(pi)}, EXIT_OK


def cmd_genus(args, _cover):
    return {"genus": rh_genus(args.degree, args.different or [])}, EXIT_OK


def cmd_sweep(args, _cover):
    results = GridRun(seed=args.seed, samples=args.samples).run()
    report = {"criteria": [r.to_json() for r in results],
              "passed": all(r.passed for r in results), "seed": args.seed}
    report["_table"] = summary_table(results)
    return report, EXIT_OK if report["passed"] else EXIT_DOMAIN


COMMANDS = {
    "validate": cmd_validate, "reduce": cmd_reduce, "breaks": cmd_breaks,
    "filtration": cmd_filtration, "different": cmd_different, "g2": cmd_g2,
    "jump2": cmd_jump2, "restrict": cmd_restrict, "quotient": cmd_quotient,
    "transitivity": cmd_transitivity, "compose": cmd_compose, "kill-wild": cmd_kill_wild,
    "tame-pullback": cmd_tame_pullback, "uniformizer": cmd_uniformizer, "genus": cmd_genus,
    "sweep": cmd_sweep,
}
NO_INPUT = {"reduce", "genus", "sweep"}


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--precision", type=int, default=None, help="truncation window (default 64)")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized checks")
    fmt = common.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="table", action="store_false", help="canonical JSON (default)")
    fmt.add_argument("--table", dest="table", action="store_true", help="human-readable output")
    common.set_defaults(table=False)

    parser = _Parser(prog="wildram", description="Ramification of Artin-Schreier towers.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in COMMANDS:
        sp = sub.add_parser(name, parents=[common])
        if name not in NO_INPUT:
            sp.add_argument("input", nargs="?", default=None, help="cover description (default stdin)")
        if name == "reduce":
            sp.add_argument("series", help="Laurent series, e.g. 'x^-4 + x^-1'")
            sp.add_argument("--p", type=int, required=True)
            sp.add_argument("--e", type=int, default=1)
        elif name in ("restrict", "kill-wild"):
            sp.add_argument("--subgroup", default=None, help="JSON basis rows, e.g. '[[0,1]]'")
        elif name == "quotient":
            sp.add_argument("--j", type=int, required=True, help="chain index of H = G_j")
        elif name == "compose":
            sp.add_argument("other", help="second cover description")
        elif name == "tame-pullback":
            sp.add_argument("--n", type=int, required=True)
        elif name == "genus":
            sp.add_argument("--degree", type=int, required=True)
            sp.add_argument("--different", type=int, action="append",
                            help="local different at a branch point (repeatable)")
        elif name == "sweep":
            sp.add_argument("--samples", type=int, default=1000)
    return parser


def _render_table(obj, indent=0) -> list:
    pad = "  " * indent
    out = []
    if isinstance(obj, dict):
        for k, v in obj.items():
            if isinstance(v, (dict, list)) and v:
                out.append(f"{pad}{k}:")
                out.extend(_render_table(v, indent + 1))
            else:
                out.append(f"{pad}{k}: {json.dumps(v)}")
    elif isinstance(obj, list):
        for v in obj:
            if isinstance(v, dict):
                out.append(f"{pad}- " + ", ".join(f"{k}={json.dumps(x)}" for k, x in v.items()))
            else:
                out.append(f"{pad}- {json.dumps(v)}")
    else:
        out.append(pad + json.dumps(obj))
    return out


def _emit(report: dict, table: bool, out) -> None:
    text = report.pop("_table", None)
    if table:
        out.write((text if text is not None else "\n".join(_render_table(report))) + "\n")
    else:
        out.write(canonical_json(report) + "\n")


def run(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = out if out is not None else sys.stdout
    table = False
    try:
        args = build_parser().parse_args(argv)
        table = args.table
        cover = None if args.command in NO_INPUT else _load(args.input)
        window = args.precision or (cover.precision if cover is not None else None) or default_window()
        if window < 1:
            raise ParseError("--precision must be positive")
        with precision_window(window):
            report, code = COMMANDS[args.command](args, cover)
    except ParseError as exc:
        report, code = exc.payload(), EXIT_PARSE
    except PrecisionExhausted as exc:
        report, code = exc.payload(), EXIT_PRECISION
    except DomainError as exc:
        report, code = exc.payload(), EXIT_DOMAIN
    except WildramError as exc:
        report, code = exc.payload(), EXIT_DOMAIN
    except ValueError as exc:
        report, code = {"kind": "parse_error", "message": str(exc)}, EXIT_PARSE
    _emit(report, table, out)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
