"""Command-line runs of the library: stratum tables, equivalence reports and
finite-field audits, written as deterministic JSON (or DOT for posets).

Exit codes: 0 pass, 1 audit failure, 2 bad configuration, 3 budget exhausted.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .agraph import GraphError, canonical_form, invariants, sigma, tau
from .contraction import ContractionError, enumerate_nice_contractions, equivalence_classes, normalize_to_path
from .forms import Form
from .gf import gf
from .hyperlines import DEFAULT_BUDGET, FieldTooLarge, flatness_audit, tuple_audit
from .strata import TargetDescriptor, stratification_poset, stratify

EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_BUDGET = 0, 1, 2, 3


class ConfigError(ValueError):
    pass


def _global_options(parser, suppress):
    default = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    parser.add_argument("--seed", type=int, default=default(0), help="random seed (recorded in every report)")
    parser.add_argument("--budget", type=int, default=default(DEFAULT_BUDGET), help="point budget per scan")
    parser.add_argument("--out", type=Path, default=default(None), help="write reports into this directory")
    parser.add_argument("--format", choices=["json", "dot"], default=default("json"))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ratcurves", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    _global_options(parser, suppress=False)
    common = argparse.ArgumentParser(add_help=False)
    _global_options(common, suppress=True)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("strata", parents=[common], help="stable graphs indexing the strata")
    p.add_argument("--tails", type=int, required=True)
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--target", help="complete intersection N:d1,d2,...")
    p.add_argument("--dot", type=Path, help="also write the stratification poset as DOT")

    p = sub.add_parser("equiv", parents=[common], help="equivalence classes of nice contractions onto tau_0(e)")
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--bound", type=int, required=True)
    p.add_argument("--cap", type=int, default=10, help="vertex cap for the <= search")

    p = sub.add_parser("audit-lines", parents=[common], help="fiber-dimension audit of a hypersurface")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--k", type=int, default=2, help="largest extension degree used to count points")
    src = p.add_mutually_exclusive_group()
    src.add_argument("--phi", type=Path, help="form as JSON")
    src.add_argument("--random", action="store_true", help="random form from --seed (the default)")
    p.add_argument("--cross-check", type=int, default=None, help="number of points to cross-check with a line scan")

    p = sub.add_parser("audit-tuples", parents=[common], help="frequency of oversized tuple intersections")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--samples", type=int, default=500)
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--max-fraction", type=float, default=0.01)
    return parser


# -- commands --------------------------------------------------------------------------

def cmd_strata(args):
    if args.tails < 0 or args.degree < 0:
        raise ConfigError("tails and degree must be nonnegative")
    x = TargetDescriptor.parse(args.target) if args.target else None
    poset = stratification_poset(args.tails, args.degree, x)
    report = {
        "command": "strata",
        "config": {"tails": args.tails, "degree": args.degree,
                   "target": str(x) if x else None, "seed": args.seed},
        "strata": [s.to_json() for s in poset.strata],
        "poset": {"edges": [list(a) for a in poset.arrows]},
    }
    extra = {"strata.dot": poset.to_dot()}
    if args.dot:
        args.dot.write_text(poset.to_dot())
    return report, EXIT_OK, extra


def cmd_equiv(args):
    if args.degree < 1 or args.bound < 1:
        raise ConfigError("degree and bound must be positive")
    s = enumerate_nice_contractions(tau(0, args.degree), args.bound)
    classes = equivalence_classes(s, cap=args.cap)
    report = {
        "command": "equiv",
        "config": {"degree": args.degree, "bound": args.bound, "cap": args.cap, "seed": args.seed},
        "elements": len(s),
        "classes": len(classes),
        "class_sizes": [len(c) for c in classes],
    }
    if args.bound == 1:
        path_code = canonical_form(sigma(args.degree))
        chains = []
        for a in s:
            chain = normalize_to_path(a)
            chains.append({
                "start_diameter": invariants(a.source).diameter,
                "moves": chain.moves,
                "valid": chain.validate(),
                "ends_at_path": canonical_form(chain.elements[-1].source) == path_code,
                "steps": chain.to_json(),
            })
        report["chains"] = chains
    return report, EXIT_OK, {}


def _load_phi(args):
    if args.phi:
        raw = json.loads(args.phi.read_text())
        phi = Form.from_json(raw, args.p)
        if phi.nvars != args.n + 1 or phi.degree != args.d:
            raise ConfigError(f"form has {phi.nvars} variables and degree {phi.degree}, "
                              f"expected {args.n + 1} and {args.d}")
        return phi
    return Form.random(args.n + 1, args.d, args.p, np.random.default_rng(args.seed))


def cmd_audit_lines(args):
    field = gf(args.p)
    phi = _load_phi(args)
    report = flatness_audit(phi, field, k_max=args.k, cross_check=args.cross_check,
                            seed=args.seed, budget=args.budget)
    report["command"] = "audit-lines"
    return report, EXIT_OK if report["verdict"] == "PASS" else EXIT_FAIL, {}


def cmd_audit_tuples(args):
    if args.samples < 1:
        raise ConfigError("samples must be positive")
    gf(args.p)  # validates the characteristic
    report = tuple_audit(args.n, args.d, args.p, args.samples, args.seed, k_max=args.k,
                         max_fraction=args.max_fraction, budget=args.budget)
    report["command"] = "audit-tuples"
    return report, EXIT_OK if report["verdict"] == "PASS" else EXIT_FAIL, {}


COMMANDS = {"strata": cmd_strata, "equiv": cmd_equiv,
            "audit-lines": cmd_audit_lines, "audit-tuples": cmd_audit_tuples}


def _emit(args, report, extra, stdout):
    text = json.dumps(report, sort_keys=True, indent=2) + "\n"
    name = args.command.replace("-", "_")
    if args.format == "dot":
        if "strata.dot" not in extra:
            raise ConfigError("--format dot is only available for strata")
        shown = extra["strata.dot"]
    else:
        shown = text
    if args.out:
        args.out.mkdir(parents=True, exist_ok=True)
        (args.out / f"{name}.json").write_text(text)
        for fname, body in extra.items():
            (args.out / fname).write_text(body)
        stdout.write(f"wrote {args.out / (name + '.json')}\n")
    else:
        stdout.write(shown)


def main(argv=None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        report, code, extra = COMMANDS[args.command](args)
        _emit(args, report, extra, stdout)
        return code
    except FieldTooLarge as exc:
        print(f"budget exhausted: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (ConfigError, GraphError, ContractionError, ValueError, OSError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
