"""Batch certification front end.

Exit codes: 0 verified, 2 hypothesis not met, 3 budget exceeded,
4 verification failed, 64 usage or parse error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import re
import sys
import time
from pathlib import Path
from typing import Optional, Sequence

from .certificates import SCHEMA_VERSION, Certificate, dumps, load_certificates
from .certify import build, maps_from_json, maps_to_json, reverify
from .cloud import DEFAULT_CAP, BudgetExceeded
from .exact import ParseError, format_point, parse_point, rational
from .ifs import HomogeneousIFS, load_ifs
from .indexsets import HorizonError, parse_index_set
from .moran import ev_params, moran_table
from .sumset import BoundViolation

EXIT_OK, EXIT_HYPOTHESIS, EXIT_BUDGET, EXIT_FAILED, EXIT_USAGE = 0, 2, 3, 4, 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _points(text: str) -> list[str]:
    """``"0,4/5"`` (scalars) or ``"(0,0);(1,0)"`` / ``"(0,0),(1,0)"`` (points)."""
    if "(" in text:
        found = re.findall(r"\([^)]*\)", text)
        if not found:
            raise ParseError(f"cannot read points from {text!r}")
        return [format_point(parse_point(p)) for p in found]
    return [format_point(parse_point(p)) for p in re.split(r"[;,]", text) if p.strip()]


def _depths(text: str) -> list[int]:
    out = []
    for part in text.split(","):
        a, sep, b = part.partition("-")
        out.extend(range(int(a), int(b) + 1) if sep else [int(a)])
    return out


def _ifs_json(args) -> dict:
    if getattr(args, "ifs", None):
        return load_ifs(args.ifs).to_json()
    if args.rho is None or args.digits is None:
        raise UsageError("give --ifs FILE or both --rho and --digits")
    return HomogeneousIFS.simple(rational(args.rho), [parse_point(p) for p in _points(args.digits)]).to_json()


def _common(p: argparse.ArgumentParser, csv_out: bool = False) -> None:
    p.add_argument("--out", help="write the JSON report here instead of stdout")
    if csv_out:
        p.add_argument("--csv", help="write a CSV table here")
    p.add_argument("--cap", type=int, default=DEFAULT_CAP, help="point budget for enumerations")
    p.add_argument("--seed", type=int, default=0, help="seed for randomized sweeps")


def _ifs_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--ifs", help="IFS description JSON")
    p.add_argument("--rho", help="contraction ratio p/q (with --digits)")
    p.add_argument("--digits", help='digits, e.g. "0,2/3" or "(0,0);(1,0)"')


def make_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="fractalsum", description="Exact certificates for fractal sumset properties.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("hsp-bound", help="HSP-2 failure bound for a homogeneous IFS")
    _ifs_args(p)
    p.add_argument("--probe-depth", type=int, default=4)
    _common(p)

    p = sub.add_parser("e-family", help="HSP-2 failure for E_{rho,N}")
    p.add_argument("--rho", required=True)
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--probe-depth", type=int, default=4)
    _common(p)

    p = sub.add_parser("lemma21", help="translate-intersection bound: one instance or exhaustive")
    p.add_argument("--A", help='finite set, e.g. "0,1,2"')
    p.add_argument("--T", help="distinct translations")
    p.add_argument("--exhaustive", action="store_true")
    p.add_argument("--random", type=int, default=0, help="number of random cases (uses --seed)")
    p.add_argument("--max-size", type=int, default=5)
    p.add_argument("--dimension", type=int, default=1)
    p.add_argument("--range", type=int, default=5, dest="coordinate_range")
    _common(p)

    p = sub.add_parser("psp", help="packing decomposition K_S1 + ... + K_Sl = K")
    _ifs_args(p)
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--depth", type=int, required=True)
    p.add_argument("--partition", choices=["lemma32", "checkpoints", "residues"], default="residues")
    p.add_argument("--rounds", type=int)
    _common(p)

    p = sub.add_parser("pdsp", help="positive-dimension containment with S_j = lN + j - 1")
    _ifs_args(p)
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--depth", type=int, required=True)
    _common(p)

    p = sub.add_parser("homogenize", help="homogeneous sub-system of a map family in R or R^2")
    p.add_argument("--maps", required=True, help="affine-map list JSON")
    p.add_argument("--depth", type=int, default=3)
    p.add_argument("--ifs-out", help="also write the homogeneous IFS JSON here")
    _common(p)

    p = sub.add_parser("boxdim", help="address and grid box-count sweep of K_S")
    _ifs_args(p)
    p.add_argument("--S", default="all", help='index set literal, e.g. "mod:2,1"')
    p.add_argument("--depths", default="1-10")
    _common(p, csv_out=True)

    p = sub.add_parser("moran", help="factorial Moran set: l B_l ⊂ K and prefix ratios")
    p.add_argument("--alpha", required=True)
    p.add_argument("--ell", type=int, default=2)
    p.add_argument("--depth", type=int, default=4)
    p.add_argument("--k-max", type=int, default=6)
    p.add_argument("--digitwise-to", type=int, default=20)
    _common(p, csv_out=True)

    p = sub.add_parser("verify", help="recompute certificates from a report and compare")
    p.add_argument("report")
    _common(p)
    return parser


def _requests(args) -> list[dict]:
    cmd = args.command
    if cmd == "hsp-bound":
        return [{"kind": "hsp-bound", "ifs": _ifs_json(args), "probe_depth": args.probe_depth}]
    if cmd == "e-family":
        return [{"kind": "e-family", "rho": str(rational(args.rho)), "N": args.N, "probe_depth": args.probe_depth}]
    if cmd == "lemma21":
        reqs = []
        if args.A is not None or args.T is not None:
            if args.A is None or args.T is None:
                raise UsageError("an instance needs both --A and --T")
            reqs.append({"kind": "translate-instance", "A": _points(args.A), "T": _points(args.T)})
        if args.exhaustive:
            reqs.append({"kind": "translate-exhaustive", "max_size": args.max_size, "dimension": args.dimension,
                         "coordinate_range": args.coordinate_range})
        if args.random:
            reqs.append({"kind": "translate-random", "cases": args.random, "seed": args.seed,
                         "max_size": args.max_size, "dimension": args.dimension,
                         "coordinate_range": args.coordinate_range})
        if not reqs:
            raise UsageError("lemma21 needs --A/--T, --exhaustive or --random")
        return reqs
    if cmd == "psp":
        return [{"kind": "psp-equality", "ifs": _ifs_json(args), "ell": args.ell, "depth": args.depth,
                 "partition": "checkpoints" if args.partition == "lemma32" else args.partition,
                 "rounds": args.rounds}]
    if cmd == "pdsp":
        return [{"kind": "pdsp-containment", "ifs": _ifs_json(args), "ell": args.ell, "depth": args.depth}]
    if cmd == "homogenize":
        data = json.loads(Path(args.maps).read_text())
        return [{"kind": "homogenize", "maps": maps_to_json(maps_from_json(data)), "depth": args.depth}]
    if cmd == "boxdim":
        parse_index_set(args.S)
        return [{"kind": "boxdim-sweep", "ifs": _ifs_json(args), "S": args.S, "depths": _depths(args.depths)}]
    if cmd == "moran":
        return [{"kind": "moran-containment", "alpha": str(rational(args.alpha)), "ell": args.ell,
                 "depth": args.depth, "k_max": args.k_max, "digitwise_to": args.digitwise_to},
                {"kind": "moran-dimension", "alpha": str(rational(args.alpha)), "k_max": args.k_max}]
    raise UsageError(f"unknown command {cmd!r}")


def _status(certs: Sequence[Certificate]) -> int:
    if any(not c.hypotheses_met for c in certs):
        return EXIT_HYPOTHESIS
    if any(not c.verified for c in certs):
        return EXIT_FAILED
    return EXIT_OK


def _write_csv(args, certs: Sequence[Certificate]) -> None:
    path = getattr(args, "csv", None)
    if not path:
        return
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if args.command == "boxdim":
        w.writerow(["n", "count", "estimate", "estimator"])
        for row in certs[0].witness["rows"]:
            for kind in ("address", "grid"):
                w.writerow([row["n"], row[kind]["count"], row[kind]["estimate"], row[kind]["kind"]])
    elif args.command == "moran":
        w.writerow(["k", "m_k", "N_k", "s_k"])
        for row in moran_table(ev_params(args.alpha, args.k_max)):
            w.writerow([row["k"], row["m_k"], row["N_k"], row["s_k"]])
    Path(path).write_text(buf.getvalue())


def run(argv: Optional[Sequence[str]] = None, stdout=None) -> tuple[int, dict]:
    """Execute one invocation; returns ``(exit_status, report)``."""
    stdout = stdout or sys.stdout
    start = time.perf_counter()
    report: dict = {"schema_version": SCHEMA_VERSION, "certificates": []}
    args = None
    try:
        args = make_parser().parse_args(argv)
        if not args.command:
            raise UsageError("a subcommand is required")
        report["subcommand"] = args.command
        report["budget"] = {"cap": args.cap}
        if args.command == "verify":
            stored = load_certificates(args.report)
            results = []
            for c in stored:
                reproduced, verified = reverify(c, args.cap)
                results.append({"kind": c.kind, "reproduced": reproduced, "verified": verified,
                                "hypotheses_met": c.hypotheses_met})
            report["inputs"] = {"report": str(args.report)}
            report["verify"] = results
            if not all(r["reproduced"] for r in results):
                status = EXIT_FAILED
            elif not all(r["hypotheses_met"] for r in results):
                status = EXIT_HYPOTHESIS
            else:
                status = EXIT_OK if all(r["verified"] for r in results) else EXIT_FAILED
        else:
            reqs = _requests(args)
            report["inputs"] = reqs
            certs = [build(r, args.cap) for r in reqs]
            report["certificates"] = [c.to_json() for c in certs]
            status = _status(certs)
            _write_csv(args, certs)
            if args.command == "homogenize" and args.ifs_out:
                Path(args.ifs_out).write_text(dumps(certs[0].witness["ifs"]))
    except UsageError as exc:
        status, report["error"] = EXIT_USAGE, {"type": "usage", "message": str(exc)}
    except (ParseError, json.JSONDecodeError, FileNotFoundError, KeyError) as exc:
        status, report["error"] = EXIT_USAGE, {"type": "parse-error", "message": str(exc)}
    except BudgetExceeded as exc:
        status = EXIT_BUDGET
        report["error"] = {"type": "budget-exceeded", "message": str(exc), "required": exc.required, "cap": exc.cap}
    except HorizonError as exc:
        status, report["error"] = EXIT_HYPOTHESIS, {"type": "hypothesis-not-met", "message": str(exc)}
    except BoundViolation as exc:
        status, report["error"] = EXIT_FAILED, {"type": "verification-failed", "message": str(exc)}
    except ValueError as exc:
        status, report["error"] = EXIT_HYPOTHESIS, {"type": "hypothesis-not-met", "message": str(exc)}
    report["exit_status"] = status
    report["timing"] = {"seconds": round(time.perf_counter() - start, 6)}
    text = dumps(report)
    if args is not None and getattr(args, "out", None):
        Path(args.out).write_text(text)
    else:
        stdout.write(text)
    return status, report


def main(argv: Optional[Sequence[str]] = None) -> int:
    status, _ = run(argv)
    return status


if __name__ == "__main__":
    sys.exit(main())
