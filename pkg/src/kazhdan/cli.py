"""Command-line entry point: ``kazhdan <command> [options]``.

Exit status is 0 when every check passes, 1 on a verification failure and
2 on bad usage or unreadable input.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from importlib import resources
from typing import Optional, Sequence

import jsonschema

from . import __version__
from . import constants as C
from .errors import KazhdanError, ParseError
from .factor import expand_to_elementary, factor_full, random_sl, verify_certificate
from .linalg import IntMat, parse_matrix
from .vecsys import POLICIES, VectorSystem, reduce_to_standard

SCHEMA_VERSION = "1.0"
EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def default_seed() -> int:
    raw = os.environ.get("KAZH_SEED", "0")
    try:
        return int(raw) & (2**64 - 1)
    except ValueError:
        raise UsageError(f"KAZH_SEED must be an integer, got {raw!r}")


def load_schema() -> dict:
    return json.loads(resources.files("kazhdan").joinpath("report.schema.json").read_text())


def envelope(command: str, ok: bool, result, seed: Optional[int] = None) -> dict:
    out = {"schema_version": SCHEMA_VERSION, "tool_version": __version__, "command": command, "ok": ok, "result": result}
    if seed is not None:
        out["seed"] = seed
    return out


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, default=str)


def emit(out, report: dict) -> None:
    """Write a report after checking it against the shipped schema."""
    payload = json.loads(dumps(report))
    jsonschema.validate(payload, load_schema())
    out.write(dumps(payload) + "\n")


def _read_matrix(path: str) -> IntMat:
    if path == "-":
        text = sys.stdin.read()
    else:
        try:
            with open(path) as fh:
                text = fh.read()
        except OSError as err:
            raise UsageError(f"cannot read {path}: {err.strerror}")
    return parse_matrix(text)


def _parse_range(text: str) -> tuple[int, int]:
    try:
        lo, hi = (int(x) for x in text.split(":"))
    except ValueError:
        raise UsageError(f"range must look like lo:hi, got {text!r}")
    return lo, hi


# -- subcommands


def cmd_constants(args, out) -> int:
    if args.sweep:
        lo, hi = _parse_range(args.sweep)
        rows = C.sweep_rows(lo, hi, args.p)
        buf = io.StringIO()
        fields = [k for k in rows[0].to_json() if k != "consistency_flags"]
        writer = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n", extrasaction="ignore")
        writer.writeheader()
        bad = 0
        for r in rows:
            writer.writerow({k: ("" if v is None else repr(v) if isinstance(v, float) else v) for k, v in r.to_json().items()})
            bad += bool(r.check_invariants())
        out.write(buf.getvalue())
        return EXIT_FAIL if bad else EXIT_OK
    if args.verify_chains:
        reps = [C.verify_chain_R2(), C.verify_chain_Rp(args.cap), C.verify_chain_Rpq(args.cap, args.cap)]
        ok = all(r.ok for r in reps)
        emit(out, envelope("constants", ok, {"chains": [r.to_json() for r in reps]}))
        return EXIT_OK if ok else EXIT_FAIL
    if args.consistency:
        lo, hi = _parse_range(args.consistency)
        rep = C.consistency_report(range(lo, hi + 1))
        emit(out, envelope("constants", True, rep))
        return EXIT_OK
    if args.n is None:
        raise UsageError("constants needs --n, --sweep, --verify-chains or --consistency")
    rep = C.bound_report(args.n, args.p, args.group_size, args.literal)
    bad = rep.check_invariants()
    result = rep.to_json()
    result["invariant_violations"] = bad
    emit(out, envelope("constants", not bad, result))
    return EXIT_FAIL if bad else EXIT_OK


def cmd_factor(args, out) -> int:
    if args.random:
        n, length = _parse_range(args.random)
        g = random_sl(n, length, args.seed)
    elif args.input:
        g = _read_matrix(args.input)
    else:
        raise UsageError("factor needs --in FILE or --random N:LEN")
    cert = factor_full(g, args.schedule)
    ok = verify_certificate(cert, g)
    result = cert.to_json()
    result["verified"] = ok
    if args.expand:
        result["word"] = [list(t) for t in expand_to_elementary(cert)]
    emit(out, envelope("factor", ok, result, args.seed if args.random else None))
    return EXIT_OK if ok else EXIT_FAIL


def cmd_reduce(args, out) -> int:
    mat = _read_matrix(args.input)
    system = VectorSystem(mat, args.modulus)
    trace = reduce_to_standard(system, args.policy)
    ok = trace.verify()
    result = {
        "policy": trace.policy,
        "k": system.k,
        "n": system.n,
        "modulus": args.modulus,
        "ops": [{"I": list(op.I), "J": list(op.J), "alpha": [list(r) for r in op.alpha]} for op in trace.ops],
        "op_count": trace.op_count,
        "primes": list(trace.primes),
        "verified": ok,
    }
    emit(out, envelope("reduce", ok, result))
    return EXIT_OK if ok else EXIT_FAIL


def cmd_verify_torus(args, out) -> int:
    from .torus import partition_table, verify_torus

    if args.emit_table:
        with open(args.emit_table, "w") as fh:
            fh.write(dumps(partition_table()) + "\n")
    result = verify_torus(args.grid, args.p, args.bp_grid)
    ok = result["partition_violations"] == 0 and not any(result["identity_violations"].values())
    ok &= result.get("bp_cp_violations", 0) == 0
    emit(out, envelope("verify-torus", ok, result))
    return EXIT_OK if ok else EXIT_FAIL


def cmd_spectral(args, out) -> int:
    from .spectral import cayley_graph, compare_bounds, enumerate_group

    rep = compare_bounds(args.n, args.p, args.cap, with_mixing=not args.no_mixing)
    if args.dump_spectrum:
        import numpy as np

        graph = cayley_graph(enumerate_group(args.n, args.p, args.cap))
        if graph.order > 4000:
            raise UsageError("spectrum dumps are limited to groups of order 4000")
        ev = np.linalg.eigvalsh(graph.adjacency().toarray())[::-1]
        with open(args.dump_spectrum, "w") as fh:
            fh.write("index,eigenvalue\n")
            fh.writelines(f"{i},{v!r}\n" for i, v in enumerate(ev))
    ok = rep.bound_checks.get("lower", {}).get("pass", True)
    emit(out, envelope("spectral", ok, rep.to_json()))
    return EXIT_OK if ok else EXIT_FAIL


def cmd_mix(args, out) -> int:
    from .spectral import cayley_graph, enumerate_group, mixing_time

    graph = cayley_graph(enumerate_group(args.n, args.p, args.cap))
    steps = mixing_time(graph, args.threshold)
    result = {"n": args.n, "p": args.p, "order": graph.order, "threshold": args.threshold, "steps": steps}
    emit(out, envelope("mix", True, result))
    return EXIT_OK


def cmd_report(args, out) -> int:
    from .acceptance import run_all

    results = run_all(quick=args.quick, seed=args.seed)
    ok = all(r.passed for r in results)
    if args.format == "table":
        for r in results:
            out.write(r.line() + "\n")
        out.write(f"{sum(r.passed for r in results)}/{len(results)} criteria passed\n")
    else:
        payload = {"quick": args.quick, "criteria": [r.to_json(args.timing) for r in results]}
        emit(out, envelope("report", ok, payload, args.seed))
    return EXIT_OK if ok else EXIT_FAIL


# -- parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="kazhdan", description="Bounded generation and Kazhdan-constant toolkit")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("constants", help="named constants and bounds")
    p.add_argument("--n", type=int)
    p.add_argument("--p", type=int)
    p.add_argument("--group-size", type=int, help="|G| for the mixing and product-replacement bounds")
    p.add_argument("--literal", action="store_true", help="mixing bound as beta*log|G| instead of log|G|/beta")
    p.add_argument("--sweep", metavar="LO:HI", help="CSV with one row per n")
    p.add_argument("--verify-chains", action="store_true")
    p.add_argument("--cap", type=int, default=10**4, help="p, q cap for --verify-chains")
    p.add_argument("--consistency", metavar="LO:HI", help="cross-check stated constants over n")
    p.set_defaults(func=cmd_constants)

    p = sub.add_parser("factor", help="factor an SL_n(Z) matrix into generalized transvections")
    p.add_argument("--in", dest="input", metavar="FILE", help="matrix text file, '-' for stdin")
    p.add_argument("--random", metavar="N:LEN", help="factor a seeded random element instead")
    p.add_argument("--schedule", default="auto", choices=("auto", "3k", "2k1"))
    p.add_argument("--expand", action="store_true", help="also emit the word in E_n as (i, j, sign)")
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_factor)

    p = sub.add_parser("reduce", help="reduce a complete vector system to the standard one")
    p.add_argument("--in", dest="input", metavar="FILE", required=True, help="k x n matrix whose columns are the vectors")
    p.add_argument("--policy", default="Z-3k", choices=POLICIES)
    p.add_argument("--modulus", type=int, help="prime p for the Fp-2k policy")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("verify-torus", help="exact checks of the torus partition and mapping identities")
    p.add_argument("--grid", type=int, required=True, metavar="Q")
    p.add_argument("--p", type=int, help="also check the B_i/C_i sets in T^p")
    p.add_argument("--bp-grid", type=int, default=8, metavar="Q", help="grid for the T^p check (default 8)")
    p.add_argument("--emit-table", metavar="PATH", help="write the boundary-convention table as JSON")
    p.set_defaults(func=cmd_verify_torus)

    for name, helptext in (("spectral", "spectral gap of the SL_n(F_p) Cayley graph"), ("mix", "lazy-walk mixing time")):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--n", type=int, required=True)
        p.add_argument("--p", type=int, required=True)
        p.add_argument("--cap", type=int, default=100_000, help="largest group order to enumerate")
        if name == "spectral":
            p.add_argument("--no-mixing", action="store_true")
            p.add_argument("--dump-spectrum", metavar="CSV")
            p.set_defaults(func=cmd_spectral)
        else:
            p.add_argument("--threshold", type=float, default=0.25)
            p.set_defaults(func=cmd_mix)

    p = sub.add_parser("report", help="run the acceptance suite")
    p.add_argument("--quick", action="store_true", help="smaller sweeps, same checks")
    p.add_argument("--seed", type=int)
    p.add_argument("--format", choices=("json", "table"), default="json")
    p.add_argument("--timing", action="store_true", help="include run times (makes output nondeterministic)")
    p.set_defaults(func=cmd_report)
    return parser


def main(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    try:
        if hasattr(args, "seed") and args.seed is None:
            args.seed = default_seed()
        return args.func(args, out)
    except ParseError as err:
        print(f"kazhdan: parse error: {err}", file=sys.stderr)
        return EXIT_USAGE
    except (UsageError, KazhdanError) as err:
        print(f"kazhdan: {err}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
