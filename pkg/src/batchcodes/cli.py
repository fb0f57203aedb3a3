"""Command-line entry point: construct, verify, retrieve, bounds, design.

JSON reports go to stdout and a short human summary to stderr (``--quiet``
suppresses it).  Exit codes: 0 success or proven, 2 refuted (a deficient set
was found), 3 unproven (sampled search found nothing), 64 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from . import bounds as bnd
from .codes import FAMILIES, construct, format_matrix, load_matrix
from .designs import build_affine_plane, build_resolvable_td, format_design
from .matching import DeficiencyWitness, retrieve_batch
from .verify import (
    EXACT,
    EXHAUSTIVE,
    SAMPLED,
    max_k_dual,
    max_k_exhaustive,
    sampled_check,
)

SCHEMA = 1
EXIT_OK = 0
EXIT_REFUTED = 2
EXIT_UNPROVEN = 3
EXIT_USAGE = 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _report(command: str, inputs: dict, outputs: dict, seed, started: float) -> dict:
    return {
        "schema": SCHEMA,
        "command": command,
        "inputs": inputs,
        "outputs": outputs,
        "seed": seed,
        "timing": {"seconds": round(time.perf_counter() - started, 6)},
    }


def _load(path: str):
    try:
        return load_matrix(path)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror or exc}") from None


def cmd_construct(args, started):
    mat = construct(args.family, args.q)
    if args.out is None:
        sys.stdout.write(format_matrix(mat, metadata=not args.no_metadata))
        return None, EXIT_OK, f"{mat.label}: {mat.m} x {mat.n}"
    Path(args.out).write_text(format_matrix(mat, metadata=not args.no_metadata))
    outputs = {
        "path": str(args.out),
        "m": mat.m,
        "n": mat.n,
        "N": mat.N,
        "c": mat.uniform_weight,
        "declared": mat.declared.as_dict() if mat.declared else None,
    }
    rep = _report("construct", {"family": args.family, "q": args.q}, outputs, None, started)
    return rep, EXIT_OK, f"wrote {mat.label} ({mat.m} x {mat.n}, N={mat.N}) to {args.out}"


def cmd_verify(args, started):
    mat = _load(args.path)
    inputs = {"path": str(args.path), "mode": args.mode, "k": args.k}
    seed = None
    if args.mode == EXACT:
        v = max_k_dual(mat, cap=args.cap)
        inputs["cap"] = args.cap
    elif args.mode == EXHAUSTIVE:
        v = max_k_exhaustive(mat)
    else:
        k = args.k
        if k is None and mat.declared is not None:
            k = mat.declared.k
        if k is None:
            raise UsageError("sampled mode needs --k (or a declared k in the file metadata)")
        inputs.update(k=k, samples=args.samples)
        seed = args.seed
        v = sampled_check(mat, k, args.samples, seed=seed)

    if v.mode == SAMPLED:
        code = EXIT_REFUTED if v.refuted else EXIT_UNPROVEN
        summary = (
            f"refuted: {v.witness.size} items on {v.witness.neighborhood_size} servers"
            if v.refuted
            else f"no deficient set of size <= {v.checked_k} in {v.samples_checked} candidates (evidence only)"
        )
    else:
        code = EXIT_OK
        if v.k_max is None:
            summary = f"k_max in [{v.k_lower}, {v.k_upper}]"
        else:
            summary = f"k_max = {v.k_max}"
        if args.k is not None and v.k_upper is not None and v.k_upper < args.k:
            code = EXIT_REFUTED
            summary += f" < claimed k = {args.k}"
    return _report("verify", inputs, v.as_dict(), seed, started), code, summary


def _parse_items(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"--items must be comma-separated integers, got {text!r}") from None


def cmd_retrieve(args, started):
    mat = _load(args.path)
    items = _parse_items(args.items)
    result = retrieve_batch(mat, items)
    if isinstance(result, DeficiencyWitness):
        outputs = {"violator": result.as_dict()}
        code = EXIT_REFUTED
        summary = f"no assignment: items {list(result.column_set)} share {result.neighborhood_size} servers"
    else:
        outputs = {"assignment": result.as_dict()}
        code = EXIT_OK
        summary = "assignment: " + ", ".join(f"{j}->{s}" for j, s in sorted(result.pairs.items()))
    return _report("retrieve", {"path": str(args.path), "items": items}, outputs, None, started), code, summary


def _need(args, *names):
    missing = [f"--{n.replace('_', '-')}" for n in names if getattr(args, n) is None]
    if missing:
        raise UsageError(f"missing {' '.join(missing)}")


def cmd_bounds(args, started):
    reports: list[bnd.BoundReport] = []
    values: dict = {}
    inputs: dict = {}
    if args.family is not None:
        _need(args, "q")
        mat = construct(args.family, args.q)
        inputs = {"family": args.family, "q": args.q}
        reports = bnd.optimality_report(mat, mat.declared.k)
        if args.family == "ctd":
            reports.append(bnd.new_range_check(args.q))
    elif args.input is not None:
        mat = _load(args.input)
        k = args.k
        if k is None and mat.declared is not None:
            k = mat.declared.k
        if k is None:
            k = max_k_dual(mat).k_max
        inputs = {"path": str(args.input), "k": k}
        reports = bnd.optimality_report(mat, k)
    elif args.uniform:
        _need(args, "m", "c", "k")
        inputs = {"m": args.m, "c": args.c, "k": args.k}
        values["uniform_upper"] = bnd.uniform_upper(args.m, args.c, args.k)
    elif args.table:
        _need(args, "n", "k", "m")
        inputs = {"n": args.n, "k": args.k, "m": args.m}
        values["table_exact_N"] = bnd.table_exact_N(args.n, args.k, args.m)
    elif args.lower:
        _need(args, "n", "k", "m")
        inputs = {"n": args.n, "k": args.k, "m": args.m}
        values["minimal_s"] = bnd.minimal_s(args.n, args.k, args.m)
        values["storage_lower"] = bnd.storage_lower(args.n, args.k, args.m)
    elif args.johnson:
        _need(args, "m", "w")
        inputs = {"m": args.m, "w": args.w}
        values["johnson_upper_A"] = bnd.johnson_upper_A(args.m, args.w)
    elif args.new_range:
        _need(args, "q")
        inputs = {"q": args.q}
        reports = [bnd.new_range_check(args.q)]
    else:
        raise UsageError("choose one of --family, --in, --uniform, --table, --lower, --johnson, --new-range")

    outputs = {"reports": [r.as_dict() for r in reports], "values": values}
    lines = [f"{k} = {v}" for k, v in values.items()]
    lines += [
        f"{r.name:<14} bound={r.bound} achieved={r.achieved} gap={r.gap} {r.verdict}" for r in reports
    ]
    return _report("bounds", inputs, outputs, None, started), EXIT_OK, "\n".join(lines)


def cmd_design(args, started):
    if args.affine is not None:
        d = build_affine_plane(args.affine)
    elif args.td is not None:
        d = build_resolvable_td(*args.td)
    else:
        raise UsageError("choose --td ELL Q or --affine Q")
    text = format_design(d)
    if args.out is None:
        sys.stdout.write(text)
        return None, EXIT_OK, f"{len(d.blocks)} blocks"
    Path(args.out).write_text(text)
    rep = _report("design", {"td": args.td, "affine": args.affine}, {"path": str(args.out), "blocks": len(d.blocks)}, None, started)
    return rep, EXIT_OK, f"wrote {len(d.blocks)} blocks to {args.out}"


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="batchcodes", description=__doc__.splitlines()[0])
    p.add_argument("--quiet", action="store_true", help="suppress the human summary on stderr")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--quiet", action="store_true", default=argparse.SUPPRESS)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("construct", parents=[common], help="build a code and write its matrix file")
    c.add_argument("--family", required=True, choices=sorted(FAMILIES))
    c.add_argument("--q", required=True, type=int)
    c.add_argument("--out", help="output path (matrix goes to stdout if omitted)")
    c.add_argument("--no-metadata", action="store_true")
    c.set_defaults(func=cmd_construct)

    v = sub.add_parser("verify", parents=[common], help="compute or check the batch size k of a matrix file")
    v.add_argument("path")
    v.add_argument("--mode", choices=[EXACT, EXHAUSTIVE, SAMPLED], default=EXACT)
    v.add_argument("--k", type=int)
    v.add_argument("--cap", type=int, help="exact mode: only row sets of size <= cap")
    v.add_argument("--samples", type=int, default=100_000)
    v.add_argument("--seed", type=int, default=0)
    v.set_defaults(func=cmd_verify)

    r = sub.add_parser("retrieve", parents=[common], help="assign a batch of items to distinct servers")
    r.add_argument("path")
    r.add_argument("--items", required=True, help="comma-separated item (column) indices")
    r.set_defaults(func=cmd_retrieve)

    b = sub.add_parser("bounds", parents=[common], help="evaluate storage and capacity bounds")
    mode = b.add_mutually_exclusive_group()
    mode.add_argument("--family", choices=sorted(FAMILIES))
    mode.add_argument("--in", dest="input", help="matrix file")
    mode.add_argument("--uniform", action="store_true")
    mode.add_argument("--table", action="store_true")
    mode.add_argument("--lower", action="store_true")
    mode.add_argument("--johnson", action="store_true")
    mode.add_argument("--new-range", action="store_true")
    for name in ("q", "n", "k", "m", "c", "w"):
        b.add_argument(f"--{name}", type=int)
    b.set_defaults(func=cmd_bounds)

    d = sub.add_parser("design", parents=[common], help="export a design as a block list")
    d.add_argument("--td", nargs=2, type=int, metavar=("ELL", "Q"))
    d.add_argument("--affine", type=int, metavar="Q")
    d.add_argument("--out")
    d.set_defaults(func=cmd_design)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    started = time.perf_counter()
    try:
        report, code, summary = args.func(args, started)
    except (UsageError, ValueError) as exc:
        print(f"batchcodes {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if report is not None:
        print(json.dumps(report, indent=2, sort_keys=True))
    if summary and not args.quiet:
        print(summary, file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
