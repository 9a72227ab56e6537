"""Command-line interface: dim, construct, verify, embed."""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import constructions as cons
from . import theorem_lab as lab
from .core import AddimError, AdditiveSet, ParseError, parse_set, serialize_set
from .lfree import LinearForm
from .solvers import SearchBudget, default_budget, full_report

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_INPUT = 2
EXIT_BUDGET = 3


class InputError(Exception):
    pass


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _write(text: str, path: str | None):
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def read_set(path: str) -> AdditiveSet:
    if path == "-":
        data = sys.stdin.read()
    else:
        try:
            with open(path, encoding="utf-8") as fh:
                data = fh.read()
        except OSError as exc:
            raise InputError(f"cannot read {path}: {exc.strerror}") from None
    fmt = "json" if path.endswith(".json") or data.lstrip().startswith("{") else "text"
    return parse_set(data, fmt)


def seed_arg(text: str) -> int:
    try:
        value = int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid seed {text!r}") from None
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must be a 64-bit unsigned integer")
    return value


def _budget(args) -> SearchBudget:
    base = default_budget()
    if getattr(args, "budget_nodes", None) is not None:
        return SearchBudget(max_nodes=args.budget_nodes, max_seconds=base.max_seconds)
    return base


# ------------------------------------------------------------------ dim


def cmd_dim(args) -> int:
    A = read_set(args.setfile)
    U = read_set(args.universe) if args.universe else None
    if U is not None and U.rank != A.rank:
        raise InputError("universe rank differs from the set's rank")
    rep = full_report(A, U, _budget(args))
    if args.json:
        _write(_dump(rep.to_json()), args.output)
    else:
        lines = []
        for name, res in (
            ("d_s_minus", rep.d_s_minus),
            ("d_s", rep.d_s),
            ("d_d_minus", rep.d_d_minus),
            ("d_d", rep.d_d),
        ):
            if res is None:
                lines.append(f"{name}: - (no universe)")
            elif res.exact:
                wit = " ".join("(" + " ".join(map(str, e)) + ")" for e in res.witness.elements)
                lines.append(f"{name}: {res.value}  [{res.method}]  witness: {wit}")
            elif res.status == "infeasible":
                lines.append(f"{name}: universe does not 1-span the set")
            else:
                upper = "?" if res.upper is None else res.upper
                lines.append(f"{name}: between {res.lower} and {upper} (budget exhausted)")
        for k, v in rep.ratios.items():
            lines.append(f"{k}: {'-' if v is None else v}")
        if rep.main_floor is not None:
            lines.append(f"1/log4(d_d): {rep.main_floor:.6f}")
        _write("\n".join(lines) + "\n", args.output)
    return EXIT_OK if rep.all_exact else EXIT_BUDGET


# ------------------------------------------------------------------ construct


def cmd_construct(args) -> int:
    kind = args.kind
    header = [f"construct {kind} " + " ".join(args.params)]
    p = args.params

    def need(count):
        if len(p) != count:
            raise InputError(f"construct {kind} takes {count} parameter(s)")
        try:
            return [int(x) for x in p]
        except ValueError:
            raise InputError("parameters must be integers") from None

    try:
        if kind == "p3":
            (k,) = need(1)
            A = cons.powers_of_three(k)
        elif kind == "interval-basis":
            (N,) = need(1)
            ib = cons.interval_basis(N)
            A = ib.basis
            header.append(f"case: {ib.case}  k: {ib.k}" + (f"  t: {ib.t}" if ib.t is not None else ""))
        elif kind == "interval":
            (N,) = need(1)
            A = cons.interval(N)
        elif kind == "cube":
            (n,) = need(1)
            A = cons.cube(n)
        elif kind == "eg1":
            need(0)
            A = cons.example_eg1()
        elif kind == "geneg":
            (n,) = need(1)
            if not args.dissoc:
                raise InputError("geneg needs --dissoc FILE")
            A = cons.geneg_family(n, read_set(args.dissoc))
        elif kind == "cube-dissoc":
            (n,) = need(1)
            res = cons.dissociated_in_cube(n, args.strategy, seed=args.seed, restarts=args.restarts)
            A = res.D
            header.append(f"strategy: {res.strategy}  seed: {args.seed}  optimal: {str(res.optimal).lower()}")
        else:
            raise InputError(f"unknown construction {kind!r}")
    except AddimError as exc:
        raise InputError(str(exc)) from None
    _write(serialize_set(A, args.format, header=header if args.format == "text" else ()), args.output)
    return EXIT_OK


# ------------------------------------------------------------------ verify


def cmd_verify(args) -> int:
    t = args.target
    threads = args.threads
    if t == "interval":
        if args.to is None or args.to < 1:
            raise InputError("verify interval needs --to N with N >= 1")
        checks = lab.check_thm_interval(args.to, args.mode)
    elif t == "dslb":
        if args.set:
            checks = lab.dslb_checks_for(read_set(args.set))
        else:
            seeds = lab.instance_seeds(args.seed, args.runs)
            checks = [c for batch in lab.run_batch(lab.dslb_instance, seeds, threads) for c in batch]
    elif t == "chain":
        seeds = lab.instance_seeds(args.seed, args.runs)
        checks = lab.run_batch(lab.chain_instance, seeds, threads)
    elif t == "geneg":
        if args.n is None or not 1 <= args.n:
            raise InputError("verify geneg needs --n n")
        checks = lab.geneg_checks(args.n)
    elif t == "schoen":
        if not args.coeffs or args.p is None:
            raise InputError("verify schoen needs --coeffs c1,...,ck and --p p")
        try:
            L = LinearForm(tuple(int(c) for c in args.coeffs.split(",")))
        except ValueError:
            raise InputError("coefficients must be comma-separated integers") from None
        checks = [lab.check_schoen_bound(L, args.p)]
    else:
        raise InputError(f"unknown verification target {t!r}")
    report = lab.verification_report(checks)
    if args.json:
        _write(_dump(report), args.output)
    else:
        lines = [f"{t}: {report['total'] - report['failed']}/{report['total']} checks hold"]
        for c in checks:
            if not c.holds:
                lines.append(f"  {c.verdict.upper()} {c.name} {json.dumps(c.inputs, sort_keys=True)}: "
                             f"lhs={c.lhs} rhs={c.rhs}")
        _write("\n".join(lines) + "\n", args.output)
    return EXIT_OK if report["passed"] else EXIT_VIOLATION


# ------------------------------------------------------------------ embed


def cmd_embed(args) -> int:
    A = read_set(args.setfile)
    try:
        image, emb = cons.freiman_embed(A, args.order)
    except AddimError as exc:
        raise InputError(str(exc)) from None
    meta = emb.to_json()
    header = ["embed order %d" % args.order, "embedding: " + json.dumps(meta, sort_keys=True)]
    _write(serialize_set(image, "text", header=header), args.output)
    sidecar = args.sidecar
    if sidecar is None and args.output not in (None, "-"):
        sidecar = args.output + ".embedding.json"
    if sidecar:
        _write(_dump(meta), sidecar)
    return EXIT_OK


# ------------------------------------------------------------------ parser


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="addim", description="Dimensions of additive sets.")
    ap.add_argument("--threads", type=int, default=1, help="worker processes for batch checks")
    sub = ap.add_subparsers(dest="command", required=True)

    d = sub.add_parser("dim", help="compute d_s^-, d_s, d_d^-, d_d of a set file")
    d.add_argument("setfile")
    d.add_argument("--universe")
    d.add_argument("--budget-nodes", type=int)
    d.add_argument("--json", action="store_true")
    d.add_argument("-o", "--out", "--output", dest="output")
    d.set_defaults(func=cmd_dim)

    c = sub.add_parser("construct", help="emit an explicit set")
    c.add_argument("kind", choices=["p3", "interval-basis", "interval", "cube", "eg1", "geneg", "cube-dissoc"])
    c.add_argument("params", nargs="*")
    c.add_argument("--dissoc")
    c.add_argument("--strategy", choices=["exact", "greedy_random"], default="exact")
    c.add_argument("--seed", type=seed_arg, default=0)
    c.add_argument("--restarts", type=int, default=32)
    c.add_argument("--format", choices=["text", "json"], default="text")
    c.add_argument("-o", "--out", "--output", dest="output")
    c.set_defaults(func=cmd_construct)

    v = sub.add_parser("verify", help="run a verification batch")
    v.add_argument("target", choices=["interval", "dslb", "chain", "geneg", "schoen"])
    v.add_argument("--to", type=int)
    v.add_argument("--mode", choices=["oracle", "constructive"], default="oracle")
    v.add_argument("--set")
    v.add_argument("--runs", type=int, default=100)
    v.add_argument("--seed", type=seed_arg, default=0)
    v.add_argument("--n", type=int)
    v.add_argument("--coeffs")
    v.add_argument("--p", type=int)
    v.add_argument("--json", action="store_true")
    v.add_argument("-o", "--out", "--output", dest="output")
    v.set_defaults(func=cmd_verify)

    e = sub.add_parser("embed", help="Freiman-embed a set into Z")
    e.add_argument("setfile")
    e.add_argument("--order", type=int, required=True)
    e.add_argument("--sidecar")
    e.add_argument("-o", "--out", "--output", dest="output")
    e.set_defaults(func=cmd_embed)
    return ap


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    if "ADDIM_BUDGET_NODES" in os.environ:
        try:
            int(os.environ["ADDIM_BUDGET_NODES"])
        except ValueError:
            print("error: ADDIM_BUDGET_NODES must be an integer", file=sys.stderr)
            return EXIT_INPUT
    try:
        return args.func(args)
    except (InputError, ParseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except AddimError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
