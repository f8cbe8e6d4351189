"""Command-line front end.

Exit status: 0 on success, 1 on domain errors (anything raised as a
:class:`~sumdiff.errors.SumdiffError`), 2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

from . import census as census_mod
from . import forms, mstd, poly, repfn
from .errors import InvalidArgument, SumdiffError
from .intset import (
    IntSet,
    affine_canonical,
    diffset,
    parse_set,
    stats,
    sumset,
    symmetry_center,
)
from .output import ResultEnvelope, render, set_payload, write_text

OUTPUT_DIR_ENV = "SUMDIFF_OUTPUT_DIR"

EXIT_OK, EXIT_DOMAIN, EXIT_USAGE = 0, 1, 2

log = logging.getLogger("sumdiff")


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    subcommand: Optional[str]
    flags: dict
    budget_tuples: int
    budget_subsets: int
    time_cap: Optional[float]
    shard_index: Optional[int]
    shard_total: int
    output: Optional[Path]
    fmt: str
    args: argparse.Namespace = field(repr=False, default=None)

    def echo(self) -> dict:
        """Config as echoed in envelopes; output paths are left out."""
        skip = {"output", "witnesses", "checkpoint", "format", "verbose"}
        return {k: v for k, v in sorted(self.flags.items()) if k not in skip}


# ------------------------------------------------------------------ parsing

class _Parser(argparse.ArgumentParser):
    def __init__(self, *args, **kwargs):
        kwargs.setdefault("allow_abbrev", False)
        super().__init__(*args, **kwargs)

    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _set_arg(text: str) -> IntSet:
    try:
        return parse_set(text)
    except SumdiffError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {v}")
    return v


def _nonneg(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
    if v < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {v}")
    return v


def _coeffs(text: str) -> tuple[int, ...]:
    try:
        return forms.parse_coeffs(text)
    except SumdiffError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _poly_arg(text: str) -> poly.ParsedPoly:
    try:
        return poly.parse_poly(text)
    except SumdiffError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("global options")
    g.add_argument("--format", choices=["json", "csv", "text"], default="json")
    g.add_argument("--output", type=Path, help=f"write here instead of stdout (default dir: ${OUTPUT_DIR_ENV})")
    g.add_argument("--budget-tuples", type=_positive, default=10**8, help="cap on tuples per image evaluation")
    g.add_argument("--budget-subsets", type=_positive, default=1 << 20, help="cap on subsets per scan")
    g.add_argument("--time-cap-secs", type=float, default=None, help="stop scans after this many seconds")
    g.add_argument("-v", "--verbose", action="store_true")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = _Parser(prog="sumdiff", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("verify", parents=[common], help="sums, differences and class of one set")
    p.add_argument("--set", type=_set_arg, required=True)

    p = sub.add_parser("census", parents=[common], help="classify every subset of [0, n-1]")
    p.add_argument("--n", type=_positive, required=True)
    p.add_argument("--k", type=_nonneg, default=None, help="only subsets of this size")
    p.add_argument("--shards", type=_positive, default=1)
    p.add_argument("--shard-index", type=_nonneg, default=None, help="run a single shard")
    p.add_argument("--workers", type=_positive, default=1, help="processes for the shards")
    p.add_argument("--checkpoint", type=Path, default=None)
    p.add_argument("--checkpoint-every", type=_positive, default=census_mod.DEFAULT_CHECKPOINT_EVERY)
    p.add_argument("--stop-after", type=_positive, default=None, help="masks per shard before pausing")
    p.add_argument("--witnesses", type=Path, default=None, help="write sum-dominant sets here")
    p.add_argument("--witness-cap", type=_nonneg, default=census_mod.DEFAULT_WITNESS_CAP)
    p.add_argument("--max-n", type=_positive, default=census_mod.DEFAULT_MAX_N)

    p = sub.add_parser("search", parents=[common], help="canonical sum-dominant sets within bounds")
    p.add_argument("--max-card", type=_positive, required=True)
    p.add_argument("--max-diam", type=_positive, required=True)

    p = sub.add_parser("lift", parents=[common], help="base-m lift A_t and its cardinalities")
    p.add_argument("--set", type=_set_arg, required=True)
    p.add_argument("--m", type=_positive, required=True)
    p.add_argument("--t", type=_positive, required=True)
    p.add_argument("--show-set", action="store_true", help="include the lifted set itself")

    fp = sub.add_parser("forms", help="binary and n-ary linear forms")
    fsub = fp.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)
    p = fsub.add_parser("normalize", parents=[common])
    p.add_argument("--u", type=int, required=True)
    p.add_argument("--v", type=int, required=True)
    p = fsub.add_parser("eval", parents=[common])
    p.add_argument("--u", type=int, required=True)
    p.add_argument("--v", type=int, required=True)
    p.add_argument("--set", type=_set_arg, required=True)
    p.add_argument("--no-image", action="store_true", help="report only the cardinality")
    p = fsub.add_parser("nary", parents=[common])
    p.add_argument("--coeffs", type=_coeffs, required=True)
    p.add_argument("--set", type=_set_arg, required=True)
    p.add_argument("--no-image", action="store_true")
    p = fsub.add_parser("triple", parents=[common])
    p.add_argument("--f", type=_coeffs, required=True)
    p.add_argument("--g", type=_coeffs, required=True)
    p.add_argument("--max-diam", type=_positive, required=True)
    p.add_argument("--max-card", type=_positive, required=True)
    p = fsub.add_parser("orosz", parents=[common])
    p.add_argument("--u", type=int, required=True)
    p.add_argument("--v", type=int, required=True)

    pp = sub.add_parser("poly", help="polynomial images")
    psub = pp.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)
    p = psub.add_parser("eval", parents=[common])
    p.add_argument("--f", type=_poly_arg, required=True)
    p.add_argument("--set", type=_set_arg, required=True)
    p = psub.add_parser("mod", parents=[common])
    p.add_argument("--f", type=_poly_arg, required=True)
    p.add_argument("--g", type=_poly_arg, default=None)
    p.add_argument("--m", type=_positive, required=True)
    p.add_argument("--set", type=_set_arg, default=None, help="integers to reduce mod m")
    p.add_argument("--probe", action="store_true", help="search Z/mZ for |f(A)| > |g(A)|")
    p.add_argument("--triple", action="store_true", help="exhaustive search for >, <, = witnesses")
    p.add_argument("--max-card", type=_positive, default=None)
    p.add_argument("--seed", type=int, default=0)

    rp = sub.add_parser("repfn", help="representation functions")
    rsub = rp.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)
    p = rsub.add_parser("profile", parents=[common])
    p.add_argument("--set", type=_set_arg, required=True)
    p.add_argument("--h", type=_positive, default=2)
    p.add_argument("--from", dest="lo", type=int, default=None)
    p.add_argument("--to", dest="hi", type=int, default=None)
    p = rsub.add_parser("verify", parents=[common])
    p.add_argument("--set", type=_set_arg, required=True)
    p.add_argument("--h", type=_positive, default=2)
    p.add_argument("--target", type=Path, required=True)
    p = rsub.add_parser("realize", parents=[common])
    p.add_argument("--target", type=Path, required=True)
    p.add_argument("--h", type=_positive, default=2)
    p.add_argument("--bound", type=_nonneg, required=True)
    p.add_argument("--all", action="store_true", help="list every realizer within the bound")
    p = rsub.add_parser("count", parents=[common])
    p.add_argument("--set", type=_set_arg, required=True)
    p.add_argument("--x", type=_nonneg, required=True)
    p = rsub.add_parser("density", parents=[common])
    p.add_argument("--set", type=_set_arg, required=True)
    p.add_argument("--samples", type=_coeffs, required=True, help="comma-separated x values")
    return parser


def parse_cli(argv: Sequence[str]) -> RunConfig:
    """Parse ``argv`` into a :class:`RunConfig`; raises :class:`UsageError`."""
    args = build_parser().parse_args(list(argv))
    flags = {}
    for k, v in vars(args).items():
        if isinstance(v, IntSet):
            v = str(v)
        elif isinstance(v, poly.ParsedPoly):
            v = v.poly.to_text()
        elif isinstance(v, Path):
            v = str(v)
        elif isinstance(v, tuple):
            v = list(v)
        flags[k] = v
    shard_total = getattr(args, "shards", 1)
    shard_index = getattr(args, "shard_index", None)
    if shard_index is not None and shard_index >= shard_total:
        raise UsageError(f"sumdiff census: argument --shard-index: {shard_index} is out of range for --shards {shard_total}")
    if args.command == "census" and args.k is not None and args.k > args.n:
        raise UsageError(f"sumdiff census: argument --k: {args.k} exceeds --n {args.n}")
    output = args.output
    if output is None and os.environ.get(OUTPUT_DIR_ENV):
        name = "-".join(x for x in (args.command, getattr(args, "subcommand", None)) if x)
        output = Path(os.environ[OUTPUT_DIR_ENV]) / f"{name}.{args.format}"
    return RunConfig(
        command=args.command,
        subcommand=getattr(args, "subcommand", None),
        flags=flags,
        budget_tuples=args.budget_tuples,
        budget_subsets=args.budget_subsets,
        time_cap=args.time_cap_secs,
        shard_index=shard_index,
        shard_total=shard_total,
        output=output,
        fmt=args.format,
        args=args,
    )


# ----------------------------------------------------------------- commands

def _verify_payload(A: IntSet) -> dict:
    st = stats(A)
    return {
        "set": set_payload(A),
        "cardinality": st.cardinality,
        "sum_card": st.sum_card,
        "diff_card": st.diff_card,
        "class": mstd.SdClass.from_cards(st.sum_card, st.diff_card).value,
        "sumset": set_payload(sumset(A, A)),
        "diffset": set_payload(diffset(A, A)),
        "symmetry_center": symmetry_center(A) if len(A) else None,
        "affine_canonical": set_payload(affine_canonical(A)) if len(A) >= 2 else None,
    }


def cmd_verify(cfg: RunConfig):
    return _verify_payload(cfg.args.set), True, None


def cmd_census(cfg: RunConfig):
    a = cfg.args
    indices = None if a.shard_index is None else [a.shard_index]
    res = census_mod.census(
        a.n,
        k=a.k,
        shards=a.shards,
        shard_indices=indices,
        workers=a.workers,
        witness_cap=a.witness_cap,
        checkpoint=a.checkpoint,
        checkpoint_every=a.checkpoint_every,
        stop_after=a.stop_after,
        time_cap=cfg.time_cap,
        max_n=a.max_n,
    )
    if a.witnesses is not None:
        write_text(json.dumps([list(w.elements) for w in res.witnesses]) + "\n", a.witnesses)
    table = (["k", "total", "sum_dominant", "balanced", "diff_dominant"], res.csv_rows())
    run = {"elapsed_secs": round(res.elapsed, 3), "resumed": res.resumed}
    return res.payload(), res.exhaustive, table, run


def cmd_search(cfg: RunConfig):
    a = cfg.args
    res = mstd.search_min_mstd(a.max_card, a.max_diam, budget=cfg.budget_subsets)
    payload = {
        "bounds": res.bounds,
        "examined": res.examined,
        "sets": [list(s.elements) for s in res.sets],
        "count": len(res.sets),
    }
    return payload, res.exhaustive, None


def cmd_lift(cfg: RunConfig):
    a = cfg.args
    A_t = mstd.lift(a.set, mstd.LiftParams(a.m, a.t))
    ratios = mstd.ratio_sequence(a.set, a.t, a.m)
    st = stats(a.set)
    payload = {
        "source": set_payload(a.set),
        "m": a.m,
        "t": a.t,
        "cardinality": len(A_t),
        "sum_card": ratios[-1][0],
        "diff_card": ratios[-1][1],
        "expected_sum_card": st.sum_card ** a.t,
        "expected_diff_card": st.diff_card ** a.t,
        "ratios": [{"t": i + 1, "sum_card": s, "diff_card": d} for i, (s, d) in enumerate(ratios)],
    }
    if a.show_set:
        payload["set"] = set_payload(A_t)
    return payload, True, None


def _form_payload(u, v):
    return {"u": u, "v": v}


def cmd_forms(cfg: RunConfig):
    a = cfg.args
    sc = cfg.subcommand
    if sc == "normalize":
        steps = forms.normalize_steps(forms.BinaryForm(a.u, a.v))
        n = forms.normalize(forms.BinaryForm(a.u, a.v))
        return {"input": _form_payload(a.u, a.v), "steps": [_form_payload(*s) for s in steps],
                "normalized": _form_payload(n.u, n.v)}, True, None
    if sc == "eval":
        f = forms.BinaryForm(a.u, a.v)
        img = forms.eval_form(f, a.set)
        payload = {"form": _form_payload(a.u, a.v), "set": set_payload(a.set), "cardinality": len(img)}
        if not a.no_image:
            payload["image"] = set_payload(img)
        return payload, True, None
    if sc == "nary":
        img = forms.eval_nary(forms.NaryForm(a.coeffs), a.set, budget=cfg.budget_tuples)
        payload = {"coeffs": list(a.coeffs), "set": set_payload(a.set), "cardinality": len(img)}
        if not a.no_image:
            payload["image"] = set_payload(img)
        return payload, True, None
    if sc == "triple":
        if len(a.f) != 2 or len(a.g) != 2:
            raise InvalidArgument("--f and --g take two coefficients u,v")
        f, g = forms.BinaryForm(*a.f), forms.BinaryForm(*a.g)
        res = forms.find_triple(f, g, a.max_diam, a.max_card, budget=cfg.budget_subsets)

        def slot(S):
            if S is None:
                return None
            return {"set": list(S.elements), "f_card": forms.image_card(f, S), "g_card": forms.image_card(g, S)}

        payload = {"f": list(a.f), "g": list(a.g), "A": slot(res.A), "B": slot(res.B), "C": slot(res.C),
                   "examined": res.examined, "note": "absent slots mean none within bounds, not nonexistence"}
        return payload, res.exhaustive, None
    if sc == "orosz":
        A, B = forms.orosz_witnesses(a.u, a.v)
        f, g = forms.BinaryForm(a.u, a.v), forms.BinaryForm(a.u, -a.v)
        payload = {
            "u": a.u, "v": a.v,
            "A": {"set": list(A.elements), "f_card": forms.image_card(f, A), "g_card": forms.image_card(g, A)},
            "B": {"set": list(B.elements), "f_card": forms.image_card(f, B), "g_card": forms.image_card(g, B)},
        }
        return payload, True, None
    raise InvalidArgument(f"unknown forms subcommand {sc}")


def cmd_poly(cfg: RunConfig):
    a = cfg.args
    if cfg.subcommand == "eval":
        img = poly.eval_poly_set(a.f.poly, a.set, budget=cfg.budget_tuples)
        return {"f": a.f.poly.to_text(), "regime": a.f.regime, "set": set_payload(a.set),
                "image": set_payload(img), "cardinality": len(img)}, True, None
    m = a.m
    if m < 2:
        raise InvalidArgument("modulus must be at least 2")
    payload = {"f": a.f.poly.to_text(), "m": m}
    exhaustive = True
    if a.g is not None:
        payload["g"] = a.g.poly.to_text()
    if a.set is not None:
        A = poly.ModSet.reduce(a.set, m)
        payload["set"] = list(A.residues)
        payload["f_image"] = list(poly.eval_poly_mod(a.f.poly, A, budget=cfg.budget_tuples).residues)
        if a.g is not None:
            payload["g_image"] = list(poly.eval_poly_mod(a.g.poly, A, budget=cfg.budget_tuples).residues)
    if a.probe:
        if a.g is None:
            raise InvalidArgument("--probe needs --g")
        rep = poly.probe_mfg(a.f.poly, a.g.poly, m, max_card=a.max_card, max_subsets=cfg.budget_subsets,
                             seed=a.seed, tuple_budget=cfg.budget_tuples)
        payload["probe"] = {
            "status": rep.status,
            "witness": list(rep.witness.residues) if rep.witness else None,
            "f_card": rep.f_card,
            "g_card": rep.g_card,
            "examined": rep.examined,
            "source": rep.source,
        }
        exhaustive = rep.status != "unknown-budget"
    if a.triple:
        if a.g is None:
            raise InvalidArgument("--triple needs --g")
        tri = poly.find_mod_triple(a.f.poly, a.g.poly, m, max_subsets=cfg.budget_subsets)
        payload["triple"] = {k: (list(S.residues) if S else None) for k, S in (("A", tri.A), ("B", tri.B), ("C", tri.C))}
    return payload, exhaustive, None


def cmd_repfn(cfg: RunConfig):
    a = cfg.args
    sc = cfg.subcommand
    if sc == "profile":
        prof = repfn.rep_profile(a.set, a.h, a.lo, a.hi)
        payload = {"set": set_payload(a.set), "h": a.h, "from": prof.lo, "to": prof.hi, "values": prof.values()}
        table = (["n", "r"], [[prof.lo + i, v] for i, v in enumerate(prof.values())])
        return payload, True, table
    if sc == "verify":
        target = repfn.RepTarget.load(a.target)
        rep = repfn.verify_target(a.set, a.h, target)
        payload = {
            "set": set_payload(a.set), "h": a.h, "passed": rep.passed, "first_failure": rep.first_failure,
            "rows": [{"n": r.n, "expected": r.expected, "observed": r.observed, "ok": r.ok} for r in rep.rows],
            "warnings": rep.warnings,
        }
        return payload, True, None
    if sc == "realize":
        target = repfn.RepTarget.load(a.target)
        if a.all:
            if a.h != 2:
                raise repfn.UnsupportedOrder(f"realization supports h = 2 only, got h = {a.h}")
            found, complete = repfn.all_realizers(target, a.bound, budget=cfg.budget_subsets)
            payload = {"bound": a.bound, "h": 2, "realizers": [list(S.elements) for S in found],
                       "status": "complete" if complete else "budget-exhausted"}
            return payload, complete, None
        res = repfn.realize_on_window(target, a.h, a.bound, budget=cfg.budget_subsets)
        payload = {"bound": a.bound, "h": a.h, "status": res.status, "nodes": res.nodes,
                   "set": list(res.set.elements) if res.set is not None else None}
        return payload, res.status != "budget-exhausted", None
    if sc == "count":
        return {"set": set_payload(a.set), "x": a.x, "count": repfn.counting_fn(a.set, a.x)}, True, None
    if sc == "density":
        fit = repfn.density_fit(a.set, list(a.samples))
        return {"alpha": fit.alpha, "intercept": fit.intercept, "residual": fit.residual,
                "samples": fit.samples, "label": fit.label}, None, None
    raise InvalidArgument(f"unknown repfn subcommand {sc}")


COMMANDS = {
    "verify": cmd_verify,
    "census": cmd_census,
    "search": cmd_search,
    "lift": cmd_lift,
    "forms": cmd_forms,
    "poly": cmd_poly,
    "repfn": cmd_repfn,
}


def execute(cfg: RunConfig) -> tuple[ResultEnvelope, Optional[tuple]]:
    start = time.perf_counter()
    out = COMMANDS[cfg.command](cfg)
    payload, exhaustive, table = out[:3]
    run = out[3] if len(out) > 3 else {}
    run.setdefault("elapsed_secs", round(time.perf_counter() - start, 3))
    name = cfg.command if cfg.subcommand is None else f"{cfg.command} {cfg.subcommand}"
    return ResultEnvelope(name, cfg.echo(), payload, exhaustive, run), table


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        cfg = parse_cli(argv)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return EXIT_OK if not exc.code else EXIT_USAGE
    logging.basicConfig(level=logging.INFO if cfg.args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        env, table = execute(cfg)
        text = render(env, cfg.fmt, table)
        if cfg.output is None:
            sys.stdout.write(text)
        else:
            write_text(text, cfg.output)
    except SumdiffError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
