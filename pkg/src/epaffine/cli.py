"""Command-line entry point: ``ep <subcommand> ...``.

Human-readable text goes to stdout, one verdict per line.  ``--report PATH``
writes the same result as JSON.  Exit codes: 0 ok, 1 bad input, 2
discrepancy, 3 data required, 4 cap exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from . import epengine as ep
from .gf2core import GF2Error
from .grpact import DEFAULT_CAP_DIM, DEFAULT_CAP_ORDER, CapExceeded, load_group, tiny_maximal_subgroups
from .repfunctors import parse_tag
from .weights import ExponentMultiset, SpinExponentVector, max_wedge_dim_over_order_r, spin_fixed_dim, wedge_fixed_dim

EXIT_OK, EXIT_INPUT, EXIT_DISCREPANCY, EXIT_DATA, EXIT_CAP = 0, 1, 2, 3, 4


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would exit 2, which means "discrepancy" here
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


@dataclass
class RunConfig:
    subcommand: str
    options: dict[str, Any] = field(default_factory=dict)
    cap_dim: int = DEFAULT_CAP_DIM
    cap_order: int = DEFAULT_CAP_ORDER
    seed: int = 0
    report: str | None = None

    def __post_init__(self) -> None:
        if self.cap_dim < 1 or self.cap_order < 1:
            raise ValueError("caps must be positive")


def _ints(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise InputError(f"expected comma-separated integers, got {text!r}") from exc


def _part(text: str) -> tuple[int, int]:
    cap, sep, count = text.partition(":")
    if not sep:
        raise InputError(f"expected CAP:COUNT, got {text!r}")
    try:
        return int(cap), int(count)
    except ValueError as exc:
        raise InputError(f"expected CAP:COUNT, got {text!r}") from exc


def _verdict_dict(v: ep.Verdict) -> dict[str, Any]:
    return {"verdict": v.kind, "reason": v.reason, "certificate": v.certificate}


def _cmd_direct(cfg: RunConfig) -> tuple[int, list[str], dict]:
    o = cfg.options
    h = load_group(o["group"])
    tag = parse_tag(o.get("tag") or "natural")
    v = ep.direct_ep_check(h, tag, cap_dim=cfg.cap_dim, seed=cfg.seed)
    return EXIT_OK, [f"{v.kind}\t{v.reason}"], _verdict_dict(v)


def _cmd_fvalue(cfg: RunConfig) -> tuple[int, list[str], dict]:
    ds = ep.load_dataset(cfg.options["dataset"])
    v, report = ep.dataset_verdict(ds)
    lines = [f"{c.label}\tsize={c.class_size}\tfix_dim={c.fix_dim}\tcontribution={c.contribution}"
             for c in report.classes]
    lines.append(f"f = {report.total}")
    lines.append(f"{v.kind}\t{v.reason}")
    rep = {"group": ds.group, "d": report.d, "f": str(report.total),
           "classes": [{"label": c.label, "class_size": str(c.class_size), "fix_dim": c.fix_dim,
                        "contribution": str(c.contribution)} for c in report.classes],
           **_verdict_dict(v)}
    return EXIT_OK, lines, rep


def _cmd_bound(cfg: RunConfig) -> tuple[int, list[str], dict]:
    o = cfg.options
    v = ep.corollary_check(o["alpha"], o["d"])
    return EXIT_OK, [f"{v.kind}\tlhs={v.certificate['lhs']}\trhs={v.certificate['rhs']}"], _verdict_dict(v)


def _cmd_refined(cfg: RunConfig) -> tuple[int, list[str], dict]:
    o = cfg.options
    parts = [_part(p) for p in o["part"]]
    v, total = ep.refined_bound_check(parts, o["d"])
    return EXIT_OK, [f"{v.kind}\tsum={total}\trhs={v.certificate['rhs']}"], {"sum": str(total), **_verdict_dict(v)}


def _cmd_wedge_dim(cfg: RunConfig) -> tuple[int, list[str], dict]:
    o = cfg.options
    e = ExponentMultiset.of(o["r"], _ints(o["exponents"]))
    dim = wedge_fixed_dim(e, o["m"])
    return EXIT_OK, [str(dim)], {"r": e.r, "exponents": list(e.entries), "m": o["m"], "fixed_dim": dim}


def _cmd_spin_dim(cfg: RunConfig) -> tuple[int, list[str], dict]:
    o = cfg.options
    s = SpinExponentVector(o["r"], tuple(_ints(o["t"])), o["kind"])
    dim = spin_fixed_dim(s)
    return EXIT_OK, [str(dim)], {"r": s.r, "t": list(s.t), "kind": s.kind, "fixed_dim": dim}


def _cmd_max_wedge(cfg: RunConfig) -> tuple[int, list[str], dict]:
    o = cfg.options
    w = max_wedge_dim_over_order_r(o["k"], o["r"], o["m"])
    lines = [str(w.max) if w.exists else "none"]
    lines += ["witness\t" + ",".join(map(str, e.entries)) for e in w.witnesses]
    return EXIT_OK, lines, {"k": w.k, "r": w.r, "max": w.max,
                            "witnesses": [list(e.entries) for e in w.witnesses]}


def _cmd_tiny(cfg: RunConfig) -> tuple[int, list[str], dict]:
    h = load_group(cfg.options["group"])
    classes = tiny_maximal_subgroups(h, cap=cfg.cap_order)
    lines = [f"{c.label}\torder={c.order}\tclass_size={c.class_size}" for c in classes]
    lines.append(f"total = {sum(c.class_size for c in classes)}")
    rep = {"classes": [{"label": c.label, "order": c.order, "class_size": c.class_size,
                        "generators": [[format(r, f"0{h.dim}b")[::-1] for r in g.data] for g in c.generators]}
                       for c in classes]}
    return EXIT_OK, lines, rep


def _cmd_audit(cfg: RunConfig) -> tuple[int, list[str], dict]:
    path = Path(cfg.options["registry"])
    records = ep.load_registry(path)
    report = ep.audit_registry(records, base=path.parent)
    lines = [r.line() for r in report.results]
    lines.append(f"# {len(report.results)} cases, {len(report.discrepancies)} discrepancies, "
                 f"{len(report.data_required)} data-required")
    return report.exit_code(cfg.options.get("require_data", False)), lines, report.to_dict()


COMMANDS = {
    "direct": _cmd_direct,
    "fvalue": _cmd_fvalue,
    "bound": _cmd_bound,
    "refined-bound": _cmd_refined,
    "wedge-dim": _cmd_wedge_dim,
    "spin-dim": _cmd_spin_dim,
    "max-wedge": _cmd_max_wedge,
    "tiny-maximals": _cmd_tiny,
    "audit": _cmd_audit,
}


def run(cfg: RunConfig, out=None) -> tuple[int, dict]:
    """Dispatch one subcommand; returns (exit code, machine-readable report)."""
    out = out or sys.stdout
    try:
        code, lines, rep = COMMANDS[cfg.subcommand](cfg)
    except CapExceeded as exc:
        code, lines, rep = EXIT_CAP, [f"error\t{exc}"], {"error": str(exc), "kind": "cap"}
    except ep.DataIntegrityError as exc:
        code, lines, rep = EXIT_DISCREPANCY, [f"error\t{exc}"], {"error": str(exc), "kind": "integrity"}
    except (InputError, GF2Error, ValueError, OSError, json.JSONDecodeError) as exc:
        code, lines, rep = EXIT_INPUT, [f"error\t{exc}"], {"error": str(exc), "kind": "input"}
    for ln in lines:
        print(ln, file=out)
    rep = {"subcommand": cfg.subcommand, "exit_code": code, **rep}
    if cfg.report:
        Path(cfg.report).write_text(json.dumps(rep, indent=1, sort_keys=True) + "\n", encoding="utf-8")
    return code, rep


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--cap-dim", type=int, default=DEFAULT_CAP_DIM, help="largest module dimension for orbit work")
    common.add_argument("--cap-order", type=int, default=DEFAULT_CAP_ORDER, help="largest group order to enumerate")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--report", help="write a JSON report here")

    p = _Parser(prog="ep", description="Extreme primitivity of affine groups over F_2.")
    sub = p.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)

    s = sub.add_parser("direct", parents=[common], help="check the definition orbit by orbit")
    s.add_argument("--group", required=True)
    s.add_argument("--tag", default="natural", help="natural, wedgeM or tensor(a,b)")

    s = sub.add_parser("fvalue", parents=[common], help="f(H) from a maximal-class dataset")
    s.add_argument("--dataset", required=True)

    s = sub.add_parser("bound", parents=[common], help="counting bound from |M(H)|")
    s.add_argument("--alpha", type=int, required=True)
    s.add_argument("--d", type=int, required=True)

    s = sub.add_parser("refined-bound", parents=[common], help="bound from per-part fixed-space caps")
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--part", action="append", required=True, metavar="CAP:COUNT")

    s = sub.add_parser("wedge-dim", parents=[common], help="fixed dim on an exterior power")
    s.add_argument("--r", type=int, required=True)
    s.add_argument("--exponents", required=True)
    s.add_argument("--m", type=int, default=3)

    s = sub.add_parser("spin-dim", parents=[common], help="fixed dim on a spin module")
    s.add_argument("--kind", choices=["B", "Deven", "Dodd"], default="B")
    s.add_argument("--r", type=int, required=True)
    s.add_argument("--t", required=True)

    s = sub.add_parser("max-wedge", parents=[common], help="largest wedge fixed dim over elements of order r")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--r", type=int, required=True)
    s.add_argument("--m", type=int, default=3)

    s = sub.add_parser("tiny-maximals", parents=[common], help="maximal subgroup classes of a small group")
    s.add_argument("--group", required=True)

    s = sub.add_parser("audit", parents=[common], help="re-derive every case in a registry")
    s.add_argument("--registry", required=True)
    s.add_argument("--require-data", action="store_true",
                   help="exit 3 whenever a case relies on a reported value instead of shipped data")
    return p


def main(argv=None) -> int:
    args = vars(build_parser().parse_args(argv))
    sub = args.pop("subcommand")
    caps = {k: args.pop(k) for k in ("cap_dim", "cap_order", "seed", "report")}
    try:
        cfg = RunConfig(subcommand=sub, options=args, **caps)
    except ValueError as exc:
        print(f"error\t{exc}", file=sys.stderr)
        return EXIT_INPUT
    code, _ = run(cfg)
    return code


if __name__ == "__main__":
    sys.exit(main())
