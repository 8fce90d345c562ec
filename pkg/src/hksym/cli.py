"""Command-line front end.

Subcommands: ``verify`` runs the full check campaign, ``roots`` prints
the restricted-root tables, and ``eval`` prints the operator fields at
one point for debugging.  Exit codes: 0 all checks passed (including
fault-injection controls detecting their faults), 1 check failure,
2 configuration error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import json
import sys
from datetime import datetime, timezone

import numpy as np

from .fields import B_op, P_op, make_domain_point, make_params, upsilon_star
from .hermitian import parse_space
from .verify import Campaign, build_context, run_campaign

__all__ = ["main", "report_emit"]


def _parse_params_text(text):
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 4:
        raise ValueError(
            f"params must be four comma-separated values a0,a1,a2,eps; "
            f"got {text!r}"
        )
    a0, a1, a2 = (float(p) for p in parts[:3])
    eps_text = parts[3]
    if eps_text in ("+1", "1"):
        eps = 1
    elif eps_text == "-1":
        eps = -1
    else:
        raise ValueError(f"eps must be +1 or -1, got {eps_text!r}")
    return (a0, a1, a2, eps)


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="hksym",
        description=(
            "Construct compact Hermitian symmetric pairs and numerically "
            "certify the invariant hyperkahler structures on their "
            "tangent-bundle domains."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, with_params=True):
        p.add_argument(
            "--space",
            action="append",
            metavar="SPEC",
            help="space such as su:1,2 or sp:2 (repeatable)",
        )
        if with_params:
            p.add_argument(
                "--params",
                action="append",
                metavar="a0,a1,a2,+/-1",
                help="parameter quadruple (repeatable)",
            )
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--samples", type=int, default=100)
        p.add_argument("--format", choices=("text", "json"), default="text")
        p.add_argument("--out", metavar="PATH", default=None)

    verify_p = sub.add_parser("verify", help="run the verification campaign")
    common(verify_p)
    verify_p.add_argument("--tol-alg", type=float, default=None)
    verify_p.add_argument("--tol-fd", type=float, default=None)
    verify_p.add_argument(
        "--config",
        metavar="PATH",
        default=None,
        help="JSON file whose keys mirror the flags",
    )

    roots_p = sub.add_parser(
        "roots", help="print the restricted-root tables"
    )
    common(roots_p, with_params=False)

    eval_p = sub.add_parser(
        "eval", help="print the operator fields at one point"
    )
    common(eval_p)
    eval_p.add_argument(
        "--x",
        metavar="x1,x2,...",
        default=None,
        help="radial coordinates; sampled from the seed when omitted",
    )
    return parser


def report_emit(report, fmt="text", out=None, stream=None):
    """Render a campaign report as text or JSON, to a file or stream."""
    checks = report.get("checks", [])
    if not checks:
        raise ValueError("refusing to emit a report with no checks")
    if fmt == "json":
        text = json.dumps(report, sort_keys=True, indent=2) + "\n"
    else:
        lines = []
        header = (
            f"{'space':10s} {'params':18s} {'check':34s} "
            f"{'residual':>12s} {'threshold':>10s} {'status':>6s}"
        )
        lines.append(header)
        lines.append("-" * len(header))
        for c in checks:
            lines.append(
                f"{c['space']:10s} {(c['params'] or '-'):18s} "
                f"{c['check_id']:34s} {c['max_residual']:12.3e} "
                f"{c['threshold']:10.0e} "
                f"{'PASS' if c['passed'] else 'FAIL':>6s}"
            )
        n_fail = sum(1 for c in checks if not c["passed"])
        lines.append(
            f"{len(checks)} checks, {len(checks) - n_fail} passed, "
            f"{n_fail} failed (seed {report.get('seed')})"
        )
        text = "\n".join(lines) + "\n"
    if out is not None:
        with open(out, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        (stream or sys.stdout).write(text)


def _cmd_verify(args):
    if args.config is not None:
        with open(args.config, encoding="utf-8") as handle:
            config = json.load(handle)
        for key in ("space", "params"):
            if key in config and getattr(args, key) is None:
                setattr(args, key, list(config[key]))
        for key in ("seed", "samples", "tol_alg", "tol_fd", "format", "out"):
            if key in config:
                setattr(args, key, config[key])
    spaces = args.space or ["su:1,1", "su:1,2", "su:2,2", "sp:2"]
    for space in spaces:
        parse_space(space)  # fail fast on grammar errors
    param_tuples = None
    if args.params:
        param_tuples = tuple(_parse_params_text(p) for p in args.params)
        # validate against every requested space's type before running
        for space in spaces:
            ctx = build_context(space)
            for tup in param_tuples:
                make_params(*tup, ctx.rrs.type_tag)
    campaign = Campaign(
        seed=args.seed,
        spaces=tuple(spaces),
        param_tuples=param_tuples,
        samples=args.samples,
        tol_alg=args.tol_alg,
        tol_fd=args.tol_fd,
    )
    report = run_campaign(campaign)
    report["timestamp"] = datetime.now(timezone.utc).isoformat()
    report_emit(report, fmt=args.format, out=args.out)
    return 0 if report["all_passed"] else 1


def _cmd_roots(args):
    spaces = args.space or ["su:1,1", "su:1,2", "su:2,2", "sp:2"]
    out = []
    for space in spaces:
        ctx = build_context(space)
        rrs = ctx.rrs
        entry = {
            "space": ctx.space,
            "type": f"{rrs.type_tag}{rrs.rank}",
            "rank": rrs.rank,
            "dim_m": ctx.pair.dim_m,
            "roots": [
                {
                    "root": root.label(),
                    "half_coeffs": list(root.half_coeffs),
                    "multiplicity": root.multiplicity,
                    "partner": (
                        None
                        if root.partner is None
                        else list(root.partner)
                    ),
                }
                for root in rrs.roots
            ],
        }
        out.append(entry)
    if args.format == "json":
        text = json.dumps(out, sort_keys=True, indent=2) + "\n"
    else:
        lines = []
        for entry in out:
            lines.append(
                f"{entry['space']}: type {entry['type']}, "
                f"rank {entry['rank']}, dim m = {entry['dim_m']}"
            )
            lines.append(
                f"  {'root':16s} {'mult':>4s}  partner"
            )
            for root in entry["roots"]:
                partner = (
                    "(cartan)"
                    if root["partner"] is None
                    else str(tuple(root["partner"]))
                )
                lines.append(
                    f"  {root['root']:16s} {root['multiplicity']:4d}  "
                    f"{partner}"
                )
        text = "\n".join(lines) + "\n"
    if args.out is not None:
        with open(args.out, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _cmd_eval(args):
    spaces = args.space or ["su:1,1"]
    if len(spaces) != 1:
        raise ValueError("eval expects exactly one --space")
    ctx = build_context(spaces[0])
    tuples = args.params or ["1,0,0,+1"]
    if len(tuples) != 1:
        raise ValueError("eval expects exactly one --params")
    params = make_params(*_parse_params_text(tuples[0]), ctx.rrs.type_tag)
    rank = ctx.sos.rank
    if args.x is not None:
        x = np.array([float(v) for v in args.x.split(",")])
        if len(x) != rank:
            raise ValueError(
                f"expected {rank} radial coordinates, got {len(x)}"
            )
    else:
        rng = np.random.default_rng(args.seed)
        lo = max(params.a_dagger, 0.0) + 0.25
        x = np.sqrt(rng.uniform(lo, lo + 3.0, size=rank))
    point = make_domain_point(ctx.pair, ctx.sos, x)
    if not point.in_domain(params):
        raise ValueError(
            f"point x = {x.tolist()} lies outside the domain "
            f"(requires x_j^2 > {params.a_dagger:g})"
        )
    dec = P_op(ctx.pair, point.w, params)
    u = upsilon_star(ctx.pair, point.w).matrix
    b = B_op(ctx.pair, point.w, params).matrix
    payload = {
        "space": ctx.space,
        "params": str(params),
        "x": x.tolist(),
        "P_real": dec.R.tolist(),
        "P_imag": dec.S.tolist(),
        "B": b.tolist(),
        "upsilon_star": u.tolist(),
    }
    if args.format == "json":
        text = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    else:
        with np.printoptions(precision=6, suppress=True, linewidth=120):
            text = (
                f"space {ctx.space}, params {params}, x = {x.tolist()}\n"
                f"R = Re P:\n{dec.R}\n"
                f"S = Im P:\n{dec.S}\n"
                f"B:\n{b}\n"
                f"derivative of the inverse field:\n{u}\n"
            )
    if args.out is not None:
        with open(args.out, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)
    return 0


def main(argv=None):
    parser = _build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "verify": _cmd_verify,
        "roots": _cmd_roots,
        "eval": _cmd_eval,
    }
    try:
        return handlers[args.command](args)
    except (ValueError, KeyError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
