"""Command-line entry point.

Exit status: 0 on success, 1 on runtime failure (including a failed
check), 2 on usage or precondition errors.
"""
from __future__ import annotations

import argparse
import io
import json
import sys
from pathlib import Path

from . import classical, quantum
from .classical import BoundsConfig


class UsageError(ValueError):
    pass


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    with open(Path(out), "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _dump(doc) -> str:
    return json.dumps(doc, indent=2) + "\n"


def _cfg(args) -> BoundsConfig:
    kw = {"seed": args.seed}
    if args.restarts is not None:
        kw["restarts"] = args.restarts
    return BoundsConfig(**kw)


def cmd_bound(args) -> int:
    n, d = args.n, args.d
    if n < 3 or d < 2:
        raise UsageError(f"bound needs --n >= 3 and --d >= 2, got n={n}, d={d}")
    res = classical.minimize(n, d, _cfg(args))
    closed, status = classical.certification(n, d)
    if args.format == "csv":
        buf = io.StringIO()
        mode = f"numeric({d})"
        classical.write_sweep_csv([classical.SweepRow(n, mode, res.best_value, "numeric")], buf)
        text = buf.getvalue()
    else:
        text = _dump(
            {
                "n": n,
                "d": d,
                "numeric": res.to_dict(),
                "closed_form": closed,
                "certification": status,
            }
        )
    _emit(text, args.out)
    if res.restarts_run and res.converged_restarts == 0:
        print(
            f"error: none of {res.restarts_run} restarts converged within "
            "the iteration limit",
            file=sys.stderr,
        )
        return 1
    return 0


def cmd_sweep(args) -> int:
    modes = [m for m in args.mode.split(",") if m.strip()]
    rows = classical.sweep(args.n_min, args.n_max, modes, _cfg(args))
    if args.format == "json":
        text = classical.sweep_json(rows)
    else:
        buf = io.StringIO()
        classical.write_sweep_csv(rows, buf)
        text = buf.getvalue()
    _emit(text, args.out)
    return 0


def _require_odd_m(m: int) -> None:
    if m < 3 or m % 2 == 0:
        raise UsageError(f"--m must be odd and >= 3 for the certified witness family, got {m}")


def cmd_quantum(args) -> int:
    _require_odd_m(args.m)
    state = quantum.ghz_history_state(args.m)
    words = quantum.temporal_witness_family(args.m)
    report = quantum.verify_ghz_paradox(state, words)
    doc = {
        "m": args.m,
        "n": len(words),
        "witnesses": [str(w) for w in words],
        "expectations": [z.real for z in report.eigenvalues],
        "product": report.quantum_product.real,
        "report": report.to_dict(),
    }
    _emit(_dump(doc), args.out)
    return 0


def cmd_verify(args) -> int:
    if args.words:
        words = [quantum.WitnessWord.parse(w, 2) for w in args.words.split(",")]
    else:
        _require_odd_m(args.m)
        words = quantum.temporal_witness_family(args.m)
    if any(w.m != args.m for w in words):
        raise UsageError(f"every word must have length --m={args.m}")
    report = quantum.verify_ghz_paradox(quantum.ghz_history_state(args.m), words)
    doc = {"m": args.m, "witnesses": [str(w) for w in words], "report": report.to_dict()}
    _emit(_dump(doc), args.out)
    return 0 if report.is_paradox else 1


def cmd_nogo(args) -> int:
    if args.d % 2 == 0:
        raise UsageError(f"the no-go check is for odd dimensions, got d={args.d}")
    report = quantum.odd_dimension_nogo_check(args.d, args.m, args.pool, seed=args.seed)
    _emit(_dump(report.to_dict()), args.out)
    return 1 if report.minus_one_found else 0


def cmd_classify(args) -> int:
    if not -1.0 <= args.value <= 1.0:
        raise UsageError(f"--value must lie in [-1, 1], got {args.value}")
    mode = args.mode or "qubit"
    verdict = classical.classify(args.value, args.n, mode)
    bound = (
        classical.closed_form_qubit_min(args.n)
        if mode == "qubit"
        else classical.closed_form_continuous_min(args.n)
    )
    doc = {"value": args.value, "n": args.n, "mode": mode, "bound": bound, "verdict": verdict.value}
    _emit(_dump(doc), args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="temporal-ghz",
        description="Classical bounds and quantum witnesses for temporal GHZ tests.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, fmt=("json",)):
        p.add_argument("--out", help="write output here instead of stdout")
        p.add_argument("--format", choices=fmt, default=fmt[0])
        p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("bound", help="numeric and closed-form minimum of E_t(n, d)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--restarts", type=int)
    common(p, ("json", "csv"))
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("sweep", help="table of minima over a range of n")
    p.add_argument("--n-min", type=int, required=True)
    p.add_argument("--n-max", type=int, required=True)
    p.add_argument("--mode", default="qubit,continuous",
                   help="comma-separated: qubit, continuous, numeric(D) or numeric:D")
    p.add_argument("--restarts", type=int)
    common(p, ("csv", "json"))
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("quantum", help="GHZ history witnesses and their product")
    p.add_argument("--m", type=int, required=True)
    common(p)
    p.set_defaults(func=cmd_quantum)

    p = sub.add_parser("verify", help="check a witness family for a GHZ paradox")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--words", help="comma-separated words such as XXX,XYY,YXY,YYX")
    common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("nogo", help="odd-dimension eigenvalue -1 search")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--pool", type=int, default=20, help="number of random words")
    common(p)
    p.set_defaults(func=cmd_nogo)

    p = sub.add_parser("classify", help="compare a measured value with the classical bound")
    p.add_argument("--value", type=float, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--mode", choices=("qubit", "continuous"), default="qubit")
    common(p)
    p.set_defaults(func=cmd_classify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
