"""``twistlab <experiment-id> [--param value]... [--out report.json] [--csv table.csv] [--seed N]``.

Parameter values come from the command line, then ``TWISTLAB_<PARAM>``
environment variables, then built-in defaults.  Exit status: 0 when every
check passes, 1 when a check fails, 2 on usage or configuration errors.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import xlab

ENV_PREFIX = "TWISTLAB_"


def _caster(default):
    if isinstance(default, bool):
        return lambda s: s.lower() in ("1", "true", "yes")
    if isinstance(default, list):
        elem = _caster(default[0]) if default else float
        return lambda s: [elem(v) for v in s.split(",") if v.strip()]
    if isinstance(default, int):
        return int
    if isinstance(default, float):
        return float
    return str


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="twistlab", description="Run a twistlab experiment.")
    sub = parser.add_subparsers(dest="experiment", metavar="experiment-id", required=True)
    for eid, exp in xlab.EXPERIMENTS.items():
        sp = sub.add_parser(eid, help=f"run {eid}")
        for key, default in exp.defaults.items():
            sp.add_argument(f"--{key.replace('_', '-')}", dest=key, type=_caster(default), default=None)
        sp.add_argument("--seed", type=int, default=None)
        sp.add_argument("--out", default=None, help="write the JSON report here")
        sp.add_argument("--csv", default=None, help="write the result table here")
    return parser


def _env_params(eid: str) -> dict:
    defaults = dict(xlab.EXPERIMENTS[eid].defaults)
    defaults.setdefault("seed", xlab.DEFAULT_SEED)
    out = {}
    for key, default in defaults.items():
        raw = os.environ.get(ENV_PREFIX + key.upper())
        if raw is not None:
            out[key] = _caster(default)(raw)
    return out


def main(argv=None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    eid = ns.experiment
    try:
        params = _env_params(eid)
    except ValueError as exc:
        print(f"twistlab: bad environment value: {exc}", file=sys.stderr)
        return 2
    for key, val in vars(ns).items():
        if key in ("experiment", "out", "csv") or val is None:
            continue
        params[key] = val
    try:
        report = xlab.run(eid, params)
    except (xlab.ConfigError, ValueError) as exc:
        print(f"twistlab: {exc}", file=sys.stderr)
        return 2
    text = report.to_json()
    try:
        if ns.out:
            with open(ns.out, "w", encoding="utf-8") as fh:
                fh.write(text + "\n")
        if ns.csv:
            xlab.emit_csv(report, ns.csv)
    except OSError as exc:
        print(f"twistlab: cannot write output: {exc}", file=sys.stderr)
        return 2
    for c in report.checks:
        print(f"{'PASS' if c.passed else 'FAIL'}  {c.name}  value={c.value:.6g}  threshold={c.threshold:.6g}")
    print(f"{eid}: {'PASS' if report.passed else 'FAIL'} ({report.seconds:.2f}s)")
    return 0 if report.passed else 1


if __name__ == "__main__":
    sys.exit(main())
