"""
Command-line batch harness.

Subcommands::

    robustcontam bias-table   --preset dgp3,dgp4 --n 400 --reps 10000 --out t1.csv
    robustcontam scale-sweep  --lambda 0.6 --n 1000 --sigma-factor-grid 0.2,0.5,1 --out f1.csv
    robustcontam theory-report --rho tukey --lambda 0.8 --varrho 0 --out th.csv
    robustcontam verify       --out verify.csv

Every flag can also be given in a ``--config`` file of ``key=value`` lines
(``#`` starts a comment; keys use the flag name without dashes, e.g.
``sigma-factor-grid``).  Flags on the command line override the file.

CSV files have a header row and end with a ``#`` manifest line recording
the command, the resolved configuration, the seed, the repetitions and the
tool version.  Wall time goes to a sidecar ``<out>.manifest.json`` so the
CSV itself is reproducible byte for byte.

Exit codes: 0 success, 1 verification failure, 2 usage or I/O error.
"""

import argparse
import csv
import io
import json
import sys
import time

import numpy as np

from . import __version__, simulation, theory
from .dgp import PRESETS
from .exceptions import RobustContamError
from .numerics import ErrorLaw
from .rho import FAMILIES, RhoSpec

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_USAGE = 2


def _list_of(conv):
    def parse(text):
        try:
            return [conv(item) for item in str(text).split(",") if item.strip()]
        except ValueError as exc:
            raise argparse.ArgumentTypeError(str(exc)) from None
    parse.__name__ = f"list of {conv.__name__}"
    return parse


def _preset_name(text):
    text = text.strip()
    if text not in PRESETS:
        raise ValueError(f"unknown preset {text!r}")
    return text


def _add_common(p, reps=True, seed=True):
    p.add_argument("--config", help="key=value file providing flag defaults")
    p.add_argument("--out", required=False, help="output CSV path (default: stdout)")
    if reps:
        p.add_argument("--reps", type=int, default=10_000)
    if seed:
        p.add_argument("--seed", type=int, default=20250213, help="base seed (64-bit)")
    p.add_argument("--workers", type=int, default=1, help="worker processes")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="robustcontam",
        description="Monte Carlo harness for location M-estimators under contamination.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bias-table", help="bias of mean, median, Huber, Tukey and LTS")
    p.add_argument("--preset", type=_list_of(_preset_name), default="dgp1,dgp2,dgp3,dgp4,dgp5,dgp6")
    p.add_argument("--n", type=_list_of(int), default="25,100,400")
    p.add_argument("--scale", choices=("known", "iqr", "mad"), default="known")
    p.add_argument("--trim", choices=("known", "auto"), default="known")
    _add_common(p)

    p = sub.add_parser("scale-sweep", help="bias against the plug-in scale factor")
    p.add_argument("--lambda", dest="lam", type=float, default=0.6)
    p.add_argument("--n", type=int, default=1000)
    p.add_argument("--preset", type=_preset_name, default="dgp4",
                   help="base design whose good share is replaced by --lambda")
    p.add_argument("--sigma-factor-grid", type=_list_of(float),
                   default="0.2,0.3,0.4,0.45,0.5,0.55,0.6,0.7,0.8,0.9,1,1.1,1.2,1.3,1.4,1.6,1.8,2,2.5,3")
    _add_common(p)

    p = sub.add_parser("theory-report", help="consistency factors, thresholds, efficiency")
    p.add_argument("--rho", choices=FAMILIES, default="tukey")
    p.add_argument("--c", type=float, default=None, help="tuning constant (family default)")
    p.add_argument("--lambda", dest="lam", type=float, default=0.8)
    p.add_argument("--varrho", type=float, default=0.0)
    p.add_argument("--law", type=ErrorLaw.from_name, default="normal")
    p.add_argument("--sigma-factor-grid", type=_list_of(float),
                   default="0.25,0.5,0.75,1,1.5,2,4,10,100")
    p.add_argument("--efficiency", type=float, default=0.95)
    _add_common(p, reps=False, seed=False)

    p = sub.add_parser("verify", help="run the oracle self-checks")
    p.add_argument("--seed", type=int, default=20250213)
    p.add_argument("--mc-draws", type=int, default=10_000_000)
    p.add_argument("--config", help="key=value file providing flag defaults")
    p.add_argument("--out", help="output CSV path (default: stdout)")
    return parser


def _read_config(path):
    values = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key=value")
            key, value = (part.strip() for part in line.split("=", 1))
            values[key.lstrip("-").replace("-", "_")] = value
    return values


def _subparser(parser, command):
    for action in parser._subparsers._group_actions:
        if command in action.choices:
            return action.choices[command]
    raise KeyError(command)


def parse_args(argv=None):
    """Parse ``argv``, applying ``--config`` values as flag defaults."""
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "config", None):
        sub = _subparser(parser, args.command)
        try:
            values = _read_config(args.config)
        except OSError as exc:
            parser.error(f"cannot read config {args.config}: {exc.strerror}")
        except ValueError as exc:
            parser.error(str(exc))
        dests = {a.dest: a for a in sub._actions}
        # flag spelling --lambda stores into `lam`
        if "lambda" in values:
            values["lam"] = values.pop("lambda")
        unknown = sorted(set(values) - set(dests) - {"config"})
        if unknown:
            parser.error(f"unknown config keys: {', '.join(unknown)}")
        values.pop("config", None)
        sub.set_defaults(**values)
        args = parser.parse_args(argv)
    return args


def _manifest(args, command):
    skip = {"config", "out", "workers", "command"}
    snapshot = {}
    for key, value in sorted(vars(args).items()):
        if key in skip:
            continue
        if isinstance(value, list):
            value = ",".join(str(v) for v in value)
        snapshot[key] = str(value)
    return dict(command=command, config=snapshot, base_seed=getattr(args, "seed", None),
                repetitions=getattr(args, "reps", None), version=__version__)


def _fmt(value):
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    if isinstance(value, np.integer):
        return str(int(value))
    if value is None:
        return ""
    return str(value)


def render_csv(rows, columns, manifest):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_fmt(row.get(c)) for c in columns])
    cfg = ";".join(f"{k}={v}" for k, v in manifest["config"].items())
    buf.write(f"# manifest command={manifest['command']} base_seed={manifest['base_seed']} "
              f"repetitions={manifest['repetitions']} version={manifest['version']} "
              f"config={cfg}\n")
    return buf.getvalue()


def _emit(text, out, manifest, wall):
    if out is None:
        sys.stdout.write(text)
        return
    with open(out, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
    with open(out + ".manifest.json", "w", encoding="utf-8") as fh:
        json.dump(dict(manifest, wall_time_seconds=wall), fh, indent=2, sort_keys=True)
        fh.write("\n")


def cmd_bias_table(args):
    if args.reps < 100:
        raise RobustContamError("bias-table needs --reps >= 100")
    rows = simulation.bias_table(args.preset, args.n, args.reps, args.scale, args.trim,
                                 args.seed, args.workers)
    cols = ["estimator", "preset", "n", "reps", "scale", "trim", "bias", "abs_bias", "mc_se"]
    return rows, cols


def cmd_scale_sweep(args):
    rows, meta = simulation.scale_sweep(args.lam, args.n, args.reps, args.sigma_factor_grid,
                                        args.seed, args.workers, base=args.preset)
    rows = rows + [dict(varsigma=meta["red_line"], estimator="red_line", bias=None,
                        abs_bias=None, mc_se=None)]
    return rows, ["varsigma", "estimator", "bias", "abs_bias", "mc_se"]


def cmd_theory_report(args):
    spec = RhoSpec.from_name(args.rho, args.c)
    geometry = theory.ContaminationGeometry(args.lam, args.varrho, args.law)
    rows = simulation.theory_report(spec, geometry, args.sigma_factor_grid, args.efficiency)
    cols = ["quantity", "family", "c", "lam", "varrho", "law", "varsigma", "value",
            "formula", "note"]
    return rows, cols


def cmd_verify(args):
    rows = simulation.verify(seed=args.seed, mc_draws=args.mc_draws)
    for r in rows:
        r["status"] = "pass" if r["passed"] else "FAIL"
    return rows, ["check", "tolerance", "gap", "status"]


COMMANDS = {
    "bias-table": cmd_bias_table,
    "scale-sweep": cmd_scale_sweep,
    "theory-report": cmd_theory_report,
    "verify": cmd_verify,
}


def main(argv=None):
    args = parse_args(argv)
    start = time.perf_counter()
    try:
        rows, cols = COMMANDS[args.command](args)
    except (RobustContamError, ValueError) as exc:
        print(f"robustcontam {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    manifest = _manifest(args, args.command)
    text = render_csv(rows, cols, manifest)
    try:
        _emit(text, args.out, manifest, time.perf_counter() - start)
    except OSError as exc:
        print(f"robustcontam: cannot write {args.out}: {exc.strerror}", file=sys.stderr)
        return EXIT_USAGE
    if args.command == "verify":
        failed = [r["check"] for r in rows if not r["passed"]]
        for r in rows:
            print(f"{r['status']:4s}  {r['check']}  gap={r['gap']:.3g}  tol={r['tolerance']:.3g}",
                  file=sys.stderr)
        if failed:
            return EXIT_VERIFY_FAILED
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
