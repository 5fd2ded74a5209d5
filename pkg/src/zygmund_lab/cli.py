"""Command line entry point: ``zygmund-lab {classify,error-table,regime-fit,lemmas}``.

Exit codes: 0 success, 2 classification undetermined, 3 numeric failure.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

from .errors import NUMERIC_ERRORS
from .harness import (ExperimentConfig, cmd_classify, cmd_error_table, cmd_lemmas, dyadic,
                      plot_data, regime_fit, table_json)
from .norms import QuadratureConfig, reports_to_csv
from .weights import ClassSpec, RegimeLabel, classify_regime, parse_weight

EXIT_OK = 0
EXIT_UNDETERMINED = 2
EXIT_NUMERIC = 3


def _write(path, text):
    if path:
        Path(path).write_text(text)


def _class_args(p):
    p.add_argument("--psi", required=True, help='weight config, e.g. "kind=power r=0.75"')
    p.add_argument("--p", type=float, default=2.0)
    p.add_argument("--s", type=float, default=1.0)


def _table_args(p):
    _class_args(p)
    p.add_argument("--beta", type=float, default=0.0)
    p.add_argument("--n-min", type=int, default=2)
    p.add_argument("--n-max", type=int, default=1024)
    p.add_argument("--fejer", action="store_true", help="use Fejer means (requires s = 1)")
    p.add_argument("--panels", type=int, default=64)
    p.add_argument("--rel-tol", type=float, default=1e-10)
    p.add_argument("--t-min", type=float, default=None)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out-csv")
    p.add_argument("--out-json")
    p.add_argument("--plot-data")


def build_parser():
    parser = argparse.ArgumentParser(prog="zygmund-lab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    c = sub.add_parser("classify", help="class labels and the predicted order")
    _class_args(c)
    c.add_argument("--out-json")
    _table_args(sub.add_parser("error-table", help="exact errors, witnesses and predictions over n"))
    r = sub.add_parser("regime-fit", help="log-log slope against the predicted order")
    _table_args(r)
    lm = sub.add_parser("lemmas", help="tail-sum and partial-sum inequality sweeps")
    lm.add_argument("--n-max", type=int, default=1024)
    lm.add_argument("--lemma2-n-max", type=int, default=2 ** 16)
    lm.add_argument("--x-points", type=int, default=256)
    lm.add_argument("--out-csv")
    lm.add_argument("--out-json")
    return parser


def _experiment(args) -> ExperimentConfig:
    psi = parse_weight(args.psi)
    spec = ClassSpec(psi, args.beta, args.p, args.s)
    cfg = QuadratureConfig(panels=args.panels, rel_tol=args.rel_tol, t_min=args.t_min)
    outputs = {k: v for k, v in (("csv", args.out_csv), ("json", args.out_json),
                                 ("plot_data", args.plot_data)) if v}
    return ExperimentConfig(spec, dyadic(args.n_min, args.n_max), cfg,
                            "fejer" if args.fejer else "zygmund", outputs, args.seed, args.jobs)


def run_classify(args, out):
    report = cmd_classify(parse_weight(args.psi), args.p, args.s)
    text = json.dumps(report, indent=2, allow_nan=True)
    out.write(text + "\n")
    _write(args.out_json, text + "\n")
    return EXIT_UNDETERMINED if report["regime"] == RegimeLabel.UNDETERMINED.value else EXIT_OK


def _table(args, out):
    ec = _experiment(args)
    classification = cmd_classify(ec.spec.psi, ec.spec.p, ec.spec.s)
    regime = RegimeLabel(classification["regime"])
    if regime is RegimeLabel.UNDETERMINED:
        out.write(json.dumps(classification, indent=2, allow_nan=True) + "\n")
        return ec, None, classification, EXIT_UNDETERMINED
    reports = cmd_error_table(ec, regime)
    code = EXIT_NUMERIC if any(r.failure for r in reports) else EXIT_OK
    return ec, reports, classification, code


def run_error_table(args, out):
    ec, reports, classification, code = _table(args, out)
    if reports is None:
        return code
    csv_text = reports_to_csv(reports)
    out.write(csv_text)
    _write(args.out_csv, csv_text)
    _write(args.out_json, table_json(ec, reports, classification))
    _write(args.plot_data, plot_data(reports))
    return code


def run_regime_fit(args, out):
    ec, reports, classification, code = _table(args, out)
    if reports is None:
        return code
    good = [r for r in reports if math.isfinite(r.exact_error)]
    rec = regime_fit(ec.spec, [r.n for r in good], [r.exact_error for r in good],
                     classification["branch"])
    text = json.dumps({"config": ec.resolved(), "fit": rec.to_dict(),
                       "note": "slope tolerance 0.1 for branches 1-2 (slowly varying corrections), "
                               "0.05 for branch 3"}, indent=2, allow_nan=True)
    out.write(text + "\n")
    _write(args.out_json, text + "\n")
    _write(args.out_csv, reports_to_csv(reports))
    _write(args.plot_data, plot_data(reports))
    return code


def run_lemmas(args, out):
    results, csv_text, summary = cmd_lemmas(args.n_max, args.lemma2_n_max, args.x_points)
    summary["config"] = {"n_max": args.n_max, "lemma2_n_max": args.lemma2_n_max,
                         "x_points": args.x_points}
    text = json.dumps(summary, indent=2, allow_nan=True)
    out.write(text + "\n")
    _write(args.out_csv, csv_text)
    _write(args.out_json, text + "\n")
    return EXIT_NUMERIC if summary["violations"] else EXIT_OK


COMMANDS = {"classify": run_classify, "error-table": run_error_table,
            "regime-fit": run_regime_fit, "lemmas": run_lemmas}


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args, out)
    except NUMERIC_ERRORS as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
