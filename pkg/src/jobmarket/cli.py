"""Command-line entry point: one verb per pipeline stage plus ``paper-matrix``.

Exit codes: 0 success, 2 invalid input, 3 missing/stale upstream stage,
4 numerical failure.
"""

from __future__ import annotations

import argparse
import sys

from .config import PipelineConfig
from .errors import JobMarketError
from .pipeline import STAGES, Pipeline

VERBS = STAGES + ("paper-matrix",)


def _u64(text):
    try:
        value = int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError(f"seed must fit in 64 unsigned bits: {text}")
    return value


def _global_flags(parser, suppress):
    default = argparse.SUPPRESS if suppress else None
    parser.add_argument("--config", metavar="PATH", default=default, help="JSON config file")
    parser.add_argument("--seed", metavar="U64", type=_u64, default=default, help="master seed")
    parser.add_argument("--out", metavar="DIR", default=default, help="output directory")
    parser.add_argument("--force", action="store_true", default=argparse.SUPPRESS if suppress else False,
                        help="rerun even when outputs are up to date")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="jobmarket", description=__doc__.splitlines()[0])
    _global_flags(parser, suppress=False)
    sub = parser.add_subparsers(dest="verb", required=True, metavar="VERB")
    helps = {
        "generate": "write the synthetic listings CSV",
        "preprocess": "split rows and build the structured feature matrix",
        "featurize": "TF-IDF and fused text embeddings",
        "train-regression": "ridge / KNN / SVR salary models per feature set",
        "train-classification": "logistic regression / KNN title models per feature set",
        "cluster": "K-means sweep with Davies-Bouldin and cluster reports",
        "importance": "permutation importances",
        "report": "summary JSON and CSV tables",
        "paper-matrix": "run every stage and print the summary tables",
    }
    for verb in VERBS:
        p = sub.add_parser(verb, help=helps[verb])
        _global_flags(p, suppress=True)
    return parser


def _print_summary(summary, out=sys.stdout):
    print("regression (test NRMSE)", file=out)
    for r in summary["regression"]:
        print(f"  {r['feature_set']:<11} ridge={r['ridge_nrmse']:.3e}  knn={r['knn_nrmse']:.4f}  "
              f"svr={r['svr_nrmse']:.4f}", file=out)
    print("classification (test macro-F1)", file=out)
    for r in summary["classification"]:
        print(f"  {r['feature_set']:<11} logreg={r['logreg_macro_f1']:.4f} (C={r['logreg_C']})  "
              f"knn={r['knn_macro_f1']:.4f}", file=out)
    print("clustering (Davies-Bouldin)", file=out)
    for r in summary["clustering"]:
        print(f"  {r['feature_set']:<6} K={r['K']:<3} {r['davies_bouldin']:.4f}", file=out)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = PipelineConfig.load(args.config, seed=args.seed, out_dir=args.out)
        pipe = Pipeline(cfg, force=args.force, log=lambda m: print(m, file=sys.stderr))
        if args.verb == "paper-matrix":
            _print_summary(pipe.run_paper_matrix())
        else:
            res = pipe.run_stage(args.verb)
            print(f"{res.stage}: {res.status} -> {cfg.out_dir / res.stage}")
    except JobMarketError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    return 0


if __name__ == "__main__":
    sys.exit(main())
