"""Command line front end.

Three subcommands:

  screen     rank the covariates of a dataset CSV by dependence with the
             censored response, write the ranking and a manifest.
  simulate   run a replicated screening experiment from a scenario file,
             write per-replication records (and optionally the datasets).
  evaluate   aggregate a records CSV into the summary metrics at a
             chosen cutoff, without re-simulating.

Exit codes: 0 success, 2 parse or validation failure, 3 degenerate data,
4 bad flags, 5 censoring calibration failure.

The default for --jobs is the SURVSCREEN_JOBS environment variable when
set, otherwise the number of logical cores. Replication streams are
fixed by (seed, replication index), so --jobs never changes output bytes.
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from . import __version__
from .dataio import (
    build_manifest,
    read_dataset,
    read_records,
    read_scenario,
    sha256_file,
    write_dataset,
    write_manifest,
    write_ranking,
    write_records,
    write_summary,
)
from .evaluate import (
    METHODS,
    QUANTILE_CONVENTION,
    run_experiment,
    summarize_records,
)
from .exceptions import (
    CalibrationError,
    DegenerateDataError,
    ParseError,
    ValidationError,
)
from .kernels import KERNEL_FAMILIES, KernelSpec
from .screening import ScreenResult, dc_utility, default_cutoff, screen
from .simulate import RNG_STREAM_ID, censoring_scale, generate

JOBS_ENV_VAR = "SURVSCREEN_JOBS"


class _Parser(argparse.ArgumentParser):
    """argparse parser whose usage errors exit with code 4."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(4)


def _default_jobs() -> int:
    raw = os.environ.get(JOBS_ENV_VAR)
    if raw is None:
        return os.cpu_count() or 1
    try:
        jobs = int(raw)
    except ValueError:
        jobs = 0
    return jobs  # validated against >= 1 where it is used


def build_parser() -> _Parser:
    parser = _Parser(
        prog="survscreen",
        description="Kernel dependence screening for censored survival data.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_screen = sub.add_parser(
        "screen",
        help="rank covariates of a dataset CSV",
        description="Rank the covariates of a dataset CSV and write "
        "(covariate, utility, rank, selected) sorted by rank.",
    )
    p_screen.add_argument("--input", required=True, help="dataset CSV to read")
    p_screen.add_argument("--out", required=True, help="ranking CSV to write")
    p_screen.add_argument(
        "--dn", type=int, default=None, help="cutoff; default floor(n / ln n)"
    )
    p_screen.add_argument(
        "--kernel", choices=KERNEL_FAMILIES, default="gaussian",
        help="kernel family for both covariates and response",
    )
    p_screen.add_argument(
        "--gamma", type=float, default=2.0, help="kernel bandwidth (default 2)"
    )
    p_screen.add_argument(
        "--method", choices=METHODS, default="hsic", help="screening utility"
    )
    p_screen.add_argument(
        "--standardize-covariates", action="store_true",
        help="standardize each covariate column before screening",
    )
    p_screen.add_argument(
        "--manifest", default=None, help="manifest path (default <out>.manifest.json)"
    )
    p_screen.set_defaults(func=cmd_screen)

    p_sim = sub.add_parser(
        "simulate",
        help="run a replicated screening experiment",
        description="Generate replications of a scenario, screen each one, "
        "and write a records CSV into --out-dir.",
    )
    p_sim.add_argument("--scenario", required=True, help="scenario config file")
    p_sim.add_argument("--out-dir", required=True, help="output directory")
    p_sim.add_argument(
        "--replications", type=int, default=None,
        help="override the scenario file's replication count",
    )
    p_sim.add_argument(
        "--jobs", type=int, default=None,
        help=f"worker threads (default ${JOBS_ENV_VAR} or logical cores)",
    )
    p_sim.add_argument(
        "--method", choices=METHODS, default="hsic", help="screening utility"
    )
    p_sim.add_argument(
        "--write-datasets", action="store_true",
        help="also write each replication's dataset CSV under <out-dir>/datasets/",
    )
    p_sim.set_defaults(func=cmd_simulate)

    p_eval = sub.add_parser(
        "evaluate",
        help="summarize a records CSV",
        description="Aggregate replication records into median/IQR of S and "
        "the selection proportions at a cutoff.",
    )
    p_eval.add_argument("--records", required=True, help="records CSV to read")
    p_eval.add_argument("--out", required=True, help="summary CSV to write")
    p_eval.add_argument(
        "--dn", type=int, default=None,
        help="cutoff; default floor(n / ln n) from each scenario's n",
    )
    p_eval.set_defaults(func=cmd_evaluate)

    return parser


def cmd_screen(parser: _Parser, args) -> int:
    if args.dn is not None and args.dn < 1:
        parser.error(f"--dn must be positive, got {args.dn}")
    if args.kernel in ("gaussian", "laplacian") and args.gamma <= 0:
        parser.error(f"--gamma must be positive, got {args.gamma}")

    data = read_dataset(args.input)
    d_n = min(default_cutoff(data.n), data.p) if args.dn is None else args.dn
    spec = KernelSpec(family=args.kernel, gamma=args.gamma)
    if args.method == "hsic":
        result = screen(
            data,
            spec_z=spec,
            spec_y=spec,
            d_n=d_n,
            standardize_covariates=args.standardize_covariates,
        )
    else:
        omega = dc_utility(data, standardize_covariates=args.standardize_covariates)
        ranking = np.argsort(-omega, kind="stable")
        result = ScreenResult(
            omega=omega,
            ranking=ranking,
            selected=ranking[:d_n],
            d_n=d_n,
            spec_z=None,
            spec_y=None,
        )
    write_ranking(args.out, result)

    manifest = build_manifest(
        command="screen",
        version=__version__,
        inputs={os.path.basename(args.input): sha256_file(args.input)},
        params={
            "method": args.method,
            "kernel": {"family": args.kernel, "gamma": args.gamma},
            "d_n": d_n,
            "n": data.n,
            "p": data.p,
            "standardize_covariates": bool(args.standardize_covariates),
        },
    )
    write_manifest(args.manifest or args.out + ".manifest.json", manifest)
    return 0


def cmd_simulate(parser: _Parser, args) -> int:
    jobs = _default_jobs() if args.jobs is None else args.jobs
    if jobs < 1:
        parser.error(f"--jobs must be a positive integer, got {jobs}")
    if args.replications is not None and args.replications < 1:
        parser.error(f"--replications must be positive, got {args.replications}")

    config = read_scenario(args.scenario)
    scenario = config.scenario
    replications = (
        config.replications if args.replications is None else args.replications
    )
    os.makedirs(args.out_dir, exist_ok=True)

    scale = censoring_scale(scenario)
    records, summary = run_experiment(
        scenario, method=args.method, replications=replications, parallelism=jobs
    )
    records_path = os.path.join(args.out_dir, "records.csv")
    write_records(records_path, records, scenario.active_set)

    if args.write_datasets:
        ds_dir = os.path.join(args.out_dir, "datasets")
        os.makedirs(ds_dir, exist_ok=True)
        for r in range(replications):
            write_dataset(
                os.path.join(ds_dir, f"rep{r:05d}.csv"),
                generate(scenario, r).dataset,
            )

    manifest = build_manifest(
        command="simulate",
        version=__version__,
        inputs={os.path.basename(args.scenario): sha256_file(args.scenario)},
        params={
            "scenario_id": scenario.default_id,
            "model": scenario.model,
            "n": scenario.n,
            "p": scenario.p,
            "censoring": scenario.censoring,
            "target_cr": scenario.target_cr,
            "rho": scenario.rho,
            "seed": scenario.seed,
            "replications": replications,
            "method": args.method,
            "censoring_scale": scale,
            "realized_cr_mean": float(np.mean([r.realized_cr for r in records])),
            "d_n": summary.d_n,
        },
        rng_stream=RNG_STREAM_ID,
        quantile_convention=QUANTILE_CONVENTION,
    )
    write_manifest(os.path.join(args.out_dir, "manifest.json"), manifest)
    return 0


def cmd_evaluate(parser: _Parser, args) -> int:
    if args.dn is not None and args.dn < 1:
        parser.error(f"--dn must be positive, got {args.dn}")

    records, active_set = read_records(args.records)
    if not records:
        raise ValidationError("records file has no data rows")

    groups: dict[str, list] = {}
    for r in records:
        groups.setdefault(r.scenario_id, []).append(r)
    summaries = []
    for sid, group in groups.items():
        d_n = default_cutoff(group[0].n) if args.dn is None else args.dn
        summaries.append(summarize_records(group, active_set, d_n))
    write_summary(args.out, summaries, active_set)

    manifest = build_manifest(
        command="evaluate",
        version=__version__,
        inputs={os.path.basename(args.records): sha256_file(args.records)},
        params={
            "dn": args.dn,
            "scenarios": {s.scenario_id: s.d_n for s in summaries},
        },
        quantile_convention=QUANTILE_CONVENTION,
    )
    write_manifest(args.out + ".manifest.json", manifest)
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(parser, args)
    except (ParseError, ValidationError, FileNotFoundError) as exc:
        print(f"survscreen: error: {exc}", file=sys.stderr)
        return 2
    except (DegenerateDataError, OverflowError) as exc:
        print(f"survscreen: error: {exc}", file=sys.stderr)
        return 3
    except CalibrationError as exc:
        print(f"survscreen: error: {exc}", file=sys.stderr)
        return 5


if __name__ == "__main__":
    sys.exit(main())
