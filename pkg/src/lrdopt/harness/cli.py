"""Command-line entry point.

Subcommands:
    run SPEC        execute a spec (toy or classification by its problem)
    toy SPEC        execute a spec's toy trajectory study
    sweep SPEC      re-run a spec across keep-probability values
    report DIR      aggregate finished learning curves into a table
    verify          self-check: gradient oracles and the grid argmin scan
    bench           time the compiled kernels against the numpy fallback

Exit codes: 0 success, 2 usage or malformed/missing spec, 1 runtime failure.
"""

import argparse
import sys

from ..errors import LrdoptError, SpecError
from .experiment import ExperimentSpec


def _add_spec_arg(parser):
    parser.add_argument("spec", help="path to an experiment spec JSON file")
    parser.add_argument("--output", help="override the spec's output directory")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="lrdopt",
        description="Learning-rate-dropout optimizer benchmarks",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    _add_spec_arg(sub.add_parser("run", help="run a spec end to end"))
    _add_spec_arg(sub.add_parser("toy", help="run a spec's toy trajectory study"))

    sweep = sub.add_parser("sweep", help="sweep a dropout probability")
    _add_spec_arg(sweep)
    sweep.add_argument("--param", choices=("p", "p_sd"), required=True,
                       help="p: learning-rate keep prob; p_sd: hidden-unit retention")
    sweep.add_argument("--values", required=True,
                       help="comma-separated values in (0, 1]")

    report = sub.add_parser("report", help="aggregate a finished run directory")
    report.add_argument("run_dir")
    report.add_argument("--output", help="also write the table as CSV here")

    verify = sub.add_parser("verify", help="run the built-in oracle checks")
    verify.add_argument("--grid-resolution", type=int, default=2000)
    verify.add_argument("--gradient-samples", type=int, default=1000)
    verify.add_argument("--seed", type=int, default=0)

    bench = sub.add_parser("bench", help="compare kernel backends")
    bench.add_argument("--elements", type=int, default=1_000_000)
    bench.add_argument("--steps", type=int, default=20)
    return parser


def _load_spec(path, output=None):
    try:
        spec = ExperimentSpec.load(path)
    except FileNotFoundError:
        print(f"error: spec file not found: {path}", file=sys.stderr)
        raise SystemExit(2)
    except SpecError as exc:
        print(f"error: {exc}", file=sys.stderr)
        raise SystemExit(2)
    if output:
        spec = spec.with_overrides(output_dir=output)
    return spec


def _cmd_run(args):
    from .runner import run_spec

    spec = _load_spec(args.spec, args.output)
    run_spec(spec)
    print(f"run complete: {spec.output_dir}")
    return 0


def _cmd_toy(args):
    from .runner import run_toy, toy_reach_fractions

    spec = _load_spec(args.spec, args.output)
    if spec.problem != "toy":
        print("error: spec field 'problem': toy subcommand needs problem='toy'",
              file=sys.stderr)
        return 2
    rows = run_toy(spec)
    for arm, frac in sorted(toy_reach_fractions(rows).items()):
        print(f"{arm}: reached optimum in {frac:.1%} of runs")
    print(f"run complete: {spec.output_dir}")
    return 0


def _cmd_sweep(args):
    from .runner import run_sweep

    spec = _load_spec(args.spec, args.output)
    try:
        values = [float(v) for v in args.values.split(",") if v.strip()]
    except ValueError:
        print(f"error: --values must be comma-separated floats: {args.values!r}",
              file=sys.stderr)
        return 2
    run_sweep(spec, args.param, values)
    print(f"sweep complete: {spec.output_dir}")
    return 0


def _cmd_report(args):
    from .report import aggregate, format_table

    rows = aggregate(args.run_dir, out_path=args.output)
    print(format_table(rows))
    return 0


def _cmd_verify(args):
    from ..gradcheck import max_relative_gradient_error, mlp_gradient_error
    from ..rng import Rng
    from ..toyfn import verify_reference_optimum

    rng = Rng(args.seed)
    toy_err = max_relative_gradient_error(rng.child_named("toy-points"),
                                          samples=args.gradient_samples)
    print(f"toy gradient vs central differences: max relative error {toy_err:.3e}")

    mlp_err = mlp_gradient_error(rng.child_named("mlp-check"))
    print(f"mlp backprop vs central differences: max relative error {mlp_err:.3e}")

    report = verify_reference_optimum(resolution=args.grid_resolution)
    ax, ay = report.argmin_point
    print(f"grid argmin ({report.resolution[0]}x{report.resolution[1]}): "
          f"({ax:.4f}, {ay:.4f}), value {report.argmin_value:.6f}, "
          f"distance to reference {report.distance_to_reference:.4f}")

    ok = toy_err <= 1e-6 and mlp_err <= 1e-6 and report.within(0.05)
    print("verify: PASS" if ok else "verify: FAIL")
    return 0 if ok else 1


def _cmd_bench(args):
    from .._kernels.bench import format_rows, run_benchmark

    rows = run_benchmark(elements=args.elements, steps=args.steps)
    print(format_rows(rows))
    return 0


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    handler = {
        "run": _cmd_run,
        "toy": _cmd_toy,
        "sweep": _cmd_sweep,
        "report": _cmd_report,
        "verify": _cmd_verify,
        "bench": _cmd_bench,
    }[args.command]
    try:
        return handler(args)
    except SystemExit as exc:
        return exc.code
    except SpecError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (LrdoptError, FileNotFoundError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def entry():
    sys.exit(main())


if __name__ == "__main__":
    entry()
