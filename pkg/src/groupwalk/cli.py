"""Command-line entry point: ``groupwalk {run,evaluate,sweep,synth}``."""

from __future__ import annotations

import argparse
import contextlib
import json
import sys
import time

from . import io, synth
from .errors import GroupWalkError
from .pipeline import DEFAULT_A_GRID, DEFAULT_B_GRID, RunConfig, evaluate, run, sweep
from .similarity import SimilarityParams
from .tracking import KalmanConfig


@contextlib.contextmanager
def _open(path, mode="r"):
    if path == "-":
        yield sys.stdin if "r" in mode else sys.stdout
    else:
        with open(path, mode, encoding="utf-8", newline="\n") as fh:
            yield fh


def _grid(text):
    try:
        return tuple(float(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _add_config_flags(p):
    g = p.add_argument_group("engine parameters")
    g.add_argument("-a", type=float, default=8.0, help="scale-factor slope (default 8)")
    g.add_argument("-b", type=float, default=10.0, help="scale-factor offset (default 10)")
    g.add_argument("--eigengap-coef", type=float, default=0.8)
    g.add_argument("--meas-noise", type=float, default=10.0)
    g.add_argument("--proc-noise-pos", type=float, default=10.0)
    g.add_argument("--proc-noise-vel", type=float, default=2.0)
    g.add_argument("--init-cov-pos", type=float, default=100.0)
    g.add_argument("--init-cov-vel", type=float, default=25.0)
    g.add_argument("--seed", type=int, default=0, help="k-means seed")
    g.add_argument("--max-gap", type=int, default=10,
                   help="frames a track may go unseen before it is dropped")
    g.add_argument("--burn-in", type=int, default=15,
                   help="leading frames excluded from scoring")


def _config(args) -> RunConfig:
    return RunConfig(
        params=SimilarityParams(args.a, args.b),
        kalman=KalmanConfig(args.meas_noise, args.proc_noise_pos, args.proc_noise_vel,
                            args.init_cov_pos, args.init_cov_vel),
        eigengap_coef=args.eigengap_coef,
        seed=args.seed,
        max_gap=args.max_gap,
        burn_in=args.burn_in,
    )


def cmd_run(args):
    config = _config(args)
    with _open(args.detections) as src, _open(args.output, "w") as out:
        for result in run(io.read_detections(src), config):
            out.write(io.format_frame(result) + "\n")
            if args.output == "-":
                out.flush()


def _load(args):
    with _open(args.detections) as src:
        frames = list(io.read_detections(src))
    with _open(args.truth) as src:
        truth = io.read_ground_truth(src)
    return frames, truth


def cmd_evaluate(args):
    frames, truth = _load(args)
    report = evaluate(frames, truth, _config(args)).as_dict()
    if not args.per_frame:
        report.pop("per_frame")
    with _open(args.output, "w") as out:
        json.dump(report, out, indent=2)
        out.write("\n")


def cmd_sweep(args):
    frames, truth = _load(args)
    t0 = time.perf_counter()
    reports = sweep(frames, truth, args.a_grid, args.b_grid, _config(args), jobs=args.jobs)
    with _open(args.output, "w") as out:
        out.write("a\tb\tmean_ami\tprecision\trecall\n")
        for r in reports:
            c = r.config
            out.write(f"{c['a']:g}\t{c['b']:g}\t{r.mean_ami:.6f}\t{r.precision:.6f}\t{r.recall:.6f}\n")
    print(f"{len(reports)} cells in {time.perf_counter() - t0:.2f}s", file=sys.stderr)


def cmd_synth(args):
    if args.scenario:
        with _open(args.scenario) as fh:
            spec = synth.spec_from_dict(json.load(fh))
    else:
        kwargs = {"seed": args.seed}
        if args.frames is not None:
            kwargs["frames"] = args.frames
        if args.noise is not None:
            kwargs["obs_noise"] = args.noise
        spec = synth.PRESETS[args.preset](**kwargs)
    scenario = synth.generate(spec)
    with _open(args.detections, "w") as out:
        io.write_detections(scenario.frames(), out)
    if args.truth:
        with _open(args.truth, "w") as out:
            io.write_ground_truth(enumerate(scenario.ground_truth), out)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="groupwalk",
        description="Online group-walking event detection from tracked bounding boxes.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="cluster each frame and emit events (JSON lines)")
    p.add_argument("detections", help="detections file (frame,id,x,y,w,h); '-' for stdin")
    p.add_argument("-o", "--output", default="-")
    _add_config_flags(p)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("evaluate", help="score against ground truth with mean AMI")
    p.add_argument("detections")
    p.add_argument("truth", help="ground-truth file (frame,id,group)")
    p.add_argument("-o", "--output", default="-")
    p.add_argument("--per-frame", action="store_true", help="include the per-frame AMI series")
    _add_config_flags(p)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("sweep", help="mean AMI over a grid of (a, b)")
    p.add_argument("detections")
    p.add_argument("truth")
    p.add_argument("-o", "--output", default="-")
    p.add_argument("--a-grid", type=_grid, default=DEFAULT_A_GRID)
    p.add_argument("--b-grid", type=_grid, default=DEFAULT_B_GRID)
    p.add_argument("--jobs", type=int, default=1)
    _add_config_flags(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("synth", help="write a synthetic scenario")
    p.add_argument("preset", nargs="?", default="three-groups", choices=sorted(synth.PRESETS))
    p.add_argument("--scenario", help="JSON scenario description (overrides preset)")
    p.add_argument("--detections", default="-")
    p.add_argument("--truth")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--frames", type=int)
    p.add_argument("--noise", type=float, help="observation noise sigma in pixels")
    p.set_defaults(func=cmd_synth)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except (GroupWalkError, ValueError, OSError) as exc:
        print(f"groupwalk: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
