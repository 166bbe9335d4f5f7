"""Command-line front end: ``coinwalk run | verify | figure1``."""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

from . import analytic, lattice_walk, montecarlo
from .coinspace import ChannelParams, CoinParams, coin_state
from .distribution import AmplitudeList, Distribution
from .errors import CoinwalkError, InvariantError
from .output import distribution_csv, distribution_svg, stats_json
from .superop import in_classical_regime
from .verify import run_all

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_USAGE = 2
EXIT_NUMERICAL = 3

SUM_TOL = 1e-8

COIN_STATES = {
    "R": (1.0, 0.0),
    "L": (0.0, 1.0),
    "plus": (1.0, 1.0),
    "minus": (1.0, -1.0),
    "plus-i": (1.0, 1j),
    "minus-i": (1.0, -1j),
}


class UsageError(Exception):
    pass


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="coinwalk",
        description="Discrete-time quantum walks on a line under a coin flip channel.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="simulate one configuration and write its distribution")
    run.add_argument("--engine", choices=["exact", "mc", "classical", "analytic"], default="exact")
    run.add_argument("--theta", type=float, default=math.pi / 4, help="coin angle (default pi/4)")
    run.add_argument("--phi1", type=float, default=0.0)
    run.add_argument("--phi2", type=float, default=0.0)
    run.add_argument("--phi3", type=float, default=0.0, help="flip-channel phase")
    run.add_argument("--p", type=float, default=0.5, help="decoherence probability in [0, 1]")
    run.add_argument("--degrees", action="store_true", help="read angles in degrees")
    run.add_argument("--steps", type=int, default=100)
    run.add_argument("--trials", type=int, default=1000, help="trajectories (mc, classical)")
    run.add_argument("--seed", type=int, default=0)
    run.add_argument("--x0", type=int, default=0, help="starting site for a local start")
    run.add_argument("--coin-state", choices=sorted(COIN_STATES) + ["mixed"], default="R")
    run.add_argument("--initial-file", type=Path, help='JSON list of {"x", "a": [re, im], "b": [re, im]}')
    run.add_argument("--out", type=Path, help="output path stem; files get .csv/.json/.svg suffixes")
    run.add_argument(
        "--format",
        action="append",
        choices=["csv", "json", "svg"],
        help="output format, repeatable (default: csv and json)",
    )
    run.add_argument("--workers", type=int, default=1, help=argparse.SUPPRESS)

    ver = sub.add_parser("verify", help="run the cross-engine verification suite")
    ver.add_argument("--max-t", type=int, default=None, help="cap every time horizon (quick run)")
    ver.add_argument("--inject-fault", action="store_true", help=argparse.SUPPRESS)

    fig = sub.add_parser("figure1", help="classical vs decoherent-walk histograms at p = 1/2")
    fig.add_argument("--seed", type=int, default=0)
    fig.add_argument("--trials", type=int, default=1000)
    fig.add_argument("--steps", type=int, default=100)
    fig.add_argument("--out", type=Path, default=Path("figure1"), help="output directory")
    return parser


def _angles(args: argparse.Namespace) -> tuple[CoinParams, ChannelParams]:
    conv = math.radians if args.degrees else float
    coin = CoinParams(conv(args.theta), conv(args.phi1), conv(args.phi2))
    chan = ChannelParams(args.p, conv(args.phi3))
    return coin, chan


def _initial(args: argparse.Namespace) -> AmplitudeList | None:
    if args.initial_file is None:
        return None
    try:
        items = json.loads(args.initial_file.read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read initial state: {exc}") from exc
    return AmplitudeList.from_json(items)


def _local_density(args: argparse.Namespace):
    if args.coin_state == "mixed":
        return coin_state(1, 0) * 0.5 + coin_state(0, 1) * 0.5
    return coin_state(*COIN_STATES[args.coin_state])


def _simulate(args: argparse.Namespace) -> tuple[Distribution, Distribution | None]:
    """Return (distribution, analytic reference or None)."""
    if args.steps < 0:
        raise UsageError("--steps must be >= 0")
    if args.trials < 1:
        raise UsageError("--trials must be >= 1")
    coin, chan = _angles(args)
    amps = _initial(args)
    if amps is not None and args.coin_state != "R":
        raise UsageError("--coin-state cannot be combined with --initial-file")

    if amps is not None:
        reference = analytic.nonlocal_distribution(amps, args.steps)
    else:
        reference = analytic.binomial_distribution(args.steps, args.x0)

    if args.engine == "analytic":
        return reference, None

    if args.engine == "classical":
        if amps is not None:
            raise UsageError("the classical engine starts from a single site; drop --initial-file")
        res = montecarlo.classical_rw_mc(args.trials, args.steps, args.seed, workers=args.workers)
        d = res.distribution
        return Distribution(d.x_min + args.x0, d.probs, d.t), reference

    if args.engine == "exact":
        state = lattice_walk.init_nonlocal(amps) if amps is not None else lattice_walk.init_local(args.x0, _local_density(args))
        dist = lattice_walk.position_marginal(lattice_walk.evolve(state, coin, chan, args.steps, check=True))
    else:
        if amps is None:
            if args.coin_state == "mixed":
                raise UsageError("the mc engine needs a pure initial state")
            a, b = COIN_STATES[args.coin_state]
            n = math.sqrt(abs(a) ** 2 + abs(b) ** 2)
            amps = AmplitudeList.local(args.x0, a / n, b / n)
        cfg = montecarlo.McConfig(coin, chan, args.steps, args.trials, args.seed, amps)
        dist = montecarlo.run_mc(cfg, workers=args.workers).distribution
    return dist, (reference if in_classical_regime(coin, chan) else None)


def _emit(text: str, path: Path | None) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text)


def cmd_run(args: argparse.Namespace) -> int:
    dist, reference = _simulate(args)
    drift = abs(dist.total() - 1.0)
    if drift > SUM_TOL:
        raise InvariantError(f"distribution sums to 1 {'+' if dist.total() > 1 else '-'} {drift:.3e}")
    st = analytic.stats(dist)
    tv = analytic.tv_distance(dist, reference) if reference is not None else None
    seed = args.seed if args.engine in ("mc", "classical") else None
    formats = args.format or ["csv", "json"]
    stem = args.out.with_suffix("") if args.out is not None and args.out.suffix in (".csv", ".json", ".svg") else args.out
    for fmt in dict.fromkeys(formats):
        if fmt == "csv":
            text = distribution_csv(dist)
        elif fmt == "json":
            text = stats_json(args.engine, args.steps, st.mean, st.sigma, tv, seed)
        else:
            text = distribution_svg(
                dist,
                overlay=reference if args.engine != "analytic" else None,
                title=f"{args.engine} engine, t = {args.steps}",
                caption=f"sigma = {st.sigma:.4f}",
            )
        _emit(text, None if stem is None else stem.with_name(f"{stem.name}.{fmt}"))
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    if args.max_t is not None and args.max_t < 1:
        raise UsageError("--max-t must be >= 1")
    results = run_all(max_t=args.max_t, fault=args.inject_fault, report=print)
    failed = [r.name for r in results if not r.passed]
    if failed:
        print(f"verification FAILED: {', '.join(failed)}")
        return EXIT_VERIFY_FAILED
    print(f"all {len(results)} checks passed")
    return EXIT_OK


def cmd_figure1(args: argparse.Namespace) -> int:
    if args.trials < 1 or args.steps < 0:
        raise UsageError("--trials must be >= 1 and --steps >= 0")
    out: Path = args.out
    out.mkdir(parents=True, exist_ok=True)
    theory = analytic.binomial_distribution(args.steps)
    crw = montecarlo.classical_rw_mc(args.trials, args.steps, args.seed)
    qw = montecarlo.run_mc(
        montecarlo.McConfig(CoinParams(math.pi / 4), ChannelParams(0.5, 0.0), args.steps, args.trials, args.seed)
    )
    panels = [
        ("a", "classical", "Classical random walk", "CRW", crw),
        ("b", "quantum", "Quantum walk with coin decoherence, p = 1/2", "QW", qw),
    ]
    for tag, name, title, label, res in panels:
        caption = f"sigma_{label} = {res.sigma:.4f} ({args.trials} trials, t = {args.steps}); dotted: theory"
        (out / f"{name}.csv").write_text(distribution_csv(res.distribution))
        (out / f"panel_{tag}_{name}.svg").write_text(distribution_svg(res.distribution, theory, f"({tag}) {title}", caption))
        print(f"panel ({tag}) {name}: sigma_{label} = {res.sigma:.4f}")
    (out / "theory.csv").write_text(distribution_csv(theory))
    print(f"theory: sigma = {analytic.stats(theory).sigma:.4f}")
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    handler = {"run": cmd_run, "verify": cmd_verify, "figure1": cmd_figure1}[args.command]
    try:
        return handler(args)
    except InvariantError as exc:
        print(f"coinwalk: numerical invariant violated: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (UsageError, CoinwalkError, ValueError) as exc:
        print(f"coinwalk: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
