"""Command-line surface: ``mrf corrupt | restore | evaluate | generate | oracle``.

Temperatures are supplied as ``T`` and converted to ``beta = 1/T``
internally.  Exit codes: 0 success, 2 usage or configuration error, 3 image
parse error, 4 capacity (state space too large) error.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import dataclass

import numpy as np

from .channels import BinarySymmetric, ChannelModel, Gaussian, Poisson, QarySymmetric, degrade
from .errors import CapacityError, PgmParseError
from .estimators import run_restoration
from .image import GrayImage
from .metrics import Distance, GemenMcClure, IsingPotts, Prior, evaluate_images
from .oracle import exact_marginals, posterior_csv_rows
from .pgm import read_pgm, write_pgm
from .posterior import PosteriorSpec
from .rng import make_rng
from .robot import generate_robot
from .samplers import SamplerKind, SweepReport

_DISTANCES = {
    "hamming": Distance.HAMMING,
    "kl": Distance.SYMMETRIC_KL,
    "poisson": Distance.POISSON_NLL,
}
_ESTIMATES = ("map", "mpm", "tpm")


@dataclass(frozen=True)
class RunConfig:
    """Validated knob set for one restoration run."""

    command: str
    temperature: float
    sweeps: int
    burn_in: int | None
    seed: int
    q: int
    sampler: SamplerKind | None = None
    prior: Prior | None = None
    distance: Distance | None = None
    channel: ChannelModel | None = None
    input_path: str | None = None
    output_path: str | None = None

    def __post_init__(self):
        if not self.temperature > 0:
            raise ValueError(f"temperature must be positive, got {self.temperature}")
        if self.q < 2:
            raise ValueError(f"need at least 2 gray levels, got q={self.q}")
        if self.sweeps < 0:
            raise ValueError(f"sweep count must be nonnegative, got {self.sweeps}")
        if self.burn_in is not None and not 0 <= self.burn_in <= self.sweeps:
            raise ValueError(
                f"need sweeps >= burn-in >= 0, got sweeps={self.sweeps}, burn-in={self.burn_in}"
            )

    @property
    def beta(self) -> float:
        return 1.0 / self.temperature


def _prior_from_args(args: argparse.Namespace) -> Prior:
    if args.prior == "gm":
        return GemenMcClure(args.gm_width)
    return IsingPotts()


def _channel_from_args(args: argparse.Namespace) -> ChannelModel:
    if args.channel == "bsc":
        return BinarySymmetric(args.p)
    if args.channel == "qary":
        return QarySymmetric(args.p)
    if args.channel == "gaussian":
        return Gaussian(alpha=args.alpha, sigma=args.sigma)
    return Poisson()


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mrf",
        description="Bayesian MCMC restoration of noisy quantized images.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="emit a synthetic test image as PGM")
    gen.add_argument("--kind", choices=["robot"], default="robot")
    gen.add_argument("--w", type=int, required=True)
    gen.add_argument("--h", type=int, required=True)
    gen.add_argument("--q", type=int, default=2)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--out", required=True)
    gen.add_argument("--ascii", action="store_true", help="write P2 instead of P5")

    cor = sub.add_parser("corrupt", help="push an image through a noise channel")
    cor.add_argument("--in", dest="input", required=True)
    cor.add_argument("--out", required=True)
    cor.add_argument("--channel", choices=["bsc", "qary", "gaussian", "poisson"], required=True)
    cor.add_argument("--p", type=float, default=0.05, help="replacement probability (bsc/qary)")
    cor.add_argument("--alpha", type=float, default=1.0, help="gaussian gain")
    cor.add_argument("--sigma", type=float, default=1.0, help="gaussian noise scale")
    cor.add_argument("--q", type=int, default=2)
    cor.add_argument("--seed", type=int, default=0)
    cor.add_argument("--ascii", action="store_true")

    res = sub.add_parser("restore", help="run one MCMC restoration chain")
    res.add_argument("--in", dest="input", required=True)
    res.add_argument("--out", required=True)
    res.add_argument(
        "--sampler",
        choices=[k.value for k in SamplerKind],
        default="greedy",
    )
    res.add_argument("--prior", choices=["ising", "potts", "gm"], default="ising")
    res.add_argument("--gm-width", type=float, default=1.0)
    res.add_argument("--distance", choices=sorted(_DISTANCES), default="hamming")
    res.add_argument("--T", type=float, required=True, dest="temperature")
    res.add_argument("--q", type=int, default=2)
    res.add_argument("--sweeps", type=int, default=500)
    res.add_argument("--burn-in", type=int, default=None, dest="burn_in")
    res.add_argument("--seed", type=int, default=0)
    res.add_argument("--trace", default=None, help="write per-sweep diagnostics CSV here")
    res.add_argument("--estimate", choices=_ESTIMATES, default="map")
    res.add_argument("--ascii", action="store_true")

    ev = sub.add_parser("evaluate", help="compare two images, emit JSON metrics")
    ev.add_argument("--a", required=True, help="ground truth PGM")
    ev.add_argument("--b", required=True, help="estimate PGM")
    ev.add_argument("--q", type=int, default=2)
    ev.add_argument("--out", default=None, help="write JSON here instead of stdout")

    orc = sub.add_parser("oracle", help="exact marginals by exhaustive enumeration")
    orc.add_argument("--w", type=int, required=True)
    orc.add_argument("--h", type=int, required=True)
    orc.add_argument("--q", type=int, default=2)
    orc.add_argument("--T", type=float, required=True, dest="temperature")
    orc.add_argument("--prior", choices=["ising", "potts", "gm"], default="ising")
    orc.add_argument("--gm-width", type=float, default=1.0)
    orc.add_argument("--distance", choices=sorted(_DISTANCES), default="hamming")
    orc.add_argument("--ref", default=None, help="observed PGM (default: all-zero image)")
    orc.add_argument("--out", required=True, help="marginals CSV path")
    orc.add_argument("--states", default=None, help="also dump (state, probability) CSV here")
    return parser


def _write_trace(path: str, reports: list[SweepReport]) -> None:
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["sweep_index", "log_posterior", "accepted_moves", "cluster_count"])
        for r in reports:
            writer.writerow(
                [
                    r.sweep_index,
                    repr(r.log_posterior),
                    r.accepted_moves,
                    "" if r.cluster_count is None else r.cluster_count,
                ]
            )


def _cmd_generate(args: argparse.Namespace) -> int:
    image = generate_robot(args.w, args.h, args.q, args.seed)
    write_pgm(image, args.out, ascii_format=args.ascii)
    return 0


def _cmd_corrupt(args: argparse.Namespace) -> int:
    config = RunConfig(
        command="corrupt",
        temperature=1.0,
        sweeps=0,
        burn_in=None,
        seed=args.seed,
        q=args.q,
        channel=_channel_from_args(args),
        input_path=args.input,
        output_path=args.out,
    )
    image = read_pgm(config.input_path, config.q)
    noisy = degrade(image, config.channel, make_rng(config.seed))
    write_pgm(noisy, config.output_path, ascii_format=args.ascii)
    return 0


def _cmd_restore(args: argparse.Namespace) -> int:
    config = RunConfig(
        command="restore",
        temperature=args.temperature,
        sweeps=args.sweeps,
        burn_in=args.burn_in,
        seed=args.seed,
        q=args.q,
        sampler=SamplerKind(args.sampler),
        prior=_prior_from_args(args),
        distance=_DISTANCES[args.distance],
        input_path=args.input,
        output_path=args.out,
    )
    observed = read_pgm(config.input_path, config.q)
    spec = PosteriorSpec(config.prior, config.distance, config.beta, observed)
    result = run_restoration(
        spec,
        config.sampler,
        config.sweeps,
        burn_in=config.burn_in,
        rng=make_rng(config.seed),
        trace=args.trace is not None,
    )
    write_pgm(result.estimate(args.estimate), config.output_path, ascii_format=args.ascii)
    if args.trace is not None:
        _write_trace(args.trace, result.reports)
    return 0


def _cmd_evaluate(args: argparse.Namespace) -> int:
    truth = read_pgm(args.a, args.q)
    estimate = read_pgm(args.b, args.q)
    payload = json.dumps(evaluate_images(truth, estimate), indent=2)
    if args.out is None:
        print(payload)
    else:
        with open(args.out, "w") as handle:
            handle.write(payload + "\n")
    return 0


def _cmd_oracle(args: argparse.Namespace) -> int:
    if args.ref is not None:
        reference = read_pgm(args.ref, args.q)
        if (reference.width, reference.height) != (args.w, args.h):
            raise ValueError(
                f"reference image is {reference.width}x{reference.height},"
                f" expected {args.w}x{args.h}"
            )
    else:
        reference = GrayImage(args.w, args.h, args.q, np.zeros(args.w * args.h, dtype=np.int64))
    if not args.temperature > 0:
        raise ValueError(f"temperature must be positive, got {args.temperature}")
    prior = GemenMcClure(args.gm_width) if args.prior == "gm" else IsingPotts()
    spec = PosteriorSpec(prior, _DISTANCES[args.distance], 1.0 / args.temperature, reference)
    marginals = exact_marginals(spec)
    with open(args.out, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["pixel", "label", "probability"])
        for i in range(marginals.shape[0]):
            for z in range(marginals.shape[1]):
                writer.writerow([i, z, repr(float(marginals[i, z]))])
    if args.states is not None:
        with open(args.states, "w", newline="") as handle:
            writer = csv.writer(handle)
            writer.writerow(["state", "probability"])
            for index, prob in posterior_csv_rows(spec):
                writer.writerow([index, repr(prob)])
    return 0


_COMMANDS = {
    "generate": _cmd_generate,
    "corrupt": _cmd_corrupt,
    "restore": _cmd_restore,
    "evaluate": _cmd_evaluate,
    "oracle": _cmd_oracle,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        return _COMMANDS[args.command](args)
    except PgmParseError as exc:
        print(f"mrf: parse error: {exc}", file=sys.stderr)
        return 3
    except CapacityError as exc:
        print(f"mrf: {exc}", file=sys.stderr)
        return 4
    except (ValueError, OSError) as exc:
        print(f"mrf: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
