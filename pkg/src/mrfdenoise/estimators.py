"""Streaming posterior ensembles and the MAP/MPM/TPM point estimates.

An :class:`Ensemble` ingests one image snapshot per post-burn-in sweep and
keeps only O(N q) state: per-pixel label tallies, per-pixel label sums, and
the best-scoring snapshot seen so far.  The three estimates read off that
state:

* MAP: the collected image with the highest log-posterior (ties keep the
  earliest).
* MPM: per pixel, the most tallied label (ties resolve to the smaller label).
* TPM: per pixel, the integer nearest the mean label (exact half-way means
  resolve to the smaller label).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .image import GrayImage
from .posterior import ChainState, PosteriorSpec
from .samplers import SamplerKind, SweepReport, run_sweeps


class Ensemble:
    """Streaming tally of collected posterior samples for one lattice."""

    def __init__(self, width: int, height: int, q: int):
        if width < 1 or height < 1:
            raise ValueError(f"image dimensions must be positive, got {width}x{height}")
        if q < 2:
            raise ValueError(f"need at least 2 gray levels, got q={q}")
        self.width = width
        self.height = height
        self.q = q
        self.count = 0
        self.tallies = np.zeros((width * height, q), dtype=np.int64)
        self.label_sums = np.zeros(width * height, dtype=np.int64)
        self.best_labels: np.ndarray | None = None
        self.best_log_posterior = -np.inf

    @property
    def n_pixels(self) -> int:
        return self.width * self.height

    def _ingest(self, labels: np.ndarray, log_posterior: float) -> None:
        self.tallies[np.arange(self.n_pixels), labels] += 1
        self.label_sums += labels
        self.count += 1
        if log_posterior > self.best_log_posterior:
            self.best_log_posterior = float(log_posterior)
            self.best_labels = labels.copy()

    def collect(self, image: GrayImage, log_posterior: float) -> "Ensemble":
        """Add one snapshot; the best image updates only on strict improvement."""
        if (image.width, image.height, image.q) != (self.width, self.height, self.q):
            raise ValueError("snapshot shape does not match the ensemble")
        self._ingest(image.labels, log_posterior)
        return self

    def merge(self, other: "Ensemble") -> "Ensemble":
        """Combine two ensembles as if one chain had produced both streams.

        Tallies and sums add exactly; the merged best image is the higher
        scoring of the two, the left operand winning exact ties (=earlier
        stream order).
        """
        if (other.width, other.height, other.q) != (self.width, self.height, self.q):
            raise ValueError("cannot merge ensembles over different lattices")
        out = Ensemble(self.width, self.height, self.q)
        out.count = self.count + other.count
        out.tallies = self.tallies + other.tallies
        out.label_sums = self.label_sums + other.label_sums
        if other.best_log_posterior > self.best_log_posterior:
            out.best_log_posterior = other.best_log_posterior
            out.best_labels = None if other.best_labels is None else other.best_labels.copy()
        else:
            out.best_log_posterior = self.best_log_posterior
            out.best_labels = None if self.best_labels is None else self.best_labels.copy()
        return out

    def _require_samples(self) -> None:
        if self.count == 0:
            raise ValueError("ensemble is empty; collect at least one snapshot first")

    def map_estimate(self) -> GrayImage:
        """Highest-posterior collected image."""
        self._require_samples()
        return GrayImage(self.width, self.height, self.q, self.best_labels.copy())

    def mpm_estimate(self) -> GrayImage:
        """Per-pixel modal label (argmax breaks ties toward the smaller label)."""
        self._require_samples()
        return GrayImage(self.width, self.height, self.q, np.argmax(self.tallies, axis=1))

    def tpm_estimate(self) -> GrayImage:
        """Per-pixel label nearest the mean label.

        Computed in exact integer arithmetic: the nearest integer to
        ``sums / count`` with half-way values rounded down is
        ``(2 * sums + count - 1) // (2 * count)``.
        """
        self._require_samples()
        labels = (2 * self.label_sums + self.count - 1) // (2 * self.count)
        return GrayImage(self.width, self.height, self.q, labels)


def default_burn_in(n_sweeps: int) -> int:
    """Sweeps discarded by default: max(100, 10%), but always leaving at
    least one collected sweep."""
    if n_sweeps <= 0:
        return 0
    return min(max(100, n_sweeps // 10), n_sweeps - 1)


@dataclass
class RestorationResult:
    """Everything produced by one restoration run."""

    state: ChainState
    ensemble: Ensemble
    reports: list[SweepReport] = field(default_factory=list)

    def estimate(self, which: str) -> GrayImage:
        if which == "map":
            return self.ensemble.map_estimate()
        if which == "mpm":
            return self.ensemble.mpm_estimate()
        if which == "tpm":
            return self.ensemble.tpm_estimate()
        raise ValueError(f"unknown estimate {which!r}, expected map, mpm, or tpm")


def run_restoration(
    spec: PosteriorSpec,
    kind: SamplerKind,
    n_sweeps: int,
    burn_in: int | None = None,
    rng: np.random.Generator | None = None,
    start: GrayImage | None = None,
    trace: bool = True,
) -> RestorationResult:
    """Run one chain and collect its post-burn-in ensemble.

    The chain starts at ``start`` (default: the observed image itself) and
    advances ``n_sweeps`` sweeps total; snapshots from sweep ``burn_in + 1``
    on are collected.  Reports cover every sweep including burn-in when
    ``trace`` is set.
    """
    if rng is None:
        raise ValueError("pass a numpy Generator (see mrfdenoise.rng.make_rng)")
    if burn_in is None:
        burn_in = default_burn_in(n_sweeps)
    if not 0 <= burn_in <= n_sweeps:
        raise ValueError(f"need 0 <= burn_in <= sweeps, got burn_in={burn_in}, sweeps={n_sweeps}")
    ref = spec.reference
    state = ChainState.from_image(start if start is not None else ref, spec, rng)
    ensemble = Ensemble(ref.width, ref.height, ref.q)
    state, reports = run_sweeps(state, spec, kind, burn_in, trace=trace)
    for _ in range(n_sweeps - burn_in):
        state, tail = run_sweeps(state, spec, kind, 1, trace=trace)
        reports.extend(tail)
        ensemble._ingest(state.labels, state.log_posterior(spec))
    return RestorationResult(state=state, ensemble=ensemble, reports=reports)
