"""Image distances, prior energies, and comparison reports.

Distances measure data fidelity between a candidate image and the observed
one; prior energies measure roughness of a candidate under a Markov random
field prior.  Both are plain sums of local terms, so each has a per-label
lookup table used by the samplers for O(1) incremental updates.

Label-shift convention: the divergence-style distances (symmetric
Kullback-Leibler and Poisson) operate on shifted intensities ``label + 1`` so
that label 0 never produces log(0).  Hamming distance and both prior energies
work on raw labels.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .image import GrayImage, Topology


def _check_same_shape(a: GrayImage, b: GrayImage) -> None:
    if not a.same_shape(b):
        raise ValueError(
            f"image shapes differ: {a.width}x{a.height} q={a.q} vs {b.width}x{b.height} q={b.q}"
        )


class Distance(enum.Enum):
    """Data-fidelity functional between candidate and observed labels."""

    HAMMING = "hamming"
    SYMMETRIC_KL = "symmetric_kl"
    POISSON_NLL = "poisson_nll"

    def table(self, q: int) -> np.ndarray:
        """Per-pixel cost table ``t[candidate, observed]`` of shape ``(q, q)``."""
        cand = np.arange(q, dtype=np.float64)[:, None]
        obs = np.arange(q, dtype=np.float64)[None, :]
        if self is Distance.HAMMING:
            return (cand != obs).astype(np.float64)
        if self is Distance.SYMMETRIC_KL:
            return (cand - obs) * (np.log(cand + 1.0) - np.log(obs + 1.0))
        return (cand + 1.0) - (obs + 1.0) * np.log(cand + 1.0)

    def between(self, candidate: GrayImage, observed: GrayImage) -> float:
        """Total distance between two images of identical shape."""
        _check_same_shape(candidate, observed)
        if self is Distance.HAMMING:
            return float(hamming_distance(candidate, observed))
        if self is Distance.SYMMETRIC_KL:
            return symmetric_kl(candidate, observed)
        return poisson_nll(candidate, observed)


def hamming_distance(a: GrayImage, b: GrayImage) -> int:
    """Number of pixels where the two images disagree."""
    _check_same_shape(a, b)
    return int(np.count_nonzero(a.labels != b.labels))


def symmetric_kl(a: GrayImage, b: GrayImage) -> float:
    """Symmetrized Kullback-Leibler divergence on shifted intensities.

    Each pixel contributes ``(a'-b') * (log a' - log b')`` with ``x' = x+1``;
    the sum is symmetric in its arguments and zero only for equal images.
    """
    _check_same_shape(a, b)
    av = a.labels + 1.0
    bv = b.labels + 1.0
    return float(np.sum((av - bv) * (np.log(av) - np.log(bv))))


def poisson_nll(candidate: GrayImage, observed: GrayImage) -> float:
    """Poisson negative log-likelihood up to terms constant in the candidate.

    With shifted intensities ``v' = v+1`` each pixel contributes
    ``cand' - obs' * log(cand')``; the dropped ``log(obs'!)`` term does not
    depend on the candidate image.
    """
    _check_same_shape(candidate, observed)
    cv = candidate.labels + 1.0
    ov = observed.labels + 1.0
    return float(np.sum(cv - ov * np.log(cv)))


@dataclass(frozen=True)
class IsingPotts:
    """Disagreement-counting prior: each unequal neighbor pair costs 1."""

    def pair_table(self, q: int) -> np.ndarray:
        a = np.arange(q)
        return (a[:, None] != a[None, :]).astype(np.float64)


@dataclass(frozen=True)
class GemenMcClure:
    """Bounded smoothing prior with pair energy ``-1 / (1 + width * delta^2)``.

    Equal neighbors contribute -1; the penalty saturates toward 0 as the label
    gap grows, so isolated sharp edges are tolerated.  ``width`` controls how
    fast the well flattens and must be positive.  Raw labels, no shift.
    """

    width: float = 1.0

    def __post_init__(self):
        if not self.width > 0:
            raise ValueError(f"well width must be positive, got {self.width}")

    def pair_table(self, q: int) -> np.ndarray:
        a = np.arange(q, dtype=np.float64)
        delta = a[:, None] - a[None, :]
        return -1.0 / (1.0 + self.width * delta * delta)


Prior = IsingPotts | GemenMcClure


def energy(image: GrayImage, prior: Prior, topology: Topology | None = None) -> float:
    """Total prior energy, summed over the 4-neighbor edges of the lattice.

    For the disagreement prior the value is an exact nonnegative integer; for
    the bounded-well prior it lies in ``[-n_edges, 0)``.
    """
    t = topology if topology is not None else Topology(image.width, image.height)
    if (t.width, t.height) != (image.width, image.height):
        raise ValueError(
            f"topology {t.width}x{t.height} does not match image {image.width}x{image.height}"
        )
    lu = image.labels[t.edge_u]
    lv = image.labels[t.edge_v]
    if isinstance(prior, IsingPotts):
        return float(np.count_nonzero(lu != lv))
    table = prior.pair_table(image.q)
    return float(np.sum(table[lu, lv]))


def satisfied_bond_count(image: GrayImage, topology: Topology | None = None) -> int:
    """Number of 4-neighbor edges whose endpoints carry equal labels.

    Complements the disagreement energy: satisfied + unsatisfied = n_edges.
    """
    t = topology if topology is not None else Topology(image.width, image.height)
    if (t.width, t.height) != (image.width, image.height):
        raise ValueError(
            f"topology {t.width}x{t.height} does not match image {image.width}x{image.height}"
        )
    return int(np.count_nonzero(image.labels[t.edge_u] == image.labels[t.edge_v]))


def evaluate_images(truth: GrayImage, estimate: GrayImage) -> dict:
    """Compare an estimate against ground truth.

    Returns a dict with ``error_rate`` (fraction of mismatched pixels),
    ``hamming`` (their count), and ``confusion`` (q x q nested lists where
    entry ``[t][e]`` counts pixels of true label ``t`` estimated as ``e``).
    """
    _check_same_shape(truth, estimate)
    ham = hamming_distance(truth, estimate)
    confusion = np.zeros((truth.q, truth.q), dtype=np.int64)
    np.add.at(confusion, (truth.labels, estimate.labels), 1)
    return {
        "error_rate": ham / truth.n_pixels,
        "hamming": ham,
        "confusion": confusion.tolist(),
    }
