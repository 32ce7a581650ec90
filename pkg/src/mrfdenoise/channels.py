"""Noise channels: forward degradation and the matching log-likelihoods.

Every channel acts independently per pixel.  ``degrade`` pushes a clean image
through a channel; ``log_likelihood`` scores a candidate clean image against
an observed noisy one, dropping any additive terms that do not depend on the
candidate (they cancel in posterior ratios).

The symmetric channels are parameterized by the total replacement probability
``p``: the chance that a pixel's label changes at all.  ``beta_l_from_p``
converts that probability to the equivalent likelihood coupling, and
``p_from_beta_l`` inverts the conversion exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .image import GrayImage
from .metrics import hamming_distance, poisson_nll


def _check_probability(p: float) -> None:
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"replacement probability must lie in [0, 1], got {p}")


@dataclass(frozen=True)
class BinarySymmetric:
    """Binary symmetric channel: flip each pixel with probability ``p``.

    Only meaningful for two-level images; using it with q != 2 is an error.
    """

    p: float

    def __post_init__(self):
        _check_probability(self.p)


@dataclass(frozen=True)
class QarySymmetric:
    """Symmetric q-ary channel: with probability ``p`` replace the label by
    one of the other ``q - 1`` labels, chosen uniformly."""

    p: float

    def __post_init__(self):
        _check_probability(self.p)


@dataclass(frozen=True)
class Gaussian:
    """Additive Gaussian channel: observe ``alpha * label + noise`` with the
    noise drawn from N(0, sigma^2), then round and clamp back to the label
    range.  Operates on raw labels."""

    alpha: float = 1.0
    sigma: float = 1.0

    def __post_init__(self):
        if not self.sigma > 0:
            raise ValueError(f"sigma must be positive, got {self.sigma}")


@dataclass(frozen=True)
class Poisson:
    """Photon-counting channel: observe a Poisson draw with mean ``label + 1``
    (the shifted intensity), then shift back and clamp.  No hyperparameter."""


ChannelModel = BinarySymmetric | QarySymmetric | Gaussian | Poisson


def beta_l_from_p(p: float, q: int) -> float:
    """Likelihood coupling equivalent to replacement probability ``p``.

    ``beta_l = log((q - 1) * (1 / p - 1))``, defined for ``p`` in the open
    interval ``(0, 1 - 1/q)`` where the channel is informative.
    """
    if q < 2:
        raise ValueError(f"need at least 2 labels, got q={q}")
    if not 0.0 < p < 1.0 - 1.0 / q:
        raise ValueError(f"p must lie in (0, {1.0 - 1.0 / q}), got {p}")
    return math.log((q - 1) * (1.0 / p - 1.0))


def p_from_beta_l(beta_l: float, q: int) -> float:
    """Replacement probability equivalent to coupling ``beta_l``.

    Exact inverse of ``beta_l_from_p``: returns
    ``(q - 1) * exp(-beta_l) / (1 + (q - 1) * exp(-beta_l))``, which lies in
    ``(0, 1 - 1/q]`` for ``beta_l >= 0`` and approaches the uninformative
    value ``1 - 1/q`` as ``beta_l -> 0``.
    """
    if q < 2:
        raise ValueError(f"need at least 2 labels, got q={q}")
    w = (q - 1) * math.exp(-beta_l)
    return w / (1.0 + w)


def _require_binary(image: GrayImage) -> None:
    if image.q != 2:
        raise ValueError(f"binary symmetric channel requires q=2 images, got q={image.q}")


def degrade(image: GrayImage, channel: ChannelModel, rng: np.random.Generator) -> GrayImage:
    """Push ``image`` through ``channel`` and return the noisy result.

    The output always lives on the same lattice with the same ``q``;
    continuous channels are rounded to the nearest integer and clamped.
    """
    labels = image.labels
    n = image.n_pixels
    if isinstance(channel, BinarySymmetric):
        _require_binary(image)
        hit = rng.random(n) < channel.p
        out = np.where(hit, 1 - labels, labels)
    elif isinstance(channel, QarySymmetric):
        hit = rng.random(n) < channel.p
        k = int(np.count_nonzero(hit))
        repl = rng.integers(0, image.q - 1, size=k)
        cur = labels[hit]
        out = labels.copy()
        out[hit] = repl + (repl >= cur)
    elif isinstance(channel, Gaussian):
        raw = rng.normal(channel.alpha * labels.astype(np.float64), channel.sigma)
        out = np.clip(np.rint(raw), 0, image.q - 1).astype(np.int64)
    else:
        counts = rng.poisson(labels + 1.0)
        out = np.clip(counts - 1, 0, image.q - 1).astype(np.int64)
    return image.with_labels(out)


def log_likelihood(observed: GrayImage, candidate: GrayImage, channel: ChannelModel) -> float:
    """Log-probability of ``observed`` given ``candidate``, up to terms that
    do not depend on the candidate."""
    if not observed.same_shape(candidate):
        raise ValueError(
            f"image shapes differ: {observed.width}x{observed.height} q={observed.q}"
            f" vs {candidate.width}x{candidate.height} q={candidate.q}"
        )
    if isinstance(channel, BinarySymmetric):
        _require_binary(observed)
        coupling = beta_l_from_p(channel.p, 2)
        return -coupling * hamming_distance(observed, candidate)
    if isinstance(channel, QarySymmetric):
        coupling = beta_l_from_p(channel.p, observed.q)
        return -coupling * hamming_distance(observed, candidate)
    if isinstance(channel, Gaussian):
        resid = observed.labels - channel.alpha * candidate.labels.astype(np.float64)
        return float(-np.sum(resid * resid) / (2.0 * channel.sigma**2))
    return -poisson_nll(candidate, observed)
