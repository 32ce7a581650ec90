"""scikit-learn style transformers wrapping the restoration pipeline.

Both classes treat a 2-D integer array of shape ``(height, width)`` as one
sample.  ``ChannelDegrader.transform`` corrupts an image through a noise
channel; ``MRFDenoiser.transform`` restores one by MCMC.  Hyperparameters
are plain constructor arguments, so ``get_params`` / ``set_params`` and
``sklearn.pipeline.Pipeline`` composition work as usual.  Both transformers
are stateless between calls (``fit`` only validates); a fixed ``seed`` makes
``transform`` deterministic.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin

from .channels import BinarySymmetric, Gaussian, Poisson, QarySymmetric, degrade
from .estimators import run_restoration
from .image import GrayImage
from .metrics import Distance, GemenMcClure, IsingPotts
from .posterior import PosteriorSpec
from .rng import make_rng
from .samplers import SamplerKind

_DISTANCES = {
    "hamming": Distance.HAMMING,
    "kl": Distance.SYMMETRIC_KL,
    "poisson": Distance.POISSON_NLL,
}


def check_label_image(X, q: int) -> np.ndarray:
    """Validate a 2-D label array and return it as contiguous int64."""
    arr = np.asarray(X)
    if arr.ndim != 2 or arr.size == 0:
        raise ValueError(f"expected a non-empty 2-D label array, got shape {arr.shape}")
    if not np.issubdtype(arr.dtype, np.integer):
        if np.issubdtype(arr.dtype, np.floating) and np.all(arr == np.floor(arr)):
            arr = arr.astype(np.int64)
        else:
            raise ValueError(f"labels must be integers, got dtype {arr.dtype}")
    arr = np.ascontiguousarray(arr, dtype=np.int64)
    if arr.min() < 0 or arr.max() >= q:
        raise ValueError(f"labels must lie in [0, {q - 1}], got range [{arr.min()}, {arr.max()}]")
    return arr


class ChannelDegrader(BaseEstimator, TransformerMixin):
    """Corrupt label images through a parametric noise channel.

    :param channel: one of ``bsc``, ``qary``, ``gaussian``, ``poisson``.
    :param p: replacement probability for the symmetric channels.
    :param alpha: gain of the Gaussian channel.
    :param sigma: noise scale of the Gaussian channel.
    :param q: number of gray levels.
    :param seed: seed for the corruption stream.
    """

    def __init__(self, channel="bsc", p=0.05, alpha=1.0, sigma=1.0, q=2, seed=0):
        self.channel = channel
        self.p = p
        self.alpha = alpha
        self.sigma = sigma
        self.q = q
        self.seed = seed

    def _make_channel(self):
        if self.channel == "bsc":
            return BinarySymmetric(self.p)
        if self.channel == "qary":
            return QarySymmetric(self.p)
        if self.channel == "gaussian":
            return Gaussian(alpha=self.alpha, sigma=self.sigma)
        if self.channel == "poisson":
            return Poisson()
        raise ValueError(f"unknown channel {self.channel!r}")

    def fit(self, X, y=None):
        self._make_channel()
        check_label_image(X, self.q)
        return self

    def transform(self, X) -> np.ndarray:
        grid = check_label_image(X, self.q)
        image = GrayImage.from_grid(grid, self.q)
        noisy = degrade(image, self._make_channel(), make_rng(self.seed))
        return noisy.grid().copy()


class MRFDenoiser(BaseEstimator, TransformerMixin):
    """Restore a noisy label image by sampling its smoothing posterior.

    :param sampler: ``greedy``, ``metropolis``, ``gibbs``, ``sw``, or ``wolff``.
    :param prior: ``ising``/``potts`` (disagreement counting) or ``gm``.
    :param distance: ``hamming``, ``kl``, or ``poisson`` data fidelity.
    :param temperature: smoothing temperature T; beta = 1/T.
    :param gm_width: well width when ``prior="gm"``.
    :param q: number of gray levels.
    :param sweeps: total sweeps including burn-in.
    :param burn_in: sweeps discarded before collecting (default max(100, 10%)).
    :param estimate: ``map``, ``mpm``, or ``tpm``.
    :param seed: chain seed.

    After ``transform`` the instance exposes ``trace_`` (per-sweep reports),
    ``ensemble_`` (the collected tallies), and ``result_``.
    """

    def __init__(
        self,
        sampler="greedy",
        prior="ising",
        distance="hamming",
        temperature=0.51,
        gm_width=1.0,
        q=2,
        sweeps=200,
        burn_in=None,
        estimate="map",
        seed=0,
    ):
        self.sampler = sampler
        self.prior = prior
        self.distance = distance
        self.temperature = temperature
        self.gm_width = gm_width
        self.q = q
        self.sweeps = sweeps
        self.burn_in = burn_in
        self.estimate = estimate
        self.seed = seed

    def _resolve(self):
        kind = SamplerKind(self.sampler)
        if self.prior in ("ising", "potts"):
            prior = IsingPotts()
        elif self.prior == "gm":
            prior = GemenMcClure(self.gm_width)
        else:
            raise ValueError(f"unknown prior {self.prior!r}")
        if self.distance not in _DISTANCES:
            raise ValueError(f"unknown distance {self.distance!r}")
        if self.estimate not in ("map", "mpm", "tpm"):
            raise ValueError(f"unknown estimate {self.estimate!r}")
        if not self.temperature > 0:
            raise ValueError(f"temperature must be positive, got {self.temperature}")
        return kind, prior, _DISTANCES[self.distance]

    def fit(self, X, y=None):
        self._resolve()
        check_label_image(X, self.q)
        return self

    def transform(self, X) -> np.ndarray:
        kind, prior, distance = self._resolve()
        grid = check_label_image(X, self.q)
        observed = GrayImage.from_grid(grid, self.q)
        spec = PosteriorSpec(prior, distance, 1.0 / self.temperature, observed)
        result = run_restoration(
            spec,
            kind,
            self.sweeps,
            burn_in=self.burn_in,
            rng=make_rng(self.seed),
        )
        self.result_ = result
        self.trace_ = result.reports
        self.ensemble_ = result.ensemble
        return result.estimate(self.estimate).grid().copy()
