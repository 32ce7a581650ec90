"""Normalized posterior over label configurations and mutable chain state.

For an observed image X on an N-pixel lattice the posterior density of a
candidate image is taken as

    log pi(theta) = -(F(theta, X) + (beta / 2) * E(theta)) / (N * (1 + beta))

where F is the data-fidelity distance, E the prior energy, and beta = 1/T the
single smoothing hyperparameter.  The 1/N factor keeps the exponent scale
independent of image size, and the 1/(1+beta) factor splits the exponent into
a data weight 1/(1+beta) and a prior weight (beta/2)/(1+beta) whose sum stays
bounded, so one temperature knob trades fidelity against smoothness.

``PosteriorSpec`` freezes the target (and the two linear coefficients it
induces); ``ChainState`` owns one chain's mutable labels plus running F and E
caches so that a single-pixel move costs O(1) instead of O(N).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .image import GrayImage, Topology
from .metrics import Distance, IsingPotts, Prior, energy


@dataclass(frozen=True, eq=False)
class PosteriorSpec:
    """Immutable description of one restoration target.

    Built normally, the exponent coefficients follow the normalized form
    above: ``f_coeff = 1 / (N (1 + beta))`` and ``e_coeff = beta / (2 N (1 +
    beta))``.  The :meth:`prior_only` constructor instead sets ``f_coeff = 0``
    and ``e_coeff = beta``, which turns the chain into a pure Gibbs-prior
    sampler at raw coupling ``beta`` (useful for validating cluster moves
    against closed-form prior expectations).
    """

    prior: Prior
    distance: Distance
    beta: float
    reference: GrayImage
    f_coeff: float | None = None
    e_coeff: float | None = None
    f_table: np.ndarray = field(init=False, repr=False)
    e_table: np.ndarray = field(init=False, repr=False)
    topology: Topology = field(init=False, repr=False)

    def __post_init__(self):
        n = self.reference.n_pixels
        if self.f_coeff is None or self.e_coeff is None:
            if not self.beta > 0:
                raise ValueError(f"beta must be positive, got {self.beta}")
            object.__setattr__(self, "f_coeff", 1.0 / (n * (1.0 + self.beta)))
            object.__setattr__(self, "e_coeff", self.beta / (2.0 * n * (1.0 + self.beta)))
        else:
            if self.beta < 0 or self.f_coeff < 0 or self.e_coeff < 0:
                raise ValueError("explicit exponent coefficients must be nonnegative")
        f_tab = self.distance.table(self.reference.q)
        e_tab = self.prior.pair_table(self.reference.q)
        f_tab.setflags(write=False)
        e_tab.setflags(write=False)
        object.__setattr__(self, "f_table", f_tab)
        object.__setattr__(self, "e_table", e_tab)
        object.__setattr__(self, "topology", Topology(self.reference.width, self.reference.height))

    @classmethod
    def prior_only(cls, prior: Prior, beta: float, reference: GrayImage) -> "PosteriorSpec":
        """Target ``exp(-beta * E(theta))`` alone, ignoring the data term."""
        if beta < 0:
            raise ValueError(f"prior coupling must be nonnegative, got {beta}")
        return cls(prior, Distance.HAMMING, beta, reference, f_coeff=0.0, e_coeff=float(beta))

    @property
    def temperature(self) -> float:
        return 1.0 / self.beta if self.beta > 0 else float("inf")

    def score(self, f_value: float, e_value: float) -> float:
        """Log-posterior for given fidelity and energy totals."""
        return -(self.f_coeff * f_value + self.e_coeff * e_value)


def log_posterior(candidate: GrayImage, spec: PosteriorSpec) -> float:
    """Log-density of ``candidate`` under ``spec``, up to the normalizing constant."""
    if not candidate.same_shape(spec.reference):
        raise ValueError("candidate shape does not match the observed image")
    f_value = spec.distance.between(candidate, spec.reference)
    e_value = energy(candidate, spec.prior, spec.topology)
    return spec.score(f_value, e_value)


@dataclass(eq=False)
class ChainState:
    """One chain's working labels with running F and E totals.

    The label buffer is mutable and owned by exactly one chain; anything that
    needs a stable snapshot should go through :attr:`current`, which copies.
    ``cached_f`` and ``cached_e`` stay equal to the from-scratch totals after
    every accepted move (exactly for integer-valued functionals, to rounding
    for the smooth ones).
    """

    labels: np.ndarray
    cached_f: float
    cached_e: float
    sweep: int
    rng: np.random.Generator
    width: int
    height: int
    q: int

    @classmethod
    def from_image(
        cls, start: GrayImage, spec: PosteriorSpec, rng: np.random.Generator
    ) -> "ChainState":
        """Initialize a chain at ``start`` with caches computed from scratch."""
        if not start.same_shape(spec.reference):
            raise ValueError("start image shape does not match the observed image")
        f_value = spec.distance.between(start, spec.reference)
        e_value = energy(start, spec.prior, spec.topology)
        return cls(
            labels=start.labels.copy(),
            cached_f=float(f_value),
            cached_e=float(e_value),
            sweep=0,
            rng=rng,
            width=start.width,
            height=start.height,
            q=start.q,
        )

    @property
    def n_pixels(self) -> int:
        return self.width * self.height

    @property
    def current(self) -> GrayImage:
        """Immutable snapshot of the working labels."""
        return GrayImage(self.width, self.height, self.q, self.labels.copy())

    def log_posterior(self, spec: PosteriorSpec) -> float:
        return spec.score(self.cached_f, self.cached_e)


def _check_move(state: ChainState, pixel: int, new_label: int) -> None:
    if not 0 <= pixel < state.n_pixels:
        raise IndexError(f"pixel index {pixel} out of range for {state.n_pixels} pixels")
    if not 0 <= new_label < state.q:
        raise ValueError(f"label {new_label} out of range [0, {state.q - 1}]")


def delta_log_posterior(
    state: ChainState, pixel: int, new_label: int, spec: PosteriorSpec
) -> float:
    """Change in log-posterior if ``pixel`` were set to ``new_label``.

    Touches only the pixel and its neighbors, so the cost is O(1); proposing
    the current label gives exactly 0.
    """
    _check_move(state, pixel, new_label)
    old = int(state.labels[pixel])
    if old == new_label:
        return 0.0
    x = int(spec.reference.labels[pixel])
    df = spec.f_table[new_label, x] - spec.f_table[old, x]
    de = 0.0
    for j in spec.topology.neighbor_table[pixel]:
        if j >= 0:
            lj = state.labels[j]
            de += spec.e_table[new_label, lj] - spec.e_table[old, lj]
    return -(spec.f_coeff * df + spec.e_coeff * de)


def apply_move(state: ChainState, pixel: int, new_label: int, spec: PosteriorSpec) -> ChainState:
    """Set ``pixel`` to ``new_label`` in place, updating both caches in O(1).

    Returns the same state object for convenience.
    """
    _check_move(state, pixel, new_label)
    old = int(state.labels[pixel])
    if old == new_label:
        return state
    x = int(spec.reference.labels[pixel])
    state.cached_f += spec.f_table[new_label, x] - spec.f_table[old, x]
    de = 0.0
    for j in spec.topology.neighbor_table[pixel]:
        if j >= 0:
            lj = state.labels[j]
            de += spec.e_table[new_label, lj] - spec.e_table[old, lj]
    state.cached_e += de
    state.labels[pixel] = new_label
    return state
