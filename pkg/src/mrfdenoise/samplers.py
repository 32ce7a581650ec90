"""Monte Carlo samplers over the image posterior.

Five update schemes share one chain representation: greedy ascent (accept
improvements, plus exact posterior ties that strictly lower the prior
energy), Metropolis, heat-bath (Barker acceptance on the proposed pair),
Swendsen-Wang (refresh every cluster each sweep), and Wolff (grow and
refresh a single cluster).  A sweep means N attempted single-pixel
updates for the first three, and one cluster update for the last two.

Randomness is drawn from the chain's own generator in a fixed documented
order, so a fixed seed reproduces a run bit for bit.  Per sweep, Metropolis
and heat-bath consume N pixel indices, N proposal draws, and N acceptance
uniforms; greedy scans pixels in raster order and consumes only the N
proposal draws (acceptance is deterministic); Swendsen-Wang consumes one
uniform per lattice edge plus one per pixel; Wolff consumes one seed index,
a buffer of two uniforms per edge (used partially, in discovery order), and
one label uniform.

Cluster moves require the disagreement prior: bonds join equal-label
neighbors with probability ``1 - exp(-coupling)`` where the coupling is the
posterior's energy coefficient, and each cluster then redraws its label from
its aggregated data likelihood.  Under the normalized posterior that
coupling is ``beta / (2 N (1 + beta))``; in prior-only mode it is the raw
``beta``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .image import GrayImage, Topology
from .metrics import IsingPotts
from .posterior import ChainState, PosteriorSpec, apply_move, delta_log_posterior


class SamplerKind(enum.Enum):
    GREEDY = "greedy"
    METROPOLIS = "metropolis"
    GIBBS = "gibbs"
    SWENDSEN_WANG = "sw"
    WOLFF = "wolff"


_SINGLE_PIXEL_RULES = {
    SamplerKind.GREEDY: _kernels.RULE_GREEDY,
    SamplerKind.METROPOLIS: _kernels.RULE_METROPOLIS,
    SamplerKind.GIBBS: _kernels.RULE_HEAT_BATH,
}


@dataclass(frozen=True)
class SweepReport:
    """Diagnostics recorded at the end of one sweep."""

    sweep_index: int
    log_posterior: float
    accepted_moves: int
    cluster_count: int | None = None
    largest_cluster: int | None = None


@dataclass(frozen=True)
class BondField:
    """Occupation flags for the lattice edges, in canonical edge order."""

    topology: Topology
    occupied: np.ndarray

    def __post_init__(self):
        occ = np.asarray(self.occupied, dtype=bool)
        if occ.shape != (self.topology.n_edges,):
            raise ValueError(
                f"bond array has shape {occ.shape}, expected ({self.topology.n_edges},)"
            )
        occ = occ.copy()
        occ.setflags(write=False)
        object.__setattr__(self, "occupied", occ)

    @property
    def n_occupied(self) -> int:
        return int(np.count_nonzero(self.occupied))


def bond_probability(coupling: float) -> float:
    """Bond occupation probability ``1 - exp(-coupling)`` for a satisfied edge."""
    if coupling < 0:
        raise ValueError(f"coupling must be nonnegative, got {coupling}")
    return -math.expm1(-coupling)


def sample_bonds(image: GrayImage, coupling: float, rng: np.random.Generator) -> BondField:
    """Draw one bond configuration conditioned on ``image``.

    Each edge whose endpoints agree is occupied independently with
    probability ``1 - exp(-coupling)``; disagreeing edges are never occupied.
    """
    t = Topology(image.width, image.height)
    p = bond_probability(coupling)
    satisfied = image.labels[t.edge_u] == image.labels[t.edge_v]
    occupied = satisfied & (rng.random(t.n_edges) < p)
    # Occupied bonds must connect equal labels; anything else is a logic bug.
    assert not np.any(occupied & ~satisfied)
    return BondField(t, occupied)


def label_clusters(bonds: BondField) -> tuple[np.ndarray, int]:
    """Connected components of the occupied-bond graph.

    Returns ``(assignment, n_clusters)``; every pixel gets a cluster id in
    ``0..n_clusters-1``, ids appearing in order of first pixel index, and
    isolated pixels form singleton clusters.
    """
    t = bonds.topology
    return _kernels.union_find_clusters(
        t.n_pixels, t.edge_u, t.edge_v, np.ascontiguousarray(bonds.occupied)
    )


def _check_chain(state: ChainState, spec: PosteriorSpec) -> None:
    ref = spec.reference
    if (state.width, state.height, state.q) != (ref.width, ref.height, ref.q):
        raise ValueError("chain state does not match the posterior's observed image")


def _require_cluster_prior(spec: PosteriorSpec) -> None:
    if not isinstance(spec.prior, IsingPotts):
        raise ValueError("cluster samplers require the disagreement (Ising/Potts) prior")


def _propose(state: ChainState) -> tuple[int, int]:
    i = int(state.rng.integers(state.n_pixels))
    r = int(state.rng.integers(state.q - 1))
    cur = int(state.labels[i])
    return i, (r if r < cur else r + 1)


def _delta_energy(state: ChainState, pixel: int, new: int, spec: PosteriorSpec) -> float:
    old = int(state.labels[pixel])
    de = 0.0
    for j in spec.topology.neighbor_table[pixel]:
        if j >= 0:
            lj = state.labels[j]
            de += spec.e_table[new, lj] - spec.e_table[old, lj]
    return de


def greedy_map_step(state: ChainState, spec: PosteriorSpec) -> bool:
    """One attempted update that accepts only posterior-improving moves.

    A move of exactly zero posterior change is also taken when it strictly
    lowers the prior energy, so plateaus of tied maxima are walked toward
    their smoothest member (the walk terminates: energy is bounded below).
    """
    _check_chain(state, spec)
    i, new = _propose(state)
    dlp = delta_log_posterior(state, i, new, spec)
    if dlp > 0.0 or (dlp == 0.0 and _delta_energy(state, i, new, spec) < 0.0):
        apply_move(state, i, new, spec)
        return True
    return False


def metropolis_step(state: ChainState, spec: PosteriorSpec) -> bool:
    """One attempted update accepted with probability ``min(1, e^delta)``."""
    _check_chain(state, spec)
    i, new = _propose(state)
    dlp = delta_log_posterior(state, i, new, spec)
    if dlp >= 0.0 or state.rng.random() < math.exp(dlp):
        apply_move(state, i, new, spec)
        return True
    return False


def gibbs_step(state: ChainState, spec: PosteriorSpec) -> bool:
    """One attempted update accepted with the heat-bath probability
    ``pi_new / (pi_cur + pi_new) = 1 / (1 + e^-delta)``."""
    _check_chain(state, spec)
    i, new = _propose(state)
    dlp = delta_log_posterior(state, i, new, spec)
    if state.rng.random() < 1.0 / (1.0 + math.exp(-dlp)):
        apply_move(state, i, new, spec)
        return True
    return False


def _refresh_totals(state: ChainState, spec: PosteriorSpec) -> None:
    t = spec.topology
    f, e = _kernels.totals(
        state.labels, spec.reference.labels, t.edge_u, t.edge_v, spec.f_table, spec.e_table
    )
    state.cached_f = f
    state.cached_e = e


def sw_step(state: ChainState, spec: PosteriorSpec) -> SweepReport:
    """One Swendsen-Wang sweep: bond draw, cluster labeling, label refresh."""
    _check_chain(state, spec)
    _require_cluster_prior(spec)
    t = spec.topology
    p = bond_probability(spec.e_coeff)
    bond_unifs = state.rng.random(t.n_edges)
    label_unifs = state.rng.random(t.n_pixels)
    n_clusters, largest, changed = _kernels.sw_step(
        state.labels,
        spec.reference.labels,
        t.edge_u,
        t.edge_v,
        spec.f_table,
        spec.f_coeff,
        p,
        bond_unifs,
        label_unifs,
    )
    _refresh_totals(state, spec)
    state.sweep += 1
    return SweepReport(
        sweep_index=state.sweep,
        log_posterior=state.log_posterior(spec),
        accepted_moves=int(changed),
        cluster_count=int(n_clusters),
        largest_cluster=int(largest),
    )


def wolff_step(state: ChainState, spec: PosteriorSpec) -> SweepReport:
    """One Wolff sweep: grow a single cluster from a random seed pixel and
    redraw its label from the cluster's aggregated likelihood."""
    _check_chain(state, spec)
    _require_cluster_prior(spec)
    t = spec.topology
    p = bond_probability(spec.e_coeff)
    seed_pixel = int(state.rng.integers(t.n_pixels))
    bond_unifs = state.rng.random(2 * t.n_edges)
    label_unif = float(state.rng.random())
    size, changed = _kernels.wolff_step(
        state.labels,
        spec.reference.labels,
        t.neighbor_table,
        spec.f_table,
        spec.f_coeff,
        p,
        seed_pixel,
        bond_unifs,
        label_unif,
    )
    _refresh_totals(state, spec)
    state.sweep += 1
    return SweepReport(
        sweep_index=state.sweep,
        log_posterior=state.log_posterior(spec),
        accepted_moves=int(changed > 0),
        cluster_count=1,
        largest_cluster=int(size),
    )


def run_sweeps(
    state: ChainState,
    spec: PosteriorSpec,
    kind: SamplerKind,
    n_sweeps: int,
    trace: bool = True,
) -> tuple[ChainState, list[SweepReport]]:
    """Advance the chain by ``n_sweeps`` sweeps under the given scheme.

    Mutates ``state`` in place and returns it together with one report per
    sweep (an empty list when ``trace`` is false; the chain trajectory is
    identical either way).
    """
    _check_chain(state, spec)
    if n_sweeps < 0:
        raise ValueError(f"sweep count must be nonnegative, got {n_sweeps}")
    kind = SamplerKind(kind)
    reports: list[SweepReport] = []
    if kind in _SINGLE_PIXEL_RULES:
        rule = _SINGLE_PIXEL_RULES[kind]
        t = spec.topology
        n = state.n_pixels
        ref = spec.reference.labels
        empty = np.empty(0, dtype=np.float64)
        raster = np.arange(n, dtype=np.int64) if rule == _kernels.RULE_GREEDY else None
        for _ in range(n_sweeps):
            # Greedy is an optimizer, not a sampler: it scans the lattice in
            # raster order, which repairs isolated noise in the first pass
            # before clusters of flips can lock each other in.  The stochastic
            # samplers keep uniformly random site selection, the kernel their
            # stationarity analysis assumes.
            if raster is not None:
                pixels = raster
            else:
                pixels = state.rng.integers(0, n, size=n)
            proposals = state.rng.integers(0, state.q - 1, size=n)
            unifs = empty if rule == _kernels.RULE_GREEDY else state.rng.random(n)
            f, e, accepted = _kernels.single_pixel_sweep(
                state.labels,
                ref,
                t.neighbor_table,
                spec.f_table,
                spec.e_table,
                spec.f_coeff,
                spec.e_coeff,
                state.cached_f,
                state.cached_e,
                pixels,
                proposals,
                unifs,
                rule,
            )
            state.cached_f = f
            state.cached_e = e
            state.sweep += 1
            if trace:
                reports.append(
                    SweepReport(
                        sweep_index=state.sweep,
                        log_posterior=state.log_posterior(spec),
                        accepted_moves=int(accepted),
                    )
                )
        return state, reports
    step = sw_step if kind is SamplerKind.SWENDSEN_WANG else wolff_step
    for _ in range(n_sweeps):
        report = step(state, spec)
        if trace:
            reports.append(report)
    return state, reports
