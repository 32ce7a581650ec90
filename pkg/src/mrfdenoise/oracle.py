"""Exhaustive-enumeration ground truth for tiny lattices.

Everything here walks the full configuration space, so it is only usable
when ``q ** n_pixels`` stays below the capacity guard.  The canonical state
indexing is mixed-radix: state ``s`` assigns pixel ``i`` the label
``(s // q**i) % q``, i.e. pixel 0 is the least significant digit.  All
transition-matrix conventions are column-stochastic: ``M[i, j]`` is the
probability of moving to state ``i`` from state ``j``.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import CapacityError
from .image import GrayImage, Topology
from .metrics import IsingPotts
from .posterior import PosteriorSpec
from .samplers import SamplerKind

CAPACITY_LIMIT = 1 << 20
MATRIX_LIMIT = 1 << 12
_CHUNK = 1 << 15


def _n_states(q: int, n_pixels: int, limit: int = CAPACITY_LIMIT) -> int:
    size = q**n_pixels
    if size > limit:
        raise CapacityError(
            f"state space has {size} configurations, above the guard of {limit}"
        )
    return size


def state_to_labels(index: int, q: int, n_pixels: int) -> np.ndarray:
    """Decode a state index into a flat label array (pixel 0 least significant)."""
    if not 0 <= index < q**n_pixels:
        raise ValueError(f"state index {index} out of range")
    out = np.empty(n_pixels, dtype=np.int64)
    for i in range(n_pixels):
        out[i] = index % q
        index //= q
    return out


def labels_to_state(labels: np.ndarray, q: int) -> int:
    """Inverse of :func:`state_to_labels`."""
    index = 0
    for v in reversed(np.asarray(labels, dtype=np.int64)):
        index = index * q + int(v)
    return index


def _chunk_labels(start: int, stop: int, q: int, n_pixels: int) -> np.ndarray:
    idx = np.arange(start, stop, dtype=np.int64)[:, None]
    place = q ** np.arange(n_pixels, dtype=np.int64)[None, :]
    return (idx // place) % q


def _log_scores(spec: PosteriorSpec) -> np.ndarray:
    """Unnormalized log-posterior of every state, in canonical order."""
    ref = spec.reference
    n = ref.n_pixels
    size = _n_states(ref.q, n)
    t = spec.topology
    out = np.empty(size, dtype=np.float64)
    for start in range(0, size, _CHUNK):
        stop = min(start + _CHUNK, size)
        labels = _chunk_labels(start, stop, ref.q, n)
        f_vals = spec.f_table[labels, ref.labels[None, :]].sum(axis=1)
        e_vals = spec.e_table[labels[:, t.edge_u], labels[:, t.edge_v]].sum(axis=1)
        out[start:stop] = -(spec.f_coeff * f_vals + spec.e_coeff * e_vals)
    return out


def enumerate_posterior(spec: PosteriorSpec) -> np.ndarray:
    """Exact posterior probability of every state, in canonical order."""
    scores = _log_scores(spec)
    scores -= scores.max()
    weights = np.exp(scores)
    return weights / weights.sum()


def exact_marginals(spec: PosteriorSpec) -> np.ndarray:
    """Exact per-pixel label distributions, shape ``(n_pixels, q)``."""
    ref = spec.reference
    n, q = ref.n_pixels, ref.q
    probs = enumerate_posterior(spec)
    out = np.zeros((n, q), dtype=np.float64)
    for start in range(0, probs.shape[0], _CHUNK):
        stop = min(start + _CHUNK, probs.shape[0])
        labels = _chunk_labels(start, stop, q, n)
        chunk = probs[start:stop]
        for i in range(n):
            np.add.at(out[i], labels[:, i], chunk)
    return out


def _prior_energies(topology: Topology, q: int) -> np.ndarray:
    """Disagreement energy of every state of the lattice."""
    n = topology.n_pixels
    size = _n_states(q, n)
    out = np.empty(size, dtype=np.float64)
    for start in range(0, size, _CHUNK):
        stop = min(start + _CHUNK, size)
        labels = _chunk_labels(start, stop, q, n)
        out[start:stop] = (
            labels[:, topology.edge_u] != labels[:, topology.edge_v]
        ).sum(axis=1)
    return out


def prior_log_partition(beta: float, topology: Topology, q: int) -> float:
    """``log Z(beta)`` of the disagreement prior by direct summation."""
    energies = _prior_energies(topology, q)
    scores = -beta * energies
    m = scores.max()
    return float(m + math.log(np.exp(scores - m).sum()))


def exact_mean_energy(beta: float, topology: Topology, q: int) -> float:
    """Expected disagreement energy under the Gibbs prior at coupling ``beta``.

    Equals ``-d log Z / d beta``; computed here as the direct weighted sum
    over all configurations.
    """
    energies = _prior_energies(topology, q)
    scores = -beta * energies
    scores -= scores.max()
    weights = np.exp(scores)
    return float((energies * weights).sum() / weights.sum())


def build_transition_matrix(spec: PosteriorSpec, kind: SamplerKind) -> np.ndarray:
    """Explicit single-pixel transition matrix over the full state space.

    Proposals pick a pixel uniformly and one of the other ``q - 1`` labels
    uniformly, matching the samplers; the acceptance rule is Metropolis or
    heat-bath.  The diagonal absorbs all rejection mass so every column sums
    to 1.  Guarded at 4096 states (tighter than the enumeration guard) since
    the matrix is dense.
    """
    kind = SamplerKind(kind)
    if kind not in (SamplerKind.METROPOLIS, SamplerKind.GIBBS):
        raise ValueError("transition matrices are defined for the Metropolis and heat-bath rules")
    ref = spec.reference
    n, q = ref.n_pixels, ref.q
    size = _n_states(q, n, limit=MATRIX_LIMIT)
    scores = _log_scores(spec)
    proposal = 1.0 / (n * (q - 1))
    matrix = np.zeros((size, size), dtype=np.float64)
    place = 1
    for i in range(n):
        digits = (np.arange(size) // place) % q
        for shift in range(1, q):
            new = (digits + shift) % q
            targets = np.arange(size) + (new - digits) * place
            delta = scores[targets] - scores
            if kind is SamplerKind.METROPOLIS:
                acc = np.exp(np.minimum(delta, 0.0))
            else:
                acc = 1.0 / (1.0 + np.exp(-delta))
            matrix[targets, np.arange(size)] += proposal * acc
        place *= q
    matrix[np.arange(size), np.arange(size)] += 1.0 - matrix.sum(axis=0)
    return matrix


def pi_dual(matrix: np.ndarray, pi: np.ndarray) -> np.ndarray:
    """Time reversal of a column-stochastic kernel with invariant ``pi``:
    ``dual = diag(pi) @ matrix.T @ diag(1 / pi)``.  Equals ``matrix`` exactly
    when the kernel satisfies detailed balance."""
    matrix = np.asarray(matrix, dtype=np.float64)
    pi = np.asarray(pi, dtype=np.float64)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {matrix.shape}")
    if pi.shape != (matrix.shape[0],):
        raise ValueError("distribution length does not match the matrix")
    if np.any(pi <= 0.0):
        raise ValueError("time reversal requires a strictly positive distribution")
    return pi[:, None] * matrix.T / pi[None, :]


def posterior_csv_rows(spec: PosteriorSpec) -> list[tuple[int, float]]:
    """(state index, probability) pairs for CSV export."""
    probs = enumerate_posterior(spec)
    return [(int(i), float(p)) for i, p in enumerate(probs)]
