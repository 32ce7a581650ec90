"""Bayesian MCMC restoration of noisy quantized images.

The package models a noisy image as the observation of an unknown clean
image pushed through a per-pixel noise channel, places a Markov random
field smoothing prior on the clean image, and samples the resulting
posterior with single-pixel (greedy ascent, Metropolis, heat-bath) or
cluster (Swendsen-Wang, Wolff) Markov chains.  Point estimates (MAP, MPM,
TPM) are read off the sampled ensemble.  Tiny instances can be checked
exactly against the enumeration oracle.
"""

from .channels import (
    BinarySymmetric,
    ChannelModel,
    Gaussian,
    Poisson,
    QarySymmetric,
    beta_l_from_p,
    degrade,
    log_likelihood,
    p_from_beta_l,
)
from .denoiser import ChannelDegrader, MRFDenoiser, check_label_image
from .errors import CapacityError, PgmParseError
from .estimators import (
    Ensemble,
    RestorationResult,
    default_burn_in,
    run_restoration,
)
from .image import GrayImage, Topology, edge_count, state_space_size
from .metrics import (
    Distance,
    GemenMcClure,
    IsingPotts,
    Prior,
    energy,
    evaluate_images,
    hamming_distance,
    poisson_nll,
    satisfied_bond_count,
    symmetric_kl,
)
from .oracle import (
    build_transition_matrix,
    enumerate_posterior,
    exact_marginals,
    exact_mean_energy,
    labels_to_state,
    pi_dual,
    prior_log_partition,
    state_to_labels,
)
from .pgm import read_pgm, write_pgm
from .posterior import ChainState, PosteriorSpec, apply_move, delta_log_posterior, log_posterior
from .rng import make_rng, spawn_rngs
from .robot import generate_robot
from .samplers import (
    BondField,
    SamplerKind,
    SweepReport,
    bond_probability,
    gibbs_step,
    greedy_map_step,
    label_clusters,
    metropolis_step,
    run_sweeps,
    sample_bonds,
    sw_step,
    wolff_step,
)

__version__ = "0.1.0"

__all__ = [
    "BinarySymmetric",
    "BondField",
    "CapacityError",
    "ChainState",
    "ChannelDegrader",
    "ChannelModel",
    "Distance",
    "Ensemble",
    "Gaussian",
    "GemenMcClure",
    "GrayImage",
    "IsingPotts",
    "MRFDenoiser",
    "PgmParseError",
    "Poisson",
    "PosteriorSpec",
    "Prior",
    "QarySymmetric",
    "RestorationResult",
    "SamplerKind",
    "SweepReport",
    "Topology",
    "apply_move",
    "beta_l_from_p",
    "bond_probability",
    "build_transition_matrix",
    "check_label_image",
    "default_burn_in",
    "degrade",
    "delta_log_posterior",
    "edge_count",
    "energy",
    "enumerate_posterior",
    "evaluate_images",
    "exact_marginals",
    "exact_mean_energy",
    "generate_robot",
    "gibbs_step",
    "greedy_map_step",
    "hamming_distance",
    "label_clusters",
    "labels_to_state",
    "log_likelihood",
    "log_posterior",
    "make_rng",
    "metropolis_step",
    "p_from_beta_l",
    "pi_dual",
    "poisson_nll",
    "prior_log_partition",
    "read_pgm",
    "run_restoration",
    "run_sweeps",
    "sample_bonds",
    "satisfied_bond_count",
    "spawn_rngs",
    "state_space_size",
    "state_to_labels",
    "sw_step",
    "symmetric_kl",
    "wolff_step",
    "write_pgm",
]
