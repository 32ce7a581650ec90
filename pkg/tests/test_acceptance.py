"""End-to-end guarantees: restoration quality, sampler exactness, and speed.

Each test here states a user-facing promise about the package as a whole and
pins the tolerances it must meet.  The per-module unit suites explain *how*
the pieces work; this file checks that the assembled pipeline actually
restores images, that every sampler targets the distribution it claims to,
and that the incremental bookkeeping never drifts from the truth.

Seeds follow one convention throughout: ``seed=s`` draws the clean figure,
``make_rng(100 + s)`` drives the noise channel, and ``make_rng(200 + s)``
drives the chain, so every stage varies independently across the suite.
"""

import math
import time

import numpy as np
import pytest

from mrfdenoise import (
    BinarySymmetric,
    ChainState,
    Distance,
    Ensemble,
    GemenMcClure,
    GrayImage,
    IsingPotts,
    PosteriorSpec,
    QarySymmetric,
    SamplerKind,
    apply_move,
    beta_l_from_p,
    build_transition_matrix,
    degrade,
    energy,
    enumerate_posterior,
    exact_marginals,
    generate_robot,
    hamming_distance,
    make_rng,
    p_from_beta_l,
    pi_dual,
    run_restoration,
    run_sweeps,
)


def _restore_greedy(truth, channel, temperature, seed, n_sweeps):
    noisy = degrade(truth, channel, make_rng(100 + seed))
    spec = PosteriorSpec(
        IsingPotts(), Distance.HAMMING, beta=1.0 / temperature, reference=noisy
    )
    state = ChainState.from_image(noisy, spec, make_rng(200 + seed))
    state, reports = run_sweeps(state, spec, SamplerKind.GREEDY, n_sweeps)
    return state, reports


class TestRestorationQuality:
    def test_binary_restoration_is_fast_and_nearly_exact(self):
        # A 92x92 two-level figure through a 5% flip channel, cleaned by
        # greedy ascent at T = 1/2: at least 9 of 10 seeds must be within
        # 0.5% of the truth after 5 sweeps and within 0.1% after 50, with
        # the whole campaign under five seconds.
        n = 92 * 92
        good = 0
        started = time.perf_counter()
        for seed in range(10):
            truth = generate_robot(92, 92, 2, seed=seed)
            noisy = degrade(truth, BinarySymmetric(0.05), make_rng(100 + seed))
            spec = PosteriorSpec(
                IsingPotts(), Distance.HAMMING, beta=2.0, reference=noisy
            )
            state = ChainState.from_image(noisy, spec, make_rng(200 + seed))
            state, _ = run_sweeps(state, spec, SamplerKind.GREEDY, 5)
            err_5 = hamming_distance(state.current, truth) / n
            state, _ = run_sweeps(state, spec, SamplerKind.GREEDY, 45)
            err_50 = hamming_distance(state.current, truth) / n
            if err_5 <= 0.005 and err_50 <= 0.001:
                good += 1
        elapsed = time.perf_counter() - started
        assert good >= 9
        assert elapsed < 5.0

    def test_five_level_restoration(self):
        # One 56x56 five-level figure through a 5% symmetric replacement
        # channel, greedy at T = 0.51: under 1% error within 100 sweeps
        # and under ten seconds.
        truth = generate_robot(56, 56, 5, seed=0)
        started = time.perf_counter()
        state, _ = _restore_greedy(truth, QarySymmetric(0.05), 0.51, seed=0, n_sweeps=100)
        elapsed = time.perf_counter() - started
        assert hamming_distance(state.current, truth) / (56 * 56) < 0.01
        assert elapsed < 10.0

    def test_moderate_temperature_beats_both_extremes(self):
        # Too cold (T = 0.01) freezes the noise in place; too hot (T = 2.5)
        # melts the figure itself.  Averaged over 10 seeds, T = 0.51 must
        # strictly beat both.
        mean_error = {}
        for temperature in (0.01, 0.51, 2.5):
            total = 0
            for seed in range(10):
                truth = generate_robot(56, 56, 5, seed=seed)
                state, _ = _restore_greedy(
                    truth, QarySymmetric(0.05), temperature, seed=seed, n_sweeps=100
                )
                total += hamming_distance(state.current, truth)
            mean_error[temperature] = total / 10.0
        assert mean_error[0.51] < mean_error[2.5]
        assert mean_error[0.51] < mean_error[0.01]

    def test_greedy_trace_climbs_then_settles(self):
        # The recorded objective must never decrease, and over the last 10%
        # of sweeps it must be flat to within 1e-9.
        truth = generate_robot(92, 92, 2, seed=0)
        _, reports = _restore_greedy(truth, BinarySymmetric(0.05), 0.5, seed=0, n_sweeps=50)
        values = [r.log_posterior for r in reports]
        assert all(b >= a for a, b in zip(values, values[1:]))
        tail = values[int(0.9 * len(values)):]
        assert max(tail) - min(tail) < 1e-9


class TestSamplerExactness:
    def test_all_samplers_reproduce_exact_marginals(self):
        # On a 3x3 two-level posterior (unit inverse temperature, observed
        # image flat except one flipped pixel) every sampler's empirical
        # per-pixel marginals must land within 0.01 of exhaustive
        # enumeration after 2e5 retained sweeps, all four chains inside a
        # minute.
        grid = np.zeros((3, 3), dtype=np.int64)
        grid[1, 1] = 1
        observed = GrayImage.from_grid(grid, 2)
        spec = PosteriorSpec(IsingPotts(), Distance.HAMMING, beta=1.0, reference=observed)
        exact = exact_marginals(spec)
        kinds = [
            SamplerKind.METROPOLIS,
            SamplerKind.GIBBS,
            SamplerKind.SWENDSEN_WANG,
            SamplerKind.WOLFF,
        ]
        started = time.perf_counter()
        for kind in kinds:
            result = run_restoration(
                spec, kind, n_sweeps=2_000 + 200_000, burn_in=2_000, rng=make_rng(0)
            )
            assert result.ensemble.count == 200_000
            estimated = result.ensemble.tallies / result.ensemble.count
            assert np.abs(estimated - exact).max() < 0.01
        assert time.perf_counter() - started < 60.0

    @pytest.mark.parametrize("kind", [SamplerKind.METROPOLIS, SamplerKind.GIBBS])
    def test_transition_matrices_are_reversible_kernels(self, kind):
        # The 16-state single-site kernels: columns are probability vectors,
        # probability flow balances in detail, and each kernel equals its
        # own time reversal, all to 1e-12.
        observed = GrayImage.from_grid(np.array([[0, 1], [1, 0]], dtype=np.int64), 2)
        spec = PosteriorSpec(IsingPotts(), Distance.HAMMING, beta=1.0, reference=observed)
        matrix = build_transition_matrix(spec, kind)
        pi = enumerate_posterior(spec)
        assert matrix.shape == (16, 16)
        assert np.abs(matrix.sum(axis=0) - 1.0).max() <= 1e-12
        flow = pi[None, :] * matrix
        assert np.abs(flow - flow.T).max() <= 1e-12
        assert np.abs(pi_dual(matrix, pi) - matrix).max() <= 1e-12

    def test_cluster_chain_hits_prior_mean_energy(self):
        # Bond-cluster sweeps on a single free bond: the long-run mean
        # energy must match the closed form (q-1)e^{-beta} / (1+(q-1)e^{-beta})
        # at both zero and unit coupling, one million sweeps each.
        reference = GrayImage.from_grid(np.zeros((1, 2), dtype=np.int64), 2)
        for beta, target in ((0.0, 0.5), (1.0, 1.0 / (1.0 + math.e))):
            spec = PosteriorSpec.prior_only(IsingPotts(), beta=beta, reference=reference)
            state = ChainState.from_image(reference, spec, make_rng(0))
            state, _ = run_sweeps(state, spec, SamplerKind.SWENDSEN_WANG, 10, trace=False)
            total = 0.0
            n = 1_000_000
            for _ in range(n):
                state, _ = run_sweeps(
                    state, spec, SamplerKind.SWENDSEN_WANG, 1, trace=False
                )
                total += state.cached_e
            assert total / n == pytest.approx(target, abs=0.005)


class TestNumericalContracts:
    @pytest.mark.parametrize("q", [2, 5, 10])
    def test_noise_level_coupling_round_trip(self, q):
        for beta_l in (0.1, 1.0, 3.0, 10.0):
            assert beta_l_from_p(p_from_beta_l(beta_l, q), q) == pytest.approx(
                beta_l, abs=1e-12
            )
        # Zero coupling means the channel output carries no information at
        # all, so a sample disagrees with the input with probability (q-1)/q.
        assert p_from_beta_l(0.0, q) == (q - 1) / q

    def test_binary_vote_equals_rounded_mean(self):
        # With two labels, the per-pixel majority vote and the rounded
        # per-pixel mean are the same estimator, bit for bit, whatever the
        # ensemble contains.
        rng = make_rng(17)
        for _ in range(100):
            count = int(rng.integers(1, 30))
            ensemble = Ensemble(3, 2, 2)
            for index in range(count):
                sample = GrayImage.from_grid(rng.integers(0, 2, size=(2, 3)), 2)
                ensemble.collect(sample, float(-index))
            assert ensemble.mpm_estimate() == ensemble.tpm_estimate()

    def test_incremental_caches_survive_a_long_random_walk(self):
        # 1e5 random single-pixel moves on a 16x16 five-level image: the
        # running F and E totals must equal from-scratch recomputation --
        # exactly for the integer-valued pairing, to 1e-9 for the smooth one.
        observed = GrayImage.from_grid(make_rng(0).integers(0, 5, size=(16, 16)), 5)
        pairs = [
            (IsingPotts(), Distance.HAMMING, 0.0),
            (GemenMcClure(width=1.0), Distance.SYMMETRIC_KL, 1e-9),
        ]
        for prior, distance, tolerance in pairs:
            spec = PosteriorSpec(prior, distance, beta=1.3, reference=observed)
            state = ChainState.from_image(observed, spec, make_rng(1))
            moves = make_rng(2)
            for index in range(100_000):
                pixel = int(moves.integers(state.n_pixels))
                label = int(moves.integers(observed.q))
                apply_move(state, pixel, label, spec)
                if (index + 1) % 10_000 == 0:
                    f_true = spec.distance.between(state.current, observed)
                    e_true = energy(state.current, spec.prior, spec.topology)
                    assert abs(state.cached_f - f_true) <= tolerance
                    assert abs(state.cached_e - e_true) <= tolerance
