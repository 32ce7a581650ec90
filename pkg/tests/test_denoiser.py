"""The estimator facade: parameter handling and end-to-end pipelines."""

import numpy as np
import pytest
from sklearn.base import clone
from sklearn.pipeline import Pipeline

from mrfdenoise import ChannelDegrader, MRFDenoiser, generate_robot
from mrfdenoise.denoiser import check_label_image


class TestCheckLabelImage:
    def test_accepts_integer_grid(self):
        grid = np.array([[0, 1], [1, 0]])
        out = check_label_image(grid, q=2)
        assert out.dtype == np.int64

    @pytest.mark.parametrize(
        "bad",
        [
            np.array([0, 1, 0]),  # not 2-D
            np.array([[0.5, 1.0]]),  # not integral
            np.array([[0, 2]]),  # label out of range for q = 2
            np.array([[-1, 0]]),  # negative label
        ],
    )
    def test_rejects_invalid_grids(self, bad):
        with pytest.raises(ValueError):
            check_label_image(bad, q=2)


class TestSklearnProtocol:
    def test_get_set_params_round_trip(self):
        est = MRFDenoiser(sweeps=50, temperature=0.7)
        params = est.get_params()
        assert params["sweeps"] == 50 and params["temperature"] == 0.7
        est.set_params(sweeps=10)
        assert est.get_params()["sweeps"] == 10

    def test_clone_preserves_params(self):
        est = MRFDenoiser(sampler="gibbs", q=3, sweeps=17)
        twin = clone(est)
        assert twin.get_params() == est.get_params()

    def test_fit_returns_self(self):
        grid = np.zeros((4, 4), dtype=np.int64)
        est = MRFDenoiser(sweeps=5, temperature=0.5)
        assert est.fit(grid) is est

    def test_degrader_protocol(self):
        est = ChannelDegrader(channel="qary", p=0.1, q=4, seed=2)
        assert clone(est).get_params() == est.get_params()
        grid = np.ones((8, 8), dtype=np.int64)
        assert est.fit(grid) is est


class TestTransforms:
    def test_degrade_then_restore_pipeline(self):
        truth = generate_robot(48, 48, 2, seed=0).grid()
        pipeline = Pipeline(
            [
                ("noise", ChannelDegrader(channel="bsc", p=0.05, q=2, seed=4)),
                ("denoise", MRFDenoiser(sampler="greedy", temperature=0.5, q=2,
                                        sweeps=20, seed=0)),
            ]
        )
        restored = pipeline.fit_transform(truth)
        assert restored.shape == truth.shape
        assert int(np.count_nonzero(restored != truth)) <= 5

    def test_transform_is_deterministic(self):
        truth = generate_robot(32, 32, 3, seed=1).grid()
        noisy = ChannelDegrader(channel="qary", p=0.1, q=3, seed=7).fit_transform(truth)
        runs = [
            MRFDenoiser(sampler="metropolis", prior="potts", temperature=0.6,
                        q=3, sweeps=30, seed=5).fit_transform(noisy)
            for _ in range(2)
        ]
        assert np.array_equal(runs[0], runs[1])

    def test_fitted_attributes_describe_the_run(self):
        truth = generate_robot(32, 32, 2, seed=2).grid()
        noisy = ChannelDegrader(channel="bsc", p=0.05, q=2, seed=1).fit_transform(truth)
        est = MRFDenoiser(sampler="gibbs", temperature=0.5, q=2, sweeps=40,
                          burn_in=10, seed=0, estimate="mpm")
        est.fit_transform(noisy)
        assert len(est.trace_) == 40
        assert est.ensemble_.count == 30
        assert est.result_.state.sweep == 40

    def test_estimate_choice_changes_output_source(self):
        truth = generate_robot(32, 32, 2, seed=2).grid()
        noisy = ChannelDegrader(channel="bsc", p=0.05, q=2, seed=1).fit_transform(truth)
        outputs = {}
        for name in ("map", "mpm", "tpm"):
            est = MRFDenoiser(sampler="metropolis", temperature=0.5, q=2,
                              sweeps=30, burn_in=5, seed=3, estimate=name)
            outputs[name] = est.fit_transform(noisy)
        for name, grid in outputs.items():
            assert grid.shape == (32, 32)
        # Binary posteriors tie the vote to the rounded mean.
        assert np.array_equal(outputs["mpm"], outputs["tpm"])

    def test_invalid_sampler_name(self):
        est = MRFDenoiser(sampler="anneal", temperature=0.5)
        with pytest.raises(ValueError):
            est.fit_transform(np.zeros((4, 4), dtype=np.int64))

    def test_labels_must_fit_q(self):
        est = MRFDenoiser(temperature=0.5, q=2)
        with pytest.raises(ValueError):
            est.fit_transform(np.full((4, 4), 3, dtype=np.int64))

    def test_gaussian_channel_parameters(self):
        truth = generate_robot(32, 32, 4, seed=0).grid()
        noisy = ChannelDegrader(channel="gaussian", alpha=1.0, sigma=0.7,
                                q=4, seed=3).fit_transform(truth)
        assert noisy.min() >= 0 and noisy.max() <= 3
        assert np.any(noisy != truth)
