"""Shared fixtures.

The compiled kernels JIT on first use; the session-scoped warmup below runs
every kernel once on tiny inputs so that no individual test pays (or times)
the compilation.
"""

import numpy as np
import pytest

import mrfdenoise as m


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    image = m.GrayImage.from_grid(np.array([[0, 1], [1, 0]]), q=2)
    spec = m.PosteriorSpec(m.IsingPotts(), m.Distance.HAMMING, 1.0, image)
    for kind in m.SamplerKind:
        state = m.ChainState.from_image(image, spec, m.make_rng(0))
        m.run_sweeps(state, spec, kind, 2, trace=False)
    m.label_clusters(m.sample_bonds(image, 1.0, m.make_rng(0)))


@pytest.fixture
def rng():
    return m.make_rng(0)
