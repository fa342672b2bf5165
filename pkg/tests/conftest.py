"""Shared, session-scoped batches: the N = 50 ones dominate the suite's runtime."""

from __future__ import annotations

import pytest

from lindblad_spectra.experiment import ExperimentConfig, run_batch

SEED = 20240607
UNIVERSALITY_SAMPLERS = ("composite:1,1", "composite:1,3", "composite:2,0", "composite:2,1", "svd")


def _batch(**kw):
    kw.setdefault("seed", SEED)
    kw.setdefault("realizations", 20)
    return run_batch(ExperimentConfig(**kw))


@pytest.fixture(scope="session")
def wishart50():
    return _batch(n=50, sampler="wishart")


@pytest.fixture(scope="session")
def wishart30():
    return _batch(n=30, sampler="composite:1,1")


@pytest.fixture(scope="session")
def general50_half():
    return _batch(n=50, sampler="wishart", alpha=0.5)


@pytest.fixture(scope="session")
def universality30(wishart30):
    batches = {"composite:1,1": wishart30}
    for sampler in UNIVERSALITY_SAMPLERS[1:]:
        batches[sampler] = _batch(n=30, sampler=sampler)
    return batches


@pytest.fixture(scope="session")
def surrogate30_dissipative():
    return _batch(n=30, mode="rmt", model="general", alpha=0.0)
