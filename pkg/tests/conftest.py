"""Shared fixtures: moderate-degree models reused across the suite."""

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

import spanlab as sl

settings.register_profile(
    "lab",
    deadline=None,
    max_examples=25,
    derandomize=True,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.function_scoped_fixture],
)
settings.load_profile("lab")


@pytest.fixture(scope="session")
def disk_domain():
    return sl.disk()


@pytest.fixture(scope="session")
def disk_model(disk_domain):
    return sl.build_model(
        disk_domain, probes=[0.5 + 0.1j, -0.3 + 0.45j], watch_order=2, tol=1e-9
    )


@pytest.fixture(scope="session")
def annulus_domain():
    return sl.annulus(0.5)


@pytest.fixture(scope="session")
def annulus_model(annulus_domain):
    return sl.build_model(
        annulus_domain, probes=[0.75 + 0.0j, 0.6j], watch_order=2, tol=1e-9
    )


@pytest.fixture(scope="session")
def ellipse_model():
    # Not rotation invariant, so this exercises the dense boundary-Gram route.
    dom = sl.ellipse(semi_axes=(1.0, 0.6))
    return sl.build_model(dom, probes=[0.2 + 0.1j], watch_order=1, tol=1e-8)


@pytest.fixture()
def rng():
    return np.random.default_rng(20260822)
