import pytest
from hypothesis import HealthCheck, settings

from zkpoa.curves import load_profile
from zkpoa.gadgets import HARDENED, PAPER
from zkpoa.protocol import poa_setup
from zkpoa.rng import PrfRng

settings.register_profile(
    "zkpoa",
    deadline=None,
    max_examples=40,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.function_scoped_fixture],
)
settings.load_profile("zkpoa")


@pytest.fixture(scope="session")
def standard():
    return load_profile("standard")


@pytest.fixture(scope="session")
def toy():
    return load_profile("toy")


@pytest.fixture(scope="session")
def fr(standard):
    return standard.scalar_field


@pytest.fixture(scope="session")
def inner(standard):
    return standard.inner


@pytest.fixture(scope="session")
def paper_keys(standard):
    return poa_setup(PAPER, PrfRng(b"paper-keys"), standard, test_mode=True)


@pytest.fixture(scope="session")
def hardened_keys(standard):
    return poa_setup(HARDENED, PrfRng(b"hardened-keys"), standard, test_mode=True)


@pytest.fixture
def rng(request):
    # deterministic per test
    return PrfRng(request.node.nodeid)
