import pytest

from gkraman import deformation


@pytest.fixture(scope="session")
def harmonic_spec():
    return deformation.harmonic()


@pytest.fixture(scope="session")
def squared_spec():
    return deformation.squared()


@pytest.fixture(scope="session")
def pt_spec():
    return deformation.poschl_teller(1.0)


@pytest.fixture(scope="session")
def registry_specs(harmonic_spec, squared_spec, pt_spec):
    return [harmonic_spec, squared_spec, pt_spec]
