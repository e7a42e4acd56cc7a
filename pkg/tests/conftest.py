import warnings

import pytest

from jacobilab import JacobiParameters, RadialGrid, SpectralGrid


@pytest.fixture(scope="session")
def generic_params():
    return JacobiParameters(1.2, 0.3)


@pytest.fixture(scope="session")
def h3_params():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return JacobiParameters(0.5, -0.5, relaxed=True)


@pytest.fixture(scope="session")
def dr_params():
    return JacobiParameters(1.5, 0.5)


@pytest.fixture(scope="session")
def grids(generic_params):
    """Full-size grid pair for the generic preset, built once per session."""
    return (
        RadialGrid.graded(generic_params, 20.0, 400),
        SpectralGrid.build(generic_params, 50.0, 300),
    )


@pytest.fixture(scope="session")
def small_grids(generic_params):
    """Cheap grid pair for tests that only need qualitative behavior."""
    return (
        RadialGrid.graded(generic_params, 12.0, 120),
        SpectralGrid.build(generic_params, 30.0, 120),
    )
