import pytest

from gascap import (
    Encoding,
    build_hubo,
    build_qubo,
    coeff_table,
    reference_instance,
)


@pytest.fixture(scope="session")
def instance():
    return reference_instance()


@pytest.fixture(scope="session")
def table(instance):
    return coeff_table(instance)


@pytest.fixture(scope="session")
def qubo(instance, table):
    return build_qubo(instance, 1.0, table)


@pytest.fixture(scope="session")
def hubo_asc(instance, table):
    return build_hubo(instance, Encoding.BINARY_ASCENDING, 1.0, table)


@pytest.fixture(scope="session")
def hubo_desc(instance, table):
    return build_hubo(instance, Encoding.BINARY_DESCENDING, 1.0, table)
