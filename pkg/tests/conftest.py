import pytest

from sgmod import (
    build_truncated_poly_ring,
    build_zmod,
    cyclic_group_monoid,
    free_monoid,
    ring_as_module,
    saturating_monoid,
)


@pytest.fixture(scope="session")
def z4():
    return build_zmod(4)


@pytest.fixture(scope="session")
def z5():
    return build_zmod(5)


@pytest.fixture(scope="session")
def z6():
    return build_zmod(6)


@pytest.fixture(scope="session")
def z12():
    return build_zmod(12)


@pytest.fixture(scope="session")
def trunc():
    # F2[a,b] with every monomial of degree >= 3 killed; 64 elements
    return build_truncated_poly_ring(2, 2, 3)


@pytest.fixture(scope="session")
def m4(z4):
    return ring_as_module(z4)


@pytest.fixture(scope="session")
def m5(z5):
    return ring_as_module(z5)


@pytest.fixture(scope="session")
def m6(z6):
    return ring_as_module(z6)


@pytest.fixture(scope="session")
def m12(z12):
    return ring_as_module(z12)


@pytest.fixture(scope="session")
def mt(trunc):
    return ring_as_module(trunc)


@pytest.fixture(scope="session")
def nat():
    return free_monoid(1)


@pytest.fixture(scope="session")
def sat2():
    return saturating_monoid(2)


@pytest.fixture(scope="session")
def c2():
    return cyclic_group_monoid(2)


@pytest.fixture(scope="session")
def c3():
    return cyclic_group_monoid(3)
