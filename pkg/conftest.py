"""
Shared fixtures: fields and the catalog algebras, built once per test session.
"""
import pytest

from engine.catalog import (
    build_b,
    build_j_vector_type,
    build_k3,
    build_k9,
    build_v_half,
    default_derivation,
    direct_sum,
)
from engine.scalars import PRIME, RATIONAL, FieldSpec


@pytest.fixture(scope="session")
def gf3():
    return FieldSpec(PRIME, 3)


@pytest.fixture(scope="session")
def gf5():
    return FieldSpec(PRIME, 5)


@pytest.fixture(scope="session")
def qq():
    return FieldSpec(RATIONAL)


@pytest.fixture(scope="session")
def k3(gf3):
    return build_k3(gf3)


@pytest.fixture(scope="session")
def k3_q(qq):
    return build_k3(qq)


@pytest.fixture(scope="session")
def k9(gf3):
    return build_k9(gf3)


@pytest.fixture(scope="session")
def b1_3(gf3):
    return build_b(gf3, 1)


@pytest.fixture(scope="session")
def b1_5(gf5):
    return build_b(gf5, 1)


@pytest.fixture(scope="session")
def v_half_3(b1_3):
    return build_v_half(b1_3, default_derivation(b1_3))


@pytest.fixture(scope="session")
def v_half_5(b1_5):
    return build_v_half(b1_5, default_derivation(b1_5))


@pytest.fixture(scope="session")
def j_vector_3(b1_3):
    return build_j_vector_type(b1_3, default_derivation(b1_3))


@pytest.fixture(scope="session")
def j_vector_5(b1_5):
    return build_j_vector_type(b1_5, default_derivation(b1_5))


@pytest.fixture(scope="session")
def k9_plus_v(k9, v_half_3):
    return direct_sum(k9, v_half_3)
