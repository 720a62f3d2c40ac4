import numpy as np
import pytest

from mmsa.compilers import compile_bn, compile_staged_tree
from mmsa.presets import (
    five_atom_tree,
    naive_bayes_spec,
    product_tree,
    staged_three_level_tree,
    ternary_complete_bn,
)


@pytest.fixture(scope="session")
def bn_spec():
    return ternary_complete_bn()


@pytest.fixture(scope="session")
def bn_model(bn_spec):
    return compile_bn(bn_spec)


@pytest.fixture(scope="session")
def tree_model():
    return compile_staged_tree(five_atom_tree())


@pytest.fixture(scope="session")
def product_tree_model():
    return compile_staged_tree(product_tree())


@pytest.fixture(scope="session")
def staged_tree_model():
    return compile_staged_tree(staged_three_level_tree())


@pytest.fixture()
def rng():
    return np.random.default_rng(20240817)


@pytest.fixture(scope="session")
def nb_spec():
    return naive_bayes_spec(3, 3, 2, np.random.default_rng(7))
