"""Random models and variation recipes for the randomized suites.

A recipe produces (model, theta, targets, expected_kind).  The expected
kind is asserted by the tests, so a drift in the classifier would surface
immediately rather than silently changing what the randomized suites
exercise.
"""

from __future__ import annotations

import numpy as np

from mmsa.compilers import (
    BayesNetSpec,
    Variable,
    compile_bn,
    compile_staged_tree,
    config_key,
)
from mmsa.presets import five_atom_tree, product_tree


def random_simplex(rng: np.random.Generator, size: int, floor=0.04):
    v = rng.dirichlet(np.ones(size))
    v = v * (1.0 - size * floor) + floor
    v = v / v.sum()
    return tuple(float(x) for x in v)


def random_chain_bn(rng: np.random.Generator, n_states: int = 3) -> BayesNetSpec:
    """Y1 -> Y2 with random CPTs; 1 + n_states blocks."""
    states = tuple(str(i + 1) for i in range(n_states))
    variables = (Variable("Y1", states), Variable("Y2", states))
    cpts = {
        "Y1": {"": random_simplex(rng, n_states)},
        "Y2": {config_key((s,)): random_simplex(rng, n_states) for s in states},
    }
    return BayesNetSpec(variables, {"Y2": ("Y1",)}, cpts)


def random_two_root_bn(rng: np.random.Generator, n_states: int = 3) -> BayesNetSpec:
    """Two independent variables; every parameter pair shares a monomial."""
    states = tuple(str(i + 1) for i in range(n_states))
    variables = (Variable("Y1", states), Variable("Y2", states))
    cpts = {
        "Y1": {"": random_simplex(rng, n_states)},
        "Y2": {"": random_simplex(rng, n_states)},
    }
    return BayesNetSpec(variables, {}, cpts)


def random_tree_models(rng: np.random.Generator):
    theta = random_simplex(rng, 3)
    psi = random_simplex(rng, 3)
    return (
        compile_staged_tree(five_atom_tree(theta, psi)),
        compile_staged_tree(product_tree(theta, psi)),
    )


def _target(rng: np.random.Generator, lo=0.08, hi=0.85) -> float:
    return float(rng.uniform(lo, hi))


def variation_cases(rng: np.random.Generator):
    """One case per analysis kind, over a fresh random model each.

    Yields (model, theta, targets, expected_kind) tuples covering
    independent (single parameter, same-block pair, incompatible-config
    pair), fully dependent, and conditionally dependent choices, plus an
    unclassifiable one.
    """
    n_states = int(rng.integers(2, 4))
    chain = compile_bn(random_chain_bn(rng, n_states))
    roots = compile_bn(random_two_root_bn(rng, n_states))
    asym, prod = random_tree_models(rng)

    model, theta = chain
    # Single parameter anywhere is an independent analysis.
    j = int(rng.integers(0, model.n_params))
    yield model, theta, {j: _target(rng)}, "independent"

    # Two parameters of one block.
    block = model.partition.blocks[int(rng.integers(0, model.partition.n_blocks))]
    if len(block) >= 3:
        a, b = block[0], block[1]
        ta = _target(rng, 0.05, 0.45)
        tb = _target(rng, 0.05, 0.9 - ta)
        yield model, theta, {a: ta, b: tb}, "independent"

    # Parameters under incompatible parent configurations never co-occur.
    s1, s2 = 0, 1
    blk1 = 1 + s1  # block of Y2 | Y1=state1 (block 0 is the Y1 marginal)
    blk2 = 1 + s2
    a = model.partition.blocks[blk1][0]
    b = model.partition.blocks[blk2][1]
    yield model, theta, {a: _target(rng), b: _target(rng)}, "independent"

    # One parameter per root marginal: every combination shares a monomial.
    rmodel, rtheta = roots
    a = rmodel.partition.blocks[0][int(rng.integers(0, n_states))]
    b = rmodel.partition.blocks[1][int(rng.integers(0, n_states))]
    yield rmodel, rtheta, {a: _target(rng), b: _target(rng)}, "fully_dependent"

    pmodel, ptheta = prod
    a = pmodel.partition.blocks[0][int(rng.integers(0, 3))]
    b = pmodel.partition.blocks[1][int(rng.integers(0, 3))]
    yield pmodel, ptheta, {a: _target(rng), b: _target(rng)}, "fully_dependent"

    # Root state plus a child parameter conditional on that same state.
    a_state = int(rng.integers(0, n_states))
    a = model.partition.blocks[0][a_state]
    b = model.partition.blocks[1 + a_state][int(rng.integers(0, n_states))]
    yield model, theta, {a: _target(rng), b: _target(rng)}, "conditionally_dependent"

    amodel, atheta = asym
    b = 3 + int(rng.integers(0, 3))
    yield amodel, atheta, {0: _target(rng), b: _target(rng)}, "conditionally_dependent"

    # Root state plus a child parameter conditional on a different state.
    c_state = (a_state + 1) % n_states
    b = model.partition.blocks[1 + c_state][0]
    yield model, theta, {a: _target(rng), b: _target(rng)}, "other"

    yield amodel, atheta, {1: _target(rng, 0.05, 0.6), 3: _target(rng, 0.05, 0.6)}, "other"


def three_class_cases(rng: np.random.Generator):
    """Only the cases of the three kinds the projection theorem covers."""
    for case in variation_cases(rng):
        if case[3] != "other":
            yield case
