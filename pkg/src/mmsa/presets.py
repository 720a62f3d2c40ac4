"""Ready-made demonstration models used by the CLI examples and the tests.

These are small, hand-specified models: a fully connected network of three
ternary variables, staged trees of two shapes, and classifier builders with
either fixed or randomly drawn CPTs.
"""

from __future__ import annotations

import itertools

import numpy as np

from .compilers import (
    BayesNetSpec,
    ClassifierSpec,
    StagedTreeSpec,
    TreeVertex,
    Variable,
    config_key,
)

# CPTs of the three-variable demo network.  Y1 has no parents, Y2 depends
# on Y1, Y3 depends on both; every variable has states 1..3.
_Y1 = (0.2, 0.3, 0.5)
_Y2_GIVEN_Y1 = {
    "1": (0.2, 0.3, 0.5),
    "2": (0.3, 0.3, 0.4),
    "3": (0.7, 0.2, 0.1),
}
_Y3_GIVEN_Y1_Y2 = {
    ("1", "1"): (0.1, 0.2, 0.7),
    ("2", "1"): (0.1, 0.3, 0.6),
    ("3", "1"): (0.2, 0.3, 0.5),
    ("1", "2"): (0.1, 0.4, 0.5),
    ("2", "2"): (0.3, 0.6, 0.1),
    ("3", "2"): (0.3, 0.5, 0.2),
    ("1", "3"): (0.8, 0.1, 0.1),
    ("2", "3"): (0.7, 0.2, 0.1),
    ("3", "3"): (0.4, 0.5, 0.1),
}


def ternary_complete_bn() -> BayesNetSpec:
    """Three ternary variables on a complete DAG: Y1 -> Y2 -> Y3, Y1 -> Y3.

    27 atoms, 39 parameters in 13 blocks; P(Y3=3) = 0.343.
    """
    states = ("1", "2", "3")
    variables = (
        Variable("Y1", states),
        Variable("Y2", states),
        Variable("Y3", states),
    )
    return BayesNetSpec(
        variables=variables,
        parents={"Y2": ("Y1",), "Y3": ("Y1", "Y2")},
        cpts={
            "Y1": {"": _Y1},
            "Y2": _Y2_GIVEN_Y1,
            "Y3": {
                config_key(c): probs for c, probs in _Y3_GIVEN_Y1_Y2.items()
            },
        },
    )


def five_atom_tree(
    theta: tuple[float, float, float] = (0.2, 0.5, 0.3),
    psi: tuple[float, float, float] = (0.4, 0.4, 0.2),
) -> StagedTreeSpec:
    """An asymmetric two-level tree with five leaves.

    The root splits into an internal vertex (probability theta[0]) and two
    leaves; the internal vertex splits into three leaves.  Atomic
    probabilities are theta1*psi1, theta1*psi2, theta1*psi3, theta2,
    theta3, so two of the five atoms never touch the second block.
    """
    return StagedTreeSpec(
        vertices=(
            TreeVertex("v0", ("w", "y4", "y5")),
            TreeVertex("w", ("y1", "y2", "y3")),
            TreeVertex("y1"),
            TreeVertex("y2"),
            TreeVertex("y3"),
            TreeVertex("y4"),
            TreeVertex("y5"),
        ),
        probabilities={"v0": tuple(theta), "w": tuple(psi)},
    )


def product_tree(
    theta: tuple[float, float, float] = (0.2, 0.5, 0.3),
    psi: tuple[float, float, float] = (0.4, 0.4, 0.2),
) -> StagedTreeSpec:
    """Two independent ternary splits: all three level-1 vertices share a stage.

    Every atom is theta_i * psi_j, so every combination of one parameter
    per block shows up in some monomial.
    """
    leaves = [f"l{i}{j}" for i in range(1, 4) for j in range(1, 4)]
    return StagedTreeSpec(
        vertices=(
            TreeVertex("r", ("a", "b", "c")),
            TreeVertex("a", tuple(leaves[0:3])),
            TreeVertex("b", tuple(leaves[3:6])),
            TreeVertex("c", tuple(leaves[6:9])),
        )
        + tuple(TreeVertex(leaf) for leaf in leaves),
        stages=(("a", "b", "c"),),
        probabilities={"r": tuple(theta), "a": tuple(psi)},
    )


def staged_three_level_tree() -> StagedTreeSpec:
    """The event tree of the ternary demo network with two stage merges.

    27 root-to-leaf paths over 13 internal vertices; the stages {v7, v8}
    and {v10, v11} identify two pairs of level-two distributions, leaving
    11 blocks and 33 parameters.
    """
    vertices = [TreeVertex("v0", ("v1", "v2", "v3"))]
    level2 = ["v4", "v5", "v6", "v7", "v8", "v9", "v10", "v11", "v12"]
    for i, vid in enumerate(("v1", "v2", "v3")):
        vertices.append(TreeVertex(vid, tuple(level2[3 * i : 3 * i + 3])))
    leaf_names = [f"u{i}" for i in range(27)]
    for i, vid in enumerate(level2):
        vertices.append(TreeVertex(vid, tuple(leaf_names[3 * i : 3 * i + 3])))
    vertices.extend(TreeVertex(leaf) for leaf in leaf_names)

    probabilities = {
        "v0": _Y1,
        "v1": _Y2_GIVEN_Y1["1"],
        "v2": _Y2_GIVEN_Y1["2"],
        "v3": _Y2_GIVEN_Y1["3"],
        "v4": _Y3_GIVEN_Y1_Y2[("1", "1")],
        "v5": _Y3_GIVEN_Y1_Y2[("1", "2")],
        "v6": _Y3_GIVEN_Y1_Y2[("1", "3")],
        "v7": _Y3_GIVEN_Y1_Y2[("2", "2")],
        "v9": _Y3_GIVEN_Y1_Y2[("2", "1")],
        "v10": _Y3_GIVEN_Y1_Y2[("3", "2")],
        "v12": _Y3_GIVEN_Y1_Y2[("3", "1")],
    }
    return StagedTreeSpec(
        vertices=tuple(vertices),
        stages=(("v7", "v8"), ("v10", "v11")),
        probabilities=probabilities,
    )


def naive_bayes_spec(
    n_features: int = 3,
    n_feature_states: int = 3,
    n_classes: int = 2,
    rng: np.random.Generator | None = None,
) -> ClassifierSpec:
    """A naive Bayes classifier with random (or seeded) CPTs."""
    rng = rng or np.random.default_rng(0)
    cls = Variable("Cl", tuple(str(i + 1) for i in range(n_classes)))
    features = tuple(
        Variable(f"F{i + 1}", tuple(str(s + 1) for s in range(n_feature_states)))
        for i in range(n_features)
    )
    cpts: dict[str, dict[str, tuple[float, ...]]] = {
        "Cl": {"": _random_column(rng, n_classes)}
    }
    for f in features:
        cpts[f.name] = {
            c: _random_column(rng, n_feature_states) for c in cls.states
        }
    return ClassifierSpec(class_variable=cls, features=features, cpts=cpts)


def spode_spec(
    n_features: int = 3,
    n_feature_states: int = 2,
    n_classes: int = 2,
    rng: np.random.Generator | None = None,
) -> ClassifierSpec:
    """A SPODE classifier whose first feature is the super parent."""
    rng = rng or np.random.default_rng(0)
    cls = Variable("Cl", tuple(str(i + 1) for i in range(n_classes)))
    features = tuple(
        Variable(f"F{i + 1}", tuple(str(s + 1) for s in range(n_feature_states)))
        for i in range(n_features)
    )
    sp = features[0]
    cpts: dict[str, dict[str, tuple[float, ...]]] = {
        "Cl": {"": _random_column(rng, n_classes)},
        sp.name: {c: _random_column(rng, n_feature_states) for c in cls.states},
    }
    for f in features[1:]:
        cpts[f.name] = {
            config_key((c, s)): _random_column(rng, n_feature_states)
            for c, s in itertools.product(cls.states, sp.states)
        }
    return ClassifierSpec(
        class_variable=cls,
        features=features,
        cpts=cpts,
        structure="spode",
        super_parent=sp.name,
    )


def _random_column(rng: np.random.Generator, size: int) -> tuple[float, ...]:
    # Dirichlet with a floor keeps every entry comfortably inside (0, 1).
    col = rng.dirichlet(np.ones(size)) * 0.9 + 0.1 / size
    col = col / col.sum()
    return tuple(float(x) for x in col)
