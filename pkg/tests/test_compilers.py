import itertools
import math

import numpy as np
import pytest

from mmsa.compilers import (
    BayesNetSpec,
    ClassifierSpec,
    StagedTreeSpec,
    TreeVertex,
    Variable,
    atoms_matching,
    bn_layout,
    build_classifier,
    compile_bn,
    compile_staged_tree,
    config_key,
)
from mmsa.core import (
    atom_distribution,
    check_multilinear,
    check_regular,
    event_probability,
    validate,
)
from mmsa.errors import InvalidModel, UnknownName
from mmsa.presets import five_atom_tree, naive_bayes_spec, spode_spec

from generators import random_simplex


def joint_by_enumeration(spec: BayesNetSpec) -> dict[tuple[str, ...], float]:
    """Independent oracle: multiply CPT entries over all assignments."""
    index = {v.name: i for i, v in enumerate(spec.variables)}
    joint = {}
    for assignment in itertools.product(*(v.states for v in spec.variables)):
        p = 1.0
        for v in spec.variables:
            cfg = config_key(
                tuple(assignment[index[q]] for q in spec.parents.get(v.name, ()))
            )
            column = spec.cpts[v.name][cfg]
            p *= column[v.states.index(assignment[index[v.name]])]
        joint[assignment] = p
    return joint


class TestCompileBn:
    def test_demo_network_shape(self, bn_model):
        model, theta = bn_model
        assert model.n_atoms == 27
        assert model.n_params == 39
        assert model.partition.n_blocks == 13
        assert all(
            len(model.matrix.row(a)) == 3 for a in range(model.n_atoms)
        )
        assert validate(model, theta).ok

    def test_single_binary_variable(self):
        spec = BayesNetSpec(
            (Variable("A", ("0", "1")),), {}, {"A": {"": (0.4, 0.6)}}
        )
        model, theta = compile_bn(spec)
        assert model.n_atoms == 2 and model.n_params == 2
        assert model.partition.n_blocks == 1
        assert model.matrix.dense().tolist() == [[1, 0], [0, 1]]
        assert check_regular(model, strict=True)

    def test_two_independent_ternary_variables(self):
        spec = BayesNetSpec(
            (Variable("A", ("1", "2", "3")), Variable("B", ("1", "2", "3"))),
            {},
            {"A": {"": (0.2, 0.3, 0.5)}, "B": {"": (0.1, 0.6, 0.3)}},
        )
        model, theta = compile_bn(spec)
        assert model.n_atoms == 9 and model.n_params == 6
        assert model.partition.n_blocks == 2
        dist = atom_distribution(model, theta)
        expected = [
            a * b for a in (0.2, 0.3, 0.5) for b in (0.1, 0.6, 0.3)
        ]
        assert dist == pytest.approx(expected, abs=1e-15)

    def test_labels_follow_conditional_convention(self, bn_model):
        _, theta = bn_model
        assert theta.labels[1] == "P(Y1=2)"
        assert "P(Y3=3|Y2=2,Y1=1)" in theta.labels

    def test_regularity_of_compiled_networks(self, bn_model):
        model, _ = bn_model
        assert check_multilinear(model)
        assert check_regular(model, strict=False)

    def test_marginals_match_enumeration_oracle(self, rng):
        for _ in range(15):
            n_vars = int(rng.integers(2, 5))
            variables = []
            parents = {}
            cpts = {}
            for i in range(n_vars):
                states = tuple(
                    str(s + 1) for s in range(int(rng.integers(2, 4)))
                )
                name = f"X{i + 1}"
                variables.append(Variable(name, states))
                earlier = [v.name for v in variables[:-1]]
                chosen = tuple(
                    p for p in earlier if rng.random() < 0.5
                )
                parents[name] = chosen
                table = {}
                for combo in itertools.product(
                    *(variables[[v.name for v in variables].index(p)].states
                      for p in chosen)
                ):
                    table[config_key(combo)] = random_simplex(
                        rng, len(states)
                    )
                cpts[name] = table
            spec = BayesNetSpec(tuple(variables), parents, cpts)
            model, theta = compile_bn(spec)
            joint = joint_by_enumeration(spec)
            for v in spec.variables:
                for state in v.states:
                    event = atoms_matching(spec.variables, {v.name: state})
                    direct = math.fsum(
                        p
                        for a, p in joint.items()
                        if a[[x.name for x in spec.variables].index(v.name)]
                        == state
                    )
                    assert event_probability(
                        model, theta, event
                    ) == pytest.approx(direct, abs=1e-12)

    def test_cpt_shape_mismatch_rejected(self):
        with pytest.raises(InvalidModel, match="entries for"):
            BayesNetSpec(
                (Variable("A", ("0", "1")),), {}, {"A": {"": (0.4, 0.3, 0.3)}}
            )

    def test_non_simplex_column_rejected(self):
        with pytest.raises(InvalidModel, match="sums to"):
            BayesNetSpec(
                (Variable("A", ("0", "1")),), {}, {"A": {"": (0.4, 0.5)}}
            )

    def test_deterministic_output(self, bn_spec):
        a_model, a_theta = compile_bn(bn_spec)
        b_model, b_theta = compile_bn(bn_spec)
        assert a_model == b_model
        assert a_theta == b_theta


class TestCompileStagedTree:
    def test_three_level_tree_shape(self, staged_tree_model):
        model, theta = staged_tree_model
        assert model.n_atoms == 27
        assert model.n_params == 33
        assert model.partition.n_blocks == 11
        assert validate(model, theta).ok

    def test_five_atom_tree_monomials(self, tree_model):
        model, theta = tree_model
        assert model.n_atoms == 5 and model.n_params == 6
        assert model.partition.n_blocks == 2
        assert [model.matrix.row_support(a) for a in range(5)] == [
            (0, 3),
            (0, 4),
            (0, 5),
            (1,),
            (2,),
        ]

    def test_no_identifications_gives_one_block_per_vertex(self):
        spec = five_atom_tree()
        model, _ = compile_staged_tree(spec)
        assert model.partition.n_blocks == 2  # two internal vertices

    def test_stage_sharing_reuses_parameter_indices(self, staged_tree_model):
        model, _ = staged_tree_model
        # The atoms under the two merged vertices hit identical level-2
        # parameter columns, slot for slot.
        dense = model.matrix.dense()
        # atoms 9..11 pass through v7, atoms 12..14 through v8 (depth-first
        # order), and their final-edge parameters coincide.
        for slot in range(3):
            assert (dense[9 + slot] * dense[12 + slot]).sum() >= 2

    def test_same_stage_on_one_path_rejected(self):
        spec = StagedTreeSpec(
            vertices=(
                TreeVertex("r", ("m", "x")),
                TreeVertex("m", ("y", "z")),
                TreeVertex("x"),
                TreeVertex("y"),
                TreeVertex("z"),
            ),
            stages=(("r", "m"),),
            probabilities={"r": (0.5, 0.5)},
        )
        with pytest.raises(InvalidModel, match="root-to-leaf"):
            compile_staged_tree(spec)

    def test_stage_out_degree_mismatch_rejected(self):
        spec = StagedTreeSpec(
            vertices=(
                TreeVertex("r", ("a", "b")),
                TreeVertex("a", ("x", "y", "z")),
                TreeVertex("b", ("u", "v")),
                TreeVertex("x"), TreeVertex("y"), TreeVertex("z"),
                TreeVertex("u"), TreeVertex("v"),
            ),
            stages=(("a", "b"),),
            probabilities={"r": (0.5, 0.5), "a": (0.3, 0.3, 0.4)},
        )
        with pytest.raises(InvalidModel, match="out-degrees"):
            compile_staged_tree(spec)

    def test_stage_probability_disagreement_rejected(self):
        spec = StagedTreeSpec(
            vertices=(
                TreeVertex("r", ("a", "b")),
                TreeVertex("a", ("x", "y")),
                TreeVertex("b", ("u", "v")),
                TreeVertex("x"), TreeVertex("y"),
                TreeVertex("u"), TreeVertex("v"),
            ),
            stages=(("a", "b"),),
            probabilities={
                "r": (0.5, 0.5),
                "a": (0.3, 0.7),
                "b": (0.4, 0.6),
            },
        )
        with pytest.raises(InvalidModel, match="disagree"):
            compile_staged_tree(spec)

    def test_weak_regularity_always_strict_iff_every_path_meets_every_block(
        self, tree_model, product_tree_model
    ):
        asym_model, _ = tree_model
        assert check_regular(asym_model, strict=False)
        assert not check_regular(asym_model, strict=True)
        prod_model, _ = product_tree_model
        assert check_regular(prod_model, strict=True)


class TestClassifiers:
    def test_naive_bayes_edges(self, nb_spec):
        bn = build_classifier(nb_spec)
        assert [v.name for v in bn.variables] == ["Cl", "F1", "F2", "F3"]
        assert all(bn.parents[f.name] == ("Cl",) for f in nb_spec.features)
        model, theta = compile_bn(bn)
        assert validate(model, theta).ok

    def test_spode_edges(self):
        spec = spode_spec(3, 2, 2, np.random.default_rng(3))
        bn = build_classifier(spec)
        assert bn.parents["F1"] == ("Cl",)
        assert bn.parents["F2"] == ("Cl", "F1")
        assert bn.parents["F3"] == ("Cl", "F1")
        model, theta = compile_bn(bn)
        assert validate(model, theta).ok

    def test_zero_features_is_the_class_marginal(self):
        spec = ClassifierSpec(
            class_variable=Variable("Cl", ("1", "2")),
            features=(),
            cpts={"Cl": {"": (0.4, 0.6)}},
        )
        model, _ = compile_bn(build_classifier(spec))
        assert model.n_atoms == 2 and model.partition.n_blocks == 1

    def test_feature_to_class_edge_rejected(self):
        with pytest.raises(InvalidModel, match="class a child"):
            ClassifierSpec(
                class_variable=Variable("Cl", ("1", "2")),
                features=(Variable("F1", ("1", "2")),),
                cpts={},
                structure="general",
                edges=(("F1", "Cl"),),
            )

    def test_layout_separates_class_parameters(self, nb_spec):
        bn = build_classifier(nb_spec)
        layout = bn_layout(bn)
        class_params = layout.params_of_variable(0)
        assert class_params == (0, 1)


class TestAtomsMatching:
    def test_single_variable_slice(self, bn_spec):
        event = atoms_matching(bn_spec.variables, {"Y3": "3"})
        assert len(event.atoms) == 9
        assert all(a % 3 == 2 for a in event.atoms)

    def test_empty_assignment_matches_all(self, bn_spec):
        assert len(atoms_matching(bn_spec.variables, {}).atoms) == 27

    def test_full_assignment_is_one_atom(self, bn_spec):
        event = atoms_matching(
            bn_spec.variables, {"Y1": "1", "Y2": "2", "Y3": "3"}
        )
        assert event.atoms == frozenset({5})

    def test_unknown_names_rejected(self, bn_spec):
        with pytest.raises(UnknownName):
            atoms_matching(bn_spec.variables, {"Y9": "1"})
        with pytest.raises(UnknownName):
            atoms_matching(bn_spec.variables, {"Y1": "9"})
