import itertools
import math

import numpy as np
import pytest

from mmsa.compilers import atoms_matching
from mmsa.core import (
    AtomEvent,
    ExponentMatrix,
    MonomialModel,
    ParameterVector,
    SimplexPartition,
    atom_distribution,
    atomic_probability,
    check_multilinear,
    check_regular,
    event_probability,
    validate,
)
from mmsa.errors import InvalidModel, InvalidParameters


def saturated(values):
    k = len(values)
    model = MonomialModel(
        ExponentMatrix.from_rows(k, [(j,) for j in range(k)]),
        SimplexPartition.of_sizes([k]),
        tuple(f"a{j}" for j in range(k)),
    )
    return model, ParameterVector.create(values, model.partition)


class TestExponentMatrix:
    def test_rejects_empty_row(self):
        with pytest.raises(InvalidModel, match="no non-zero exponent"):
            ExponentMatrix(2, 3, ((0, 0, 1),))

    def test_rejects_all_ones_row(self):
        with pytest.raises(InvalidModel, match="every exponent equal to one"):
            ExponentMatrix(1, 2, ((0, 0, 1), (0, 1, 1)))

    def test_rejects_zero_exponent_and_duplicates(self):
        with pytest.raises(InvalidModel, match=">= 1"):
            ExponentMatrix(1, 3, ((0, 0, 0), (0, 1, 1)))
        with pytest.raises(InvalidModel, match="duplicate"):
            ExponentMatrix(1, 3, ((0, 0, 1), (0, 0, 2)))

    def test_dense_round_trip(self):
        m = ExponentMatrix(2, 3, ((0, 0, 1), (0, 2, 2), (1, 1, 1)))
        dense = m.dense()
        assert dense.tolist() == [[1, 0, 2], [0, 1, 0]]
        assert m.max_exponent == 2


class TestSimplexPartition:
    def test_rejects_singleton_block(self):
        with pytest.raises(InvalidModel, match="size 1"):
            SimplexPartition(((0,), (1, 2)))

    def test_rejects_gap_and_overlap(self):
        with pytest.raises(InvalidModel, match="cover"):
            SimplexPartition(((0, 1), (3, 4)))
        with pytest.raises(InvalidModel, match="two blocks"):
            SimplexPartition(((0, 1), (1, 2)))

    def test_block_lookup(self):
        p = SimplexPartition.of_sizes([2, 3])
        assert [p.block_of(j) for j in range(5)] == [0, 0, 1, 1, 1]


class TestAtomicProbability:
    def test_demo_bn_first_atom(self, bn_model):
        model, theta = bn_model
        # first atom is (Y1=1, Y2=1, Y3=1): 0.2 * 0.2 * 0.1
        assert atomic_probability(model, theta, 0) == pytest.approx(
            0.004, abs=1e-15
        )

    def test_single_factor_monomial(self):
        model, theta = saturated([0.3, 0.2, 0.5])
        assert atomic_probability(model, theta, 0) == 0.3

    def test_two_level_tree_atom(self, tree_model):
        model, theta = tree_model
        # second leaf: theta1 * psi2 = 0.2 * 0.4
        label = model.atom_labels.index("y2")
        assert atomic_probability(model, theta, label) == pytest.approx(
            0.08, abs=1e-15
        )

    def test_index_out_of_range(self, tree_model):
        model, theta = tree_model
        with pytest.raises(IndexError):
            atomic_probability(model, theta, 99)

    def test_invalid_theta_rejected(self, tree_model):
        model, theta = tree_model
        broken = theta.with_values((0.5,) + theta.values[1:])
        with pytest.raises(InvalidParameters):
            atomic_probability(model, broken, 0)


class TestEventProbability:
    def test_health_marginal(self, bn_spec, bn_model):
        model, theta = bn_model
        event = atoms_matching(bn_spec.variables, {"Y3": "3"})
        assert event_probability(model, theta, event) == pytest.approx(
            0.343, abs=1e-12
        )

    def test_total_probability(self, bn_model):
        model, theta = bn_model
        event = AtomEvent.of(range(model.n_atoms))
        assert event_probability(model, theta, event) == pytest.approx(
            1.0, abs=1e-12
        )

    def test_tree_pair_event(self, tree_model):
        model, theta = tree_model
        event = AtomEvent.of(
            [model.atom_labels.index("y4"), model.atom_labels.index("y5")]
        )
        assert event_probability(model, theta, event) == pytest.approx(
            0.8, abs=1e-15
        )

    def test_empty_event_rejected(self):
        with pytest.raises(InvalidModel):
            AtomEvent.of([])


class TestMultilinearAndRegular:
    def test_demo_bn_flags(self, bn_model):
        model, _ = bn_model
        assert check_multilinear(model)
        assert check_regular(model, strict=False)
        # Atoms never touch the blocks of other parent configurations, so
        # the exactly-one-per-block reading fails for any parented network.
        assert not check_regular(model, strict=True)

    def test_tree_flags(self, tree_model):
        model, _ = tree_model
        assert check_multilinear(model)
        assert check_regular(model, strict=False)
        assert not check_regular(model, strict=True)

    def test_saturated_is_strictly_regular(self):
        model, _ = saturated([0.3, 0.2, 0.5])
        assert check_regular(model, strict=True)

    def test_exponent_two_is_not_multilinear(self):
        model = MonomialModel(
            ExponentMatrix(2, 2, ((0, 0, 2), (1, 1, 1))),
            SimplexPartition.of_sizes([2]),
            ("a", "b"),
        )
        assert not check_multilinear(model)
        with pytest.raises(InvalidModel):
            check_regular(model)

    def test_two_ones_in_one_block_fails_both_modes(self):
        model = MonomialModel(
            ExponentMatrix.from_rows(3, [(0, 1), (2,)]),
            SimplexPartition.of_sizes([3]),
            ("a", "b"),
        )
        assert not check_regular(model, strict=False)
        assert not check_regular(model, strict=True)


class TestValidate:
    def test_demo_bn_clean(self, bn_model):
        assert validate(*bn_model).ok

    def test_block_sum_violation(self, tree_model):
        model, theta = tree_model
        bad = theta.with_values((0.1,) + theta.values[1:])
        report = validate(model, bad)
        assert any("sums to" in v for v in report.violations)

    def test_positivity_violation(self, tree_model):
        model, theta = tree_model
        values = list(theta.values)
        values[3], values[5] = 0.0, values[5] + values[3]
        report = validate(model, theta.with_values(values))
        assert any("outside (0, 1)" in v for v in report.violations)

    def test_total_probability_check(self):
        # Both blocks are simplices, yet the atoms only cover part of the
        # space: the total-probability check has to notice.
        model = MonomialModel(
            ExponentMatrix.from_rows(4, [(0, 2), (1, 3)]),
            SimplexPartition.of_sizes([2, 2]),
            ("a", "b"),
        )
        theta = ParameterVector.create([0.5, 0.5, 0.25, 0.75], model.partition)
        report = validate(model, theta)
        assert any("atomic probabilities sum" in v for v in report.violations)


class TestInvariants:
    def test_normalization_of_random_regular_models(self, rng):
        for _ in range(25):
            sizes = rng.integers(2, 4, size=rng.integers(1, 4))
            blocks = [rng.dirichlet(np.ones(s)) for s in sizes]
            values = [float(x) for b in blocks for x in b]
            offsets = np.cumsum([0] + [len(b) for b in blocks])
            rows = [
                tuple(offsets[i] + c for i, c in enumerate(combo))
                for combo in itertools.product(*(range(s) for s in sizes))
            ]
            model = MonomialModel(
                ExponentMatrix.from_rows(len(values), rows),
                SimplexPartition.of_sizes([int(s) for s in sizes]),
                tuple(str(i) for i in range(len(rows))),
            )
            theta = ParameterVector.create(values, model.partition)
            assert check_regular(model, strict=True)
            total = atom_distribution(model, theta).sum()
            assert abs(total - 1.0) < 1e-9

    def test_block_multiplicativity(self, bn_model):
        model, theta = bn_model
        for atom in (0, 13, 26):
            per_block = 1.0
            for b, block in enumerate(model.partition.blocks):
                per_block *= math.prod(
                    theta.values[c]
                    for c, _ in model.matrix.row(atom)
                    if c in block
                )
            assert per_block == pytest.approx(
                atomic_probability(model, theta, atom), rel=1e-12
            )

    def test_monotonicity_in_a_used_parameter(self, tree_model):
        model, theta = tree_model
        # Atom y1 uses psi1 (index 3) but not psi2 (index 4); shifting mass
        # from psi2 to psi1 must increase its probability strictly.
        before = atomic_probability(model, theta, 0)
        values = list(theta.values)
        values[3] += 0.1
        values[4] -= 0.1
        after = atomic_probability(model, theta.with_values(values), 0)
        assert after > before
