"""Monomial models over a finite sample space.

A model assigns each atom ``y`` of a finite space the probability

    P(y) = prod_j theta_j ** E[y, j]

where ``E`` is a sparse matrix of non-negative integer exponents and the
parameter vector ``theta`` is partitioned into blocks that each sum to one.
This module defines the data types (exponent matrix, simplex partition,
parameter vector, model, event) and the evaluation/validation primitives
everything else builds on.

Conventions:

- all indices are 0-based in code and in files; human-facing output is
  rendered 1-based by the CLI layer;
- a model is *multilinear* when every stored exponent equals one, and
  *regular* (strict) when every atom uses exactly one parameter per block,
  or weakly regular when it uses at most one per block;
- parameters are strictly positive, so every atomic probability is positive
  and log-ratios of two models over the same space are always finite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import InvalidModel, InvalidParameters

# Tolerance for sum-to-one checks on simplex blocks and total probability.
EPS_SUM = 1e-9
# Strict-positivity margin: values must lie in (EPS_POS, 1 - EPS_POS).
EPS_POS = 1e-12


@dataclass(frozen=True, slots=True)
class ExponentMatrix:
    """Sparse q-by-k matrix of parameter exponents, one row per atom.

    ``entries`` holds (row, col, exponent) triples with exponent >= 1;
    absent positions are zero.  Degenerate rows (no entries, or every one
    of the k columns carrying exponent one) are rejected because they make
    the atomic probability constant or equal to the full product of all
    parameters.
    """

    n_atoms: int
    n_params: int
    entries: tuple[tuple[int, int, int], ...]
    _rows: tuple[tuple[tuple[int, int], ...], ...] = field(
        init=False, repr=False, compare=False
    )

    def __post_init__(self) -> None:
        if self.n_atoms <= 0 or self.n_params <= 0:
            raise InvalidModel("matrix dimensions must be positive")
        rows: list[list[tuple[int, int]]] = [[] for _ in range(self.n_atoms)]
        seen: set[tuple[int, int]] = set()
        for row, col, exp in self.entries:
            if not 0 <= row < self.n_atoms:
                raise InvalidModel(f"row index {row} out of range")
            if not 0 <= col < self.n_params:
                raise InvalidModel(f"column index {col} out of range")
            if exp < 1:
                raise InvalidModel("stored exponents must be >= 1")
            if (row, col) in seen:
                raise InvalidModel(f"duplicate entry for row {row}, column {col}")
            seen.add((row, col))
            rows[row].append((col, exp))
        for i, row_entries in enumerate(rows):
            if not row_entries:
                raise InvalidModel(f"row {i} has no non-zero exponent")
            if len(row_entries) == self.n_params and all(
                e == 1 for _, e in row_entries
            ):
                raise InvalidModel(f"row {i} has every exponent equal to one")
        object.__setattr__(
            self, "_rows", tuple(tuple(sorted(r)) for r in rows)
        )

    @classmethod
    def from_rows(
        cls, n_params: int, rows: Sequence[Mapping[int, int] | Iterable[int]]
    ) -> "ExponentMatrix":
        """Build from one mapping (or index iterable, exponents one) per atom."""
        entries: list[tuple[int, int, int]] = []
        for i, row in enumerate(rows):
            if isinstance(row, Mapping):
                entries.extend((i, int(c), int(e)) for c, e in row.items())
            else:
                entries.extend((i, int(c), 1) for c in row)
        return cls(len(rows), n_params, tuple(entries))

    def row(self, atom: int) -> tuple[tuple[int, int], ...]:
        """(column, exponent) pairs of one row, sorted by column."""
        return self._rows[atom]

    def row_support(self, atom: int) -> tuple[int, ...]:
        return tuple(c for c, _ in self._rows[atom])

    @property
    def max_exponent(self) -> int:
        return max(e for _, _, e in self.entries)

    def dense(self) -> np.ndarray:
        """Dense float array of exponents, shape (n_atoms, n_params)."""
        out = np.zeros((self.n_atoms, self.n_params))
        for row, col, exp in self.entries:
            out[row, col] = exp
        return out


@dataclass(frozen=True, slots=True)
class SimplexPartition:
    """Ordered partition of the parameter indices into simplex blocks.

    Blocks must be pairwise disjoint, cover 0..k-1 exactly, and have size
    at least two: a singleton block would pin its parameter to one, which
    strict positivity forbids.
    """

    blocks: tuple[tuple[int, ...], ...]
    _block_of: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if not self.blocks:
            raise InvalidModel("partition must have at least one block")
        seen: dict[int, int] = {}
        for b, block in enumerate(self.blocks):
            if len(block) < 2:
                raise InvalidModel(f"block {b} has size {len(block)} < 2")
            for j in block:
                if j in seen:
                    raise InvalidModel(f"index {j} appears in two blocks")
                seen[j] = b
        k = len(seen)
        if set(seen) != set(range(k)):
            raise InvalidModel("blocks must cover exactly the indices 0..k-1")
        object.__setattr__(
            self, "_block_of", tuple(seen[j] for j in range(k))
        )

    @classmethod
    def of_sizes(cls, sizes: Sequence[int]) -> "SimplexPartition":
        """Consecutive blocks of the given sizes."""
        blocks = []
        start = 0
        for s in sizes:
            blocks.append(tuple(range(start, start + s)))
            start += s
        return cls(tuple(blocks))

    @property
    def n_params(self) -> int:
        return len(self._block_of)

    @property
    def n_blocks(self) -> int:
        return len(self.blocks)

    def block_of(self, j: int) -> int:
        """Index of the block containing parameter j."""
        return self._block_of[j]


@dataclass(frozen=True, slots=True)
class ParameterVector:
    """A point of the product of simplices, with provenance labels.

    Construction checks only shapes; positivity and the per-block
    sum-to-one conditions are verified by :func:`theta_violations` (and by
    every operation that requires a valid vector), so that deliberately
    broken vectors can still be built and inspected.
    """

    values: tuple[float, ...]
    partition: SimplexPartition
    labels: tuple[str, ...]

    def __post_init__(self) -> None:
        if len(self.values) != self.partition.n_params:
            raise InvalidParameters(
                f"{len(self.values)} values for a partition of "
                f"{self.partition.n_params} indices"
            )
        if len(self.labels) != len(self.values):
            raise InvalidParameters("one label per parameter is required")

    @classmethod
    def create(
        cls,
        values: Sequence[float],
        partition: SimplexPartition,
        labels: Sequence[str] | None = None,
    ) -> "ParameterVector":
        if labels is None:
            labels = [f"theta{j + 1}" for j in range(len(values))]
        return cls(tuple(float(v) for v in values), partition, tuple(labels))

    def block_values(self, b: int) -> tuple[float, ...]:
        return tuple(self.values[j] for j in self.partition.blocks[b])

    def with_values(self, values: Sequence[float]) -> "ParameterVector":
        """Same partition and labels, new values."""
        return ParameterVector(
            tuple(float(v) for v in values), self.partition, self.labels
        )

    def violations(self) -> list[str]:
        """Positivity and per-block sum-to-one violations, 1-based text."""
        out = []
        for j, v in enumerate(self.values):
            if not EPS_POS < v < 1.0 - EPS_POS:
                out.append(f"parameter {j + 1} ({self.labels[j]}) = {v} "
                           f"is outside (0, 1)")
        for b, block in enumerate(self.partition.blocks):
            s = math.fsum(self.values[j] for j in block)
            if abs(s - 1.0) > EPS_SUM:
                out.append(f"block {b + 1} sums to {s!r}, not 1")
        return out


@dataclass(frozen=True, slots=True)
class MonomialModel:
    """Exponent matrix plus simplex partition plus atom labels."""

    matrix: ExponentMatrix
    partition: SimplexPartition
    atom_labels: tuple[str, ...]

    def __post_init__(self) -> None:
        if self.matrix.n_params != self.partition.n_params:
            raise InvalidModel(
                f"matrix has {self.matrix.n_params} columns but the "
                f"partition covers {self.partition.n_params} indices"
            )
        if len(self.atom_labels) != self.matrix.n_atoms:
            raise InvalidModel("one label per atom is required")

    @property
    def n_atoms(self) -> int:
        return self.matrix.n_atoms

    @property
    def n_params(self) -> int:
        return self.matrix.n_params


@dataclass(frozen=True, slots=True)
class AtomEvent:
    """A non-empty set of atom indices."""

    atoms: frozenset[int]

    def __post_init__(self) -> None:
        if not self.atoms:
            raise InvalidModel("an event must contain at least one atom")

    @classmethod
    def of(cls, indices: Iterable[int]) -> "AtomEvent":
        return cls(frozenset(int(i) for i in indices))

    def sorted(self) -> tuple[int, ...]:
        return tuple(sorted(self.atoms))


@dataclass(frozen=True, slots=True)
class ValidationReport:
    """List of human-readable violations; empty means valid."""

    violations: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.violations


def require_valid_theta(theta: ParameterVector) -> None:
    """Raise InvalidParameters unless theta satisfies its invariants."""
    problems = theta.violations()
    if problems:
        raise InvalidParameters("; ".join(problems))


def atomic_probability(
    model: MonomialModel, theta: ParameterVector, atom: int
) -> float:
    """Probability of a single atom: the product of its parameter powers."""
    require_valid_theta(theta)
    if not 0 <= atom < model.n_atoms:
        raise IndexError(f"atom {atom} out of range [0, {model.n_atoms})")
    return math.prod(
        theta.values[c] ** e if e != 1 else theta.values[c]
        for c, e in model.matrix.row(atom)
    )


def event_probability(
    model: MonomialModel, theta: ParameterVector, event: AtomEvent
) -> float:
    """Sum of atomic probabilities over the atoms of an event."""
    require_valid_theta(theta)
    for a in event.atoms:
        if not 0 <= a < model.n_atoms:
            raise IndexError(f"atom {a} out of range [0, {model.n_atoms})")
    return math.fsum(
        math.prod(
            theta.values[c] ** e if e != 1 else theta.values[c]
            for c, e in model.matrix.row(a)
        )
        for a in event.sorted()
    )


def atom_distribution(model: MonomialModel, theta: ParameterVector) -> np.ndarray:
    """All q atomic probabilities as a float array (validates theta)."""
    require_valid_theta(theta)
    return np.array(
        [
            math.prod(
                theta.values[c] ** e if e != 1 else theta.values[c]
                for c, e in model.matrix.row(a)
            )
            for a in range(model.n_atoms)
        ]
    )


def check_multilinear(model: MonomialModel) -> bool:
    """True iff every stored exponent equals one (square-free monomials)."""
    return all(e == 1 for _, _, e in model.matrix.entries)


def check_regular(model: MonomialModel, strict: bool = True) -> bool:
    """Regularity of a multilinear model.

    Strict mode requires every atom to use exactly one parameter from every
    block; weak mode allows an atom to skip blocks entirely but never to use
    two parameters of the same block.
    """
    if not check_multilinear(model):
        raise InvalidModel("regularity is defined for multilinear models only")
    n_blocks = model.partition.n_blocks
    for a in range(model.n_atoms):
        per_block = [0] * n_blocks
        for c in model.matrix.row_support(a):
            per_block[model.partition.block_of(c)] += 1
        if any(count > 1 for count in per_block):
            return False
        if strict and any(count == 0 for count in per_block):
            return False
    return True


def validate(model: MonomialModel, theta: ParameterVector) -> ValidationReport:
    """Collect every violation instead of raising.

    Checks shapes, positivity, per-block sums, and that the atomic
    probabilities total one (within EPS_SUM).  The total-probability check
    is skipped when earlier violations make it meaningless.
    """
    problems: list[str] = []
    if len(theta.values) != model.n_params:
        problems.append(
            f"theta has {len(theta.values)} values but the model expects "
            f"{model.n_params}"
        )
        return ValidationReport(tuple(problems))
    if theta.partition != model.partition:
        problems.append("theta is partitioned differently from the model")
    problems.extend(theta.violations())
    if not problems:
        total = math.fsum(
            math.prod(
                theta.values[c] ** e if e != 1 else theta.values[c]
                for c, e in model.matrix.row(a)
            )
            for a in range(model.n_atoms)
        )
        if abs(total - 1.0) > EPS_SUM:
            problems.append(f"atomic probabilities sum to {total!r}, not 1")
    return ValidationReport(tuple(problems))
