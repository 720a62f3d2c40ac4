"""Compile Bayesian networks, staged trees, and classifiers to monomial models.

Every compiler produces a :class:`~mmsa.core.MonomialModel` together with a
:class:`~mmsa.core.ParameterVector`, using a deterministic indexing so that
files and test goldens are stable:

- Bayesian networks: atoms enumerate the Cartesian product of state spaces
  in variable order with the last variable varying fastest; one simplex
  block per (variable, parent configuration), blocks ordered by variable
  and then lexicographically by parent configuration with the last-listed
  parent varying fastest.
- Staged trees: atoms are root-to-leaf paths in depth-first order; one
  block per stage in breadth-first discovery order, one parameter per
  (stage, outgoing-edge slot).
- Classifiers are rewritten to a Bayesian network first.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Mapping, Sequence

from .core import (
    EPS_POS,
    EPS_SUM,
    AtomEvent,
    ExponentMatrix,
    MonomialModel,
    ParameterVector,
    SimplexPartition,
)
from .errors import InvalidModel, UnknownName


@dataclass(frozen=True, slots=True)
class Variable:
    """A named discrete variable with at least two named states."""

    name: str
    states: tuple[str, ...]

    def __post_init__(self) -> None:
        if len(self.states) < 2:
            raise InvalidModel(
                f"variable {self.name!r} needs at least two states"
            )
        if len(set(self.states)) != len(self.states):
            raise InvalidModel(f"variable {self.name!r} has duplicate states")

    @property
    def n_states(self) -> int:
        return len(self.states)


def config_key(states: Sequence[str]) -> str:
    """Comma-joined parent states; the empty string for root variables."""
    return ",".join(states)


@dataclass(frozen=True, slots=True)
class BayesNetSpec:
    """Variables in topological order, parent lists, and CPTs.

    ``parents`` maps a variable name to an ordered tuple of earlier
    variables.  ``cpts`` maps a variable name to a {config_key: probability
    column} mapping with one column per parent configuration, each column a
    distribution over the variable's states.
    """

    variables: tuple[Variable, ...]
    parents: Mapping[str, tuple[str, ...]]
    cpts: Mapping[str, Mapping[str, tuple[float, ...]]]

    def __post_init__(self) -> None:
        index = {v.name: i for i, v in enumerate(self.variables)}
        if len(index) != len(self.variables):
            raise InvalidModel("duplicate variable names")
        for v in self.variables:
            for p in self.parents.get(v.name, ()):
                if p not in index:
                    raise InvalidModel(f"unknown parent {p!r} of {v.name!r}")
                if index[p] >= index[v.name]:
                    raise InvalidModel(
                        f"parent {p!r} does not precede {v.name!r}; the "
                        "variable order must be topological"
                    )
        by_name = {v.name: v for v in self.variables}
        for v in self.variables:
            table = self.cpts.get(v.name)
            if table is None:
                raise InvalidModel(f"missing CPT for {v.name!r}")
            for key, column in _expected_configs(self, v.name):
                if key not in table:
                    raise InvalidModel(
                        f"CPT of {v.name!r} misses configuration {key!r}"
                    )
                probs = table[key]
                if len(probs) != by_name[v.name].n_states:
                    raise InvalidModel(
                        f"CPT column {v.name!r}|{key!r} has {len(probs)} "
                        f"entries for {by_name[v.name].n_states} states"
                    )
                if any(not EPS_POS < p < 1.0 - EPS_POS for p in probs):
                    raise InvalidModel(
                        f"CPT column {v.name!r}|{key!r} has entries outside "
                        "(0, 1)"
                    )
                total = math.fsum(probs)
                if abs(total - 1.0) > EPS_SUM:
                    raise InvalidModel(
                        f"CPT column {v.name!r}|{key!r} sums to {total!r}"
                    )

    def variable(self, name: str) -> Variable:
        for v in self.variables:
            if v.name == name:
                return v
        raise UnknownName(f"unknown variable {name!r}")


def _expected_configs(spec: BayesNetSpec, name: str):
    """(config_key, parent state tuple) pairs, last-listed parent fastest."""
    parent_names = spec.parents.get(name, ())
    parent_vars = [spec.variable(p) for p in parent_names]
    for combo in itertools.product(*(v.states for v in parent_vars)):
        yield config_key(combo), combo


@dataclass(frozen=True, slots=True)
class BnLayout:
    """Deterministic parameter indexing of a compiled Bayesian network.

    ``blocks[b]`` is (variable index, parent state tuple); ``params[j]`` is
    (variable index, state, parent state tuple).  The layout is what the
    analysis layer uses to answer questions like "which parameters belong
    to the class marginal".
    """

    variables: tuple[Variable, ...]
    blocks: tuple[tuple[int, tuple[str, ...]], ...]
    params: tuple[tuple[int, str, tuple[str, ...]], ...]

    def params_of_variable(self, var_index: int) -> tuple[int, ...]:
        return tuple(
            j for j, (vi, _, _) in enumerate(self.params) if vi == var_index
        )


def bn_layout(spec: BayesNetSpec) -> BnLayout:
    blocks: list[tuple[int, tuple[str, ...]]] = []
    params: list[tuple[int, str, tuple[str, ...]]] = []
    for i, v in enumerate(spec.variables):
        for _, combo in _expected_configs(spec, v.name):
            blocks.append((i, combo))
            for state in v.states:
                params.append((i, state, combo))
    return BnLayout(spec.variables, tuple(blocks), tuple(params))


def _param_label(
    var: Variable, state: str, parent_names: Sequence[str], combo: Sequence[str]
) -> str:
    if not parent_names:
        return f"P({var.name}={state})"
    given = ",".join(
        f"{p}={s}" for p, s in zip(reversed(parent_names), reversed(combo))
    )
    return f"P({var.name}={state}|{given})"


def compile_bn(spec: BayesNetSpec) -> tuple[MonomialModel, ParameterVector]:
    """Compile a Bayesian network into its multilinear monomial model.

    Each atom's row carries exactly one parameter per variable: the entry
    of the variable's CPT column selected by the atom's parent states.
    """
    layout = bn_layout(spec)
    index = {v.name: i for i, v in enumerate(spec.variables)}
    param_index = {
        (vi, state, combo): j for j, (vi, state, combo) in enumerate(layout.params)
    }

    values: list[float] = []
    labels: list[str] = []
    sizes: list[int] = []
    for v_i, combo in layout.blocks:
        var = spec.variables[v_i]
        parent_names = spec.parents.get(var.name, ())
        column = spec.cpts[var.name][config_key(combo)]
        sizes.append(var.n_states)
        for state, prob in zip(var.states, column):
            values.append(float(prob))
            labels.append(_param_label(var, state, parent_names, combo))

    rows: list[tuple[int, ...]] = []
    atom_labels: list[str] = []
    for assignment in itertools.product(*(v.states for v in spec.variables)):
        cols = []
        for v_i, v in enumerate(spec.variables):
            combo = tuple(
                assignment[index[p]] for p in spec.parents.get(v.name, ())
            )
            cols.append(param_index[(v_i, assignment[v_i], combo)])
        rows.append(tuple(cols))
        atom_labels.append(
            ",".join(f"{v.name}={s}" for v, s in zip(spec.variables, assignment))
        )

    model = MonomialModel(
        matrix=ExponentMatrix.from_rows(len(values), rows),
        partition=SimplexPartition.of_sizes(sizes),
        atom_labels=tuple(atom_labels),
    )
    theta = ParameterVector.create(values, model.partition, labels)
    return model, theta


def atoms_matching(
    variables: Sequence[Variable], assignment: Mapping[str, str]
) -> AtomEvent:
    """Atoms of a compiled network consistent with a partial assignment.

    An empty assignment matches every atom.  States may be given as the
    state name or as anything whose ``str()`` equals it.
    """
    names = {v.name: i for i, v in enumerate(variables)}
    wanted: dict[int, int] = {}
    for var_name, state in assignment.items():
        if var_name not in names:
            raise UnknownName(f"unknown variable {var_name!r}")
        var = variables[names[var_name]]
        state = str(state)
        if state not in var.states:
            raise UnknownName(
                f"variable {var_name!r} has no state {state!r} "
                f"(states: {', '.join(var.states)})"
            )
        wanted[names[var_name]] = var.states.index(state)
    atoms = []
    for atom, combo in enumerate(
        itertools.product(*(range(v.n_states) for v in variables))
    ):
        if all(combo[i] == s for i, s in wanted.items()):
            atoms.append(atom)
    return AtomEvent.of(atoms)


# ---------------------------------------------------------------------------
# Staged trees
# ---------------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class TreeVertex:
    id: str
    children: tuple[str, ...] = ()
    labels: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if self.labels and len(self.labels) != len(self.children):
            raise InvalidModel(
                f"vertex {self.id!r} has {len(self.labels)} edge labels for "
                f"{len(self.children)} children"
            )


@dataclass(frozen=True, slots=True)
class StagedTreeSpec:
    """A rooted tree with per-vertex edge distributions and stage merges.

    ``stages`` lists the non-trivial stages (groups of internal vertices
    whose edge distributions are identified); internal vertices not listed
    form singleton stages.  ``probabilities`` is keyed by vertex id; for a
    merged stage any member's id works, and if several members are keyed
    their distributions must agree.
    """

    vertices: tuple[TreeVertex, ...]
    stages: tuple[tuple[str, ...], ...] = ()
    probabilities: Mapping[str, tuple[float, ...]] = None  # type: ignore[assignment]

    def __post_init__(self) -> None:
        if self.probabilities is None:
            raise InvalidModel("edge probabilities are required")
        ids = [v.id for v in self.vertices]
        if len(set(ids)) != len(ids):
            raise InvalidModel("duplicate vertex ids")

    def by_id(self) -> dict[str, TreeVertex]:
        return {v.id: v for v in self.vertices}

    def root(self) -> TreeVertex:
        by_id = self.by_id()
        children = {c for v in self.vertices for c in v.children}
        for c in children:
            if c not in by_id:
                raise InvalidModel(f"child {c!r} is not a declared vertex")
        roots = [v for v in self.vertices if v.id not in children]
        if len(roots) != 1:
            raise InvalidModel(
                f"expected exactly one root, found {len(roots)}"
            )
        return roots[0]


def _tree_stages(spec: StagedTreeSpec) -> dict[str, tuple[str, ...]]:
    """Map each internal vertex to its stage (a tuple of member ids)."""
    by_id = spec.by_id()
    internal = [v.id for v in spec.vertices if v.children]
    stage_of: dict[str, tuple[str, ...]] = {}
    for members in spec.stages:
        members = tuple(members)
        degrees = set()
        label_sets = set()
        for m in members:
            if m not in by_id:
                raise InvalidModel(f"stage member {m!r} is not a vertex")
            if not by_id[m].children:
                raise InvalidModel(f"stage member {m!r} is a leaf")
            if m in stage_of:
                raise InvalidModel(f"vertex {m!r} appears in two stages")
            stage_of[m] = members
            degrees.add(len(by_id[m].children))
            if by_id[m].labels:
                label_sets.add(by_id[m].labels)
        if len(degrees) > 1:
            raise InvalidModel(
                f"stage {'+'.join(members)} mixes out-degrees {sorted(degrees)}"
            )
        if len(label_sets) > 1:
            raise InvalidModel(
                f"stage {'+'.join(members)} has misaligned edge labels"
            )
    for v in internal:
        stage_of.setdefault(v, (v,))
    return stage_of


def _stage_probs(
    spec: StagedTreeSpec, members: tuple[str, ...], out_degree: int
) -> tuple[float, ...]:
    found = [
        tuple(float(p) for p in spec.probabilities[m])
        for m in members
        if m in spec.probabilities
    ]
    if not found:
        raise InvalidModel(
            f"no probabilities given for stage {'+'.join(members)}"
        )
    first = found[0]
    for other in found[1:]:
        if len(other) != len(first) or any(
            abs(a - b) > 1e-12 for a, b in zip(first, other)
        ):
            raise InvalidModel(
                f"members of stage {'+'.join(members)} disagree on their "
                "edge probabilities"
            )
    if len(first) != out_degree:
        raise InvalidModel(
            f"stage {'+'.join(members)} has {len(first)} probabilities for "
            f"{out_degree} outgoing edges"
        )
    total = math.fsum(first)
    if abs(total - 1.0) > EPS_SUM:
        raise InvalidModel(
            f"probabilities of stage {'+'.join(members)} sum to {total!r}"
        )
    return first


def compile_staged_tree(
    spec: StagedTreeSpec,
) -> tuple[MonomialModel, ParameterVector]:
    """Compile a staged tree: one atom per root-to-leaf path.

    Rejects trees where two vertices of one stage lie on a common path:
    the path's probability would then take a squared (or repeated-block)
    parameter, so the model stops being a multilinear monomial model.
    """
    by_id = spec.by_id()
    root = spec.root()
    stage_of = _tree_stages(spec)

    # Breadth-first stage discovery fixes the block order.
    stage_order: list[tuple[str, ...]] = []
    queue = [root.id]
    while queue:
        vid = queue.pop(0)
        v = by_id[vid]
        if v.children:
            stage = stage_of[vid]
            if stage not in stage_order:
                stage_order.append(stage)
            queue.extend(v.children)

    values: list[float] = []
    labels: list[str] = []
    sizes: list[int] = []
    param_index: dict[tuple[tuple[str, ...], int], int] = {}
    for stage in stage_order:
        rep = by_id[stage[0]]
        probs = _stage_probs(spec, stage, len(rep.children))
        stage_name = "+".join(stage)
        sizes.append(len(rep.children))
        for slot, prob in enumerate(probs):
            param_index[(stage, slot)] = len(values)
            values.append(prob)
            edge = rep.labels[slot] if rep.labels else rep.children[slot]
            labels.append(f"P({stage_name}->{edge})")

    rows: list[tuple[int, ...]] = []
    atom_labels: list[str] = []

    def walk(vid: str, cols: tuple[int, ...], seen: tuple[tuple[str, ...], ...]):
        v = by_id[vid]
        if not v.children:
            rows.append(cols)
            atom_labels.append(vid)
            return
        stage = stage_of[vid]
        if stage in seen:
            raise InvalidModel(
                f"vertices of stage {'+'.join(stage)} lie on one "
                "root-to-leaf path; the atomic probabilities are not "
                "multilinear monomials"
            )
        for slot, child in enumerate(v.children):
            walk(child, cols + (param_index[(stage, slot)],), seen + (stage,))

    walk(root.id, (), ())

    model = MonomialModel(
        matrix=ExponentMatrix.from_rows(len(values), rows),
        partition=SimplexPartition.of_sizes(sizes),
        atom_labels=tuple(atom_labels),
    )
    theta = ParameterVector.create(values, model.partition, labels)
    return model, theta


# ---------------------------------------------------------------------------
# Classifiers
# ---------------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class ClassifierSpec:
    """A Bayesian-network classifier: one class variable plus features.

    ``structure`` is "naive_bayes" (the class is the only parent of every
    feature), "spode" (class plus one super-parent feature), or "general"
    (explicit feature-to-feature edges on top of class-to-feature ones).
    Feature variables must not have class children, so edges into the
    class are rejected.
    """

    class_variable: Variable
    features: tuple[Variable, ...]
    cpts: Mapping[str, Mapping[str, tuple[float, ...]]]
    structure: str = "naive_bayes"
    super_parent: str | None = None
    edges: tuple[tuple[str, str], ...] = ()

    def __post_init__(self) -> None:
        if self.structure not in ("naive_bayes", "spode", "general"):
            raise InvalidModel(f"unknown structure {self.structure!r}")
        names = {f.name for f in self.features}
        if self.class_variable.name in names:
            raise InvalidModel("the class variable cannot also be a feature")
        if self.structure == "spode":
            if self.super_parent not in names:
                raise InvalidModel(
                    f"super parent {self.super_parent!r} is not a feature"
                )
        for parent, child in self.edges:
            if child == self.class_variable.name:
                raise InvalidModel(
                    f"edge {parent!r} -> {child!r} makes the class a child "
                    "of a feature, which a classifier forbids"
                )


def build_classifier(spec: ClassifierSpec) -> BayesNetSpec:
    """Rewrite a classifier into a plain Bayesian network."""
    cls = spec.class_variable
    if spec.structure == "naive_bayes":
        order = (cls,) + spec.features
        parents = {f.name: (cls.name,) for f in spec.features}
    elif spec.structure == "spode":
        sp = next(f for f in spec.features if f.name == spec.super_parent)
        rest = tuple(f for f in spec.features if f.name != sp.name)
        order = (cls, sp) + rest
        parents = {sp.name: (cls.name,)}
        parents.update({f.name: (cls.name, sp.name) for f in rest})
    else:
        order = (cls,) + spec.features
        position = {v.name: i for i, v in enumerate(order)}
        parents = {f.name: [cls.name] for f in spec.features}
        for parent, child in spec.edges:
            if parent not in position or child not in position:
                raise InvalidModel(f"edge {parent!r} -> {child!r} names an "
                                   "unknown variable")
            if position[parent] >= position[child]:
                raise InvalidModel(
                    f"edge {parent!r} -> {child!r} goes against the declared "
                    "feature order"
                )
            parents[child].append(parent)
        parents = {k: tuple(v) for k, v in parents.items()}
    return BayesNetSpec(
        variables=order,
        parents=parents,
        cpts=spec.cpts,
    )
