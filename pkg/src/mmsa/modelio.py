"""File formats, request parsing, and the loaded-model session.

JSON formats (all indices 0-based in files; the CLI renders 1-based):

- raw monomial model::

    {"atoms": [...], "params": [...], "partition": [[indices]],
     "exponents": [[row, col, exp] | [row, col]], "theta": [...]}

  the exponent field may be omitted per entry for multilinear models;

- Bayesian network::

    {"variables": [{"name": ..., "states": [...]}],
     "parents": {var: [vars]}, "cpts": {var: {config_key: [probs]}}}

  with config_key the comma-joined parent states ("" for roots);

- staged tree::

    {"vertices": [{"id": ..., "children": [...], "labels": [...]}],
     "stages": [[vertex ids]], "probabilities": {vertex_id: [probs]}}

- classifier: the BN format plus "class_variable" and "structure"
  ("naive_bayes" | "spode" | "general"), "super_parent", "edges".

Variation requests::

    {"vary": {"<label or index>": value},
     "scheme": "proportional" | "uniform" | "order_preserving"
               | {"<block index>": scheme}}

Parameters are addressable by exact label, by "theta<k>" / "param<k>", or
by a bare integer, all 1-based; on a clash the label wins and a warning is
emitted.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Mapping, Sequence

from .compilers import (
    BayesNetSpec,
    ClassifierSpec,
    StagedTreeSpec,
    TreeVertex,
    Variable,
    atoms_matching,
    build_classifier,
    compile_bn,
    compile_staged_tree,
)
from .core import AtomEvent, ExponentMatrix, MonomialModel, ParameterVector, SimplexPartition
from .covariation import VariationSpec
from .errors import ModelFormatError, UnknownName


def fmt_float(x: float) -> str:
    """Shortest decimal string that round-trips the double exactly."""
    return repr(float(x))


@dataclass(frozen=True, slots=True)
class SessionModel:
    """A loaded model: validated once, then treated as an immutable snapshot."""

    model: MonomialModel
    theta: ParameterVector
    source: str
    variables: tuple[Variable, ...] | None = None


# ---------------------------------------------------------------------------
# Raw monomial-model format
# ---------------------------------------------------------------------------


def model_to_dict(model: MonomialModel, theta: ParameterVector) -> dict:
    multilinear = all(e == 1 for _, _, e in model.matrix.entries)
    exponents = [
        [r, c] if multilinear else [r, c, e]
        for r, c, e in sorted(model.matrix.entries)
    ]
    return {
        "atoms": list(model.atom_labels),
        "params": list(theta.labels),
        "partition": [list(b) for b in model.partition.blocks],
        "exponents": exponents,
        "theta": list(theta.values),
    }


def model_from_dict(d: Mapping) -> tuple[MonomialModel, ParameterVector]:
    try:
        params = list(d["params"])
        partition = SimplexPartition(
            tuple(tuple(int(j) for j in b) for b in d["partition"])
        )
        entries = []
        for item in d["exponents"]:
            if len(item) == 2:
                r, c = item
                e = 1
            else:
                r, c, e = item
            entries.append((int(r), int(c), int(e)))
        atoms = list(d["atoms"])
        matrix = ExponentMatrix(len(atoms), len(params), tuple(entries))
        model = MonomialModel(matrix, partition, tuple(str(a) for a in atoms))
        theta = ParameterVector.create(
            [float(v) for v in d["theta"]], partition, [str(p) for p in params]
        )
    except KeyError as err:
        raise ModelFormatError(f"missing field {err} in model payload") from err
    return model, theta


# ---------------------------------------------------------------------------
# Bayesian networks, staged trees, classifiers
# ---------------------------------------------------------------------------


def _variables_from(d: Mapping) -> tuple[Variable, ...]:
    return tuple(
        Variable(str(v["name"]), tuple(str(s) for s in v["states"]))
        for v in d["variables"]
    )


def bn_from_dict(d: Mapping) -> BayesNetSpec:
    variables = _variables_from(d)
    parents = {
        str(k): tuple(str(p) for p in v)
        for k, v in d.get("parents", {}).items()
    }
    cpts = {
        str(var): {
            str(key): tuple(float(p) for p in column)
            for key, column in table.items()
        }
        for var, table in d["cpts"].items()
    }
    return BayesNetSpec(variables=variables, parents=parents, cpts=cpts)


def bn_to_dict(spec: BayesNetSpec) -> dict:
    return {
        "variables": [
            {"name": v.name, "states": list(v.states)} for v in spec.variables
        ],
        "parents": {k: list(v) for k, v in spec.parents.items() if v},
        "cpts": {
            var: {key: list(col) for key, col in table.items()}
            for var, table in spec.cpts.items()
        },
    }


def tree_from_dict(d: Mapping) -> StagedTreeSpec:
    vertices = tuple(
        TreeVertex(
            str(v["id"]),
            tuple(str(c) for c in v.get("children", ())),
            tuple(str(l) for l in v.get("labels", ())),
        )
        for v in d["vertices"]
    )
    stages = tuple(
        tuple(str(m) for m in group) for group in d.get("stages", ())
    )
    probabilities = {
        str(k): tuple(float(p) for p in v)
        for k, v in d["probabilities"].items()
    }
    return StagedTreeSpec(
        vertices=vertices, stages=stages, probabilities=probabilities
    )


def tree_to_dict(spec: StagedTreeSpec) -> dict:
    return {
        "vertices": [
            {
                "id": v.id,
                **({"children": list(v.children)} if v.children else {}),
                **({"labels": list(v.labels)} if v.labels else {}),
            }
            for v in spec.vertices
        ],
        "stages": [list(s) for s in spec.stages],
        "probabilities": {k: list(v) for k, v in spec.probabilities.items()},
    }


def classifier_from_dict(d: Mapping) -> ClassifierSpec:
    variables = _variables_from(d)
    class_name = str(d["class_variable"])
    by_name = {v.name: v for v in variables}
    if class_name not in by_name:
        raise ModelFormatError(f"class variable {class_name!r} not declared")
    features = tuple(v for v in variables if v.name != class_name)
    cpts = {
        str(var): {
            str(key): tuple(float(p) for p in column)
            for key, column in table.items()
        }
        for var, table in d["cpts"].items()
    }
    return ClassifierSpec(
        class_variable=by_name[class_name],
        features=features,
        cpts=cpts,
        structure=str(d.get("structure", "naive_bayes")),
        super_parent=d.get("super_parent"),
        edges=tuple(
            (str(p), str(c)) for p, c in d.get("edges", ())
        ),
    )


def classifier_to_dict(spec: ClassifierSpec) -> dict:
    out = {
        "variables": [
            {"name": v.name, "states": list(v.states)}
            for v in (spec.class_variable,) + spec.features
        ],
        "class_variable": spec.class_variable.name,
        "structure": spec.structure,
        "cpts": {
            var: {key: list(col) for key, col in table.items()}
            for var, table in spec.cpts.items()
        },
    }
    if spec.super_parent:
        out["super_parent"] = spec.super_parent
    if spec.edges:
        out["edges"] = [list(e) for e in spec.edges]
    return out


# ---------------------------------------------------------------------------
# Session loading
# ---------------------------------------------------------------------------


def session_from_dict(d: Mapping) -> SessionModel:
    """Detect the payload format and compile it into a session."""
    if not isinstance(d, Mapping):
        raise ModelFormatError("a JSON object is required")
    if "exponents" in d:
        model, theta = model_from_dict(d)
        return SessionModel(model, theta, "raw-mm")
    if "vertices" in d:
        model, theta = compile_staged_tree(tree_from_dict(d))
        return SessionModel(model, theta, "tree")
    if "structure" in d or "class_variable" in d:
        spec = classifier_from_dict(d)
        bn = build_classifier(spec)
        model, theta = compile_bn(bn)
        return SessionModel(model, theta, "classifier", bn.variables)
    if "cpts" in d:
        bn = bn_from_dict(d)
        model, theta = compile_bn(bn)
        return SessionModel(model, theta, "bn", bn.variables)
    raise ModelFormatError(
        "unrecognized model payload; expected a raw monomial model, a "
        "Bayesian network, a staged tree, or a classifier"
    )


def load_session(path: str | Path) -> SessionModel:
    try:
        with open(path) as fh:
            payload = json.load(fh)
    except FileNotFoundError:
        raise ModelFormatError(f"no such model file: {path}") from None
    except json.JSONDecodeError as err:
        raise ModelFormatError(f"{path} is not valid JSON: {err}") from err
    return session_from_dict(payload)


# ---------------------------------------------------------------------------
# Request parsing: parameters, variation specs, events
# ---------------------------------------------------------------------------

_INDEX_TOKEN = re.compile(r"^(?:theta|param)?\s*#?(\d+)$")


def resolve_param(
    token: str | int,
    theta: ParameterVector,
    warn: Callable[[str], None] | None = None,
) -> int:
    """Resolve a parameter reference to a 0-based index.

    Exact labels win over the 1-based numeric reading; when both apply and
    disagree, a warning is emitted through ``warn``.
    """
    if isinstance(token, int):
        index = token - 1
        if not 0 <= index < len(theta.values):
            raise UnknownName(f"parameter index {token} out of range (1-based)")
        return index
    token = token.strip()
    by_label = None
    if token in theta.labels:
        by_label = theta.labels.index(token)
    match = _INDEX_TOKEN.match(token)
    by_index = None
    if match:
        candidate = int(match.group(1)) - 1
        if 0 <= candidate < len(theta.values):
            by_index = candidate
    if by_label is not None:
        if by_index is not None and by_index != by_label and warn is not None:
            warn(
                f"{token!r} is both a label (parameter {by_label + 1}) and an "
                f"index (parameter {by_index + 1}); using the label"
            )
        return by_label
    if by_index is not None:
        return by_index
    raise UnknownName(f"no parameter matches {token!r}")


def parse_variation(
    payload: Mapping,
    theta: ParameterVector,
    warn: Callable[[str], None] | None = None,
) -> VariationSpec:
    """Parse {"vary": ..., "scheme": ...} into a VariationSpec."""
    vary = payload.get("vary")
    if not isinstance(vary, Mapping) or not vary:
        raise ModelFormatError('a non-empty "vary" mapping is required')
    targets = {
        resolve_param(k, theta, warn): float(v) for k, v in vary.items()
    }
    scheme = payload.get("scheme", "proportional")
    if isinstance(scheme, Mapping):
        scheme = {int(b): str(s) for b, s in scheme.items()}
    return VariationSpec.create(targets, scheme)


def parse_event(
    text_or_mapping: str | Mapping, session: SessionModel
) -> AtomEvent:
    """Parse an event reference against the loaded model.

    Accepted forms: a {variable: state} mapping or "Y3=3,Y1=2" text (needs
    variable metadata), "atoms:2,5" with 1-based atom indices, or a comma
    list of atom labels.
    """
    model = session.model
    if isinstance(text_or_mapping, Mapping):
        if session.variables is None:
            raise UnknownName(
                "variable-level events need a model compiled from a "
                "Bayesian network or classifier"
            )
        return atoms_matching(session.variables, text_or_mapping)
    text = text_or_mapping.strip()
    if text.startswith("atoms:"):
        indices = []
        for part in text[len("atoms:"):].split(","):
            index = int(part) - 1
            if not 0 <= index < model.n_atoms:
                raise UnknownName(f"atom index {part} out of range (1-based)")
            indices.append(index)
        return AtomEvent.of(indices)
    if "=" in text:
        assignment = {}
        for part in text.split(","):
            var, _, state = part.partition("=")
            assignment[var.strip()] = state.strip()
        if session.variables is None:
            raise UnknownName(
                "variable-level events need a model compiled from a "
                "Bayesian network or classifier"
            )
        return atoms_matching(session.variables, assignment)
    indices = []
    for part in text.split(","):
        label = part.strip()
        if label not in model.atom_labels:
            raise UnknownName(f"no atom labelled {label!r}")
        indices.append(model.atom_labels.index(label))
    return AtomEvent.of(indices)


def parse_targets(
    payload: Mapping,
    theta: ParameterVector,
    warn: Callable[[str], None] | None = None,
) -> dict[int, float]:
    """The "vary" mapping alone, resolved to {index: target}."""
    vary = payload.get("vary")
    if not isinstance(vary, Mapping) or not vary:
        raise ModelFormatError('a non-empty "vary" mapping is required')
    return {resolve_param(k, theta, warn): float(v) for k, v in vary.items()}
