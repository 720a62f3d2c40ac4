"""JSON/CSV-ready views of results, shared by the CLI and the HTTP service.

Keeping every rendering here (and none in the endpoints) is what makes the
two frontends agree bit-for-bit: identical requests hit identical code and
floats are serialized by either json (repr) or :func:`mmsa.modelio.fmt_float`
(also repr).
"""

from __future__ import annotations

from typing import Sequence

from .core import MonomialModel, ParameterVector, validate
from .covariation import CovariationResult
from .errors import SchemeDomainError
from .modelio import SessionModel, fmt_float
from .sensitivity import AnalysisReport, ProjectionResult, SweepPoint


def order_preserving_cap(theta: ParameterVector, j: int) -> float | None:
    """Upper slider bound for varying parameter j order-preservingly."""
    from .covariation import order_preserving_max

    block = theta.partition.blocks[theta.partition.block_of(j)]
    local = block.index(j)
    try:
        return order_preserving_max([theta.values[i] for i in block], local)
    except SchemeDomainError:
        return None


def model_summary(session: SessionModel) -> dict:
    model, theta = session.model, session.theta
    report = validate(model, theta)
    return {
        "source": session.source,
        "n_atoms": model.n_atoms,
        "n_params": model.n_params,
        "n_blocks": model.partition.n_blocks,
        "atoms": list(model.atom_labels),
        "params": [
            {
                "index": j,
                "label": theta.labels[j],
                "value": theta.values[j],
                "block": model.partition.block_of(j),
                "order_preserving_max": order_preserving_cap(theta, j),
            }
            for j in range(model.n_params)
        ],
        "blocks": [
            {"index": b, "params": list(block)}
            for b, block in enumerate(model.partition.blocks)
        ],
        "variables": (
            [
                {"name": v.name, "states": list(v.states)}
                for v in session.variables
            ]
            if session.variables
            else None
        ),
        "valid": report.ok,
        "violations": list(report.violations),
    }


def covariation_to_dict(
    result: CovariationResult, theta_old: ParameterVector
) -> dict:
    new = result.theta_new
    return {
        "theta_new": list(new.values),
        "labels": list(new.labels),
        "touched_blocks": list(result.touched_blocks),
        "scale_factors": {str(b): f for b, f in result.scale_factors},
        "changes": [
            {
                "index": j,
                "label": new.labels[j],
                "old": theta_old.values[j],
                "new": new.values[j],
            }
            for j in range(len(new.values))
            if theta_old.partition.block_of(j) in result.touched_blocks
        ],
    }


def projection_to_dict(result: ProjectionResult) -> dict:
    return {
        "min_kl": result.min_kl,
        "proportional_kl": result.proportional_kl,
        "matches_proportional": result.matches_proportional,
        "grid_step": result.grid_step,
        "n_candidates": result.n_candidates,
        "argmin_theta": list(result.argmin_theta.values),
        "labels": list(result.argmin_theta.labels),
    }


def analysis_to_dict(report: AnalysisReport) -> dict:
    return {
        "kind": report.kind,
        "witness": {
            k: (list(v) if isinstance(v, tuple) else v)
            for k, v in report.witness
        },
        "samples": report.samples,
        "max_abs_residual": report.max_abs_residual,
        "mean_abs_residual": report.mean_abs_residual,
        "max_identity_gap": report.max_identity_gap,
        "residuals": list(report.residuals),
        "projection": (
            projection_to_dict(report.projection) if report.projection else None
        ),
    }


def sweep_to_dict(
    varied_labels: Sequence[str],
    curves: Sequence[tuple[str, Sequence[SweepPoint]]],
) -> dict:
    return {
        "varied": list(varied_labels),
        "curves": [
            {
                "scheme": scheme,
                "points": [
                    {
                        "targets": list(p.targets),
                        "probability": p.probability,
                        "kl": p.kl,
                        "cd": p.cd,
                    }
                    for p in points
                ],
            }
            for scheme, points in curves
        ],
    }


def sweep_to_csv(
    varied_labels: Sequence[str],
    curves: Sequence[tuple[str, Sequence[SweepPoint]]],
) -> str:
    """One row per (scheme, grid point); absent points leave empty cells."""
    target_cols = [f"target_{i + 1}" for i in range(len(varied_labels))]
    lines = [",".join(target_cols + ["scheme", "probability", "kl", "cd"])]
    for scheme, points in curves:
        for p in points:
            cells = [fmt_float(t) for t in p.targets]
            cells.append(scheme)
            for value in (p.probability, p.kl, p.cd):
                cells.append("" if value is None else fmt_float(value))
            lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def covariation_to_csv(
    result: CovariationResult, theta_old: ParameterVector
) -> str:
    lines = ["index,label,old,new"]
    for row in covariation_to_dict(result, theta_old)["changes"]:
        lines.append(
            ",".join(
                [
                    str(row["index"] + 1),
                    '"' + row["label"].replace('"', '""') + '"',
                    fmt_float(row["old"]),
                    fmt_float(row["new"]),
                ]
            )
        )
    return "\n".join(lines) + "\n"


def key_value_csv(pairs: Sequence[tuple[str, object]]) -> str:
    lines = ["key,value"]
    for key, value in pairs:
        if isinstance(value, float):
            value = fmt_float(value)
        lines.append(f"{key},{value}")
    return "\n".join(lines) + "\n"


def model_to_full_dict(model: MonomialModel, theta: ParameterVector) -> dict:
    from .modelio import model_to_dict

    return model_to_dict(model, theta)
