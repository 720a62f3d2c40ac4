"""Command-line interface.

Every command takes ``-m/--model`` with a model file in any supported
format.  Parameters are addressed by label or 1-based index ("theta2"),
events by variable assignment ("Y3=3"), atom labels, or "atoms:1,5".
``--format json|csv`` switches the output; indices inside CSV output are
1-based, JSON stays 0-based like the files.  MMSA_GRID_DEFAULT overrides
the default grid resolution of 99.
"""

from __future__ import annotations

import json
import os
import sys
from pathlib import Path

import click

from .core import check_multilinear, check_regular, validate
from .covariation import covary
from .divergences import divergence_between
from .errors import MmsaError
from .modelio import (
    fmt_float,
    load_session,
    model_to_dict,
    parse_event,
    resolve_param,
)
from .covariation import VariationSpec
from .sensitivity import analyze, i_projection_oracle, sweep
from .serialize import (
    analysis_to_dict,
    covariation_to_csv,
    covariation_to_dict,
    key_value_csv,
    model_summary,
    projection_to_dict,
    sweep_to_csv,
    sweep_to_dict,
)

_model_option = click.option(
    "-m",
    "--model",
    "model_path",
    required=True,
    type=click.Path(),
    help="Model file (raw MM, Bayesian network, staged tree, or classifier).",
)
_format_option = click.option(
    "--format",
    "fmt",
    type=click.Choice(["json", "csv"]),
    default="json",
    show_default=True,
)


def _default_grid() -> int:
    return int(os.environ.get("MMSA_GRID_DEFAULT", "99"))


def _warn(message: str) -> None:
    click.echo(f"warning: {message}", err=True)


def _fail(err: Exception) -> None:
    click.echo(f"error: {err}", err=True)
    sys.exit(1)


def _emit(payload: dict, fmt: str, csv_text: str | None = None) -> None:
    if fmt == "csv" and csv_text is not None:
        click.echo(csv_text, nl=False)
    else:
        click.echo(json.dumps(payload, indent=2))


def _parse_vary_values(tokens, theta) -> dict[int, float]:
    # Labels may contain '=' and ',' so each --vary flag carries exactly one
    # pair and the value is split off at the last '='.
    targets = {}
    for token in tokens:
        name, sep, value = token.rpartition("=")
        if not sep:
            raise click.UsageError(f"--vary expects name=value, got {token!r}")
        targets[resolve_param(name.strip(), theta, _warn)] = float(value)
    return targets


@click.group()
@click.version_option()
def main() -> None:
    """Covariation, sensitivity functions, and projection checks for
    monomial models."""


@main.command(name="validate")
@_model_option
def validate_cmd(model_path: str) -> None:
    """Validate a model file; exit 0 only when it is clean."""
    try:
        session = load_session(model_path)
    except MmsaError as err:
        click.echo(f"invalid: {err}")
        sys.exit(1)
    report = validate(session.model, session.theta)
    multilinear = check_multilinear(session.model)
    click.echo(f"atoms: {session.model.n_atoms}")
    click.echo(f"parameters: {session.model.n_params} in "
               f"{session.model.partition.n_blocks} blocks")
    click.echo(f"multilinear: {multilinear}")
    if multilinear:
        click.echo(f"regular (weak): {check_regular(session.model, False)}")
        click.echo(f"regular (strict): {check_regular(session.model, True)}")
    for violation in report.violations:
        click.echo(f"violation: {violation}")
    click.echo("ok" if report.ok else "invalid")
    sys.exit(0 if report.ok else 1)


@main.command(name="compile")
@_model_option
@click.option("-o", "--out", type=click.Path(), default=None)
def compile_cmd(model_path: str, out: str | None) -> None:
    """Compile any supported format to the raw monomial-model JSON."""
    try:
        session = load_session(model_path)
    except MmsaError as err:
        _fail(err)
    payload = json.dumps(model_to_dict(session.model, session.theta), indent=2)
    if out:
        Path(out).write_text(payload + "\n")
        click.echo(f"wrote {out}")
    else:
        click.echo(payload)


@main.command()
@_model_option
@click.option("--event", required=True, help='e.g. "Y3=3" or "atoms:4,5"')
@_format_option
def prob(model_path: str, event: str, fmt: str) -> None:
    """Probability of an event under the loaded model."""
    from .core import event_probability

    try:
        session = load_session(model_path)
        atoms = parse_event(event, session)
        value = event_probability(session.model, session.theta, atoms)
    except MmsaError as err:
        _fail(err)
    payload = {
        "event": event,
        "atoms": sorted(a + 1 for a in atoms.atoms),
        "probability": value,
    }
    _emit(payload, fmt, key_value_csv([("probability", value)]))


@main.command(name="covary")
@_model_option
@click.option("--vary", "vary_tokens", multiple=True, required=True,
              help="name=value (repeatable, comma-splittable)")
@click.option("--scheme", default="proportional", show_default=True)
@_format_option
def covary_cmd(model_path, vary_tokens, scheme, fmt) -> None:
    """Covary the remaining block coordinates after a variation."""
    try:
        session = load_session(model_path)
        targets = _parse_vary_values(vary_tokens, session.theta)
        spec = VariationSpec.create(targets, _parse_scheme(scheme))
        result = covary(session.model, session.theta, spec)
    except MmsaError as err:
        _fail(err)
    _emit(
        covariation_to_dict(result, session.theta),
        fmt,
        covariation_to_csv(result, session.theta),
    )


def _parse_scheme(text: str):
    text = text.strip()
    if text.startswith("{"):
        return {int(k): str(v) for k, v in json.loads(text).items()}
    return text


@main.command()
@_model_option
@click.option("--vary", "vary_tokens", multiple=True, required=True,
              help="swept parameter name(s), no value")
@click.option("--event", required=True)
@click.option("--schemes", default="proportional", show_default=True,
              help="comma-separated scheme list")
@click.option("--grid", type=int, default=None,
              help="grid resolution [default: 99 or MMSA_GRID_DEFAULT]")
@click.option("-o", "--out", type=click.Path(), default=None)
@_format_option
def sensitivity(model_path, vary_tokens, event, schemes, grid, out, fmt) -> None:
    """Sweep targets for the varied parameter(s) and tabulate the curves."""
    try:
        session = load_session(model_path)
        varied = [
            resolve_param(token.strip(), session.theta, _warn)
            for token in vary_tokens
        ]
        atoms = parse_event(event, session)
        curves = sweep(
            session.model,
            session.theta,
            varied,
            [s.strip() for s in schemes.split(",")],
            atoms,
            grid or _default_grid(),
        )
    except MmsaError as err:
        _fail(err)
    labels = [session.theta.labels[j] for j in varied]
    csv_text = sweep_to_csv(labels, curves)
    if out:
        Path(out).write_text(csv_text)
        click.echo(f"wrote {out}")
        return
    _emit(sweep_to_dict(labels, curves), fmt, csv_text)


@main.command()
@_model_option
@click.option("--vary", "vary_tokens", multiple=True, required=True)
@click.option("--scheme", default="proportional", show_default=True)
@click.option("--metrics", default="kl,cd", show_default=True)
@_format_option
def divergence(model_path, vary_tokens, scheme, metrics, fmt) -> None:
    """Divergences between the covaried and the original distribution."""
    try:
        session = load_session(model_path)
        targets = _parse_vary_values(vary_tokens, session.theta)
        spec = VariationSpec.create(targets, _parse_scheme(scheme))
        result = covary(session.model, session.theta, spec)
        values = {
            metric.strip(): divergence_between(
                session.model, result.theta_new, session.theta, metric.strip()
            )
            for metric in metrics.split(",")
        }
    except MmsaError as err:
        _fail(err)
    _emit(values, fmt, key_value_csv(sorted(values.items())))


@main.command(name="analyze")
@_model_option
@click.option("--vary", "vary_tokens", multiple=True, required=True)
@click.option("--samples", type=int, default=50, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--oracle/--no-oracle", default=True, show_default=True)
@click.option("--grid", type=int, default=None)
@_format_option
def analyze_cmd(model_path, vary_tokens, samples, seed, oracle, grid, fmt) -> None:
    """Classify a variation and check the projection property."""
    try:
        session = load_session(model_path)
        targets = _parse_vary_values(vary_tokens, session.theta)
        report = analyze(
            session.model,
            session.theta,
            targets,
            samples=samples,
            seed=seed,
            run_oracle=oracle,
            grid_m=grid or _default_grid(),
        )
    except MmsaError as err:
        _fail(err)
    payload = analysis_to_dict(report)
    if fmt == "csv":
        pairs = [
            ("kind", report.kind),
            ("samples", report.samples),
            ("max_abs_residual", report.max_abs_residual),
            ("mean_abs_residual", report.mean_abs_residual),
            ("max_identity_gap", report.max_identity_gap),
        ]
        if report.projection is not None:
            pairs += [
                ("matches_proportional", report.projection.matches_proportional),
                ("min_kl", report.projection.min_kl),
                ("proportional_kl", report.projection.proportional_kl),
            ]
        _emit(payload, fmt, key_value_csv(pairs))
        return
    click.echo(f"analysis kind: {report.kind}", err=True)
    click.echo(
        f"max |residual| over {report.samples} samples: "
        f"{fmt_float(report.max_abs_residual)}",
        err=True,
    )
    if report.projection is not None:
        p = report.projection
        verdict = "is" if p.matches_proportional else "is NOT"
        click.echo(
            f"proportional covariation {verdict} the divergence minimizer "
            f"within one grid step",
            err=True,
        )
    click.echo(json.dumps(payload, indent=2))


@main.command()
@_model_option
@click.option("--vary", "vary_tokens", multiple=True, required=True)
@click.option("--grid", type=int, default=None)
@_format_option
def project(model_path, vary_tokens, grid, fmt) -> None:
    """Brute-force the divergence minimizer over the covaried coordinates."""
    try:
        session = load_session(model_path)
        targets = _parse_vary_values(vary_tokens, session.theta)
        result = i_projection_oracle(
            session.model, session.theta, targets, grid or _default_grid()
        )
    except MmsaError as err:
        _fail(err)
    payload = projection_to_dict(result)
    pairs = [(k, v) for k, v in payload.items() if not isinstance(v, list)]
    _emit(payload, fmt, key_value_csv(pairs))


@main.command()
@click.option("--port", type=int, default=8080, show_default=True)
@click.option("-m", "--model", "model_path", type=click.Path(), default=None)
@click.option("--ui", "ui_dir", type=click.Path(), default=None,
              help="directory with the built web UI to serve at /")
@click.option("--host", default="127.0.0.1", show_default=True)
def serve(port, model_path, ui_dir, host) -> None:
    """Run the HTTP service (one model per process)."""
    from .service import serve as run

    session = None
    if model_path:
        try:
            session = load_session(model_path)
        except MmsaError as err:
            _fail(err)
    run(port, session, ui_dir, host)


@main.command()
@_model_option
@_format_option
def summary(model_path, fmt) -> None:
    """Describe the loaded model (blocks, labels, slider bounds)."""
    try:
        session = load_session(model_path)
    except MmsaError as err:
        _fail(err)
    _emit(model_summary(session), fmt, None)


if __name__ == "__main__":
    main()
