"""Exception hierarchy shared by every module.

Each error class carries a stable ``case`` name so that the CLI and the HTTP
service can surface the originating failure mode verbatim, plus the HTTP
status the service should map it to.
"""

from __future__ import annotations


class MmsaError(Exception):
    """Base class for all domain errors."""

    case = "error"
    http_status = 400


class InvalidModel(MmsaError):
    """A model object violates a structural invariant."""

    case = "invalid_model"


class InvalidParameters(MmsaError):
    """A parameter vector fails positivity or sum-to-one checks."""

    case = "invalid_parameters"


class InvalidVariation(MmsaError):
    """A variation request is malformed (empty, duplicated, whole-block...)."""

    case = "invalid_variation"


class SchemeDomainError(MmsaError):
    """A covariation scheme was asked for a target outside its valid domain."""

    case = "scheme_domain"
    http_status = 422


class SearchSpaceTooLarge(MmsaError):
    """The projection search grid exceeds the exhaustive-search guard."""

    case = "search_space"
    http_status = 413


class ModelFormatError(MmsaError):
    """A model file or payload cannot be parsed into a supported format."""

    case = "model_format"


class UnknownName(MmsaError):
    """A label, variable, or state name does not resolve on this model."""

    case = "unknown_name"
