"""Covariation schemes: moving simplex blocks after a parameter variation.

When some parameters of a block are fixed to new target values, the rest of
the block must be adjusted so the block still sums to one.  Three schemes
are provided:

- proportional: untouched coordinates keep their share of the residual
  mass, i.e. they are rescaled by (1 - |targets|) / (1 - |varied|);
- uniform: untouched coordinates split the residual mass equally;
- order-preserving: a single-parameter scheme that keeps the ascending
  order of the block; it scales the coordinates below the varied one and
  maps the ones above it affinely, with the varied value capped at
  1 / (1 + #above), so the varied parameter can never overtake the block
  maximum.

A full-vector variation applies one scheme per touched block and leaves
every untouched block identical (bit-for-bit, not just numerically).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

from .core import EPS_POS, MonomialModel, ParameterVector
from .errors import InvalidVariation, SchemeDomainError

SCHEMES = ("proportional", "uniform", "order_preserving")

# Residual block mass below which the proportional/uniform rescale is
# rejected as numerically singular.
MIN_RESIDUAL = 1e-9


@dataclass(frozen=True, slots=True)
class VariationSpec:
    """Varied parameter indices with target values, plus scheme choices.

    ``scheme`` is either a single scheme name applied to every touched
    block or a (block_index, scheme) mapping; blocks not named fall back
    to ``default_scheme``.
    """

    targets: tuple[tuple[int, float], ...]
    scheme: tuple[tuple[int, str], ...] | None = None
    default_scheme: str = "proportional"

    def __post_init__(self) -> None:
        if not self.targets:
            raise InvalidVariation("at least one parameter must be varied")
        seen = set()
        for j, value in self.targets:
            if j in seen:
                raise InvalidVariation(f"parameter {j} varied twice")
            seen.add(j)
            if not EPS_POS < value < 1.0 - EPS_POS:
                raise InvalidVariation(
                    f"target {value} for parameter {j} is outside (0, 1)"
                )
        if self.default_scheme not in SCHEMES:
            raise InvalidVariation(f"unknown scheme {self.default_scheme!r}")
        if self.scheme is not None:
            for _, name in self.scheme:
                if name not in SCHEMES:
                    raise InvalidVariation(f"unknown scheme {name!r}")

    @classmethod
    def create(
        cls,
        targets: Mapping[int, float],
        scheme: str | Mapping[int, str] = "proportional",
    ) -> "VariationSpec":
        pairs = tuple(sorted((int(j), float(v)) for j, v in targets.items()))
        if isinstance(scheme, str):
            return cls(pairs, None, scheme)
        per_block = tuple(sorted((int(b), str(s)) for b, s in scheme.items()))
        return cls(pairs, per_block)

    def target_map(self) -> dict[int, float]:
        return dict(self.targets)

    def scheme_for(self, block: int) -> str:
        if self.scheme is not None:
            for b, name in self.scheme:
                if b == block:
                    return name
        return self.default_scheme


@dataclass(frozen=True, slots=True)
class CovariationResult:
    """Covaried parameter vector plus bookkeeping about touched blocks."""

    theta_new: ParameterVector
    touched_blocks: tuple[int, ...]
    scale_factors: tuple[tuple[int, float], ...]

    def scale_factor_map(self) -> dict[int, float]:
        return dict(self.scale_factors)


def _check_block_targets(
    theta_s: Sequence[float], varied: Mapping[int, float]
) -> tuple[float, float]:
    """Common preconditions; returns (|targets|, |varied originals|)."""
    size = len(theta_s)
    if not varied:
        raise InvalidVariation("no varied index in block")
    for j in varied:
        if not 0 <= j < size:
            raise InvalidVariation(f"varied index {j} outside the block")
    if len(varied) >= size:
        raise InvalidVariation(
            "varying every coordinate of a block leaves nothing to covary"
        )
    target_sum = math.fsum(varied.values())
    if not EPS_POS < target_sum < 1.0 - EPS_POS:
        raise SchemeDomainError(
            f"varied targets sum to {target_sum}, outside (0, 1)"
        )
    varied_sum = math.fsum(theta_s[j] for j in varied)
    return target_sum, varied_sum


def covary_block_proportional(
    theta_s: Sequence[float], varied: Mapping[int, float]
) -> tuple[float, ...]:
    """Rescale the untouched coordinates by the residual-mass ratio."""
    target_sum, varied_sum = _check_block_targets(theta_s, varied)
    if 1.0 - varied_sum < MIN_RESIDUAL:
        raise SchemeDomainError(
            "varied coordinates already hold the whole block mass; the "
            "proportional rescale is undefined"
        )
    scale = (1.0 - target_sum) / (1.0 - varied_sum)
    return tuple(
        varied[j] if j in varied else theta_s[j] * scale
        for j in range(len(theta_s))
    )


def covary_block_uniform(
    theta_s: Sequence[float], varied: Mapping[int, float]
) -> tuple[float, ...]:
    """Give every untouched coordinate an equal share of the residual."""
    target_sum, _ = _check_block_targets(theta_s, varied)
    share = (1.0 - target_sum) / (len(theta_s) - len(varied))
    return tuple(
        varied[j] if j in varied else share for j in range(len(theta_s))
    )


def order_preserving_max(theta_s: Sequence[float], v: int) -> float:
    """Upper bound for the varied value: 1 / (1 + #coordinates above v).

    Positions are taken in the ascending sorted frame with ties broken by
    original index.  Raises when v is the block maximum, for which the
    scheme is undefined.
    """
    order = sorted(range(len(theta_s)), key=lambda j: (theta_s[j], j))
    pos = order.index(v)
    if pos == len(theta_s) - 1:
        raise SchemeDomainError(
            "the order-preserving scheme cannot vary the largest coordinate"
        )
    return 1.0 / (1.0 + len(theta_s) - (pos + 1))


def covary_block_order_preserving(
    theta_s: Sequence[float], v: int, target: float
) -> tuple[float, ...]:
    """Move one coordinate while preserving the ascending order of the block.

    Work happens in the sorted frame.  Decreasing the varied value scales
    the coordinates below it by target/original and maps the ones above it
    affinely through their original total mass; increasing it pulls both
    sides toward the cap ``order_preserving_max``.  Results are reported in
    the original coordinate order.
    """
    size = len(theta_s)
    if not 0 <= v < size:
        raise InvalidVariation(f"varied index {v} outside the block")
    order = sorted(range(size), key=lambda j: (theta_s[j], j))
    pos = order.index(v)
    if pos == size - 1:
        raise SchemeDomainError(
            "the order-preserving scheme cannot vary the largest coordinate"
        )
    cap = 1.0 / (1.0 + size - (pos + 1))
    if not EPS_POS < target < cap - EPS_POS:
        raise SchemeDomainError(
            f"order-preserving target {target} outside its domain "
            f"(0, {cap})"
        )
    old = theta_s[v]
    if target == old:
        return tuple(theta_s)
    out = [0.0] * size
    out[v] = target
    above_mass = math.fsum(theta_s[order[p]] for p in range(pos + 1, size))
    if target < old:
        ratio = target / old
        for p in range(pos):
            j = order[p]
            out[j] = theta_s[j] * ratio
        for p in range(pos + 1, size):
            j = order[p]
            out[j] = (
                theta_s[j] / above_mass
                - theta_s[j] * (1.0 - above_mass) / above_mass * ratio
            )
    else:
        stretch = (cap - target) / (cap - old)
        for p in range(pos):
            j = order[p]
            out[j] = theta_s[j] * stretch
        for p in range(pos + 1, size):
            j = order[p]
            out[j] = (theta_s[j] - cap) * stretch + cap
    return tuple(out)


def covary(
    model: MonomialModel, theta: ParameterVector, spec: VariationSpec
) -> CovariationResult:
    """Apply one covariation scheme per touched block.

    Untouched blocks are copied verbatim, so the fixed coordinates of the
    result are bit-identical to the input.  Scheme errors are re-raised
    with the offending block named.
    """
    partition = theta.partition
    targets = spec.target_map()
    for j in targets:
        if not 0 <= j < len(theta.values):
            raise InvalidVariation(f"parameter index {j} out of range")
    by_block: dict[int, dict[int, float]] = {}
    for j, value in targets.items():
        by_block.setdefault(partition.block_of(j), {})[j] = value

    new_values = list(theta.values)
    scale_factors: list[tuple[int, float]] = []
    for b in sorted(by_block):
        block = partition.blocks[b]
        local = {block.index(j): v for j, v in by_block[b].items()}
        theta_s = [theta.values[j] for j in block]
        scheme = spec.scheme_for(b)
        try:
            if scheme == "proportional":
                new_block = covary_block_proportional(theta_s, local)
                target_sum = math.fsum(local.values())
                varied_sum = math.fsum(theta_s[j] for j in local)
                scale_factors.append(
                    (b, (1.0 - target_sum) / (1.0 - varied_sum))
                )
            elif scheme == "uniform":
                new_block = covary_block_uniform(theta_s, local)
            else:
                if len(local) != 1:
                    raise SchemeDomainError(
                        "the order-preserving scheme varies a single "
                        "parameter; this block has "
                        f"{len(local)} varied coordinates"
                    )
                ((v, target),) = local.items()
                new_block = covary_block_order_preserving(theta_s, v, target)
        except (SchemeDomainError, InvalidVariation) as err:
            raise type(err)(f"block {b + 1}: {err}") from err
        for local_j, j in enumerate(block):
            new_values[j] = new_block[local_j]

    return CovariationResult(
        theta_new=theta.with_values(new_values),
        touched_blocks=tuple(sorted(by_block)),
        scale_factors=tuple(scale_factors),
    )
