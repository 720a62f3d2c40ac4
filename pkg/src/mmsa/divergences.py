"""Divergences between strictly positive distributions on the same atoms.

All logarithms are natural.  Inputs with any coordinate below 1e-300 are
rejected rather than clamped: silent clamping would corrupt the optimality
comparisons this package exists to make, which live close to the simplex
boundary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .core import EPS_SUM, MonomialModel, ParameterVector, atom_distribution
from .errors import InvalidParameters, UnknownName

MIN_PROB = 1e-300


def _as_distribution(values: Sequence[float], name: str) -> np.ndarray:
    p = np.asarray(values, dtype=float)
    if p.ndim != 1 or p.size == 0:
        raise InvalidParameters(f"{name} must be a non-empty vector")
    if not np.all(np.isfinite(p)):
        raise InvalidParameters(f"{name} contains non-finite values")
    if np.any(p < MIN_PROB):
        raise InvalidParameters(
            f"{name} has a coordinate below {MIN_PROB}; strictly positive "
            "probabilities are required"
        )
    total = math.fsum(p.tolist())
    if abs(total - 1.0) > EPS_SUM:
        raise InvalidParameters(f"{name} sums to {total!r}, not 1")
    return p


def _check_pair(
    a: Sequence[float], b: Sequence[float], names: tuple[str, str]
) -> tuple[np.ndarray, np.ndarray]:
    pa = _as_distribution(a, names[0])
    pb = _as_distribution(b, names[1])
    if pa.size != pb.size:
        raise InvalidParameters(
            f"distributions have different lengths ({pa.size} vs {pb.size})"
        )
    return pa, pb


def kl_divergence(q_dist: Sequence[float], p_dist: Sequence[float]) -> float:
    """sum_y Q(y) ln(Q(y) / P(y)); zero iff the distributions coincide."""
    q, p = _check_pair(q_dist, p_dist, ("q_dist", "p_dist"))
    return math.fsum(qi * math.log(qi / pi) for qi, pi in zip(q, p))


def cd_distance(p_dist: Sequence[float], q_dist: Sequence[float]) -> float:
    """Spread of the log probability ratio: ln max(P/Q) - ln min(P/Q).

    Symmetric under swapping the arguments.  Computed in a single pass over
    log-ratios so extreme probabilities cannot overflow the ratio.
    """
    p, q = _check_pair(p_dist, q_dist, ("p_dist", "q_dist"))
    hi = -math.inf
    lo = math.inf
    for pi, qi in zip(p, q):
        r = math.log(pi) - math.log(qi)
        hi = max(hi, r)
        lo = min(lo, r)
    return hi - lo


@dataclass(frozen=True, slots=True)
class PhiFunction:
    """A convex scalar function with phi(1) = 0, tagged with a name."""

    name: str
    fn: Callable[[float], float]

    def __post_init__(self) -> None:
        at_one = self.fn(1.0)
        if abs(at_one) > 1e-12:
            raise InvalidParameters(
                f"phi function {self.name!r} has phi(1) = {at_one}, not 0"
            )


PHI_FUNCTIONS: dict[str, PhiFunction] = {}


def register_phi(name: str, fn: Callable[[float], float]) -> PhiFunction:
    phi = PhiFunction(name, fn)
    PHI_FUNCTIONS[name] = phi
    return phi


register_phi("xlogx", lambda x: x * math.log(x))
register_phi("total_variation", lambda x: abs(x - 1.0))
register_phi("chi_squared", lambda x: (x - 1.0) ** 2)


def phi_divergence(
    q_dist: Sequence[float], p_dist: Sequence[float], phi: PhiFunction
) -> float:
    """sum_y P(y) phi(Q(y) / P(y)); with phi = x ln x this is the KL value."""
    q, p = _check_pair(q_dist, p_dist, ("q_dist", "p_dist"))
    return math.fsum(pi * phi.fn(qi / pi) for qi, pi in zip(q, p))


def divergence_between(
    model: MonomialModel,
    theta_a: ParameterVector,
    theta_b: ParameterVector,
    metric: str = "kl",
) -> float:
    """Divergence between the atom distributions induced by two vectors.

    theta_a plays the role of the comparison distribution Q and theta_b the
    reference P.  ``metric`` is "kl", "cd", or "phi:<registered-name>".
    """
    qa = atom_distribution(model, theta_a)
    pb = atom_distribution(model, theta_b)
    if metric == "kl":
        return kl_divergence(qa, pb)
    if metric == "cd":
        return cd_distance(pb, qa)
    if metric.startswith("phi:"):
        name = metric[4:]
        if name not in PHI_FUNCTIONS:
            raise UnknownName(f"no phi function registered as {name!r}")
        return phi_divergence(qa, pb, PHI_FUNCTIONS[name])
    raise UnknownName(f"unknown metric {metric!r}; use kl, cd, or phi:<name>")
