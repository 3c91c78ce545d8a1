"""Coherence and correlation quantifiers, all in bits.

The coherence of a state is the entropy gap between its dephased version and
itself; the distributed coherence is the part of it that no subsystem holds
locally, and equals the mutual-information loss under full dephasing.
"""

from __future__ import annotations

from dataclasses import dataclass

from .states import (
    DensityMatrix,
    as_density,
    dephase,
    partial_trace,
    von_neumann_entropy,
)

#: Quantifiers may undershoot zero by at most this much before it is an error.
NEG_TOL = 1e-10


def _clamp_nonneg(value: float, label: str) -> float:
    if value < -NEG_TOL:
        raise ValueError(f"{label} is negative beyond tolerance: {value!r}")
    return max(value, 0.0)


@dataclass(frozen=True)
class MeasureReport:
    """All bipartite quantifiers of one state, mutually consistent.

    ``distributed_coherence`` equals both ``global_coherence - sum(local_coherences)``
    and ``mutual_information - dephased_mutual_information`` within 1e-10.
    """

    global_coherence: float
    local_coherences: tuple[float, ...]
    distributed_coherence: float
    mutual_information: float
    dephased_mutual_information: float

    def __post_init__(self):
        gap = self.global_coherence - sum(self.local_coherences)
        if abs(self.distributed_coherence - max(gap, 0.0)) > NEG_TOL:
            raise ValueError(
                "inconsistent report: distributed coherence does not match the "
                f"global-minus-local gap ({self.distributed_coherence!r} vs {gap!r})"
            )
        delta = self.mutual_information - self.dephased_mutual_information
        if abs(self.distributed_coherence - max(delta, 0.0)) > NEG_TOL:
            raise ValueError(
                "inconsistent report: distributed coherence does not match the "
                f"mutual-information gap ({self.distributed_coherence!r} vs {delta!r})"
            )


def rel_entropy_coherence(state) -> float:
    """Relative entropy of coherence, S(rho_dephased) - S(rho).

    This closed form attains the minimum relative entropy to any state that is
    diagonal in the reference basis.
    """
    rho = as_density(state)
    value = von_neumann_entropy(dephase(rho)) - von_neumann_entropy(rho)
    return _clamp_nonneg(value, "relative entropy of coherence")


def mutual_information(state) -> float:
    """S(rho_A) + S(rho_B) - S(rho_AB) for a bipartite state."""
    rho = as_density(state)
    if len(rho.dims) != 2:
        raise ValueError(f"not bipartite: state has {len(rho.dims)} subsystems")
    value = (
        von_neumann_entropy(partial_trace(rho, [0]))
        + von_neumann_entropy(partial_trace(rho, [1]))
        - von_neumann_entropy(rho)
    )
    return _clamp_nonneg(value, "mutual information")


def distributed_coherence(state) -> float:
    """Global coherence minus the sum of the single-subsystem coherences.

    Defined for any number of subsystems; for bipartite states it equals
    :func:`delta_mutual_information`.
    """
    rho = as_density(state)
    if len(rho.dims) < 2:
        raise ValueError("need at least 2 subsystems")
    value = rel_entropy_coherence(rho)
    for i in range(len(rho.dims)):
        value -= rel_entropy_coherence(partial_trace(rho, [i]))
    return _clamp_nonneg(value, "distributed coherence")


def delta_mutual_information(state) -> float:
    """Mutual information lost by fully dephasing a bipartite state."""
    rho = as_density(state)
    if len(rho.dims) != 2:
        raise ValueError(f"not bipartite: state has {len(rho.dims)} subsystems")
    value = mutual_information(rho) - mutual_information(dephase(rho))
    return _clamp_nonneg(value, "mutual-information gap")


def measure_report(state) -> MeasureReport:
    """Compute every quantifier of a bipartite state in one pass."""
    rho = as_density(state)
    if len(rho.dims) != 2:
        raise ValueError(f"not bipartite: state has {len(rho.dims)} subsystems")
    glob = rel_entropy_coherence(rho)
    locals_ = tuple(
        rel_entropy_coherence(partial_trace(rho, [i])) for i in range(len(rho.dims))
    )
    return MeasureReport(
        global_coherence=glob,
        local_coherences=locals_,
        distributed_coherence=_clamp_nonneg(glob - sum(locals_), "distributed coherence"),
        mutual_information=mutual_information(rho),
        dephased_mutual_information=mutual_information(dephase(rho)),
    )
