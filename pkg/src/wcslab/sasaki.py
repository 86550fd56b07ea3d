"""Curvature of the circle-bundle total space over a Kahler surface.

The 5-dimensional tensor lives in the frame (xi, e2, Je2, e3, Je3), index 0
being the unit vertical vector.  All components are reconstructed from the
three lift identities plus the curvature symmetries; the symmetries are
asserted afterwards, never forced.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .catalog import KahlerSurface
from .geometry import RiemannTensor, symmetry_violation

__all__ = ["SasakiLift", "LiftConsistencyError", "lift_curvature", "total_volume", "FIBER_LENGTH"]

#: Orbit loops are parametrized by theta in [0, 2pi] at unit speed.
FIBER_LENGTH = 2.0 * np.pi


class LiftConsistencyError(RuntimeError):
    """The reconstructed 5d tensor failed a curvature identity."""


@dataclass(frozen=True)
class SasakiLift:
    base: KahlerSurface
    k: int
    curvature5: RiemannTensor
    fiber_length: float = FIBER_LENGTH

    @property
    def total_volume(self) -> float:
        return self.fiber_length * self.base.volume


def lift_curvature(base: KahlerSurface, k: int) -> SasakiLift:
    """Assemble the full 5d curvature tensor of the level-k circle bundle.

    Horizontal block:
        Rbar(X,Y,Z,W) = R(X,Y,Z,W)
            + k^2 [-<JY,Z><JX,W> + <JX,Z><JY,W> + 2<JX,Y><JZ,W>]
    Mixed components with a single vertical slot vanish; the two-vertical
    pattern is Rbar(xi,X,Y,xi) = k^2 <X,Y>.
    """
    R = base.require_curvature()
    Jm = base.J.matrix
    k2 = float(k) ** 2

    horiz = R.comp + k2 * (
        -np.einsum("li,kj->ijkl", Jm, Jm)
        + np.einsum("ki,lj->ijkl", Jm, Jm)
        + 2.0 * np.einsum("ji,lk->ijkl", Jm, Jm)
    )

    comp = np.zeros((5, 5, 5, 5))
    comp[1:, 1:, 1:, 1:] = horiz
    # Third identity Rbar(xi, X, Y, xi) = k^2 <X,Y> and its symmetry images.
    for i in range(1, 5):
        comp[0, i, i, 0] = k2
        comp[i, 0, i, 0] = -k2
        comp[0, i, 0, i] = -k2
        comp[i, 0, 0, i] = k2
    lift = SasakiLift(base=base, k=int(k), curvature5=RiemannTensor(comp))

    viol = symmetry_violation(lift.curvature5)
    if viol > 1e-12:
        raise LiftConsistencyError(
            f"lift of {base.name!r} at k={k} violates curvature identities "
            f"(max violation {viol:.3e})"
        )
    return lift


def total_volume(lift: SasakiLift) -> float:
    """fiber_length x base volume (product metric on the homogeneous catalog)."""
    return lift.total_volume
