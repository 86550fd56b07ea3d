"""Catalog of Kahler surfaces with frame-constant curvature.

Entries carry the curvature tensor in the adapted frame (e2, Je2, e3, Je3),
the complex structure, metric volume, signature and |R|_inf.  A bounds-only
entry carries just the three scalars consumed by the positivity bound.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .geometry import (
    STANDARD_J,
    ComplexStructure,
    RiemannTensor,
    pontrjagin_density,
    validate_symmetries,
)

__all__ = [
    "KahlerSurface",
    "UnsupportedSurfaceError",
    "flat_torus",
    "cp2_fubini_study",
    "product_cp1",
    "generic_bounds",
    "signature_from_curvature",
    "complex_space_form",
    "CP2_HOL_SECTIONAL",
    "CP2_VOLUME",
    "CP2_LINE_PERIOD",
]

#: Holomorphic sectional curvature of the catalog Fubini-Study metric.
#: Pinned by requiring the closed-form density over CP^2 to vanish at
#: k = +-1 together with vol = 8 pi^2 / c^2; the unique root is c = 4.
CP2_HOL_SECTIONAL = 4.0

#: Metric volume of CP^2 at that normalization.
CP2_VOLUME = np.pi**2 / 2.0

#: Period of the Kahler form over a projective line at c = 4.  A unit
#: period would need c = 4 pi, which contradicts the k = +-1 vanishing;
#: the discrepancy is reported here rather than absorbed.
CP2_LINE_PERIOD = np.pi


class UnsupportedSurfaceError(RuntimeError):
    """Curvature-level operation requested on a bounds-only surface."""


@dataclass(frozen=True)
class KahlerSurface:
    name: str
    volume: float
    signature: int
    r_inf: float
    curvature: RiemannTensor | None = None
    J: ComplexStructure | None = None
    params: dict = field(default_factory=dict)

    @property
    def curvature_known(self) -> bool:
        return self.curvature is not None

    def require_curvature(self) -> RiemannTensor:
        if self.curvature is None:
            raise UnsupportedSurfaceError(
                f"surface {self.name!r} is bounds-only; no curvature tensor"
            )
        return self.curvature


def complex_space_form(c: float, J: ComplexStructure = STANDARD_J) -> RiemannTensor:
    """Curvature tensor of constant holomorphic sectional curvature c.

    R(X,Y,Z,W) = (c/4)[<X,W><Y,Z> - <X,Z><Y,W> + <JX,W><JY,Z>
                       - <JX,Z><JY,W> + 2<JX,Y><JW,Z>]
    """
    d = np.eye(4)
    Jm = J.matrix
    comp = (c / 4.0) * (
        np.einsum("il,jk->ijkl", d, d)
        - np.einsum("ik,jl->ijkl", d, d)
        + np.einsum("li,kj->ijkl", Jm, Jm)
        - np.einsum("ki,lj->ijkl", Jm, Jm)
        + 2.0 * np.einsum("ji,kl->ijkl", Jm, Jm)
    )
    return RiemannTensor(comp)


def flat_torus() -> KahlerSurface:
    """Unit-period flat torus: zero curvature, volume 1, signature 0."""
    return KahlerSurface(
        name="t4",
        volume=1.0,
        signature=0,
        r_inf=0.0,
        curvature=RiemannTensor.zero(4),
        J=STANDARD_J,
    )


def cp2_fubini_study() -> KahlerSurface:
    """CP^2 with the calibrated Fubini-Study metric (c = 4)."""
    c = CP2_HOL_SECTIONAL
    return KahlerSurface(
        name="cp2",
        volume=CP2_VOLUME,
        signature=1,
        r_inf=c,
        curvature=complex_space_form(c),
        J=STANDARD_J,
        params={"hol_sectional": c, "line_period": CP2_LINE_PERIOD},
    )


def product_cp1(a: int, b: int) -> KahlerSurface:
    """CP^1 x CP^1 with Kahler class a*w1 + b*w2.

    Realized by the metric a*g1 + b*g2 on the product of unit round
    spheres, so the factor sectional curvatures are 1/a and 1/b.
    """
    if a < 1 or b < 1:
        raise ValueError("a and b must be positive integers")
    k1, k2 = 1.0 / a, 1.0 / b
    comp = np.zeros((4, 4, 4, 4))
    for (lo, hi, kk) in ((0, 2, k1), (2, 4, k2)):
        d = np.zeros((4, 4))
        d[lo:hi, lo:hi] = np.eye(hi - lo)
        comp += kk * (
            np.einsum("il,jk->ijkl", d, d) - np.einsum("ik,jl->ijkl", d, d)
        )
    return KahlerSurface(
        name="cp1xcp1",
        volume=(4.0 * np.pi * a) * (4.0 * np.pi * b),
        signature=0,
        r_inf=max(k1, k2),
        curvature=RiemannTensor(comp),
        J=STANDARD_J,
        params={"a": a, "b": b},
    )


def generic_bounds(sigma: int, volume: float, r_inf: float,
                   name: str = "generic") -> KahlerSurface:
    """Bounds-only entry: only the positivity-bound decision is available."""
    if volume <= 0:
        raise ValueError("volume must be positive")
    if r_inf < 0:
        raise ValueError("r_inf must be nonnegative")
    return KahlerSurface(
        name=name,
        volume=float(volume),
        signature=int(sigma),
        r_inf=float(r_inf),
        params={"sigma": int(sigma), "vol": float(volume), "r_inf": float(r_inf)},
    )


def signature_from_curvature(S: KahlerSurface) -> float:
    """(1/3) * p1 density * volume; exact for frame-constant curvature."""
    R = S.require_curvature()
    return pontrjagin_density(R) * S.volume / 3.0


def _check_entry(S: KahlerSurface, tol: float = 1e-12) -> None:
    # J-invariance: R(JX,JY,Z,W) = R(X,Y,Z,W) in the adapted frame.
    R = S.require_curvature()
    assert validate_symmetries(R, tol)
    Jm = S.J.matrix
    rot = np.einsum("ijkl,ia,jb->abkl", R.comp, Jm, Jm)
    assert np.max(np.abs(rot - R.comp)) <= tol
