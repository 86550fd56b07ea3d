"""Curvature tensors in orthonormal frames: symmetry checks, Pontrjagin
density and frame maximization of curvature components.

All tensors use the index convention R[i,j,k,l] = <R(e_i,e_j)e_k, e_l>,
with sectional curvature K(X,Y) = R(X,Y,Y,X).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

__all__ = [
    "RiemannTensor",
    "ComplexStructure",
    "OrthonormalFrame",
    "ShapeError",
    "validate_symmetries",
    "symmetry_violation",
    "endomorphism_of_pair",
    "pontrjagin_density",
    "max_abs_component",
    "perm_sign",
]

_VALID_DIMS = (3, 4, 5)


class ShapeError(ValueError):
    """Tensor or vector data with the wrong shape or dimension."""


def _frozen_array(a, shape=None) -> np.ndarray:
    out = np.array(a, dtype=float)
    if shape is not None and out.shape != shape:
        raise ShapeError(f"expected shape {shape}, got {out.shape}")
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class RiemannTensor:
    """Curvature components R[i,j,k,l] in a fixed orthonormal frame."""

    comp: np.ndarray

    def __post_init__(self):
        comp = np.asarray(self.comp, dtype=float)
        if comp.ndim != 4 or len(set(comp.shape)) != 1:
            raise ShapeError(f"curvature array must be d^4, got {comp.shape}")
        if comp.shape[0] not in _VALID_DIMS:
            raise ShapeError(f"dimension must be one of {_VALID_DIMS}")
        comp = comp.copy()
        comp.setflags(write=False)
        object.__setattr__(self, "comp", comp)

    @property
    def dim(self) -> int:
        return self.comp.shape[0]

    @classmethod
    def zero(cls, dim: int) -> "RiemannTensor":
        return cls(np.zeros((dim,) * 4))


@dataclass(frozen=True)
class ComplexStructure:
    """A 4x4 matrix J with J^2 = -Id acting on frame components."""

    matrix: np.ndarray

    def __post_init__(self):
        m = _frozen_array(self.matrix, (4, 4))
        if not np.allclose(m @ m, -np.eye(4), atol=1e-12):
            raise ValueError("J^2 != -Id")
        if not np.allclose(m.T @ m, np.eye(4), atol=1e-12):
            raise ValueError("J is not orthogonal")
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return 4

    def __call__(self, v: np.ndarray) -> np.ndarray:
        return self.matrix @ np.asarray(v, dtype=float)


#: Standard J in the adapted frame (e2, Je2, e3, Je3).
STANDARD_J = ComplexStructure(
    np.array(
        [
            [0.0, -1.0, 0.0, 0.0],
            [1.0, 0.0, 0.0, 0.0],
            [0.0, 0.0, 0.0, -1.0],
            [0.0, 0.0, 1.0, 0.0],
        ]
    )
)


@dataclass(frozen=True)
class OrthonormalFrame:
    """A list of dim coordinate vectors, orthonormal to 1e-12."""

    vectors: np.ndarray  # shape (dim, dim), rows are frame vectors

    def __post_init__(self):
        v = np.array(self.vectors, dtype=float)
        if v.ndim != 2 or v.shape[0] != v.shape[1]:
            raise ShapeError(f"frame must be square, got {v.shape}")
        gram = v @ v.T
        if np.max(np.abs(gram - np.eye(v.shape[0]))) > 1e-12:
            raise ValueError("frame is not orthonormal to 1e-12")
        v.setflags(write=False)
        object.__setattr__(self, "vectors", v)

    @property
    def dim(self) -> int:
        return self.vectors.shape[0]

    @classmethod
    def standard(cls, dim: int) -> "OrthonormalFrame":
        return cls(np.eye(dim))


def symmetry_violation(R: RiemannTensor) -> float:
    """Max violation over the three classical curvature identities."""
    c = R.comp
    anti_ij = np.max(np.abs(c + np.transpose(c, (1, 0, 2, 3))))
    anti_kl = np.max(np.abs(c + np.transpose(c, (0, 1, 3, 2))))
    pair = np.max(np.abs(c - np.transpose(c, (2, 3, 0, 1))))
    bianchi = np.max(
        np.abs(c + np.transpose(c, (1, 2, 0, 3)) + np.transpose(c, (2, 0, 1, 3)))
    )
    return max(anti_ij, anti_kl, pair, bianchi)


def validate_symmetries(R: RiemannTensor, tol: float = 1e-10) -> bool:
    """True iff antisymmetry, pair symmetry and first Bianchi hold to tol."""
    return symmetry_violation(R) <= tol


def endomorphism_of_pair(R: RiemannTensor, X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    """Matrix of Z -> R(X,Y)Z in frame components: M[l,k] = X^i Y^j R[i,j,k,l]."""
    X = np.asarray(X, dtype=float)
    Y = np.asarray(Y, dtype=float)
    if X.shape != (R.dim,) or Y.shape != (R.dim,):
        raise ShapeError("vector dimension does not match the tensor")
    return np.einsum("i,j,ijkl->lk", X, Y, R.comp)


def perm_sign(perm) -> int:
    """Sign of a permutation given as a tuple of indices."""
    perm = list(perm)
    sign = 1
    for i in range(len(perm)):
        while perm[i] != i:
            j = perm[i]
            perm[i], perm[j] = perm[j], perm[i]
            sign = -sign
    return sign


def _rotate_tensor(comp: np.ndarray, basis: np.ndarray) -> np.ndarray:
    """Components in the frame whose vectors are the rows of `basis`."""
    return np.einsum("ijkl,ai,bj,ck,dl->abcd", comp, basis, basis, basis, basis)


# Sign fixed so that (1/3) * integral of p1 over CP^2 gives signature +1
# with the complex orientation (e2, Je2, e3, Je3).
_P1_SIGN = -1.0


def pontrjagin_density(R: RiemannTensor, frame: OrthonormalFrame | None = None) -> float:
    """First Pontrjagin density p1(R)(f1,f2,f3,f4) in the given frame.

    Normalized so that (1/3) * p1 * vol(M) equals the signature on the
    frame-homogeneous catalog surfaces.
    """
    if R.dim != 4:
        raise ShapeError("Pontrjagin density requires dim 4")
    if frame is None:
        frame = OrthonormalFrame.standard(4)
    if frame.dim != 4:
        raise ShapeError("frame dimension must be 4")
    comp = _rotate_tensor(R.comp, frame.vectors)
    # Curvature endomorphisms E_ab[l,k] = R[a,b,k,l]
    E = np.transpose(comp, (0, 1, 3, 2))
    total = 0.0
    for sigma in itertools.permutations(range(4)):
        a, b, c, d = sigma
        total += perm_sign(sigma) * np.trace(E[a, b] @ E[c, d])
    # 1/(2! 2!) antisymmetrization factor for the wedge of two 2-forms
    return _P1_SIGN * total / (4.0 * 8.0 * np.pi**2)


def _plane_rotation(dim: int, i: int, j: int, angle: float) -> np.ndarray:
    Q = np.eye(dim)
    c, s = np.cos(angle), np.sin(angle)
    Q[i, i] = c
    Q[j, j] = c
    Q[i, j] = -s
    Q[j, i] = s
    return Q


def _refine_frame(comp: np.ndarray, basis: np.ndarray, steps: int = 200) -> float:
    """Coordinate descent over plane rotations, step halving on stall."""
    dim = basis.shape[0]
    best = float(np.max(np.abs(_rotate_tensor(comp, basis))))
    step = 0.2
    planes = list(itertools.combinations(range(dim), 2))
    for _ in range(steps):
        improved = False
        for (i, j) in planes:
            for sgn in (1.0, -1.0):
                cand = _plane_rotation(dim, i, j, sgn * step) @ basis
                val = float(np.max(np.abs(_rotate_tensor(comp, cand))))
                if val > best + 1e-15:
                    best, basis, improved = val, cand, True
        if not improved:
            step *= 0.5
            if step < 1e-12:
                break
    return best


def max_abs_component(R: RiemannTensor, seed: int = 0, samples: int = 100) -> float:
    """Lower-bound estimate of |R|_inf by seeded frame sampling plus refinement.

    Deterministic for a fixed seed and monotone nondecreasing in `samples`:
    local refinement is rerun from every prefix-improving sample.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    rng = np.random.default_rng(seed)
    comp = R.comp
    best_raw = -np.inf
    result = 0.0
    for _ in range(samples):
        A = rng.standard_normal((R.dim, R.dim))
        Q, _r = np.linalg.qr(A)
        raw = float(np.max(np.abs(_rotate_tensor(comp, Q))))
        if raw > best_raw:
            best_raw = raw
            result = max(result, _refine_frame(comp, Q))
    return result
