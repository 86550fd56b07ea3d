"""Classical pseudodifferential symbol calculus on the circle.

Matrix-valued symbols are stored as truncated ladders of homogeneous
components with integer-stepped degrees.  On S^1 the unit cosphere fiber is
two points, so each component is fully determined by its values at
xi = +1 and xi = -1 on a uniform periodic x-grid; this storage is exact.

Composition implements the 1-d asymptotic product
    sigma_{PQ} ~ sum_m ((-i)^m / m!) d_xi^m sigma_P  d_x^m sigma_Q,
with d_x by spectral differentiation and d_xi acting degree-wise.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial

import numpy as np

__all__ = [
    "HomogeneousComponent",
    "ClassicalSymbol",
    "SymbolError",
    "FiberMismatchError",
    "TruncationError",
    "InsufficientDepthError",
    "identity_symbol",
    "multiplication_symbol",
    "derivative_symbol",
    "compose",
    "wodzicki_residue",
    "resolvent_parametrix",
    "random_symbol",
    "commutator_trace_test",
    "connection_difference_terms",
    "connection_difference_order_audit",
    "connection_difference_symbol",
    "DEFAULT_GRID",
]

DEFAULT_GRID = 64


class SymbolError(ValueError):
    pass


class FiberMismatchError(SymbolError):
    pass


class TruncationError(SymbolError):
    """Requested depth exceeds what the stored components support."""


class InsufficientDepthError(SymbolError):
    """Degree -1 lies below the truncation floor of the expansion."""


def _as_grid_matrix(value, grid: int, dim: int) -> np.ndarray:
    arr = np.asarray(value, dtype=complex)
    if arr.shape == (dim, dim):
        arr = np.broadcast_to(arr, (grid, dim, dim))
    if arr.shape != (grid, dim, dim):
        raise SymbolError(f"component values must have shape ({grid},{dim},{dim})")
    return np.ascontiguousarray(arr)


@dataclass(frozen=True)
class HomogeneousComponent:
    """One homogeneous piece, stored at the two cosphere points xi = +-1."""

    degree: Fraction
    plus: np.ndarray   # (G, d, d) complex, values at xi = +1
    minus: np.ndarray  # (G, d, d) complex, values at xi = -1

    def __post_init__(self):
        object.__setattr__(self, "degree", Fraction(self.degree))
        g, d = self.plus.shape[0], self.plus.shape[1]
        if g < 16 or (g & (g - 1)) != 0:
            raise SymbolError("grid size must be a power of two >= 16")
        for name in ("plus", "minus"):
            arr = np.ascontiguousarray(getattr(self, name), dtype=complex)
            if arr.shape != (g, d, d):
                raise SymbolError("plus/minus value shapes disagree")
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def grid(self) -> int:
        return self.plus.shape[0]

    @property
    def fiber_dim(self) -> int:
        return self.plus.shape[1]

    def sup_norm(self) -> float:
        return max(float(np.max(np.abs(self.plus))), float(np.max(np.abs(self.minus))))


@dataclass(frozen=True)
class ClassicalSymbol:
    """Truncated homogeneous expansion of a matrix-valued symbol."""

    order: Fraction
    components: tuple  # HomogeneousComponent, degrees order, order-1, ...

    def __post_init__(self):
        order = Fraction(self.order)
        comps = tuple(self.components)
        if not comps:
            raise SymbolError("a symbol needs at least one component")
        for j, c in enumerate(comps):
            if c.degree != order - j:
                raise SymbolError("component degrees must step down by 1 from the order")
            if c.grid != comps[0].grid or c.fiber_dim != comps[0].fiber_dim:
                raise SymbolError("components disagree on grid or fiber dimension")
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "components", comps)

    @property
    def depth(self) -> int:
        return len(self.components)

    @property
    def grid(self) -> int:
        return self.components[0].grid

    @property
    def fiber_dim(self) -> int:
        return self.components[0].fiber_dim

    @property
    def floor_degree(self) -> Fraction:
        return self.order - self.depth + 1

    def component(self, degree) -> HomogeneousComponent | None:
        degree = Fraction(degree)
        j = self.order - degree
        if j.denominator != 1 or j < 0 or j >= self.depth:
            return None
        return self.components[int(j)]

    def pad_zeros(self, depth: int) -> "ClassicalSymbol":
        """Extend the ladder with exact-zero components.

        Only valid for symbols whose expansion genuinely terminates
        (multiplication and differential operators).
        """
        if depth <= self.depth:
            return self
        zero = np.zeros((self.grid, self.fiber_dim, self.fiber_dim), dtype=complex)
        extra = tuple(
            HomogeneousComponent(self.order - j, zero, zero)
            for j in range(self.depth, depth)
        )
        return ClassicalSymbol(self.order, self.components + extra)

    def leading_degree(self, tol: float = 1e-11):
        """Highest degree with a component above tol; None if all vanish."""
        for c in self.components:
            if c.sup_norm() > tol:
                return c.degree
        return None

    def _binary(self, other, f):
        if not isinstance(other, ClassicalSymbol):
            return NotImplemented
        if other.fiber_dim != self.fiber_dim or other.grid != self.grid:
            raise FiberMismatchError("fiber dimension or grid mismatch")
        shift = self.order - other.order
        if shift.denominator != 1:
            raise SymbolError("orders must differ by an integer to combine")
        order = max(self.order, other.order)
        floor = max(self.floor_degree, other.floor_degree)
        zero = np.zeros((self.grid, self.fiber_dim, self.fiber_dim), dtype=complex)
        comps = []
        deg = order
        while deg >= floor:
            a = self.component(deg)
            b = other.component(deg)
            ap, am = (a.plus, a.minus) if a is not None else (zero, zero)
            bp, bm = (b.plus, b.minus) if b is not None else (zero, zero)
            comps.append(HomogeneousComponent(deg, f(ap, bp), f(am, bm)))
            deg -= 1
        return ClassicalSymbol(order, tuple(comps))

    def __add__(self, other):
        return self._binary(other, lambda a, b: a + b)

    def __sub__(self, other):
        return self._binary(other, lambda a, b: a - b)

    def __rmul__(self, scalar):
        scalar = complex(scalar)
        return ClassicalSymbol(
            self.order,
            tuple(
                HomogeneousComponent(c.degree, scalar * c.plus, scalar * c.minus)
                for c in self.components
            ),
        )


def identity_symbol(dim: int = 1, grid: int = DEFAULT_GRID, depth: int = 1) -> ClassicalSymbol:
    eye = np.broadcast_to(np.eye(dim, dtype=complex), (grid, dim, dim))
    sym = ClassicalSymbol(Fraction(0), (HomogeneousComponent(Fraction(0), eye, eye),))
    return sym.pad_zeros(depth)


def multiplication_symbol(value, grid: int = DEFAULT_GRID, depth: int = 1) -> ClassicalSymbol:
    """Symbol of a multiplication operator: one degree-0 component."""
    value = np.asarray(value, dtype=complex)
    if value.ndim == 0:
        value = value.reshape(1, 1)
    dim = value.shape[-1]
    arr = _as_grid_matrix(value, grid, dim)
    sym = ClassicalSymbol(Fraction(0), (HomogeneousComponent(Fraction(0), arr, arr),))
    return sym.pad_zeros(depth)


def derivative_symbol(
    dim: int = 1,
    grid: int = DEFAULT_GRID,
    gamma=None,
    depth: int = 2,
    adjoint: bool = False,
) -> ClassicalSymbol:
    """Symbol of D = d/dx + Gamma(x), or of its formal adjoint."""
    eye = np.broadcast_to(np.eye(dim, dtype=complex), (grid, dim, dim))
    if gamma is None:
        g = np.zeros((grid, dim, dim), dtype=complex)
    else:
        g = _as_grid_matrix(gamma, grid, dim)
    if adjoint:
        lead_p, lead_m = -1j * eye, 1j * eye
        g0 = np.conjugate(np.transpose(g, (0, 2, 1)))
    else:
        lead_p, lead_m = 1j * eye, -1j * eye
        g0 = g
    sym = ClassicalSymbol(
        Fraction(1),
        (
            HomogeneousComponent(Fraction(1), lead_p, lead_m),
            HomogeneousComponent(Fraction(0), g0, g0),
        ),
    )
    return sym.pad_zeros(depth)


def _dx(values: np.ndarray, m: int) -> np.ndarray:
    """m-th x-derivative by spectral differentiation on the periodic grid."""
    if m == 0:
        return values
    grid = values.shape[0]
    freqs = np.fft.fftfreq(grid, d=1.0 / grid)  # integer wavenumbers
    mult = (1j * freqs) ** m
    hat = np.fft.fft(values, axis=0)
    return np.fft.ifft(hat * mult[:, None, None], axis=0)


def _falling(a: Fraction, m: int) -> float:
    out = 1.0
    for t in range(m):
        out *= float(a - t)
    return out


def compose(P: ClassicalSymbol, Q: ClassicalSymbol, depth: int | None = None) -> ClassicalSymbol:
    """Asymptotic product of two symbols, truncated at `depth` components.

    The result is only trustworthy down to min(P.depth, Q.depth) components;
    asking for more raises TruncationError with the deficit.
    """
    if P.fiber_dim != Q.fiber_dim or P.grid != Q.grid:
        raise FiberMismatchError("fiber dimension or grid mismatch")
    available = min(P.depth, Q.depth)
    if depth is None:
        depth = available
    if depth < 1:
        raise SymbolError("depth must be >= 1")
    if depth > available:
        raise TruncationError(
            f"requested depth {depth} exceeds available {available} "
            f"(deficit {depth - available})"
        )
    order = P.order + Q.order
    shape = (P.grid, P.fiber_dim, P.fiber_dim)
    comps = []
    for j in range(depth):
        acc_p = np.zeros(shape, dtype=complex)
        acc_m = np.zeros(shape, dtype=complex)
        for p in range(min(j + 1, P.depth)):
            cp = P.components[p]
            for m in range(j - p + 1):
                q = j - p - m
                if q >= Q.depth:
                    continue
                cq = Q.components[q]
                coeff = (-1j) ** m / factorial(m)
                fall = _falling(cp.degree, m)
                dq_p = _dx(cq.plus, m)
                dq_m = _dx(cq.minus, m)
                acc_p += coeff * fall * np.matmul(cp.plus, dq_p)
                acc_m += coeff * fall * ((-1.0) ** m) * np.matmul(cp.minus, dq_m)
        comps.append(HomogeneousComponent(order - j, acc_p, acc_m))
    return ClassicalSymbol(order, tuple(comps))


def wodzicki_residue(P: ClassicalSymbol) -> complex:
    """(1/2pi) * integral over S*S^1 of tr sigma_{-1}.

    The cosphere fiber contributes the two points xi = +-1; the x-integral
    is the trapezoid rule, spectrally exact on the periodic grid.
    """
    comp = P.component(Fraction(-1))
    if comp is None:
        representable = (P.order + 1).denominator == 1 and P.order >= -1
        if representable and P.floor_degree > -1:
            raise InsufficientDepthError(
                f"degree -1 lies below the truncation floor {P.floor_degree}"
            )
        return 0.0 + 0.0j
    integrand = np.trace(comp.plus, axis1=1, axis2=2) + np.trace(
        comp.minus, axis1=1, axis2=2
    )
    return complex(np.mean(integrand))


def resolvent_parametrix(gamma=None, depth: int = 2, dim: int | None = None,
                         grid: int = DEFAULT_GRID) -> ClassicalSymbol:
    """Parametrix symbol B of 1 + D*D with D = d/dx + Gamma(x).

    compose(B, symbol(1 + D*D)) equals the identity modulo components of
    degree <= -depth - 2; the recursion solves degree by degree.
    """
    if depth < 2:
        raise SymbolError("depth must be >= 2")
    if gamma is None:
        if dim is None:
            dim = 1
        gamma_arr = np.zeros((grid, dim, dim), dtype=complex)
    else:
        gamma_arr = np.asarray(gamma, dtype=complex)
        if dim is None:
            dim = gamma_arr.shape[-1]
        gamma_arr = _as_grid_matrix(gamma_arr, grid, dim)

    A = laplacian_plus_one_symbol(gamma_arr, grid=grid, depth=depth + 2)

    a2 = A.components[0]
    a2inv_p = np.linalg.inv(a2.plus)
    a2inv_m = np.linalg.inv(a2.minus)
    shape = (grid, dim, dim)
    b = [HomogeneousComponent(Fraction(-2), a2inv_p, a2inv_m)]
    for j in range(1, depth):
        acc_p = np.zeros(shape, dtype=complex)
        acc_m = np.zeros(shape, dtype=complex)
        for p in range(j):
            bp = b[p]
            for m in range(j - p + 1):
                q = j - p - m
                aq = A.component(Fraction(2 - q))
                if aq is None:
                    continue
                coeff = (-1j) ** m / factorial(m)
                fall = _falling(bp.degree, m)
                acc_p += coeff * fall * np.matmul(bp.plus, _dx(aq.plus, m))
                acc_m += coeff * fall * ((-1.0) ** m) * np.matmul(bp.minus, _dx(aq.minus, m))
        b.append(
            HomogeneousComponent(
                Fraction(-2 - j),
                -np.matmul(acc_p, a2inv_p),
                -np.matmul(acc_m, a2inv_m),
            )
        )
    return ClassicalSymbol(Fraction(-2), tuple(b))


def laplacian_plus_one_symbol(gamma, grid: int = DEFAULT_GRID, depth: int = 4) -> ClassicalSymbol:
    """Symbol of 1 + D*D assembled by composing D* and D in the calculus."""
    gamma_arr = np.asarray(gamma, dtype=complex)
    dim = gamma_arr.shape[-1]
    gamma_arr = _as_grid_matrix(gamma_arr, grid, dim)
    D = derivative_symbol(dim, grid, gamma_arr, depth=depth)
    Dstar = derivative_symbol(dim, grid, gamma_arr, depth=depth, adjoint=True)
    A = compose(Dstar, D, depth)
    one = multiplication_symbol(np.eye(dim, dtype=complex), grid, depth=depth)
    return A + one


def random_symbol(rng: np.random.Generator, order: int, depth: int,
                  dim: int = 2, grid: int = DEFAULT_GRID, modes: int = 3) -> ClassicalSymbol:
    """Seeded random classical symbol with band-limited x-dependence."""
    x = 2.0 * np.pi * np.arange(grid) / grid

    def random_matrix_function():
        val = np.zeros((grid, dim, dim), dtype=complex)
        c = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
        val += c
        for n in range(1, modes + 1):
            a = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
            b = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
            val += np.cos(n * x)[:, None, None] * a / n
            val += np.sin(n * x)[:, None, None] * b / n
        return val

    comps = tuple(
        HomogeneousComponent(
            Fraction(order - j), random_matrix_function(), random_matrix_function()
        )
        for j in range(depth)
    )
    return ClassicalSymbol(Fraction(order), comps)


def commutator_trace_test(seed: int, trials: int, depth: int = 6,
                          grid: int = DEFAULT_GRID) -> float:
    """Max |res[P, Q]| over seeded random symbol pairs; the residue is a
    trace, so the exact value is 0 for every pair."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(trials):
        dim = int(rng.integers(1, 3))
        op = int(rng.integers(-2, 2))
        oq = int(rng.integers(-2, 2))
        P = random_symbol(rng, op, depth, dim=dim, grid=grid)
        Q = random_symbol(rng, oq, depth, dim=dim, grid=grid)
        res = wodzicki_residue(compose(P, Q) - compose(Q, P))
        worst = max(worst, abs(res))
    return worst


# ---------------------------------------------------------------------------
# Order audit of the s=1 / L^2 connection difference along fiber orbits
# ---------------------------------------------------------------------------


def connection_difference_terms(lift, depth: int = 6, grid: int = DEFAULT_GRID):
    """The six bracketed terms of the connection difference as symbols.

    Assembled along the fiber orbit in the adapted frame, with the variable
    field in the Y slot, X = e2 and gamma_dot = xi.  Returns a list of
    (name, ClassicalSymbol).
    """
    comp5 = lift.curvature5.comp
    k = lift.k
    gdot = np.eye(5)[0]
    X = np.eye(5)[1]
    # Orbit connection coefficient in the adapted frame: (k/2) J on the
    # horizontal block.  Only the orders of the audited terms are
    # insensitive to this convention; individual values are reported as
    # convention-dependent.
    Gamma = np.zeros((5, 5))
    Gamma[1:, 1:] = 0.5 * k * lift.base.J.matrix

    # Endomorphism of the pair (X, gdot):  Z -> R(X, gdot) Z
    E_Xg = np.einsum("i,m,imjl->lj", X, gdot, comp5)
    # Y -> R(Y, gdot) X
    N = np.einsum("a,m,jaml->lj", gdot, X, comp5)
    Z0 = Gamma @ X  # covariant derivative of X along the orbit
    # Y -> R(Y, gdot) Z0
    M4 = np.einsum("a,m,jaml->lj", gdot, Z0, comp5)
    # Z -> R(X, Z) gdot
    P_free = np.einsum("i,a,ijal->lj", X, gdot, comp5)
    # Z -> R(Z0, Z) gdot
    M6 = np.einsum("i,a,ijal->lj", Z0, gdot, comp5)

    B = resolvent_parametrix(Gamma.astype(complex), depth=depth, dim=5, grid=grid)
    D = derivative_symbol(5, grid, Gamma.astype(complex), depth=depth + 2)

    def mult(mat):
        return multiplication_symbol(mat.astype(complex), grid, depth=depth + 2)

    half = 0.5
    terms = [
        ("resolvent[covderiv(curv(X,gdot)Y)]", -half, compose(compose(B, D), mult(E_Xg))),
        ("resolvent[curv(X,gdot)covderiv(Y)]", -half, compose(compose(B, mult(E_Xg)), D)),
        ("resolvent[covderiv(curv(Y,gdot)X)]", -half, compose(compose(B, D), mult(N))),
        ("resolvent[curv(Y,gdot)covderiv(X)]", -half, compose(B, mult(M4))),
        ("resolvent[curv(X,covderiv(Y))gdot]", +half, compose(compose(B, mult(P_free)), D)),
        ("resolvent[curv(covderiv(X),Y)gdot]", -half, compose(B, mult(M6))),
    ]
    return [(name, float(c) * sym) for name, c, sym in terms]


def connection_difference_order_audit(lift, depth: int = 6, grid: int = DEFAULT_GRID):
    """Highest nonvanishing homogeneity degree of each term of the
    connection difference; None for identically zero terms."""
    out = []
    for name, sym in connection_difference_terms(lift, depth, grid):
        deg = sym.leading_degree()
        out.append((name, None if deg is None else int(deg)))
    return out


def connection_difference_symbol(lift, depth: int = 6, grid: int = DEFAULT_GRID) -> ClassicalSymbol:
    """Sum of the six terms: the full difference of the two connections."""
    terms = connection_difference_terms(lift, depth, grid)
    total = terms[0][1]
    for _, sym in terms[1:]:
        total = total + sym
    return total
