"""Regular operators on a lattice space.

An operator is stored as its matrix in ambient coordinates together with
its conjugate basis_inverse @ matrix @ basis, the cone-coordinate form.
Positivity, the lattice meet and the diagonal (central) part are all read
off that form: a simplicial cone turns the operator order into the
entrywise order on cone-coordinate matrices.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .core_lattice import LatticeSpace
from .errors import BadExponent, NotPositive, SpaceMismatch, UnsupportedCone
from .rational import (
    Mat,
    frac,
    mat,
    mat_identity,
    mat_mul,
    mat_rank,
    mat_sub,
    mat_trace,
    mat_zero,
)

INF = math.inf


@dataclass(frozen=True)
class RegularOperator:
    space: LatticeSpace
    matrix: Mat
    cone_matrix: Mat

    @property
    def dim(self) -> int:
        return self.space.dim


@dataclass(frozen=True)
class DiagonalPart:
    """Diagonal of the cone-coordinate form; scalar iff all entries agree."""

    alpha_vector: tuple[Fraction, ...]
    is_scalar: bool
    alpha: Fraction | None


def operator(space: LatticeSpace, matrix) -> RegularOperator:
    """Operator from its ambient-coordinates matrix."""
    m = mat(matrix)
    n = space.dim
    if len(m) != n or any(len(row) != n for row in m):
        raise SpaceMismatch(f"matrix must be {n}x{n}")
    if space.cone.is_standard:
        cone_m = m
    else:
        cone_m = mat_mul(space.cone.basis_inverse, mat_mul(m, space.cone.basis))
    return RegularOperator(space=space, matrix=m, cone_matrix=cone_m)


def operator_from_cone(space: LatticeSpace, cone_matrix) -> RegularOperator:
    """Operator from its cone-coordinate matrix."""
    cm = mat(cone_matrix)
    if space.cone.is_standard:
        return RegularOperator(space=space, matrix=cm, cone_matrix=cm)
    m = mat_mul(space.cone.basis, mat_mul(cm, space.cone.basis_inverse))
    return RegularOperator(space=space, matrix=m, cone_matrix=cm)


def op_identity(space: LatticeSpace) -> RegularOperator:
    ident = mat_identity(space.dim)
    return RegularOperator(space=space, matrix=ident, cone_matrix=ident)


def op_zero(space: LatticeSpace) -> RegularOperator:
    z = mat_zero(space.dim)
    return RegularOperator(space=space, matrix=z, cone_matrix=z)


def op_compose(s: RegularOperator, t: RegularOperator) -> RegularOperator:
    """Operator product s @ t."""
    _check_space(s, t)
    return RegularOperator(
        space=s.space,
        matrix=mat_mul(s.matrix, t.matrix),
        cone_matrix=mat_mul(s.cone_matrix, t.cone_matrix),
    )


def op_add(s: RegularOperator, t: RegularOperator) -> RegularOperator:
    _check_space(s, t)
    return RegularOperator(
        space=s.space,
        matrix=tuple(tuple(a + b for a, b in zip(ra, rb)) for ra, rb in zip(s.matrix, t.matrix)),
        cone_matrix=tuple(tuple(a + b for a, b in zip(ra, rb)) for ra, rb in zip(s.cone_matrix, t.cone_matrix)),
    )


def op_scale(c, t: RegularOperator) -> RegularOperator:
    c = frac(c)
    return RegularOperator(
        space=t.space,
        matrix=tuple(tuple(c * x for x in row) for row in t.matrix),
        cone_matrix=tuple(tuple(c * x for x in row) for row in t.cone_matrix),
    )


def op_sub(s: RegularOperator, t: RegularOperator) -> RegularOperator:
    return op_add(s, op_scale(-1, t))


def _check_space(s: RegularOperator, t: RegularOperator) -> None:
    if s.space.cone != t.space.cone:
        raise SpaceMismatch("operators live on different spaces")


def is_positive(t: RegularOperator) -> bool:
    """Positive iff the cone-coordinate form is entrywise nonnegative."""
    return all(x >= 0 for row in t.cone_matrix for x in row)


def op_leq(s: RegularOperator, t: RegularOperator) -> bool:
    """Operator order: s <= t iff t - s is positive."""
    _check_space(s, t)
    return all(b >= a for ra, rb in zip(s.cone_matrix, t.cone_matrix) for a, b in zip(ra, rb))


def op_meet(s: RegularOperator, t: RegularOperator) -> RegularOperator:
    """Lattice meet of two positive operators.

    Closed form: entrywise minimum of the cone-coordinate matrices.  The
    certify module re-derives the same values by linear programming over
    order intervals; the two routes are kept in agreement by tests.
    """
    _check_space(s, t)
    if not (is_positive(s) and is_positive(t)):
        raise NotPositive("op_meet needs positive operators")
    cone_m = tuple(
        tuple(min(a, b) for a, b in zip(ra, rb))
        for ra, rb in zip(s.cone_matrix, t.cone_matrix)
    )
    return operator_from_cone(s.space, cone_m)


def diagonal_part(t: RegularOperator) -> DiagonalPart:
    """Central (diagonal) part of an operator.

    For positive t, the diagonal matrix with these entries is the largest
    central operator below t.
    """
    diag = tuple(t.cone_matrix[i][i] for i in range(t.dim))
    is_scalar = len(set(diag)) == 1
    return DiagonalPart(alpha_vector=diag, is_scalar=is_scalar, alpha=diag[0] if is_scalar else None)


def constant_diagonal_alpha(p: RegularOperator) -> Fraction | None:
    """The constant diagonal of a positive operator, when it has one.

    Returns alpha with alpha * id the largest central operator below p, or
    None when the cone-coordinate diagonal is not constant.
    """
    if not is_positive(p):
        raise NotPositive("constant diagonal is defined for positive operators")
    return diagonal_part(p).alpha


@dataclass(frozen=True)
class PowerIterationResult:
    value: float
    iterations: int
    tolerance: float


# Fixed parameters of the ascending power iteration for induced p-norms of
# nonnegative matrices (start vector: all ones).
_PNORM_TOL = 1e-10
_PNORM_MAX_ITER = 10**5


def pnorm_power_iteration(matrix: np.ndarray, p: float) -> PowerIterationResult:
    """Induced p-norm of a nonnegative matrix by monotone ascent.

    Boyd's iteration: push the current unit vector through the matrix,
    apply the dual-exponent nonlinearity, pull back through the transpose
    and renormalise.  The norm estimates increase monotonically for
    entrywise-nonnegative matrices.
    """
    a = np.asarray(matrix, dtype=np.float64)
    n = a.shape[0]
    x = np.ones(n) / n ** (1.0 / p)
    est_prev = 0.0
    iters = 0
    for iters in range(1, _PNORM_MAX_ITER + 1):
        y = a @ x
        est = float(np.linalg.norm(y, ord=p))
        if est == 0.0:
            return PowerIterationResult(0.0, iters, _PNORM_TOL)
        if abs(est - est_prev) <= _PNORM_TOL * est:
            return PowerIterationResult(est, iters, _PNORM_TOL)
        est_prev = est
        u = (y / est) ** (p - 1.0)
        z = a.T @ u
        zn = float(np.linalg.norm(z, ord=p / (p - 1.0)))
        if zn == 0.0:
            return PowerIterationResult(est, iters, _PNORM_TOL)
        x = (z / zn) ** (1.0 / (p - 1.0))
        x = x / float(np.linalg.norm(x, ord=p))
    return PowerIterationResult(est_prev, iters, _PNORM_TOL)


def operator_pnorm(t: RegularOperator, p):
    """Induced p-norm on a standard-cone space.

    Exact for p in {1, inf} (column / row sums); p = 2 is the largest
    singular value in floating point; other p >= 1 require t positive and
    use the ascending power iteration.
    """
    if not t.space.cone.is_standard:
        raise UnsupportedCone("p-norms are defined on standard-cone spaces only")
    if p == INF or (isinstance(p, str) and p == "inf"):
        return max(sum(abs(x) for x in row) for row in t.matrix)
    p_frac = Fraction(p) if not isinstance(p, float) else None
    if p_frac is not None and p_frac < 1 or p_frac is None and p < 1:
        raise BadExponent("need p >= 1")
    if p_frac == 1:
        n = t.dim
        return max(sum(abs(t.matrix[i][j]) for i in range(n)) for j in range(n))
    a = np.array([[float(x) for x in row] for row in t.matrix], dtype=np.float64)
    if p_frac == 2 or p == 2.0:
        return float(np.linalg.svd(a, compute_uv=False)[0])
    if not is_positive(t):
        raise NotPositive("general p-norms are implemented for positive operators")
    return pnorm_power_iteration(a, float(p)).value
