"""Finite-dimensional vector lattices presented as simplicial cones.

A space is an invertible basis whose columns generate the positive cone;
in the coordinates of that basis the order is entrywise, so suprema,
infima and band projections all reduce to coordinatewise operations.
The standard cone (identity basis) models functions on a finite set and
the finite-index sequence spaces.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import DimensionMismatch, NotPositive
from .rational import (
    Mat,
    Vec,
    mat,
    mat_identity,
    mat_inverse,
    mat_vec,
    vec,
    vec_sub,
)


@dataclass(frozen=True)
class SimplicialCone:
    """Cone {basis @ c : c >= 0}; basis columns are the generators."""

    dim: int
    basis: Mat
    basis_inverse: Mat

    @property
    def is_standard(self) -> bool:
        return self.basis == mat_identity(self.dim)


@dataclass(frozen=True)
class LatticeSpace:
    cone: SimplicialCone
    label: str = ""

    @property
    def dim(self) -> int:
        return self.cone.dim

    def generators(self) -> tuple[Vec, ...]:
        """Cone generators, i.e. the basis columns."""
        b = self.cone.basis
        return tuple(tuple(b[i][j] for i in range(self.dim)) for j in range(self.dim))


def make_space(basis, label: str = "") -> LatticeSpace:
    """Build the lattice whose positive cone is generated by the basis columns.

    Raises SingularBasis when the columns are dependent and DimensionMismatch
    when the matrix is not square.
    """
    b = mat(basis)
    n = len(b)
    if any(len(row) != n for row in b):
        raise DimensionMismatch("basis must be square")
    if n == 0:
        raise DimensionMismatch("dimension must be positive")
    return LatticeSpace(cone=SimplicialCone(dim=n, basis=b, basis_inverse=mat_inverse(b)), label=label)


def standard_space(n: int, label: str = "") -> LatticeSpace:
    """The coordinatewise-ordered lattice on n points (identity basis)."""
    if n <= 0:
        raise DimensionMismatch("dimension must be positive")
    ident = mat_identity(n)
    return LatticeSpace(cone=SimplicialCone(dim=n, basis=ident, basis_inverse=ident), label=label)


def _check_dim(space: LatticeSpace, v: Vec) -> None:
    if len(v) != space.dim:
        raise DimensionMismatch(f"vector of length {len(v)} in a {space.dim}-dim space")


def to_coords(space: LatticeSpace, v) -> Vec:
    """Ambient vector -> cone coordinates (exact linear solve)."""
    v = vec(v)
    _check_dim(space, v)
    if space.cone.is_standard:
        return v
    return mat_vec(space.cone.basis_inverse, v)


def from_coords(space: LatticeSpace, c) -> Vec:
    """Cone coordinates -> ambient vector; exact inverse of to_coords."""
    c = vec(c)
    _check_dim(space, c)
    if space.cone.is_standard:
        return c
    return mat_vec(space.cone.basis, c)


def vec_leq(space: LatticeSpace, x, y) -> bool:
    """Order comparison: x <= y iff y - x has nonnegative cone coordinates."""
    d = to_coords(space, vec_sub(vec(y), vec(x)))
    return all(c >= 0 for c in d)


def is_positive_vec(space: LatticeSpace, x) -> bool:
    return all(c >= 0 for c in to_coords(space, x))


def vec_sup(space: LatticeSpace, x, y) -> Vec:
    """Lattice supremum: coordinatewise max in cone coordinates."""
    cx, cy = to_coords(space, x), to_coords(space, y)
    return from_coords(space, tuple(max(a, b) for a, b in zip(cx, cy)))


def vec_inf(space: LatticeSpace, x, y) -> Vec:
    """Lattice infimum, derived from the supremum: x ^ y = -((-x) v (-y))."""
    neg = lambda v: tuple(-a for a in vec(v))
    return neg(vec_sup(space, neg(x), neg(y)))


def vec_abs(space: LatticeSpace, x) -> Vec:
    """|x| = x v (-x)."""
    x = vec(x)
    return vec_sup(space, x, tuple(-a for a in x))


def vec_pos(space: LatticeSpace, x) -> Vec:
    """Positive part x v 0."""
    x = vec(x)
    return vec_sup(space, x, vec_zero_of(space))


def vec_neg(space: LatticeSpace, x) -> Vec:
    """Negative part (-x) v 0, so that x = pos - neg."""
    x = vec(x)
    return vec_sup(space, tuple(-a for a in x), vec_zero_of(space))


def vec_zero_of(space: LatticeSpace) -> Vec:
    return tuple(Fraction(0) for _ in range(space.dim))


def band_project(space: LatticeSpace, e, x) -> Vec:
    """Component of x in the band generated by e >= 0.

    In cone coordinates the band is the coordinate support of e, so the
    projection keeps the coordinates where e is nonzero and zeroes the rest.
    """
    ce = to_coords(space, e)
    if any(c < 0 for c in ce):
        raise NotPositive("band generator must be positive")
    cx = to_coords(space, x)
    return from_coords(space, tuple(c if g != 0 else Fraction(0) for c, g in zip(cx, ce)))
