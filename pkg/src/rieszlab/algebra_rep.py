"""Lattice-ordered algebras and the non-representability verdict.

An algebra is a lattice space plus structure constants for the products of
its cone generators.  The verdict machinery decides, from a pair of
idempotents e, p with ep = pe = p and a band decomposition p = alpha e + x
with x disjoint from e, whether the algebra can act faithfully as regular
operators anywhere: if alpha is neither 0 nor a reciprocal integer it
cannot, since any representation would transport p to a positive
projection with the forbidden constant diagonal alpha on the range of the
image of e.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .core_lattice import (
    LatticeSpace,
    band_project,
    is_positive_vec,
    make_space,
    to_coords,
    vec_inf,
)
from .errors import BetaOutOfRange, DimensionMismatch, HypothesisViolated, InvalidAlgebra
from .rational import Vec, frac, vec, vec_sub, vec_zero


@dataclass(frozen=True)
class LatticeAlgebra:
    space: LatticeSpace
    structure: tuple[tuple[Vec, ...], ...]  # structure[i][j] = coords of g_i * g_j
    unit: Vec | None

    @property
    def dim(self) -> int:
        return self.space.dim


@dataclass(frozen=True)
class PoisonVerdict:
    alpha: Fraction
    classification: str  # "NonRepresentable" | "Inconclusive"
    hypothesis_log: tuple[tuple[str, bool], ...]
    decomposition: tuple[Fraction, Vec]  # (alpha, disjoint part x)


def multiply(a: LatticeAlgebra, x, y) -> Vec:
    """Bilinear product: expand both factors over the cone generators."""
    x, y = vec(x), vec(y)
    if len(x) != a.dim or len(y) != a.dim:
        raise DimensionMismatch("vectors must match the algebra dimension")
    cx, cy = to_coords(a.space, x), to_coords(a.space, y)
    acc = list(vec_zero(a.dim))
    for i, xi in enumerate(cx):
        if xi == 0:
            continue
        for j, yj in enumerate(cy):
            if yj == 0:
                continue
            coeff = xi * yj
            for k, c in enumerate(a.structure[i][j]):
                if c != 0:
                    acc[k] += coeff * c
    gens = a.space.generators()
    out = list(vec_zero(a.dim))
    for k, ck in enumerate(acc):
        if ck != 0:
            for r in range(a.dim):
                out[r] += ck * gens[k][r]
    return tuple(out)


def make_algebra(space: LatticeSpace, structure, unit=None) -> LatticeAlgebra:
    """Validate structure constants: shape, associativity, unit laws."""
    n = space.dim
    table = tuple(tuple(vec(structure[i][j]) for j in range(n)) for i in range(n))
    if len(table) != n or any(len(row) != n or any(len(c) != n for c in row) for row in table):
        raise DimensionMismatch("structure constants must form an n x n x n table")
    algebra = LatticeAlgebra(space=space, structure=table, unit=vec(unit) if unit is not None else None)
    gens = space.generators()
    for i in range(n):
        for j in range(n):
            for k in range(n):
                left = multiply(algebra, multiply(algebra, gens[i], gens[j]), gens[k])
                right = multiply(algebra, gens[i], multiply(algebra, gens[j], gens[k]))
                if left != right:
                    raise InvalidAlgebra(f"associativity fails on generators ({i}, {j}, {k})")
    if algebra.unit is not None:
        for g in gens:
            if multiply(algebra, algebra.unit, g) != g or multiply(algebra, g, algebra.unit) != g:
                raise InvalidAlgebra("declared unit is not a two-sided identity")
    return algebra


def pointwise_algebra(space: LatticeSpace, unit=None) -> LatticeAlgebra:
    """Algebra of coordinatewise products of ambient vectors on ``space``."""
    gens = space.generators()
    structure = tuple(
        tuple(
            to_coords(space, tuple(gi[r] * gj[r] for r in range(space.dim)))
            for gj in gens
        )
        for gi in gens
    )
    return make_algebra(space, structure, unit=unit)


def check_positive_multiplication(a: LatticeAlgebra) -> bool:
    """Products of positive elements are positive iff all generator
    products land in the cone (bilinearity does the rest)."""
    gens = a.space.generators()
    return all(
        is_positive_vec(a.space, multiply(a, gi, gj))
        for gi in gens
        for gj in gens
    )


def wickstead_family(beta) -> LatticeAlgebra:
    """Plane with pointwise product, ordered by the cone between the rays
    (1, beta) and (1, 1), for -1 <= beta <= 0.

    The cone is {(u, v) : 0 <= u, beta u <= v <= u}; products of positive
    elements stay positive, and (1, 1) is the algebraic unit.
    """
    b = frac(beta)
    if not -1 <= b <= 0:
        raise BetaOutOfRange(f"beta must lie in [-1, 0], got {b}")
    space = make_space(((Fraction(1), Fraction(1)), (b, Fraction(1))), label=f"wickstead(beta={b})")
    return pointwise_algebra(space, unit=(Fraction(1), Fraction(1)))


def family_alpha(beta) -> Fraction:
    """Coefficient of the unit in the band decomposition of p = (1, 0)."""
    b = frac(beta)
    if not -1 <= b <= 0:
        raise BetaOutOfRange(f"beta must lie in [-1, 0], got {b}")
    return b / (b - 1)


_RECIPROCALS = "alpha in {0} u {1/m : m in N}"


def _is_reciprocal_or_zero(alpha: Fraction) -> bool:
    return alpha == 0 or alpha.numerator == 1


def poison_verdict(a: LatticeAlgebra, e, p) -> PoisonVerdict:
    """Representability verdict from a pair of algebra idempotents.

    Hypotheses, each verified exactly (failure raises HypothesisViolated
    with the code in parentheses): e, p positive and nonzero (positivity);
    e and p idempotent (e2, p2); ep = pe = p (ep, pe); the band component
    of p along e is a scalar multiple alpha of e (band).  The disjoint
    part x = p - alpha e then satisfies x ^ e = 0, and the verdict is
    NonRepresentable exactly when alpha is neither 0 nor 1/m: no faithful
    representation by regular operators exists on any Dedekind complete
    vector lattice, unital or not.
    """
    e, p = vec(e), vec(p)
    space = a.space
    log: list[tuple[str, bool]] = []

    def check(which: str, ok: bool) -> None:
        log.append((which, ok))
        if not ok:
            raise HypothesisViolated(which)

    zero = vec_zero(a.dim)
    check("positivity", is_positive_vec(space, e) and is_positive_vec(space, p)
          and e != zero and p != zero)
    check("e2", multiply(a, e, e) == e)
    check("p2", multiply(a, p, p) == p)
    check("ep", multiply(a, e, p) == p)
    check("pe", multiply(a, p, e) == p)

    band = band_project(space, e, p)
    ce = to_coords(space, e)
    cb = to_coords(space, band)
    alpha = Fraction(0)
    scalar = True
    pivot = next((i for i, c in enumerate(ce) if c != 0), None)
    if pivot is not None:
        alpha = cb[pivot] / ce[pivot]
    for i in range(a.dim):
        if cb[i] != alpha * ce[i]:
            scalar = False
            break
    check("band", scalar)

    x = vec_sub(p, band)
    disjoint = vec_inf(space, x, e) == zero
    log.append(("disjoint", disjoint))
    if not disjoint:
        raise HypothesisViolated("disjoint")

    classification = "Inconclusive" if _is_reciprocal_or_zero(alpha) else "NonRepresentable"
    return PoisonVerdict(
        alpha=alpha,
        classification=classification,
        hypothesis_log=tuple(log),
        decomposition=(alpha, x),
    )
