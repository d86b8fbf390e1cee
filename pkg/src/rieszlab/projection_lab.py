"""Construction, analysis and search for positive projections.

The analyses all run in exact rational arithmetic; the one floating-point
citizen is the feasibility search at the bottom, which tries (and, for
forbidden diagonals, fails) to build nonnegative idempotents with a
prescribed constant diagonal.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import search_kernels
from .core_lattice import LatticeSpace, standard_space
from .errors import (
    BadAlpha,
    BadFamily,
    BadPartition,
    CapExceeded,
    DiagonalNotConstant,
    GroupTooLarge,
    NeedTwoBlocks,
    NotAPermutation,
    NotContractive,
    NotIdempotent,
    NotPositive,
    PreconditionFailed,
    TheoremViolation,
    UnsupportedCone,
    ZeroDiagonal,
    ZeroProjection,
)
from .operator_lattice import (
    RegularOperator,
    constant_diagonal_alpha,
    diagonal_part,
    is_positive,
    op_compose,
    operator,
    operator_pnorm,
)
from .rational import Mat, Vec, frac, mat_rank, mat_trace, mat_vec, vec_ones
from .rng import SplitMix64

FAMILIES = ("block", "group", "conjugated-block", "direct-sum", "rank-one")

DEFAULT_DIM_CAP = 24
GROUP_CLOSURE_CAP = 10**6

# Verdict bands of the feasibility search (max-entry idempotency residual).
SUCCESS_RESIDUAL = 1e-10
FAILURE_RESIDUAL = 1e-3


@dataclass(frozen=True)
class Partition:
    """Disjoint non-empty blocks of 1-based indices covering {1..n}."""

    n: int
    blocks: tuple[tuple[int, ...], ...]


def make_partition(n: int, blocks) -> Partition:
    normalized = tuple(tuple(sorted(int(i) for i in block)) for block in blocks)
    seen: set[int] = set()
    for block in normalized:
        if not block:
            raise BadPartition("empty block")
        for i in block:
            if not 1 <= i <= n:
                raise BadPartition(f"index {i} outside 1..{n}")
            if i in seen:
                raise BadPartition(f"index {i} appears twice")
            seen.add(i)
    if len(seen) != n:
        raise BadPartition("blocks must cover every index")
    return Partition(n=n, blocks=tuple(sorted(normalized)))


@dataclass(frozen=True)
class ProjectionReport:
    is_positive: bool
    is_idempotent: bool
    alpha: Fraction | None
    rank: int
    wickstead_m: int | None
    divides_dim: bool
    violations: tuple[str, ...]


@dataclass(frozen=True)
class StructureReport:
    """Row-support structure of a stochastic constant-diagonal projection."""

    alpha: Fraction
    j_sets: tuple[tuple[int, ...], ...]          # 1-based support of each row
    lambdas: tuple[tuple[Fraction, ...], ...]    # weights aligned with j_sets
    row_sums: tuple[Fraction, ...]
    partition: Partition


@dataclass(frozen=True)
class NormalizedProjection:
    support: tuple[int, ...]  # 1-based indices kept
    q: RegularOperator


@dataclass(frozen=True)
class PoisonedPair:
    e: RegularOperator
    t: RegularOperator
    weights: dict


@dataclass(frozen=True)
class SearchBudget:
    restarts: int = 50
    iterations: int = 10_000


@dataclass(frozen=True)
class SearchResult:
    best_residual: float
    best_matrix: np.ndarray
    restarts_used: int
    backend: str

    @property
    def verdict(self) -> str:
        if self.best_residual <= SUCCESS_RESIDUAL:
            return "construction_found"
        if self.best_residual >= FAILURE_RESIDUAL:
            return "no_construction_found"
        return "indeterminate"


def analyze(p: RegularOperator) -> ProjectionReport:
    """Full constant-diagonal report for an operator.

    Non-positive or non-idempotent inputs simply come back flagged, with no
    diagonal verdict.  For positive idempotents the report checks, exactly:
    the diagonal value lies in {0} u {1/m}, m divides the dimension,
    rank = trace = dim * alpha, and a zero diagonal forces the zero
    operator.  Each failed check appends a violation code; any violation
    signals a bug or a genuine counterexample to the reciprocal law.
    """
    pos = is_positive(p)
    idem = op_compose(p, p).matrix == p.matrix
    rank = mat_rank(p.matrix)
    violations: list[str] = []
    alpha: Fraction | None = None
    m: int | None = None
    divides = False
    if pos and idem:
        trace = mat_trace(p.cone_matrix)
        if trace != rank:
            violations.append("rank_trace_mismatch")
        dp = diagonal_part(p)
        if dp.is_scalar:
            alpha = dp.alpha
            if alpha == 0:
                divides = True
                if any(x != 0 for row in p.matrix for x in row):
                    violations.append("alpha_zero_nonzero")
            elif alpha.numerator == 1:
                m = alpha.denominator
                if p.dim % m == 0:
                    divides = True
                else:
                    violations.append("m_not_dividing_dim")
                if rank * m != p.dim:
                    violations.append("rank_alpha_mismatch")
            else:
                violations.append("alpha_not_reciprocal")
    return ProjectionReport(
        is_positive=pos,
        is_idempotent=idem,
        alpha=alpha,
        rank=rank,
        wickstead_m=m,
        divides_dim=divides,
        violations=tuple(violations),
    )


def _require_standard(p: RegularOperator) -> None:
    if not p.space.cone.is_standard:
        raise UnsupportedCone("operation is defined on standard-cone spaces")


def is_stochastic(p: RegularOperator) -> bool:
    ones = vec_ones(p.dim)
    return mat_vec(p.matrix, ones) == ones


def stochastic_normalize(p: RegularOperator) -> NormalizedProjection:
    """Restrict to the support of P(1) and renormalise rows to sum one.

    The support ideal is invariant, so the restriction stays an exact
    positive idempotent; conjugating by diag(P(1)) on the support leaves
    the diagonal untouched and makes the all-ones vector fixed.
    """
    _require_standard(p)
    if not is_positive(p):
        raise NotPositive("stochastic_normalize needs a positive operator")
    if op_compose(p, p).matrix != p.matrix:
        raise NotIdempotent("stochastic_normalize needs an idempotent")
    f = mat_vec(p.matrix, vec_ones(p.dim))
    support = tuple(i for i, x in enumerate(f) if x != 0)
    if not support:
        raise ZeroProjection("the zero projection has no stochastic form")
    q_matrix = tuple(
        tuple(p.matrix[i][j] * f[j] / f[i] for j in support)
        for i in support
    )
    q = operator(standard_space(len(support)), q_matrix)
    return NormalizedProjection(support=tuple(i + 1 for i in support), q=q)


def structure_report(q: RegularOperator) -> StructureReport:
    """Row supports, weights and the induced partition of a stochastic
    constant-diagonal projection.

    Verified exactly: every row sums to one, rows coincide across each
    support set, the weight at (t, s) equals the diagonal weight at s, the
    distinct supports partition the index set, and each support has size
    1/alpha.
    """
    _require_standard(q)
    if not is_positive(q):
        raise PreconditionFailed("positive")
    if op_compose(q, q).matrix != q.matrix:
        raise PreconditionFailed("idempotent")
    if not is_stochastic(q):
        raise PreconditionFailed("stochastic")
    alpha = constant_diagonal_alpha(q)
    if alpha is None:
        raise PreconditionFailed("diagonal")
    if alpha == 0:
        raise PreconditionFailed("diagonal")
    n = q.dim
    j_sets = []
    lambdas = []
    row_sums = []
    for t in range(n):
        support = tuple(s for s in range(n) if q.matrix[t][s] != 0)
        j_sets.append(support)
        lambdas.append(tuple(q.matrix[t][s] for s in support))
        row_sums.append(sum((q.matrix[t][s] for s in support), Fraction(0)))
    size = int(1 / alpha) if (1 / alpha).denominator == 1 else None
    for t in range(n):
        if t not in j_sets[t]:
            raise TheoremViolation(f"row {t + 1} does not carry its own index")
        if row_sums[t] != 1:
            raise TheoremViolation(f"row {t + 1} sums to {row_sums[t]}, not 1")
        for s in j_sets[t]:
            if j_sets[s] != j_sets[t]:
                raise TheoremViolation(f"supports of rows {t + 1} and {s + 1} differ")
            if q.matrix[t][s] != q.matrix[s][s]:
                raise TheoremViolation(f"weight ({t + 1},{s + 1}) differs from ({s + 1},{s + 1})")
        if size is None or len(j_sets[t]) != size:
            raise TheoremViolation(f"support of row {t + 1} has size {len(j_sets[t])}, not 1/alpha")
    distinct = sorted(set(j_sets))
    covered = sorted(i for block in distinct for i in block)
    if covered != list(range(n)):
        raise TheoremViolation("distinct supports do not partition the index set")
    partition = make_partition(n, tuple(tuple(i + 1 for i in block) for block in distinct))
    return StructureReport(
        alpha=alpha,
        j_sets=tuple(tuple(i + 1 for i in block) for block in j_sets),
        lambdas=tuple(lambdas),
        row_sums=tuple(row_sums),
        partition=partition,
    )


def _validate_permutation(n: int, perm) -> tuple[int, ...]:
    p = tuple(int(x) for x in perm)
    if sorted(p) != list(range(n)):
        raise NotAPermutation(f"{perm!r} is not a permutation of 0..{n - 1}")
    return p


def group_closure(n: int, generators, cap: int = GROUP_CLOSURE_CAP) -> list[tuple[int, ...]]:
    """All products of the generators, by breadth-first closure."""
    gens = [_validate_permutation(n, g) for g in generators]
    identity = tuple(range(n))
    seen = {identity}
    frontier = [identity]
    while frontier:
        nxt = []
        for sigma in frontier:
            for g in gens:
                tau = tuple(g[sigma[i]] for i in range(n))
                if tau not in seen:
                    seen.add(tau)
                    if len(seen) > cap:
                        raise GroupTooLarge(f"closure exceeded {cap} elements")
                    nxt.append(tau)
        frontier = nxt
    return sorted(seen)


def group_average(n: int, generators) -> RegularOperator:
    """Averaging projection of the group generated by permutations.

    Row t places weight 1/|G| on sigma(t) for each group element, so the
    diagonal weight at t counts the stabiliser of t; the diagonal is the
    constant 1/|G| exactly when the action is free.
    """
    group = group_closure(n, generators)
    size = Fraction(1, len(group))
    rows = [[Fraction(0)] * n for _ in range(n)]
    for sigma in group:
        for t in range(n):
            rows[t][sigma[t]] += size
    return operator(standard_space(n), rows)


def block_projection(n: int, partition: Partition) -> RegularOperator:
    """Averaging projection of a partition: 1/|block| inside each block."""
    if partition.n != n:
        raise BadPartition(f"partition is over 1..{partition.n}, not 1..{n}")
    rows = [[Fraction(0)] * n for _ in range(n)]
    for block in partition.blocks:
        w = Fraction(1, len(block))
        for i in block:
            for j in block:
                rows[i - 1][j - 1] = w
    return operator(standard_space(n), rows)


def recover_partition(p: RegularOperator, pnorm) -> Partition:
    """Reconstruct the partition behind a contractive constant-diagonal
    projection on a standard-cone space.

    Row supports must tile the index set in blocks of size 1/alpha and the
    operator must equal the block projection of that partition exactly; a
    mismatch would contradict the structure theorem for such projections
    and raises TheoremViolation.
    """
    _require_standard(p)
    if not is_positive(p):
        raise NotPositive("recover_partition needs a positive operator")
    if op_compose(p, p).matrix != p.matrix:
        raise NotIdempotent("recover_partition needs an idempotent")
    norm = operator_pnorm(p, pnorm)
    if isinstance(norm, Fraction):
        if norm > 1:
            raise NotContractive(f"operator norm {norm} exceeds 1")
    elif norm > 1 + 1e-9:
        raise NotContractive(f"operator norm {norm} exceeds 1")
    alpha = constant_diagonal_alpha(p)
    if alpha is None:
        raise DiagonalNotConstant("diagonal is not constant")
    if alpha == 0:
        raise ZeroDiagonal("constant diagonal 0 admits only the zero projection")
    n = p.dim
    supports = sorted({tuple(j for j in range(n) if p.matrix[i][j] != 0) for i in range(n)})
    covered = sorted(j for block in supports for j in block)
    if covered != list(range(n)):
        raise TheoremViolation("row supports do not partition the index set")
    if any(len(block) * alpha != 1 for block in supports):
        raise TheoremViolation("a row support does not have size 1/alpha")
    partition = make_partition(n, tuple(tuple(j + 1 for j in block) for block in supports))
    if block_projection(n, partition).matrix != p.matrix:
        raise TheoremViolation("operator is not the block projection of its supports")
    return partition


def conjugate_by_diagonal(p: RegularOperator, diag) -> RegularOperator:
    """Similarity D P D^-1 by a strictly positive diagonal D.

    Preserves positivity, idempotence and every diagonal entry, and turns
    stochastic instances into non-stochastic ones.
    """
    d = [frac(x) for x in diag]
    if len(d) != p.dim or any(x <= 0 for x in d):
        raise NotPositive("need a strictly positive diagonal of matching size")
    rows = tuple(
        tuple(d[i] * p.matrix[i][j] / d[j] for j in range(p.dim))
        for i in range(p.dim)
    )
    return operator(p.space, rows)


def block_transfer_map(n: int, blocks: Partition, weights: dict) -> RegularOperator:
    """Nonnegative combination of block-to-block averaging maps.

    ``weights`` maps ordered block-index pairs (a, b), a != b, to
    nonnegative rationals; the (a, b) summand sends block b onto block a by
    averaging, so its entries live on the off-diagonal block rectangle.
    """
    rows = [[Fraction(0)] * n for _ in range(n)]
    for (a, b), w in weights.items():
        w = frac(w)
        if w < 0:
            raise NotPositive("transfer weights must be nonnegative")
        if a == b:
            raise BadPartition("transfer weights must join distinct blocks")
        target, source = blocks.blocks[a], blocks.blocks[b]
        value = w / len(source)
        for i in target:
            for j in source:
                rows[i - 1][j - 1] += value
    return operator(standard_space(n), rows)


def poisoned_pair(n: int, blocks: Partition, seed: int) -> PoisonedPair:
    """Block projection E plus a random off-diagonal transfer operator T.

    By construction E @ T = T @ E = T and the entrywise supports are
    disjoint, so the operator meet of E and T vanishes: exactly the
    hypotheses of the disjointness-transfer certificate.
    """
    if len(blocks.blocks) < 2:
        raise NeedTwoBlocks("need at least two blocks")
    sizes = {len(b) for b in blocks.blocks}
    if len(sizes) != 1:
        raise BadPartition("blocks must have equal size")
    rng = SplitMix64(seed)
    k = len(blocks.blocks)
    weights = {}
    for a in range(k):
        for b in range(k):
            if a != b and rng.next_below(2) == 1:
                weights[(a, b)] = Fraction(rng.next_int(1, 4), rng.next_int(1, 4))
    e = block_projection(n, blocks)
    t = block_transfer_map(n, blocks, weights)
    return PoisonedPair(e=e, t=t, weights=weights)


def _divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


def _random_partition(n: int, k: int, rng: SplitMix64) -> Partition:
    """Random partition of 1..n into blocks of size k (k must divide n)."""
    order = rng.shuffle(list(range(1, n + 1)))
    blocks = tuple(tuple(order[i:i + k]) for i in range(0, n, k))
    return make_partition(n, blocks)


def _random_free_action(n: int, rng: SplitMix64) -> RegularOperator:
    """Averaging projection of a free product-of-cycles action."""
    divs = _divisors(n)
    d = divs[rng.next_below(len(divs))]
    splits = [(d1, d // d1) for d1 in _divisors(d)]
    d1, d2 = splits[rng.next_below(len(splits))]
    order = rng.shuffle(list(range(n)))
    sigma = list(range(n))
    tau = list(range(n))
    # Arrange each chunk of d points on a d1 x d2 grid; one generator shifts
    # grid rows, the other shifts grid columns.  Nontrivial elements move
    # every point, so the diagonal of the average is the constant 1/d.
    for base in range(0, n, d):
        chunk = order[base:base + d]
        for r in range(d1):
            for c in range(d2):
                here = chunk[r * d2 + c]
                sigma[here] = chunk[((r + 1) % d1) * d2 + c]
                tau[here] = chunk[r * d2 + (c + 1) % d2]
    return group_average(n, [tuple(sigma), tuple(tau)])


def random_instance(family: str, n: int, seed: int, dim_cap: int = DEFAULT_DIM_CAP) -> RegularOperator:
    """Deterministic positive idempotent from one of the structured families.

    block: averaging projection of a random equal-size partition.
    group: averaging projection of a random free product-of-cycles action.
    conjugated-block: block instance conjugated by a random positive
        diagonal (non-stochastic, same diagonal).
    direct-sum: two block-family summands sharing the same alpha.
    rank-one: u v^T with u, v > 0, u_i v_i = 1/n, so alpha = 1/n.
    """
    if n > dim_cap:
        raise CapExceeded(f"n = {n} exceeds the cap {dim_cap}")
    if n <= 0:
        raise BadFamily("dimension must be positive")
    rng = SplitMix64(seed)
    if family == "block":
        divs = _divisors(n)
        k = divs[rng.next_below(len(divs))]
        return block_projection(n, _random_partition(n, k, rng))
    if family == "group":
        return _random_free_action(n, rng)
    if family == "conjugated-block":
        divs = _divisors(n)
        k = divs[rng.next_below(len(divs))]
        base = block_projection(n, _random_partition(n, k, rng))
        diag = [rng.next_fraction(4, 4) for _ in range(n)]
        return conjugate_by_diagonal(base, diag)
    if family == "direct-sum":
        divs = [m for m in _divisors(n) if n // m >= 2]
        if not divs:
            raise BadFamily("direct-sum needs dimension at least 2")
        m = divs[rng.next_below(len(divs))]
        pieces = n // m
        k1 = rng.next_int(1, pieces - 1)
        sizes = (m * k1, n - m * k1)
        rows = [[Fraction(0)] * n for _ in range(n)]
        offset = 0
        for part in sizes:
            sub = block_projection(part, _random_partition(part, m, rng))
            diag = [rng.next_fraction(4, 4) for _ in range(part)]
            sub = conjugate_by_diagonal(sub, diag)
            for i in range(part):
                for j in range(part):
                    rows[offset + i][offset + j] = sub.matrix[i][j]
            offset += part
        return operator(standard_space(n), rows)
    if family == "rank-one":
        u = [rng.next_fraction(4, 4) for _ in range(n)]
        v = [Fraction(1, n) / ui for ui in u]
        rows = tuple(tuple(ui * vj for vj in v) for ui in u)
        return operator(standard_space(n), rows)
    raise BadFamily(f"unknown family {family!r}; choose from {FAMILIES}")


@dataclass(frozen=True)
class SweepResult:
    total: int
    analyzed: tuple[tuple[str, int, int, ProjectionReport], ...]
    violations: tuple[tuple[str, int, int, tuple[str, ...]], ...]
    structures_checked: int


def run_sweep(family: str, n: int, count: int, seed: int, check_structure: bool = True) -> SweepResult:
    """Generate, analyze and law-check ``count`` instances per family.

    Every instance must come back positive, idempotent, constant-diagonal
    with alpha in {0} u {1/m}, m dividing n and rank = n * alpha; stochastic
    instances (and the stochastic normal forms of the rest) additionally
    pass the row-structure checks.  Violations are collected, never
    swallowed.
    """
    families = FAMILIES if family == "all" else (family,)
    if any(f not in FAMILIES for f in families):
        raise BadFamily(f"unknown family {family!r}")
    rng = SplitMix64(seed)
    analyzed = []
    violations = []
    structures = 0
    for _ in range(count):
        for fam in families:
            inst_seed = rng.next_u64()
            inst = random_instance(fam, n, inst_seed)
            report = analyze(inst)
            analyzed.append((fam, n, inst_seed, report))
            codes = list(report.violations)
            if not report.is_positive:
                codes.append("not_positive")
            if not report.is_idempotent:
                codes.append("not_idempotent")
            if report.alpha is None:
                codes.append("diagonal_not_constant")
            if check_structure and report.alpha is not None and report.alpha > 0:
                source = inst if is_stochastic(inst) else stochastic_normalize(inst).q
                structure = structure_report(source)
                structures += 1
                if structure.alpha != report.alpha:
                    codes.append("normalize_changed_alpha")
            if codes:
                violations.append((fam, n, inst_seed, tuple(codes)))
    return SweepResult(
        total=len(analyzed),
        analyzed=tuple(analyzed),
        violations=tuple(violations),
        structures_checked=structures,
    )


def feasibility_search(n: int, alpha: float, budget: SearchBudget | None = None,
                       seed: int = 0, backend: str | None = None) -> SearchResult:
    """Attempted construction of a nonnegative idempotent with constant
    diagonal alpha, by projected descent with random restarts.

    Interpretation bands on the best max-entry residual of P @ P - P:
    at most 1e-10 means a construction was found; at least 1e-3 after the
    full budget means no construction was found within budget.  The search
    is deterministic in (n, alpha, budget, seed) for a fixed backend.
    """
    if not 0.0 < alpha < 1.0:
        raise BadAlpha(f"need 0 < alpha < 1, got {alpha}")
    if n <= 0:
        raise BadAlpha("dimension must be positive")
    budget = budget or SearchBudget()
    rng = SplitMix64(seed)
    starts = np.empty((budget.restarts, n, n), dtype=np.float64)
    for r in range(budget.restarts):
        for i in range(n):
            for j in range(n):
                starts[r, i, j] = rng.next_float()
    best, best_p, used, chosen = search_kernels.run_descent(
        starts, alpha, budget.iterations, 0.1 / n, SUCCESS_RESIDUAL * 1e-2, backend,
    )
    return SearchResult(best_residual=best, best_matrix=best_p, restarts_used=used, backend=chosen)
