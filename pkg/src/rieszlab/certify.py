"""Exact rational linear programming and LP-backed order certificates.

The simplex here is deliberately plain: dense tableau, two phases, Bland's
anti-cycling pivot rule, every number a Fraction.  It is the independent
oracle against which the closed-form operator meet is checked, and the
engine behind the least-upper-bound and disjointness-transfer
certificates.  Every feasible region that appears is a box intersected
with a subspace (order intervals in cone coordinates), so problems stay
small and termination is guaranteed by Bland's rule alone.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .core_lattice import LatticeSpace, from_coords, to_coords, vec_sup
from .errors import HypothesisViolated, MalformedProgram, NotIdempotent, NotInRange, NotPositive
from .operator_lattice import RegularOperator, is_positive, op_compose, op_meet, op_zero
from .rational import Mat, Vec, frac, mat, mat_identity, mat_rank, mat_sub, mat_vec, vec, vec_dot

_SENSES = ("<=", "=", ">=")


@dataclass(frozen=True)
class LinearProgram:
    objective: Vec
    matrix: Mat
    rhs: Vec
    senses: tuple[str, ...]
    bounds: tuple[tuple[Fraction | None, Fraction | None], ...]
    maximize: bool = False


@dataclass(frozen=True)
class LPResult:
    status: str  # optimal | infeasible | unbounded
    value: Fraction | None
    solution: Vec | None


@dataclass(frozen=True)
class Certificate:
    claim: str
    holds: bool
    witnesses: tuple[tuple[int, Fraction], ...]


@dataclass(frozen=True)
class CertifiedSublattice:
    parent: LatticeSpace
    projector: RegularOperator
    range_basis: tuple[Vec, ...]


def make_lp(objective, matrix, rhs, senses, bounds=None, maximize=False) -> LinearProgram:
    """Assemble and validate a LinearProgram; bounds default to x >= 0."""
    obj = vec(objective)
    try:
        m = mat(matrix) if matrix else ()
        r = vec(rhs)
    except TypeError as exc:
        raise MalformedProgram(str(exc)) from None
    senses = tuple(senses)
    if bounds is None:
        bounds = tuple((Fraction(0), None) for _ in obj)
    else:
        bounds = tuple(
            (None if lo is None else frac(lo), None if hi is None else frac(hi))
            for lo, hi in bounds
        )
    if len(m) != len(r) or len(m) != len(senses):
        raise MalformedProgram("matrix, rhs and senses must have equal row counts")
    if any(len(row) != len(obj) for row in m):
        raise MalformedProgram("constraint rows must match the objective length")
    if any(s not in _SENSES for s in senses):
        raise MalformedProgram(f"row senses must be one of {_SENSES}")
    if len(bounds) != len(obj):
        raise MalformedProgram("one (lower, upper) bound pair per variable")
    return LinearProgram(obj, m, r, senses, bounds, maximize)


def _pivot(rows: list[list[Fraction]], basis: list[int], leave: int, enter: int, width: int) -> None:
    prow = rows[leave]
    pv = prow[enter]
    if pv != 1:
        rows[leave] = prow = [x / pv for x in prow]
    for i, row in enumerate(rows):
        if i != leave and row[enter] != 0:
            f = row[enter]
            rows[i] = [x - f * y for x, y in zip(row, prow)]
    basis[leave] = enter


def _bland_min(rows: list[list[Fraction]], basis: list[int], m: int, ncols: int) -> str:
    """Minimise with Bland's rule; rows[m] is the reduced-cost row."""
    while True:
        cost = rows[m]
        enter = next((j for j in range(ncols) if cost[j] < 0), -1)
        if enter < 0:
            return "optimal"
        leave, best = -1, None
        for i in range(m):
            a = rows[i][enter]
            if a > 0:
                ratio = rows[i][ncols] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best, leave = ratio, i
        if leave < 0:
            return "unbounded"
        _pivot(rows, basis, leave, enter, ncols)


def lp_optimize(lp: LinearProgram) -> LPResult:
    """Exact two-phase simplex.

    Variables with a finite lower bound are shifted to zero; free variables
    are split into positive and negative parts; finite upper bounds become
    rows.  Entering/leaving choices follow Bland's rule with lowest-index
    tie-breaks, so the iteration always terminates.
    """
    if not isinstance(lp, LinearProgram):
        raise MalformedProgram("expected a LinearProgram")
    nvars = len(lp.objective)

    # Variable transform to the all-nonnegative standard form.
    var_map: list[tuple] = []
    extra: list[tuple[dict[int, Fraction], Fraction]] = []  # coeffs -> rhs, sense <=
    cols = 0
    for j in range(nvars):
        lo, hi = lp.bounds[j]
        if lo is not None:
            if hi is not None and hi < lo:
                return LPResult("infeasible", None, None)
            var_map.append(("shift", cols, lo))
            if hi is not None:
                extra.append(({cols: Fraction(1)}, hi - lo))
            cols += 1
        else:
            var_map.append(("split", cols, cols + 1))
            if hi is not None:
                extra.append(({cols: Fraction(1), cols + 1: Fraction(-1)}, hi))
            cols += 2

    sign = Fraction(-1) if lp.maximize else Fraction(1)
    c = [Fraction(0)] * cols
    for j in range(nvars):
        cj = sign * lp.objective[j]
        vm = var_map[j]
        if vm[0] == "shift":
            c[vm[1]] += cj
        else:
            c[vm[1]] += cj
            c[vm[2]] -= cj

    raw_rows: list[tuple[list[Fraction], Fraction, str]] = []
    for i in range(len(lp.matrix)):
        coeffs = [Fraction(0)] * cols
        rhs = lp.rhs[i]
        for j in range(nvars):
            a = lp.matrix[i][j]
            if a == 0:
                continue
            vm = var_map[j]
            if vm[0] == "shift":
                coeffs[vm[1]] += a
                rhs -= a * vm[2]
            else:
                coeffs[vm[1]] += a
                coeffs[vm[2]] -= a
        raw_rows.append((coeffs, rhs, lp.senses[i]))
    for coeffs_d, rhs in extra:
        coeffs = [Fraction(0)] * cols
        for k, v in coeffs_d.items():
            coeffs[k] = v
        raw_rows.append((coeffs, rhs, "<="))

    flip = {"<=": ">=", ">=": "<=", "=": "="}
    norm = []
    for coeffs, rhs, sense in raw_rows:
        if rhs < 0:
            coeffs, rhs, sense = [-x for x in coeffs], -rhs, flip[sense]
        norm.append((coeffs, rhs, sense))

    m = len(norm)
    nslack = sum(1 for *_, s in norm if s == "<=")
    nsurp = sum(1 for *_, s in norm if s == ">=")
    nart = sum(1 for *_, s in norm if s in (">=", "="))
    art_start = cols + nslack + nsurp
    total = art_start + nart

    rows: list[list[Fraction]] = []
    basis: list[int] = []
    si, ui, ai = cols, cols + nslack, art_start
    for coeffs, rhs, sense in norm:
        row = coeffs + [Fraction(0)] * (total - cols) + [rhs]
        if sense == "<=":
            row[si] = Fraction(1)
            basis.append(si)
            si += 1
        else:
            if sense == ">=":
                row[ui] = Fraction(-1)
                ui += 1
            row[ai] = Fraction(1)
            basis.append(ai)
            ai += 1
        rows.append(row)

    if nart:
        cost = [Fraction(1) if j >= art_start else Fraction(0) for j in range(total)] + [Fraction(0)]
        for i in range(m):
            if basis[i] >= art_start:
                cost = [x - y for x, y in zip(cost, rows[i])]
        rows.append(cost)
        _bland_min(rows, basis, m, total)
        if -rows[m][total] > 0:
            return LPResult("infeasible", None, None)
        rows.pop()
        # Pivot zero-valued artificials out; drop rows that turn out redundant.
        drop = []
        for i in range(m):
            if basis[i] >= art_start:
                enter = next((j for j in range(art_start) if rows[i][j] != 0), -1)
                if enter < 0:
                    drop.append(i)
                else:
                    _pivot(rows, basis, i, enter, total)
        for i in reversed(drop):
            del rows[i]
            del basis[i]
        m = len(rows)
        rows = [row[:art_start] + [row[total]] for row in rows]
        total = art_start

    cost = list(c) + [Fraction(0)] * (total - cols) + [Fraction(0)]
    for i in range(m):
        cb = cost[basis[i]] if basis[i] < len(cost) - 1 else Fraction(0)
        if cb != 0:
            cost = [x - cb * y for x, y in zip(cost, rows[i])]
    rows.append(cost)
    status = _bland_min(rows, basis, m, total)
    if status == "unbounded":
        return LPResult("unbounded", None, None)

    u = [Fraction(0)] * cols
    for i in range(m):
        if basis[i] < cols:
            u[basis[i]] = rows[i][total]
    x = []
    for j in range(nvars):
        vm = var_map[j]
        if vm[0] == "shift":
            x.append(vm[2] + u[vm[1]])
        else:
            x.append(u[vm[1]] - u[vm[2]])
    solution = tuple(x)
    return LPResult("optimal", vec_dot(vec(lp.objective), solution), solution)


def _coord_min_over_box(objective_row: Vec, eq_matrix: Mat | None, box_hi: Vec) -> Fraction:
    """min objective_row . w subject to (eq_matrix) w = 0 and 0 <= w <= box_hi."""
    n = len(box_hi)
    if eq_matrix is None:
        matrix, rhs, senses = (), (), ()
    else:
        matrix = eq_matrix
        rhs = tuple(Fraction(0) for _ in eq_matrix)
        senses = tuple("=" for _ in eq_matrix)
    lp = make_lp(
        objective_row,
        matrix,
        rhs,
        senses,
        bounds=tuple((Fraction(0), box_hi[i]) for i in range(n)),
    )
    res = lp_optimize(lp)
    if res.status != "optimal":
        raise MalformedProgram(f"order-interval program came back {res.status}")
    return res.value


def certify_meet(s: RegularOperator, t: RegularOperator, x) -> tuple[Vec, Certificate]:
    """Meet of two positive operators at x >= 0, certified coordinatewise by LP.

    For each cone coordinate the infimum of s(y) + t(x - y) over the order
    interval 0 <= y <= x is computed by the exact simplex; the vector of
    minima is the value of the operator meet at x.  The certificate holds
    iff it coincides with the closed-form meet applied to x.
    """
    if not (is_positive(s) and is_positive(t)):
        raise NotPositive("certify_meet needs positive operators")
    space = s.space
    xc = to_coords(space, x)
    if any(a < 0 for a in xc):
        raise NotPositive("certify_meet needs x >= 0")
    n = space.dim
    diff = mat_sub(s.cone_matrix, t.cone_matrix)
    t_at_x = mat_vec(t.cone_matrix, xc)
    minima = []
    for i in range(n):
        opt = _coord_min_over_box(diff[i], None, xc)
        minima.append(opt + t_at_x[i])
    result = from_coords(space, tuple(minima))
    closed = mat_vec(op_meet(s, t).matrix, vec(x))
    cert = Certificate(
        claim="riesz-kantorovich-meet",
        holds=result == closed,
        witnesses=tuple(enumerate(minima)),
    )
    return result, cert


def certified_sublattice(e: RegularOperator) -> CertifiedSublattice:
    """Range of a positive projection as a sublattice of its space.

    The range basis is a maximal independent set among the images of the
    cone generators, found by exact elimination.
    """
    if not is_positive(e):
        raise NotPositive("projector must be positive")
    if op_compose(e, e).matrix != e.matrix:
        raise NotIdempotent("projector must satisfy E @ E = E")
    space = e.space
    candidates = [mat_vec(e.matrix, g) for g in space.generators()]
    chosen: list[Vec] = []
    rows: list[list[Fraction]] = []
    for cand in candidates:
        trial = rows + [list(cand)]
        if mat_rank(tuple(tuple(r) for r in trial)) > len(rows):
            rows = trial
            chosen.append(cand)
    return CertifiedSublattice(parent=space, projector=e, range_basis=tuple(chosen))


def _in_range(sub: CertifiedSublattice, y: Vec) -> bool:
    return mat_vec(sub.projector.matrix, y) == y


def range_sup(sub: CertifiedSublattice, y1, y2) -> tuple[Vec, Certificate]:
    """Least upper bound of y1, y2 inside the range of a positive projection.

    The candidate is E(y1 v y2).  The certificate checks that it dominates
    y1 and y2 and, for every cone-coordinate functional, that no element of
    the range dominating both can be smaller: the LP minimum of
    phi_i(z - s) over {z in Y : z >= y1, z >= y2} must be nonnegative.
    """
    space = sub.parent
    e = sub.projector
    y1, y2 = vec(y1), vec(y2)
    for y in (y1, y2):
        if not _in_range(sub, y):
            raise NotInRange("arguments must satisfy E y = y")
    s = mat_vec(e.matrix, vec_sup(space, y1, y2))
    n = space.dim
    sc = to_coords(space, s)
    c1, c2 = to_coords(space, y1), to_coords(space, y2)
    lower = tuple(max(a, b) for a, b in zip(c1, c2))
    upper_ok = all(sc[i] >= lower[i] for i in range(n))

    # z in Y as cone coordinates: (I - E_cone) z = 0, z >= lower.
    constraint = mat_sub(mat_identity(n), e.cone_matrix)
    witnesses = []
    holds = upper_ok
    for i in range(n):
        objective = tuple(Fraction(1) if j == i else Fraction(0) for j in range(n))
        lp = make_lp(
            objective,
            constraint,
            tuple(Fraction(0) for _ in range(n)),
            tuple("=" for _ in range(n)),
            bounds=tuple((lower[j], None) for j in range(n)),
        )
        res = lp_optimize(lp)
        if res.status != "optimal":
            holds = False
            witnesses.append((i, Fraction(0)))
            continue
        margin = res.value - sc[i]
        witnesses.append((i, margin))
        if margin < 0:
            holds = False
    return s, Certificate(claim="range-least-upper-bound", holds=holds, witnesses=tuple(witnesses))


def _transfer_hypotheses(e: RegularOperator, t: RegularOperator) -> None:
    if not is_positive(e) or not is_positive(t):
        raise HypothesisViolated("positivity", "E and T must be positive")
    if op_compose(e, e).matrix != e.matrix:
        raise HypothesisViolated("idempotency", "E must satisfy E @ E = E")
    if op_compose(e, t).matrix != t.matrix:
        raise HypothesisViolated("ET", "E @ T must equal T")
    if op_compose(t, e).matrix != t.matrix:
        raise HypothesisViolated("TE", "T @ E must equal T")
    if op_meet(e, t).matrix != op_zero(e.space).matrix:
        raise HypothesisViolated("meet", "E and T must have zero meet")


def transfer_check(e: RegularOperator, t: RegularOperator) -> Certificate:
    """Certify that disjointness from a projection E descends to its range.

    Hypotheses (each violation raises HypothesisViolated with a code):
    E, T positive, E idempotent, E T = T E = T, and the operator meet of E
    and T vanishes.  For every vector y of a positive spanning family of
    the range Y, the set Q = {(id - T) w + T y : w in Y, 0 <= w <= y} must
    have infimum 0 within Y.  That is certified in two LP rounds per y:

    * per-coordinate minima c_i of Q, all required nonnegative, so 0 is a
      lower bound of Q in the parent order;
    * the maximum of every cone-coordinate functional over the lower-bound
      slab {l in Y : l <= c} is required nonpositive, so no lower bound of
      Q inside Y exceeds 0.
    """
    _transfer_hypotheses(e, t)
    space = e.space
    n = space.dim
    constraint = mat_sub(mat_identity(n), e.cone_matrix)
    zero_rhs = tuple(Fraction(0) for _ in range(n))
    eq_senses = tuple("=" for _ in range(n))

    spanning: list[Vec] = []
    for g in space.generators():
        img = mat_vec(e.matrix, g)
        if any(x != 0 for x in img) and img not in spanning:
            spanning.append(img)

    witnesses: list[tuple[int, Fraction]] = []
    holds = True
    widx = 0
    id_minus_t = mat_sub(mat_identity(n), t.cone_matrix)
    for y in spanning:
        yc = to_coords(space, y)
        t_at_y = mat_vec(t.cone_matrix, yc)
        c_vec = []
        for i in range(n):
            opt = _coord_min_over_box(id_minus_t[i], constraint, yc) + t_at_y[i]
            c_vec.append(opt)
            witnesses.append((widx, opt))
            widx += 1
            if opt < 0:
                holds = False
        for i in range(n):
            objective = tuple(Fraction(1) if j == i else Fraction(0) for j in range(n))
            lp = make_lp(
                objective,
                constraint + mat_identity(n),
                zero_rhs + tuple(c_vec),
                eq_senses + tuple("<=" for _ in range(n)),
                bounds=tuple((None, None) for _ in range(n)),
                maximize=True,
            )
            res = lp_optimize(lp)
            val = res.value if res.status == "optimal" else None
            witnesses.append((widx, val if val is not None else Fraction(0)))
            widx += 1
            if val is None or val > 0:
                holds = False
    return Certificate(claim="disjointness-transfer", holds=holds, witnesses=tuple(witnesses))
