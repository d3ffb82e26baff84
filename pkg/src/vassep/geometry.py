"""Exact rational geometry of cycle cones.

Everything here works over ``fractions.Fraction``; distances are kept squared
so every comparison stays rational.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .automata import Nfa, simple_cycle_effects, trim
from .errors import DimensionError, VassepError
from .limits import DEFAULT, Limits

QVec = tuple  # tuple of Fraction
QMat = tuple  # tuple of rows


class ContractError(VassepError):
    """A precondition of a geometric routine does not hold."""


def dot(u: Sequence, v: Sequence):
    return sum(a * b for a, b in zip(u, v))


def norm2(u: Sequence):
    return dot(u, u)


def lcm_all(values) -> int:
    out = 1
    for v in values:
        out = math.lcm(out, v)
    return out


def integerize(v: Sequence) -> tuple[int, ...]:
    """Scale a rational vector to a primitive integer vector with the same direction."""
    v = [Fraction(x) for x in v]
    scale = lcm_all(x.denominator for x in v)
    ints = [int(x * scale) for x in v]
    g = 0
    for x in ints:
        g = math.gcd(g, x)
    return tuple(x // g for x in ints) if g else tuple(ints)


def mat_vec(M: Sequence[Sequence], v: Sequence) -> tuple:
    return tuple(dot(row, v) for row in M)


def mat_mul(A: Sequence[Sequence], B: Sequence[Sequence]) -> tuple:
    cols = list(zip(*B))
    return tuple(tuple(dot(row, c) for c in cols) for row in A)


def transpose(M: Sequence[Sequence]) -> tuple:
    return tuple(zip(*M))


def format_rational(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


# -- cones ---------------------------------------------------------------------


@dataclass(frozen=True)
class Cone:
    generators: tuple
    dim: int


def cone_of(a: Nfa, limits: Limits = DEFAULT) -> Cone:
    gens = tuple(sorted(simple_cycle_effects(trim(a), limits)))
    return Cone(gens, a.dim)


@dataclass(frozen=True)
class Coefficients:
    x: tuple  # Fractions, one per generator


@dataclass(frozen=True)
class FarkasCert:
    u: tuple  # integers


def _phase_one(A: list[list[Fraction]], b: list[Fraction]):
    """Minimise the sum of artificial variables for ``A x = b, x >= 0``.

    Returns ``(x, None)`` when feasible, otherwise ``(None, y)`` where ``y``
    is an optimal dual with ``y^T A <= 0`` and ``y^T b > 0``.  Bland's rule
    keeps the pivoting finite.
    """
    rows, cols = len(b), (len(A[0]) if A else 0)
    sign = [(-1 if bi < 0 else 1) for bi in b]
    # tableau columns: x_0..x_{cols-1}, artificials a_0..a_{rows-1}, rhs
    T = []
    for i in range(rows):
        row = [sign[i] * Fraction(A[i][j]) for j in range(cols)]
        row += [Fraction(int(i == r)) for r in range(rows)]
        row.append(sign[i] * Fraction(b[i]))
        T.append(row)
    basis = [cols + i for i in range(rows)]
    cost = [Fraction(0)] * cols + [Fraction(1)] * rows
    while True:
        # reduced costs
        enter = None
        for j in range(cols + rows):
            if j in basis:
                continue
            rc = cost[j] - sum(cost[basis[i]] * T[i][j] for i in range(rows))
            if rc < 0:
                enter = j
                break
        if enter is None:
            break
        leave = None
        best = None
        for i in range(rows):
            if T[i][enter] > 0:
                ratio = T[i][-1] / T[i][enter]
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best, leave = ratio, i
        if leave is None:  # cannot happen: phase one is bounded below by 0
            raise AssertionError("unbounded phase-one problem")
        piv = T[leave][enter]
        T[leave] = [v / piv for v in T[leave]]
        for i in range(rows):
            if i != leave and T[i][enter] != 0:
                f = T[i][enter]
                T[i] = [v - f * w for v, w in zip(T[i], T[leave])]
        basis[leave] = enter
    value = sum(cost[basis[i]] * T[i][-1] for i in range(rows))
    if value == 0:
        x = [Fraction(0)] * cols
        for i, j in enumerate(basis):
            if j < cols:
                x[j] = T[i][-1]
        return x, None
    # dual of the sign-adjusted system: y' = c_B^T B^{-1}; undo the row signs
    y_adj = [sum(cost[basis[i]] * T[i][cols + r] for i in range(rows)) for r in range(rows)]
    y = [sign[r] * y_adj[r] for r in range(rows)]
    return None, y


def cone_member(c: Cone, t: Sequence) -> Coefficients | FarkasCert:
    """Express ``t`` as a non-negative combination of the generators, or
    return an integer vector ``u`` separating ``t`` from the cone."""
    if len(t) != c.dim:
        raise DimensionError("target dimension does not match the cone")
    gens = [tuple(g) for g in c.generators]
    A = [[Fraction(g[i]) for g in gens] for i in range(c.dim)]
    b = [Fraction(x) for x in t]
    x, y = _phase_one(A, b)
    if x is not None:
        x = tuple(x)
        got = tuple(sum(x[j] * gens[j][i] for j in range(len(gens))) for i in range(c.dim))
        assert got == tuple(b) and all(v >= 0 for v in x), "cone membership check failed"
        return Coefficients(x)
    u = integerize([-v for v in y])
    assert all(dot(g, u) >= 0 for g in gens) and dot(b, u) < 0, "Farkas certificate check failed"
    return FarkasCert(u)


@dataclass(frozen=True)
class FullSpace:
    pass


@dataclass(frozen=True)
class Halfspace:
    u: tuple


def unit(n: int, i: int, s: int = 1) -> tuple:
    return tuple(s if j == i else 0 for j in range(n))


def dichotomy(c: Cone, n: int | None = None) -> FullSpace | Halfspace:
    """Either the cone is all of ``Q^n`` or it lies in ``{x : <x,u> >= 0}``."""
    n = c.dim if n is None else n
    if not any(any(g) for g in c.generators):
        return Halfspace(unit(n, 0))
    for i in range(n):
        for s in (1, -1):
            got = cone_member(c, unit(n, i, s))
            if isinstance(got, FarkasCert):
                return Halfspace(got.u)
    return FullSpace()


def modulus_for_fullspace(c: Cone, n: int | None = None) -> int:
    """A ``k`` such that every ``+-k e_i`` is an N-combination of the generators."""
    n = c.dim if n is None else n
    sols = []
    for i in range(n):
        for s in (1, -1):
            got = cone_member(c, unit(n, i, s))
            if not isinstance(got, Coefficients):
                raise ContractError("modulus_for_fullspace called on a cone that is not the full space")
            sols.append((i, s, got.x))
    k = lcm_all(x.denominator for _, _, xs in sols for x in xs)
    for i, s, xs in sols:
        ints = [x * k for x in xs]
        assert all(v.denominator == 1 and v >= 0 for v in ints)
        total = tuple(sum(ints[j] * c.generators[j][d] for j in range(len(ints))) for d in range(n))
        assert total == unit(n, i, s * k)
    return k


def integer_combinations(c: Cone, k: int) -> dict:
    """For each signed unit target, integer coefficients representing ``k`` times it."""
    out = {}
    for i in range(c.dim):
        for s in (1, -1):
            got = cone_member(c, unit(c.dim, i, s))
            if not isinstance(got, Coefficients):
                raise ContractError("target outside the cone")
            ints = [x * k for x in got.x]
            if any(v.denominator != 1 for v in ints):
                raise ContractError(f"{k} does not clear the denominators")
            out[(i, s)] = tuple(int(v) for v in ints)
    return out


# -- coordinate change ---------------------------------------------------------


def nullspace(rows: Sequence[Sequence], n: int) -> list[tuple]:
    """Rational basis of ``{x : r.x = 0 for every row r}`` (one vector per free column)."""
    M = [[Fraction(v) for v in r] for r in rows]
    pivots = []
    r = 0
    for col in range(n):
        pr = next((i for i in range(r, len(M)) if M[i][col] != 0), None)
        if pr is None:
            continue
        M[r], M[pr] = M[pr], M[r]
        pv = M[r][col]
        M[r] = [v / pv for v in M[r]]
        for i in range(len(M)):
            if i != r and M[i][col] != 0:
                f = M[i][col]
                M[i] = [a - f * b for a, b in zip(M[i], M[r])]
        pivots.append(col)
        r += 1
    free = [j for j in range(n) if j not in pivots]
    basis = []
    for fcol in free:
        v = [Fraction(0)] * n
        v[fcol] = Fraction(1)
        for i, pcol in enumerate(pivots):
            v[pcol] = -M[i][fcol]
        basis.append(tuple(v))
    return basis


def rank(rows: Sequence[Sequence], n: int) -> int:
    return n - len(nullspace(rows, n))


def _positive_first(v: tuple) -> tuple:
    for x in v:
        if x != 0:
            return v if x > 0 else tuple(-y for y in v)
    return v


def orthogonalize(vectors: Sequence[Sequence], against: Sequence[Sequence] = ()) -> list[tuple]:
    """Gram-Schmidt, each output scaled to a primitive integer vector."""
    done = [tuple(Fraction(x) for x in b) for b in against]
    out = []
    for v in vectors:
        w = [Fraction(x) for x in v]
        for b in done:
            coef = dot(w, b) / norm2(b)
            w = [x - coef * y for x, y in zip(w, b)]
        if not any(w):
            raise ContractError("input vectors are linearly dependent")
        iv = integerize(w)
        done.append(tuple(Fraction(x) for x in iv))
        out.append(iv)
    return out


@dataclass(frozen=True)
class CoordinateChange:
    u_basis: tuple      # b_1..b_m spanning U
    basis: tuple        # b_1..b_n (columns of B)
    B: tuple            # rows of the matrix whose columns are the b_i
    alpha: int
    A: tuple            # alpha * B^{-1}, integer rows
    m: int

    @property
    def n(self) -> int:
        return len(self.basis)

    def letter_images(self) -> dict:
        """Positive letter ``i`` maps to the word whose displacement is column ``i`` of A."""
        from .words import word_for_vector
        return {i + 1: word_for_vector([row[i] for row in self.A]) for i in range(self.n)}


def gram_schmidt_extend(*, u_basis: Sequence[Sequence[int]] | None = None,
                        normal: Sequence[int] | None = None,
                        n: int | None = None) -> CoordinateChange:
    """Orthogonal integer basis adapted to a subspace ``U``.

    Give either ``u_basis`` (a basis of U, with ``n`` the ambient dimension)
    or ``normal`` (then U is the hyperplane orthogonal to it and the normal
    itself becomes the last basis vector).
    """
    if (u_basis is None) == (normal is None):
        raise ValueError("give exactly one of u_basis and normal")
    if normal is not None:
        normal = tuple(int(x) for x in normal)
        if not any(normal):
            raise ContractError("normal vector must be nonzero")
        n = len(normal)
        hyper = [_positive_first(integerize(v)) for v in nullspace([normal], n)]
        ub = orthogonalize(hyper)
        rest = [normal]
    else:
        u_basis = [tuple(int(x) for x in v) for v in u_basis]
        if n is None:
            if not u_basis:
                raise ValueError("ambient dimension needed for an empty basis")
            n = len(u_basis[0])
        if u_basis and rank(u_basis, n) != len(u_basis):
            raise ContractError("input vectors are linearly dependent")
        ub = orthogonalize(u_basis)
        comp = [_positive_first(integerize(v)) for v in nullspace(ub, n)] if ub else \
            [unit(n, i) for i in range(n)]
        rest = orthogonalize(comp, against=ub)
    basis = tuple(tuple(b) for b in list(ub) + list(rest))
    B = tuple(tuple(basis[j][i] for j in range(n)) for i in range(n))
    inv_rows = [tuple(Fraction(x, norm2(b)) for x in b) for b in basis]  # B^{-1} (orthogonal columns)
    alpha = lcm_all(x.denominator for r in inv_rows for x in r)
    A = tuple(tuple(int(x * alpha) for x in r) for r in inv_rows)
    cc = CoordinateChange(tuple(tuple(b) for b in ub), basis, B, alpha, A, len(ub))
    assert mat_mul(A, B) == tuple(tuple(alpha if i == j else 0 for j in range(n)) for i in range(n))
    return cc


def dist2_to_hyperplane(v: Sequence, u: Sequence) -> Fraction:
    if not any(u):
        raise ContractError("normal vector must be nonzero")
    return Fraction(dot(v, u)) ** 2 / norm2(u)


def dist2_to_coordinate_subspace(v: Sequence, m: int) -> int:
    """Squared distance from ``v`` to the span of the first ``m`` axes."""
    return sum(x * x for x in v[m:])


def ceil_sqrt(x) -> int:
    """Smallest integer ``c >= 0`` with ``c*c >= x``."""
    x = Fraction(x)
    c = math.isqrt(math.ceil(x))
    while c * c < x:
        c += 1
    return c


def halfspace_constants(a: Nfa, u: Sequence[int], limits: Limits = DEFAULT) -> tuple[int, int]:
    """Constants ``(k, l)`` with ``L(a) <= D_{u,k} u S_{U,l}`` for the hyperplane ``U`` orthogonal to ``u``.

    An infix whose u-projection falls below ``-k`` must contain a cycle with
    negative u-projection once ``k`` is the number of states times the largest
    entry of ``u`` in absolute value (each letter moves the projection by at
    most that much).  A walk that never leaves the band of u-height ``k``
    stays within Euclidean distance ``k / |u|`` of ``U``, so ``l`` is the
    ceiling of that.
    """
    a = trim(a)
    c = cone_of(a, limits)
    bad = [g for g in c.generators if dot(g, u) < 0]
    if bad:
        raise ContractError(f"cycle effect {bad[0]} lies outside the half-space of {tuple(u)}")
    height = len(a.states) * max(abs(x) for x in u)
    ell = ceil_sqrt(Fraction(height * height, norm2(u)))
    return max(1, height), max(ell, 1 if height else 0)


def frobenius2(A: Sequence[Sequence]) -> int:
    return sum(x * x for row in A for x in row)


def shift_bound(cc_or_A, ell: int, image_lengths: Sequence[int]) -> int:
    """Band width ``p`` such that the letter morphism maps ``S_{U,l}`` into ``S_{V,p}``."""
    A = cc_or_A.A if isinstance(cc_or_A, CoordinateChange) else cc_or_A
    c = ceil_sqrt(frobenius2(A))
    return c * ell + max(image_lengths, default=0)
