"""Exact-rational linear programming over fractional isomorphism polytopes.

The polytope ds(G, H) consists of doubly stochastic matrices X with AX = XB,
restricted to blocks of the common stable coloring (any fractional
isomorphism is block-diagonal there, so the restriction loses nothing).
Feasibility and extreme points are computed with an exact simplex over
integers: the tableau is kept as an integer matrix with a single
denominator, updated fraction-free, and Bland's rule guarantees
termination. Every answer is exact.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .graphs import ColoredGraph, disjoint_union
from .refinement import stable_partition


class RatMatrix:
    """Dense matrix of Fractions."""

    __slots__ = ("rows", "cols", "data")

    def __init__(self, data):
        self.data = tuple(tuple(Fraction(x) for x in row) for row in data)
        self.rows = len(self.data)
        self.cols = len(self.data[0]) if self.data else 0
        if any(len(row) != self.cols for row in self.data):
            raise ValueError("ragged matrix")

    @classmethod
    def zeros(cls, r, c):
        return cls([[0] * c for _ in range(r)])

    @classmethod
    def identity(cls, n):
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def from_permutation(cls, perm):
        n = len(perm)
        return cls([[1 if perm[i] == j else 0 for j in range(n)] for i in range(n)])

    def __getitem__(self, ij):
        i, j = ij
        return self.data[i][j]

    def __eq__(self, other):
        if not isinstance(other, RatMatrix):
            return NotImplemented
        return self.data == other.data

    def __hash__(self):
        return hash(self.data)

    def matmul(self, other: "RatMatrix") -> "RatMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        ot = list(zip(*other.data))
        return RatMatrix([[sum(a * b for a, b in zip(row, col)) for col in ot]
                          for row in self.data])

    def scaled(self, c) -> "RatMatrix":
        c = Fraction(c)
        return RatMatrix([[c * x for x in row] for row in self.data])

    def add(self, other: "RatMatrix") -> "RatMatrix":
        return RatMatrix([[a + b for a, b in zip(r1, r2)]
                          for r1, r2 in zip(self.data, other.data)])

    @property
    def is_integral(self) -> bool:
        return all(x.denominator == 1 for row in self.data for x in row)

    @property
    def is_doubly_stochastic(self) -> bool:
        if self.rows != self.cols:
            return False
        one = Fraction(1)
        for row in self.data:
            if any(x < 0 for x in row) or sum(row) != one:
                return False
        for j in range(self.cols):
            if sum(row[j] for row in self.data) != one:
                return False
        return True

    def format_grid(self) -> str:
        cells = [[str(x) for x in row] for row in self.data]
        width = max((len(c) for row in cells for c in row), default=1)
        return "\n".join(" ".join(c.rjust(width) for c in row) for row in cells)

    def __repr__(self):
        return f"RatMatrix({self.rows}x{self.cols})"


def adjacency_matrix(g: ColoredGraph) -> RatMatrix:
    m = [[0] * g.n for _ in range(g.n)]
    for u, v, w in g.edges():
        m[u][v] = w
        m[v][u] = w
    return RatMatrix(m)


# -- exact simplex -------------------------------------------------------------


class _Infeasible(Exception):
    pass


def _pivot(mat, d, p, j):
    """Fraction-free pivot: true tableau is mat/d; returns the new denominator."""
    piv = mat[p][j]
    rowp = mat[p]
    for k in range(len(mat)):
        if k == p:
            continue
        rowk = mat[k]
        f = rowk[j]
        if f:
            for l in range(len(rowk)):
                t = rowk[l] * piv - f * rowp[l]
                q, r = divmod(t, d)
                if r:
                    raise AssertionError("fraction-free pivot lost exactness")
                rowk[l] = q
        elif piv != d:
            for l in range(len(rowk)):
                t = rowk[l] * piv
                q, r = divmod(t, d)
                if r:
                    raise AssertionError("fraction-free pivot lost exactness")
                rowk[l] = q
    if piv < 0:
        for row in mat:
            for l in range(len(row)):
                row[l] = -row[l]
        return -piv
    return piv


def _bland_min(mat, d, basis, ncols, allowed_cols):
    """Bland-rule minimization on the prepared tableau; the last row holds the
    reduced costs. Returns the final denominator."""
    nrows = len(mat) - 1
    rhs = ncols
    while True:
        cost = mat[-1]
        enter = -1
        for j in allowed_cols:
            if cost[j] < 0:
                enter = j
                break
        if enter < 0:
            return d
        leave = -1
        best_num = best_den = None
        for i in range(nrows):
            a = mat[i][enter]
            if a > 0:
                num, den = mat[i][rhs], a
                if leave < 0:
                    better = True
                else:
                    cmp = num * best_den - best_num * den
                    better = cmp < 0 or (cmp == 0 and basis[i] < basis[leave])
                if better:
                    leave, best_num, best_den = i, num, den
        if leave < 0:
            raise AssertionError("LP unbounded; fractional isomorphism polytopes are bounded")
        d = _pivot(mat, d, leave, enter)
        basis[leave] = enter


def _solve_lp(n_vars, rows, objective):
    """Maximize an integer objective over {x >= 0, integer equality rows}.

    Returns a list of Fractions (an optimal basic feasible solution, hence a
    vertex of the feasible polytope) or raises _Infeasible. With
    objective=None only feasibility is decided (returns a feasible vertex).
    """
    nr = len(rows)
    ncols = n_vars + nr  # structural + artificial
    mat = []
    for i, (coeffs, rhs) in enumerate(rows):
        sign = 1 if rhs >= 0 else -1
        row = [0] * (ncols + 1)
        for j, c in coeffs.items():
            row[j] = sign * c
        row[n_vars + i] = 1
        row[ncols] = sign * rhs
        mat.append(row)
    basis = [n_vars + i for i in range(nr)]
    # phase 1: minimize the sum of artificials
    cost = [0] * (ncols + 1)
    for j in range(ncols + 1):
        s = sum(mat[i][j] for i in range(nr))
        cost[j] = (1 if n_vars <= j < ncols else 0) - s
    mat.append(cost)
    d = _bland_min(mat, 1, basis, ncols, range(ncols))
    if mat[-1][ncols] != 0:  # residual phase-1 objective (stored negated) nonzero
        raise _Infeasible
    # drive leftover artificials out of the basis or drop redundant rows
    drop = []
    for i in range(nr):
        if basis[i] >= n_vars:
            enter = next((j for j in range(n_vars) if mat[i][j] != 0), -1)
            if enter < 0:
                drop.append(i)
            else:
                d = _pivot(mat, d, i, enter)
                basis[i] = enter
    if drop:
        mat = [row for i, row in enumerate(mat) if i not in set(drop)]
        basis = [b for i, b in enumerate(basis) if i not in set(drop)]
        nr = len(basis)
    # phase 2
    if objective is not None:
        cost = [0] * (ncols + 1)
        for j in range(n_vars):
            cost[j] = -objective[j] * d
        for i in range(nr):
            cj = -objective[basis[i]] if basis[i] < n_vars else 0
            if cj:
                for l in range(ncols + 1):
                    cost[l] -= cj * mat[i][l]
        mat[-1] = cost
        d = _bland_min(mat, d, basis, ncols, range(n_vars))
    x = [Fraction(0)] * n_vars
    for i in range(nr):
        if basis[i] < n_vars:
            x[basis[i]] = Fraction(mat[i][ncols], d)
    return x


# -- fractional isomorphism polytopes -----------------------------------------


@dataclass(frozen=True)
class FracIsoPolytope:
    """Equality system whose feasible set (with x >= 0) is ds(G, H)."""

    n: int
    pairs: tuple  # variable index -> (u in G, v in H)
    index: dict  # (u, v) -> variable index
    rows: tuple  # (coeff dict, rhs) integer equality rows

    @property
    def num_vars(self) -> int:
        return len(self.pairs)

    def matrix_from_solution(self, x) -> RatMatrix:
        m = [[Fraction(0)] * self.n for _ in range(self.n)]
        for idx, (u, v) in enumerate(self.pairs):
            m[u][v] = x[idx]
        return RatMatrix(m)


def build_polytope(g: ColoredGraph, h: ColoredGraph | None = None) -> FracIsoPolytope:
    """Constraint system for ds(G, H) (or ds(G) when h is omitted), with
    variables only for vertex pairs in the same class of the stable coloring
    of the disjoint union."""
    if h is None:
        h = g
    if g.n != h.n:
        raise ValueError(f"graphs have different sizes ({g.n} vs {h.n})")
    if not (g.is_simple and h.is_simple):
        raise ValueError("fractional isomorphism polytopes are defined for simple graphs")
    n = g.n
    u_struct = disjoint_union(g, h)
    part, _ = stable_partition(u_struct)
    by_class: dict = {}
    for v in range(2 * n):
        by_class.setdefault(part.class_of[v], ([], []))[0 if v < n else 1].append(v)
    pairs = []
    index = {}
    for cid in sorted(by_class):
        left, right = by_class[cid]
        for u in left:
            for w in right:
                index[(u, w - n)] = len(pairs)
                pairs.append((u, w - n))
    rows = []
    for u in range(n):
        coeffs = {index[(u, v)]: 1 for v in range(n) if (u, v) in index}
        rows.append((coeffs, 1))
    for v in range(n):
        coeffs = {index[(u, v)]: 1 for u in range(n) if (u, v) in index}
        rows.append((coeffs, 1))
    gadj = g.adj
    hadj = h.adj
    for u in range(n):
        for v in range(n):
            coeffs: dict = {}
            for a, mw in gadj[u]:
                idx = index.get((a, v))
                if idx is not None:
                    coeffs[idx] = coeffs.get(idx, 0) + mw
            for b, mw in hadj[v]:
                idx = index.get((u, b))
                if idx is not None:
                    coeffs[idx] = coeffs.get(idx, 0) - mw
            coeffs = {k: c for k, c in coeffs.items() if c}
            if coeffs:
                rows.append((coeffs, 0))
    return FracIsoPolytope(n, tuple(pairs), index, tuple(rows))


def is_fractionally_isomorphic(g: ColoredGraph, h: ColoredGraph) -> bool:
    """Exact phase-1 feasibility of ds(G, H)."""
    if g.n != h.n:
        return False
    poly = build_polytope(g, h)
    try:
        _solve_lp(poly.num_vars, list(poly.rows), None)
    except _Infeasible:
        return False
    return True


def extreme_point(poly: FracIsoPolytope, objective_seed: int) -> RatMatrix | None:
    """A vertex of the polytope optimizing a seeded random integral objective,
    or None when the polytope is empty."""
    rng = random.Random(objective_seed)
    objective = [rng.randint(-1000, 1000) for _ in range(poly.num_vars)]
    return extreme_point_for_objective(poly, objective)


def extreme_point_for_objective(poly: FracIsoPolytope, objective) -> RatMatrix | None:
    if len(objective) != poly.num_vars:
        raise ValueError("objective length mismatch")
    try:
        x = _solve_lp(poly.num_vars, list(poly.rows), list(objective))
    except _Infeasible:
        return None
    return poly.matrix_from_solution(x)


@dataclass(frozen=True)
class ProbeResult:
    """Outcome of the one-sided compactness probe. `non_compact=False` means no
    counterexample was found, which is not a proof of compactness."""

    non_compact: bool
    witness: RatMatrix | None
    trial: int | None
    trials_run: int


def verify_fractional_automorphism(g: ColoredGraph, x: RatMatrix) -> bool:
    a = adjacency_matrix(g)
    return x.is_doubly_stochastic and a.matmul(x) == x.matmul(a)


def compact_probe(g: ColoredGraph, trials: int = 50, seed: int = 0) -> ProbeResult:
    """Search ds(G) for a non-integral vertex with seeded random objectives."""
    poly = build_polytope(g)
    for t in range(trials):
        x = extreme_point(poly, seed + t)
        if x is None:
            raise AssertionError("ds(G) cannot be empty: the identity is feasible")
        if not x.is_integral:
            if not verify_fractional_automorphism(g, x):
                raise AssertionError("simplex returned an invalid vertex")
            return ProbeResult(True, x, t, t + 1)
    return ProbeResult(False, None, None, trials)


# -- Birkhoff-von Neumann decomposition ----------------------------------------


def _perfect_matching_on_support(rows, n):
    """Perfect matching using only positive entries, by augmenting paths."""
    match_col = [-1] * n  # column -> row

    def try_row(r, seen):
        for c in range(n):
            if rows[r][c] > 0 and c not in seen:
                seen.add(c)
                if match_col[c] < 0 or try_row(match_col[c], seen):
                    match_col[c] = r
                    return True
        return False

    for r in range(n):
        if not try_row(r, set()):
            return None
    perm = [-1] * n
    for c, r in enumerate(match_col):
        perm[r] = c
    return perm


def birkhoff_decompose(x: RatMatrix):
    """Write a doubly stochastic matrix as a convex combination of permutation
    matrices: returns [(coefficient, permutation tuple)], at most (n-1)^2 + 1
    terms, summing exactly to x."""
    if not x.is_doubly_stochastic:
        raise ValueError("input is not doubly stochastic")
    n = x.rows
    work = [list(row) for row in x.data]
    out = []
    remaining = Fraction(1)
    while remaining > 0:
        perm = _perfect_matching_on_support(work, n)
        if perm is None:
            raise AssertionError("scaled doubly stochastic matrix lost its matching")
        theta = min(work[r][perm[r]] for r in range(n))
        out.append((theta, tuple(perm)))
        for r in range(n):
            work[r][perm[r]] -= theta
        remaining -= theta
    return out
