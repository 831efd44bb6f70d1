"""Exact rational linear programming by the two-phase revised simplex method.

Solves  min c.x  subject to  A x = b, x >= 0  with all data in mpq.  Pricing
uses Dantzig's most-negative rule for speed and falls back to Bland's rule
after an iteration threshold, which restores the termination guarantee; the
basis inverse is maintained explicitly as a dense m x m rational matrix (m
stays small here: it equals the ambient dimension for gauge programs).

Columns may be supplied as a materialized list or through a callback; gauge
programs over a large generator list materialize their +-g_i columns once
per solve, which keeps the per-iteration pricing loop tight.
"""

from __future__ import annotations

from gmpy2 import mpq

QZERO = mpq(0)
QONE = mpq(1)

BLAND_SWITCH = 300  # iterations of Dantzig pricing before Bland takes over


class LPStatus:
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


class LPResult:
    __slots__ = ("status", "objective", "solution", "duals")

    def __init__(self, status, objective=None, solution=None, duals=None):
        self.status = status
        self.objective = objective
        self.solution = solution  # dict column index -> value, basic only
        self.duals = duals  # list of m rationals, y = c_B B^{-1}

    def __repr__(self):
        return "LPResult(%s, obj=%s)" % (self.status, self.objective)


def _dot(u, v):
    s = QZERO
    for a, b in zip(u, v):
        if a and b:
            s += a * b
    return s


class _Simplex:
    """Revised simplex state over columns 0..n-1 plus artificials n..n+m-1."""

    def __init__(self, m, n, columns, b):
        self.m = m
        self.n = n
        # Normalize to b >= 0 by flipping rows.
        self.row_sign = [QONE if bi >= 0 else -QONE for bi in b]
        self.b = [abs(bi) for bi in b]
        flip = any(s < 0 for s in self.row_sign)
        if flip:
            self.cols = [tuple(self.row_sign[i] * c[i] for i in range(m))
                         for c in columns]
        else:
            self.cols = [tuple(c) for c in columns]
        # Start from the all-artificial basis; B^{-1} = I.
        self.basis = [n + i for i in range(m)]
        self.binv = [[QONE if i == j else QZERO for j in range(m)] for i in range(m)]
        self.xb = list(self.b)

    def col(self, j):
        if j >= self.n:
            i = j - self.n
            return tuple(QONE if k == i else QZERO for k in range(self.m))
        return self.cols[j]

    def pivot(self, enter_col_vec, enter_j, leave_row):
        m = self.m
        piv = enter_col_vec[leave_row]
        binv = self.binv
        inv_piv = 1 / piv
        binv[leave_row] = [v * inv_piv for v in binv[leave_row]]
        xb = self.xb
        xb[leave_row] = xb[leave_row] * inv_piv
        for i in range(m):
            if i == leave_row:
                continue
            f = enter_col_vec[i]
            if f:
                binv[i] = [a - f * bq for a, bq in zip(binv[i], binv[leave_row])]
                xb[i] = xb[i] - f * xb[leave_row]
        self.basis[leave_row] = enter_j

    def solve_phase(self, cost):
        """Run simplex to optimality for the given cost function.

        cost(j) gives the objective coefficient of column j (including
        artificials).  Returns the final objective value, or None when the
        problem is unbounded below.
        """
        m, n = self.m, self.n
        iters = 0
        while True:
            iters += 1
            bland = iters > BLAND_SWITCH
            basic = set(self.basis)
            cb = [cost(j) for j in self.basis]
            y = [_dot(cb, [self.binv[i][k] for i in range(m)]) for k in range(m)]
            enter = -1
            best_rj = QZERO
            for j in range(n):
                if j in basic:
                    continue
                rj = cost(j) - _dot(y, self.cols[j])
                if rj < best_rj:
                    enter = j
                    best_rj = rj
                    if bland:
                        break  # Bland: first improving index
            if enter < 0:
                return _dot(cb, self.xb)
            a = self.col(enter)
            d = [_dot(self.binv[i], a) for i in range(m)]
            # Ratio test with Bland tie-breaking (lowest basis index).
            leave = -1
            best = None
            for i in range(m):
                # Basic artificials sitting at zero leave first regardless of
                # direction so they cannot be driven positive in phase 2.
                if self.basis[i] >= n and self.xb[i] == 0 and d[i] != 0:
                    leave = i
                    best = QZERO
                    break
                if d[i] > 0:
                    r = self.xb[i] / d[i]
                    if best is None or r < best or (r == best and self.basis[i] < self.basis[leave]):
                        best = r
                        leave = i
            if leave < 0:
                return None  # unbounded
            self.pivot(d, enter, leave)


def solve_eq_lp(m, n, column, b, cost_vec=None):
    """min c.x s.t. A x = b, x >= 0 with A given column-wise.

    column: list of n columns, or a callable j -> column.
    cost_vec: callable j -> mpq, default all-ones (the gauge objective).
    Returns an LPResult; solution maps original column indices to values.
    """
    if cost_vec is None:
        cost_vec = lambda j: QONE
    columns = column if isinstance(column, list) else [column(j) for j in range(n)]
    sx = _Simplex(m, n, columns, b)

    def phase1_cost(j):
        return QONE if j >= n else QZERO

    art_obj = sx.solve_phase(phase1_cost)
    if art_obj is None or art_obj > 0:
        return LPResult(LPStatus.INFEASIBLE)

    def phase2_cost(j):
        return QZERO if j >= n else cost_vec(j)

    obj = sx.solve_phase(phase2_cost)
    if obj is None:
        return LPResult(LPStatus.UNBOUNDED)
    solution = {}
    for i, j in enumerate(sx.basis):
        if j < n and sx.xb[i] != 0:
            solution[j] = sx.xb[i]
    cb = [phase2_cost(j) for j in sx.basis]
    y = [_dot(cb, [sx.binv[i][k] for i in range(sx.m)]) for k in range(sx.m)]
    # Undo the row sign normalization so duals refer to the original rows.
    duals = [y[i] * sx.row_sign[i] for i in range(sx.m)]
    return LPResult(LPStatus.OPTIMAL, obj, solution, duals)


def gauge_lp(generators, x):
    """Minkowski gauge of co({+-g}) at x: min sum(lambda) over signed columns.

    generators: list of coordinate tuples (mpq).  Returns (value, combo) where
    combo maps generator index -> signed coefficient, or (None, None) when x
    is outside the span.
    """
    d = len(x)
    n = 2 * len(generators)
    columns = []
    for g in generators:
        columns.append(tuple(g))
        columns.append(tuple(-v for v in g))

    res = solve_eq_lp(d, n, columns, list(x))
    if res.status != LPStatus.OPTIMAL:
        return None, None
    combo = {}
    for j, v in res.solution.items():
        i = j // 2
        combo[i] = combo.get(i, QZERO) + (v if j % 2 == 0 else -v)
    return res.objective, combo
