"""Thin linear-programming layer used by the separation and interdiction code.

Wraps scipy's HiGHS backend with a stable dual-sign convention and adds a
cutting-plane driver with stall detection.  Duals follow the shadow-price
convention: dual[i] = d(objective)/d(rhs_i) in the problem's own sense, so a
binding >= row of a minimization problem has a nonnegative dual.
"""

import dataclasses

import numpy as np
from scipy import sparse
from scipy.optimize import linprog

TOL_FEAS = 1e-7
TOL_GAP = 1e-6
TOL_CUT = 1e-6

LESS = "<="
GREATER = ">="
EQUAL = "="

_RELATIONS = (LESS, GREATER, EQUAL)


class LpError(RuntimeError):
    """Solver failure, malformed input, or a broken numerical invariant."""


class StalledCutError(LpError):
    """A separation callback returned a cut the current point already satisfies."""


@dataclasses.dataclass(frozen=True)
class Constraint:
    coeffs: dict
    relation: str
    rhs: float
    name: str = ""

    def value(self, point):
        return sum(c * point[v] for v, c in self.coeffs.items())

    def satisfied(self, point, tol=TOL_FEAS):
        lhs = self.value(point)
        if self.relation == LESS:
            return lhs <= self.rhs + tol
        if self.relation == GREATER:
            return lhs >= self.rhs - tol
        return abs(lhs - self.rhs) <= tol


class LinearProgram:
    """A small dense-ish LP: named variables, box bounds, sparse rows."""

    def __init__(self, sense="min"):
        if sense not in ("min", "max"):
            raise LpError("sense must be 'min' or 'max', got %r" % (sense,))
        self.sense = sense
        self.bounds = {}      # var name -> (lb, ub), None means unbounded
        self.objective = {}   # var name -> coefficient
        self.constraints = []

    def add_variable(self, name, lb=0.0, ub=None):
        if name in self.bounds:
            raise LpError("duplicate variable %r" % (name,))
        self.bounds[name] = (lb, ub)

    def set_objective(self, coeffs):
        for v in coeffs:
            if v not in self.bounds:
                raise LpError("objective references unknown variable %r" % (v,))
        self.objective = dict(coeffs)

    def add_constraint(self, coeffs, relation, rhs, name=""):
        if relation not in _RELATIONS:
            raise LpError("bad relation %r" % (relation,))
        if not coeffs:
            raise LpError("empty constraint row")
        for v in coeffs:
            if v not in self.bounds:
                raise LpError("constraint references unknown variable %r" % (v,))
        self.constraints.append(Constraint(dict(coeffs), relation, float(rhs), name))

    def copy(self):
        other = LinearProgram(self.sense)
        other.bounds = dict(self.bounds)
        other.objective = dict(self.objective)
        other.constraints = list(self.constraints)
        return other


@dataclasses.dataclass(frozen=True)
class LpSolution:
    status: str                 # "optimal" | "infeasible" | "unbounded"
    objective: float            # None unless optimal
    primal: dict                # var name -> value, None unless optimal
    duals: tuple                # per-constraint shadow prices, None unless optimal
    dual_objective: float       # None unless optimal


def _scipy_status(status_code, message):
    if status_code == 0:
        return "optimal"
    if status_code == 2:
        return "infeasible"
    if status_code == 3:
        return "unbounded"
    raise LpError("LP solver failed (status %d): %s" % (status_code, message))


def solve(lp, method="highs"):
    """Solve and, at optimality, verify feasibility and strong duality.

    method is passed to scipy; use "highs-ds" when a basic optimal solution
    is required (vertex solutions have support bounded by the row count).
    """
    names = list(lp.bounds)
    index = {v: j for j, v in enumerate(names)}
    n = len(names)
    sign = 1.0 if lp.sense == "min" else -1.0

    c = np.zeros(n)
    for v, coeff in lp.objective.items():
        c[index[v]] = sign * coeff

    ub_data, ub_rix, ub_cix, b_ub, ub_rows = [], [], [], [], []
    eq_data, eq_rix, eq_cix, b_eq, eq_rows = [], [], [], [], []
    for i, con in enumerate(lp.constraints):
        if con.relation == LESS:
            flip = 1.0
        elif con.relation == GREATER:
            flip = -1.0
        else:
            flip = None
        if flip is not None:
            r = len(b_ub)
            for v, coeff in con.coeffs.items():
                ub_data.append(flip * coeff)
                ub_rix.append(r)
                ub_cix.append(index[v])
            b_ub.append(flip * con.rhs)
            ub_rows.append((i, flip))
        else:
            r = len(b_eq)
            for v, coeff in con.coeffs.items():
                eq_data.append(coeff)
                eq_rix.append(r)
                eq_cix.append(index[v])
            b_eq.append(con.rhs)
            eq_rows.append(i)

    a_ub = a_eq = None
    if b_ub:
        a_ub = sparse.csr_matrix((ub_data, (ub_rix, ub_cix)),
                                 shape=(len(b_ub), n))
    if b_eq:
        a_eq = sparse.csr_matrix((eq_data, (eq_rix, eq_cix)),
                                 shape=(len(b_eq), n))
    res = linprog(
        c,
        A_ub=a_ub,
        b_ub=np.array(b_ub) if b_ub else None,
        A_eq=a_eq,
        b_eq=np.array(b_eq) if b_eq else None,
        bounds=[lp.bounds[v] for v in names],
        method=method,
    )
    status = _scipy_status(res.status, res.message)
    if status != "optimal":
        return LpSolution(status, None, None, None, None)

    primal = {v: float(res.x[index[v]]) for v in names}

    # Shadow prices in the problem's own sense: scipy reports d(fun)/d(rhs)
    # for the minimized fun over the rows as fed in, so undo the row and
    # sense flips applied above.
    duals = [0.0] * len(lp.constraints)
    ineq_marg = res.ineqlin.marginals if ub_rows else []
    for k, (i, flip) in enumerate(ub_rows):
        duals[i] = float(sign * flip * ineq_marg[k])
    eq_marg = res.eqlin.marginals if eq_rows else []
    for k, i in enumerate(eq_rows):
        duals[i] = float(sign * eq_marg[k])

    objective = float(sign * res.fun)

    # Strong-duality check in scipy space (minimization of sign*objective).
    lower = np.array([lp.bounds[v][0] if lp.bounds[v][0] is not None else 0.0
                      for v in names])
    upper = np.array([lp.bounds[v][1] if lp.bounds[v][1] is not None else 0.0
                      for v in names])
    dual_fun = float(np.dot(lower, res.lower.marginals) +
                     np.dot(upper, res.upper.marginals))
    if b_ub:
        dual_fun += float(np.dot(b_ub, res.ineqlin.marginals))
    if b_eq:
        dual_fun += float(np.dot(b_eq, res.eqlin.marginals))
    scale = 1.0 + abs(res.fun)
    if abs(res.fun - dual_fun) > TOL_GAP * scale:
        raise LpError("strong duality violated: primal %.12g vs dual %.12g"
                      % (res.fun, dual_fun))

    for con in lp.constraints:
        if not con.satisfied(primal, TOL_FEAS * scale):
            raise LpError("returned point violates %s row (lhs %.12g, rhs %.12g)"
                          % (con.relation, con.value(primal), con.rhs))

    return LpSolution(status, objective, primal, tuple(duals),
                      float(sign * dual_fun))


@dataclasses.dataclass(frozen=True)
class CutInequality:
    """A >= cut: sum(coeffs * x) >= rhs, tagged with its origin."""

    coeffs: tuple     # sorted tuple of (var name, coefficient)
    rhs: float
    origin: object = None
    violation_at_add: float = 0.0

    @staticmethod
    def make(coeffs, rhs, origin=None):
        items = tuple(sorted((v, float(c)) for v, c in coeffs.items() if c != 0.0))
        return CutInequality(items, float(rhs), origin)

    def value(self, point):
        return sum(c * point[v] for v, c in self.coeffs)

    def violation(self, point):
        return self.rhs - self.value(point)


class CutPool:
    """Accumulates >= cuts; every stored cut was violated when it was added."""

    def __init__(self, tol_cut=TOL_CUT):
        self.tol_cut = tol_cut
        self.cuts = []
        self._seen = set()

    def __len__(self):
        return len(self.cuts)

    def add(self, cut, point):
        viol = cut.violation(point)
        if viol <= self.tol_cut:
            raise StalledCutError(
                "cut not violated by current point (violation %.3g <= tol %.3g)"
                % (viol, self.tol_cut))
        key = (cut.coeffs, round(cut.rhs, 12))
        if key in self._seen:
            raise StalledCutError("duplicate cut requested")
        self._seen.add(key)
        self.cuts.append(dataclasses.replace(cut, violation_at_add=float(viol)))

    def install(self, lp):
        """Append all pooled cuts to a copy of lp and return it."""
        out = lp.copy()
        for k, cut in enumerate(self.cuts):
            out.add_constraint(dict(cut.coeffs), GREATER, cut.rhs,
                               name="cut%d" % k)
        return out


def cutting_plane(lp, callback, max_rounds=200, tol_cut=TOL_CUT, method="highs"):
    """Drive lp to feasibility against a separation callback.

    callback(solution) returns None when the point is acceptable, else a
    CutInequality that the point must violate by more than tol_cut.  Returns
    (solution, pool, rounds).  Raises StalledCutError if the callback stalls
    and LpError if max_rounds is exhausted or the master LP breaks; either
    LpError carries the cuts pooled so far in its `cuts` attribute.
    """
    pool = CutPool(tol_cut)
    prev_obj = None
    for rounds in range(1, max_rounds + 1):
        sol = solve(pool.install(lp))
        if sol.status != "optimal":
            err = LpError("master LP is %s after %d cut(s)"
                          % (sol.status, len(pool)))
            err.cuts = tuple(pool.cuts)
            raise err
        if prev_obj is not None:
            slack = TOL_GAP * (1.0 + abs(prev_obj))
            if lp.sense == "min" and sol.objective < prev_obj - slack:
                raise LpError("master objective decreased: %.12g -> %.12g"
                              % (prev_obj, sol.objective))
            if lp.sense == "max" and sol.objective > prev_obj + slack:
                raise LpError("master objective increased: %.12g -> %.12g"
                              % (prev_obj, sol.objective))
        prev_obj = sol.objective
        cut = callback(sol)
        if cut is None:
            scale = 1.0 + abs(sol.objective)
            for stored in pool.cuts:
                if stored.violation(sol.primal) > TOL_FEAS * scale:
                    raise LpError("final point violates a pooled cut")
            return sol, pool, rounds
        pool.add(cut, sol.primal)
    err = LpError("no feasible point within %d cutting-plane rounds" % max_rounds)
    err.cuts = tuple(pool.cuts)
    raise err
