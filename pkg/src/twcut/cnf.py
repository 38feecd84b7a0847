"""CNF formulas with DIMACS-style literals.

A literal is a nonzero int: +(v+1) for variable v, -(v+1) for its negation.
Clauses are frozensets of literals.
"""


class CnfFormula:

    __slots__ = ("n", "clauses")

    def __init__(self, n, clauses):
        if n < 0:
            raise ValueError("negative variable count")
        self.n = n
        canon = []
        for ci, clause in enumerate(clauses):
            cl = frozenset(int(l) for l in clause)
            if not cl:
                raise ValueError("clause %d is empty" % ci)
            for lit in cl:
                if lit == 0 or abs(lit) > n:
                    raise ValueError("clause %d has bad literal %d" % (ci, lit))
                if -lit in cl:
                    raise ValueError(
                        "clause %d contains variable %d and its negation"
                        % (ci, abs(lit)))
            canon.append(cl)
        self.clauses = tuple(canon)

    @property
    def m(self):
        return len(self.clauses)

    @property
    def k(self):
        """Maximum clause arity."""
        return max((len(c) for c in self.clauses), default=0)

    def variables_of(self, ci):
        return frozenset(abs(l) - 1 for l in self.clauses[ci])

    def __eq__(self, other):
        if not isinstance(other, CnfFormula):
            return NotImplemented
        return self.n == other.n and self.clauses == other.clauses

    def __repr__(self):
        return "CnfFormula(n=%d, m=%d, k=%d)" % (self.n, self.m, self.k)


def count_satisfied(phi, assignment):
    """Number of satisfied clauses under assignment, a sequence of bools
    indexed by variable."""
    sat = 0
    for clause in phi.clauses:
        for lit in clause:
            value = assignment[abs(lit) - 1]
            if (lit > 0) == bool(value):
                sat += 1
                break
    return sat
