"""DIMACS readers and writers.

Graph files use the edge format:

    c optional comments
    p edge <n> <m>
    e <u> <v>        (1-indexed, one line per edge)

CNF files use the standard format:

    p cnf <n> <m>
    <lit> <lit> ... 0

Writers emit a canonical form (sorted edges, sorted literals, no comments)
so write(read(x)) == x on canonical input.
"""

from .cnf import CnfFormula
from .graph import Graph


class DimacsError(ValueError):
    pass


def write_dimacs_graph(g):
    lines = ["p edge %d %d" % (g.n, len(g.edges))]
    for u, v in sorted(g.edges):
        lines.append("e %d %d" % (u + 1, v + 1))
    return "\n".join(lines) + "\n"


def read_dimacs_graph(text):
    n = None
    m = None
    edges = []
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        parts = line.split()
        if parts[0] == "p":
            if n is not None:
                raise DimacsError("line %d: duplicate problem line" % ln)
            if len(parts) != 4 or parts[1] != "edge":
                raise DimacsError("line %d: malformed header %r" % (ln, raw))
            try:
                n, m = int(parts[2]), int(parts[3])
            except ValueError:
                raise DimacsError("line %d: malformed header %r" % (ln, raw))
        elif parts[0] == "e":
            if n is None:
                raise DimacsError("line %d: edge before problem line" % ln)
            if len(parts) != 3:
                raise DimacsError("line %d: malformed edge %r" % (ln, raw))
            try:
                u, v = int(parts[1]) - 1, int(parts[2]) - 1
            except ValueError:
                raise DimacsError("line %d: malformed edge %r" % (ln, raw))
            if not (0 <= u < n and 0 <= v < n):
                raise DimacsError("line %d: vertex id out of range" % ln)
            if u == v:
                raise DimacsError("line %d: self-loop" % ln)
            e = (u, v) if u < v else (v, u)
            if e in edges:
                raise DimacsError("line %d: duplicate edge" % ln)
            edges.append(e)
        else:
            raise DimacsError("line %d: unknown record %r" % (ln, parts[0]))
    if n is None:
        raise DimacsError("missing problem line")
    if m != len(edges):
        raise DimacsError("header announced %d edges, found %d" % (m, len(edges)))
    return Graph(n, edges)


def write_dimacs_cnf(phi):
    lines = ["p cnf %d %d" % (phi.n, phi.m)]
    for clause in phi.clauses:
        lits = sorted(clause, key=lambda l: (abs(l), l < 0))
        lines.append(" ".join(str(l) for l in lits) + " 0")
    return "\n".join(lines) + "\n"


def read_dimacs_cnf(text):
    n = None
    m = None
    clauses = []
    pending = []
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        parts = line.split()
        if parts[0] == "p":
            if n is not None:
                raise DimacsError("line %d: duplicate problem line" % ln)
            if len(parts) != 4 or parts[1] != "cnf":
                raise DimacsError("line %d: malformed header %r" % (ln, raw))
            try:
                n, m = int(parts[2]), int(parts[3])
            except ValueError:
                raise DimacsError("line %d: malformed header %r" % (ln, raw))
            continue
        if n is None:
            raise DimacsError("line %d: clause before problem line" % ln)
        for tok in parts:
            try:
                lit = int(tok)
            except ValueError:
                raise DimacsError("line %d: bad literal %r" % (ln, tok))
            if lit == 0:
                if not pending:
                    raise DimacsError("line %d: empty clause" % ln)
                clauses.append(pending)
                pending = []
            else:
                if abs(lit) > n:
                    raise DimacsError("line %d: literal %d out of range" % (ln, lit))
                pending.append(lit)
    if n is None:
        raise DimacsError("missing problem line")
    if pending:
        raise DimacsError("unterminated clause at end of file")
    if m != len(clauses):
        raise DimacsError("header announced %d clauses, found %d" % (m, len(clauses)))
    try:
        return CnfFormula(n, clauses)
    except ValueError as exc:
        raise DimacsError(str(exc))
