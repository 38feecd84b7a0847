"""Undirected simple graphs with dense integer vertex ids, plus the subgraph
machinery the interdiction recursion works on.

Graphs are immutable after construction so recursive algorithms can share
them freely. Edges are stored as sorted 2-tuples.
"""

from collections import deque


def edge_key(u, v):
    """Canonical (min, max) form of an undirected edge."""
    if u == v:
        raise ValueError("self-loop (%r, %r)" % (u, v))
    return (u, v) if u < v else (v, u)


class Graph:
    """Undirected simple graph on vertices 0..n-1.

    vertex_labels, when present, is a dict vertex -> role string. Factor
    graphs use the labels "variable" and "clause".
    """

    __slots__ = ("n", "edges", "adj", "vertex_labels")

    def __init__(self, n, edges, vertex_labels=None):
        if n < 0:
            raise ValueError("negative vertex count")
        self.n = n
        canon = set()
        for u, v in edges:
            e = edge_key(u, v)
            if not (0 <= e[0] and e[1] < n):
                raise ValueError("edge %r out of range [0, %d)" % ((u, v), n))
            canon.add(e)
        self.edges = frozenset(canon)
        adj = {v: set() for v in range(n)}
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        self.adj = {v: frozenset(nb) for v, nb in adj.items()}
        if vertex_labels is not None:
            vertex_labels = dict(vertex_labels)
            for v in vertex_labels:
                if not 0 <= v < n:
                    raise ValueError("label for unknown vertex %r" % (v,))
        self.vertex_labels = vertex_labels

    @property
    def vertices(self):
        return range(self.n)

    def neighbors(self, v):
        return self.adj[v]

    def degree(self, v):
        return len(self.adj[v])

    def has_edge(self, u, v):
        return edge_key(u, v) in self.edges

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return (self.n == other.n and self.edges == other.edges
                and self.vertex_labels == other.vertex_labels)

    def __hash__(self):
        return hash((self.n, self.edges))

    def __repr__(self):
        return "Graph(n=%d, m=%d)" % (self.n, len(self.edges))


class Subgraph:
    """A vertex/edge subset of a parent Graph.

    Partition phases extend subgraphs with zombie vertices: fresh ids above
    the parent's range, attached by a single zombie edge that stands in for
    a removed original edge. zombie_edges holds (zombie_id, attach_vertex,
    original_edge) records; edge_origin maps any live edge to the parent
    edge it represents (identity for real edges).
    """

    __slots__ = ("parent", "vertices", "edges", "zombie_edges", "edge_origin",
                 "_adj")

    def __init__(self, parent, vertices, edges, zombie_edges=(), edge_origin=None):
        self.parent = parent
        self.vertices = frozenset(vertices)
        self.edges = frozenset(edge_key(u, v) for u, v in edges)
        self.zombie_edges = frozenset(zombie_edges)
        zombie_ids = {z for z, _a, _e in self.zombie_edges}
        for u, v in self.edges:
            if u not in self.vertices or v not in self.vertices:
                raise ValueError("edge %r leaves the vertex set" % ((u, v),))
        for v in self.vertices:
            if v >= parent.n and v not in zombie_ids:
                raise ValueError("vertex %d outside parent range and not a zombie" % v)
        origin = {}
        if edge_origin:
            for e, oe in edge_origin.items():
                origin[edge_key(*e)] = edge_key(*oe)
        for e in self.edges:
            oe = origin.get(e, e)
            if oe not in parent.edges:
                raise ValueError("edge %r has no origin in the parent graph" % (e,))
            origin[e] = oe
        self.edge_origin = origin
        self._adj = None

    @classmethod
    def full(cls, graph):
        return cls(graph, range(graph.n), graph.edges)

    @property
    def adj(self):
        if self._adj is None:
            adj = {v: set() for v in self.vertices}
            for u, v in self.edges:
                adj[u].add(v)
                adj[v].add(u)
            self._adj = {v: frozenset(nb) for v, nb in adj.items()}
        return self._adj

    def neighbors(self, v):
        return self.adj[v]

    def origin_of(self, e):
        return self.edge_origin[edge_key(*e)]

    def __repr__(self):
        return "Subgraph(n=%d, m=%d, zombies=%d)" % (
            len(self.vertices), len(self.edges), len(self.zombie_edges))


def _adjacency_of(g):
    if isinstance(g, Graph):
        return {v: g.adj[v] for v in range(g.n)}
    return g.adj


def connected_components(g):
    """Connected components of a Graph or Subgraph, as a list of frozensets
    ordered by smallest member."""
    adj = _adjacency_of(g)
    seen = set()
    comps = []
    for start in sorted(adj):
        if start in seen:
            continue
        comp = {start}
        queue = deque([start])
        seen.add(start)
        while queue:
            u = queue.popleft()
            for w in adj[u]:
                if w not in seen:
                    seen.add(w)
                    comp.add(w)
                    queue.append(w)
        comps.append(frozenset(comp))
    return comps


def boundary_subgraph(h, component, deleted):
    """Subgraph of h made of the edges with at least one endpoint in
    component, minus the deleted edges. Vertices are the endpoints of the
    kept edges, so component vertices with no surviving edge are dropped.
    """
    component = frozenset(component)
    if not component <= h.vertices:
        raise ValueError("component is not contained in the subgraph")
    deleted = {edge_key(*e) for e in deleted}
    kept = [e for e in h.edges
            if e not in deleted and (e[0] in component or e[1] in component)]
    verts = set()
    for u, v in kept:
        verts.add(u)
        verts.add(v)
    origin = {e: h.edge_origin[e] for e in kept}
    return Subgraph(h.parent, verts, kept, edge_origin=origin)


def build_factor_graph(phi):
    """Bipartite incidence graph of a CNF formula: one vertex per variable
    (ids 0..n-1, label "variable"), one per clause (ids n..n+m-1, label
    "clause"), and an edge whenever the variable occurs in the clause."""
    n = phi.n
    labels = {v: "variable" for v in range(n)}
    edges = []
    for ci, clause in enumerate(phi.clauses):
        cv = n + ci
        labels[cv] = "clause"
        for lit in sorted(clause):
            var = abs(lit) - 1
            if not 0 <= var < n:
                raise ValueError("clause %d references undeclared variable %d"
                                 % (ci, var + 1))
            edges.append((var, cv))
    return Graph(n + len(phi.clauses), edges, vertex_labels=labels)
