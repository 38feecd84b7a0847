"""Tree decompositions: validation, width, nice form, and assembly from
the interdiction recursion."""

from collections import namedtuple

ValidationReport = namedtuple("ValidationReport", ["ok", "violation"])


class TreeDecomposition:
    """Rooted tree of bags.

    parents maps node id -> parent node id (None for the root, exactly
    one). bags maps node id -> frozenset of vertex ids.
    """

    __slots__ = ("parents", "bags")

    def __init__(self, parents, bags):
        parents = dict(parents)
        bags = {node: frozenset(bag) for node, bag in bags.items()}
        if not parents:
            raise ValueError("decomposition needs at least one node")
        if set(parents) != set(bags):
            raise ValueError("parents and bags disagree on the node set")
        roots = [node for node, p in parents.items() if p is None]
        if len(roots) != 1:
            raise ValueError("expected exactly one root, got %d" % len(roots))
        for node, p in parents.items():
            if p is not None and p not in parents:
                raise ValueError("node %r has unknown parent %r" % (node, p))
        limit = len(parents)
        for node in parents:
            steps = 0
            cur = node
            while cur is not None:
                cur = parents[cur]
                steps += 1
                if steps > limit:
                    raise ValueError("parent links contain a cycle")
        self.parents = parents
        self.bags = bags

    @property
    def nodes(self):
        return sorted(self.parents)

    @property
    def root(self):
        for node, p in self.parents.items():
            if p is None:
                return node
        raise AssertionError("unreachable")

    def children(self):
        out = {node: [] for node in self.parents}
        for node, p in self.parents.items():
            if p is not None:
                out[p].append(node)
        for kids in out.values():
            kids.sort()
        return out

    def width(self):
        return max(len(bag) for bag in self.bags.values()) - 1

    def __eq__(self, other):
        if not isinstance(other, TreeDecomposition):
            return NotImplemented
        return self.parents == other.parents and self.bags == other.bags

    def __repr__(self):
        return "TreeDecomposition(%d nodes, width %d)" % (
            len(self.parents), self.width())

    def to_json_dict(self):
        return {
            "nodes": self.nodes,
            "parents": {str(n): self.parents[n] for n in self.nodes},
            "bags": {str(n): sorted(self.bags[n]) for n in self.nodes},
        }

    @classmethod
    def from_json_dict(cls, d):
        parents = {int(k): v for k, v in d["parents"].items()}
        bags = {int(k): frozenset(v) for k, v in d["bags"].items()}
        return cls(parents, bags)


class NiceTreeDecomposition(TreeDecomposition):
    """Tree decomposition where every node is a leaf, introduce(v),
    forget(v), or join, with the usual bag constraints. make_nice
    additionally guarantees empty bags at the leaves and the root."""

    __slots__ = ("kinds",)

    def __init__(self, parents, bags, kinds):
        super().__init__(parents, bags)
        kinds = {node: tuple(kind) for node, kind in kinds.items()}
        if set(kinds) != set(self.parents):
            raise ValueError("kinds and nodes disagree")
        kids = self.children()
        for node, kind in kinds.items():
            bag = self.bags[node]
            c = kids[node]
            tag = kind[0]
            if tag == "leaf":
                if c:
                    raise ValueError("leaf node %r has children" % (node,))
            elif tag == "introduce":
                v = kind[1]
                if len(c) != 1 or v in self.bags[c[0]] or \
                        bag != self.bags[c[0]] | {v}:
                    raise ValueError("bad introduce at node %r" % (node,))
            elif tag == "forget":
                v = kind[1]
                if len(c) != 1 or v not in self.bags[c[0]] or \
                        bag != self.bags[c[0]] - {v}:
                    raise ValueError("bad forget at node %r" % (node,))
            elif tag == "join":
                if len(c) != 2 or any(self.bags[x] != bag for x in c):
                    raise ValueError("bad join at node %r" % (node,))
            else:
                raise ValueError("unknown node kind %r" % (tag,))
        self.kinds = kinds

    def to_json_dict(self):
        d = super().to_json_dict()
        d["kinds"] = {str(n): list(self.kinds[n]) for n in self.nodes}
        return d

    @classmethod
    def from_json_dict(cls, d):
        parents = {int(k): v for k, v in d["parents"].items()}
        bags = {int(k): frozenset(v) for k, v in d["bags"].items()}
        kinds = {int(k): tuple(v) for k, v in d["kinds"].items()}
        return cls(parents, bags, kinds)


def width(t):
    """Width of a decomposition: max bag size minus one."""
    return t.width()


def validate(t, g):
    """Check t against graph g. Returns ValidationReport(ok, violation)
    where violation names the first failed requirement, or None."""
    n = g.n
    for node in t.nodes:
        for v in sorted(t.bags[node]):
            if not (0 <= v < n):
                return ValidationReport(
                    False, "bag of node %r contains unknown vertex %r"
                    % (node, v))
    occur = {v: [] for v in range(n)}
    for node in t.nodes:
        for v in t.bags[node]:
            occur[v].append(node)
    for v in range(n):
        if not occur[v]:
            return ValidationReport(False,
                                    "vertex %d appears in no bag" % v)
    for (u, v) in sorted(g.edges):
        if not any(u in t.bags[node] and v in t.bags[node]
                   for node in occur[u]):
            return ValidationReport(
                False, "edge (%d, %d) not covered by any bag" % (u, v))
    kids = t.children()
    for v in range(n):
        nodes_v = set(occur[v])
        start = occur[v][0]
        seen = {start}
        stack = [start]
        while stack:
            cur = stack.pop()
            for nxt in kids[cur] + [t.parents[cur]]:
                if nxt in nodes_v and nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
        if seen != nodes_v:
            return ValidationReport(
                False,
                "bags containing vertex %d do not form a connected subtree"
                % v)
    return ValidationReport(True, None)


def greedy_decomposition(g):
    """Heuristic decomposition from a min-fill elimination order.

    Eliminates the vertex whose remaining neighborhood needs the fewest
    fill edges (lowest id on ties), bags each vertex with its later
    neighbors in the fill graph, and hangs the bag off the first
    eliminated later neighbor. Always valid; the width is only an upper
    bound on the treewidth.
    """
    n = g.n
    if n == 0:
        return TreeDecomposition({0: None}, {0: frozenset()})
    fill = {v: set(g.adj[v]) for v in range(n)}
    alive = set(range(n))
    order = []
    while alive:
        best = None
        for v in sorted(alive):
            nbrs = [u for u in fill[v] if u in alive]
            missing = sum(1 for i, a in enumerate(nbrs)
                          for b in nbrs[i + 1:] if b not in fill[a])
            if best is None or missing < best[0]:
                best = (missing, v, nbrs)
        _, v, nbrs = best
        for i, a in enumerate(nbrs):
            for b in nbrs[i + 1:]:
                fill[a].add(b)
                fill[b].add(a)
        order.append(v)
        alive.discard(v)
    pos = {v: i for i, v in enumerate(order)}
    parents = {}
    bags = {}
    for i, v in enumerate(order):
        later = sorted(u for u in fill[v] if pos[u] > i)
        bags[i] = frozenset([v] + later)
        if later:
            parents[i] = pos[min(later, key=lambda u: pos[u])]
        elif i + 1 < n:
            parents[i] = i + 1
        else:
            parents[i] = None
    return TreeDecomposition(parents, bags)


class RecursionTrace:
    """One node of the interdiction recursion tree.

    subgraph is the piece the call worked on, s_set the boundary vertices
    it was asked to keep separated. Internal nodes carry the separator
    vertices x_set, the deleted edges d_set, and one child trace per
    recursive call; leaves carry neither.
    """

    __slots__ = ("subgraph", "s_set", "kind", "x_set", "d_set", "children")

    def __init__(self, subgraph, s_set, kind, x_set=frozenset(),
                 d_set=frozenset(), children=()):
        if kind not in ("leaf", "internal"):
            raise ValueError("kind must be 'leaf' or 'internal'")
        s_set = frozenset(s_set)
        if not s_set <= subgraph.vertices:
            raise ValueError("s_set not contained in subgraph vertices")
        if kind == "leaf" and (x_set or d_set or children):
            raise ValueError("leaf trace nodes carry no X, D, or children")
        self.subgraph = subgraph
        self.s_set = s_set
        self.kind = kind
        self.x_set = frozenset(x_set)
        self.d_set = frozenset(d_set)
        self.children = tuple(children)


def assemble(trace):
    """Build a tree decomposition from a completed interdiction trace.

    Internal nodes get bag S ∪ X, leaves get their whole vertex set, and
    vertices that drop out of every child (all incident edges deleted or
    into X) get singleton patch bags so coverage survives.
    """
    root_graph = trace.subgraph.parent
    parents = {}
    bags = {}

    def walk(node, parent_id):
        if node.subgraph.parent is not root_graph:
            raise ValueError("trace mixes subgraphs of different graphs")
        for v in node.subgraph.vertices:
            if v >= root_graph.n:
                raise ValueError(
                    "trace subgraph contains non-original vertex %d" % v)
        my_id = len(parents)
        parents[my_id] = parent_id
        if node.kind == "leaf":
            bags[my_id] = frozenset(node.subgraph.vertices)
            return
        bag = node.s_set | node.x_set
        bags[my_id] = bag
        covered = set()
        for child in node.children:
            want = child.subgraph.vertices & (node.s_set | node.x_set)
            if child.s_set != want:
                raise ValueError(
                    "trace inconsistent: child S %r != V_i ∩ (X ∪ S) %r"
                    % (sorted(child.s_set), sorted(want)))
            covered |= child.subgraph.vertices
            walk(child, my_id)
        for v in sorted(node.subgraph.vertices - bag - covered):
            patch_id = len(parents)
            parents[patch_id] = my_id
            bags[patch_id] = frozenset([v])

    walk(trace, None)
    return TreeDecomposition(parents, bags)


def make_nice(t):
    """Convert to nice form (leaf / introduce / forget / join nodes,
    empty bags at leaves and root). Width is preserved."""
    kids = t.children()
    parents_l = []
    bags_l = []
    kinds_l = []

    def new(bag, kind):
        parents_l.append(None)
        bags_l.append(frozenset(bag))
        kinds_l.append(kind)
        return len(parents_l) - 1

    def chain_to(cur, cur_bag, target_bag):
        for v in sorted(cur_bag - target_bag):
            nb = cur_bag - {v}
            nid = new(nb, ("forget", v))
            parents_l[cur] = nid
            cur, cur_bag = nid, nb
        for v in sorted(target_bag - cur_bag):
            nb = cur_bag | {v}
            nid = new(nb, ("introduce", v))
            parents_l[cur] = nid
            cur, cur_bag = nid, nb
        return cur

    def build(tnode):
        bag = t.bags[tnode]
        tops = []
        for c in kids[tnode]:
            apex = build(c)
            tops.append(chain_to(apex, t.bags[c], bag))
        if not tops:
            leaf = new(frozenset(), ("leaf",))
            return chain_to(leaf, frozenset(), bag)
        cur = tops[0]
        for nxt in tops[1:]:
            j = new(bag, ("join",))
            parents_l[cur] = j
            parents_l[nxt] = j
            cur = j
        return cur

    root_apex = build(t.root)
    root = chain_to(root_apex, t.bags[t.root], frozenset())

    cap = (len(t.nodes) + 1) * (3 * (t.width() + 2) + 3)
    if len(parents_l) > cap:
        raise RuntimeError(
            "nice decomposition blew its size bound: %d nodes > %d"
            % (len(parents_l), cap))
    parents = dict(enumerate(parents_l))
    parents[root] = None
    bags = dict(enumerate(bags_l))
    kinds = dict(enumerate(kinds_l))
    return NiceTreeDecomposition(parents, bags, kinds)
