"""Screen small graphs for the strict link/treewidth sandwich and freeze
the survivors into tests/corpus_data.py.

A graph qualifies when link(G) < tw(G) < 4*link(G), both computed by the
exact oracles. Trees and pure cycles never qualify (their link equals
their treewidth), so the pool leans on clique-cored graphs: K4..K8,
K4 plus pendant forests, and dense random graphs.
"""

import itertools
import random
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from twcut.graph import Graph
from twcut.oracles import exact_treewidth, link_number

TARGET = 200
SMALL_EDGE_TARGET = 60  # graphs with <= 10 edges, for the cut-soundness runs


def k4_forest(n, seed):
    """K4 core plus a random pendant forest on the remaining vertices."""
    rng = random.Random(seed)
    edges = list(itertools.combinations(range(4), 2))
    for v in range(4, n):
        edges.append((rng.randrange(v), v))
    return Graph(n, edges)


def random_graph(rng, n, p):
    edges = [e for e in itertools.combinations(range(n), 2)
             if rng.random() < p]
    return Graph(n, edges)


def qualifies(g):
    link = link_number(g)
    tw = exact_treewidth(g)[0]
    if link < tw < 4 * link:
        return link, tw
    return None


def main():
    picked = []
    seen = set()

    def consider(name, g):
        key = (g.n, g.edges)
        if key in seen:
            return False
        got = qualifies(g)
        if got is None:
            return False
        seen.add(key)
        picked.append((name, g, got[0], got[1]))
        return True

    for k in (4, 5, 6, 7, 8):
        consider("k%d" % k, Graph(k, itertools.combinations(range(k), 2)))

    small = sum(1 for _, g, _, _ in picked if len(g.edges) <= 10)
    seed = 0
    while small < SMALL_EDGE_TARGET and seed < 5000:
        n = 5 + seed % 4
        g = k4_forest(n, seed)
        if consider("k4forest-n%d-s%d" % (n, seed), g):
            small += 1
        seed += 1

    rng = random.Random(20260814)
    attempt = 0
    while len(picked) < TARGET and attempt < 200000:
        n = rng.choice([5, 6, 7, 8])
        p = rng.choice([0.45, 0.55, 0.65, 0.75, 0.85])
        g = random_graph(rng, n, p)
        consider("gnp-n%d-a%d" % (n, attempt), g)
        attempt += 1

    if len(picked) < TARGET:
        raise SystemExit("only found %d qualifying graphs" % len(picked))
    picked = picked[:TARGET]
    small = sum(1 for _, g, _, _ in picked if len(g.edges) <= 10)

    out = Path(__file__).resolve().parent.parent / "tests" / "corpus_data.py"
    with open(out, "w") as fh:
        fh.write('"""Frozen small-graph corpus. Regenerate with '
                 'scripts/gen_corpus.py.\n\nEach entry: (name, n, edges, '
                 'link, treewidth), where link < treewidth < 4*link\nholds '
                 'by construction and is re-verified by the acceptance '
                 'suite.\n"""\n\n')
        fh.write("CORPUS = [\n")
        for name, g, link, tw in picked:
            fh.write("    (%r, %d, %r, %d, %d),\n"
                     % (name, g.n, tuple(sorted(g.edges)), link, tw))
        fh.write("]\n")
    print("wrote %d graphs (%d with <= 10 edges) to %s"
          % (len(picked), small, out))


if __name__ == "__main__":
    main()
