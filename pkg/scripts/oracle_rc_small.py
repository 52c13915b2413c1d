"""Independent brute force for the rainbow connection number of tiny graphs.

Enumerates every colouring with q colours (no canonical reduction) and every
simple path (via networkx), sharing no code with the package.

    python scripts/oracle_rc_small.py
"""

import itertools

import networkx as nx


def rc_brute(G):
    edges = [tuple(sorted(e)) for e in G.edges()]
    idx = {e: i for i, e in enumerate(edges)}
    pairs = list(itertools.combinations(G.nodes(), 2))
    paths = {
        p: [[idx[tuple(sorted(e))] for e in zip(path, path[1:])] for path in nx.all_simple_paths(G, *p)]
        for p in pairs
    }
    for q in range(1, len(edges) + 1):
        for col in itertools.product(range(q), repeat=len(edges)):
            if all(any(len({col[e] for e in pe}) == len(pe) for pe in paths[p]) for p in pairs):
                return q
    raise AssertionError("unreachable")


if __name__ == "__main__":
    for name, G in [("C5", nx.cycle_graph(5)), ("C4", nx.cycle_graph(4)), ("C6", nx.cycle_graph(6)),
                    ("K4", nx.complete_graph(4)), ("P4", nx.path_graph(4)), ("K_1,3", nx.star_graph(3)),
                    ("K3,3", nx.complete_bipartite_graph(3, 3))]:
        print(name, rc_brute(G))
