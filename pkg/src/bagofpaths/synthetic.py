"""Seeded random graph generators for tests and the acceptance suite."""

import numpy as np

from .graph import build_graph


def path_graph(n, cost=1.0):
    """Undirected path 0 - 1 - ... - (n-1) with unit affinities."""
    a = np.zeros((n, n))
    idx = np.arange(n - 1)
    a[idx, idx + 1] = a[idx + 1, idx] = 1.0
    c = np.where(a > 0, cost, np.inf)
    return build_graph(a, c)


def _strongly_connected(arcs):
    n = arcs.shape[0]
    for adj in (arcs, arcs.T):
        seen = np.zeros(n, dtype=bool)
        seen[0] = True
        stack = [0]
        while stack:
            u = stack.pop()
            for v in np.flatnonzero(adj[u] & ~seen):
                seen[v] = True
                stack.append(v)
        if not seen.all():
            return False
    return True


def random_strongly_connected(rng, n, density=0.4, self_loops=False, cost_range=None):
    """Random directed graph guaranteed strongly connected.

    A random Hamiltonian cycle is laid down first, then extra arcs are added
    with probability ``density``. Affinities are uniform in [0.5, 2]; costs
    default to the reciprocal of the affinity, or are uniform in
    ``cost_range`` when given.
    """
    perm = rng.permutation(n)
    arcs = np.zeros((n, n), dtype=bool)
    if n > 1:
        arcs[perm, np.roll(perm, -1)] = True
    else:
        arcs[0, 0] = True
    arcs |= rng.random((n, n)) < density
    if not self_loops and n > 1:
        np.fill_diagonal(arcs, False)
    a = np.where(arcs, rng.uniform(0.5, 2.0, (n, n)), 0.0)
    costs = None
    if cost_range is not None:
        costs = np.where(arcs, rng.uniform(*cost_range, (n, n)), np.inf)
    return build_graph(a, costs)


def random_undirected(rng, n, density=0.3, max_cost=5):
    """Connected undirected graph with unit affinities and integer costs in [1, max_cost]."""
    while True:
        upper = np.triu(rng.random((n, n)) < density, 1)
        # a random spanning tree keeps it connected
        order = rng.permutation(n)
        for pos in range(1, n):
            u, v = order[pos], order[rng.integers(pos)]
            upper[min(u, v), max(u, v)] = True
        arcs = upper | upper.T
        if _strongly_connected(arcs):
            break
    cost = np.triu(rng.integers(1, max_cost + 1, (n, n)), 1)
    cost = cost + cost.T
    return build_graph(arcs.astype(float), np.where(arcs, cost, np.inf))


def barbell(clique_size):
    """Two cliques of ``clique_size`` nodes joined through one middle node.

    Nodes ``0 .. clique_size-1`` form the first clique, the next
    ``clique_size`` the second, and the last node is the cut vertex joined
    to node ``clique_size-1`` and node ``clique_size``.
    """
    s = clique_size
    n = 2 * s + 1
    a = np.zeros((n, n))
    a[:s, :s] = 1.0
    a[s:2 * s, s:2 * s] = 1.0
    np.fill_diagonal(a, 0.0)
    hub = n - 1
    for v in (s - 1, s):
        a[hub, v] = a[v, hub] = 1.0
    return build_graph(a)


def stochastic_block_model(rng, sizes, p_in, p_out, max_tries=1000):
    """Undirected SBM with unit affinities, resampled until connected.

    Returns ``(graph, labels)``.
    """
    labels = np.repeat(np.arange(len(sizes)), sizes)
    n = len(labels)
    same = labels[:, None] == labels[None, :]
    prob = np.where(same, p_in, p_out)
    for _ in range(max_tries):
        upper = np.triu(rng.random((n, n)) < prob, 1)
        arcs = upper | upper.T
        if _strongly_connected(arcs):
            return build_graph(arcs.astype(float)), labels
    raise RuntimeError(f"no connected SBM sample in {max_tries} tries")
