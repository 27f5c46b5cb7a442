"""Independent reference enumerators and frozen expected values.

Everything here is deliberately primitive: explicit coordinate walks,
full path lists, no pruning beyond the definitions themselves, and no
imports from the package under test. The frozen tables below were
produced by running this file directly (python tests/oracles.py) and
are asserted against the fast implementations in the test suite.
"""

from __future__ import annotations

from typing import Callable, Dict, Iterable, List, Sequence, Tuple


# ---------------------------------------------------------------------------
# Coordinate neighbor functions (no shared code with the package)
# ---------------------------------------------------------------------------


def zd_neighbors(d: int) -> Callable[[tuple], List[tuple]]:
    def neigh(v: tuple) -> List[tuple]:
        out = []
        for i in range(d):
            for delta in (1, -1):
                w = list(v)
                w[i] += delta
                out.append(tuple(w))
        return out

    return neigh


def cylinder_neighbors(m: int) -> Callable[[tuple], List[tuple]]:
    """Z x (Z/m): (x, k) with k wrapping mod m."""

    def neigh(v: tuple) -> List[tuple]:
        x, k = v
        return [(x + 1, k), (x - 1, k), (x, (k + 1) % m), (x, (k - 1) % m)]

    return neigh


def brick_wall_neighbors(v: tuple) -> List[tuple]:
    """Honeycomb lattice in brick-wall coordinates: every vertex has
    east and west neighbors plus one vertical neighbor, up when x+y is
    even and down when odd. 3-regular, girth 6."""
    x, y = v
    vertical = (x, y + 1) if (x + y) % 2 == 0 else (x, y - 1)
    return [(x + 1, y), (x - 1, y), vertical]


def truncated_square_neighbors(v: tuple) -> List[tuple]:
    """4.8.8 lattice: a small square at each integer point with corners
    E, N, W, S (0..3); square edges plus E-W and N-S links between
    adjacent cells. 3-regular."""
    x, y, c = v
    square = [(x, y, (c + 1) % 4), (x, y, (c - 1) % 4)]
    if c == 0:
        return square + [(x + 1, y, 2)]
    if c == 2:
        return square + [(x - 1, y, 0)]
    if c == 1:
        return square + [(x, y + 1, 3)]
    return square + [(x, y - 1, 1)]


# ---------------------------------------------------------------------------
# Brute-force walk counting (path lists, no cleverness)
# ---------------------------------------------------------------------------


def brute_saw_counts(
    neighbors: Callable[[tuple], Iterable[tuple]], root, n_max: int
) -> List[int]:
    """counts[n] = number of n-step self-avoiding walks from root."""
    counts = [0] * (n_max + 1)

    def extend(path: List):
        n = len(path) - 1
        counts[n] += 1
        if n == n_max:
            return
        for w in neighbors(path[-1]):
            if w not in path:
                path.append(w)
                extend(path)
                path.pop()

    extend([root])
    return counts


def brute_bridge_counts(
    neighbors: Callable[[tuple], Iterable[tuple]],
    root,
    height: Callable[[tuple], int],
    n_max: int,
) -> List[int]:
    """counts[n] = number of n-step bridges from root: every vertex after
    the start is strictly higher than the start, and the final vertex is
    weakly highest on the walk."""
    counts = [0] * (n_max + 1)
    h0 = height(root)

    def extend(path: List, heights: List[int]):
        n = len(path) - 1
        if max(heights) == heights[-1]:
            counts[n] += 1
        if n == n_max:
            return
        for w in neighbors(path[-1]):
            hw = height(w)
            if hw <= h0 or w in path:
                continue
            path.append(w)
            heights.append(hw)
            extend(path, heights)
            path.pop()
            heights.pop()

    counts[0] = 1
    for w in neighbors(root):
        hw = height(w)
        if hw > h0:
            extend([root, w], [h0, hw])
    return counts


# ---------------------------------------------------------------------------
# Rooted-ball extraction and a third-party isomorphism oracle
# ---------------------------------------------------------------------------


def coordinate_ball(
    neighbors: Callable[[tuple], Iterable[tuple]], root, radius: int
) -> Tuple[List[tuple], List[Tuple[int, int]], List[int]]:
    """BFS ball: (vertices, induced edge index pairs, distances)."""
    dist = {root: 0}
    order = [root]
    frontier = [root]
    for r in range(radius):
        nxt = []
        for v in frontier:
            for w in neighbors(v):
                if w not in dist:
                    dist[w] = r + 1
                    order.append(w)
                    nxt.append(w)
        frontier = nxt
    index = {v: i for i, v in enumerate(order)}
    edges = set()
    for v in order:
        for w in neighbors(v):
            if w in index:
                a, b = index[v], index[w]
                if a != b:
                    edges.add((min(a, b), max(a, b)))
    return order, sorted(edges), [dist[v] for v in order]


def rooted_isomorphic(ball_a, ball_b) -> bool:
    """networkx-based rooted isomorphism check (test oracle only)."""
    import networkx as nx
    from networkx.algorithms.isomorphism import GraphMatcher, categorical_node_match

    def build(ball):
        vertices, edges, distances = ball
        g = nx.Graph()
        # Distance from the root is isomorphism-invariant for rooted
        # graphs built as BFS balls, so encode it as a node color; the
        # root is the unique distance-0 node.
        for i in range(len(vertices)):
            g.add_node(i, dist=distances[i])
        g.add_edges_from(edges)
        return g

    ga, gb = build(ball_a), build(ball_b)
    if ga.number_of_nodes() != gb.number_of_nodes():
        return False
    if ga.number_of_edges() != gb.number_of_edges():
        return False
    matcher = GraphMatcher(ga, gb, node_match=categorical_node_match("dist", -1))
    return matcher.is_isomorphic()


# ---------------------------------------------------------------------------
# Frozen values (produced by running this file; asserted in tests)
# ---------------------------------------------------------------------------

# sigma_n on Z^2 from the origin, n = 0..12.
ZD2_SIGMA = [
    1, 4, 12, 36, 100, 284, 780, 2172, 5916, 16268, 44100, 120292, 324932,
]

# b_n on Z^2 with h = x, n = 0..12.
ZD2_BRIDGES_X = [
    1, 1, 3, 7, 17, 41, 101, 251, 631, 1591, 4029, 10235, 26083,
]

# sigma_n on the honeycomb lattice, n = 0..12.
HEXAGONAL_SIGMA = [
    1, 3, 6, 12, 24, 48, 90, 174, 336, 648, 1218, 2328, 4416,
]

# sigma_n on the 4.8.8 (truncated square) lattice, n = 0..12.
SQUARE_OCTAGON_SIGMA = [
    1, 3, 6, 12, 22, 42, 80, 152, 284, 536, 988, 1848, 3412,
]


def tree3_sigma(n: int) -> int:
    return 1 if n == 0 else 3 * 2 ** (n - 1)


def main():
    n_max = 12
    z2 = brute_saw_counts(zd_neighbors(2), (0, 0), n_max)
    print("ZD2_SIGMA =", z2)
    b2 = brute_bridge_counts(zd_neighbors(2), (0, 0), lambda v: v[0], n_max)
    print("ZD2_BRIDGES_X =", b2)
    hexa = brute_saw_counts(brick_wall_neighbors, (0, 0), n_max)
    print("HEXAGONAL_SIGMA =", hexa)
    tsq = brute_saw_counts(truncated_square_neighbors, (0, 0, 0), n_max)
    print("SQUARE_OCTAGON_SIGMA =", tsq)
    z1 = brute_saw_counts(zd_neighbors(1), (0,), 20)
    assert z1 == [1] + [2] * 20, z1
    b1 = brute_bridge_counts(zd_neighbors(1), (0,), lambda v: v[0], 20)
    assert b1 == [1] * 21, b1
    print("zd1 checks passed")
    assert z2 == ZD2_SIGMA, "frozen ZD2_SIGMA out of date"
    assert b2 == ZD2_BRIDGES_X, "frozen ZD2_BRIDGES_X out of date"
    assert hexa == HEXAGONAL_SIGMA, "frozen HEXAGONAL_SIGMA out of date"
    assert tsq == SQUARE_OCTAGON_SIGMA, "frozen SQUARE_OCTAGON_SIGMA out of date"
    print("all frozen tables reproduced")


if __name__ == "__main__":
    main()
