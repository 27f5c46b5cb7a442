"""Infinite vertex-transitive graphs behind a uniform oracle interface.

Each oracle exposes a root, deterministic labelled neighbor expansion,
orbit labels, and an injective canonical key per vertex. The catalog
covers integer lattices, the infinite dihedral line, the 3-regular
tree, the discrete Heisenberg group, the lamplighter group, hexagonal
and square/octagon tilings (as periodic voltage covers), cylinder and
ladder quotient families, and the grandparent graph. Generic Cayley
graph generation from arbitrary presentations is deliberately absent:
normal forms are curated per model, and PeriodicGraph is the escape
hatch for user-defined Z^d-periodic graphs.
"""

from __future__ import annotations

import itertools
import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple


class GraphError(ValueError):
    pass


class BudgetExceeded(RuntimeError):
    """A vertex/node budget was exhausted before the operation finished."""


class GraphOracle:
    """Interface: subclasses fix `name` and implement the four methods."""

    name: str = "oracle"

    @property
    def root(self):
        raise NotImplementedError

    def neighbors(self, v) -> Tuple[Tuple[object, str], ...]:
        raise NotImplementedError

    def orbit_label(self, v) -> int:
        return 0

    def orbit_reps(self) -> List[object]:
        return [self.root]

    def canonical_key(self, v) -> bytes:
        return repr(v).encode()

    def degree_bound(self) -> int:
        return len(self.neighbors(self.root))


# ---------------------------------------------------------------------------
# Cayley-graph models with exact normal forms
# ---------------------------------------------------------------------------

_AXIS_LABELS = ("x", "y", "z")
_AXIS_INV = ("X", "Y", "Z")


@dataclass(frozen=True)
class ZdOracle(GraphOracle):
    d: int

    def __post_init__(self):
        if self.d < 1:
            raise GraphError("zd requires d >= 1")

    @property
    def name(self) -> str:
        return f"zd{self.d}"

    @property
    def root(self):
        return (0,) * self.d

    def _label(self, i: int, positive: bool) -> str:
        if self.d <= 3:
            return (_AXIS_LABELS if positive else _AXIS_INV)[i]
        return (f"g{i}" if positive else f"G{i}")

    def neighbors(self, v):
        out = []
        for i in range(self.d):
            up = list(v)
            up[i] += 1
            down = list(v)
            down[i] -= 1
            out.append((tuple(up), self._label(i, True)))
            out.append((tuple(down), self._label(i, False)))
        return tuple(out)

    def degree_bound(self) -> int:
        return 2 * self.d


@dataclass(frozen=True)
class CylinderOracle(GraphOracle):
    """Z x C_m: the quotient of Z^2 by m in the second coordinate."""

    m: int

    def __post_init__(self):
        if self.m < 3:
            raise GraphError("cylinder requires m >= 3")

    @property
    def name(self) -> str:
        return f"cylinder_zd{self.m}"

    @property
    def root(self):
        return (0, 0)

    def neighbors(self, v):
        x, k = v
        return (
            ((x + 1, k), "x"),
            ((x - 1, k), "X"),
            ((x, (k + 1) % self.m), "y"),
            ((x, (k - 1) % self.m), "Y"),
        )

    def degree_bound(self) -> int:
        return 4


@dataclass(frozen=True)
class DihedralLineOracle(GraphOracle):
    """Cayley graph of the infinite dihedral group: the line Z.

    The two involutions act as s1: pair {2k, 2k+1}, s2: pair {2k-1, 2k}.
    """

    name = "dihedral"

    @property
    def root(self):
        return 0

    def neighbors(self, v):
        if v % 2 == 0:
            return ((v + 1, "s1"), (v - 1, "s2"))
        return ((v - 1, "s1"), (v + 1, "s2"))

    def degree_bound(self) -> int:
        return 2


@dataclass(frozen=True)
class LadderDihedralOracle(GraphOracle):
    """Cayley graph of (infinite dihedral) x (cyclic of order m).

    Vertices are (line position, cycle position); the graph is the same
    cylinder as CylinderOracle but the vertex encoding and edge labels
    follow the product group.
    """

    m: int

    def __post_init__(self):
        if self.m < 3:
            raise GraphError("ladder_dihedral requires m >= 3")

    @property
    def name(self) -> str:
        return f"ladder_dihedral{self.m}"

    @property
    def root(self):
        return (0, 0)

    def neighbors(self, v):
        p, k = v
        if p % 2 == 0:
            s1, s2 = p + 1, p - 1
        else:
            s1, s2 = p - 1, p + 1
        return (
            ((s1, k), "s1"),
            ((s2, k), "s2"),
            ((p, (k + 1) % self.m), "a"),
            ((p, (k - 1) % self.m), "b"),
        )

    def degree_bound(self) -> int:
        return 4


_TREE3_INVERSE = {"s1": "t", "t": "s1", "s2": "s2"}
_TREE3_CHAR = {"s1": "a", "t": "A", "s2": "b"}
_CHAR_INVERSE = {"a": "A", "A": "a", "b": "b"}


@dataclass(frozen=True)
class Tree3Oracle(GraphOracle):
    """3-regular tree as reduced words in the free product Z * Z/2.

    Letters: 'a' and its inverse 'A' generate the Z factor, 'b' the
    involution. A word is reduced when it has no 'aA'/'Aa'/'bb' factor.
    """

    name = "tree3"

    @property
    def root(self):
        return ""

    def neighbors(self, v):
        out = []
        for label in ("s1", "s2", "t"):
            ch = _TREE3_CHAR[label]
            if v and v[-1] == _CHAR_INVERSE[ch]:
                out.append((v[:-1], label))
            else:
                out.append((v + ch, label))
        return tuple(out)

    def degree_bound(self) -> int:
        return 3


@dataclass(frozen=True)
class HeisenbergOracle(GraphOracle):
    """Discrete Heisenberg group in coordinates (a, b, c) with
    (a,b,c)(a',b',c') = (a+a', b+b', c+c'+a*b')."""

    name = "heisenberg"

    @property
    def root(self):
        return (0, 0, 0)

    def neighbors(self, v):
        a, b, c = v
        return (
            ((a + 1, b, c), "x"),
            ((a - 1, b, c), "X"),
            ((a, b + 1, c + a), "y"),
            ((a, b - 1, c - a), "Y"),
            ((a, b, c + 1), "z"),
            ((a, b, c - 1), "Z"),
        )

    def degree_bound(self) -> int:
        return 6


@dataclass(frozen=True)
class LamplighterOracle(GraphOracle):
    """Lamplighter group: configurations (lit lamp set, marker position).

    Generators: a toggles the lamp under the marker, t and u move the
    marker right and left.
    """

    name = "lamplighter"

    @property
    def root(self):
        return (frozenset(), 0)

    def neighbors(self, v):
        lamps, pos = v
        toggled = lamps ^ {pos}
        return (
            ((frozenset(toggled), pos), "a"),
            ((lamps, pos + 1), "t"),
            ((lamps, pos - 1), "u"),
        )

    def canonical_key(self, v) -> bytes:
        lamps, pos = v
        return f"{sorted(lamps)}|{pos}".encode()

    def degree_bound(self) -> int:
        return 3


@dataclass(frozen=True)
class GrandparentOracle(GraphOracle):
    """Degree-8 grandparent graph: a 3-regular tree with a distinguished
    end, plus an edge from each vertex to its grandparent toward the end.

    Vertices are (k, w): k indexes a fixed ray converging to the end,
    w is the descent word below ray vertex k (empty, or starting '1' so
    encodings are unique). The level of (k, w) is k - len(w).
    """

    name = "grandparent"

    @property
    def root(self):
        return (0, "")

    @staticmethod
    def parent(v):
        k, w = v
        if not w:
            return (k + 1, "")
        return (k, w[:-1])

    @staticmethod
    def children(v):
        k, w = v
        if not w:
            return ((k - 1, ""), (k, "1"))
        return ((k, w + "0"), (k, w + "1"))

    @staticmethod
    def level(v) -> int:
        k, w = v
        return k - len(w)

    def neighbors(self, v):
        p = self.parent(v)
        c0, c1 = self.children(v)
        gp = self.parent(p)
        g00, g01 = self.children(c0)
        g10, g11 = self.children(c1)
        return (
            (p, "parent"),
            (c0, "child0"),
            (c1, "child1"),
            (gp, "grandparent"),
            (g00, "gc00"),
            (g01, "gc01"),
            (g10, "gc10"),
            (g11, "gc11"),
        )

    def canonical_key(self, v) -> bytes:
        k, w = v
        return f"{k}:{w}".encode()

    def degree_bound(self) -> int:
        return 8


# ---------------------------------------------------------------------------
# Z^d-periodic voltage graphs
# ---------------------------------------------------------------------------


def _det_int(rows: List[List[int]]) -> int:
    """Exact determinant of a square integer matrix (fraction-free)."""
    m = [row[:] for row in rows]
    n = len(m)
    det_sign = 1
    prev = 1
    for col in range(n):
        pivot_row = None
        for r in range(col, n):
            if m[r][col] != 0:
                pivot_row = r
                break
        if pivot_row is None:
            return 0
        if pivot_row != col:
            m[col], m[pivot_row] = m[pivot_row], m[col]
            det_sign = -det_sign
        for r in range(col + 1, n):
            for c in range(col + 1, n):
                m[r][c] = (m[r][c] * m[col][col] - m[r][col] * m[col][c]) // prev
            m[r][col] = 0
        prev = m[col][col]
    return det_sign * prev


def _spans_full_lattice(vectors: List[Tuple[int, ...]], d: int) -> bool:
    """Do the integer vectors generate all of Z^d as a group?

    True iff some d x d minor is non-zero and the gcd of all d x d
    minors is 1 (the index of the spanned lattice).
    """
    if d == 0:
        return True
    vecs = [v for v in vectors if any(v)]
    if len(vecs) < d:
        return False
    g = 0
    for subset in itertools.combinations(vecs, d):
        g = gcd(g, abs(_det_int([list(v) for v in subset])))
        if g == 1:
            return True
    return False


@dataclass(frozen=True)
class PeriodicGraph:
    """Finite quotient multigraph with Z^d voltages.

    The covered graph has vertices (o, x), o in 1..orbit_count, x in Z^d,
    with (o1, x) ~ (o2, x + t) for each directed edge (o1, o2, t). The
    directed edge list is closed under reversal (o2, o1, -t).
    """

    orbit_count: int
    dim: int
    edges: Tuple[Tuple[int, int, Tuple[int, ...], Optional[str]], ...]

    def __post_init__(self):
        if self.orbit_count < 1 or self.dim < 0:
            raise GraphError("need orbit_count >= 1 and dim >= 0")
        seen = set()
        for o1, o2, t, _label in self.edges:
            if not (1 <= o1 <= self.orbit_count and 1 <= o2 <= self.orbit_count):
                raise GraphError(f"edge orbit out of range: {(o1, o2, t)}")
            if len(t) != self.dim:
                raise GraphError("voltage length != dim")
            if o1 == o2 and all(x == 0 for x in t):
                raise GraphError("self-loop with zero voltage")
            key = (o1, o2, t)
            if key in seen:
                raise GraphError(f"repeated edge {key}")
            seen.add(key)
        for o1, o2, t, _label in self.edges:
            if (o2, o1, tuple(-x for x in t)) not in seen:
                raise GraphError(f"edge {(o1, o2, t)} missing its reversal")
        if not self._connected():
            raise GraphError("cover is not connected")

    def _connected(self) -> bool:
        # Orbit connectivity of the quotient...
        adj: Dict[int, set] = {o: set() for o in range(1, self.orbit_count + 1)}
        for o1, o2, _t, _l in self.edges:
            adj[o1].add(o2)
        seen = {1}
        stack = [1]
        while stack:
            o = stack.pop()
            for o2 in adj[o]:
                if o2 not in seen:
                    seen.add(o2)
                    stack.append(o2)
        if len(seen) < self.orbit_count:
            return False
        # ...plus the cycle voltages must generate all of Z^d: assign each
        # orbit a potential from a spanning tree, then every non-tree edge
        # contributes the voltage of its fundamental cycle.
        potential: Dict[int, Tuple[int, ...]] = {1: (0,) * self.dim}
        frontier = [1]
        while frontier:
            o = frontier.pop()
            for o1, o2, t, _l in self.edges:
                if o1 == o and o2 not in potential:
                    potential[o2] = tuple(p + x for p, x in zip(potential[o], t))
                    frontier.append(o2)
        cycle_voltages = []
        for o1, o2, t, _l in self.edges:
            vec = tuple(
                potential[o1][i] + t[i] - potential[o2][i] for i in range(self.dim)
            )
            cycle_voltages.append(vec)
        return _spans_full_lattice(cycle_voltages, self.dim)

    def out_edges(self, o: int) -> Tuple[Tuple[int, Tuple[int, ...], Optional[str]], ...]:
        return tuple((o2, t, label) for o1, o2, t, label in self.edges if o1 == o)

    def degree(self, o: int) -> int:
        return len(self.out_edges(o))

    def to_document(self) -> dict:
        seen = set()
        undirected = []
        for o1, o2, t, _l in self.edges:
            rev = (o2, o1, tuple(-x for x in t))
            if rev in seen:
                continue
            seen.add((o1, o2, t))
            undirected.append([o1, o2, list(t)])
        return {"orbits": self.orbit_count, "dim": self.dim, "edges": undirected}


def periodic_graph_from_document(doc: str | dict) -> PeriodicGraph:
    """Load a PeriodicGraph JSON document; reversal closure is applied."""
    if isinstance(doc, str):
        try:
            doc = json.loads(doc)
        except json.JSONDecodeError as exc:
            raise GraphError(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise GraphError("periodic graph document must be a JSON object")
    try:
        m = int(doc["orbits"])
        d = int(doc["dim"])
        raw_edges = doc["edges"]
    except (KeyError, TypeError, ValueError) as exc:
        raise GraphError(f"malformed periodic graph document: {exc}") from exc
    directed = {}
    for entry in raw_edges:
        if len(entry) not in (3, 4):
            raise GraphError(f"edge entry must be [o1, o2, t] or [o1, o2, t, label]: {entry}")
        o1, o2, t = int(entry[0]), int(entry[1]), tuple(int(x) for x in entry[2])
        label = entry[3] if len(entry) == 4 else None
        rt = tuple(-x for x in t)
        directed.setdefault((o1, o2, t), label)
        directed.setdefault((o2, o1, rt), None)
    edges = tuple(
        (o1, o2, t, label) for (o1, o2, t), label in sorted(
            directed.items(), key=lambda kv: (kv[0][0], kv[0][1], kv[0][2])
        )
    )
    return PeriodicGraph(orbit_count=m, dim=d, edges=edges)


def _build_pg(m: int, d: int, labelled_edges) -> PeriodicGraph:
    edges = tuple(
        (o1, o2, tuple(t), label) for o1, o2, t, label in labelled_edges
    )
    return PeriodicGraph(orbit_count=m, dim=d, edges=edges)


def hexagonal_pg() -> PeriodicGraph:
    """Honeycomb as a 2-orbit voltage graph over Z^2, with generator labels
    forming the Cayley structure of the involution s1 and the rotation s2."""
    return _build_pg(2, 2, [
        (1, 2, (0, 0), "s1"),
        (2, 1, (0, 0), "s1"),
        (1, 2, (-1, 0), "s2"),
        (2, 1, (1, 0), "s3"),
        (1, 2, (0, -1), "s3"),
        (2, 1, (0, 1), "s2"),
    ])


def square_octagon_pg() -> PeriodicGraph:
    """Truncated square tiling: orbits E,N,W,S = 1..4 around each cell,
    a voltage-0 diamond 4-cycle plus long edges to the neighboring cells."""
    return _build_pg(4, 2, [
        (1, 2, (0, 0), "s2"),
        (2, 3, (0, 0), "s2"),
        (3, 4, (0, 0), "s2"),
        (4, 1, (0, 0), "s2"),
        (2, 1, (0, 0), "s3"),
        (3, 2, (0, 0), "s3"),
        (4, 3, (0, 0), "s3"),
        (1, 4, (0, 0), "s3"),
        (1, 3, (1, 0), "s1"),
        (3, 1, (-1, 0), "s1"),
        (2, 4, (0, 1), "s1"),
        (4, 2, (0, -1), "s1"),
    ])


def zd2_pg() -> PeriodicGraph:
    return _build_pg(1, 2, [
        (1, 1, (1, 0), "x"),
        (1, 1, (-1, 0), "X"),
        (1, 1, (0, 1), "y"),
        (1, 1, (0, -1), "Y"),
    ])


def dihedral_line_pg() -> PeriodicGraph:
    """The line as a 2-orbit, 1-dimensional voltage graph (A-B voltage 0,
    B-A voltage 1); cover vertex (1, x) is position 2x, (2, x) is 2x+1."""
    return _build_pg(2, 1, [
        (1, 2, (0,), "s1"),
        (2, 1, (0,), "s1"),
        (2, 1, (1,), "s2"),
        (1, 2, (-1,), "s2"),
    ])


PERIODIC_PRESETS: Dict[str, Callable[[], PeriodicGraph]] = {
    "zd2": zd2_pg,
    "dihedral_line": dihedral_line_pg,
    "hexagonal": hexagonal_pg,
    "square_octagon": square_octagon_pg,
}


def periodic_preset(name: str) -> PeriodicGraph:
    try:
        return PERIODIC_PRESETS[name]()
    except KeyError:
        raise GraphError(
            f"unknown periodic-graph preset {name!r}; "
            f"choices: {', '.join(sorted(PERIODIC_PRESETS))}"
        ) from None


@dataclass(frozen=True)
class PGOracle(GraphOracle):
    """Cover of a PeriodicGraph: vertices (o, x) with o in 1..M, x in Z^d."""

    pg: PeriodicGraph
    model_name: str = "periodic"

    @property
    def name(self) -> str:
        return self.model_name

    @property
    def root(self):
        return (1, (0,) * self.pg.dim)

    def neighbors(self, v):
        o, x = v
        out = []
        for i, (o2, t, label) in enumerate(self.pg.out_edges(o)):
            w = (o2, tuple(a + b for a, b in zip(x, t)))
            out.append((w, label if label is not None else f"e{i}"))
        return tuple(out)

    def orbit_label(self, v) -> int:
        return v[0] - 1

    def orbit_reps(self):
        zero = (0,) * self.pg.dim
        return [(o, zero) for o in range(1, self.pg.orbit_count + 1)]

    def translate(self, v, t):
        o, x = v
        return (o, tuple(a + b for a, b in zip(x, t)))

    def degree_bound(self) -> int:
        return max(self.pg.degree(o) for o in range(1, self.pg.orbit_count + 1))


def cover_vertex(pg: PeriodicGraph, o: int, x: Sequence[int]):
    """Vertex constructor for a PeriodicGraph cover."""
    if not (1 <= o <= pg.orbit_count):
        raise GraphError(f"orbit {o} out of range 1..{pg.orbit_count}")
    if len(x) != pg.dim:
        raise GraphError("coordinate length != dim")
    return (o, tuple(int(c) for c in x))


# ---------------------------------------------------------------------------
# Catalog and balls
# ---------------------------------------------------------------------------

CATALOG_NAMES = (
    "zd",
    "dihedral",
    "tree3",
    "heisenberg",
    "lamplighter",
    "hexagonal",
    "square_octagon",
    "cylinder_zd",
    "ladder_dihedral",
    "grandparent",
)


def catalog(name: str, param: Optional[int] = None) -> GraphOracle:
    """Build a preset oracle. `param` is d for zd, m for the quotient families."""
    if name == "zd":
        if param is None:
            raise GraphError("zd needs a dimension parameter")
        return ZdOracle(param)
    if name == "dihedral":
        return DihedralLineOracle()
    if name == "tree3":
        return Tree3Oracle()
    if name == "heisenberg":
        return HeisenbergOracle()
    if name == "lamplighter":
        return LamplighterOracle()
    if name == "hexagonal":
        return PGOracle(hexagonal_pg(), "hexagonal")
    if name == "square_octagon":
        return PGOracle(square_octagon_pg(), "square_octagon")
    if name == "cylinder_zd":
        if param is None:
            raise GraphError("cylinder_zd needs the cycle length m")
        return CylinderOracle(param)
    if name == "ladder_dihedral":
        if param is None:
            raise GraphError("ladder_dihedral needs the cycle length m")
        return LadderDihedralOracle(param)
    if name == "grandparent":
        return GrandparentOracle()
    raise GraphError(f"unknown preset {name!r}")


_MODEL_RE = re.compile(r"^([a-z_]+?)_?(\d+)?$")


def resolve_model(spec: str) -> GraphOracle:
    """Parse compact model strings like zd2, cylinder8, ladder_dihedral6."""
    s = spec.strip().lower()
    m = _MODEL_RE.match(s)
    if not m:
        raise GraphError(f"cannot parse model {spec!r}")
    base, num = m.group(1), m.group(2)
    param = int(num) if num is not None else None
    aliases = {
        "cylinder": "cylinder_zd",
        "cylinder_zd": "cylinder_zd",
        "ladder": "ladder_dihedral",
        "ladder_dihedral": "ladder_dihedral",
        "dihedral_line": "dihedral",
        "zd": "zd",
    }
    base = aliases.get(base, base)
    if base == "tree" and param == 3:
        return catalog("tree3")
    if base in ("tree3", "square_octagon", "hexagonal", "dihedral", "heisenberg",
                "lamplighter", "grandparent"):
        if base == "tree3" or param is None:
            return catalog(base)
        raise GraphError(f"model {base} takes no numeric parameter")
    if base in ("zd", "cylinder_zd", "ladder_dihedral"):
        if param is None:
            raise GraphError(f"model {base} needs a numeric parameter, e.g. {base}2")
        return catalog(base, param)
    raise GraphError(f"unknown model {spec!r}")


DEFAULT_BALL_BUDGET = 2_000_000


@dataclass
class Ball:
    """Induced subgraph on all vertices within distance `radius` of the root.

    Vertices are sorted by (distance, canonical key); edges are index
    pairs (i, j) with i < j, each induced edge listed exactly once.
    """

    center_key: bytes
    radius: int
    vertices: List[object]
    keys: List[bytes]
    distances: List[int]
    edges: List[Tuple[int, int]]
    index: Dict[object, int] = field(repr=False, default_factory=dict)

    def __post_init__(self):
        if not self.index:
            self.index = {v: i for i, v in enumerate(self.vertices)}

    def adjacency(self) -> List[List[int]]:
        adj: List[List[int]] = [[] for _ in self.vertices]
        for i, j in self.edges:
            adj[i].append(j)
            adj[j].append(i)
        return adj

    def vertex_count(self) -> int:
        return len(self.vertices)


def ball(g: GraphOracle, k: int, max_vertices: int = DEFAULT_BALL_BUDGET) -> Ball:
    """BFS-complete radius-k ball around the root, with induced edges."""
    if k < 0:
        raise GraphError("radius must be >= 0")
    root = g.root
    dist = {root: 0}
    order = [root]
    frontier = [root]
    for depth in range(k):
        nxt = []
        for v in frontier:
            for w, _label in g.neighbors(v):
                if w not in dist:
                    dist[w] = depth + 1
                    order.append(w)
                    nxt.append(w)
                    if len(order) > max_vertices:
                        raise BudgetExceeded(
                            f"ball({g.name}, {k}) exceeds {max_vertices} vertices"
                        )
        frontier = nxt
    verts = sorted(order, key=lambda v: (dist[v], g.canonical_key(v)))
    index = {v: i for i, v in enumerate(verts)}
    edges = set()
    for v in verts:
        i = index[v]
        for w, _label in g.neighbors(v):
            j = index.get(w)
            if j is not None and j != i:
                edges.add((i, j) if i < j else (j, i))
    return Ball(
        center_key=g.canonical_key(root),
        radius=k,
        vertices=verts,
        keys=[g.canonical_key(v) for v in verts],
        distances=[dist[v] for v in verts],
        edges=sorted(edges),
        index=index,
    )
