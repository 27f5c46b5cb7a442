"""Exact enumeration of self-avoiding walks and bridges.

Counts are exact big integers obtained by depth-first backtracking over
neighbor expansions. Enumeration is iterative-deepening per depth: pass
k re-walks the tree to depth k and finalizes sigma_k (or b_k), so a
resource budget always yields a table whose entries up to the high-water
mark are exact and final. The node budget is enforced between passes
with a conservative projection, which keeps partial results identical
for any thread count.

Bridges follow the height inequalities h(start) < h(pi_i) <= h(pi_n):
every vertex after the start is strictly higher than the start, and the
walk ends at a running maximum. Heights are evaluated incrementally
(per-edge-label increments) or directly, whichever the height function
supports.
"""

from __future__ import annotations

import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from ._linalg import nth_root_decimal, root_compare
from .graphs import GraphOracle
from .heights import HeightFunction

DEFAULT_NODE_BUDGET = 50_000_000


def default_budget() -> int:
    env = os.environ.get("SAWLAB_BUDGET")
    if env:
        value = int(env)
        if value < 1:
            raise ValueError("SAWLAB_BUDGET must be positive")
        return value
    return DEFAULT_NODE_BUDGET


@dataclass
class CountTable:
    """Exact per-length walk counts from a fixed start vertex."""

    kind: str  # "saw" | "bridge"
    model: str
    n_max: int
    counts: Dict[int, int]
    height_name: Optional[str] = None
    partial: bool = False
    high_water: int = 0  # largest n whose count is exact and final
    nodes_used: int = 0

    def __getitem__(self, n: int) -> int:
        return self.counts[n]

    def series(self) -> List[int]:
        return [self.counts[n] for n in range(self.high_water + 1)]

    def column_name(self) -> str:
        return "sigma_n" if self.kind == "saw" else "b_n"

    def to_json_dict(self) -> dict:
        doc = {
            "kind": self.kind,
            "model": self.model,
            "n_max": self.n_max,
            "high_water": self.high_water,
            "partial": self.partial,
            "counts": {str(n): self.counts[n] for n in sorted(self.counts)},
        }
        if self.height_name is not None:
            doc["height"] = self.height_name
        return doc

    def to_csv(self) -> str:
        lines = [f"n,{self.column_name()}"]
        for n in range(1, self.high_water + 1):
            lines.append(f"{n},{self.counts[n]}")
        return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Depth-limited DFS passes
# ---------------------------------------------------------------------------


def _saw_pass(g: GraphOracle, start, depth: int) -> Tuple[int, int]:
    """(count at exactly `depth`, nodes expanded)."""
    neighbors = g.neighbors
    hits = 0
    nodes = 0
    visited = {start}

    def walk(v, remaining):
        nonlocal hits, nodes
        nodes += 1
        if remaining == 0:
            hits += 1
            return
        for w, _label in neighbors(v):
            if w not in visited:
                visited.add(w)
                walk(w, remaining - 1)
                visited.remove(w)

    walk(start, depth)
    return hits, nodes


def _saw_prefixes(g: GraphOracle, start, depth: int) -> List[Tuple]:
    """All SAW paths of length exactly `depth` from start, as tuples."""
    out: List[Tuple] = []
    visited = {start}
    path = [start]

    def walk(v, remaining):
        if remaining == 0:
            out.append(tuple(path))
            return
        for w, _label in g.neighbors(v):
            if w not in visited:
                visited.add(w)
                path.append(w)
                walk(w, remaining - 1)
                path.pop()
                visited.remove(w)

    walk(start, depth)
    return out


def _saw_subtree_task(args) -> Tuple[int, int]:
    g, prefix, depth = args
    neighbors = g.neighbors
    hits = 0
    nodes = 0
    visited = set(prefix)

    def walk(v, remaining):
        nonlocal hits, nodes
        if remaining == 0:
            hits += 1
            return
        for w, _label in neighbors(v):
            if w not in visited:
                nodes += 1
                visited.add(w)
                walk(w, remaining - 1)
                visited.remove(w)

    walk(prefix[-1], depth - (len(prefix) - 1))
    return hits, nodes


def _resolve_height_mode(h: HeightFunction, start) -> str:
    return "at" if h.at(start) is not None else "step"


def _bridge_pass(
    g: GraphOracle, h: HeightFunction, start, depth: int
) -> Tuple[int, int]:
    """(bridge count at exactly `depth`, nodes expanded)."""
    mode = _resolve_height_mode(h, start)
    h0 = h.at(start) if mode == "at" else 0
    hits = 0
    nodes = 0
    visited = {start}

    def walk(v, hv, hmax, remaining):
        nonlocal hits, nodes
        nodes += 1
        if remaining == 0:
            if hv == hmax:
                hits += 1
            return
        for w, label in g.neighbors(v):
            if w in visited:
                continue
            hw = h.at(w) if mode == "at" else h.step(hv, label)
            if hw <= h0:
                continue
            visited.add(w)
            walk(w, hw, hw if hw > hmax else hmax, remaining - 1)
            visited.remove(w)

    if depth == 0:
        return 1, 1
    walk(start, h0, h0, depth)
    return hits, nodes


def _bridge_prefixes(
    g: GraphOracle, h: HeightFunction, start, depth: int
) -> List[Tuple[Tuple, int, int]]:
    """(path, h(end), running max) for bridge-feasible prefixes."""
    mode = _resolve_height_mode(h, start)
    h0 = h.at(start) if mode == "at" else 0
    out: List[Tuple[Tuple, int, int]] = []
    visited = {start}
    path = [start]

    def walk(v, hv, hmax, remaining):
        if remaining == 0:
            out.append((tuple(path), hv, hmax))
            return
        for w, label in g.neighbors(v):
            if w in visited:
                continue
            hw = h.at(w) if mode == "at" else h.step(hv, label)
            if hw <= h0:
                continue
            visited.add(w)
            path.append(w)
            walk(w, hw, hw if hw > hmax else hmax, remaining - 1)
            path.pop()
            visited.remove(w)

    walk(start, h0, h0, depth)
    return out


def _bridge_subtree_task(args) -> Tuple[int, int]:
    g, h, prefix, h_end, hmax0, depth = args
    mode = _resolve_height_mode(h, prefix[0])
    h0 = h.at(prefix[0]) if mode == "at" else 0
    hits = 0
    nodes = 0
    visited = set(prefix)

    def walk(v, hv, hmax, remaining):
        nonlocal hits, nodes
        if remaining == 0:
            if hv == hmax:
                hits += 1
            return
        for w, label in g.neighbors(v):
            if w in visited:
                continue
            hw = h.at(w) if mode == "at" else h.step(hv, label)
            if hw <= h0:
                continue
            nodes += 1
            visited.add(w)
            walk(w, hw, hw if hw > hmax else hmax, remaining - 1)
            visited.remove(w)

    walk(prefix[-1], h_end, hmax0, depth - (len(prefix) - 1))
    return hits, nodes


# ---------------------------------------------------------------------------
# Public counting API
# ---------------------------------------------------------------------------


def _run_iterative(
    g: GraphOracle,
    n_max: int,
    start,
    threads: int,
    split_depth: int,
    budget: Optional[int],
    kind: str,
    h: Optional[HeightFunction],
) -> CountTable:
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    if threads < 1:
        raise ValueError("threads must be >= 1")
    if budget is None:
        budget = default_budget()
    if start is None:
        start = g.root
    model = g.name
    counts: Dict[int, int] = {0: 1}
    nodes_used = 1
    high_water = 0
    partial = False
    last_pass_nodes = 1
    # A depth-(k+1) pass expands at most (1 + degree_bound) times the
    # nodes of the depth-k pass, so this projection never overshoots.
    factor = 1 + g.degree_bound()

    pool = None
    try:
        if threads > 1:
            pool = ProcessPoolExecutor(max_workers=threads)
        for depth in range(1, n_max + 1):
            projected = last_pass_nodes * factor
            if nodes_used + projected > budget:
                partial = True
                break
            if pool is not None and depth > split_depth:
                if kind == "saw":
                    prefixes = _saw_prefixes(g, start, split_depth)
                    prefix_nodes = _saw_pass(g, start, split_depth)[1]
                    tasks = [(g, p, depth) for p in prefixes]
                    results = list(pool.map(_saw_subtree_task, tasks, chunksize=8))
                else:
                    prefixes = _bridge_prefixes(g, h, start, split_depth)
                    prefix_nodes = _bridge_pass(g, h, start, split_depth)[1]
                    tasks = [
                        (g, h, p, he, hm, depth) for p, he, hm in prefixes
                    ]
                    results = list(pool.map(_bridge_subtree_task, tasks, chunksize=8))
                hits = sum(r[0] for r in results)
                pass_nodes = prefix_nodes + sum(r[1] for r in results)
            else:
                if kind == "saw":
                    hits, pass_nodes = _saw_pass(g, start, depth)
                else:
                    hits, pass_nodes = _bridge_pass(g, h, start, depth)
            counts[depth] = hits
            nodes_used += pass_nodes
            last_pass_nodes = pass_nodes
            high_water = depth
    finally:
        if pool is not None:
            pool.shutdown()

    return CountTable(
        kind=kind,
        model=model,
        n_max=n_max,
        counts=counts,
        height_name=h.name if h is not None else None,
        partial=partial,
        high_water=high_water,
        nodes_used=nodes_used,
    )


def count_saws(
    g: GraphOracle,
    n_max: int,
    threads: int = 1,
    split_depth: int = 3,
    budget: Optional[int] = None,
    start=None,
) -> CountTable:
    """Exact sigma_n for 0 <= n <= n_max from the root (or `start`)."""
    return _run_iterative(g, n_max, start, threads, split_depth, budget, "saw", None)


def count_bridges(
    g: GraphOracle,
    h: HeightFunction,
    n_max: int,
    threads: int = 1,
    split_depth: int = 3,
    budget: Optional[int] = None,
    start=None,
) -> CountTable:
    """Exact b_n for 0 <= n <= n_max from the root (or `start`)."""
    return _run_iterative(g, n_max, start, threads, split_depth, budget, "bridge", h)


# ---------------------------------------------------------------------------
# Multiplicativity and connective-constant bounds
# ---------------------------------------------------------------------------


@dataclass
class MultiplicativityReport:
    kind: str
    pairs_checked: int
    violations: List[Tuple[int, int]]

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok


def check_multiplicativity(table: CountTable, kind: Optional[str] = None) -> MultiplicativityReport:
    """sigma_{m+n} <= sigma_m sigma_n for SAW tables, b_{m+n} >= b_m b_n
    for bridge tables, over all m, n >= 1 with m + n <= high_water."""
    if kind is None:
        kind = table.kind
    violations: List[Tuple[int, int]] = []
    checked = 0
    top = table.high_water
    for m in range(1, top):
        for n in range(m, top - m + 1):
            checked += 1
            lhs = table.counts[m + n]
            rhs = table.counts[m] * table.counts[n]
            bad = lhs > rhs if kind == "saw" else lhs < rhs
            if bad:
                violations.append((m, n))
    return MultiplicativityReport(kind=kind, pairs_checked=checked, violations=violations)


@dataclass
class BoundsRow:
    n: int
    sigma_n: Optional[int]
    b_n: Optional[int]
    lower_root: Optional[str]  # b_n^{1/n}, rounded down
    upper_root: Optional[str]  # sigma_n^{1/n}, rounded up


@dataclass
class BoundsReport:
    model: str
    height_name: Optional[str]
    precision: int
    rows: List[BoundsRow]
    best_lower: Optional[str]
    best_lower_n: Optional[int]
    best_upper: Optional[str]
    best_upper_n: Optional[int]

    def gap(self) -> Optional[Fraction]:
        if self.best_lower is None or self.best_upper is None:
            return None
        return Fraction(self.best_upper) - Fraction(self.best_lower)

    def to_json_dict(self) -> dict:
        return {
            "model": self.model,
            "height": self.height_name,
            "precision": self.precision,
            "rows": [
                {
                    "n": r.n,
                    "sigma_n": r.sigma_n,
                    "b_n": r.b_n,
                    "lower_root": r.lower_root,
                    "upper_root": r.upper_root,
                }
                for r in self.rows
            ],
            "best_lower": self.best_lower,
            "best_lower_n": self.best_lower_n,
            "best_upper": self.best_upper,
            "best_upper_n": self.best_upper_n,
        }

    def to_csv(self) -> str:
        lines = ["n,sigma_n,b_n,lower_root,upper_root"]
        for r in self.rows:
            cells = [
                str(r.n),
                "" if r.sigma_n is None else str(r.sigma_n),
                "" if r.b_n is None else str(r.b_n),
                r.lower_root or "",
                r.upper_root or "",
            ]
            lines.append(",".join(cells))
        return "\n".join(lines) + "\n"


def doubling_indices(n_max: int) -> List[int]:
    out = []
    n = 1
    while n <= n_max:
        out.append(n)
        n *= 2
    return out


def mu_bounds(
    sigma_table: Optional[CountTable],
    bridge_table: Optional[CountTable],
    precision: int = 10,
) -> BoundsReport:
    """Per-n root bounds and the best ones.

    Upper bounds sigma_n^{1/n} are valid for every n (submultiplicative
    sequence); the best is the exact minimum. Lower bounds b_n^{1/n} are
    guaranteed monotone only along the doubling subsequence 1, 2, 4, ...
    (supermultiplicativity), so the best lower bound is the exact maximum
    over that subsequence. Roots are rendered from exact integers, lower
    bounds rounded down and upper bounds rounded up; best selection uses
    exact cross-power comparison, never the decimal renderings.
    """
    if sigma_table is None and bridge_table is None:
        raise ValueError("at least one table is required")
    if precision < 1:
        raise ValueError("precision must be >= 1")
    s_top = sigma_table.high_water if sigma_table else 0
    b_top = bridge_table.high_water if bridge_table else 0
    n_top = max(s_top, b_top)
    rows: List[BoundsRow] = []
    for n in range(1, n_top + 1):
        s = sigma_table.counts.get(n) if sigma_table else None
        b = bridge_table.counts.get(n) if bridge_table else None
        rows.append(
            BoundsRow(
                n=n,
                sigma_n=s,
                b_n=b,
                lower_root=(
                    nth_root_decimal(b, n, precision, round_up=False)
                    if b is not None
                    else None
                ),
                upper_root=(
                    nth_root_decimal(s, n, precision, round_up=True)
                    if s is not None
                    else None
                ),
            )
        )

    best_upper = best_upper_n = None
    if sigma_table and s_top >= 1:
        arg = 1
        for n in range(2, s_top + 1):
            if root_compare(
                sigma_table.counts[n], n, sigma_table.counts[arg], arg
            ) < 0:
                arg = n
        best_upper_n = arg
        best_upper = nth_root_decimal(
            sigma_table.counts[arg], arg, precision, round_up=True
        )

    best_lower = best_lower_n = None
    if bridge_table and b_top >= 1:
        candidates = [n for n in doubling_indices(b_top)]
        arg = candidates[0]
        for n in candidates[1:]:
            if root_compare(
                bridge_table.counts[n], n, bridge_table.counts[arg], arg
            ) > 0:
                arg = n
        best_lower_n = arg
        best_lower = nth_root_decimal(
            bridge_table.counts[arg], arg, precision, round_up=False
        )

    return BoundsReport(
        model=(sigma_table or bridge_table).model,
        height_name=bridge_table.height_name if bridge_table else None,
        precision=precision,
        rows=rows,
        best_lower=best_lower,
        best_lower_n=best_lower_n,
        best_upper=best_upper,
        best_upper_n=best_upper_n,
    )


def doubling_monotone(bridge_table: CountTable) -> List[Tuple[int, int]]:
    """Pairs (n, 2n) violating b_{2n}^{1/2n} >= b_n^{1/n}; must be empty."""
    bad = []
    top = bridge_table.high_water
    for n in range(1, top // 2 + 1):
        if root_compare(
            bridge_table.counts[2 * n], 2 * n, bridge_table.counts[n], n
        ) < 0:
            bad.append((n, 2 * n))
    return bad


def table_to_json(table: CountTable, timestamp: Optional[str] = None) -> str:
    doc = table.to_json_dict()
    if timestamp is not None:
        doc["generated_at"] = timestamp
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def bounds_to_json(report: BoundsReport, timestamp: Optional[str] = None) -> str:
    doc = report.to_json_dict()
    if timestamp is not None:
        doc["generated_at"] = timestamp
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"
