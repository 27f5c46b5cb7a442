"""Rooted ball isomorphism, the locality radius K(G, G'), and
convergence scans for quotient families.

K(G, G') is the largest k such that the distance-k balls around the
roots are isomorphic as rooted graphs. Isomorphism testing is exact:
joint color refinement on (distance from root, degree), then
deterministic backtracking that preserves adjacency and non-adjacency.
Counts of n-step walks from the root only see the ball S_n, so count
tables of two graphs must agree for all n <= K; the scan verifies this
and reports bound gaps for the family.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

from .graphs import Ball, BudgetExceeded, GraphOracle, ball
from .heights import CoordinateHeight, HeightFunction
from .saw import BoundsReport, CountTable, count_bridges, count_saws, mu_bounds


# ---------------------------------------------------------------------------
# Rooted isomorphism
# ---------------------------------------------------------------------------


def _joint_refine(
    adj_a: List[List[int]],
    adj_b: List[List[int]],
    init_a: List,
    init_b: List,
) -> Tuple[List[int], List[int]]:
    """Color refinement run jointly so color names are comparable."""
    palette = {s: c for c, s in enumerate(sorted(set(init_a) | set(init_b)))}
    col_a = [palette[s] for s in init_a]
    col_b = [palette[s] for s in init_b]
    while True:
        sig_a = [
            (col_a[i], tuple(sorted(col_a[j] for j in adj_a[i])))
            for i in range(len(adj_a))
        ]
        sig_b = [
            (col_b[i], tuple(sorted(col_b[j] for j in adj_b[i])))
            for i in range(len(adj_b))
        ]
        palette = {s: c for c, s in enumerate(sorted(set(sig_a) | set(sig_b)))}
        new_a = [palette[s] for s in sig_a]
        new_b = [palette[s] for s in sig_b]
        if new_a == col_a and new_b == col_b:
            return col_a, col_b
        col_a, col_b = new_a, new_b


def _histogram(colors: List[int]) -> Dict[int, int]:
    out: Dict[int, int] = {}
    for c in colors:
        out[c] = out.get(c, 0) + 1
    return out


def ball_iso(
    g_a: GraphOracle,
    g_b: GraphOracle,
    k: int,
    max_vertices: int = 2_000_000,
) -> Tuple[bool, Optional[List[Tuple[str, str]]]]:
    """Rooted-graph isomorphism of the radius-k balls.

    Returns (verdict, witness); the witness lists canonical-key pairs of
    a root-preserving bijection that preserves adjacency both ways.
    """
    ba = ball(g_a, k, max_vertices=max_vertices)
    bb = ball(g_b, k, max_vertices=max_vertices)
    if ba.vertex_count() != bb.vertex_count():
        return False, None
    if len(ba.edges) != len(bb.edges):
        return False, None

    adj_a = ba.adjacency()
    adj_b = bb.adjacency()
    init_a = [(ba.distances[i], len(adj_a[i])) for i in range(len(adj_a))]
    init_b = [(bb.distances[i], len(adj_b[i])) for i in range(len(adj_b))]
    col_a, col_b = _joint_refine(adj_a, adj_b, init_a, init_b)
    if _histogram(col_a) != _histogram(col_b):
        return False, None

    # Backtracking in BFS order: every vertex after the root has a
    # previously mapped neighbor, so partial maps are tightly constrained.
    n = len(adj_a)
    order = sorted(range(n), key=lambda i: (ba.distances[i], col_a[i], i))
    by_color: Dict[int, List[int]] = {}
    for j in range(n):
        by_color.setdefault(col_b[j], []).append(j)
    adj_sets_b = [set(js) for js in adj_b]

    mapping: Dict[int, int] = {}
    used = [False] * n

    def extend(pos: int) -> bool:
        if pos == n:
            return True
        a = order[pos]
        mapped_image = [mapping[x] for x in adj_a[a] if x in mapping]
        for b in by_color.get(col_a[a], ()):
            if used[b]:
                continue
            neigh_b = adj_sets_b[b]
            if any(mb not in neigh_b for mb in mapped_image):
                continue
            if sum(1 for x in neigh_b if used[x]) != len(mapped_image):
                continue
            mapping[a] = b
            used[b] = True
            if extend(pos + 1):
                return True
            del mapping[a]
            used[b] = False
        return False

    if not extend(0):
        return False, None
    witness = sorted(
        (
            g_a.canonical_key(ba.vertices[a]).decode(),
            g_b.canonical_key(bb.vertices[b]).decode(),
        )
        for a, b in mapping.items()
    )
    return True, witness


@dataclass
class IsoRadiusResult:
    """K and the per-radius evidence. `at_least` means the true K may be
    larger: every radius up to `bound` matched (or the budget stopped the
    search), so only K >= k is known."""

    k: int
    at_least: bool
    bound: int
    verdicts: Dict[int, bool]
    witness: Optional[List[Tuple[str, str]]]
    budget_hit: bool = False

    def display(self) -> str:
        return f">= {self.k}" if self.at_least else str(self.k)


def iso_radius(
    g_a: GraphOracle,
    g_b: GraphOracle,
    bound: int,
    max_vertices: int = 2_000_000,
) -> IsoRadiusResult:
    """Largest k <= bound with isomorphic rooted balls.

    Radii are checked in increasing order; the first failure is final
    because a rooted isomorphism of S_{k+1} restricts to one of S_k."""
    if bound < 0:
        raise ValueError("bound must be >= 0")
    verdicts: Dict[int, bool] = {0: True}
    witness: Optional[List[Tuple[str, str]]] = [
        (g_a.canonical_key(g_a.root).decode(), g_b.canonical_key(g_b.root).decode())
    ]
    k = 0
    for radius in range(1, bound + 1):
        try:
            ok, wit = ball_iso(g_a, g_b, radius, max_vertices=max_vertices)
        except BudgetExceeded:
            return IsoRadiusResult(
                k=k,
                at_least=True,
                bound=bound,
                verdicts=verdicts,
                witness=witness,
                budget_hit=True,
            )
        verdicts[radius] = ok
        if not ok:
            return IsoRadiusResult(
                k=k, at_least=False, bound=bound, verdicts=verdicts, witness=witness
            )
        k = radius
        witness = wit
    return IsoRadiusResult(
        k=k, at_least=True, bound=bound, verdicts=verdicts, witness=witness
    )


# ---------------------------------------------------------------------------
# Family scans
# ---------------------------------------------------------------------------


@dataclass
class ScanRecord:
    m: int
    k: int
    k_display: str
    agree_up_to: int
    discrepancies: List[dict]
    lower_bound: Optional[str]
    upper_bound: Optional[str]
    table_digest: str


@dataclass
class ScanReport:
    base_model: str
    family: str
    n_max: int
    bound: int
    rank_precondition: Optional[dict]
    base_lower: Optional[str]
    base_upper: Optional[str]
    records: List[ScanRecord]

    def to_json_dict(self) -> dict:
        return {
            "base_model": self.base_model,
            "family": self.family,
            "n_max": self.n_max,
            "bound": self.bound,
            "rank_precondition": self.rank_precondition,
            "base_lower": self.base_lower,
            "base_upper": self.base_upper,
            "records": [
                {
                    "m": r.m,
                    "K": r.k,
                    "K_display": r.k_display,
                    "agree_up_to": r.agree_up_to,
                    "discrepancies": r.discrepancies,
                    "lower_bound": r.lower_bound,
                    "upper_bound": r.upper_bound,
                    "table_digest": r.table_digest,
                }
                for r in self.records
            ],
        }

    def to_csv(self) -> str:
        lines = ["m,K,agree_up_to,lower_bound,upper_bound,table_digest"]
        for r in self.records:
            lines.append(
                f"{r.m},{r.k_display},{r.agree_up_to},"
                f"{r.lower_bound or ''},{r.upper_bound or ''},{r.table_digest}"
            )
        return "\n".join(lines) + "\n"


def _digest(*tables: CountTable) -> str:
    h = hashlib.sha256()
    for t in tables:
        h.update(t.to_csv().encode())
    return h.hexdigest()[:16]


def count_agreement(
    base_sigma: CountTable,
    base_bridge: CountTable,
    member_sigma: CountTable,
    member_bridge: CountTable,
    check_up_to: int,
) -> Tuple[int, List[dict]]:
    """(largest n with full agreement so far, discrepancies for n <= check_up_to)."""
    agree_up_to = 0
    top = min(
        base_sigma.high_water,
        base_bridge.high_water,
        member_sigma.high_water,
        member_bridge.high_water,
    )
    still_agreeing = True
    discrepancies: List[dict] = []
    for n in range(1, top + 1):
        s_ok = base_sigma.counts[n] == member_sigma.counts[n]
        b_ok = base_bridge.counts[n] == member_bridge.counts[n]
        if still_agreeing and s_ok and b_ok:
            agree_up_to = n
        elif not (s_ok and b_ok):
            still_agreeing = False
        if n <= check_up_to:
            if not s_ok:
                discrepancies.append(
                    {
                        "n": n,
                        "kind": "saw",
                        "base": base_sigma.counts[n],
                        "member": member_sigma.counts[n],
                    }
                )
            if not b_ok:
                discrepancies.append(
                    {
                        "n": n,
                        "kind": "bridge",
                        "base": base_bridge.counts[n],
                        "member": member_bridge.counts[n],
                    }
                )
    return agree_up_to, discrepancies


def locality_scan(
    g: GraphOracle,
    family: Union[str, Callable[[int], GraphOracle]],
    n_max: int,
    m_list: Sequence[int],
    height: Optional[HeightFunction] = None,
    bound: Optional[int] = None,
    threads: int = 1,
    precision: int = 10,
    budget: Optional[int] = None,
    presentation_name: Optional[str] = None,
) -> ScanReport:
    """Per-m locality report for a quotient family.

    For each m: K(G, G_m); sigma and bridge tables on both sides;
    verification that counts agree for every n <= K (zero discrepancies
    expected: an n-step walk from the root lies inside S_n); and the
    member's bound pair, which stabilizes to the base one as m grows.
    """
    if isinstance(family, str):
        family_name = family
        from .graphs import resolve_model

        def family_fn(m: int) -> GraphOracle:
            return resolve_model(f"{family}{m}")

    else:
        family_name = getattr(family, "__name__", "family")
        family_fn = family
    if height is None:
        height = CoordinateHeight(0, label="x")
    if bound is None:
        bound = n_max

    rank_precondition = None
    if presentation_name is not None:
        from .presentations import (
            coefficient_matrix,
            preset_presentation,
            rank_exact,
        )

        pres = preset_presentation(presentation_name)
        rank = rank_exact(coefficient_matrix(pres))
        rank_precondition = {
            "presentation": presentation_name,
            "rank": rank,
            "generators": len(pres.generators),
            "required": f"rank < {len(pres.generators) - 1}",
            "satisfied": rank < len(pres.generators) - 1,
        }

    base_sigma = count_saws(g, n_max, threads=threads, budget=budget)
    base_bridge = count_bridges(g, height, n_max, threads=threads, budget=budget)
    base_bounds = mu_bounds(base_sigma, base_bridge, precision=precision)

    records: List[ScanRecord] = []
    for m in m_list:
        member = family_fn(m)
        iso = iso_radius(g, member, bound)
        member_sigma = count_saws(member, n_max, threads=threads, budget=budget)
        member_bridge = count_bridges(
            member, height, n_max, threads=threads, budget=budget
        )
        agree_up_to, discrepancies = count_agreement(
            base_sigma, base_bridge, member_sigma, member_bridge,
            check_up_to=min(iso.k, n_max),
        )
        member_bounds = mu_bounds(member_sigma, member_bridge, precision=precision)
        records.append(
            ScanRecord(
                m=m,
                k=iso.k,
                k_display=iso.display(),
                agree_up_to=agree_up_to,
                discrepancies=discrepancies,
                lower_bound=member_bounds.best_lower,
                upper_bound=member_bounds.best_upper,
                table_digest=_digest(member_sigma, member_bridge),
            )
        )

    return ScanReport(
        base_model=g.name,
        family=family_name,
        n_max=n_max,
        bound=bound,
        rank_precondition=rank_precondition,
        base_lower=base_bounds.best_lower,
        base_upper=base_bounds.best_upper,
        records=records,
    )


def scan_to_json(report: ScanReport, timestamp: Optional[str] = None) -> str:
    doc = report.to_json_dict()
    if timestamp is not None:
        doc["generated_at"] = timestamp
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"
