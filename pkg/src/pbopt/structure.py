"""Structural analysis of hypergraphs.

Gap, nest points and nest-sets, nest-set elimination orders, exact
nest-set width/gap at desk scale, beta-cycle search and verification,
and a min-fill treewidth upper bound for graphs.

Searches are exhaustive with memoization on the residual hypergraph;
they are meant for desk-scale instances, not large inputs.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from .hypergraph import Hypergraph, NodeId, edge_key

DESK_SCALE_LIMIT = 14


def gap(G: Hypergraph, Vp: Iterable[NodeId]) -> int:
    """max over edges e meeting Vp of |Vp| - |e ∩ Vp|.

    Rejects the degenerate case where no edge meets Vp (empty max).
    """
    Vp = frozenset(Vp)
    if not Vp <= G.nodes:
        raise ValueError(f"{sorted(Vp - G.nodes)} are not nodes of G")
    vals = [len(Vp) - len(e & Vp) for e in G.edges if e & Vp]
    if not vals:
        raise ValueError("gap undefined: no edge intersects the given node set")
    return max(vals)


def _step_gap(G: Hypergraph, N: FrozenSet[NodeId]) -> int:
    # Steps meeting no edges contribute nothing to an order's gap.
    vals = [len(N) - len(e & N) for e in G.edges if e & N]
    return max(vals) if vals else 0


def _is_chain(family: Iterable[FrozenSet[NodeId]]) -> bool:
    sets = sorted(set(family), key=len)
    for a, b in zip(sets, sets[1:]):
        if not a <= b:
            return False
    return True


def is_nest_point(G: Hypergraph, v: NodeId) -> bool:
    """True iff the edges containing v form an inclusion chain."""
    if v not in G.nodes:
        raise ValueError(f"{v!r} is not a node of G")
    return _is_chain(e for e in G.edges if v in e)


def is_nest_set(G: Hypergraph, N: Iterable[NodeId]) -> bool:
    """True iff the residuals e \\ N of edges meeting N form an inclusion chain."""
    N = frozenset(N)
    if not N:
        raise ValueError("a nest-set must be nonempty")
    if not N <= G.nodes:
        raise ValueError(f"{sorted(N - G.nodes)} are not nodes of G")
    return _is_chain(e - N for e in G.edges if e & N)


@dataclass(frozen=True)
class EliminationOrder:
    """A nest-set elimination order with its per-step gap records."""

    steps: Tuple[FrozenSet[NodeId], ...]
    step_gaps: Tuple[int, ...]
    width: int
    order_gap: int

    @staticmethod
    def build(G: Hypergraph, steps: Sequence[Iterable[NodeId]]) -> "EliminationOrder":
        """Replay the steps against G, verifying each one is a nest-set."""
        steps = tuple(frozenset(s) for s in steps)
        seen: set = set()
        for s in steps:
            if not s:
                raise ValueError("empty step in elimination order")
            if s & seen:
                raise ValueError("steps must be pairwise disjoint")
            seen |= s
        if seen != G.nodes:
            raise ValueError("steps do not partition the node set")
        gaps: List[int] = []
        work = G
        for s in steps:
            if not is_nest_set(work, s):
                raise ValueError(f"step {sorted(s)} is not a nest-set of the residual hypergraph")
            gaps.append(_step_gap(work, s))
            work = work.delete(s)
        width = max((len(s) for s in steps), default=0)
        order_gap = max(gaps, default=0)
        if steps and not order_gap <= width - 1:
            raise AssertionError("order gap exceeds width - 1")  # cannot happen
        return EliminationOrder(steps, tuple(gaps), width, order_gap)

    def to_json(self) -> dict:
        return {
            "steps": [sorted(s) for s in self.steps],
            "width": self.width,
            "gap": self.order_gap,
        }

    @staticmethod
    def steps_from_json(data: dict) -> List[FrozenSet[NodeId]]:
        return [frozenset(step) for step in data["steps"]]


def _isolated(G: Hypergraph) -> List[NodeId]:
    covered = set().union(*G.edges) if G.edges else set()
    return sorted(G.nodes - covered)


def beta_acyclic(G: Hypergraph) -> Optional[EliminationOrder]:
    """A nest point elimination order if one exists, else None.

    Greedy removal of the lexicographically least nest point; absence of
    any nest point on a nonempty residual certifies a beta-cycle exists.
    """
    work = G
    steps: List[FrozenSet[NodeId]] = []
    while work.nodes:
        pick = None
        for v in work.nodes_sorted():
            if is_nest_point(work, v):
                pick = v
                break
        if pick is None:
            return None
        steps.append(frozenset((pick,)))
        work = work.delete((pick,))
    return EliminationOrder.build(G, steps)


def _candidate_subsets(nodes: Sequence[NodeId], max_size: int):
    for size in range(1, max_size + 1):
        yield from itertools.combinations(nodes, size)


def _search_order(
    G: Hypergraph,
    admissible,
    max_step_size: int,
) -> Optional[List[FrozenSet[NodeId]]]:
    """Backtracking search for an elimination order, one nest-set per step.

    `admissible(work, N)` decides whether candidate nest-set N may be used
    on residual hypergraph `work`. Candidates are tried in increasing size
    then lexicographic order; failures memoize on the residual hypergraph.
    """
    dead: set = set()

    def recurse(work: Hypergraph) -> Optional[List[FrozenSet[NodeId]]]:
        if not work.nodes:
            return []
        if work in dead:
            return None
        # Isolated nodes are always gap-0 singleton nest-sets; peeling them
        # first never hurts width or gap and shrinks the search.
        iso = _isolated(work)
        if iso:
            tail = recurse(work.delete(iso))
            if tail is None:
                dead.add(work)
                return None
            return [frozenset((v,)) for v in iso] + tail
        nodes = work.nodes_sorted()
        for cand in _candidate_subsets(nodes, min(max_step_size, len(nodes))):
            N = frozenset(cand)
            if not is_nest_set(work, N):
                continue
            if not admissible(work, N):
                continue
            tail = recurse(work.delete(N))
            if tail is not None:
                return [N] + tail
        dead.add(work)
        return None

    return recurse(G)


def find_order_bounded_width(G: Hypergraph, k: int) -> Optional[EliminationOrder]:
    """An elimination order of width <= k, or None if none exists."""
    if k < 1:
        raise ValueError("width bound must be >= 1")
    steps = _search_order(G, lambda work, N: True, max_step_size=k)
    return EliminationOrder.build(G, steps) if steps is not None else None


def find_order_bounded_gap(G: Hypergraph, k: int) -> Optional[EliminationOrder]:
    """An elimination order whose every step gap is <= k, or None.

    Steps of any cardinality are considered; tractable at desk scale only.
    """
    if k < 0:
        raise ValueError("gap bound must be >= 0")
    steps = _search_order(
        G, lambda work, N: _step_gap(work, N) <= k, max_step_size=len(G.nodes)
    )
    return EliminationOrder.build(G, steps) if steps is not None else None


def _check_desk_scale(G: Hypergraph, limit: int, what: str) -> None:
    if len(G.nodes) > limit:
        raise ValueError(f"{what} limited to {limit} nodes, got {len(G.nodes)}")


def nsw_exact(G: Hypergraph, limit: int = DESK_SCALE_LIMIT) -> int:
    """Exact nest-set width: least k admitting an order of width <= k."""
    _check_desk_scale(G, limit, "nsw_exact")
    if not G.nodes:
        return 0
    for k in range(1, len(G.nodes) + 1):
        if find_order_bounded_width(G, k) is not None:
            return k
    raise AssertionError("no elimination order found")  # k = |V| always works


def nsg_exact(G: Hypergraph, limit: int = DESK_SCALE_LIMIT) -> int:
    """Exact nest-set gap: least k admitting an order of step gaps <= k."""
    _check_desk_scale(G, limit, "nsg_exact")
    if not G.nodes:
        return 0
    for k in range(0, len(G.nodes)):
        if find_order_bounded_gap(G, k) is not None:
            return k
    raise AssertionError("no elimination order found")


@dataclass(frozen=True)
class BetaCycle:
    """Alternating node/edge cycle v1,e1,v2,e2,...,vl,el,v1 with l >= 3."""

    nodes: Tuple[NodeId, ...]
    edges: Tuple[FrozenSet[NodeId], ...]

    def __len__(self) -> int:
        return len(self.nodes)

    def to_json(self) -> dict:
        return {"nodes": list(self.nodes), "edges": [sorted(e) for e in self.edges]}

    @staticmethod
    def from_json(data: dict) -> "BetaCycle":
        return BetaCycle(tuple(data["nodes"]), tuple(frozenset(e) for e in data["edges"]))


def verify_beta_cycle(G: Hypergraph, cand: BetaCycle) -> bool:
    """Exact check of the beta-cycle conditions against G."""
    ell = len(cand.nodes)
    if ell < 3 or len(cand.edges) != ell:
        return False
    if len(set(cand.nodes)) != ell or len(set(cand.edges)) != ell:
        return False
    if any(e not in G.edges for e in cand.edges):
        return False
    for i in range(ell):
        v = cand.nodes[i]
        prev_e = cand.edges[(i - 1) % ell]
        cur_e = cand.edges[i]
        if v not in prev_e or v not in cur_e:
            return False
        for j, e in enumerate(cand.edges):
            if j in ((i - 1) % ell, i):
                continue
            if v in e:
                return False
    return True


def find_beta_cycle(G: Hypergraph, limit: int = DESK_SCALE_LIMIT) -> Optional[BetaCycle]:
    """Exhaustive search for a beta-cycle, shortest first; None when acyclic.

    Symmetry broken by anchoring the lexicographically least edge first and
    orienting so the second edge is below the last.
    """
    _check_desk_scale(G, limit, "find_beta_cycle")
    edges = list(G.edges_sorted())
    m = len(edges)
    if m < 3:
        return None
    keys = {e: edge_key(e) for e in edges}

    def extend(ell: int, seq_e: List[FrozenSet[NodeId]], seq_v: List[NodeId]) -> Optional[BetaCycle]:
        t = len(seq_e)
        if t == ell:
            # close the cycle: v1 in e_l ∩ e_1, excluded from all others
            last, first = seq_e[-1], seq_e[0]
            inner = seq_e[1:-1]
            for v1 in sorted(last & first):
                if v1 in seq_v:
                    continue
                if any(v1 in e for e in inner):
                    continue
                cyc = BetaCycle(tuple([v1] + seq_v), tuple(seq_e))
                if verify_beta_cycle(G, cyc):
                    return cyc
            return None
        for e in edges:
            if keys[e] <= keys[seq_e[0]] or e in seq_e:
                continue
            if t == ell - 1 and keys[seq_e[1]] >= keys[e]:
                continue  # reflection: force second edge below last
            # every placed cycle node lives only in its two adjacent edges
            if any(v in e for v in seq_v):
                continue
            for v in sorted(seq_e[-1] & e):
                if v in seq_v:
                    continue
                if any(v in f for f in seq_e[:-1]):
                    continue
                res = extend(ell, seq_e + [e], seq_v + [v])
                if res is not None:
                    return res
        return None

    for ell in range(3, m + 1):
        for e1 in edges:
            res = extend(ell, [e1], [])
            if res is not None:
                return res
    return None


def nsw_lower_bound_from_cycle(G: Hypergraph, cycle: BetaCycle) -> int:
    """Lower bound on nest-set width from a verified beta-cycle.

    U_i is the private part of e_{i-1} ∩ e_i; the bound is the minimum over
    k of the sum of the other |U_j|.
    """
    if not verify_beta_cycle(G, cycle):
        raise ValueError("candidate is not a beta-cycle of G")
    ell = len(cycle.nodes)
    U: List[FrozenSet[NodeId]] = []
    for i in range(ell):
        prev_e = cycle.edges[(i - 1) % ell]
        cur_e = cycle.edges[i]
        others = [cycle.edges[j] for j in range(ell) if j not in ((i - 1) % ell, i)]
        out = prev_e & cur_e
        for o in others:
            out = out - o
        U.append(out)
    total = sum(len(u) for u in U)
    return min(total - len(U[k]) for k in range(ell))


def cycle_private_sets(cycle: BetaCycle) -> List[FrozenSet[NodeId]]:
    """The U_j sets of a beta-cycle, in cycle order."""
    ell = len(cycle.nodes)
    out = []
    for i in range(ell):
        prev_e = cycle.edges[(i - 1) % ell]
        cur_e = cycle.edges[i]
        s = prev_e & cur_e
        for j in range(ell):
            if j not in ((i - 1) % ell, i):
                s = s - cycle.edges[j]
        out.append(s)
    return out


def treewidth_upper_bound(G: Hypergraph) -> int:
    """Min-fill elimination width of a graph; an upper bound on treewidth."""
    if G.edges and G.rank() > 2:
        raise ValueError("treewidth_upper_bound expects a graph (rank <= 2)")
    adj: Dict[NodeId, set] = {v: set() for v in G.nodes}
    for e in G.edges:
        u, v = sorted(e)
        adj[u].add(v)
        adj[v].add(u)
    width = 0
    remaining = set(G.nodes)
    while remaining:
        best, best_fill = None, None
        for v in sorted(remaining):
            nb = adj[v]
            fill = sum(
                1
                for a, b in itertools.combinations(sorted(nb), 2)
                if b not in adj[a]
            )
            if best_fill is None or fill < best_fill:
                best, best_fill = v, fill
        nb = sorted(adj[best])
        width = max(width, len(nb))
        for a, b in itertools.combinations(nb, 2):
            adj[a].add(b)
            adj[b].add(a)
        for a in nb:
            adj[a].discard(best)
        del adj[best]
        remaining.discard(best)
    return width
