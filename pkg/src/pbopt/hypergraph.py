"""Hypergraphs and signed hypergraphs.

Node identity is a plain string id. Every collection iterates in a
canonical order (lexicographic ids, canonical edge keys) so that all
derived constructions are deterministic.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import FrozenSet, Iterable, Mapping, Optional, Tuple

NodeId = str


def edge_key(edge: Iterable[NodeId]) -> Tuple[NodeId, ...]:
    """Canonical sort key for an unsigned edge."""
    return tuple(sorted(edge))


class Hypergraph:
    """A finite node set plus a set of edges, each a node subset of size >= 2."""

    __slots__ = ("nodes", "edges", "_hash")

    def __init__(self, nodes: Iterable[NodeId], edges: Iterable[Iterable[NodeId]] = ()):
        self.nodes: FrozenSet[NodeId] = frozenset(nodes)
        self.edges: FrozenSet[FrozenSet[NodeId]] = frozenset(frozenset(e) for e in edges)
        self._hash: Optional[int] = None
        for v in self.nodes:
            if not isinstance(v, str) or not v:
                raise ValueError(f"node ids must be nonempty strings, got {v!r}")
        for e in self.edges:
            if len(e) < 2:
                raise ValueError(f"edge {sorted(e)} has cardinality < 2")
            if not e <= self.nodes:
                raise ValueError(f"edge {sorted(e)} not contained in node set")

    def nodes_sorted(self) -> Tuple[NodeId, ...]:
        return tuple(sorted(self.nodes))

    def edges_sorted(self) -> Tuple[FrozenSet[NodeId], ...]:
        return tuple(sorted(self.edges, key=edge_key))

    def rank(self) -> int:
        """Maximum edge cardinality. Rejects an edgeless hypergraph."""
        if not self.edges:
            raise ValueError("rank undefined: hypergraph has no edges")
        return max(len(e) for e in self.edges)

    def edges_at(self, v: NodeId) -> Tuple[FrozenSet[NodeId], ...]:
        return tuple(e for e in self.edges_sorted() if v in e)

    def delete(self, remove: Iterable[NodeId]) -> "Hypergraph":
        """G - N: drop nodes, keep edge residuals of cardinality >= 2."""
        remove = frozenset(remove)
        if not remove <= self.nodes:
            raise ValueError(f"cannot delete {sorted(remove - self.nodes)}: not nodes of G")
        residuals = {e - remove for e in self.edges}
        return Hypergraph(self.nodes - remove, (r for r in residuals if len(r) >= 2))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Hypergraph):
            return NotImplemented
        return self.nodes == other.nodes and self.edges == other.edges

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.nodes, self.edges))
        return self._hash

    def __repr__(self) -> str:
        es = ",".join("{" + ",".join(edge_key(e)) + "}" for e in self.edges_sorted())
        return f"Hypergraph(V={{{','.join(self.nodes_sorted())}}}, E=[{es}])"


@dataclass(frozen=True)
class SignedEdge:
    """A node subset with a {-1,+1} sign per node.

    Identity is the full (node, sign) map; two parallel edges with
    different sign maps are distinct objects.
    """

    literals: Tuple[Tuple[NodeId, int], ...]  # sorted by node id

    @staticmethod
    def of(signs: Mapping[NodeId, int]) -> "SignedEdge":
        if len(signs) < 2:
            raise ValueError(f"signed edge needs >= 2 nodes, got {dict(signs)}")
        for v, sg in signs.items():
            if sg not in (-1, 1):
                raise ValueError(f"sign of {v!r} must be -1 or +1, got {sg!r}")
        return SignedEdge(tuple(sorted(signs.items())))

    @property
    def nodes(self) -> FrozenSet[NodeId]:
        return frozenset(v for v, _ in self.literals)

    def sign(self, v: NodeId) -> int:
        for u, sg in self.literals:
            if u == v:
                return sg
        raise KeyError(v)

    def signs(self) -> Mapping[NodeId, int]:
        return dict(self.literals)

    def key(self) -> str:
        """Canonical text encoding, also the dedup key: 'a+,b-,c+'."""
        return ",".join(f"{v}{'+' if s > 0 else '-'}" for v, s in self.literals)

    @staticmethod
    def from_key(key: str) -> "SignedEdge":
        signs = {}
        for lit in key.split(","):
            v, sg = lit[:-1], lit[-1]
            if sg not in "+-" or not v:
                raise ValueError(f"bad literal {lit!r} in signed-edge key {key!r}")
            signs[v] = 1 if sg == "+" else -1
        return SignedEdge.of(signs)

    def restrict(self, keep_out: FrozenSet[NodeId]) -> Optional["SignedEdge"]:
        """s - N: drop the given nodes, or None if fewer than 2 literals remain."""
        kept = tuple((v, s) for v, s in self.literals if v not in keep_out)
        return SignedEdge(kept) if len(kept) >= 2 else None

    def evaluate(self, assignment: Mapping[NodeId, int]) -> int:
        """Product of literals sigma_s(z_v) at a binary point."""
        out = 1
        for v, sg in self.literals:
            lit = assignment[v] if sg > 0 else 1 - assignment[v]
            if lit == 0:
                return 0
            out *= lit
        return out

    def __len__(self) -> int:
        return len(self.literals)

    def __repr__(self) -> str:
        return f"SignedEdge({self.key()})"


class SignedHypergraph:
    """A node set plus a set of signed edges (parallel allowed, identical not)."""

    __slots__ = ("nodes", "signed_edges")

    def __init__(self, nodes: Iterable[NodeId], signed_edges: Iterable[SignedEdge] = ()):
        self.nodes: FrozenSet[NodeId] = frozenset(nodes)
        seen = {}
        for s in signed_edges:
            if s.key() in seen:
                raise ValueError(f"identical signed edges: {s.key()}")
            seen[s.key()] = s
        self.signed_edges: FrozenSet[SignedEdge] = frozenset(seen.values())
        for v in self.nodes:
            if not isinstance(v, str) or not v:
                raise ValueError(f"node ids must be nonempty strings, got {v!r}")
        for s in self.signed_edges:
            if not s.nodes <= self.nodes:
                raise ValueError(f"signed edge {s.key()} not contained in node set")

    def nodes_sorted(self) -> Tuple[NodeId, ...]:
        return tuple(sorted(self.nodes))

    def edges_sorted(self) -> Tuple[SignedEdge, ...]:
        return tuple(sorted(self.signed_edges, key=lambda s: (edge_key(s.nodes), s.key())))

    def edges_at(self, v: NodeId) -> Tuple[SignedEdge, ...]:
        return tuple(s for s in self.edges_sorted() if v in s.nodes)

    def delete(self, remove: Iterable[NodeId]) -> "SignedHypergraph":
        """H - N: restrict each signed edge, drop short residuals, dedup."""
        remove = frozenset(remove)
        if not remove <= self.nodes:
            raise ValueError(f"cannot delete {sorted(remove - self.nodes)}: not nodes of H")
        survivors = {}
        for s in self.signed_edges:
            r = s.restrict(remove)
            if r is not None:
                survivors[r.key()] = r
        return SignedHypergraph(self.nodes - remove, survivors.values())

    def replace_edges(self, signed_edges: Iterable[SignedEdge]) -> "SignedHypergraph":
        return SignedHypergraph(self.nodes, signed_edges)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SignedHypergraph):
            return NotImplemented
        return self.nodes == other.nodes and self.signed_edges == other.signed_edges

    def __hash__(self) -> int:
        return hash((self.nodes, self.signed_edges))

    def __repr__(self) -> str:
        es = ";".join(s.key() for s in self.edges_sorted())
        return f"SignedHypergraph(V={{{','.join(self.nodes_sorted())}}}, S=[{es}])"


def underlying_hypergraph(H: SignedHypergraph) -> Hypergraph:
    """Forget signs, merge parallel edges."""
    return Hypergraph(H.nodes, {s.nodes for s in H.signed_edges})


def multilinear_hypergraph(H: SignedHypergraph) -> Hypergraph:
    """Edges are (positive part) + (any subset of the negative part), size >= 2."""
    edges = set()
    for s in H.signed_edges:
        pos = frozenset(v for v, sg in s.literals if sg > 0)
        neg = sorted(v for v, sg in s.literals if sg < 0)
        for k in range(len(neg) + 1):
            for t in itertools.combinations(neg, k):
                m = pos | frozenset(t)
                if len(m) >= 2:
                    edges.add(m)
    return Hypergraph(H.nodes, edges)


def intersection_graph(G: Hypergraph) -> Hypergraph:
    """Graph joining every node pair that co-occurs in some edge."""
    pairs = set()
    for e in G.edges:
        for u, v in itertools.combinations(sorted(e), 2):
            pairs.add(frozenset((u, v)))
    return Hypergraph(G.nodes, pairs)


def incidence_node_id(e: FrozenSet[NodeId]) -> NodeId:
    return "e{" + ",".join(edge_key(e)) + "}"


def incidence_graph(G: Hypergraph) -> Hypergraph:
    """Bipartite node/edge membership graph; edge vertices get synthetic ids."""
    nodes = set(G.nodes)
    edges = set()
    for e in G.edges:
        ev = incidence_node_id(e)
        nodes.add(ev)
        for v in e:
            edges.add(frozenset((v, ev)))
    return Hypergraph(nodes, edges)
