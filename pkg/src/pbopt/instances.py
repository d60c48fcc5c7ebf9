"""Optimization instances over (signed) hypergraphs, and their file formats.

The JSON instance format carries exact rational costs as strings:

    {"nodes": ["a","b"], "node_costs": {"a": "3/2"},
     "signed_edges": [{"literals": {"a": 1, "b": -1}, "cost": "-2"}],
     "offset": "0"}

Missing costs default to 0. BQO instances reuse the same format with
all-positive rank-2 signed edges. Max-2SAT input is DIMACS CNF with
clause length at most two.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, FrozenSet, List, Mapping, Sequence, Tuple

from .hypergraph import Hypergraph, NodeId, SignedEdge, SignedHypergraph, edge_key
from .rationals import format_rational, parse_rational


class InstanceFormatError(ValueError):
    """Raised on malformed instance files, with a positioned message."""


@dataclass(frozen=True)
class PboInstance:
    """Costs on nodes and signed edges of a signed hypergraph, plus an offset."""

    hypergraph: SignedHypergraph
    node_costs: Mapping[NodeId, Fraction] = field(default_factory=dict)
    edge_costs: Mapping[SignedEdge, Fraction] = field(default_factory=dict)
    offset: Fraction = Fraction(0)

    def __post_init__(self):
        for v in self.node_costs:
            if v not in self.hypergraph.nodes:
                raise InstanceFormatError(f"cost on unknown node {v!r}")
        for s in self.edge_costs:
            if s not in self.hypergraph.signed_edges:
                raise InstanceFormatError(f"cost on unknown signed edge {s.key()}")

    def node_cost(self, v: NodeId) -> Fraction:
        return self.node_costs.get(v, Fraction(0))

    def edge_cost(self, s: SignedEdge) -> Fraction:
        return self.edge_costs.get(s, Fraction(0))

    def value(self, assignment: Mapping[NodeId, int]) -> Fraction:
        out = Fraction(self.offset)
        for v, c in self.node_costs.items():
            out += c * assignment[v]
        for s, c in self.edge_costs.items():
            out += c * s.evaluate(assignment)
        return out


@dataclass(frozen=True)
class BqoInstance:
    """Binary quadratic optimization instance on a graph."""

    graph: Hypergraph
    node_costs: Mapping[NodeId, Fraction] = field(default_factory=dict)
    edge_costs: Mapping[FrozenSet[NodeId], Fraction] = field(default_factory=dict)
    offset: Fraction = Fraction(0)

    def __post_init__(self):
        if self.graph.edges and self.graph.rank() > 2:
            raise InstanceFormatError("BQO instances live on graphs (rank <= 2)")
        for v in self.node_costs:
            if v not in self.graph.nodes:
                raise InstanceFormatError(f"cost on unknown node {v!r}")
        for e in self.edge_costs:
            if frozenset(e) not in self.graph.edges:
                raise InstanceFormatError(f"cost on unknown edge {sorted(e)}")

    def node_cost(self, v: NodeId) -> Fraction:
        return self.node_costs.get(v, Fraction(0))

    def edge_cost(self, e: FrozenSet[NodeId]) -> Fraction:
        return self.edge_costs.get(frozenset(e), Fraction(0))

    def value(self, assignment: Mapping[NodeId, int]) -> Fraction:
        out = Fraction(self.offset)
        for v, c in self.node_costs.items():
            out += c * assignment[v]
        for e, c in self.edge_costs.items():
            prod = 1
            for v in e:
                prod *= assignment[v]
            out += c * prod
        return out

    def to_pbo(self) -> PboInstance:
        """The same objective as an all-positive PBO instance."""
        edges = {}
        costs = {}
        for e, c in self.edge_costs.items():
            s = SignedEdge.of({v: 1 for v in e})
            edges[s.key()] = s
            costs[s] = c
        H = SignedHypergraph(self.graph.nodes, edges.values())
        return PboInstance(H, dict(self.node_costs), costs, self.offset)


def pbo_to_json(inst: PboInstance) -> dict:
    edges_sorted = inst.hypergraph.edges_sorted()
    return {
        "nodes": list(inst.hypergraph.nodes_sorted()),
        "node_costs": {
            v: format_rational(c) for v, c in sorted(inst.node_costs.items()) if c != 0
        },
        "signed_edges": [
            {
                "literals": {v: sg for v, sg in s.literals},
                "cost": format_rational(inst.edge_cost(s)),
            }
            for s in edges_sorted
        ],
        "offset": format_rational(inst.offset),
    }


def pbo_from_json(data: dict) -> PboInstance:
    if not isinstance(data, dict):
        raise InstanceFormatError("instance file must be a JSON object")
    try:
        nodes = list(data["nodes"])
    except KeyError:
        raise InstanceFormatError("missing 'nodes'") from None
    if len(set(nodes)) != len(nodes):
        dup = sorted(v for v in set(nodes) if nodes.count(v) > 1)
        raise InstanceFormatError(f"duplicate node ids: {dup}")
    seen: Dict[str, int] = {}
    edges: List[SignedEdge] = []
    costs: Dict[SignedEdge, Fraction] = {}
    for i, item in enumerate(data.get("signed_edges", [])):
        where = f"signed_edges[{i}]"
        try:
            lits = item["literals"]
        except (KeyError, TypeError):
            raise InstanceFormatError(f"{where}: missing 'literals'") from None
        try:
            s = SignedEdge.of({str(v): int(sg) for v, sg in lits.items()})
        except ValueError as exc:
            raise InstanceFormatError(f"{where}: {exc}") from None
        if s.key() in seen:
            raise InstanceFormatError(
                f"{where}: identical to signed_edges[{seen[s.key()]}]"
            )
        seen[s.key()] = i
        edges.append(s)
        c = parse_rational(item.get("cost", "0"))
        if c != 0:
            costs[s] = c
    try:
        H = SignedHypergraph(nodes, edges)
    except ValueError as exc:
        raise InstanceFormatError(str(exc)) from None
    node_costs = {
        str(v): parse_rational(c)
        for v, c in data.get("node_costs", {}).items()
        if parse_rational(c) != 0
    }
    for v in node_costs:
        if v not in H.nodes:
            raise InstanceFormatError(f"node_costs: unknown node {v!r}")
    return PboInstance(H, node_costs, costs, parse_rational(data.get("offset", "0")))


def bqo_to_json(inst: BqoInstance) -> dict:
    return pbo_to_json(inst.to_pbo())


def bqo_from_json(data: dict) -> BqoInstance:
    """Read a BQO instance: the format's edges must be rank-2, all-positive."""
    pbo = pbo_from_json(data)
    edges = set()
    costs: Dict[FrozenSet[NodeId], Fraction] = {}
    for s in pbo.hypergraph.edges_sorted():
        if len(s) != 2 or any(sg < 0 for _, sg in s.literals):
            raise InstanceFormatError(
                f"signed edge {s.key()} is not an all-positive pair; not a BQO instance"
            )
        edges.add(s.nodes)
        c = pbo.edge_cost(s)
        if c != 0:
            costs[s.nodes] = c
    G = Hypergraph(pbo.hypergraph.nodes, edges)
    return BqoInstance(G, dict(pbo.node_costs), costs, pbo.offset)


def load_pbo(path: str) -> PboInstance:
    return pbo_from_json(_load_json(path))


def load_bqo(path: str) -> BqoInstance:
    return bqo_from_json(_load_json(path))


def save_json(path: str, data: dict) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(data, fh, indent=1, sort_keys=True)
        fh.write("\n")


def _load_json(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceFormatError(
            f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}"
        ) from None


Literal = Tuple[str, bool]  # (variable, is_positive)


@dataclass(frozen=True)
class TwoCnf:
    """CNF with clauses of one or two literals; duplicate clauses allowed."""

    variables: Tuple[str, ...]
    clauses: Tuple[Tuple[Literal, ...], ...]

    def __post_init__(self):
        for cl in self.clauses:
            if not 1 <= len(cl) <= 2:
                raise InstanceFormatError(f"clause {cl} must have 1 or 2 literals")
            for var, _ in cl:
                if var not in self.variables:
                    raise InstanceFormatError(f"clause literal on unknown variable {var!r}")

    def satisfied_count(self, assignment: Mapping[str, int]) -> int:
        n = 0
        for cl in self.clauses:
            if any(assignment[v] == (1 if pos else 0) for v, pos in cl):
                n += 1
        return n


def parse_dimacs_2cnf(text: str) -> TwoCnf:
    """Parse DIMACS CNF, rejecting clauses with more than two literals."""
    nvars = None
    clauses: List[Tuple[Literal, ...]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c") or line.startswith("%"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise InstanceFormatError(f"line {lineno}: bad problem line {line!r}")
            nvars = int(parts[2])
            continue
        if nvars is None:
            raise InstanceFormatError(f"line {lineno}: clause before 'p cnf' header")
        try:
            lits = [int(tok) for tok in line.split()]
        except ValueError:
            raise InstanceFormatError(f"line {lineno}: bad clause {line!r}") from None
        if not lits or lits[-1] != 0:
            raise InstanceFormatError(f"line {lineno}: clause must end with 0")
        lits = lits[:-1]
        if not 1 <= len(lits) <= 2:
            raise InstanceFormatError(
                f"line {lineno}: clause has {len(lits)} literals; only 1 or 2 supported"
            )
        for lit in lits:
            if lit == 0 or abs(lit) > nvars:
                raise InstanceFormatError(f"line {lineno}: literal {lit} out of range")
        clauses.append(tuple((f"x{abs(l)}", l > 0) for l in lits))
    if nvars is None:
        raise InstanceFormatError("missing 'p cnf' header")
    return TwoCnf(tuple(f"x{i}" for i in range(1, nvars + 1)), tuple(clauses))
