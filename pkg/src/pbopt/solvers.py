"""Exact oracles: enumeration, brute force, rational LP, and EF verification.

Everything here is exact; the randomized verifier compares LP maxima
over a compiled system against brute-force maxima over the
pseudo-Boolean set, demanding rational equality.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .compiler import edge_var_key, node_var_key
from .hypergraph import SignedHypergraph
from .instances import BqoInstance, PboInstance
from .polyhedral import PolyhedralSystem
from .rationals import format_rational
from .simplex import ExactLP, INFEASIBLE, OPTIMAL, UNBOUNDED

ENUM_LIMIT = 20


def enumerate_pbs(
    H: SignedHypergraph, limit: int = ENUM_LIMIT
) -> Tuple[Tuple[str, ...], List[Tuple[int, ...]]]:
    """All 2^|V| points of PBS(H) in (node vars, signed-edge vars) coordinates."""
    nodes = H.nodes_sorted()
    if len(nodes) > limit:
        raise ValueError(f"enumeration limited to {limit} nodes, got {len(nodes)}")
    edges = H.edges_sorted()
    keys = tuple(node_var_key(v) for v in nodes) + tuple(edge_var_key(s) for s in edges)
    points = []
    for bits in _binary_assignments(len(nodes)):
        asg = dict(zip(nodes, bits))
        points.append(bits + tuple(s.evaluate(asg) for s in edges))
    return keys, points


def _binary_assignments(n: int):
    for mask in range(1 << n):
        yield tuple((mask >> (n - 1 - i)) & 1 for i in range(n))


def brute_force_solve(inst, limit: int = ENUM_LIMIT):
    """Exact maximum (offset included) and the full argmax set.

    Accepts PboInstance or BqoInstance; returns (optimum, assignments)
    where each assignment is a node -> {0,1} dict.
    """
    if isinstance(inst, BqoInstance):
        nodes = inst.graph.nodes_sorted()
    elif isinstance(inst, PboInstance):
        nodes = inst.hypergraph.nodes_sorted()
    else:
        raise TypeError(f"cannot solve {type(inst).__name__}")
    if len(nodes) > limit:
        raise ValueError(f"brute force limited to {limit} nodes, got {len(nodes)}")
    best: Optional[Fraction] = None
    argmax: List[Dict[str, int]] = []
    for bits in _binary_assignments(len(nodes)):
        asg = dict(zip(nodes, bits))
        v = inst.value(asg)
        if best is None or v > best:
            best, argmax = v, [asg]
        elif v == best:
            argmax.append(asg)
    return best, argmax


@dataclass(frozen=True)
class LpResult:
    status: str  # optimal | infeasible | unbounded
    value: Optional[Fraction]
    witness: Optional[Dict[str, Fraction]]


def build_lp(sys: PolyhedralSystem) -> ExactLP:
    """An exact LP over the system with the implicit [0,1] bounds."""
    keys = sys.var_keys()
    uppers = {k: Fraction(1) for k in keys}
    rows = [(c.coeff_map(), c.relation, c.rhs) for c in sys.constraints]
    return ExactLP(keys, uppers, rows)


def _check_witness(sys: PolyhedralSystem, witness: Mapping[str, Fraction]) -> None:
    for c in sys.constraints:
        lhs = sum((q * witness[k] for k, q in c.coeffs), Fraction(0))
        ok = (
            lhs <= c.rhs
            if c.relation == "<="
            else lhs >= c.rhs if c.relation == ">=" else lhs == c.rhs
        )
        if not ok:
            raise AssertionError(f"witness violates constraint {c}")
    for k, v in witness.items():
        if not 0 <= v <= 1:
            raise AssertionError(f"witness out of bounds at {k}: {v}")


def lp_max(sys: PolyhedralSystem, objective: Mapping[str, Fraction]) -> LpResult:
    """Exact LP maximum over the system; witness satisfies every row exactly."""
    lp = build_lp(sys)
    status, value, witness = lp.maximize(objective)
    if status != OPTIMAL:
        return LpResult(status, None, None)
    _check_witness(sys, witness)
    return LpResult(OPTIMAL, value, witness)


@dataclass(frozen=True)
class TrialFailure:
    trial: int
    objective: Tuple[Tuple[str, int], ...]
    lp_status: str
    lp_value: Optional[Fraction]
    oracle_value: Fraction

    def to_json(self) -> dict:
        return {
            "trial": self.trial,
            "objective": {k: c for k, c in self.objective},
            "lp_status": self.lp_status,
            "lp_value": None if self.lp_value is None else format_rational(self.lp_value),
            "oracle_value": format_rational(self.oracle_value),
        }


@dataclass(frozen=True)
class VerificationReport:
    trials: int
    seed: int
    failures: Tuple[TrialFailure, ...] = ()

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {
            "trials": self.trials,
            "seed": self.seed,
            "passed": self.passed,
            "failures": [f.to_json() for f in self.failures],
        }


def verify_ef(
    H: SignedHypergraph,
    sys: PolyhedralSystem,
    trials: int,
    seed: int,
    coeff_range: Tuple[int, int] = (-10, 10),
    fail_fast: bool = False,
    enum_limit: int = ENUM_LIMIT,
) -> VerificationReport:
    """Randomized exactness check of a compiled system against PBS(H).

    Each trial draws an integer objective on the projection variables and
    requires the LP maximum over the system to equal the brute-force
    maximum over the pseudo-Boolean set, as exact rationals. Trials are
    deterministic given (seed, trial index).
    """
    keys, points = enumerate_pbs(H, limit=enum_limit)
    key_pos = {k: i for i, k in enumerate(keys)}
    unknown = [k for k in sys.projection_keys if k not in key_pos]
    if unknown:
        raise ValueError(f"projection variables outside V and S of H: {unknown}")
    lp = build_lp(sys)
    lo, hi = coeff_range
    failures: List[TrialFailure] = []
    for t in range(trials):
        rng = random.Random(f"{seed}:{t}")
        obj_items = tuple((k, rng.randint(lo, hi)) for k in sys.projection_keys)
        objective = {k: Fraction(c) for k, c in obj_items}
        status, lp_value, _ = lp.maximize(objective)
        cols = [(key_pos[k], c) for k, c in obj_items if c != 0]
        oracle = max(sum(c * p[i] for i, c in cols) for p in points)
        oracle = Fraction(oracle)
        if status != OPTIMAL or lp_value != oracle:
            failures.append(TrialFailure(t, obj_items, status, lp_value, oracle))
            if fail_fast:
                break
    return VerificationReport(trials, seed, tuple(failures))
