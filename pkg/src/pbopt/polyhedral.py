"""Polyhedral systems: variables, rational linear constraints, LP-file IO.

Every variable of a system is implicitly bounded in [0, 1]; constraints
carry everything else. Systems are immutable once built.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .rationals import format_rational, parse_rational

KIND_NODE = "node"
KIND_EDGE = "signed-edge"
KIND_INFLATION = "inflation"
KIND_LAMBDA = "lambda"

LE, EQ, GE = "<=", "=", ">="


@dataclass(frozen=True)
class Variable:
    kind: str
    key: str


@dataclass(frozen=True)
class Constraint:
    """coeffs . x  (relation)  rhs, with exact rational data."""

    coeffs: Tuple[Tuple[str, Fraction], ...]  # sorted by variable key
    relation: str
    rhs: Fraction
    label: str = ""

    @staticmethod
    def of(coeffs: Mapping[str, Fraction], relation: str, rhs, label: str = "") -> "Constraint":
        if relation not in (LE, EQ, GE):
            raise ValueError(f"bad relation {relation!r}")
        items = tuple(sorted((k, Fraction(c)) for k, c in coeffs.items() if c != 0))
        return Constraint(items, relation, Fraction(rhs), label)

    def coeff_map(self) -> Dict[str, Fraction]:
        return dict(self.coeffs)


class PolyhedralSystem:
    """An ordered variable list, constraints, and designated projection keys."""

    __slots__ = ("variables", "constraints", "projection_keys", "_by_key")

    def __init__(
        self,
        variables: Sequence[Variable],
        constraints: Sequence[Constraint],
        projection_keys: Sequence[str],
    ):
        self.variables: Tuple[Variable, ...] = tuple(variables)
        self.constraints: Tuple[Constraint, ...] = tuple(constraints)
        self.projection_keys: Tuple[str, ...] = tuple(projection_keys)
        self._by_key = {v.key: v for v in self.variables}
        if len(self._by_key) != len(self.variables):
            raise ValueError("duplicate variable keys")
        missing = [k for k in self.projection_keys if k not in self._by_key]
        if missing:
            raise ValueError(f"projection keys not in system: {missing}")
        for c in self.constraints:
            for k, _ in c.coeffs:
                if k not in self._by_key:
                    raise ValueError(f"constraint references unknown variable {k!r}")

    def variable(self, key: str) -> Variable:
        return self._by_key[key]

    def var_keys(self) -> Tuple[str, ...]:
        return tuple(v.key for v in self.variables)

    def size_report(self) -> Tuple[int, int]:
        """(number of variables, number of constraints)."""
        return len(self.variables), len(self.constraints)

    def drop_constraint(self, index: int) -> "PolyhedralSystem":
        """A copy without constraint `index` (mutation testing aid)."""
        kept = [c for i, c in enumerate(self.constraints) if i != index]
        return PolyhedralSystem(self.variables, kept, self.projection_keys)

    def coefficient_values(self) -> set:
        vals = set()
        for c in self.constraints:
            vals.update(q for _, q in c.coeffs)
            vals.add(c.rhs)
        return vals


def _lp_name(index: int) -> str:
    return f"x{index + 1}"


def to_lp_format(sys: PolyhedralSystem) -> str:
    """CPLEX LP text with sequential names; meaning lives in the sidecar."""
    names = {v.key: _lp_name(i) for i, v in enumerate(sys.variables)}
    lines = ["\\ pbopt extended formulation", "Maximize", " obj:", "Subject To"]
    for i, c in enumerate(sys.constraints):
        terms = []
        for key, q in c.coeffs:
            if q.denominator != 1:
                raise ValueError("LP export requires integer coefficients")
            n = q.numerator
            sign = "-" if n < 0 else "+"
            mag = abs(n)
            coef = "" if mag == 1 else f"{mag} "
            terms.append(f"{sign} {coef}{names[key]}")
        if c.rhs.denominator != 1:
            raise ValueError("LP export requires integer right-hand sides")
        body = " ".join(terms) if terms else "0 " + _lp_name(0)
        lines.append(f" c{i + 1}: {body} {c.relation} {c.rhs.numerator}")
    lines.append("Bounds")
    for i, _ in enumerate(sys.variables):
        lines.append(f" 0 <= {_lp_name(i)} <= 1")
    lines.append("End")
    return "\n".join(lines) + "\n"


def sidecar(sys: PolyhedralSystem) -> dict:
    names = {v.key: _lp_name(i) for i, v in enumerate(sys.variables)}
    return {
        "format": "pbopt-ef-sidecar.v1",
        "variables": {
            names[v.key]: {"kind": v.kind, "key": v.key} for v in sys.variables
        },
        "projection": [names[k] for k in sys.projection_keys],
        "constraints": [
            {"name": f"c{i + 1}", "label": c.label}
            for i, c in enumerate(sys.constraints)
        ],
    }


def save_lp(sys: PolyhedralSystem, lp_path: str, sidecar_path: Optional[str] = None) -> None:
    with open(lp_path, "w", encoding="utf-8") as fh:
        fh.write(to_lp_format(sys))
    if sidecar_path:
        with open(sidecar_path, "w", encoding="utf-8") as fh:
            json.dump(sidecar(sys), fh, indent=1, sort_keys=True)
            fh.write("\n")


def _parse_lp_row(line: str) -> Tuple[str, Dict[str, int], str, int]:
    head, _, rest = line.partition(":")
    name = head.strip()
    for rel in (LE, GE, EQ):
        if f" {rel} " in rest:
            lhs, _, rhs = rest.partition(f" {rel} ")
            break
    else:
        raise ValueError(f"no relation in LP row: {line!r}")
    toks = lhs.split()
    coeffs: Dict[str, int] = {}
    sign, mag = 1, None
    for tok in toks:
        if tok == "+":
            sign, mag = 1, None
        elif tok == "-":
            sign, mag = -1, None
        elif tok.lstrip("+-").isdigit():
            mag = int(tok)
        else:
            c = sign * (1 if mag is None else mag)
            coeffs[tok] = coeffs.get(tok, 0) + c
            sign, mag = 1, None
    return name, coeffs, rel, int(rhs.strip())


def from_lp_format(lp_text: str, sidecar_data: dict) -> PolyhedralSystem:
    """Rebuild a system from our emitted LP text plus its sidecar."""
    if sidecar_data.get("format") != "pbopt-ef-sidecar.v1":
        raise ValueError("unrecognized sidecar format")
    varmeta = sidecar_data["variables"]
    labels = {c["name"]: c.get("label", "") for c in sidecar_data.get("constraints", [])}
    variables = []
    name_to_key = {}
    for name in sorted(varmeta, key=lambda n: int(n[1:])):
        meta = varmeta[name]
        variables.append(Variable(meta["kind"], meta["key"]))
        name_to_key[name] = meta["key"]
    constraints: List[Constraint] = []
    section = None
    for raw in lp_text.splitlines():
        line = raw.strip()
        if not line or line.startswith("\\"):
            continue
        low = line.lower()
        if low in ("maximize", "minimize"):
            section = "obj"
            continue
        if low == "subject to":
            section = "rows"
            continue
        if low in ("bounds", "end"):
            section = low
            continue
        if section != "rows":
            continue
        name, coeffs, rel, rhs = _parse_lp_row(line)
        cmap = {name_to_key[n]: Fraction(c) for n, c in coeffs.items() if c != 0}
        constraints.append(Constraint.of(cmap, rel, Fraction(rhs), labels.get(name, "")))
    projection = [name_to_key[n] for n in sidecar_data["projection"]]
    return PolyhedralSystem(variables, constraints, projection)


def load_lp(lp_path: str, sidecar_path: str) -> PolyhedralSystem:
    with open(lp_path, "r", encoding="utf-8") as fh:
        lp_text = fh.read()
    with open(sidecar_path, "r", encoding="utf-8") as fh:
        side = json.load(fh)
    return from_lp_format(lp_text, side)
