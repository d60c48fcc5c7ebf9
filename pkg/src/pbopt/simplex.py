"""Exact rational linear programming.

Bounded-variable primal simplex in dictionary form with an explicit
slack/artificial start, Dantzig pricing, and a switch to Bland's rule
after a run of degenerate pivots (anti-cycling). All arithmetic is
exact; no floating point anywhere.

The phase-1 basis is kept, so repeated maximize() calls on the same
constraint set (as in randomized verification) only pay for phase 2.
Entering and leaving choices are resolved by exact lexicographic
tie-breaks, so results do not depend on dict iteration order.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Set, Tuple

try:  # gmpy2 is optional; Fraction is the reference arithmetic
    from gmpy2 import mpq as _Q
except ImportError:  # pragma: no cover
    _Q = Fraction

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"

LE, EQ, GE = "<=", "=", ">="

_BLAND_AFTER = 40  # degenerate pivots tolerated before switching rules
_ZERO = _Q(0)
_ONE = _Q(1)


class ExactLP:
    """max c.x subject to rows, 0 <= x_j <= u_j (u_j None means +inf)."""

    def __init__(
        self,
        var_keys: Sequence[str],
        uppers: Mapping[str, Optional[Fraction]],
        rows: Iterable[Tuple[Mapping[str, Fraction], str, Fraction]],
    ):
        self.keys: List[str] = list(var_keys)
        self.index: Dict[str, int] = {k: j for j, k in enumerate(self.keys)}
        if len(self.index) != len(self.keys):
            raise ValueError("duplicate variable keys")
        self.upper: List[Optional[_Q]] = [
            None if uppers.get(k) is None else _Q(uppers[k]) for k in self.keys
        ]
        self._zero_row_violated = False
        norm_rows: List[Tuple[Dict[int, _Q], _Q]] = []
        self._n_struct = len(self.keys)
        next_col = self._n_struct
        for coeffs, rel, rhs in rows:
            row = {self.index[k]: _Q(c) for k, c in coeffs.items() if c != 0}
            b = _Q(rhs)
            if rel == GE:
                row = {j: -c for j, c in row.items()}
                b = -b
                rel = LE
            if not row:
                ok = (b >= 0) if rel == LE else (b == 0)
                if not ok:
                    self._zero_row_violated = True
                continue
            if rel == LE:
                row[next_col] = _ONE  # slack in [0, inf)
                self.upper.append(None)
                next_col += 1
            elif rel != EQ:
                raise ValueError(f"bad relation {rel!r}")
            norm_rows.append((row, b))
        self.T: List[Dict[int, _Q]] = []
        self.val: List[_Q] = []
        self.basis: List[int] = []
        self._art_first = next_col
        for row, b in norm_rows:
            if b < 0:
                row = {j: -c for j, c in row.items()}
                b = -b
            art = next_col
            next_col += 1
            self.upper.append(None)
            row[art] = _ONE
            self.T.append(row)
            self.val.append(b)
            self.basis.append(art)
        self._ncols = next_col
        self.at_upper: Set[int] = set()
        self.obj: Dict[int, _Q] = {}
        self._phase1_status: Optional[str] = None

    def _is_art(self, j: int) -> bool:
        return j >= self._art_first

    # -- simplex machinery -------------------------------------------------

    def _price_out(self, c: Dict[int, _Q]) -> None:
        obj = dict(c)
        basic = set(self.basis)
        for i, bi in enumerate(self.basis):
            cb = c.get(bi)
            if cb:
                for j, a in self.T[i].items():
                    if j != bi:
                        obj[j] = obj.get(j, _ZERO) - cb * a
        self.obj = {j: q for j, q in obj.items() if q and j not in basic}

    def _entering(self, bland: bool) -> Optional[Tuple[int, int]]:
        best: Optional[Tuple[int, int]] = None
        best_mag: Optional[_Q] = None
        for j, r in self.obj.items():
            if self._is_art(j):
                continue
            if j in self.at_upper:
                if r >= 0:
                    continue
                cand = (j, -1)
            else:
                if r <= 0:
                    continue
                cand = (j, 1)
            if bland:
                if best is None or j < best[0]:
                    best = cand
            else:
                mag = r if r > 0 else -r
                if (
                    best_mag is None
                    or mag > best_mag
                    or (mag == best_mag and j < best[0])
                ):
                    best, best_mag = cand, mag
        return best

    def _ratio(self, j: int, d: int):
        """Largest feasible step; (t, row) with row None meaning a bound flip."""
        best_t: Optional[_Q] = self.upper[j]  # own-bound span; None is +inf
        leave: Optional[int] = None
        for i, row in enumerate(self.T):
            a = row.get(j)
            if not a:
                continue
            ad = a * d
            if ad > 0:
                t = self.val[i] / ad
            else:
                ub = self.upper[self.basis[i]]
                if ub is None:
                    continue
                t = (ub - self.val[i]) / (-ad)
            if best_t is None or t < best_t:
                best_t, leave = t, i
            elif t == best_t and leave is not None and self.basis[i] < self.basis[leave]:
                leave = i
        if best_t is None:
            return None
        return best_t, leave

    def _flip(self, j: int, d: int, t: _Q) -> None:
        for i, row in enumerate(self.T):
            a = row.get(j)
            if a:
                self.val[i] -= a * d * t
        if j in self.at_upper:
            self.at_upper.discard(j)
        else:
            self.at_upper.add(j)

    def _pivot(self, j: int, d: int, r: int, t: _Q) -> None:
        x_cur = self.upper[j] if j in self.at_upper else _ZERO
        piv = self.T[r][j]
        if t:
            for i, row in enumerate(self.T):
                if i != r:
                    a = row.get(j)
                    if a:
                        self.val[i] -= a * d * t
        leaving = self.basis[r]
        leave_val = self.val[r] - piv * d * t
        if leave_val == 0:
            self.at_upper.discard(leaving)
        else:
            self.at_upper.add(leaving)  # left at its finite upper bound
        self.at_upper.discard(j)
        newrow = {col: q / piv for col, q in self.T[r].items()}
        self.T[r] = newrow
        items = newrow.items()
        for i, row in enumerate(self.T):
            if i == r:
                continue
            f = row.get(j)
            if f:
                for col, a in items:
                    cur = row.get(col)
                    if cur is None:
                        row[col] = -f * a
                    else:
                        new = cur - f * a
                        if new:
                            row[col] = new
                        else:
                            del row[col]
        fobj = self.obj.pop(j, None)
        if fobj:
            obj = self.obj
            for col, a in items:
                cur = obj.get(col)
                new = (cur if cur is not None else _ZERO) - fobj * a
                if new:
                    obj[col] = new
                elif cur is not None:
                    del obj[col]
        self.obj.pop(j, None)
        self.basis[r] = j
        self.val[r] = x_cur + d * t

    def _iterate(self) -> str:
        bland = False
        degen = 0
        while True:
            ent = self._entering(bland)
            if ent is None:
                return OPTIMAL
            j, d = ent
            rt = self._ratio(j, d)
            if rt is None:
                return UNBOUNDED
            t, r = rt
            if r is None:
                self._flip(j, d, t)
            else:
                self._pivot(j, d, r, t)
            if t == 0:
                degen += 1
                if degen > _BLAND_AFTER:
                    bland = True
            else:
                degen = 0
                bland = False

    def _phase1(self) -> str:
        if self._zero_row_violated:
            self._phase1_status = INFEASIBLE
            return INFEASIBLE
        self._price_out({a: _Q(-1) for a in range(self._art_first, self._ncols)})
        # allow artificial re-entry during phase 1 by treating them as normal
        saved_first = self._art_first
        self._art_first = self._ncols
        status = self._iterate()
        self._art_first = saved_first
        assert status == OPTIMAL  # phase-1 objective is bounded above by 0
        bad = sum(
            (self.val[i] for i in range(len(self.basis)) if self._is_art(self.basis[i])),
            _ZERO,
        )
        if bad != 0:
            self._phase1_status = INFEASIBLE
            return INFEASIBLE
        # drive artificials out of the basis, dropping redundant rows
        drop: List[int] = []
        for r in range(len(self.basis)):
            if not self._is_art(self.basis[r]):
                continue
            basic = set(self.basis)
            target = None
            for col in sorted(self.T[r]):
                if not self._is_art(col) and col not in basic:
                    target = col
                    break
            if target is None:
                drop.append(r)
            else:
                d = -1 if target in self.at_upper else 1
                self._pivot(target, d, r, _ZERO)
        if drop:
            dropset = set(drop)
            keep = [i for i in range(len(self.T)) if i not in dropset]
            self.T = [self.T[i] for i in keep]
            self.val = [self.val[i] for i in keep]
            self.basis = [self.basis[i] for i in keep]
        for row in self.T:  # artificial columns are dead from here on
            for col in [c for c in row if self._is_art(c)]:
                del row[col]
        self._phase1_status = OPTIMAL
        return OPTIMAL

    # -- public API ---------------------------------------------------------

    def maximize(self, objective: Mapping[str, Fraction]):
        """Returns (status, value, witness) with exact rational data."""
        if self._phase1_status is None:
            self._phase1()
        if self._phase1_status == INFEASIBLE:
            return INFEASIBLE, None, None
        c: Dict[int, _Q] = {}
        for k, q in objective.items():
            if k not in self.index:
                raise KeyError(f"objective on unknown variable {k!r}")
            q = Fraction(q)
            if q != 0:
                c[self.index[k]] = _Q(q)
        self._price_out(c)
        status = self._iterate()
        if status != OPTIMAL:
            return status, None, None
        witness = self._solution()
        value = sum(
            (Fraction(int(q.numerator), int(q.denominator)) * witness[self.keys[j]]
             for j, q in c.items()),
            Fraction(0),
        )
        return OPTIMAL, value, witness

    def _solution(self) -> Dict[str, Fraction]:
        vals: Dict[int, _Q] = {j: self.upper[j] for j in self.at_upper}
        for i, bj in enumerate(self.basis):
            vals[bj] = self.val[i]
        out = {}
        for j in range(self._n_struct):
            q = vals.get(j, _ZERO)
            out[self.keys[j]] = Fraction(int(q.numerator), int(q.denominator))
        return out
