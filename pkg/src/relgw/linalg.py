"""Incremental sparse Gaussian elimination over the rationals."""
from __future__ import annotations

from fractions import Fraction


class Inconsistent(ArithmeticError):
    """The linear system has no solution."""


class SparseSystem:
    """Rows ``sum_v c_v x_v = rhs`` stored as dicts; variables are any sortable keys.

    ``add`` reduces each new row against the current pivots, so the system
    stays in echelon form and contradictions are caught as they arrive.
    """

    def __init__(self):
        self.pivots: dict = {}  # pivot variable -> (row dict, rhs)

    def add(self, row: dict, rhs=0):
        row = {v: Fraction(c) for v, c in row.items() if c}
        rhs = Fraction(rhs)
        # pivot rows never mention other pivot variables, so one pass suffices
        for v in [v for v in row if v in self.pivots]:
            prow, prhs = self.pivots[v]
            c = row[v]
            for w, d in prow.items():
                row[w] = row.get(w, 0) - c * d
                if not row[w]:
                    del row[w]
            rhs -= c * prhs
        if not row:
            if rhs:
                raise Inconsistent(f"0 = {rhs}")
            return
        p = min(row, key=repr)
        c = row[p]
        row = {w: d / c for w, d in row.items()}
        rhs /= c
        # keep existing pivot rows free of the new pivot variable
        for q, (qrow, qrhs) in list(self.pivots.items()):
            if p in qrow:
                f = qrow[p]
                new = dict(qrow)
                for w, d in row.items():
                    new[w] = new.get(w, 0) - f * d
                    if not new[w]:
                        del new[w]
                self.pivots[q] = (new, qrhs - f * rhs)
        self.pivots[p] = (row, rhs)

    def value(self, v):
        """The forced value of ``v``, or ``None`` if the system leaves it free."""
        if v not in self.pivots:
            return None
        row, rhs = self.pivots[v]
        return rhs if len(row) == 1 else None
