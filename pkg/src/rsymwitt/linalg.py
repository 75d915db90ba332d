"""Exact sparse linear algebra over QQ and F_p.

Rows are dicts ``{column: value}``. Over QQ the echelon rows are kept as
primitive integer vectors (fraction-free elimination with content stripping);
over F_p they are kept monic with residues in [0, p).
"""

from __future__ import annotations

import math
from fractions import Fraction

from .scalar import FpElement, PrimeField, QQ


def _content(row: dict) -> int:
    g = 0
    for v in row.values():
        g = math.gcd(g, v)
        if g == 1:
            break
    return g


class Echelon:
    """Incrementally maintained reduced row echelon form.

    ``add`` reports whether the new row enlarged the row space. ``rows`` maps each
    pivot column to its row; every pivot row vanishes on all other pivot columns.
    """

    def __init__(self, field=QQ):
        self.field = field
        self.p = field.p if isinstance(field, PrimeField) else 0
        self.rows: dict[int, dict] = {}

    @property
    def rank(self) -> int:
        return len(self.rows)

    def _prepare(self, row) -> dict:
        """Coerce a row to integers (clearing denominators over QQ, residues over F_p)."""
        if self.p:
            out = {}
            for c, v in row.items():
                if isinstance(v, FpElement):
                    v = v.value
                elif isinstance(v, Fraction):
                    v = v.numerator * pow(v.denominator, -1, self.p)
                v %= self.p
                if v:
                    out[c] = v
            return out
        vals = {c: Fraction(v) for c, v in row.items() if v}
        if not vals:
            return {}
        den = 1
        for v in vals.values():
            den = den * v.denominator // math.gcd(den, v.denominator)
        return {c: int(v * den) for c, v in vals.items()}

    def _normalize(self, row: dict) -> dict:
        if not row:
            return row
        lead = min(row)
        if self.p:
            inv = pow(row[lead], -1, self.p)
            return {c: v * inv % self.p for c, v in row.items()}
        g = _content(row)
        if row[lead] < 0:
            g = -g
        return {c: v // g for c, v in row.items()}

    def _eliminate(self, target: dict, c: int, pivot_row: dict) -> dict:
        a = target[c]
        if self.p:
            out = dict(target)
            for col, v in pivot_row.items():
                nv = (out.get(col, 0) - a * v) % self.p
                if nv:
                    out[col] = nv
                else:
                    out.pop(col, None)
            return out
        b = pivot_row[c]
        out = {col: v * b for col, v in target.items()}
        for col, v in pivot_row.items():
            nv = out.get(col, 0) - a * v
            if nv:
                out[col] = nv
            else:
                out.pop(col, None)
        return out

    def reduce(self, row) -> dict:
        r = self._prepare(row)
        for c in sorted(c for c in r if c in self.rows):
            if c in r:
                r = self._eliminate(r, c, self.rows[c])
        return self._normalize(r)

    def add(self, row) -> bool:
        r = self.reduce(row)
        if not r:
            return False
        piv = min(r)
        for c, prow in list(self.rows.items()):
            if piv in prow:
                self.rows[c] = self._normalize(self._eliminate(prow, piv, r))
        self.rows[piv] = r
        return True

    def contains(self, row) -> bool:
        return not self.reduce(row)

    def pivots(self) -> list:
        return sorted(self.rows)

    def nullspace(self, ncols: int) -> list:
        """Basis of {x : row . x = 0 for all rows}, one vector per free column.

        Each vector is a dict ``{column: value}`` with value 1 at its free column and
        field-valued entries (``Fraction`` or ``FpElement``) elsewhere.
        """
        free = [c for c in range(ncols) if c not in self.rows]
        basis = []
        for f in free:
            vec = {f: self._one()}
            for c, prow in self.rows.items():
                v = prow.get(f)
                if v:
                    vec[c] = self._scalar(-v, prow[c])
            basis.append(vec)
        return basis

    def _one(self):
        return FpElement(1, self.p) if self.p else Fraction(1)

    def _scalar(self, num: int, den: int):
        if self.p:
            return FpElement(num * pow(den, -1, self.p), self.p)
        return Fraction(num, den)


def rank(rows, field=QQ) -> int:
    ech = Echelon(field)
    for r in rows:
        ech.add(r)
    return ech.rank


def nullspace(rows, ncols: int, field=QQ) -> list:
    ech = Echelon(field)
    for r in rows:
        ech.add(r)
    return ech.nullspace(ncols)


def in_span(vector, rows, field=QQ) -> bool:
    ech = Echelon(field)
    for r in rows:
        ech.add(r)
    return ech.contains(vector)


def solve(rows, rhs, ncols: int, field=QQ):
    """Solve ``A x = b`` exactly.

    Returns ``(x, None)`` with one particular solution (free variables zero), or
    ``(None, y)`` where ``y`` is a certificate: a combination of equations with
    ``y.A = 0`` and ``y.b != 0``.
    """
    aug_col = ncols
    marker0 = ncols + 1  # certificate columns follow the augmented column
    ech = Echelon(field)
    for k, (row, b) in enumerate(zip(rows, rhs)):
        full = dict(row)
        if b:
            full[aug_col] = b
        full[marker0 + k] = 1
        ech.add(full)
    for piv, prow in ech.rows.items():
        if piv == aug_col:
            cert = {c - marker0: prow[c] for c in prow if c >= marker0}
            return None, {k: ech._scalar(v, 1) for k, v in cert.items()}
    x = {}
    for piv, prow in ech.rows.items():
        if piv >= ncols:
            continue
        v = prow.get(aug_col)
        if v:
            x[piv] = ech._scalar(v, prow[piv])
    return x, None
