"""Exact sparse Gaussian elimination over the coefficient field.

Vectors are dicts {column_key: coeff}; column keys must be totally
ordered (ints or tuples).  Everything is exact: coefficients are
Fractions or prime-field elements, never floats.
"""

from __future__ import annotations

from .fields import QQ


def invert_dense(m: list[list], field=QQ):
    """Inverse of a small dense matrix, or None if singular."""
    n = len(m)
    if n == 0:
        return []
    if any(len(row) != n for row in m):
        return None
    one, zero = field.one, field.zero
    a = [list(row) for row in m]
    inv = [[one if i == j else zero for j in range(n)] for i in range(n)]
    for col in range(n):
        piv = None
        for r in range(col, n):
            if a[r][col]:
                piv = r
                break
        if piv is None:
            return None
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            inv[col], inv[piv] = inv[piv], inv[col]
        scale = a[col][col]
        if scale != one:
            a[col] = [x / scale for x in a[col]]
            inv[col] = [x / scale for x in inv[col]]
        for r in range(n):
            if r != col and a[r][col]:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
                inv[r] = [x - f * y for x, y in zip(inv[r], inv[col])]
    return inv


class SparseEchelon:
    """A fully reduced (RREF-style) row space, built incrementally.

    The pivot of a vector is its largest column key; rows are scaled to
    pivot coefficient 1 and kept mutually reduced, so residues returned by
    ``reduce`` are canonical and supported on non-pivot columns only.
    """

    def __init__(self, field=QQ):
        self.field = field
        self.rows: dict = {}

    @property
    def rank(self) -> int:
        return len(self.rows)

    def pivots(self):
        return self.rows.keys()

    def reduce(self, vec: dict) -> dict:
        """Canonical residue of vec modulo the row space (vec not mutated)."""
        out = dict(vec)
        hits = [p for p in out if p in self.rows]
        for p in hits:
            c = out.pop(p, None)
            if not c:
                continue
            for col, rc in self.rows[p].items():
                if col == p:
                    continue
                acc = out.get(col)
                acc = -c * rc if acc is None else acc - c * rc
                if acc:
                    out[col] = acc
                elif col in out:
                    del out[col]
        return out

    def insert(self, vec: dict):
        """Add vec to the span. Returns the new pivot key, or None if dependent."""
        r = self.reduce(vec)
        if not r:
            return None
        piv = max(r)
        scale = r[piv]
        if scale != self.field.one:
            r = {c: v / scale for c, v in r.items()}
        for other in self.rows.values():
            c = other.get(piv)
            if c:
                for col, rc in r.items():
                    acc = other.get(col)
                    acc = -c * rc if acc is None else acc - c * rc
                    if acc:
                        other[col] = acc
                    elif col in other:
                        del other[col]
        self.rows[piv] = r
        return piv


def rank_of_vectors(vectors, field=QQ) -> int:
    """Rank of a family of sparse vectors (forward elimination only)."""
    rows: dict = {}
    rank = 0
    for vec in vectors:
        v = dict(vec)
        while v:
            piv = max(v)
            row = rows.get(piv)
            if row is None:
                scale = v[piv]
                if scale != field.one:
                    v = {c: x / scale for c, x in v.items()}
                rows[piv] = v
                rank += 1
                break
            c = v.pop(piv)
            for col, rc in row.items():
                if col == piv:
                    continue
                acc = v.get(col)
                acc = -c * rc if acc is None else acc - c * rc
                if acc:
                    v[col] = acc
                elif col in v:
                    del v[col]
    return rank
