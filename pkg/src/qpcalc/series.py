"""Truncated noncommutative formal series over a graded quiver.

A Series is an element of the completed path algebra modulo m^(N+1):
a finite map from paths of length <= N to nonzero field coefficients.
Two series are equal iff their term maps are equal; no zero coefficient
is ever stored.  Multiplication is sign-free; graded sign bookkeeping is
the caller's job (module ginzburg).

Mixed-order arithmetic is an error, never an implicit coercion.
"""

from __future__ import annotations

from typing import Iterable, Mapping

from .errors import NotACycle, QuiverMismatch, TruncationMismatch
from .fields import QQ
from .quiver import GradedQuiver, Path, cyclic_normalize


class Series:
    """Sparse truncated series: {path: coeff}, every path length <= trunc."""

    __slots__ = ("quiver", "trunc", "terms", "field")

    def __init__(
        self,
        quiver: GradedQuiver,
        trunc: int,
        terms: Mapping[Path, object] | Iterable[tuple[Path, object]] = (),
        field=QQ,
    ):
        if trunc < 1:
            raise ValueError("truncation order must be >= 1")
        self.quiver = quiver
        self.trunc = trunc
        self.field = field
        items = terms.items() if isinstance(terms, Mapping) else terms
        d: dict[Path, object] = {}
        for p, c in items:
            if p.length > trunc or not c:
                continue
            acc = d.get(p)
            acc = c if acc is None else acc + c
            if acc:
                d[p] = acc
            elif p in d:
                del d[p]
        self.terms = d

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls, quiver: GradedQuiver, trunc: int, field=QQ) -> "Series":
        return cls(quiver, trunc, (), field)

    @classmethod
    def of_path(cls, p: Path, trunc: int, coeff=None, field=QQ) -> "Series":
        if coeff is None:
            coeff = field.one
        return cls(p.quiver, trunc, [(p, coeff)], field)

    @classmethod
    def unit(cls, quiver: GradedQuiver, trunc: int, field=QQ) -> "Series":
        """Sum of all lazy paths: the two-sided unit."""
        return cls(quiver, trunc, [(quiver.lazy(v), field.one) for v in quiver.vertices], field)

    # -- bookkeeping ---------------------------------------------------

    def _check_compatible(self, other: "Series"):
        if self.trunc != other.trunc:
            raise TruncationMismatch(f"orders {self.trunc} != {other.trunc}")
        if self.quiver != other.quiver:
            raise QuiverMismatch("series on different quivers")

    def is_zero(self) -> bool:
        return not self.terms

    def coeff(self, p: Path):
        return self.terms.get(p, self.field.zero)

    def min_length(self) -> int | None:
        if not self.terms:
            return None
        return min(p.length for p in self.terms)

    def max_length(self) -> int | None:
        if not self.terms:
            return None
        return max(p.length for p in self.terms)

    def homogeneous_part(self, length: int) -> "Series":
        return Series(
            self.quiver, self.trunc,
            [(p, c) for p, c in self.terms.items() if p.length == length],
            self.field,
        )

    def truncate(self, order: int) -> "Series":
        """Reduce to a lower truncation order, dropping longer terms."""
        if order > self.trunc:
            raise TruncationMismatch(f"cannot extend order {self.trunc} to {order}")
        return Series(
            self.quiver, order,
            [(p, c) for p, c in self.terms.items() if p.length <= order],
            self.field,
        )

    def sorted_terms(self) -> list[tuple[Path, object]]:
        return sorted(self.terms.items(), key=lambda t: t[0].sort_key())

    # -- linear structure ----------------------------------------------

    def __add__(self, other: "Series") -> "Series":
        self._check_compatible(other)
        d = dict(self.terms)
        for p, c in other.terms.items():
            acc = d.get(p)
            acc = c if acc is None else acc + c
            if acc:
                d[p] = acc
            else:
                del d[p]
        return Series(self.quiver, self.trunc, d, self.field)

    def __sub__(self, other: "Series") -> "Series":
        return self + (-other)

    def __neg__(self) -> "Series":
        return Series(self.quiver, self.trunc, [(p, -c) for p, c in self.terms.items()], self.field)

    def scale(self, scalar) -> "Series":
        if not scalar:
            return Series.zero(self.quiver, self.trunc, self.field)
        return Series(
            self.quiver, self.trunc,
            [(p, c * scalar) for p, c in self.terms.items()],
            self.field,
        )

    # -- multiplication --------------------------------------------------

    def __mul__(self, other: "Series") -> "Series":
        self._check_compatible(other)
        n = self.trunc
        out: dict[Path, object] = {}
        for p, cp in self.terms.items():
            src = p.source
            plen = p.length
            for q, cq in other.terms.items():
                if q.target != src or plen + q.length > n:
                    continue
                pq = p.compose(q)
                c = cp * cq
                acc = out.get(pq)
                acc = c if acc is None else acc + c
                if acc:
                    out[pq] = acc
                elif pq in out:
                    del out[pq]
        return Series(self.quiver, self.trunc, out, self.field)

    def __eq__(self, other):
        return (
            isinstance(other, Series)
            and self.trunc == other.trunc
            and self.quiver == other.quiver
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.trunc, frozenset(self.terms.items())))

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for p, c in self.sorted_terms():
            bits.append(f"{c}*{p!r}" if not p.is_lazy else f"{c}*{p!r}")
        return " + ".join(bits)


def series_mul(a: Series, b: Series) -> Series:
    """Product in the truncated path algebra; alias of ``a * b``."""
    return a * b


def cyclic_occurrences(p: Path, c: Path) -> list[int]:
    """Starting offsets k where p occurs as a cyclic factor of the cycle c.

    An occurrence at k means c.word[k], c.word[k+1], ... (indices mod
    len(c)) spell p.word.  Requires len(p) <= len(c); for len(p) == len(c)
    an occurrence at k means the rotation of c by k equals p.
    """
    if not c.is_cycle:
        raise NotACycle(f"{c} is not a cycle")
    lw, lp = c.word, p.word
    n, l = len(lw), len(lp)
    if l == 0 or l > n:
        return []
    hits = []
    doubled = lw + lw
    for k in range(n):
        if doubled[k : k + l] == lp:
            hits.append(k)
    return hits


def cyclic_complement(c: Path, k: int, l: int) -> Path:
    """The complementary path of the cyclic occurrence at offset k of length l.

    For c = u p v (read cyclically, p at offset k), this is the path v*u.
    When l == len(c) the complement is the lazy path at source(p-rotation).
    """
    n = len(c.word)
    if l == n:
        rot = c.word[k:] + c.word[:k]
        return c.quiver.lazy(c.quiver.arrows[rot[-1]].source)
    doubled = c.word + c.word
    comp = doubled[k + l : k + n]
    return Path(c.quiver, comp)


def cyclic_derivative(p: Path, w: Series) -> Series:
    """The cyclic derivative of a linear combination of cycles with respect to p.

    Each cycle c with c = u p v (cyclically) contributes coeff(c) * (v*u),
    once per occurrence.  The result of differentiating an order-N series
    is accurate to order N - len(p): downstream consumers must not read
    longer terms.
    """
    if p.is_lazy:
        raise ValueError("cyclic derivative needs a nonempty path")
    out = Series.zero(w.quiver, w.trunc, w.field)
    acc: dict[Path, object] = {}
    l = p.length
    for c, coeff in w.terms.items():
        if not c.is_cycle:
            raise NotACycle(f"potential term {c} is not a cycle")
        for k in cyclic_occurrences(p, c):
            comp = cyclic_complement(c, k, l)
            cur = acc.get(comp)
            cur = coeff if cur is None else cur + coeff
            if cur:
                acc[comp] = cur
            elif comp in acc:
                del acc[comp]
    return Series(w.quiver, w.trunc, acc, w.field)


def cyclic_normalize_series(w: Series) -> Series:
    """Rewrite every cycle term on its lexicographically minimal rotation."""
    acc: dict[Path, object] = {}
    for c, coeff in w.terms.items():
        norm, _ = cyclic_normalize(c)
        cur = acc.get(norm)
        cur = coeff if cur is None else cur + coeff
        if cur:
            acc[norm] = cur
        elif norm in acc:
            del acc[norm]
    return Series(w.quiver, w.trunc, acc, w.field)
