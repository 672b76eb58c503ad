"""Graded quivers and composable arrow words.

A word a1 a2 ... as composes right to left: the rightmost arrow is applied
first, so source(word) = s(as) and target(word) = t(a1).  Every format and
printer in this package follows that convention.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence

from .errors import NotACycle, NotComposable


@dataclass(frozen=True)
class Arrow:
    name: str
    source: str
    target: str
    degree: int = 0


class GradedQuiver:
    """A finite quiver with integer arrow degrees.

    Vertices and arrows keep their declaration order; that order induces
    the lexicographic order used for cyclic normal forms.
    """

    def __init__(self, vertices: Sequence[str], arrows: Sequence[Arrow]):
        vertices = [str(v) for v in vertices]
        if len(set(vertices)) != len(vertices):
            raise ValueError("duplicate vertex names")
        names = [a.name for a in arrows]
        if len(set(names)) != len(names):
            raise ValueError("duplicate arrow names")
        vset = set(vertices)
        for a in arrows:
            if a.source not in vset or a.target not in vset:
                raise ValueError(f"arrow {a.name}: undeclared endpoint")
        self.vertices: tuple[str, ...] = tuple(vertices)
        self.arrows: tuple[Arrow, ...] = tuple(arrows)
        self.vertex_index = {v: i for i, v in enumerate(self.vertices)}
        self.arrow_index = {a.name: i for i, a in enumerate(self.arrows)}
        self._out: dict[str, list[int]] = {v: [] for v in vertices}
        self._in: dict[str, list[int]] = {v: [] for v in vertices}
        for i, a in enumerate(self.arrows):
            self._out[a.source].append(i)
            self._in[a.target].append(i)

    def arrow(self, name: str) -> Arrow:
        return self.arrows[self.arrow_index[name]]

    def arrows_out(self, v: str) -> list[Arrow]:
        return [self.arrows[i] for i in self._out[v]]

    def arrows_in(self, v: str) -> list[Arrow]:
        return [self.arrows[i] for i in self._in[v]]

    def loops_at(self, v: str) -> list[Arrow]:
        return [a for a in self.arrows_out(v) if a.target == v]

    def has_loop(self, v: str) -> bool:
        return bool(self.loops_at(v))

    def two_cycle_partners(self, v: str) -> list[tuple[Arrow, Arrow]]:
        """Pairs (a, b) with a: v->w, b: w->v, w != v."""
        pairs = []
        for a in self.arrows_out(v):
            if a.target == v:
                continue
            for b in self.arrows_out(a.target):
                if b.target == v:
                    pairs.append((a, b))
        return pairs

    def on_two_cycle(self, v: str) -> bool:
        return bool(self.two_cycle_partners(v))

    def is_degree_zero(self) -> bool:
        return all(a.degree == 0 for a in self.arrows)

    def lazy(self, v: str) -> "Path":
        return Path(self, (), base=v)

    def path(self, arrow_names: Sequence[str]) -> "Path":
        word = tuple(self.arrow_index[n] for n in arrow_names)
        return Path(self, word)

    def __eq__(self, other):
        return (
            isinstance(other, GradedQuiver)
            and self.vertices == other.vertices
            and self.arrows == other.arrows
        )

    def __hash__(self):
        return hash((self.vertices, self.arrows))

    def __repr__(self):
        return f"GradedQuiver({len(self.vertices)} vertices, {len(self.arrows)} arrows)"


class Path:
    """A composable word of arrow indices, or a lazy path at a vertex.

    For a nonempty word (i1, ..., is) composability means
    t(a[i_{k+1}]) = s(a[i_k]); the word is read as function composition,
    leftmost arrow applied last.
    """

    __slots__ = ("quiver", "word", "base", "_hash")

    def __init__(self, quiver: GradedQuiver, word: tuple[int, ...], base: str | None = None):
        self.quiver = quiver
        self.word = word
        if word:
            arrows = quiver.arrows
            for k in range(len(word) - 1):
                if arrows[word[k + 1]].target != arrows[word[k]].source:
                    raise NotComposable(
                        f"{arrows[word[k]].name} after {arrows[word[k + 1]].name}: "
                        f"target {arrows[word[k + 1]].target} != source {arrows[word[k]].source}"
                    )
            self.base = None
        else:
            if base is None or base not in quiver.vertex_index:
                raise ValueError("lazy path needs a declared base vertex")
            self.base = base
        self._hash = hash((self.word, self.base))

    @property
    def is_lazy(self) -> bool:
        return not self.word

    @property
    def source(self) -> str:
        if self.is_lazy:
            return self.base
        return self.quiver.arrows[self.word[-1]].source

    @property
    def target(self) -> str:
        if self.is_lazy:
            return self.base
        return self.quiver.arrows[self.word[0]].target

    @property
    def length(self) -> int:
        return len(self.word)

    @property
    def degree(self) -> int:
        return sum(self.quiver.arrows[i].degree for i in self.word)

    @property
    def is_cycle(self) -> bool:
        return self.source == self.target

    def letters(self) -> Iterator[Arrow]:
        for i in self.word:
            yield self.quiver.arrows[i]

    def compose(self, other: "Path") -> "Path":
        """p.compose(q) = p*q, defined when s(p) = t(q)."""
        if self.quiver is not other.quiver and self.quiver != other.quiver:
            raise NotComposable("paths on different quivers")
        if self.source != other.target:
            raise NotComposable(
                f"source {self.source} of left factor != target {other.target} of right factor"
            )
        if self.is_lazy:
            return other
        if other.is_lazy:
            return self
        return Path(self.quiver, self.word + other.word)

    __mul__ = compose

    def rotate(self, r: int) -> "Path":
        """Cyclic rotation by r letters; only defined for cycles."""
        if not self.is_cycle:
            raise NotACycle(f"{self} is not a cycle")
        if self.is_lazy or r % len(self.word) == 0:
            return self
        r = r % len(self.word)
        return Path(self.quiver, self.word[r:] + self.word[:r])

    def sort_key(self):
        """Canonical block-then-word key: (source, target, degree, length, word)."""
        q = self.quiver
        return (
            q.vertex_index[self.source],
            q.vertex_index[self.target],
            self.degree,
            self.length,
            self.word,
        )

    def __eq__(self, other):
        return (
            isinstance(other, Path)
            and self.word == other.word
            and self.base == other.base
            and self.quiver == other.quiver
        )

    def __hash__(self):
        return self._hash

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    def __repr__(self):
        if self.is_lazy:
            return f"e_{self.base}"
        return ".".join(a.name for a in self.letters())


def compose_paths(p: Path, q: Path) -> Path:
    """Concatenation p*q when s(p) = t(q); raises NotComposable otherwise."""
    return p.compose(q)


def cyclic_normalize(c: Path) -> tuple[Path, int]:
    """The lexicographically minimal rotation of a cycle and its rotation index.

    The order is induced by arrow declaration order; among rotations
    realizing the minimum the smallest rotation index is returned, which
    makes the operation idempotent.
    """
    if not c.is_cycle:
        raise NotACycle(f"{c} is not a cycle")
    if c.length <= 1:
        return c, 0
    best_r = 0
    best = c.word
    n = len(c.word)
    for r in range(1, n):
        w = c.word[r:] + c.word[:r]
        if w < best:
            best = w
            best_r = r
    if best_r == 0:
        return c, 0
    return Path(c.quiver, best), best_r
