"""Named example QPs and the seeded random QP generator.

These back the CLI example picker, the server, and the test corpus:
  - a2:       b: 1->2, a: 2->3, W = 0
  - c3:       a: 1->2, b: 2->3, c: 3->1, W = c.b.a
  - triv:     x: 1->2, y: 2->1, W = x.y (trivial QP)
  - k2:       conifold-type, a1,a2: 1->2, b1,b2: 2->1,
              W = a1.b1.a2.b2 - a1.b2.a2.b1
"""

from __future__ import annotations

import random
from fractions import Fraction

from .fields import QQ
from .qp import QP, Potential
from .quiver import Arrow, GradedQuiver, Path
from .series import Series

DEFAULT_TRUNCATION = 6


def qp_a2(trunc: int = DEFAULT_TRUNCATION) -> QP:
    quiver = GradedQuiver(["1", "2", "3"], [Arrow("b", "1", "2"), Arrow("a", "2", "3")])
    return QP(quiver, Potential(quiver, trunc), trunc)


def qp_c3(trunc: int = DEFAULT_TRUNCATION) -> QP:
    quiver = GradedQuiver(
        ["1", "2", "3"],
        [Arrow("a", "1", "2"), Arrow("b", "2", "3"), Arrow("c", "3", "1")],
    )
    w = quiver.path(["c", "b", "a"])
    return QP(quiver, Potential(quiver, trunc, [(w, QQ.one)]), trunc)


def qp_triv(trunc: int = DEFAULT_TRUNCATION) -> QP:
    quiver = GradedQuiver(["1", "2"], [Arrow("x", "1", "2"), Arrow("y", "2", "1")])
    w = quiver.path(["x", "y"])
    return QP(quiver, Potential(quiver, trunc, [(w, QQ.one)]), trunc)


def qp_k2(trunc: int = DEFAULT_TRUNCATION) -> QP:
    quiver = GradedQuiver(
        ["1", "2"],
        [Arrow("a1", "1", "2"), Arrow("a2", "1", "2"),
         Arrow("b1", "2", "1"), Arrow("b2", "2", "1")],
    )
    w1 = quiver.path(["a1", "b1", "a2", "b2"])
    w2 = quiver.path(["a1", "b2", "a2", "b1"])
    pot = Potential(quiver, trunc, [(w1, QQ.one), (w2, -QQ.one)])
    return QP(quiver, pot, trunc)


NAMED = {"a2": qp_a2, "c3": qp_c3, "triv": qp_triv, "k2": qp_k2}


def named_qp(name: str, trunc: int = DEFAULT_TRUNCATION) -> QP:
    try:
        return NAMED[name](trunc)
    except KeyError:
        raise KeyError(f"unknown example {name!r}; have {sorted(NAMED)}") from None


def trivial_companion(q: QP, prefix: str = "triv") -> QP:
    """A trivial QP on q's vertex set: one 2-cycle between the first two vertices."""
    vs = q.quiver.vertices
    if len(vs) < 2:
        raise ValueError("need at least two vertices for a trivial companion")
    names = {a.name for a in q.quiver.arrows}
    u, v = f"{prefix}_u", f"{prefix}_v"
    while u in names or v in names:
        u, v = u + "_", v + "_"
    quiver = GradedQuiver(vs, [Arrow(u, vs[0], vs[1]), Arrow(v, vs[1], vs[0])])
    w = quiver.path([u, v])
    return QP(quiver, Potential(quiver, q.trunc, [(w, q.field.one)]), q.trunc, q.field)


def random_qp(rng: random.Random, trunc: int = DEFAULT_TRUNCATION,
              max_vertices: int = 4, max_arrows: int = 6,
              max_term_len: int = 4, max_terms: int = 3) -> QP:
    """A small loop-free random QP with a potential of short cycles.

    Used by property tests and the seeded acceptance corpus: at most
    ``max_vertices`` vertices, ``max_arrows`` arrows, potential terms of
    length <= ``max_term_len`` with small rational coefficients.
    """
    nv = rng.randint(2, max_vertices)
    vertices = [str(i + 1) for i in range(nv)]
    na = rng.randint(2, max_arrows)
    arrows = []
    for k in range(na):
        src = rng.choice(vertices)
        others = [v for v in vertices if v != src]
        tgt = rng.choice(others)
        arrows.append(Arrow(f"r{k}", src, tgt))
    quiver = GradedQuiver(vertices, arrows)
    cycles = _short_cycles(quiver, max_term_len)
    entries = []
    if cycles:
        for c in rng.sample(cycles, min(len(cycles), rng.randint(0, max_terms))):
            coeff = Fraction(rng.choice([1, -1, 2, -2, 1, -1]))
            entries.append((c, coeff))
    pot = Potential(quiver, trunc, entries)
    return QP(quiver, pot, trunc)


def random_substitution(rng: random.Random, q: QP, max_extra_terms: int = 2):
    """A random right-equivalence candidate on q's quiver.

    Unit-triangular linear part plus a few higher-length parallel-path
    corrections, so it is always invertible.
    """
    from .substitution import Substitution

    quiver, trunc, field = q.quiver, q.trunc, q.field
    paths = _paths_by_block(quiver, min(trunc, 3))
    images = {}
    for i, a in enumerate(quiver.arrows):
        img = Series.of_path(Path(quiver, (i,)), trunc, field.one, field)
        parallel = [p for p in paths.get((a.source, a.target), ())
                    if 2 <= p.length]
        for p in rng.sample(parallel, min(len(parallel), rng.randint(0, max_extra_terms))):
            img = img + Series.of_path(p, trunc, Fraction(rng.choice([1, -1, 2])), field)
        # occasional rescaling of the linear part
        if rng.random() < 0.3:
            img = img.scale(Fraction(rng.choice([2, 3, -1])))
        images[a.name] = img
    return Substitution(quiver, quiver, images, trunc, field)


def _short_cycles(quiver: GradedQuiver, max_len: int) -> list[Path]:
    """Cyclic normal forms of cycles of length 2..max_len, deduplicated."""
    from .quiver import cyclic_normalize

    found = set()
    frontier = [(quiver.lazy(v), v) for v in quiver.vertices]
    paths = [p for p, _ in frontier]
    for _ in range(max_len):
        nxt = []
        for p, start in frontier:
            for idx in quiver._in[p.source]:
                arr = quiver.arrows[idx]
                np = Path(quiver, p.word + (idx,))
                nxt.append((np, start))
        frontier = nxt
        for p, start in frontier:
            if p.length >= 2 and p.source == p.target:
                norm, _ = cyclic_normalize(p)
                found.add(norm)
    return sorted(found, key=lambda p: p.sort_key())


def _paths_by_block(quiver: GradedQuiver, max_len: int) -> dict:
    from .qp import _paths_up_to

    blocks: dict = {}
    for p in _paths_up_to(quiver, max_len):
        blocks.setdefault((p.source, p.target), []).append(p)
    return blocks
