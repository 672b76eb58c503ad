"""Quivers with potential: validation, reduction, Jacobian dimensions.

The potential is a formal sum of cycles of length >= 2 considered up to
rotation; terms are keyed by their cyclic normal form but each keeps a
working representative rotation so that condition (c3) rotations survive
round trips through the container.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .errors import (
    ArrowNameClash,
    InsufficientTruncation,
    LoopAtVertex,
    NotACycle,
    QpcalcError,
    QuiverMismatch,
    TruncationMismatch,
    VertexSetMismatch,
)
from .fields import QQ
from .linalg import SparseEchelon, rank_of_vectors
from .quiver import Arrow, GradedQuiver, Path, cyclic_normalize
from .series import Series, cyclic_derivative
from .substitution import Substitution, compose_substitutions, substitute


class Potential:
    """Cycle terms up to rotation, each of length >= 1, keyed by normal form."""

    def __init__(self, quiver: GradedQuiver, trunc: int, entries=(), field=QQ):
        self.quiver = quiver
        self.trunc = trunc
        self.field = field
        # canonical path -> [representative path, coeff]
        self.entries: dict[Path, list] = {}
        for p, c in entries:
            self._add(p, c)

    def _add(self, p: Path, c, keep_rotation: bool = False):
        """Accumulate a term. The stored representative is the cyclic
        normal form unless keep_rotation asks to keep the given one."""
        if not c or p.length > self.trunc:
            return
        if not p.is_cycle or p.is_lazy:
            raise NotACycle(f"potential term {p!r} is not a nontrivial cycle")
        key, _ = cyclic_normalize(p)
        ent = self.entries.get(key)
        if ent is None:
            self.entries[key] = [p if keep_rotation else key, c]
        else:
            if keep_rotation:
                ent[0] = p
            ent[1] = ent[1] + c
            if not ent[1]:
                del self.entries[key]

    @classmethod
    def from_series(cls, s: Series) -> "Potential":
        return cls(s.quiver, s.trunc, s.terms.items(), s.field)

    def as_series(self) -> Series:
        """Series on the working representatives."""
        return Series(self.quiver, self.trunc,
                      [(rep, c) for rep, c in self.entries.values()], self.field)

    def canonical_series(self) -> Series:
        """Series on the cyclic normal forms (rotation-insensitive)."""
        return Series(self.quiver, self.trunc,
                      [(key, ent[1]) for key, ent in self.entries.items()], self.field)

    def coeffs_by_class(self) -> dict[Path, object]:
        return {key: ent[1] for key, ent in self.entries.items()}

    def terms(self):
        for rep, c in self.entries.values():
            yield rep, c

    def is_zero(self) -> bool:
        return not self.entries

    def min_length(self):
        return min((k.length for k in self.entries), default=None)

    def in_m2(self) -> bool:
        return all(k.length >= 2 for k in self.entries)

    def homogeneous_part(self, length: int) -> "Potential":
        return Potential(self.quiver, self.trunc,
                         [(rep, c) for rep, c in self.terms() if rep.length == length],
                         self.field)

    def cyclically_equal(self, other: "Potential") -> bool:
        return (self.quiver == other.quiver
                and self.trunc == other.trunc
                and self.coeffs_by_class() == other.coeffs_by_class())

    def __eq__(self, other):
        return isinstance(other, Potential) and self.cyclically_equal(other)

    def __repr__(self):
        s = self.canonical_series()
        return repr(s)


class QP:
    """A quiver with potential at a fixed truncation order.

    ``accuracy`` is the watermark: the highest order to which the stored
    potential is known to agree with the untruncated object.  Mutation
    lowers it by one; invariant computations refuse orders beyond it.
    """

    def __init__(self, quiver: GradedQuiver, potential: Potential, trunc: int,
                 field=QQ, accuracy: int | None = None):
        if not quiver.is_degree_zero():
            raise ValueError("QP quiver must have all arrows in degree 0")
        if trunc < 2:
            raise ValueError("QP truncation order must be >= 2")
        if potential.quiver != quiver or potential.trunc != trunc:
            raise QuiverMismatch("potential does not live on the quiver at this order")
        self.quiver = quiver
        self.potential = potential
        self.trunc = trunc
        self.field = field
        self.accuracy = trunc if accuracy is None else accuracy

    @classmethod
    def from_series(cls, quiver: GradedQuiver, w: Series, trunc: int | None = None,
                    field=QQ, accuracy: int | None = None) -> "QP":
        trunc = w.trunc if trunc is None else trunc
        return cls(quiver, Potential.from_series(w), trunc, field, accuracy)

    def w_series(self) -> Series:
        return self.potential.as_series()

    def with_potential(self, potential: Potential, accuracy: int | None = None) -> "QP":
        return QP(self.quiver, potential, self.trunc, self.field,
                  self.accuracy if accuracy is None else accuracy)

    def is_mutable(self, v: str) -> tuple[bool, str]:
        if self.quiver.has_loop(v):
            return False, "loop at vertex"
        if self.quiver.on_two_cycle(v):
            return False, "two-cycle at vertex"
        return True, "mutable"

    def __eq__(self, other):
        return (isinstance(other, QP)
                and self.quiver == other.quiver
                and self.trunc == other.trunc
                and self.potential.cyclically_equal(other.potential))

    def __repr__(self):
        return (f"QP({len(self.quiver.vertices)} vertices, "
                f"{len(self.quiver.arrows)} arrows, N={self.trunc})")


@dataclass
class VertexReport:
    loop: bool
    two_cycle: bool
    cycle_based_here: bool  # some stored cycle of W starts and ends here


@dataclass
class ValidationReport:
    in_m2: bool
    cyclically_normalized: bool
    vertex: dict = dc_field(default_factory=dict)

    @property
    def valid(self) -> bool:
        return self.in_m2

    def mutable(self, v: str) -> bool:
        r = self.vertex[v]
        return not (r.loop or r.two_cycle)


def validate_qp(q: QP) -> ValidationReport:
    """Check W in m^2, normal-form storage, and per-vertex (c1)(c2)(c3) flags."""
    pot = q.potential
    normalized = all(ent[0] == key for key, ent in pot.entries.items())
    basepoints = {rep.source for rep, _ in pot.terms()}
    report = ValidationReport(in_m2=pot.in_m2(), cyclically_normalized=normalized)
    for v in q.quiver.vertices:
        report.vertex[v] = VertexReport(
            loop=q.quiver.has_loop(v),
            two_cycle=q.quiver.on_two_cycle(v),
            cycle_based_here=v in basepoints,
        )
    return report


def normalize_c3(q: QP, i: str) -> QP:
    """Rotate every potential term so it neither starts nor ends at i.

    Raises LoopAtVertex when i carries a loop.  Cyclic derivative images
    are unchanged (rotation only re-points representatives).
    """
    if q.quiver.has_loop(i):
        raise LoopAtVertex(f"loop at vertex {i}")
    new = Potential(q.quiver, q.trunc, (), q.field)
    for rep, c in q.potential.terms():
        if rep.source != i:
            new._add(rep, c, keep_rotation=True)
            continue
        n = rep.length
        best = None
        for r in range(n):
            rot = rep.rotate(r)
            if rot.source != i and (best is None or rot.word < best.word):
                best = rot
        if best is None:
            raise LoopAtVertex(f"cycle {rep!r} never leaves vertex {i}")
        new._add(best, c, keep_rotation=True)
    return q.with_potential(new)


def direct_sum(q1: QP, q2: QP) -> QP:
    """Union of arrows over a common vertex set, W = W1 + W2."""
    if set(q1.quiver.vertices) != set(q2.quiver.vertices):
        raise VertexSetMismatch("direct sum needs identical vertex sets")
    if q1.trunc != q2.trunc:
        raise TruncationMismatch(f"orders {q1.trunc} != {q2.trunc}")
    clash = {a.name for a in q1.quiver.arrows} & {a.name for a in q2.quiver.arrows}
    if clash:
        raise ArrowNameClash(f"arrow names shared by both summands: {sorted(clash)}")
    quiver = GradedQuiver(q1.quiver.vertices, q1.quiver.arrows + q2.quiver.arrows)
    entries = []
    for src_qp in (q1, q2):
        for rep, c in src_qp.potential.terms():
            entries.append((translate_path(rep, quiver), c))
    pot = Potential(quiver, q1.trunc, entries, q1.field)
    return QP(quiver, pot, q1.trunc, q1.field,
              accuracy=min(q1.accuracy, q2.accuracy))


def translate_path(p: Path, quiver: GradedQuiver) -> Path:
    """Re-key a path onto another quiver carrying arrows of the same names."""
    if p.is_lazy:
        return quiver.lazy(p.base)
    return quiver.path([a.name for a in p.letters()])


def translate_series(s: Series, quiver: GradedQuiver, trunc: int | None = None) -> Series:
    trunc = s.trunc if trunc is None else trunc
    return Series(quiver, trunc,
                  [(translate_path(p, quiver), c) for p, c in s.terms.items()],
                  s.field)


@dataclass
class SplitResult:
    trivial_pairs: list
    reduced: QP
    witness: Substitution
    trivial_potential: Potential
    transformed: QP  # the right-equivalent QP witness(input): trivial + reduced parts


def _two_cycle_blocks(q: QP):
    """Coefficient matrices of the length-2 part on opposite-arrow blocks.

    Returns {(u, v): (rows A = arrows u->v, cols B = arrows v->u, C)}
    with u < v in vertex order and C[i][j] the coefficient of the cyclic
    class of A[i]*B[j].
    """
    qv = q.quiver
    blocks: dict[tuple[str, str], tuple[list, list, list]] = {}
    w2 = q.potential.homogeneous_part(2)
    for key, ent in w2.entries.items():
        x, y = list(key.letters())
        if x.source == x.target or y.source == y.target:
            raise LoopAtVertex(
                "2-cycles through loops need symmetric normalization; unsupported"
            )
        u, v = sorted((x.source, x.target), key=qv.vertex_index.get)
        if (u, v) not in blocks:
            rows = [a for a in qv.arrows if a.source == u and a.target == v]
            cols = [b for b in qv.arrows if b.source == v and b.target == u]
            zero = q.field.zero
            blocks[(u, v)] = (rows, cols,
                              [[zero for _ in cols] for _ in rows])
        rows, cols, mat = blocks[(u, v)]
        if x.source == u:  # x: u->v is the row arrow
            a, b = x, y
        else:
            a, b = y, x
        mat[rows.index(a)][cols.index(b)] = ent[1]
    return blocks


def _linear_split_witness(q: QP):
    """Stage one of reduction: bring the length-2 part to sum a_i b_i.

    Exact Gaussian elimination with first-nonzero pivoting in declaration
    order; pivot arrows become the trivial pairs, all other arrows keep
    their meaning.  Returns (pairs, witness substitution).
    """
    field = q.field
    one = field.one
    pairs = []
    images: dict[str, Series] = {}
    for (u, v), (rows, cols, c) in _two_cycle_blocks(q).items():
        na, nb = len(rows), len(cols)
        p = [[one if i == j else field.zero for j in range(na)] for i in range(na)]
        qm = [[one if i == j else field.zero for j in range(nb)] for i in range(nb)]
        used_r: set[int] = set()
        used_c: set[int] = set()
        while True:
            piv = None
            for r in range(na):
                if r in used_r:
                    continue
                for cc in range(nb):
                    if cc not in used_c and c[r][cc]:
                        piv = (r, cc)
                        break
                if piv:
                    break
            if piv is None:
                break
            r0, c0 = piv
            scale = c[r0][c0]
            if not scale:
                from .errors import CharacteristicObstruction
                raise CharacteristicObstruction(
                    "pivot of the quadratic part vanishes in the coefficient field")
            inv = one / scale
            c[r0] = [x * inv for x in c[r0]]
            p[r0] = [x * inv for x in p[r0]]
            for r in range(na):
                if r != r0 and c[r][c0]:
                    f = c[r][c0]
                    c[r] = [x - f * y for x, y in zip(c[r], c[r0])]
                    p[r] = [x - f * y for x, y in zip(p[r], p[r0])]
            for cc in range(nb):
                if cc != c0 and c[r0][cc]:
                    g = c[r0][cc]
                    for r in range(na):
                        c[r][cc] = c[r][cc] - g * c[r][c0]
                    for r in range(nb):
                        qm[r][cc] = qm[r][cc] - g * qm[r][c0]
            used_r.add(r0)
            used_c.add(c0)
            pairs.append((rows[r0].name, cols[c0].name))
        # phi(a_alpha) = sum_alpha'' P[alpha'', alpha] a_alpha''
        for idx, a in enumerate(rows):
            terms = []
            for idx2, a2 in enumerate(rows):
                coeff = p[idx2][idx]
                if coeff:
                    terms.append((Path(q.quiver, (q.quiver.arrow_index[a2.name],)), coeff))
            images[a.name] = Series(q.quiver, q.trunc, terms, field)
        for idx, b in enumerate(cols):
            terms = []
            for idx2, b2 in enumerate(cols):
                coeff = qm[idx][idx2]
                if coeff:
                    terms.append((Path(q.quiver, (q.quiver.arrow_index[b2.name],)), coeff))
            images[b.name] = Series(q.quiver, q.trunc, terms, field)
    for a in q.quiver.arrows:
        if a.name not in images:
            images[a.name] = Series.of_path(
                Path(q.quiver, (q.quiver.arrow_index[a.name],)), q.trunc, one, field)
    witness = Substitution(q.quiver, q.quiver, images, q.trunc, field, _validated=True)
    return pairs, witness


def split(q: QP) -> SplitResult:
    """Decompose a QP into its trivial and reduced parts (DWZ reduction).

    The witness substitution carries the input potential to (sum of
    trivial 2-cycles) + (reduced potential) up to cyclic equivalence mod
    m^(N+1); the reduced part has all cyclic derivatives in m^2.
    """
    if not q.potential.in_m2():
        raise QpcalcError("potential not in m^2; not a valid QP")
    quiver = q.quiver
    field = q.field
    pairs, witness = _linear_split_witness(q)
    current = Potential.from_series(substitute(witness, q.w_series()))
    trivial_names = {name for pair in pairs for name in pair}
    partner = {}
    for a, b in pairs:
        partner[a] = b
        partner[b] = a
    trivial_idx = {quiver.arrow_index[name] for name in trivial_names}

    for length in range(3, q.trunc + 1):
        buckets: dict[str, Series] = {}
        offending = False
        for rep, coeff in current.terms():
            if rep.length != length:
                continue
            rot_at = None
            for k, idx in enumerate(rep.word):
                if idx in trivial_idx:
                    rot_at = k
                    break
            if rot_at is None:
                continue
            offending = True
            rot = rep.rotate(rot_at)
            lead = quiver.arrows[rot.word[0]].name
            tail = Path(quiver, rot.word[1:])
            extra = Series.of_path(tail, q.trunc, coeff, field)
            buckets[lead] = buckets.get(lead, Series.zero(quiver, q.trunc, field)) + extra
        if not offending:
            continue
        images = {}
        for j, a in enumerate(quiver.arrows):
            img = Series.of_path(Path(quiver, (j,)), q.trunc, field.one, field)
            if a.name in partner and partner[a.name] in buckets:
                img = img - buckets[partner[a.name]]
            images[a.name] = img
        step = Substitution(quiver, quiver, images, q.trunc, field, _validated=True)
        current = Potential.from_series(substitute(step, current.as_series()))
        witness = compose_substitutions(step, witness)

    # The potential now decomposes as trivial part + reduced part.
    trivial_entries = []
    reduced_entries = []
    for rep, coeff in current.terms():
        touches = any(idx in trivial_idx for idx in rep.word)
        if rep.length == 2 and touches:
            trivial_entries.append((rep, coeff))
        elif touches:
            raise QpcalcError(
                "reduction failed to eliminate a trivial arrow; internal defect")
        else:
            reduced_entries.append((rep, coeff))
    trivial_pot = Potential(quiver, q.trunc, trivial_entries, field)
    expected = {}
    for a, b in pairs:
        key, _ = cyclic_normalize(quiver.path([a, b]))
        expected[key] = field.one
    if trivial_pot.coeffs_by_class() != expected:
        raise QpcalcError("trivial part is not in normal form; internal defect")

    red_quiver = GradedQuiver(
        quiver.vertices, [a for a in quiver.arrows if a.name not in trivial_names])
    red_pot = Potential(red_quiver, q.trunc,
                        [(translate_path(p, red_quiver), c) for p, c in reduced_entries],
                        field)
    reduced = QP(red_quiver, red_pot, q.trunc, field, accuracy=q.accuracy)
    transformed = q.with_potential(current)
    return SplitResult(pairs, reduced, witness, trivial_pot, transformed)


def apply_equiv(phi: Substitution, q: QP) -> QP:
    """Transport a QP along a right-equivalence candidate."""
    w = substitute(phi, q.w_series())
    pot = Potential.from_series(w)
    return QP(phi.target, pot, q.trunc, q.field, accuracy=q.accuracy)


class JacobianTruncation:
    """The finite-dimensional algebra kQ-hat/(I + m^o) with quotient bases.

    I is the two-sided ideal generated by the cyclic derivatives of W.
    Works blockwise per (source, target); the relation span is kept in
    fully reduced form with longest-path pivots, so quotient coordinates
    of a path only involve paths of at most its length.
    """

    def __init__(self, q: QP, order: int):
        if order > q.accuracy:
            raise InsufficientTruncation(
                f"order {order} exceeds accuracy watermark {q.accuracy}")
        self.q = q
        self.order = order
        self.quiver = q.quiver
        self.field = q.field
        self.paths = _paths_up_to(q.quiver, order - 1)
        self._by_block: dict[tuple[str, str], list[Path]] = {}
        for p in self.paths:
            self._by_block.setdefault((p.source, p.target), []).append(p)
        self._echelon: dict[tuple[str, str], SparseEchelon] = {}
        w = q.w_series()
        rels = []
        for j, a in enumerate(q.quiver.arrows):
            r = cyclic_derivative(Path(q.quiver, (j,)), w)
            if not r.is_zero():
                rels.append((a, r))
        for a, r in rels:
            min_len = r.min_length()
            # u runs over paths out of s(a), v over paths into t(a).
            us = [p for p in self.paths if p.source == a.source]
            vs = [p for p in self.paths if p.target == a.target]
            for u in us:
                for v in vs:
                    if u.length + v.length + min_len > order - 1:
                        continue
                    vec: dict = {}
                    for t, c in r.terms.items():
                        total = u.length + t.length + v.length
                        if total > order - 1:
                            continue
                        pth = u.compose(t).compose(v)
                        key = (len(pth.word), pth.word)
                        acc = vec.get(key)
                        acc = c if acc is None else acc + c
                        if acc:
                            vec[key] = acc
                        elif key in vec:
                            del vec[key]
                    if vec:
                        block = (v.source, u.target)
                        ech = self._echelon.get(block)
                        if ech is None:
                            ech = self._echelon[block] = SparseEchelon(self.field)
                        ech.insert(vec)

    def blocks(self):
        return self._by_block.keys()

    def block_paths(self, src: str, tgt: str) -> list[Path]:
        return self._by_block.get((src, tgt), [])

    def quotient_basis(self, src: str, tgt: str) -> list[Path]:
        """Non-pivot paths: a basis of the block of the quotient algebra."""
        ech = self._echelon.get((src, tgt))
        pivots = set(ech.pivots()) if ech else set()
        return [p for p in self.block_paths(src, tgt)
                if (len(p.word), p.word) not in pivots]

    def reduce_path(self, p: Path) -> dict:
        """Quotient coordinates of a path class, keyed by (len, word)."""
        if p.length > self.order - 1:
            return {}
        key = (len(p.word), p.word)
        ech = self._echelon.get((p.source, p.target))
        if ech is None:
            return {key: self.field.one}
        return ech.reduce({key: self.field.one})

    def reduce_vector(self, terms: dict) -> dict:
        """Reduce a {path: coeff} combination within one block."""
        out: dict = {}
        block = None
        for p, c in terms.items():
            if p.length > self.order - 1 or not c:
                continue
            block = (p.source, p.target)
            key = (len(p.word), p.word)
            acc = out.get(key)
            acc = c if acc is None else acc + c
            if acc:
                out[key] = acc
            elif key in out:
                del out[key]
        if not out or block is None:
            return {}
        ech = self._echelon.get(block)
        return ech.reduce(out) if ech else out

    def dim(self) -> int:
        total = len(self.paths)
        for ech in self._echelon.values():
            total -= ech.rank
        return total


def _paths_up_to(quiver: GradedQuiver, max_len: int,
                 min_degree: int | None = None) -> list[Path]:
    """All paths of length <= max_len (optionally with degree >= min_degree)."""
    out = [quiver.lazy(v) for v in quiver.vertices]
    frontier = list(out)
    for _ in range(max_len):
        new_frontier = []
        for p in frontier:
            # extend on the right: p * arrow, arrow applied first
            for idx in quiver._in[p.source]:
                arr = quiver.arrows[idx]
                if min_degree is not None and p.degree + arr.degree < min_degree:
                    continue
                q = Path(quiver, p.word + (idx,)) if p.word else Path(quiver, (idx,))
                new_frontier.append(q)
        out.extend(new_frontier)
        frontier = new_frontier
        if not frontier:
            break
    return out


def jacobian_dims(q: QP, orders) -> list[int]:
    """dim of kQ-hat/(I + m^o) for each requested order o.

    Exact linear algebra over the coefficient field, blockwise per
    (source, target).  Orders beyond the accuracy watermark raise
    InsufficientTruncation.
    """
    orders = list(orders)
    if not orders:
        return []
    if max(orders) > q.accuracy:
        raise InsufficientTruncation(
            f"max order {max(orders)} exceeds accuracy watermark {q.accuracy}")
    dims = []
    for o in orders:
        dims.append(JacobianTruncation(q, o).dim())
    return dims


def dims_stabilized(dims: list[int], window: int = 3) -> bool:
    """Heuristic finite-dimensionality flag: last `window` orders all equal."""
    if len(dims) < window:
        return False
    tail = dims[-window:]
    return all(x == tail[0] for x in tail)
