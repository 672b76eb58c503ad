"""The completed Ginzburg dg algebra of a QP, and truncation-level homology.

The graded quiver keeps the original arrows in degree 0, adds a dual
arrow of degree -1 for each of them and a loop of degree -2 at every
vertex.  The differential is d(a) = 0, d(a*) = the cyclic derivative of
W by a, d(t_i) = e_i (sum over arrows of [a, a*]) e_i, extended by the
graded Leibniz rule d(uv) = (du)v + (-1)^p u (dv) with p the
cohomological degree of u.

Truncation uses path length in the extended quiver: every generator,
including the degree -2 loops, counts 1 toward the order.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .errors import InsufficientTruncation, NotARightEquivalence
from .linalg import rank_of_vectors
from .qp import QP, JacobianTruncation, translate_series
from .quiver import Arrow, GradedQuiver, Path
from .series import Series, cyclic_derivative
from .substitution import Substitution, invert_substitution, substitute


def _fresh_name(base: str, taken: set[str]) -> str:
    name = base
    while name in taken:
        name += "'"
    taken.add(name)
    return name


class GinzburgAlgebra:
    """Q-tilde plus the differential table on generators."""

    def __init__(self, qp: QP):
        self.qp = qp
        self.trunc = qp.trunc
        self.field = qp.field
        q = qp.quiver
        taken = {a.name for a in q.arrows}
        self.dual: dict[str, str] = {}
        arrows = [Arrow(a.name, a.source, a.target, 0) for a in q.arrows]
        for a in q.arrows:
            nm = _fresh_name(a.name + "*", taken)
            self.dual[a.name] = nm
            arrows.append(Arrow(nm, a.target, a.source, -1))
        self.tloop: dict[str, str] = {}
        for v in q.vertices:
            nm = _fresh_name(f"t_{v}", taken)
            self.tloop[v] = nm
            arrows.append(Arrow(nm, v, v, -2))
        self.quiver = GradedQuiver(q.vertices, arrows)

        w = qp.w_series()
        self.diff: dict[str, Series] = {}
        zero = Series.zero(self.quiver, self.trunc, self.field)
        for a in q.arrows:
            self.diff[a.name] = zero
        for j, a in enumerate(q.arrows):
            da = cyclic_derivative(Path(q, (j,)), w)
            self.diff[self.dual[a.name]] = translate_series(da, self.quiver)
        for v in q.vertices:
            terms = []
            for a in q.arrows:
                ia = self.quiver.arrow_index[a.name]
                istar = self.quiver.arrow_index[self.dual[a.name]]
                if a.target == v:
                    terms.append((Path(self.quiver, (ia, istar)), self.field.one))
                if a.source == v:
                    terms.append((Path(self.quiver, (istar, ia)), -self.field.one))
            self.diff[self.tloop[v]] = Series(self.quiver, self.trunc, terms, self.field)

    def lift(self, s: Series) -> Series:
        """A degree-0 series on Q reinterpreted on Q-tilde."""
        return translate_series(s, self.quiver)

    def d_path(self, p: Path, max_len: int | None = None) -> Series:
        """Differential of a single path by the graded Leibniz rule.

        Terms longer than ``max_len`` (default: the truncation order) are
        dropped, matching the quotient by the corresponding power of m.
        """
        n = self.trunc if max_len is None else max_len
        arrows = self.quiver.arrows
        out: dict[Path, object] = {}
        sign_deg = 0
        for k, idx in enumerate(p.word):
            letter = arrows[idx]
            dx = self.diff[letter.name]
            if not dx.is_zero():
                pre = p.word[:k]
                post = p.word[k + 1:]
                sgn = -1 if sign_deg % 2 else 1
                for t, c in dx.terms.items():
                    if len(pre) + len(t.word) + len(post) > n:
                        continue
                    newp = Path(self.quiver, pre + t.word + post)
                    cc = c if sgn == 1 else -c
                    acc = out.get(newp)
                    acc = cc if acc is None else acc + cc
                    if acc:
                        out[newp] = acc
                    elif newp in out:
                        del out[newp]
            sign_deg += letter.degree
        return Series(self.quiver, self.trunc, out, self.field)

    def d_series(self, s: Series, max_len: int | None = None) -> Series:
        cap = s.trunc if max_len is None else max_len
        out = Series.zero(self.quiver, s.trunc, self.field)
        for p, c in s.terms.items():
            out = out + self.d_path(p, cap).scale(c).truncate(s.trunc)
        return out


def build_ginzburg(q: QP) -> GinzburgAlgebra:
    return GinzburgAlgebra(q)


def check_d_squared(g: GinzburgAlgebra) -> bool:
    """d(d(rho)) = 0 for every generator; exact symbolic zero."""
    for a in g.quiver.arrows:
        img = g.diff[a.name]
        if not g.d_series(img).is_zero():
            return False
    return True


@dataclass
class HomologyTable:
    """Dimensions of H^p(Gamma/m^n) with per-cell rank data."""

    dims: dict = dc_field(default_factory=dict)  # (degree, order) -> dim
    component_dims: dict = dc_field(default_factory=dict)  # (degree, order) -> dim C^p
    ranks: dict = dc_field(default_factory=dict)  # (degree, order) -> rank of d from C^p

    def degrees(self):
        return sorted({p for p, _ in self.dims})

    def orders(self):
        return sorted({n for _, n in self.dims})

    def to_json(self) -> dict:
        return {
            "degrees": self.degrees(),
            "orders": self.orders(),
            "dims": [
                {"degree": p, "order": n, "dim": d}
                for (p, n), d in sorted(self.dims.items())
            ],
            "ranks": [
                {"degree": p, "order": n, "component_dim": self.component_dims[(p, n)],
                 "rank": self.ranks[(p, n)]}
                for (p, n) in sorted(self.ranks)
            ],
        }

    def format_text(self) -> str:
        degrees = self.degrees()
        orders = self.orders()
        head = ["deg\\ord"] + [str(n) for n in orders]
        rows = [head]
        for p in degrees:
            rows.append([str(p)] + [str(self.dims.get((p, n), "")) for n in orders])
        widths = [max(len(r[i]) for r in rows) for i in range(len(head))]
        return "\n".join(
            "  ".join(cell.rjust(w) for cell, w in zip(row, widths)) for row in rows
        )


def _graded_paths(quiver: GradedQuiver, max_len: int, min_degree: int):
    """Paths of length <= max_len and degree >= min_degree, grouped by
    (source, target, degree)."""
    groups: dict[tuple[str, str, int], list[Path]] = {}
    frontier = [quiver.lazy(v) for v in quiver.vertices]
    for p in frontier:
        groups.setdefault((p.source, p.target, 0), []).append(p)
    for _ in range(max_len):
        nxt = []
        for p in frontier:
            pdeg = p.degree
            for idx in quiver._in[p.source]:
                arr = quiver.arrows[idx]
                d = pdeg + arr.degree
                if d < min_degree:
                    continue
                np = Path(quiver, p.word + (idx,))
                nxt.append(np)
                groups.setdefault((np.source, np.target, d), []).append(np)
        frontier = nxt
        if not frontier:
            break
    return groups


def truncation_homology(g: GinzburgAlgebra, orders, degrees) -> HomologyTable:
    """Exact dims of H^p(Gamma/m^n) for the requested degrees and orders.

    Computed blockwise per (source, target, degree) with fraction-exact
    rank computations; deterministic regardless of evaluation order.
    """
    orders = sorted(set(orders))
    degrees = sorted(set(degrees))
    if not orders or not degrees:
        return HomologyTable()
    if max(orders) > g.qp.accuracy:
        raise InsufficientTruncation(
            f"order {max(orders)} exceeds accuracy watermark {g.qp.accuracy}")
    table = HomologyTable()
    pmin, pmax = min(degrees) - 1, max(degrees)
    for n in orders:
        groups = _graded_paths(g.quiver, n - 1, pmin)
        blocks = sorted({(s, t) for (s, t, _) in groups},
                        key=lambda st: (g.quiver.vertex_index[st[0]],
                                        g.quiver.vertex_index[st[1]]))
        dim_c: dict[int, int] = {}
        rank_d: dict[int, int] = {}
        for p in range(pmin, pmax + 1):
            dim_c[p] = sum(len(groups.get((s, t, p), ())) for s, t in blocks)
            rank_total = 0
            for s, t in blocks:
                basis = groups.get((s, t, p), ())
                if not basis:
                    continue
                tgt_index = {q: i for i, q in enumerate(groups.get((s, t, p + 1), ()))}
                cols = []
                for q in basis:
                    ds = g.d_path(q, n - 1)
                    if ds.is_zero():
                        continue
                    cols.append({tgt_index[t2]: c for t2, c in ds.terms.items()})
                rank_total += rank_of_vectors(cols, g.field)
            rank_d[p] = rank_total
        for p in degrees:
            h = dim_c.get(p, 0) - rank_d.get(p, 0) - rank_d.get(p - 1, 0)
            table.dims[(p, n)] = h
            table.component_dims[(p, n)] = dim_c.get(p, 0)
            table.ranks[(p, n)] = rank_d.get(p, 0)
    return table


@dataclass
class TransportResult:
    images: dict  # generator name of Q-tilde -> Series on the target Q-tilde'
    commutes: dict  # generator name -> bool, d' o phi_* = phi_* o d mod m^N
    verified_mod_order: int  # comparisons hold modulo m^this

    @property
    def ok(self) -> bool:
        return all(self.commutes.values())


def transport_ginzburg(phi: Substitution, g: GinzburgAlgebra,
                       g2: GinzburgAlgebra) -> TransportResult:
    """Extend a right-equivalence to the Ginzburg algebras and verify it.

    phi_* fixes vertices, sends a plain arrow to phi(arrow), t_i to t'_i,
    and a dual arrow rho* to the double sum over the coefficients of
    phi^{-1}(rho') (computed by order-by-order inversion).  The result is
    checked to commute with the differentials on every generator modulo
    m^N (one order is lost through the cyclic derivatives in d).
    """
    qp, qp2 = g.qp, g2.qp
    from .qp import Potential
    img = Potential.from_series(substitute(phi, qp.w_series()))
    if not img.cyclically_equal(qp2.potential):
        raise NotARightEquivalence(
            "substitution does not carry W to a cyclic equivalent of W'")
    psi = invert_substitution(phi)
    images: dict[str, Series] = {}
    for a in qp.quiver.arrows:
        images[a.name] = g2.lift(phi.images[a.name])
    for v in qp.quiver.vertices:
        images[g.tloop[v]] = Series.of_path(
            Path(g2.quiver, (g2.quiver.arrow_index[g2.tloop[v]],)),
            g2.trunc, g2.field.one, g2.field)
    for rho in qp.quiver.arrows:
        acc = Series.zero(g2.quiver, g2.trunc, g2.field)
        for rho2 in qp2.quiver.arrows:
            star2 = Series.of_path(
                Path(g2.quiver, (g2.quiver.arrow_index[g2.dual[rho2.name]],)),
                g2.trunc, g2.field.one, g2.field)
            pre_image = psi.images[rho2.name]
            for p, b in pre_image.terms.items():
                letters = list(p.word)
                for j, idx in enumerate(letters):
                    if qp.quiver.arrows[idx].name != rho.name:
                        continue
                    head = Path(qp.quiver, tuple(letters[:j])) if j else \
                        qp.quiver.lazy(p.target)
                    tail = Path(qp.quiver, tuple(letters[j + 1:])) if j + 1 < len(letters) \
                        else qp.quiver.lazy(p.source)
                    part = g2.lift(phi.apply_path(tail)) * star2 * g2.lift(phi.apply_path(head))
                    acc = acc + part.scale(b)
        images[g.dual[rho.name]] = acc

    def apply_star(s: Series) -> Series:
        out = Series.zero(g2.quiver, g2.trunc, g2.field)
        for p, c in s.terms.items():
            if p.is_lazy:
                out = out + Series.of_path(g2.quiver.lazy(p.base), g2.trunc, c, g2.field)
                continue
            prod = None
            for ltr in p.letters():
                img = images[ltr.name]
                prod = img if prod is None else prod * img
            out = out + prod.scale(c)
        return out

    cutoff = g.trunc - 1  # compare path lengths <= N-1, i.e. modulo m^N
    commutes = {}
    for a in g.quiver.arrows:
        lhs = apply_star(g.diff[a.name]).truncate(cutoff)
        rhs = g2.d_series(images[a.name]).truncate(cutoff)
        commutes[a.name] = lhs == rhs
    return TransportResult(images, commutes, verified_mod_order=cutoff + 1)


@dataclass
class Degree0Report:
    vertex: str
    order: int
    windows: dict  # cohomological degree -> max reliable path length
    dims: dict  # cohomological degree -> windowed homology dim
    expected_vertex_dim: int

    @property
    def f_injective(self) -> bool:
        return self.dims.get(-3, 0) == 0

    @property
    def consistent(self) -> bool:
        return (self.dims.get(0, 0) == 1
                and all(self.dims.get(p, 0) == 0 for p in (-1, -2, -3)))


def degree0_criterion(q: QP, i: str, n: int) -> Degree0Report:
    """Homology of the 4-term projective complex over the truncated Jacobian.

    The complex P_i -> B -> B' -> P_i (degrees -3..0) has components:
    left multiplication by the arrows out of i, by the mixed second
    cyclic derivatives -d_{rho tau}W, and by the arrows into i.  Homology
    is reported inside the interior length window [0, n-2]; it is
    concentrated as S_i in degree 0 exactly when the criterion holds.
    """
    if q.quiver.has_loop(i):
        from .errors import LoopAtVertex
        raise LoopAtVertex(f"loop at vertex {i}")
    jt = JacobianTruncation(q, n)
    quiver = q.quiver
    field = q.field
    w = q.w_series()
    outgoing = quiver.arrows_out(i)
    incoming = quiver.arrows_in(i)
    d2w = {}
    for rho in outgoing:
        for tau in incoming:
            pr = quiver.path([rho.name, tau.name])
            d2w[(rho.name, tau.name)] = cyclic_derivative(pr, w)

    # slot lists per cohomological degree: (slot name, module vertex)
    slots = {
        -3: [("pi3", i)],
        -2: [(f"rho:{r.name}", r.target) for r in outgoing],
        -1: [(f"tau:{t.name}", t.source) for t in incoming],
        0: [("pi0", i)],
    }

    def slot_components(p_deg: int, slot, path: Path):
        """Image terms of a quotient-basis path under the differential."""
        _, vtx = slot
        out = []
        if p_deg == -3:
            for r in outgoing:
                ridx = quiver.arrow_index[r.name]
                img = Path(quiver, (ridx,) + path.word)
                out.append((f"rho:{r.name}", {img: field.one}))
        elif p_deg == -2:
            rname = slot[0].split(":", 1)[1]
            for t in incoming:
                series = d2w[(rname, t.name)]
                terms: dict[Path, object] = {}
                for tp, c in series.terms.items():
                    if tp.length + path.length <= n - 1:
                        terms[tp.compose(path)] = -c
                if terms:
                    out.append((f"tau:{t.name}", terms))
        elif p_deg == -1:
            tname = slot[0].split(":", 1)[1]
            tidx = quiver.arrow_index[tname]
            img = Path(quiver, (tidx,) + path.word)
            out.append(("pi0", {img: field.one}))
        return out

    # Window rule: the kernel at cohomological degree p is reliable on path
    # lengths l with l + jump(d_p) <= n-1, where jump is the largest length
    # raise of the outgoing differential; boundaries are exact at all alive
    # lengths (a dead domain element has a dead image).
    g_jump = max((t.length for s in d2w.values() for t in s.terms), default=0)
    jumps = {-3: 1, -2: g_jump, -1: 1, 0: 0}
    windows = {p: n - 1 - j for p, j in jumps.items()}
    dims: dict[int, int] = {}
    per_degree_cols: dict[int, list] = {p: [] for p in (-3, -2, -1, 0)}
    nshort: dict[int, int] = {p: 0 for p in (-3, -2, -1, 0)}
    for src in quiver.vertices:
        for p_deg in (-3, -2, -1, 0):
            for slot in slots[p_deg]:
                _, vtx = slot
                basis = jt.quotient_basis(src, vtx)
                for bpath in basis:
                    short = bpath.length <= windows[p_deg]
                    if short:
                        nshort[p_deg] += 1
                    vec: dict = {}
                    for tgt_slot, terms in slot_components(p_deg, slot, bpath):
                        red: dict = {}
                        for ip, c in terms.items():
                            if ip.length > n - 1:
                                continue
                            for key, rc in jt.reduce_vector({ip: c}).items():
                                acc = red.get(key)
                                acc = rc if acc is None else acc + rc
                                if acc:
                                    red[key] = acc
                                elif key in red:
                                    del red[key]
                        for key, c in red.items():
                            vec[(src, tgt_slot, key)] = c
                    per_degree_cols[p_deg].append((bpath.length, vec))
    for p_deg in (-3, -2, -1, 0):
        cols = per_degree_cols[p_deg]
        w = windows[p_deg]
        nonzero_short = [v for length, v in cols if length <= w and v]
        ker_short = nshort[p_deg] - rank_of_vectors(nonzero_short, field)
        prev = per_degree_cols.get(p_deg - 1, [])
        rank_prev = rank_of_vectors([v for _, v in prev if v], field)
        long_rows_prev = []
        for _, v in prev:
            if not v:
                continue
            vv = {k: c for k, c in v.items() if k[2][0] > w}
            if vv:
                long_rows_prev.append(vv)
        rank_prev_long = rank_of_vectors(long_rows_prev, field)
        dims[p_deg] = ker_short - (rank_prev - rank_prev_long)
    return Degree0Report(vertex=i, order=n, windows=windows, dims=dims,
                         expected_vertex_dim=1)
