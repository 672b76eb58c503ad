"""Continuous algebra homomorphisms between truncated path algebras.

A Substitution fixes vertices and sends each arrow to a series of paths
with the same endpoints and degree, of length >= 1, such that the
length-1 part is invertible blockwise.  These are exactly the truncated
right-equivalence candidates; inverses are computed order by order.
"""

from __future__ import annotations

from typing import Mapping

from .errors import SingularLinearPart, TruncationMismatch, QuiverMismatch
from .fields import QQ
from .linalg import invert_dense
from .quiver import GradedQuiver, Path
from .series import Series


class Substitution:
    """Arrow images a -> Series on the target quiver, vertices fixed."""

    def __init__(
        self,
        source: GradedQuiver,
        target: GradedQuiver,
        images: Mapping[str, Series],
        trunc: int,
        field=QQ,
        _validated: bool = False,
    ):
        if set(source.vertices) != set(target.vertices):
            raise QuiverMismatch("substitution must fix the vertex set")
        self.source = source
        self.target = target
        self.trunc = trunc
        self.field = field
        self.images = dict(images)
        for a in source.arrows:
            img = self.images.get(a.name)
            if img is None:
                raise ValueError(f"no image for arrow {a.name}")
            if img.trunc != trunc:
                raise TruncationMismatch(f"image of {a.name} at order {img.trunc} != {trunc}")
            for p in img.terms:
                if p.length < 1:
                    raise ValueError(f"image of {a.name} has a lazy term")
                if p.source != a.source or p.target != a.target:
                    raise ValueError(f"image of {a.name} has a term with wrong endpoints")
                if p.degree != a.degree:
                    raise ValueError(f"image of {a.name} has a term of wrong degree")
        if not _validated:
            self._check_linear_part()

    # -- linear part ----------------------------------------------------

    def _blocks(self) -> dict[tuple[str, str, int], tuple[list, list]]:
        """Group source/target arrows by (source, target, degree)."""
        blocks: dict[tuple[str, str, int], tuple[list, list]] = {}
        for a in self.source.arrows:
            blocks.setdefault((a.source, a.target, a.degree), ([], []))[0].append(a)
        for b in self.target.arrows:
            blocks.setdefault((b.source, b.target, b.degree), ([], []))[1].append(b)
        return blocks

    def linear_matrix(self, key) -> list[list]:
        """Matrix M with M[j][i] = coeff of target arrow j in image of source arrow i."""
        src_arrows, tgt_arrows = self._blocks()[key]
        rows = []
        for tb in tgt_arrows:
            tpath = Path(self.target, (self.target.arrow_index[tb.name],))
            rows.append([self.images[sa.name].coeff(tpath) for sa in src_arrows])
        return rows

    def _check_linear_part(self):
        for key, (src_arrows, tgt_arrows) in self._blocks().items():
            if len(src_arrows) != len(tgt_arrows):
                raise SingularLinearPart(
                    f"block {key}: {len(src_arrows)} source vs {len(tgt_arrows)} target arrows"
                )
            if not src_arrows:
                continue
            m = self.linear_matrix(key)
            if invert_dense(m, self.field) is None:
                raise SingularLinearPart(f"linear part singular on block {key}")

    # -- application ------------------------------------------------------

    def apply_path(self, p: Path) -> Series:
        if p.is_lazy:
            return Series.of_path(self.target.lazy(p.base), self.trunc, self.field.one, self.field)
        out = None
        for a in p.letters():
            img = self.images[a.name]
            out = img if out is None else out * img
            if out.is_zero():
                break
        return out

    def __call__(self, s: Series) -> Series:
        return substitute(self, s)

    def is_identity(self) -> bool:
        if self.source != self.target:
            return False
        for a in self.source.arrows:
            img = self.images[a.name]
            p = Path(self.source, (self.source.arrow_index[a.name],))
            if list(img.terms.items()) != [(p, self.field.one)]:
                return False
        return True

    @classmethod
    def identity(cls, quiver: GradedQuiver, trunc: int, field=QQ) -> "Substitution":
        images = {
            a.name: Series.of_path(Path(quiver, (i,)), trunc, field.one, field)
            for i, a in enumerate(quiver.arrows)
        }
        return cls(quiver, quiver, images, trunc, field, _validated=True)


def substitute(phi: Substitution, s: Series) -> Series:
    """Image of a series under the homomorphism, truncated at order N."""
    if s.trunc != phi.trunc:
        raise TruncationMismatch(f"series order {s.trunc} != substitution order {phi.trunc}")
    if s.quiver != phi.source:
        raise QuiverMismatch("series does not live on the substitution's source quiver")
    out = Series.zero(phi.target, phi.trunc, phi.field)
    for p, c in s.terms.items():
        out = out + phi.apply_path(p).scale(c)
    return out


def compose_substitutions(outer: Substitution, inner: Substitution) -> Substitution:
    """The substitution applying ``inner`` first: result(S) = outer(inner(S))."""
    if outer.trunc != inner.trunc:
        raise TruncationMismatch("composition of substitutions at different orders")
    if inner.target != outer.source:
        raise QuiverMismatch("inner target quiver != outer source quiver")
    images = {
        a.name: substitute(outer, inner.images[a.name]) for a in inner.source.arrows
    }
    return Substitution(
        inner.source, outer.target, images, outer.trunc, outer.field, _validated=True
    )


def invert_substitution(phi: Substitution) -> Substitution:
    """The inverse homomorphism psi with psi(phi(S)) = S mod m^(N+1).

    The linear part is inverted blockwise; higher-length defects are then
    cancelled by Newton iteration, each pass at least doubling the length
    below which the composite is the identity.
    """
    n = phi.trunc
    field = phi.field
    # Invert the length-1 part blockwise.
    images: dict[str, Series] = {}
    for key, (src_arrows, tgt_arrows) in phi._blocks().items():
        if not tgt_arrows:
            continue
        m = phi.linear_matrix(key)
        minv = invert_dense(m, field)
        if minv is None:
            raise SingularLinearPart(f"linear part singular on block {key}")
        for j, tb in enumerate(tgt_arrows):
            terms = []
            for i, sa in enumerate(src_arrows):
                c = minv[i][j]
                if c:
                    terms.append((Path(phi.source, (phi.source.arrow_index[sa.name],)), c))
            images[tb.name] = Series(phi.source, n, terms, field)
    psi = Substitution(phi.target, phi.source, images, n, field, _validated=True)

    for _ in range(n):
        comp = compose_substitutions(psi, phi)  # should be near-identity on phi.source
        defects = {}
        worst = None
        for i, a in enumerate(phi.source.arrows):
            d = comp.images[a.name] - Series.of_path(
                Path(phi.source, (i,)), n, field.one, field
            )
            defects[a.name] = d
            ml = d.min_length()
            if ml is not None:
                worst = ml if worst is None else min(worst, ml)
        if worst is None:
            break
        # K: a -> a - defect(a); the corrected inverse is K after psi.
        k_images = {
            a.name: Series.of_path(Path(phi.source, (i,)), n, field.one, field)
            - defects[a.name]
            for i, a in enumerate(phi.source.arrows)
        }
        k = Substitution(phi.source, phi.source, k_images, n, field, _validated=True)
        psi = compose_substitutions(k, psi)
    else:
        comp = compose_substitutions(psi, phi)
        if not comp.is_identity():
            raise AssertionError("substitution inversion failed to converge")
    return psi
