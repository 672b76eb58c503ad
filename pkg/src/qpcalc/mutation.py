"""DWZ premutation, mutation (= reduce after premutation), involution checks.

Composite arrows are named ``[alpha.beta]``; reversed arrows get a ``*``
suffix.  Name provenance is recorded so that doubly starred arrows in
mutate-twice pipelines stay traceable.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import LoopAtVertex, TwoCycleAtVertex
from .qp import QP, Potential, jacobian_dims, normalize_c3, split
from .quiver import Arrow, GradedQuiver, Path


@dataclass
class MutationResult:
    result: QP
    vertex: str
    name_table: dict  # new arrow name -> provenance description
    premutated: QP | None = None
    trivial_pairs: list | None = None

    @property
    def qp(self) -> QP:
        return self.result


def _check_mutable(q: QP, i: str):
    if i not in q.quiver.vertex_index:
        raise KeyError(f"unknown vertex {i!r}")
    if q.quiver.has_loop(i):
        raise LoopAtVertex(f"loop at vertex {i}")
    if q.quiver.on_two_cycle(i):
        raise TwoCycleAtVertex(f"two-cycle at vertex {i}")


def composite_name(alpha: str, beta: str) -> str:
    return f"[{alpha}.{beta}]"


def star_name(name: str) -> str:
    return name + "*"


def premutate(q: QP, i: str) -> MutationResult:
    """The DWZ premutation at vertex i.

    Step 1 adds [alpha.beta]: s(beta) -> t(alpha) for every beta into i
    and alpha out of i; step 2 replaces arrows incident to i by reversed
    starred arrows.  W' = W'_1 + W'_2 with W'_1 rewriting through-i
    compositions and W'_2 = sum [alpha.beta] beta* alpha*.
    """
    _check_mutable(q, i)
    q = normalize_c3(q, i)
    quiver = q.quiver
    outgoing = quiver.arrows_out(i)
    incoming = quiver.arrows_in(i)
    untouched = [a for a in quiver.arrows if a.source != i and a.target != i]

    name_table: dict[str, str] = {}
    new_arrows: list[Arrow] = [Arrow(a.name, a.source, a.target) for a in untouched]
    for a in untouched:
        name_table[a.name] = f"kept {a.name}"
    for alpha in outgoing:
        for beta in incoming:
            nm = composite_name(alpha.name, beta.name)
            new_arrows.append(Arrow(nm, beta.source, alpha.target))
            name_table[nm] = f"composite {alpha.name} o {beta.name} through {i}"
    for a in outgoing:
        nm = star_name(a.name)
        new_arrows.append(Arrow(nm, a.target, a.source))
        name_table[nm] = f"reversal of {a.name}"
    for a in incoming:
        nm = star_name(a.name)
        new_arrows.append(Arrow(nm, a.target, a.source))
        name_table[nm] = f"reversal of {a.name}"
    new_quiver = GradedQuiver(quiver.vertices, new_arrows)

    out_idx = {a.name for a in outgoing}
    in_idx = {a.name for a in incoming}
    entries = []
    for rep, coeff in q.potential.terms():
        assert rep.source != i, "normalize_c3 must have moved the basepoint off i"
        letters = [a.name for a in rep.letters()]
        new_word: list[str] = []
        k = 0
        while k < len(letters):
            nm = letters[k]
            if nm in out_idx:
                assert k + 1 < len(letters), "cycle split at i despite c3 normalization"
                nxt = letters[k + 1]
                assert nxt in in_idx, "arrow out of i not followed by arrow into i"
                new_word.append(composite_name(nm, nxt))
                k += 2
            else:
                new_word.append(nm)
                k += 1
        entries.append((new_quiver.path(new_word), coeff))
    for alpha in outgoing:
        for beta in incoming:
            w2 = new_quiver.path(
                [composite_name(alpha.name, beta.name),
                 star_name(beta.name), star_name(alpha.name)])
            entries.append((w2, q.field.one))

    pot = Potential(new_quiver, q.trunc, (), q.field)
    for p, coeff in entries:
        pot._add(p, coeff, keep_rotation=True)  # rotations keep (c3) visible
    result = QP(new_quiver, pot, q.trunc, q.field, accuracy=q.accuracy - 1)
    assert not result.quiver.has_loop(i), "premutation produced a loop at i"
    assert not result.quiver.on_two_cycle(i), "premutation produced a 2-cycle at i"
    return MutationResult(result, i, name_table, premutated=result)


def mutate(q: QP, i: str) -> MutationResult:
    """Mutation at i: the reduced part of the premutation."""
    pre = premutate(q, i)
    sp = split(pre.result)
    name_table = dict(pre.name_table)
    for a, b in sp.trivial_pairs:
        name_table[a] = f"cancelled (trivial pair with {b})"
        name_table[b] = f"cancelled (trivial pair with {a})"
    return MutationResult(sp.reduced, i, name_table,
                          premutated=pre.result, trivial_pairs=sp.trivial_pairs)


def arrow_multiset(q: QP) -> dict[tuple[str, str], int]:
    counts: dict[tuple[str, str], int] = {}
    for a in q.quiver.arrows:
        key = (a.source, a.target)
        counts[key] = counts.get(key, 0) + 1
    return counts


@dataclass
class InvolutionReport:
    vertex: str
    arrow_multisets_equal: bool
    jacobian_orders: list[int]
    dims_original: list[int]
    dims_double_mutation: list[int]

    @property
    def dims_equal(self) -> bool:
        return self.dims_original == self.dims_double_mutation

    @property
    def passed(self) -> bool:
        return self.arrow_multisets_equal and self.dims_equal


def involution_report(q: QP, i: str) -> InvolutionReport:
    """Compare the reduction of the double premutation against reduce(q).

    Arrow multisets per (source, target) must agree, and truncated
    Jacobian dimension sequences must agree up to the accuracy watermark
    left after two mutations (N - 2 for a fresh input).
    """
    once = mutate(q, i)
    twice = mutate(once.result, i)
    base = split(q).reduced
    max_order = min(twice.result.accuracy, base.accuracy)
    orders = list(range(1, max_order + 1))
    dims_base = jacobian_dims(base, orders)
    dims_twice = jacobian_dims(twice.result, orders)
    return InvolutionReport(
        vertex=i,
        arrow_multisets_equal=arrow_multiset(base) == arrow_multiset(twice.result),
        jacobian_orders=orders,
        dims_original=dims_base,
        dims_double_mutation=dims_twice,
    )
