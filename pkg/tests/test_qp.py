import random
from fractions import Fraction

import pytest

from oracles import jacobian_dim_bruteforce
from qpcalc.errors import (
    ArrowNameClash,
    InsufficientTruncation,
    LoopAtVertex,
    VertexSetMismatch,
)
from qpcalc.examples import qp_a2, qp_c3, qp_triv, random_qp, random_substitution
from qpcalc.qp import (
    QP,
    Potential,
    apply_equiv,
    direct_sum,
    jacobian_dims,
    normalize_c3,
    validate_qp,
)
from qpcalc.quiver import Arrow, GradedQuiver, Path
from qpcalc.series import Series, cyclic_derivative
from qpcalc.substitution import Substitution


def test_validate_c3():
    rep = validate_qp(qp_c3())
    assert rep.valid and rep.in_m2 and rep.cyclically_normalized
    assert not any(r.loop for r in rep.vertex.values())
    assert not any(r.two_cycle for r in rep.vertex.values())
    # the stored normal form a.c.b is based at vertex 2
    assert rep.vertex["2"].cycle_based_here
    assert all(rep.mutable(v) for v in "123")


def test_validate_loop():
    quiver = GradedQuiver(["1"], [Arrow("l", "1", "1")])
    q = QP(quiver, Potential(quiver, 4), 4)
    rep = validate_qp(q)
    assert rep.vertex["1"].loop
    assert not rep.mutable("1")


def test_validate_not_in_m2():
    quiver = GradedQuiver(["1"], [Arrow("l", "1", "1")])
    pot = Potential(quiver, 4, [(quiver.path(["l"]), Fraction(1))])
    q = QP(quiver, pot, 4)
    rep = validate_qp(q)
    assert not rep.in_m2 and not rep.valid


def test_normalize_c3_moves_basepoint():
    q = qp_c3()
    for i in "123":
        moved = normalize_c3(q, i)
        for rep, _ in moved.potential.terms():
            assert rep.source != i
        # cyclic derivative images are preserved exactly
        for a in q.quiver.arrows:
            p = Path(q.quiver, (q.quiver.arrow_index[a.name],))
            assert cyclic_derivative(p, moved.w_series()) == \
                cyclic_derivative(p, q.w_series())


def test_normalize_c3_no_cycle_through_vertex():
    q = qp_a2()  # W = 0
    assert normalize_c3(q, "2") == q


def test_normalize_c3_loop_error():
    quiver = GradedQuiver(["1"], [Arrow("l", "1", "1")])
    pot = Potential(quiver, 4, [(quiver.path(["l", "l"]), Fraction(1))])
    q = QP(quiver, pot, 4)
    with pytest.raises(LoopAtVertex):
        normalize_c3(q, "1")


def test_direct_sum():
    q = qp_c3()
    quiver = q.quiver
    t = GradedQuiver(quiver.vertices, [Arrow("x", "1", "2"), Arrow("y", "2", "1")])
    tq = QP(t, Potential(t, q.trunc, [(t.path(["x", "y"]), Fraction(1))]), q.trunc)
    s = direct_sum(q, tq)
    assert len(s.quiver.arrows) == 5
    assert len(list(s.potential.terms())) == 2
    # neutral element: empty-arrow QP with W = 0
    empty = QP(GradedQuiver(quiver.vertices, []),
               Potential(GradedQuiver(quiver.vertices, []), q.trunc), q.trunc)
    again = direct_sum(q, empty)
    assert again == q


def test_direct_sum_errors():
    q = qp_c3()
    other = GradedQuiver(["1", "2"], [])
    with pytest.raises(VertexSetMismatch):
        direct_sum(q, QP(other, Potential(other, q.trunc), q.trunc))
    clash = GradedQuiver(q.quiver.vertices, [Arrow("a", "2", "1")])
    with pytest.raises(ArrowNameClash):
        direct_sum(q, QP(clash, Potential(clash, q.trunc), q.trunc))


def test_jacobian_dims_examples():
    assert jacobian_dims(qp_c3(), range(1, 7)) == [3, 6, 6, 6, 6, 6]
    assert jacobian_dims(qp_a2(), range(1, 7)) == [3, 5, 6, 6, 6, 6]
    assert jacobian_dims(qp_triv(), [1, 2, 3]) == [2, 2, 2]
    # at order 1 only the lazy paths survive
    assert jacobian_dims(qp_c3(), [1]) == [3]


def test_jacobian_respects_watermark():
    q = qp_c3()
    q.accuracy = 3
    with pytest.raises(InsufficientTruncation):
        jacobian_dims(q, range(1, 5))


def test_jacobian_vs_bruteforce_corpus(corpus):
    for name, q in corpus[:8]:
        got = jacobian_dims(q, range(1, 5))
        want = [jacobian_dim_bruteforce(q, o) for o in range(1, 5)]
        assert got == want, name


def test_jacobian_ideal_closure_fixpoint():
    # the relation span is a two-sided ideal of the truncated algebra:
    # multiplying a spanning vector by an arrow stays inside the span
    from qpcalc.qp import JacobianTruncation
    rng = random.Random(3)
    for _ in range(10):
        q = random_qp(rng)
        if q.potential.is_zero():
            continue
        order = 4
        jt = JacobianTruncation(q, order)
        w = q.w_series()
        for a in q.quiver.arrows:
            rel = cyclic_derivative(Path(q.quiver, (q.quiver.arrow_index[a.name],)), w)
            if rel.is_zero():
                continue
            for b in q.quiver.arrows:
                # left multiply by b where composable
                terms = {}
                for p, c in rel.terms.items():
                    if b.source == p.target and p.length + 1 <= order - 1:
                        terms[Path(q.quiver, (q.quiver.arrow_index[b.name],) + p.word)] = c
                if terms:
                    assert jt.reduce_vector(terms) == {}


def test_apply_equiv_identity_and_scaling():
    q = qp_c3()
    phi = Substitution.identity(q.quiver, q.trunc)
    assert apply_equiv(phi, q) == q
    images = {
        a.name: Series.of_path(Path(q.quiver, (i,)), q.trunc)
        for i, a in enumerate(q.quiver.arrows)
    }
    images["a"] = images["a"].scale(Fraction(5))
    phi2 = Substitution(q.quiver, q.quiver, images, q.trunc)
    q2 = apply_equiv(phi2, q)
    coeffs = list(q2.potential.coeffs_by_class().values())
    assert coeffs == [Fraction(5)]


def test_jacobian_invariant_under_equivalence():
    rng = random.Random(77)
    cases = 0
    while cases < 25:
        q = random_qp(rng)
        phi = random_substitution(rng, q)
        q2 = apply_equiv(phi, q)
        assert jacobian_dims(q, range(1, 6)) == jacobian_dims(q2, range(1, 6))
        cases += 1


def test_prime_field_split_and_jacobian():
    from qpcalc.fields import PrimeField
    from qpcalc.qp import split
    f5 = PrimeField(5)
    quiver = GradedQuiver(["1", "2"], [Arrow("a", "1", "2"), Arrow("b", "2", "1")])
    w = Series(quiver, 6, [(quiver.path(["a", "b"]), f5(3))], field=f5)
    q = QP(quiver, Potential.from_series(w), 6, field=f5)
    sp = split(q)
    assert sp.trivial_pairs == [("a", "b")]
    assert jacobian_dims(q, [1, 2, 3]) == [2, 2, 2]
