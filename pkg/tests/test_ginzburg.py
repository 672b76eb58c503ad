import random
from fractions import Fraction

import pytest

from qpcalc.errors import NotARightEquivalence
from qpcalc.examples import qp_a2, qp_c3, qp_k2, random_qp, random_substitution, trivial_companion
from qpcalc.ginzburg import (
    build_ginzburg,
    check_d_squared,
    transport_ginzburg,
    truncation_homology,
)
from qpcalc.qp import QP, Potential, apply_equiv, direct_sum, jacobian_dims, split
from qpcalc.quiver import Arrow, GradedQuiver, Path
from qpcalc.series import Series
from qpcalc.substitution import Substitution


def arrow_series(g, name, coeff=1):
    return Series.of_path(
        Path(g.quiver, (g.quiver.arrow_index[name],)), g.trunc, Fraction(coeff))


def test_single_vertex_no_arrows():
    quiver = GradedQuiver(["1"], [])
    q = QP(quiver, Potential(quiver, 4), 4)
    g = build_ginzburg(q)
    assert [a.name for a in g.quiver.arrows] == ["t_1"]
    assert g.quiver.arrows[0].degree == -2
    assert g.diff["t_1"].is_zero()
    table = truncation_homology(g, [3], range(-2, 1))
    assert table.dims[(0, 3)] == 1
    assert table.dims[(-1, 3)] == 0
    assert table.dims[(-2, 3)] == 1  # the class of t_1


def test_a2_differential_table():
    g = build_ginzburg(qp_a2())
    assert g.diff["a*"].is_zero() and g.diff["b*"].is_zero()
    assert g.diff["t_1"] == -(arrow_series(g, "b*") * arrow_series(g, "b"))
    assert g.diff["t_2"] == (arrow_series(g, "b") * arrow_series(g, "b*")
                             - arrow_series(g, "a*") * arrow_series(g, "a"))
    assert g.diff["t_3"] == arrow_series(g, "a") * arrow_series(g, "a*")


def test_c3_differential_table():
    g = build_ginzburg(qp_c3())
    assert g.diff["a*"] == arrow_series(g, "c") * arrow_series(g, "b")
    assert g.diff["b*"] == arrow_series(g, "a") * arrow_series(g, "c")
    assert g.diff["c*"] == arrow_series(g, "b") * arrow_series(g, "a")


def test_d_squared_corpus(corpus):
    for name, q in corpus:
        assert check_d_squared(build_ginzburg(q)), name


def test_d_squared_fault_injection():
    g = build_ginzburg(qp_c3())
    # corrupt the differential table: drop the minus sign on one commutator
    bad = dict(g.diff)
    t1 = g.diff["t_1"]
    g.diff["t_1"] = t1.scale(Fraction(1)) + (
        arrow_series(g, "a*") * arrow_series(g, "a")).scale(Fraction(2))
    assert not check_d_squared(g)
    g.diff.update(bad)
    assert check_d_squared(g)


def test_h0_equals_jacobian(corpus):
    for name, q in corpus[:8]:
        g = build_ginzburg(q)
        table = truncation_homology(g, range(1, 6), [0])
        dims = jacobian_dims(q, range(1, 6))
        for n in range(1, 6):
            assert table.dims[(0, n)] == dims[n - 1], (name, n)


def test_homology_support_bounds():
    rng = random.Random(23)
    for _ in range(5):
        q = random_qp(rng, trunc=4)
        g = build_ginzburg(q)
        n = 3
        table = truncation_homology(g, [n], range(-2 * n - 1, 2))
        assert table.dims[(1, n)] == 0
        assert table.dims[(-2 * n - 1, n)] == 0


def test_reduction_quasi_isomorphism(corpus):
    # Gamma(q + trivial)/m^n and Gamma(reduced)/m^n have equal homology
    for name, q in corpus[:6]:
        t = trivial_companion(q)
        s = direct_sum(q, t)
        red = split(s).reduced
        t1 = truncation_homology(build_ginzburg(s), range(1, 5), range(-3, 1))
        t2 = truncation_homology(build_ginzburg(red), range(1, 5), range(-3, 1))
        for key, v in t1.dims.items():
            assert t2.dims[key] == v, (name, key)


def test_transport_identity():
    q = qp_c3()
    g = build_ginzburg(q)
    res = transport_ginzburg(Substitution.identity(q.quiver, q.trunc), g, g)
    assert res.ok
    for a in q.quiver.arrows:
        assert res.images[a.name] == arrow_series(g, a.name)


def test_transport_rescaling():
    q = qp_c3()
    g = build_ginzburg(q)
    images = {
        a.name: Series.of_path(Path(q.quiver, (i,)), q.trunc)
        for i, a in enumerate(q.quiver.arrows)
    }
    images["a"] = images["a"].scale(Fraction(3))
    phi = Substitution(q.quiver, q.quiver, images, q.trunc)
    q2 = apply_equiv(phi, q)
    g2 = build_ginzburg(q2)
    res = transport_ginzburg(phi, g, g2)
    assert res.ok
    assert res.images["a*"] == arrow_series(g2, "a*", Fraction(1, 3))


def test_transport_split_witness():
    quiver = GradedQuiver(["1", "2"], [Arrow("a", "1", "2"), Arrow("b", "2", "1")])
    w = Series(quiver, 8, [
        (quiver.path(["a", "b"]), Fraction(1)),
        (quiver.path(["a", "b", "a", "b"]), Fraction(1)),
    ])
    q = QP(quiver, Potential.from_series(w), 8)
    sp = split(q)
    g = build_ginzburg(q)
    g2 = build_ginzburg(sp.transformed)
    res = transport_ginzburg(sp.witness, g, g2)
    assert res.ok


def test_transport_random_equivalences():
    rng = random.Random(51)
    done = 0
    while done < 8:
        q = random_qp(rng, trunc=4)
        phi = random_substitution(rng, q)
        q2 = apply_equiv(phi, q)
        res = transport_ginzburg(phi, build_ginzburg(q), build_ginzburg(q2))
        assert res.ok
        done += 1


def test_transport_rejects_non_equivalence():
    q = qp_c3()
    g = build_ginzburg(q)
    images = {
        a.name: Series.of_path(Path(q.quiver, (i,)), q.trunc)
        for i, a in enumerate(q.quiver.arrows)
    }
    images["a"] = images["a"].scale(Fraction(2))
    phi = Substitution(q.quiver, q.quiver, images, q.trunc)
    with pytest.raises(NotARightEquivalence):
        transport_ginzburg(phi, g, g)  # target potential is W, not 2W
