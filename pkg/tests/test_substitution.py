import random
from fractions import Fraction

import pytest

from qpcalc.errors import SingularLinearPart
from qpcalc.examples import qp_c3, random_qp, random_substitution
from qpcalc.mutation import premutate
from qpcalc.quiver import Arrow, GradedQuiver, Path
from qpcalc.series import Series
from qpcalc.substitution import (
    Substitution,
    compose_substitutions,
    invert_substitution,
    substitute,
)


def test_identity_substitution():
    q = qp_c3()
    phi = Substitution.identity(q.quiver, q.trunc)
    w = q.w_series()
    assert substitute(phi, w) == w
    assert phi.is_identity()


def test_spec_example_on_premutated_c3():
    # b |-> b - c*a* applied to [ac]b gives [ac]b - [ac]c*a*
    pre = premutate(qp_c3(), "1").result
    quiver = pre.quiver
    n = pre.trunc
    images = {
        a.name: Series.of_path(Path(quiver, (i,)), n)
        for i, a in enumerate(quiver.arrows)
    }
    images["b"] = images["b"] - Series.of_path(quiver.path(["c*", "a*"]), n)
    phi = Substitution(quiver, quiver, images, n)
    s = Series.of_path(quiver.path(["[a.c]", "b"]), n)
    got = substitute(phi, s)
    expected = s - Series.of_path(quiver.path(["[a.c]", "c*", "a*"]), n)
    assert got == expected


def test_scalar_homogeneity():
    quiver = GradedQuiver(["1"], [Arrow("a", "1", "1")])
    images = {"a": Series.of_path(quiver.path(["a"]), 5, Fraction(2))}
    phi = Substitution(quiver, quiver, images, 5)
    aa = Series.of_path(quiver.path(["a", "a"]), 5)
    assert substitute(phi, aa) == aa.scale(Fraction(4))


def test_invert_identity_and_scaling():
    q = qp_c3()
    phi = Substitution.identity(q.quiver, q.trunc)
    assert invert_substitution(phi).is_identity()
    quiver = GradedQuiver(["1"], [Arrow("a", "1", "1")])
    phi2 = Substitution(
        quiver, quiver, {"a": Series.of_path(quiver.path(["a"]), 5, Fraction(2))}, 5)
    psi = invert_substitution(phi2)
    assert psi.images["a"] == Series.of_path(quiver.path(["a"]), 5, Fraction(1, 2))


def test_invert_unitriangular_loops():
    # b |-> b + bab on two loops; inverse is b - bab + b(ab)^2 - ... truncated
    quiver = GradedQuiver(["1"], [Arrow("a", "1", "1"), Arrow("b", "1", "1")])
    n = 5
    images = {
        "a": Series.of_path(quiver.path(["a"]), n),
        "b": Series.of_path(quiver.path(["b"]), n)
        + Series.of_path(quiver.path(["b", "a", "b"]), n),
    }
    phi = Substitution(quiver, quiver, images, n)
    psi = invert_substitution(phi)
    expected = (
        Series.of_path(quiver.path(["b"]), n)
        - Series.of_path(quiver.path(["b", "a", "b"]), n)
        + Series.of_path(quiver.path(["b", "a", "b", "a", "b"]), n, Fraction(2))
    )
    assert psi.images["b"] == expected
    comp = compose_substitutions(psi, phi)
    assert comp.is_identity()


def test_singular_linear_part_rejected():
    quiver = GradedQuiver(["1", "2"],
                          [Arrow("x", "1", "2"), Arrow("y", "1", "2")])
    n = 4
    x = Series.of_path(quiver.path(["x"]), n)
    images = {"x": x, "y": x}  # both map to x: singular block
    with pytest.raises(SingularLinearPart):
        Substitution(quiver, quiver, images, n)


def test_inversion_round_trip_random():
    # substitute(psi, substitute(phi, S)) == S for 200 seeded cases, N <= 6
    rng = random.Random(2024)
    cases = 0
    while cases < 200:
        q = random_qp(rng, trunc=rng.randint(3, 6))
        phi = random_substitution(rng, q)
        psi = invert_substitution(phi)
        w = q.w_series()
        got = substitute(psi, substitute(phi, w))
        assert got == w
        cases += 1


def test_substitution_multiplicative_random():
    rng = random.Random(99)
    from qpcalc.qp import _paths_up_to
    for _ in range(50):
        q = random_qp(rng, trunc=5)
        phi = random_substitution(rng, q)
        paths = _paths_up_to(q.quiver, 3)
        terms = rng.sample(paths, min(len(paths), 3))
        a = Series(q.quiver, 5, [(p, Fraction(rng.randint(-2, 2))) for p in terms])
        b = Series(q.quiver, 5, [(p, Fraction(rng.randint(-2, 2))) for p in terms])
        assert substitute(phi, a * b) == substitute(phi, a) * substitute(phi, b)


def test_truncation_coherence_substitution():
    rng = random.Random(31)
    for _ in range(30):
        q = random_qp(rng, trunc=6)
        phi = random_substitution(rng, q)
        w = q.w_series()
        m = rng.randint(2, 5)
        phi_m = Substitution(
            q.quiver, q.quiver,
            {k: v.truncate(m) for k, v in phi.images.items()}, m, q.field)
        assert substitute(phi, w).truncate(m) == substitute(phi_m, w.truncate(m))
