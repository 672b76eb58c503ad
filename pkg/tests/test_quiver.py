import pytest

from qpcalc.errors import NotACycle, NotComposable
from qpcalc.examples import qp_c3
from qpcalc.quiver import Arrow, GradedQuiver, Path, compose_paths, cyclic_normalize


@pytest.fixture
def c3():
    return qp_c3().quiver


def test_lazy_path_is_unit(c3):
    b = c3.path(["b"])  # 2 -> 3
    assert compose_paths(c3.lazy("3"), b) == b
    assert compose_paths(b, c3.lazy("2")) == b


def test_compose_directions(c3):
    a = c3.path(["a"])  # 1 -> 2
    b = c3.path(["b"])  # 2 -> 3
    ba = compose_paths(b, a)
    assert ba.word == c3.path(["b", "a"]).word
    assert ba.source == "1" and ba.target == "3" and ba.length == 2
    with pytest.raises(NotComposable):
        compose_paths(a, b)  # s(a)=1 != t(b)=3


def test_compose_associative_and_additive(c3):
    a, b, cc = c3.path(["a"]), c3.path(["b"]), c3.path(["c"])
    left = (cc * b) * a
    right = cc * (b * a)
    assert left == right
    assert left.length == 3
    assert left.degree == 0


def test_degree_additivity():
    quiver = GradedQuiver(
        ["1", "2"], [Arrow("x", "1", "2", -1), Arrow("y", "2", "1", -2)])
    p = quiver.path(["x", "y"])
    assert p.degree == -3
    assert p.length == 2


def test_cyclic_normalize_examples(c3):
    cba = c3.path(["c", "b", "a"])
    norm, rot = cyclic_normalize(cba)
    assert [x.name for x in norm.letters()] == ["a", "c", "b"]
    assert rot == 2
    # idempotence
    again, rot2 = cyclic_normalize(norm)
    assert again == norm and rot2 == 0
    # rotation index reconstructs the witness
    assert cba.rotate(rot) == norm


def test_cyclic_normalize_loop_word():
    quiver = GradedQuiver(["1"], [Arrow("a", "1", "1")])
    aa = quiver.path(["a", "a"])
    norm, rot = cyclic_normalize(aa)
    assert norm == aa and rot == 0


def test_cyclic_normalize_rejects_noncycle(c3):
    with pytest.raises(NotACycle):
        cyclic_normalize(c3.path(["a"]))


def test_quiver_validation():
    with pytest.raises(ValueError):
        GradedQuiver(["1", "1"], [])
    with pytest.raises(ValueError):
        GradedQuiver(["1"], [Arrow("a", "1", "2")])
    with pytest.raises(ValueError):
        GradedQuiver(["1"], [Arrow("a", "1", "1"), Arrow("a", "1", "1")])


def test_word_composability_checked():
    quiver = qp_c3().quiver
    with pytest.raises(NotComposable):
        Path(quiver, (0, 1))  # a then b is not composable in this order
