import pytest

from oracles import degree0_dims_dense
from qpcalc.errors import LoopAtVertex
from qpcalc.examples import qp_a2, qp_c3, qp_k2
from qpcalc.ginzburg import degree0_criterion
from qpcalc.qp import QP, Potential
from qpcalc.quiver import Arrow, GradedQuiver


def test_k2_consistent_both_vertices():
    for n in (5, 6):
        for v in ("1", "2"):
            rep = degree0_criterion(qp_k2(), v, n)
            assert rep.consistent, (v, n, rep.dims)
            assert rep.f_injective


def test_c3_negative_control():
    for n in (5, 6):
        rep = degree0_criterion(qp_c3(), "1", n)
        assert not rep.consistent
        # the failure is the kernel class of f at the arrow into vertex 1
        assert rep.dims[-3] == 1


def test_one_arrow_source_injectivity():
    quiver = GradedQuiver(["1", "2"], [Arrow("a", "1", "2")])
    q = QP(quiver, Potential(quiver, 6), 6)
    rep = degree0_criterion(q, "1", 5)
    assert rep.f_injective
    assert rep.dims[0] == 1


def test_loop_rejected():
    quiver = GradedQuiver(["1"], [Arrow("l", "1", "1")])
    q = QP(quiver, Potential(quiver, 6), 6)
    with pytest.raises(LoopAtVertex):
        degree0_criterion(q, "1", 4)


def test_against_dense_oracle():
    cases = [(qp_k2(), "1"), (qp_k2(), "2"), (qp_c3(), "1"),
             (qp_c3(), "2"), (qp_a2(), "2")]
    for q, v in cases:
        for n in (4, 5):
            engine = degree0_criterion(q, v, n).dims
            oracle = degree0_dims_dense(q, v, n)
            assert engine == oracle, (v, n, engine, oracle)
