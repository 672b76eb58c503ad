import json

from qpcalc.examples import qp_a2, qp_c3, qp_k2, qp_triv
from qpcalc.fields import PrimeField
from qpcalc.qpformat import (
    format_qp_text,
    parse_qp_text,
    qp_from_json_dict,
    qp_to_dot,
    qp_to_json_dict,
    quiver_to_dot,
)

C3_TEXT = """
# the 3-cycle
vertices 1 2 3
arrow a 1 2
arrow b 2 3
arrow c 3 1
truncation 6
potential 1 c.b.a
"""


def test_parse_wellformed():
    q, diags = parse_qp_text(C3_TEXT)
    assert not diags
    assert q == qp_c3()


def test_parse_noncyclic_term():
    text = "vertices 1 2\narrow a 1 2\npotential 1 a\n"
    q, diags = parse_qp_text(text)
    assert q is None
    assert any("not a cycle" in d.message for d in diags)


def test_parse_noncomposable_word():
    text = "vertices 1 2 3\narrow a 1 2\narrow b 2 3\npotential 1 a.b\n"
    q, diags = parse_qp_text(text)
    assert q is None
    assert any("not composable" in d.message for d in diags)
    d = next(d for d in diags if "not composable" in d.message)
    assert d.line == 4 and d.col > 0


def test_parse_unknown_arrow():
    text = "vertices 1\npotential 1 zz\n"
    q, diags = parse_qp_text(text)
    assert q is None
    assert any("unknown arrow" in d.message for d in diags)


def test_parse_bad_coefficient():
    text = "vertices 1\narrow l 1 1\npotential x l.l\n"
    q, diags = parse_qp_text(text)
    assert q is None
    assert any("bad coefficient" in d.message for d in diags)


def test_parse_never_raises_on_garbage():
    q, diags = parse_qp_text("!!! not a qp\nvertices\n")
    assert q is None and diags


def test_default_truncation():
    q, diags = parse_qp_text("vertices 1 2\narrow a 1 2\n")
    assert not diags and q.trunc == 6


def test_fraction_coefficients():
    text = "vertices 1\narrow l 1 1\npotential -1/2 l.l\n"
    q, diags = parse_qp_text(text)
    assert not diags
    (coeff,) = q.potential.coeffs_by_class().values()
    assert coeff == -0.5 or str(coeff) == "-1/2"


def test_prime_field_parse():
    f5 = PrimeField(5)
    text = "vertices 1\narrow l 1 1\npotential 7 l.l\n"
    q, diags = parse_qp_text(text, field=f5)
    assert not diags
    (coeff,) = q.potential.coeffs_by_class().values()
    assert coeff.val == 2


def test_text_round_trip(corpus):
    for name, q in corpus:
        q2, diags = parse_qp_text(format_qp_text(q))
        assert not diags, name
        assert q2 == q, name


def test_json_round_trip(corpus):
    for name, q in corpus:
        blob = json.dumps(qp_to_json_dict(q))
        q2 = qp_from_json_dict(json.loads(blob))
        assert q2 == q, name


def test_dot_exports():
    dot = qp_to_dot(qp_c3())
    assert dot.count("->") == 3
    assert '"1"' in dot
    from qpcalc.ginzburg import build_ginzburg
    gdot = quiver_to_dot(build_ginzburg(qp_c3()).quiver, "G")
    assert "(-1)" in gdot and "(-2)" in gdot
