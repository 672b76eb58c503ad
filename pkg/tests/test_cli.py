import json

import pytest

from qpcalc.cli import run
from qpcalc.examples import qp_a2, qp_c3
from qpcalc.qpformat import format_qp_text, parse_qp_text


@pytest.fixture
def c3_file(tmp_path):
    p = tmp_path / "c3.qp"
    p.write_text(format_qp_text(qp_c3()))
    return str(p)


@pytest.fixture
def a2_file(tmp_path):
    p = tmp_path / "a2.qp"
    p.write_text(format_qp_text(qp_a2()))
    return str(p)


def test_mutate_prints_qp_text(c3_file, capsys):
    assert run(["mutate", "-i", "1", c3_file]) == 0
    out = capsys.readouterr().out
    assert "arrow a* 2 1" in out
    assert "arrow c* 1 3" in out
    assert "potential" not in out.replace("# cancelled", "")


def test_jacobian_table(c3_file, capsys):
    assert run(["jacobian", "--orders", "1..5", c3_file]) == 0
    out = capsys.readouterr().out
    rows = [l for l in out.splitlines()[1:] if not l.startswith("#")]
    dims = [int(line.split()[1]) for line in rows]
    assert dims == [3, 6, 6, 6, 6]


def test_verify_bimodule_exit_codes(a2_file, capsys):
    assert run(["verify-bimodule", "-i", "2", a2_file]) == 0
    out = capsys.readouterr().out
    assert "all identities verified at order 5" in out


def test_involution(c3_file, capsys):
    assert run(["involution", "-i", "1", c3_file]) == 0
    assert "pass" in capsys.readouterr().out


def test_involution_random(c3_file, capsys):
    assert run(["involution", "-i", "1", "--random", "3", "--seed", "5", c3_file]) == 0
    out = capsys.readouterr().out
    assert out.count("pass") == 4


def test_degree0_exit(c3_file, capsys):
    # C3 is the negative control: inconsistent, exit 1
    assert run(["degree0", "-i", "1", "--orders", "5..5", c3_file]) == 1
    assert "inconsistent" in capsys.readouterr().out


def test_json_output_shapes(c3_file, capsys):
    assert run(["jacobian", "--orders", "1..3", "--json", c3_file]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload == {"orders": [1, 2, 3], "dims": [3, 6, 6],
                       "stabilized_last_3": False}
    assert run(["validate", "--json", c3_file]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["valid"] is True
    assert set(payload["vertices"]) == {"1", "2", "3"}
    assert run(["ginzburg-homology", "--orders", "1..3", "--degrees", "-2..0",
                "--json", c3_file]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["d_squared_zero"] is True
    assert {d["degree"] for d in payload["dims"]} == {-2, -1, 0}


def test_export_json_round_trip(c3_file, tmp_path, capsys):
    out_path = tmp_path / "c3.json"
    assert run(["export", "--format", "json", "-o", str(out_path), c3_file]) == 0
    blob = json.loads(out_path.read_text())
    assert blob["truncation"] == 6
    assert len(blob["arrows"]) == 3
    # JSON is accepted back as input
    assert run(["jacobian", "--orders", "1..2", str(out_path)]) == 0
    rows = [l for l in capsys.readouterr().out.splitlines()[1:]
            if not l.startswith("#")]
    assert [int(line.split()[1]) for line in rows] == [3, 6]


def test_export_dot(c3_file, capsys):
    assert run(["export", "--format", "dot", c3_file]) == 0
    assert capsys.readouterr().out.count("->") == 3
    assert run(["export", "--format", "dot", "--ginzburg", c3_file]) == 0
    assert "(-2)" in capsys.readouterr().out


def test_parse_error_exit_2(tmp_path, capsys):
    bad = tmp_path / "bad.qp"
    bad.write_text("vertices 1 2\narrow a 1 2\npotential 1 a\n")
    assert run(["validate", str(bad)]) == 2
    err = capsys.readouterr().err
    assert "not a cycle" in err


def test_missing_file_exit_2(capsys):
    assert run(["validate", "/nonexistent/x.qp"]) == 2


def test_unknown_vertex_exit_2(c3_file, capsys):
    assert run(["mutate", "-i", "9", c3_file]) == 2


def test_two_cycle_error_reported(tmp_path, capsys):
    text = "vertices 1 2\narrow a 1 2\narrow b 2 1\npotential 1 a.b\n"
    f = tmp_path / "t.qp"
    f.write_text(text)
    assert run(["mutate", "-i", "1", str(f)]) == 2
    assert "two-cycle" in capsys.readouterr().err


def test_truncation_override(c3_file, capsys):
    assert run(["jacobian", "--orders", "1..8", "--truncation", "8", c3_file]) == 0
    out = [l for l in capsys.readouterr().out.splitlines() if not l.startswith("#")]
    assert len(out) == 9


def test_mutate_seq(c3_file, capsys):
    assert run(["mutate-seq", "-i", "1,1", c3_file]) == 0
    out = capsys.readouterr().out
    assert "accuracy 4" in out


def test_jacobian_stabilized_flag(c3_file, capsys):
    assert run(["jacobian", "--orders", "1..5", "--json", c3_file]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["stabilized_last_3"] is True


def test_image_of_simple_json_includes_complex(a2_file, capsys):
    assert run(["image-of-simple", "-i", "2", "-j", "2", "--order", "5",
                "--json", a2_file]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["dims"] == {"-2": 0, "-1": 1, "0": 0}
    assert payload["complex"]["generators"]
    assert all({"target", "source", "terms"} <= set(e)
               for e in payload["complex"]["differential"])


def test_prime_field_pipeline(c3_file, capsys):
    assert run(["jacobian", "--orders", "1..4", "--field", "fp:7",
                "--json", c3_file]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["dims"] == [3, 6, 6, 6]
    assert run(["verify-bimodule", "-i", "1", "--field", "fp:5", c3_file]) == 0


def test_every_verb_emits_valid_json(c3_file, a2_file, capsys):
    # machine-readable mode parses and carries the expected top-level keys
    cases = [
        (["validate", "--json", c3_file], {"valid"}),
        (["mutate", "-i", "1", "--json", c3_file], {"qp", "trivial_pairs"}),
        (["mutate-seq", "-i", "1,1", "--json", c3_file], {"steps", "qp"}),
        (["reduce", "--json", c3_file], {"trivial_pairs", "reduced", "witness"}),
        (["jacobian", "--orders", "1..2", "--json", c3_file], {"orders", "dims"}),
        (["ginzburg-homology", "--orders", "1..2", "--degrees", "-1..0",
          "--json", c3_file], {"dims", "ranks", "d_squared_zero"}),
        (["verify-bimodule", "-i", "2", "--json", a2_file],
         {"passed", "checks", "verified_mod_order"}),
        (["image-of-simple", "-i", "2", "-j", "1", "--order", "4",
          "--json", a2_file], {"dims", "complex"}),
        (["involution", "-i", "1", "--json", c3_file], {"reports"}),
    ]
    for argv, keys in cases:
        assert run(argv) == 0, argv
        payload = json.loads(capsys.readouterr().out)
        assert keys <= set(payload), argv
    assert run(["degree0", "-i", "1", "--orders", "5..5", "--json", c3_file]) == 1
    payload = json.loads(capsys.readouterr().out)
    assert "reports" in payload


def test_mutate_seq_unknown_vertex(c3_file, capsys):
    assert run(["mutate-seq", "-i", "1,9", c3_file]) == 2


def test_image_of_simple_unknown_target(a2_file, capsys):
    assert run(["image-of-simple", "-i", "2", "-j", "9", a2_file]) == 2
