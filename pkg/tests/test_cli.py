import subprocess
import sys

import pytest

from qthclosure.cli import run
from qthclosure.poly import parse_poly
from qthclosure.problem import ProblemError, load_problem, parse_problem

from conftest import FIXTURES


def fx(name):
    return str(FIXTURES / name)


def generator_block(text, header="closure:"):
    lines = text.splitlines()
    i = lines.index(header)
    out = []
    for line in lines[i + 1:]:
        if not line.startswith("  "):
            break
        out.append(line.strip())
    return out


def test_load_mono3():
    prob = load_problem(fx("mono3.prob"))
    assert prob.presentation.Y == [()] or len(prob.presentation.Y) == 1
    assert len(prob.generators) == 3


def test_load_cover():
    prob = load_problem(fx("double_cover.prob"))
    pr = prob.presentation
    assert pr.d == 2 and len(pr.Y) == 2


def test_closure_mono3():
    text, code = run(["closure", fx("mono3.prob"), "--e", "1"])
    assert code == 0
    gens = generator_block(text)
    assert "a^3*b^3*c^3" in gens and len(gens) == 13
    assert "round 2" in text and "stabilized: yes" in text
    # the cube appears in round 2, not round 1
    r1 = text.split("round 2")[0]
    assert "a^3*b^3*c^3" not in r1


def test_member_unitrel():
    text, code = run(["member", fx("unit_relation.prob"), "--poly", "x^3*y^2*z", "--k", "3"])
    assert code == 0
    lines = text.splitlines()
    assert lines[0] == "true"
    assert lines[1] == "largest k: 3"
    assert lines[2] == "witness: G_4_3*G_3_0*G_4_2"


def test_nf_of_zero():
    text, code = run(["nf", fx("double_cover.prob"), "--poly", "0"])
    assert (text, code) == ("0", 0)


def test_nf_cover():
    text, code = run(["nf", fx("double_cover.prob"), "--poly", "y^2"])
    assert code == 0 and text == "x20^9 + y*x31^3"


def test_gb_and_reduced():
    text, code = run(["gb", fx("units_warning.prob"), "--reduced"])
    assert code == 0 and text.splitlines() == ["kind: local", "1"]


def test_powers_and_rees():
    text, code = run(["powers", fx("double_cover.prob"), "--kmax", "2"])
    assert code == 0 and "C(I^2):" in text
    text, code = run(["rees", fx("double_cover.prob"), "--kmax", "1", "--suppress-t"])
    assert code == 0 and "relations level 1" in text and "*s" not in text
    text, _ = run(["rees", fx("double_cover.prob"), "--kmax", "1"])
    assert "y + G_9_0*s" in text


def test_oracle_and_certify():
    text, code = run(["oracle", fx("mono3.prob")])
    assert code == 0 and len(generator_block(text)) == 13
    text, code = run(["certify", fx("mono3.prob"), "--poly", "a^3*b^3*c^3", "--kmax", "3"])
    assert code == 0
    assert "degree: 3" in text and "a_3 = a^9*b^9*c^9" in text and "replay: ok" in text
    text, code = run(["oracle", fx("double_cover.prob")])
    assert code == 3


def test_round_trip_of_lists():
    prob = load_problem(fx("mono3.prob"))
    text, _ = run(["closure", fx("mono3.prob"), "--e", "1"])
    for g in generator_block(text):
        f = parse_poly(g, prob.ring)
        assert parse_poly(str(f), prob.ring) == f


def test_deterministic():
    args = ["rees", fx("double_cover.prob"), "--kmax", "2"]
    assert run(args) == run(args)
    cmd = [sys.executable, "-m", "qthclosure.cli", "closure", fx("cycle4.prob"), "--e", "1"]
    a = subprocess.run(cmd, capture_output=True).stdout
    b = subprocess.run(cmd, capture_output=True).stdout
    assert a == b and a


GOOD = """field 2
vars x y
order global
ideal
x^2
y^2
end
"""

MALFORMED = {
    "missing_end": GOOD.replace("end\n", ""),
    "no_ideal": "field 2\nvars x\norder global\nideal\nend\n",
    "bad_field": GOOD.replace("field 2", "field two"),
    "composite_field": GOOD.replace("field 2", "field 4"),
    "bad_order": GOOD.replace("global", "sideways"),
    "unknown_variable": GOOD.replace("y^2", "z^2"),
    "syntax": GOOD.replace("y^2", "y^^2"),
    "out_of_order": "vars x y\nfield 2\norder global\nideal\nx\nend\n",
    "repeated": GOOD.replace("order global", "order global\norder local"),
    "weight_width": GOOD.replace("order global", "order global\nweights\n1 2 3"),
    "stray_line": GOOD.replace("order global", "order global\nhello"),
    "bad_qexp": GOOD.replace("end", "qexp 0\nend"),
}


@pytest.mark.parametrize("name", sorted(MALFORMED))
def test_malformed_exit_1(tmp_path, name):
    p = tmp_path / f"{name}.prob"
    p.write_text(MALFORMED[name])
    text, code = run(["gb", str(p)])
    assert code == 1, text
    assert text.startswith("error:")


def test_error_has_position(tmp_path):
    p = tmp_path / "bad.prob"
    p.write_text(MALFORMED["unknown_variable"])
    text, code = run(["gb", str(p)])
    assert code == 1 and f"{p}:6:" in text
    with pytest.raises(ProblemError) as exc:
        parse_problem(MALFORMED["unknown_variable"], "inline")
    assert exc.value.line == 6


def test_missing_file_and_bad_usage():
    assert run(["gb", "/nonexistent.prob"])[1] == 1
    assert run(["frobnicate", fx("mono3.prob")])[1] == 1
    assert run(["member", fx("mono3.prob"), "--poly", "a"])[1] == 1


def test_resource_cap(monkeypatch):
    from qthclosure import gb
    monkeypatch.setattr(gb.LIMITS, "max_reductions", 1)
    text, code = run(["gb", fx("double_cover.prob")])
    assert code == 2 and text.startswith("resource limit:")
    monkeypatch.setattr(gb.LIMITS, "max_reductions", 5_000_000)
    monkeypatch.setattr(gb.LIMITS, "max_products", 10)
    text, code = run(["certify", fx("mono3.prob"), "--poly", "a^3*b^3*c^3", "--kmax", "3"])
    assert code == 2


def test_warning_fixture_loads():
    text, code = run(["gb", fx("units_warning.prob")])
    assert code == 0
