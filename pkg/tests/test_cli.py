import csv
import io
import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cmbsd import cli


def test_verify_pass():
    code, out = cli.run(["verify", "0,0,0,-1,0"])
    assert code == 0
    assert json.loads(out)["verdict"] == "PASS"


def test_verify_garbage():
    assert cli.run(["verify", "garbage"])[0] == 1


def test_verify_over_k():
    code, out = cli.run(["verify", "0,0,0,-1,0@K:-4", "--prec", "96"])
    data = json.loads(out)
    assert code == 0 and data["equivariant"]["ideal_identity_holds"]


def test_verify_non_verdict_exit_zero():
    code, out = cli.run(["verify", "0,0,0,-25,0", "--prec", "64"])
    assert code == 0 and json.loads(out)["verdict"] == "NON-VERDICT"


def test_unrecognized_exit_two():
    # a denominator bound of 1 cannot express L/Omega = i/4
    code, out = cli.run(["verify", "0,0,0,-1,0@K:-4", "--denom-bound", "1", "--prec", "96"])
    assert code == 2 and json.loads(out)["verdict"] == "UNRECOGNIZED"


def test_flag_validation():
    assert cli.run(["verify", "0,0,0,-1,0", "--prec", "32"])[0] == 1
    assert cli.run(["verify", "0,0,0,-1,0", "--denom-bound", "0"])[0] == 1
    assert cli.run(["verify", "0,0,0,-1,0", "--format", "xml"])[0] == 1
    assert cli.run(["frobnicate"])[0] == 1
    assert cli.run([])[0] == 1


def test_sweep_rows_and_range(capsys):
    code, out = cli.run(["sweep", "1", "1", "--format", "csv", "--prec", "64"])
    rows = list(csv.reader(io.StringIO(out)))
    assert code == 0 and rows[0] == ["n", "verdict", "sha", "w", "runtime_ms"]
    assert len(rows) == 2 and rows[1][:4] == ["1", "PASS", "1", "1"]
    assert cli.run(["sweep", "0", "0"])[0] == 1
    assert cli.run(["sweep", "5", "3"])[0] == 1
    assert cli.run(["sweep", "1", "10001"])[0] == 1


def test_sweep_filter():
    code, out = cli.run(["sweep", "1", "50", "--format", "json", "--prec", "64", "--threads", "2"])
    ns = [r["n"] for r in json.loads(out)["rows"]]
    assert ns == [n for n in range(1, 51) if n % 8 in (1, 2, 3) and all(n % (q * q) for q in range(2, 8))]


def test_gross_cli(tmp_path):
    t7 = tmp_path / "t7.csv"
    t7.write_text("0,1.0\n")
    code, out = cli.run(["gross", "7", str(t7)])
    data = json.loads(out)
    assert code == 0 and data["sha"] == 1 and data["curve"] == "0,0,0,-35/16,-49/32"
    t23 = tmp_path / "t23.csv"
    t23.write_text("0,1.0\n1,2.0\n")
    assert cli.run(["gross", "23", str(t23)])[0] == 1
    assert cli.run(["gross", "5", str(t7)])[0] == 1
    assert cli.run(["gross", "7", str(tmp_path / "missing.csv")])[0] == 1


def test_lvalue_and_periods():
    code, out = cli.run(["lvalue", "1,-1,0,-2,-1", "--tail-eps", "1e-30"])
    data = json.loads(out)
    assert code == 0 and data["re"].startswith("0.96665585280840577")
    code, out = cli.run(["periods", "0,0,0,-1,0", "--format", "text"])
    assert code == 0 and "omega_E: 5.24411510858423962" in out
    code, out = cli.run(["periods", "0,0,0,-1,0@K:-4", "--format", "csv"])
    assert code == 0 and "I_omega,1" in out


def test_lvalue_non_cm():
    assert cli.run(["lvalue", "0,0,1,-1,0"])[0] == 1


@pytest.mark.parametrize("args", [
    ["verify", "0,0,0,-1,0"],
    ["verify", "0,0,0,-1,0@K:-4", "--format", "csv"],
    ["periods", "1,-1,0,-2,-1", "--format", "text"],
])
def test_determinism(args):
    assert cli.run(args) == cli.run(args)


def test_sweep_determinism_ignoring_runtime():
    def strip(out):
        return [r[:4] for r in csv.reader(io.StringIO(out))]

    a = cli.run(["sweep", "1", "20", "--format", "csv", "--prec", "64", "--threads", "1"])[1]
    b = cli.run(["sweep", "1", "20", "--format", "csv", "--prec", "64", "--threads", "3"])[1]
    assert strip(a) == strip(b)


junk = st.text(alphabet="0123456789,-/@K:ab .", max_size=30)


@settings(max_examples=60, deadline=None)
@given(junk)
def test_malformed_curves_exit_one(s):
    parts = s.split("@")[0].split(",")
    if len(parts) == 5:
        return  # could be a valid curve
    code, _ = cli.run(["verify", s]) if not s.startswith("-") else cli.run(["verify", "--", s])
    assert code == 1


@settings(max_examples=30, deadline=None)
@given(st.integers(-50, 10**5), st.integers(-50, 10**5))
def test_bad_sweep_ranges_exit_one(a, b):
    if 1 <= a <= b <= 10**4:
        return
    assert cli.run(["sweep", str(a), str(b)])[0] == 1
