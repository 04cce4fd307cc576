# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at https://mozilla.org/MPL/2.0/.

import json

import pytest
from typer.testing import CliRunner

from auskit.cli import app, handle_errors
from auskit.errors import VerificationError

runner = CliRunner()
WIDE = {"COLUMNS": "200", "AUSKIT_CAPS": ""}


def invoke(*args: str):
    return runner.invoke(app, list(args), env=WIDE)


def test_check_algebra_prints_the_presentation():
    result = invoke("--format", "dot", "check-algebra", "--algebra", "loop-b.alg")
    assert result.exit_code == 0
    assert result.output.splitlines() == [
        "field 2",
        "vertices a b",
        "arrow alpha a a",
        "arrow beta b a",
        "relation alpha*alpha",
    ]


def test_check_algebra_reads_files(tmp_path):
    path = tmp_path / "a2.alg"
    path.write_text("field 3\nvertices a b\narrow u b a\nmodule M = P(b)\n", "utf-8")
    result = invoke("check-algebra", "-a", str(path))
    assert result.exit_code == 0
    assert "F_3" in result.output
    assert "Named modules" in result.output


def test_hom_as_json():
    result = invoke("-f", "json", "hom", "-a", "kron2.alg", "-C", "kP(1)", "-Y", "kP(2)")
    assert result.exit_code == 0
    data = json.loads(result.output)
    assert data["hom_dim"] == 2
    assert data["gamma_dim"] == 1
    assert data["length"] == 2
    assert data["through_projective_length"] == 2


def test_lattice_outputs(tmp_path):
    json_file = tmp_path / "lattice.json"
    dot_file = tmp_path / "lattice.dot"
    result = invoke(
        "lattice", "-a", "kron2.alg", "-C", "kP(1)", "-Y", "kP(2)",
        "--json", str(json_file), "--dot", str(dot_file),
    )  # fmt: skip
    assert result.exit_code == 0
    assert "G(2) over F_2" in result.output
    assert len(json.loads(json_file.read_text("utf-8"))["nodes"]) == 5
    assert dot_file.read_text("utf-8").startswith("digraph")
    out = tmp_path / "out.dot"
    result = invoke(
        "-f", "dot", "lattice", "-a", "kron2.alg", "-C", "kP(1)", "-Y", "kP(2)", "-o", str(out)
    )  # fmt: skip
    assert result.exit_code == 0
    assert "rankdir=BT" in out.read_text("utf-8")


def test_verify_passes():
    result = invoke(
        "-f", "json", "verify", "-a", "a3-linear.alg", "-C", "Q(b) ++ S(c)", "-Y", "S(c)"
    )  # fmt: skip
    assert result.exit_code == 0
    checks = json.loads(result.output)
    assert checks
    assert all(c["passed"] for c in checks)


def test_determiner():
    result = invoke("determiner", "-a", "kron2.alg", "--f", "projcover(S(b))", "-C", "kP(2)")
    assert result.exit_code == 0
    assert "tau_of_intrinsic_kernel" in result.output
    assert "yes" in result.output


def test_kronecker_commands():
    result = invoke("kronecker", "strongreg", "--len", "2")
    assert result.exit_code == 0
    assert "R[inf](1)" in result.output
    assert invoke("kronecker", "table", "--max", "1").exit_code == 0
    assert invoke("kronecker", "sigma", "--i", "0", "--j", "1").exit_code == 0


def test_examples_commands():
    result = invoke("examples", "list")
    assert result.exit_code == 0
    assert "kron2-projective-line" in result.output
    assert invoke("examples", "run", "a2", "a3-linear").exit_code == 0
    assert invoke("examples", "run", "no-such-example").exit_code == 2


@pytest.mark.parametrize(
    ("args", "code"),
    [
        (["hom", "-a", "kron2.alg", "-C", "P(c)", "-Y", "P(a)"], 2),
        (["hom", "-a", "kron2.alg", "-C", "P(a", "-Y", "P(a)"], 2),
        (["hom", "-C", "P(a)", "-Y", "P(a)"], 2),
        (["check-algebra", "-a", "no-such-file.alg"], 2),
        (["--max-dim", "1", "lattice", "-a", "kron2.alg", "-C", "kP(1)", "-Y", "kP(2)"], 3),
    ],
)
def test_exit_codes(args, code):
    result = invoke(*args)
    assert result.exit_code == code


def test_bad_caps_environment():
    result = runner.invoke(app, ["examples", "run", "a2"], env={"AUSKIT_CAPS": "bogus=1"})
    assert result.exit_code == 2


def test_verification_errors_exit_with_four():
    @handle_errors
    def failing() -> None:
        msg = "certificate failed"
        raise VerificationError(msg, [1, 2])

    with pytest.raises(SystemExit) as e:
        failing()
    assert e.value.code == 4
