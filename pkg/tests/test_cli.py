import subprocess
import sys

import pytest

from dpx.cli import CAVEAT, corpus_path, main
from dpx.document import format_document, load_document, parse_document
from dpx.errors import ParseError

CORPUS = (
    "tensor", "skewsym", "om2", "dim3_family", "nonit_family",
    "nonit_lambda2", "t_family", "t1", "bh_family",
)

# command sets each corpus file is expected to pass
PASSING = {
    "t1": ["check", "detect", "normalize"],
    "tensor": ["check", "detect", "normalize"],
    "skewsym": ["check", "detect", "normalize"],
    "om2": ["check", "detect", "normalize"],
    "nonit_lambda2": ["detect", "nf --word y2*y1*x", "confluence --max-len 4"],
    "t_family": ["limit", "crosscheck", "bridge", "deform --lambda 3", "confluence"],
    "dim3_family": ["limit", "crosscheck", "bridge", "deform --lambda 2", "confluence"],
    "nonit_family": ["bridge", "deform --lambda 2"],
    "bh_family": ["bridge", "deform --lambda 2"],
}

# honest mathematical failures (exit 1), see the notes in the README
FAILING = {
    "nonit_lambda2": ["check"],
    "nonit_family": ["limit", "crosscheck", "confluence"],
    "bh_family": ["limit", "crosscheck", "confluence"],
}


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_check_t1(capsys):
    code, out, _ = run(capsys, "check", "t1")
    assert code == 0
    assert "13/13 conditions hold" in out


def test_detect_nonit(capsys):
    code, out, _ = run(capsys, "detect", "nonit_lambda2")
    assert code == 0
    assert out.splitlines() == ["criterion fails: α12(x)=x, α21(x)=x", CAVEAT]


def test_detect_tensor(capsys):
    code, out, _ = run(capsys, "detect", "tensor")
    assert code == 0
    assert out.startswith("form 1:")
    assert "beta2(y1) = 3*x + 2*y1" in out
    assert "nu2(y1) = x^2 + x*y1 + y1^2 + 1" in out


def test_interp(capsys):
    code, out, _ = run(capsys, "interp", "--points", "1:0,2:5")
    assert code == 0 and out.strip() == "5*t - 5"
    code, _, err = run(capsys, "interp", "--points", "1:0,1:5")
    assert code == 2 and "error" in err


def test_report_mode(capsys):
    code, out, _ = run(capsys, "check", "t1", "--report")
    pairs = dict(line.split(": ", 1) for line in out.splitlines())
    assert pairs["command"] == "check"
    assert pairs["conditions_holding"] == "13"
    assert pairs["jacobi"] == "pass"
    assert pairs["status"] == "pass"


def test_nf_and_deform(capsys):
    code, out, _ = run(capsys, "nf", "t_family", "--word", "y*x")
    assert code == 0 and out.strip() == "(1/t)*x*y + ((t^2 - 1)/t)*z"
    code, out, _ = run(capsys, "deform", "t_family", "--lambda", "3")
    assert code == 0
    assert "p12 = 1/3" in out and "tau = 0, 0, 8/3*z" in out


def test_deform_rejects_excluded_points(capsys):
    for lam in ("1", "0", "7"):
        code, _, err = run(capsys, "deform", "t_family", "--lambda", lam)
        assert code == 2 and "error" in err


def test_missing_section_and_file(capsys):
    code, _, err = run(capsys, "limit", "t1")
    assert code == 2 and "family" in err
    code, _, err = run(capsys, "check", "no_such_file")
    assert code == 2


def test_parse_error_position(tmp_path, capsys):
    p = tmp_path / "bad.dpx"
    p.write_text("[ring]\ngenerators = z\nvariables = x, y\n\n[dedata]\nq = 0, 1\nw = 0, 0, 2*w\n")
    code, _, err = run(capsys, "check", str(p))
    assert code == 2
    assert "line 7, column 13" in err and "unknown identifier" in err


def test_corpus_command_sets(capsys):
    for name, commands in PASSING.items():
        for cmd in commands:
            verb, *rest = cmd.split()
            code, out, err = run(capsys, verb, name, *rest)
            assert code == 0, (name, cmd, out, err)
    for name, commands in FAILING.items():
        for cmd in commands:
            verb, *rest = cmd.split()
            code, out, err = run(capsys, verb, name, *rest)
            assert code == 1, (name, cmd, out, err)


def test_limit_output_reparses(capsys):
    code, out, _ = run(capsys, "limit", "t_family")
    doc = parse_document(out)
    assert doc.dedata == load_document(corpus_path("t1")).dedata


def test_console_script():
    proc = subprocess.run(
        [sys.executable, "-m", "dpx.cli", "check", "t1"], capture_output=True, text=True
    )
    assert proc.returncode == 0 and "13/13" in proc.stdout


# -- documents -----------------------------------------------------------------


@pytest.mark.parametrize("name", CORPUS)
def test_document_round_trip(name):
    doc = load_document(corpus_path(name))
    text = format_document(doc)
    again = parse_document(text)
    assert again == doc
    assert format_document(again) == text


def test_document_errors():
    cases = [
        ("[dedata]\nq = 0, 0\n", "ring"),
        ("[ring]\ngenerators = x\n[ring]\ngenerators = y\n", "ring"),
        ("[ring]\ngenerators = x\nvariables = y1, y2\n[bracket]\nx, y -> 1\n", "y"),
        ("[ring]\ngenerators = x\nvariables = y1, y2\n[dedata]\nq = 0\n", "2"),
        ("[ring]\ngenerators = x\nvariables = y1, y2\n[family]\nlambdas = 1\n", "1"),
        ("[ring]\ngenerators = x\n[oops]\n", "oops"),
    ]
    for text, fragment in cases:
        with pytest.raises(ParseError) as info:
            parse_document(text)
        assert info.value.line is not None, text
        assert fragment in str(info.value), (text, str(info.value))
