"""Command-line behaviour and exit codes."""
from __future__ import annotations

import pytest

from eldiff.cli import main

RANGE_CONJ = "(range r A1)\n(range s A2)\n(define-concept B (and A1 A2))\n"
SIG = "concept B\nrole r\nrole s\n"


@pytest.fixture
def files(tmp_path):
    t1 = tmp_path / "t1.krss"
    t2 = tmp_path / "t2.krss"
    sig = tmp_path / "sig.txt"
    t1.write_text(RANGE_CONJ)
    t2.write_text("(define-primitive-role r)\n")
    sig.write_text(SIG)
    return t1, t2, sig


def test_diff_exit_one_and_tsv_content(files, capsys):
    t1, t2, sig = files
    code = main(["diff", str(t1), str(t2), "--sig", str(sig),
                 "--mode", "instance", "--output", "tsv"])
    out = capsys.readouterr().out
    assert code == 1
    assert "rhs\tB" in out


def test_default_subcommand_is_diff(files, capsys):
    t1, t2, sig = files
    code = main([str(t1), str(t2), "--sig", str(sig), "--mode", "instance"])
    assert code == 1
    assert "rhs: B" in capsys.readouterr().out


def test_diff_identical_files_exit_zero(files, capsys):
    t1, _, sig = files
    assert main(["diff", str(t1), str(t1), "--sig", str(sig)]) == 0
    assert "no difference" in capsys.readouterr().out


def test_diff_byte_identical_output(files, tmp_path):
    t1, t2, sig = files
    outs = []
    for k in (1, 2):
        out = tmp_path / f"out{k}.tsv"
        main(["diff", str(t1), str(t2), "--sig", str(sig), "--output", "tsv",
              "--examples", "--out", str(out)])
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]


def test_notwitness_on_cyclic_input_exits_two(tmp_path, capsys):
    t1 = tmp_path / "c.krss"
    t1.write_text("(define-concept A (some r A))\n")
    t2 = tmp_path / "e.krss"
    t2.write_text("(define-primitive-role r)\n")
    sig = tmp_path / "s.txt"
    sig.write_text("concept A\nrole r\n")
    code = main(["diff", str(t1), str(t2), "--sig", str(sig),
                 "--strategy", "notwitness"])
    assert code == 2
    assert "cyclic" in capsys.readouterr().err


def test_parse_error_exits_two(tmp_path, capsys):
    bad = tmp_path / "bad.krss"
    bad.write_text("(define-concept A top)\n")
    ok = tmp_path / "ok.krss"
    ok.write_text("")
    assert main(["diff", str(bad), str(ok)]) == 2
    assert "error" in capsys.readouterr().err


def test_usage_error_exits_two(capsys):
    assert main(["diff", "--mode", "bogus", "x", "y"]) == 2


def test_gen_is_deterministic_and_parses(tmp_path):
    a = tmp_path / "a.krss"
    b = tmp_path / "b.krss"
    for path in (a, b):
        assert main(["gen", "--num-defined", "20", "--num-roles", "3",
                     "--seed", "7", "--out", str(path)]) == 0
    assert a.read_bytes() == b.read_bytes()
    import eldiff as e
    t = e.parse_terminology(a.read_text())
    assert e.is_acyclic(t)


def test_check_subcommand(files, capsys):
    t1, _, _ = files
    assert main(["check", str(t1), "(and (ran r) (ran s))", "B"]) == 0
    assert "entailed" in capsys.readouterr().out
    assert main(["check", str(t1), "(ran r)", "B"]) == 1


def test_oracle_subcommand(files, capsys):
    t1, t2, sig = files
    code = main(["oracle", str(t1), str(t2), "--sig", str(sig),
                 "--mode", "instance", "--depth-cap", "1"])
    out = capsys.readouterr().out
    assert code == 1
    assert "instance\trhs\tB" in out
