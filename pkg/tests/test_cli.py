from rclkit.cli import main


def run(args, capsys):
    code = main(args)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_validate_fixture(fixture_dir, capsys):
    code, out, _ = run(["validate", str(fixture_dir / "fix_a2.rcl")], capsys)
    assert code == 0
    assert "[PASS]" in out


def test_check_recollement_exit0(fixture_dir, capsys):
    code, out, _ = run(["check-recollement", str(fixture_dir / "fix_a2.rcl"),
                        "--format", "structured"], capsys)
    assert code == 0
    assert "check.r3.status = pass" in out
    assert "meta.input-digest = sha256:" in out


def test_quotient_recollement_degenerate_exit1(fixture_dir, capsys):
    code, out, _ = run(["quotient-recollement", str(fixture_dir / "fix_a2.rcl"),
                        "--x", "S1,S2,P1", "--semantics", "strict",
                        "--format", "structured"], capsys)
    assert code == 1
    assert "check.r3.status = fail" in out
    assert "S1" in out
    assert "check.predicate.x-in-ker-j_up.witness = false" in out


def test_quotient_recollement_s2_exit0(fixture_dir, capsys):
    code, out, _ = run(["quotient-recollement", str(fixture_dir / "fix_a2.rcl"),
                        "--x", "S2"], capsys)
    assert code == 0


def test_quotient_command(fixture_dir, capsys):
    code, out, _ = run(["quotient", str(fixture_dir / "fix_a2.rcl"),
                        "--x", "S2", "--format", "structured"], capsys)
    assert code == 0
    assert "result.survivors = S1,P1" in out


def test_restrict_command(fixture_dir, capsys):
    code, _, _ = run(["restrict", str(fixture_dir / "fix_a2.rcl"), "--x", "S2"],
                     capsys)
    assert code == 0
    code, out, _ = run(["restrict", str(fixture_dir / "fix_a2.rcl"), "--x", "P1",
                        "--format", "structured"], capsys)
    assert code == 1
    assert "precondition" in out


def test_lift_command(fixture_dir, capsys):
    code, out, _ = run(["lift", str(fixture_dir / "fix_a2.rcl"),
                        "--xp", "V", "--xpp", "ModKR:",
                        "--format", "structured"], capsys)
    assert code == 0
    assert "result.lifted-subcategory = S2" in out


def test_left_quotient_command(fixture_dir, capsys):
    code, _, _ = run(["left-quotient", str(fixture_dir / "fix_a2.rcl"),
                      "--xp", "V"], capsys)
    assert code == 0
    code, _, _ = run(["left-quotient", str(fixture_dir / "fix_a2.rcl"),
                      "--xp", "ModKL:"], capsys)
    assert code == 0


def test_induce_command(fixture_dir, capsys):
    code, _, _ = run(["induce", str(fixture_dir / "fix_a2.rcl"),
                      "--name", "ju", "--x", "S2", "--xp", "ModKR:"], capsys)
    assert code == 0
    code, _, _ = run(["induce", str(fixture_dir / "fix_a2.rcl"),
                      "--name", "adj_i", "--x", "S2", "--xp", "V"], capsys)
    assert code == 0


def test_mutation_check_command(fixture_dir, capsys):
    code, _, _ = run(["mutation-check", str(fixture_dir / "fix_stab3.rcl")], capsys)
    assert code == 0


def test_triangulate_quotient_command(fixture_dir, capsys):
    code, out, _ = run(["triangulate-quotient", str(fixture_dir / "fix_stab3.rcl"),
                        "--format", "structured"], capsys)
    assert code == 0
    assert "check.triangulation.tr2.status = not-checked" in out
    assert "result.unchecked" in out


def test_parse_error_exit2(tmp_path, capsys):
    bad = tmp_path / "bad.rcl"
    bad.write_text("rclkit workspace 1\nfunctor f { source X target Y }\n")
    code, _, err = run(["validate", str(bad)], capsys)
    assert code == 2
    assert "unknown category" in err


def test_missing_file_exit2(capsys):
    code, _, err = run(["validate", "/nonexistent/file.rcl"], capsys)
    assert code == 2


def test_missing_required_flag_exit2(fixture_dir, capsys):
    code, _, err = run(["restrict", str(fixture_dir / "fix_a2.rcl")], capsys)
    assert code == 2
    assert "requires --x" in err


def test_ambiguous_generators_exit2(fixture_dir, capsys):
    code, _, err = run(["quotient", str(fixture_dir / "fix_prod.rcl"),
                        "--x", "M2"], capsys)
    assert code == 2
    assert "no category contains" in err or "ambiguous" in err


def test_certificate_out_file(fixture_dir, tmp_path, capsys):
    out1 = tmp_path / "c1.cert"
    out2 = tmp_path / "c2.cert"
    for out in (out1, out2):
        code, _, _ = run(["check-recollement", str(fixture_dir / "fix_a2.rcl"),
                          "--out", str(out)], capsys)
        assert code == 0
    assert out1.read_bytes() == out2.read_bytes()
    text = out1.read_text()
    assert text == "".join(sorted(text.splitlines(keepends=True), key=lambda l: l))


def test_exit_code_matches_certificate(fixture_dir, tmp_path, capsys):
    out = tmp_path / "c.cert"
    code, _, _ = run(["quotient-recollement", str(fixture_dir / "fix_a2.rcl"),
                      "--x", "S1,S2,P1", "--out", str(out)], capsys)
    assert code == 1
    assert "result.verdict = fail" in out.read_text()
