"""Command line interface: exit codes, file outputs, determinism."""

import pytest

from qsteiner import cli
from qsteiner.fixtures import FIXTURE_SHA256


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_bounds_prints_counts(capsys):
    code, out, _ = run(capsys, "bounds", "--n", "13", "--k", "3", "--t", "2")
    assert code == 0
    assert "[13 3]_2 = 3269560515" in out
    assert "packing bound for t=2: 1597245" in out
    assert "no spreads: 3 does not divide 13" in out


def test_bounds_reports_non_integral_bound(capsys):
    code, out, _ = run(capsys, "bounds", "--n", "5", "--k", "3", "--t", "2")
    assert code == 0
    assert "155/7 is not an integer" in out


def test_config_file_supplies_defaults_and_flags_override(tmp_path, capsys):
    conf = tmp_path / "conf.txt"
    conf.write_text("n = 5\nk = 3\nt = 2\n")
    code, out, _ = run(capsys, "--config", str(conf), "bounds")
    assert code == 0 and "[5 3]_2 = 155" in out
    code, out, _ = run(capsys, "--config", str(conf), "bounds", "--k", "2")
    assert code == 0 and "[5 2]_2 = 155" in out


def test_malformed_config_is_a_usage_error(tmp_path, capsys):
    conf = tmp_path / "conf.txt"
    conf.write_text("just words\n")
    code, _, err = run(capsys, "--config", str(conf), "bounds", "--n", "4", "--k", "2")
    assert code == 2
    assert "expected key = value" in err


def test_spread_demo_counts_56(capsys):
    code, out, _ = run(capsys, "spread-demo")
    assert code == 0
    assert "56 spreads" in out
    assert "first spread verification: pass" in out


def test_group_command_writes_file(tmp_path, capsys):
    code, out, _ = run(
        capsys, "--out-dir", str(tmp_path), "group", "--singer-normalizer", "5"
    )
    assert code == 0 and "group order 155" in out
    text = (tmp_path / "group.txt").read_text()
    assert "order 155" in text


def test_full_pipeline_on_trivial_group(tmp_path, capsys):
    out_dir = str(tmp_path)
    for dim in ("1", "2"):
        code, out, _ = run(
            capsys,
            "--out-dir", out_dir,
            "orbits", "--trivial-group", "--n", "4", "--dim", dim,
        )
        assert code == 0
    assert (tmp_path / "orbits-n4-k1.txt").exists()
    assert (tmp_path / "orbits-n4-k2.txt").exists()

    code, out, _ = run(
        capsys,
        "--out-dir", out_dir,
        "km", "--trivial-group", "--n", "4", "--t", "1", "--k", "2",
        "--t-orbits", str(tmp_path / "orbits-n4-k1.txt"),
        "--k-orbits", str(tmp_path / "orbits-n4-k2.txt"),
    )
    assert code == 0 and "15 x 35" in out
    pruned = tmp_path / "km-n4-t1-k2-pruned.txt"
    assert pruned.exists() and (tmp_path / "km-n4-t1-k2-full.txt").exists()

    code, out, _ = run(
        capsys,
        "--out-dir", out_dir,
        "solve", "--km", str(pruned), "--max-solutions", "all",
    )
    assert code == 0 and "56 solutions" in out

    code, out, _ = run(
        capsys,
        "--out-dir", out_dir,
        "expand", "--trivial-group", "--n", "4",
        "--k-orbits", str(tmp_path / "orbits-n4-k2.txt"),
        "--solution", str(tmp_path / "solutions.txt"),
    )
    assert code == 0 and "5 distinct blocks" in out

    code, out, _ = run(
        capsys,
        "--out-dir", out_dir,
        "verify", "--blocks", str(tmp_path / "blocks.txt"),
        "--t", "1", "--lambda", "1",
    )
    assert code == 0
    assert "verification passed" in out
    assert "histogram {1: 15}" in out
    assert (tmp_path / "report.txt").read_text().endswith("VERDICT pass\n")


def test_verify_failure_returns_1(tmp_path, capsys):
    out_dir = str(tmp_path)
    run(capsys, "--out-dir", out_dir, "orbits", "--trivial-group", "--n", "4", "--dim", "2")
    run(
        capsys,
        "--out-dir", out_dir,
        "km", "--trivial-group", "--n", "4", "--t", "1", "--k", "2",
        "--k-orbits", str(tmp_path / "orbits-n4-k2.txt"),
    )
    run(
        capsys,
        "--out-dir", out_dir,
        "solve", "--km", str(tmp_path / "km-n4-t1-k2-pruned.txt"),
    )
    run(
        capsys,
        "--out-dir", out_dir,
        "expand", "--trivial-group", "--n", "4",
        "--k-orbits", str(tmp_path / "orbits-n4-k2.txt"),
        "--solution", str(tmp_path / "solutions.txt"),
    )
    # a spread is not a 2-design: claiming t=2 must fail verification
    code, out, _ = run(
        capsys,
        "--out-dir", out_dir,
        "verify", "--blocks", str(tmp_path / "blocks.txt"),
        "--t", "2", "--lambda", "1",
    )
    assert code == 1
    assert "verification failed" in out
    assert (tmp_path / "report.txt").read_text().endswith("VERDICT fail\n")


def test_conflicting_group_sources_return_2(capsys):
    code, _, err = run(
        capsys, "group", "--fixture", "paper-13", "--singer-normalizer", "5"
    )
    assert code == 2 and "exactly one group source" in err


def test_missing_file_returns_2(capsys):
    code, _, err = run(capsys, "solve", "--km", "does-not-exist.txt")
    assert code == 2 and "does-not-exist.txt" in err


def test_expand_needs_exactly_one_source(capsys):
    code, _, err = run(capsys, "expand", "--trivial-group", "--n", "4")
    assert code == 2 and "--reps FILE or --fixture-solution" in err


def test_unknown_flag_exits_2(capsys):
    with pytest.raises(SystemExit) as info:
        cli.main(["bounds", "--bogus"])
    assert info.value.code == 2
    capsys.readouterr()


def test_node_limit_without_solution_returns_3(tmp_path, capsys):
    out_dir = str(tmp_path)
    run(capsys, "--out-dir", out_dir, "orbits", "--trivial-group", "--n", "4", "--dim", "2")
    run(
        capsys,
        "--out-dir", out_dir,
        "km", "--trivial-group", "--n", "4", "--t", "1", "--k", "2",
        "--k-orbits", str(tmp_path / "orbits-n4-k2.txt"),
    )
    code, out, _ = run(
        capsys,
        "--out-dir", out_dir,
        "solve", "--km", str(tmp_path / "km-n4-t1-k2-pruned.txt"),
        "--node-limit", "1",
    )
    assert code == 3
    assert "stopped by nodes limit" in out


def test_forced_columns_appear_in_solutions(tmp_path, capsys):
    out_dir = str(tmp_path)
    run(capsys, "--out-dir", out_dir, "orbits", "--trivial-group", "--n", "4", "--dim", "2")
    run(
        capsys,
        "--out-dir", out_dir,
        "km", "--trivial-group", "--n", "4", "--t", "1", "--k", "2",
        "--k-orbits", str(tmp_path / "orbits-n4-k2.txt"),
    )
    code, out, _ = run(
        capsys,
        "--out-dir", out_dir,
        "solve", "--km", str(tmp_path / "km-n4-t1-k2-pruned.txt"),
        "--max-solutions", "all", "--force", "0",
    )
    assert code == 0
    rows = [
        ln
        for ln in (tmp_path / "solutions.txt").read_text().splitlines()
        if ln and not ln.startswith("#")
    ]
    assert rows and all("0" in ln.split() for ln in rows)


def test_reruns_are_byte_identical_apart_from_elapsed(tmp_path, capsys):
    def chain(sub):
        d = tmp_path / sub
        d.mkdir()
        run(capsys, "--out-dir", str(d), "orbits", "--trivial-group", "--n", "4", "--dim", "2")
        run(
            capsys,
            "--out-dir", str(d),
            "km", "--trivial-group", "--n", "4", "--t", "1", "--k", "2",
            "--k-orbits", str(d / "orbits-n4-k2.txt"),
        )
        run(
            capsys,
            "--out-dir", str(d), "--seed", "9",
            "solve", "--km", str(d / "km-n4-t1-k2-pruned.txt"),
            "--max-solutions", "all", "--order", "randomized",
        )
        return d

    a, b = chain("a"), chain("b")
    for name in ("orbits-n4-k2.txt", "km-n4-t1-k2-full.txt", "km-n4-t1-k2-pruned.txt"):
        assert (a / name).read_bytes() == (b / name).read_bytes()
    sa = [
        ln
        for ln in (a / "solutions.txt").read_text().splitlines()
        if not ln.startswith("# elapsed")
    ]
    sb = [
        ln
        for ln in (b / "solutions.txt").read_text().splitlines()
        if not ln.startswith("# elapsed")
    ]
    assert sa == sb


def test_paper_check_names_the_failing_stage(tmp_path, monkeypatch, capsys):
    monkeypatch.setitem(FIXTURE_SHA256, "generator_f", "0" * 64)
    code, out, _ = run(capsys, "--out-dir", str(tmp_path), "paper-check")
    assert code == 1
    assert "FAIL" in out
    assert "first failing stage: fixture integrity" in out
