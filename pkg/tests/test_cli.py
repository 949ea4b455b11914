import json

import pytest

from giuga_harness import claims as cl
from giuga_harness import report_io as rio
from giuga_harness.cli import EXIT_BUG, EXIT_FINDING, EXIT_OK, EXIT_USAGE, main


def run(capsys, *argv):
    try:
        code = main(list(argv))
    except SystemExit as exc:  # argparse rejections
        code = exc.code
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.mark.parametrize(
    "argv, expected",
    [
        (["eval", "H", "--n", "5", "--k", "4", "--exact"], "355"),
        (["eval", "H", "--n", "5", "--k", "1"], "1345"),
        (["eval", "U", "--n", "4", "--k", "2", "--mod"], "2 (mod 4)"),
        (["eval", "U", "--n", "4", "--k", "2"], "14"),
        (["eval", "V", "--k", "2"], "-1"),
        (["eval", "fW", "--n", "5"], "25"),
        (["eval", "fG", "--n", "4", "--mod"], "1 (mod 4)"),
        (["eval", "S", "--n", "4", "--k", "3"], "36"),
    ],
)
def test_eval(capsys, argv, expected):
    code, out, _ = run(capsys, *argv)
    assert code == EXIT_OK and out.strip() == expected


@pytest.mark.parametrize(
    "argv",
    [
        ["eval", "H", "--n", "5"],
        ["eval", "H", "--n", "5", "--k", "5"],
        ["eval", "U", "--n", "4", "--k", "3"],
        ["eval", "V", "--k", "2", "--mod"],
        ["eval", "H", "--n", "5", "--k", "1", "--mod", "--exact"],
        ["check", "--claims", "no-such", "--n-max", "10"],
        ["check", "--claims", "wilson"],
        ["check", "--claims", "wilson", "--n-max", "10", "--k-policy", "some"],
        ["check", "--claims", "wilson", "--n-max", "10", "--workers", "0"],
        ["check", "--claims", "thm-ukz", "--n-max", "401", "--k-policy", "all"],
        ["scan-giuga", "--max", "2"],
        ["frobnicate"],
    ],
)
def test_usage_errors_exit_3(capsys, argv):
    code, _, _ = run(capsys, *argv)
    assert code == EXIT_USAGE


def test_help_lists_every_claim_with_anchor(capsys):
    with pytest.raises(SystemExit) as info:
        main(["check", "--help"])
    assert info.value.code == 0
    out = capsys.readouterr().out
    for d in cl.list_claims():
        assert d.id in out and d.anchor in out


def test_list_claims(capsys):
    code, out, _ = run(capsys, "list-claims")
    assert code == EXIT_OK
    assert all(d.id in out for d in cl.list_claims())


def test_check_confirmed_exits_0(capsys):
    code, out, _ = run(capsys, "check", "--claims", "lemma-u1", "--n-max", "1000")
    assert code == EXIT_OK
    assert "confirmed-on-range" in out


def test_check_finding_exits_1(capsys):
    code, out, _ = run(capsys, "check", "--claims", "thm-ukz", "--n-max", "50", "--k-policy", "all")
    assert code == EXIT_FINDING
    assert "violated" in out and "n=4, k=2" in out


def test_check_all_tiny_range_reports_skips(capsys):
    code, out, _ = run(capsys, "check", "--claims", "all", "--n-max", "2")
    assert code == EXIT_OK
    assert "no in-domain pairs" in out


def test_check_forced_bug_exits_2(capsys, monkeypatch):
    from giuga_harness import mod_core as mc

    real = mc.U_mod

    def broken(k, n):
        return mc.Residue(1, n) if n == 77 else real(k, n)

    real_check = cl.check_claim
    monkeypatch.setattr(
        cl, "check_claim", lambda *a, **kw: real_check(*a, kernels=cl.with_kernels(U_mod=broken), **kw)
    )
    code, out, _ = run(capsys, "check", "--claims", "lemma-u1", "--n-max", "100")
    assert code == EXIT_BUG
    assert "IMPLEMENTATION BUG" in out


def test_check_json_and_csv_outputs(capsys, tmp_path):
    out_json = tmp_path / "ukz.json"
    code, _, _ = run(
        capsys, "check", "--claims", "thm-ukz", "--n-max", "30", "--k-policy", "all",
        "--format", "json", "--out", str(out_json),
    )
    assert code == EXIT_FINDING
    doc = rio.read_report(out_json)
    assert doc.payload.violations[0].n == 4

    code, out, _ = run(capsys, "check", "--claims", "thm-ukz", "--n-max", "8", "--k-policy", "all", "--format", "csv")
    assert out.splitlines()[0] == "claim_id,n,k,observed,expected,path"
    assert out.splitlines()[1] == "thm-ukz,4,2,2,0,modular"


def test_check_many_claims_into_directory(capsys, tmp_path):
    code, _, _ = run(
        capsys, "check", "--claims", "lemma-u1,wilson", "--n-max", "60",
        "--format", "json", "--out", str(tmp_path),
    )
    assert code == EXIT_OK
    assert sorted(p.name for p in tmp_path.iterdir()) == ["lemma-u1.json", "wilson.json"]


def test_check_workers_match_serial(capsys):
    argv = ["check", "--claims", "thm-ukz", "--n-max", "60", "--k-policy", "all", "--format", "csv"]
    _, serial, _ = run(capsys, *argv)
    _, parallel, _ = run(capsys, *argv, "--workers", "3", "--chunk-size", "7")
    assert serial == parallel


def test_check_plot_writes_figures(capsys, tmp_path):
    code, _, _ = run(
        capsys, "check", "--claims", "thm-ukz", "--n-max", "40", "--k-policy", "all",
        "--format", "csv", "--out", str(tmp_path / "v.csv"), "--plot", str(tmp_path),
    )
    assert code == EXIT_FINDING
    assert (tmp_path / "thm-ukz.png").stat().st_size > 0
    assert (tmp_path / "thm-ukz-map.png").stat().st_size > 0


def test_observe(capsys, tmp_path):
    code, out, _ = run(capsys, "observe", "--n-max", "100")
    assert code == EXIT_OK
    assert "k = n-5" in out and "confirmed-on-range" in out
    path = tmp_path / "obs.json"
    code, _, _ = run(capsys, "observe", "--n-max", "100", "--format", "json", "--out", str(path))
    report = rio.read_report(path).payload
    assert code == EXIT_OK and report.claim_id == "conj-hk" and report.violation_count == 0


def test_scan_giuga(capsys, tmp_path):
    code, out, _ = run(capsys, "scan-giuga", "--max", "100")
    assert code == EXIT_OK
    assert "G = 0" in out and "25 of 25" in out
    code, _, _ = run(capsys, "scan-giuga", "--max", "100", "--plot", str(tmp_path))
    assert (tmp_path / "giuga-census-100.png").exists()


def test_scan_giuga_output_independent_of_workers(capsys):
    _, one, _ = run(capsys, "scan-giuga", "--max", "2000", "--format", "csv")
    _, eight, _ = run(capsys, "scan-giuga", "--max", "2000", "--format", "csv", "--workers", "8")
    assert one == eight == "claim_id,n,k,observed,expected,path\n"
    _, one, _ = run(capsys, "scan-giuga", "--max", "2000", "--format", "json")
    _, eight, _ = run(capsys, "scan-giuga", "--max", "2000", "--format", "json", "--workers", "8")
    strip = lambda s: {k: v for k, v in json.loads(s).items() if k != "generated_at"}  # noqa: E731
    assert strip(one) == strip(eight)


def test_resume_round_trip_and_digest_mismatch(capsys, tmp_path):
    from giuga_harness import scanner as sc

    path = tmp_path / "ukz.jsonl"
    cfg = sc.ScanConfig("thm-ukz", 2, 60, "all", chunk_size=8, checkpoint=path)
    with pytest.raises(sc.ScanInterrupted):
        sc.sweep(cfg, max_chunks=2)
    code, _, err = run(capsys, "resume", "--checkpoint", str(path), "--n-max", "61")
    assert code == EXIT_USAGE and "digest" in err.lower()
    code, out, _ = run(capsys, "resume", "--checkpoint", str(path), "--format", "csv")
    _, direct, _ = run(capsys, "check", "--claims", "thm-ukz", "--n-max", "60", "--k-policy", "all", "--format", "csv")
    assert code == EXIT_FINDING and out == direct


def test_resume_missing_checkpoint(capsys, tmp_path):
    code, _, _ = run(capsys, "resume", "--checkpoint", str(tmp_path / "none.jsonl"))
    assert code == EXIT_USAGE


def test_scan_giuga_resumes_existing_checkpoint(capsys, tmp_path):
    from giuga_harness import scanner as sc

    path = tmp_path / "census.jsonl"
    with pytest.raises(sc.ScanInterrupted):
        sc.giuga_census(1000, chunk_size=64, checkpoint=path, max_chunks=3)
    code, out, _ = run(capsys, "scan-giuga", "--max", "1000", "--chunk-size", "64", "--checkpoint", str(path))
    assert code == EXIT_OK and "168 of 168" in out
