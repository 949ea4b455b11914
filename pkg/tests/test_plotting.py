import pytest

from giuga_harness import claims as cl
from giuga_harness import exact_core as ex
from giuga_harness import plotting
from giuga_harness.scanner import GiugaCensus

PNG_MAGIC = b"\x89PNG"


def test_claim_report_figure(tmp_path):
    report = cl.check_claim("thm-ukz", (2, 40), cl.KPolicy.all())
    path = plotting.plot_claim_report(report, tmp_path / "sub" / "r.png")
    assert path.read_bytes()[:4] == PNG_MAGIC


def test_claim_report_figure_without_violations(tmp_path):
    report = cl.check_claim("vk-identity", (1, 50))
    assert plotting.plot_claim_report(report, tmp_path / "v.svg").stat().st_size > 0


def test_residue_grid_matches_oracle():
    grid = plotting.residue_grid("thm-ukz", 12)
    for n in range(3, 13):
        for k in range(1, n - 1):
            assert grid[n, k] == (ex.U(k, n) % n != 0)
    assert grid[4, 3] == -1 and grid[4, 2] == 1


def test_residue_map_and_census(tmp_path):
    assert plotting.plot_residue_map("cor-hk-h1", 30, tmp_path / "m.png").read_bytes()[:4] == PNG_MAGIC
    assert plotting.plot_census(GiugaCensus(100, (), 25, 25), tmp_path / "c.png").exists()
    with pytest.raises(ValueError):
        plotting.plot_residue_map("wilson", 30, tmp_path / "x.png")
