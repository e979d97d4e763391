import json
import subprocess
import sys

import pytest

from adehodge import cli, gallery
from adehodge.defect import RankResult
from adehodge.errors import Undecided
from adehodge.hodge import HodgeReport


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture(scope="module")
def cusp36_files(tmp_path_factory):
    d = tmp_path_factory.mktemp("cusp36")
    m = gallery.bundle_manifest("cusp36")
    (d / "cusp36.poly").write_text(m["surface"] + "\n")
    (d / "cusp36.pts").write_text(json.dumps(m["points"]))
    return d / "cusp36.poly", d / "cusp36.pts"


@pytest.fixture(scope="module")
def sextic_files(tmp_path_factory):
    d = tmp_path_factory.mktemp("sextic30")
    m = gallery.bundle_manifest("sextic30")
    (d / "s.poly").write_text("# six planes and a quadric\n" + m["surface"] + "\n")
    (d / "s.pts").write_text(json.dumps(m["points"]))
    return d / "s.poly", d / "s.pts"


def test_gallery_json(capsys):
    code, out, _ = run(capsys, "gallery", "sextic30", "--format", "json")
    assert code == 0
    report = json.loads(out)
    assert report["h11"] == 11 and report["h12"] == 23
    assert HodgeReport.from_json(report["small"]).to_json() == report["small"]
    assert json.loads(json.dumps(report, sort_keys=True, indent=2)) == report
    code2, out2, _ = run(capsys, "gallery", "sextic30", "--format", "json")
    assert out2 == out


def test_gallery_text_and_list(capsys):
    code, out, _ = run(capsys, "gallery", "table72_row1")
    assert code == 0 and "h12: 75" in out
    code, out, _ = run(capsys, "gallery", "list", "--format", "json")
    assert json.loads(out)["examples"] == list(gallery.EXAMPLE_NAMES)
    code, out, _ = run(capsys, "gallery", "octic64", "--manifest", "--format", "json")
    assert json.loads(out)["expected"]["ranks"] == [122]


def test_hodge_smooth_double_octic(capsys):
    code, out, _ = run(capsys, "hodge", "--cover", "2", "--degree", "8", "--points", "none", "--format", "json")
    assert code == 0
    report = json.loads(out)
    assert report["big"]["h12"] == 149 and report["small"]["h12"] == 149


def test_classify_cusp36(capsys, cusp36_files):
    poly, pts = cusp36_files
    code, out, _ = run(capsys, "classify", "--surface", str(poly), "--points", str(pts), "--format", "json")
    assert code == 0
    report = json.loads(out)
    assert report["inventory"] == {"A2": 36}
    assert len(report["records"]) == 36 and all(r["type"] == "A2" for r in report["records"])


def test_rank_defect_hodge_commands(capsys, sextic_files, tmp_path):
    poly, pts = sextic_files
    dump = tmp_path / "m4.csv"
    code, out, _ = run(capsys, "rank", "--points", str(pts), "--degree", "4", "--dump", str(dump), "--format", "json")
    assert code == 0 and json.loads(out)["rank"] == 25
    assert dump.exists() and dump.with_suffix(".json").exists()
    code, out, _ = run(
        capsys, "rank", "--surface", str(poly), "--points", str(pts), "--degree", "6", "--kind", "triple_cusp", "--format", "json"
    )
    assert code == 0 and json.loads(out)["rank"] == 55
    code, out, _ = run(capsys, "defect", "--surface", str(poly), "--points", str(pts), "--cover", "3", "--format", "json")
    assert code == 0 and json.loads(out)["delta"] == 40
    code, out, _ = run(
        capsys, "hodge", "--surface", str(poly), "--points", str(pts), "--cover", "3", "--degree", "6", "--format", "json"
    )
    report = json.loads(out)
    assert code == 0 and (report["small"]["h11"], report["small"]["h12"], report["big"]["h11"]) == (11, 23, 161)


def test_input_errors(capsys, tmp_path, sextic_files):
    poly, pts = sextic_files
    assert run(capsys, "gallery", "sextic30", "--precision", "32")[0] == 2
    assert run(capsys, "gallery", "nope")[0] == 2
    assert run(capsys, "classify", "--surface", str(tmp_path / "missing.poly"), "--points", str(pts))[0] == 2
    bad = tmp_path / "bad.poly"
    bad.write_text("y0 + * y1")
    code, out, err = run(capsys, "classify", "--surface", str(bad), "--points", "none", "--format", "json")
    assert code == 2 and json.loads(out)["error"] == "PolySyntaxError" and "position" in err
    smooth = tmp_path / "smooth.pts"
    smooth.write_text(json.dumps([[1, 1, 1, 7]]))
    code, out, _ = run(capsys, "classify", "--surface", str(poly), "--points", str(smooth), "--format", "json")
    assert code == 2 and json.loads(out)["error"] == "NotSingular"
    assert run(capsys, "rank", "--points", str(pts))[0] == 2
    assert run(capsys, "bogus")[0] == 2


def test_undecided_exit_code(capsys, monkeypatch, sextic_files):
    poly, pts = sextic_files
    monkeypatch.setattr(cli, "rank", lambda M, backend, precision: RankResult(25, "numeric", False, 512))
    code, out, err = run(capsys, "rank", "--points", str(pts), "--degree", "4", "--format", "json")
    assert code == 3
    assert json.loads(out)["certified"] is False and "not certified" in err

    def undecided(*a, **k):
        raise Undecided("cannot separate from zero")

    monkeypatch.setattr(cli, "rank", undecided)
    code, out, _ = run(capsys, "rank", "--points", str(pts), "--degree", "4", "--format", "json")
    assert code == 3 and json.loads(out)["error"] == "Undecided"


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "adehodge", "hodge", "--cover", "3", "--degree", "6", "--points", "none", "--format", "json"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["big"]["h12"] == 103
