import json
import os
import shutil

import numpy as np
import pytest

import phermit
from phermit import reports
from phermit.algebra import biorthogonal

test_save_path = ".pytest_cache"
test_reports_path = os.path.join(test_save_path, "reports")

HEADER = {"version": "0.0.0", "seed": 7, "tolerances": {"tol": 1e-10, "pair_tol": 1e-8}}


@pytest.fixture
def reports_dir(request):
    def fin():
        shutil.rmtree(test_reports_path, ignore_errors=True)
    fin()
    request.addfinalizer(fin)
    os.makedirs(test_reports_path, exist_ok=True)
    return test_reports_path


def test_table_report_formats():
    rows = [{"level": 0, "E": 1.5 + 0.25j, "ok": True}, {"level": 1, "E": 2.0, "ok": False}]
    report = reports.TableReport(rows, header=HEADER)
    assert report.format == "csv" and report.ext == "csv"
    lines = report.report().split("\n")
    assert lines[0] == "# version: 0.0.0" and lines[1] == "# seed: 7"
    assert lines[2] == "# tolerances: tol=1e-10, pair_tol=1e-08"
    assert lines[3] == "level,E_re,E_im,ok"
    assert lines[4] == "0,1.5,0.25,true"
    assert lines[5] == "1,2,0,false"
    content = json.loads(report.report("json"))
    assert content["header"]["seed"] == 7
    assert content["rows"][0]["E"] == {"re": 1.5, "im": 0.25} and content["rows"][1]["ok"] is False
    text = report.report("text")
    assert "level" in text and "E_re" in text
    assert reports.TableReport(rows, columns=["level"]).report_csv().split("\n") == ["level", "0", "1"]
    assert reports.TableReport([]).report_csv() == ""


def test_spectrum_report():
    eigvals = np.array([1.0, 2 + 1j, 2 - 1j])
    spectrum_class = biorthogonal.classify_eigenvalues(eigvals)
    report = reports.SpectrumReport(eigvals, spectrum_class)
    lines = report.report_csv().split("\n")
    assert lines[0] == "index,re,im,class,pair_index,multiplicity"
    assert lines[1] == "0,1,0,real,-1,1"
    assert lines[2] == "1,2,1,pair+,2,1" and lines[3] == "2,2,-1,pair-,1,1"
    content = json.loads(report.report_json())
    assert content["classification"] == biorthogonal.MIXED
    assert "classification: Mixed" in report.report_text()
    system = phermit.algebra.eig_biorthonormal(np.diag([2.0, 2.0, 1.0]))
    report = reports.SpectrumReport.from_system(system, biorthogonal.classify_spectrum(system))
    assert [row["multiplicity"] for row in report.rows] == [1, 2, 2]
    with pytest.raises(AssertionError):
        _ = reports.SpectrumReport(eigvals, spectrum_class, multiplicities=[1])


def test_certificate_report():
    certificate = phermit.algebra.certify(np.diag([1j, -1j]))
    report = reports.CertificateReport.from_certificate(certificate, header=HEADER)
    assert report.format == "json"
    content = json.loads(report.report())
    assert content["classification"] == biorthogonal.CONJUGATE_PAIRED
    assert content["residual"] <= 1e-10 and "unpaired" not in content
    eta = phermit.utils.matrix_from_dict(content["eta"])
    assert np.allclose(eta, certificate.eta.op)
    assert "residual" in report.report_csv() and "eta:" in report.report_text()
    verdict = reports.CertificateReport(biorthogonal.NOT_PSEUDO_HERMITIAN, unpaired=[1j])
    content = verdict.as_dict()
    assert content["eta"] is None and content["residual"] is None
    assert content["unpaired"] == [{"re": 0.0, "im": 1.0}]
    assert verdict.report_csv().split("\n")[-1] == "NotPseudoHermitian,"
    assert "unpaired" in verdict.report_text()


def test_residual_report():
    report = reports.ResidualReport({"a": 1e-14, "b": 0.5}, tol=1e-10)
    assert report.residuals == {"a": 1e-14, "b": 0.5}
    assert [row["ok"] for row in report.rows] == [True, False]
    assert report.summary() == {"tolerance": 1e-10}
    assert reports.ResidualReport({"a": 1.0}).rows[0]["ok"] == ""
    assert json.loads(report.report_json())["tolerance"] == 1e-10


def test_trajectory_report():
    report = reports.TrajectoryReport([0.0, 0.5], [1.0, 1.0 + 1e-3j], drift=1e-3)
    lines = report.report_csv().split("\n")
    assert lines == ["t,re,im", "0,1,0", "0.5,1,0.001"]
    assert report.summary() == {"drift": 1e-3}
    assert "drift: 0.001" in report.report_text()


def test_sweep_report():
    rows = [{"alpha": alpha, "classification": cls, "real_pairs": 1, "imaginary_pairs": 0, "boundary_modes": 0,
             "min_d": 1.0} for alpha, cls in [(0.0, "AllReal"), (0.5, "Mixed"), (1.0, "Mixed"), (1.5, "AllReal")]]
    report = reports.SweepReport(rows)
    assert report.transitions() == [0.5, 1.5]
    assert report.report_csv().split("\n")[0] == "alpha,classification,real_pairs,imaginary_pairs,boundary_modes,min_d"
    assert reports.SweepReport(rows[:1]).transitions() == []


def test_spectral_map_report():
    rows = [
        {"side": "plus", "index": 0, "eigenvalue": 0.0, "image_norm": 0.0, "zero_mode": True, "residual": 0.0,
         "partner_distance": 1.0},
        {"side": "minus", "index": 0, "eigenvalue": 1.0, "image_norm": 2.0, "zero_mode": False, "residual": 1e-15,
         "partner_distance": 1e-14},
    ]
    report = reports.SpectralMapReport(rows)
    assert len(report.zero_modes) == 1
    assert report.summary() == {"zero_modes": 1, "max_residual": 1e-15, "max_partner_distance": 1e-14}
    assert reports.SpectralMapReport([]).max_residual == 0.0


def test_report_save(reports_dir):
    report = reports.ResidualReport({"a": 1.0}, format="json", header=HEADER)
    path = report.save(os.path.join(reports_dir, "residuals"))
    assert path.endswith("residuals.json") and os.path.isfile(path)
    with open(path) as fd:
        assert json.load(fd)["rows"] == [{"name": "a", "value": 1.0, "ok": ""}]
    path = report.save(os.path.join(reports_dir, "residuals"), format="txt")
    assert path.endswith("residuals.txt") and report.format == "text"
    report.solve_format("unknown")
    assert report.format == "text" and report.ext == "txt"
