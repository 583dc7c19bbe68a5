import math

import numpy as np
import pytest

import qglab


def test_lattice_shape():
    g = qglab.Lattice(1, 0.25, 1.0)
    assert g.vertex_count == 9
    pts = g.points()
    assert pts.shape == (9, 1)
    assert pts[0, 0] == pytest.approx(-1.0)
    g2 = qglab.Lattice(2, 0.5, 1.0)
    assert g2.vertex_count == 25
    assert g2.stub_count == 4 * 5


def test_h2_spectrum_matches_tridiagonal_formula():
    ell = 0.125
    g = qglab.Lattice(1, ell, 0.5 - ell)
    h2 = qglab.h2_matrix(g, qglab.Potential("zero")).toarray()
    n = g.vertex_count
    expected = [2 / ell**2 * (1 - math.cos(m * math.pi / (n + 1))) for m in range(1, n + 1)]
    assert np.allclose(np.linalg.eigvalsh(h2), expected, rtol=1e-12)


def test_secular_eigenvalues_free_interval():
    g = qglab.Lattice(1, 0.125, 0.375)
    lam = qglab.secular_eigenvalues(g, qglab.Potential("zero"), 1.0, 260.0)
    assert np.allclose(lam, [(m * math.pi) ** 2 for m in range(1, 6)], rtol=1e-10)


def test_continuum_harmonic_ground_state():
    ref = qglab.continuum_eigenvalues(1, 1 / 32, 8.0, qglab.Potential("harmonic"), 0.0, 2.0, 1)
    assert ref[0]["value"] == pytest.approx(1.0, abs=1e-5)


def test_resolvent_difference_is_small_and_shrinks():
    v = qglab.Potential("harmonic")
    a = qglab.resolvent_difference(qglab.Lattice(1, 0.2, 1.8), v, 1j)
    b = qglab.resolvent_difference(qglab.Lattice(1, 0.1, 1.9), v, 1j)
    assert 0 < b < a < 0.1


def test_spectral_distances_and_fit():
    assert qglab.hausdorff_distance([1.0, 5.0], [2.0, 3.0]) == 2.0
    assert qglab.inverse_shift_spectra_compare([0.0, 1.0], [0.0, 1.0], 1.0) == 0.0
    f = qglab.fit_loglog([0.2, 0.1, 0.05, 0.025], [3 * x**2 for x in [0.2, 0.1, 0.05, 0.025]])
    assert f["slope"] == pytest.approx(2.0)
    assert f["constant"] == pytest.approx(3.0)


def test_errors_are_python_exceptions():
    with pytest.raises(qglab.QglabError):
        qglab.hausdorff_distance([], [1.0])
    with pytest.raises(qglab.InvalidParameter):
        qglab.Potential("quartic")
    with pytest.raises(qglab.ParseError):
        qglab.run("lemma-check", {"colour": "red"})


def test_lemma_check_round_trip(tmp_path):
    cfg = qglab.default_config()
    assert cfg["nu"] == 1
    report, passed = qglab.run("lemma-check", radius=1.0, probes=10, out_dir=str(tmp_path / "l"))
    assert passed
    assert report["command"] == "lemma-check"
    assert (tmp_path / "l" / "lemma-check.csv").exists()
    merged, ok = qglab.report(tmp_path / "r", [tmp_path / "l" / "lemma-check.json"])
    assert ok and merged["inputs"][0]["command"] == "lemma-check"
    assert (tmp_path / "r" / "summary.txt").read_text().endswith("overall: PASS\n")
