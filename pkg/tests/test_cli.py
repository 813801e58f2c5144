import json

import numpy as np
import pytest

from gqtlab.cli import EXIT_INPUT, EXIT_OK, EXIT_TOLERANCE, main
from gqtlab.polynomials import PolyCoeffs
from gqtlab.serialization import matrix_to_json, phases_from_file


def write_config(tmp_path, name, cfg):
    p = tmp_path / name
    p.write_text(json.dumps(cfg))
    return str(p)


def hermitian_config(tmp_path, coeffs, n=3, seed=7, alpha=None):
    rng = np.random.default_rng(seed)
    X = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    A = (X + X.conj().T) / (2.2 * np.linalg.norm(X + X.conj().T, 2))
    cfg = {
        "matrix": matrix_to_json(A),
        "poly": PolyCoeffs(np.asarray(coeffs, dtype=complex)).to_json_dict(),
    }
    if alpha is not None:
        cfg["alpha"] = alpha
    return write_config(tmp_path, "gqet.json", cfg)


class TestGqetCommand:
    def test_identity_poly(self, tmp_path, capsys):
        cfg = hermitian_config(tmp_path, [0, 1], alpha=1.0)
        out = tmp_path / "report.json"
        assert main(["gqet", "--config", cfg, "--out", str(out)]) == EXIT_OK
        report = json.loads(out.read_text())
        assert report["residual"] < 1e-9
        assert report["queries_U"] == 1

    def test_t2_scalar(self, tmp_path, capsys):
        cfg = write_config(tmp_path, "c.json", {
            "matrix": matrix_to_json(np.array([[0.5]])),
            "poly": PolyCoeffs([0, 0, 1.0]).to_json_dict(),
            "alpha": 1.0,
        })
        assert main(["gqet", "--config", cfg]) == EXIT_OK
        text = capsys.readouterr().out
        # |P| = 1 on the circle forces a rescale; -0.5 recovered after it
        assert "scale=" in text

    def test_mixed_degree9(self, tmp_path, capsys):
        rng = np.random.default_rng(8)
        a = rng.normal(size=10) + 1j * rng.normal(size=10)
        c = PolyCoeffs(a).scaled(0.1 / np.sum(np.abs(a)))
        cfg = hermitian_config(tmp_path, c.coeffs)
        assert main(["gqet", "--config", cfg]) == EXIT_OK

    def test_non_hermitian_rejected(self, tmp_path, capsys):
        cfg = write_config(tmp_path, "c.json", {
            "matrix": matrix_to_json(np.array([[0.0, 1.0], [0.0, 0.0]])),
            "poly": PolyCoeffs([0, 0.5]).to_json_dict(),
        })
        assert main(["gqet", "--config", cfg]) == EXIT_INPUT

    def test_missing_config(self, capsys):
        assert main(["gqet", "--config", "/nonexistent.json"]) == EXIT_INPUT

    def test_missing_poly(self, tmp_path, capsys):
        cfg = write_config(tmp_path, "c.json", {
            "matrix": matrix_to_json(np.array([[0.5]]))})
        assert main(["gqet", "--config", cfg]) == EXIT_INPUT


class TestGqsvtCommand:
    def test_t1_both_routes(self, tmp_path, capsys):
        rng = np.random.default_rng(9)
        A = rng.normal(size=(2, 3))
        A = A / (1.5 * np.linalg.norm(A, 2))
        cfg = write_config(tmp_path, "c.json", {
            "matrix": matrix_to_json(A),
            "poly": PolyCoeffs([0, 0.8]).to_json_dict(),
            "alpha": 1.0,
            "parity": "odd",
            "route": "both",
        })
        assert main(["gqsvt", "--config", cfg]) == EXIT_OK
        text = capsys.readouterr().out
        assert "route agreement" in text
        assert "success_prob" in text

    def test_even_query_halving(self, tmp_path, capsys):
        cfg = write_config(tmp_path, "c.json", {
            "matrix": matrix_to_json(np.array([[0.6]])),
            "poly": PolyCoeffs([0, 0, 0.3]).to_json_dict(),
            "alpha": 1.0,
            "parity": "even",
            "route": "both",
        })
        assert main(["gqsvt", "--config", cfg]) == EXIT_OK
        text = capsys.readouterr().out
        assert "hermitianization: residual" in text
        assert "multiplication: residual" in text
        herm = [l for l in text.splitlines() if l.startswith("hermitian")][0]
        mult = [l for l in text.splitlines() if l.startswith("multiplic")][0]
        assert "queries_U=2" in herm
        assert "queries_U=1" in mult

    def test_parity_required(self, tmp_path, capsys):
        cfg = write_config(tmp_path, "c.json", {
            "matrix": matrix_to_json(np.array([[0.6]])),
            "poly": PolyCoeffs([0, 0.5]).to_json_dict(),
        })
        assert main(["gqsvt", "--config", cfg]) == EXIT_INPUT

    def test_pseudo_inversion_demo(self, tmp_path, capsys):
        from gqtlab.polynomials import ApproxSpec, approx_inverse
        res = approx_inverse(ApproxSpec(kappa=10, eps=1e-3))
        s = np.array([0.15, 0.4, 1.0])
        cfg = write_config(tmp_path, "c.json", {
            "matrix": matrix_to_json(np.diag(s)),
            "poly": res.poly.to_json_dict(),
            "alpha": 1.0,
            "parity": "odd",
            "route": "hermitianization",
        })
        out = tmp_path / "demo.txt"
        assert main(["gqsvt", "--config", cfg, "--out", str(out),
                     "--tol", "1e-7"]) == EXIT_OK


class TestBoundsCommand:
    def test_default_sweep(self, tmp_path, capsys):
        cfg = write_config(tmp_path, "b.json", {"trials": 50})
        out = tmp_path / "rows.csv"
        assert main(["bounds", "--config", cfg, "--seed", "5",
                     "--out", str(out)]) == EXIT_OK
        text = capsys.readouterr().out
        assert "violations=0" in text
        header = out.read_text().splitlines()[0]
        assert header == "degree,max_interval,max_circle,beta,bound,ratio"

    def test_deterministic_output(self, tmp_path, capsys):
        cfg = write_config(tmp_path, "b.json", {"trials": 40})
        o1, o2 = tmp_path / "a.csv", tmp_path / "b.csv"
        main(["bounds", "--config", cfg, "--seed", "11", "--out", str(o1)])
        main(["bounds", "--config", cfg, "--seed", "11", "--out", str(o2)])
        assert o1.read_bytes() == o2.read_bytes()
        o3 = tmp_path / "c.csv"
        main(["bounds", "--config", cfg, "--seed", "12", "--out", str(o3)])
        assert o1.read_bytes() != o3.read_bytes()

    def test_mod4_sampler(self, tmp_path, capsys):
        cfg = write_config(tmp_path, "b.json",
                           {"trials": 60, "sampler": "mod4"})
        out = tmp_path / "rows.csv"
        assert main(["bounds", "--config", cfg, "--out", str(out)]) == EXIT_OK
        betas = [float(line.split(",")[3])
                 for line in out.read_text().splitlines()[1:]]
        assert max(betas) <= 2 + 1e-6

    def test_chebyshev_sampler(self, tmp_path, capsys):
        cfg = write_config(tmp_path, "b.json",
                           {"trials": 30, "sampler": "chebyshev"})
        out = tmp_path / "rows.csv"
        assert main(["bounds", "--config", cfg, "--out", str(out)]) == EXIT_OK
        betas = [float(line.split(",")[3])
                 for line in out.read_text().splitlines()[1:]]
        assert np.allclose(betas, 1.0, atol=1e-6)

    def test_bad_sampler(self, tmp_path, capsys):
        cfg = write_config(tmp_path, "b.json", {"sampler": "quantum"})
        assert main(["bounds", "--config", cfg]) == EXIT_INPUT

    def test_bad_trials(self, tmp_path, capsys):
        cfg = write_config(tmp_path, "b.json", {"trials": 0})
        assert main(["bounds", "--config", cfg]) == EXIT_INPUT


class TestPhasesCommand:
    def test_round_trip(self, tmp_path, capsys):
        cfg = write_config(tmp_path, "p.json", {
            "poly": PolyCoeffs([0, 0, 0.7]).to_json_dict()})
        out = tmp_path / "phases.json"
        assert main(["phases", "--config", cfg, "--out", str(out)]) == EXIT_OK
        ph = phases_from_file(str(out))
        assert ph.degree == 2

    def test_rescales_large_poly(self, tmp_path, capsys):
        cfg = write_config(tmp_path, "p.json", {
            "poly": PolyCoeffs([0, 2.0]).to_json_dict()})
        assert main(["phases", "--config", cfg]) == EXIT_OK
        assert "rescaled" in capsys.readouterr().out


class TestScalingTableCommand:
    def test_small_custom_grid(self, tmp_path, capsys):
        cfg = write_config(tmp_path, "s.json", {
            "rows": [{"kappa": 4, "eps": 1e-2}]})
        out = tmp_path / "table.csv"
        assert main(["scaling-table", "--config", cfg,
                     "--out", str(out)]) == EXIT_OK
        lines = out.read_text().splitlines()
        assert lines[0] == "degree,kappa,eps,max_p,max_P,beta"
        assert len(lines) == 2
        beta = float(lines[1].split(",")[5])
        assert 1.0 <= beta < 1.75
        # rounded comparison view on stdout
        assert "rounded to two digits" in capsys.readouterr().out

    def test_grid_sorted_deterministically(self, tmp_path, capsys):
        cfg = write_config(tmp_path, "s.json", {
            "rows": [{"kappa": 6, "eps": 1e-2}, {"kappa": 4, "eps": 1e-2}]})
        out = tmp_path / "table.csv"
        assert main(["scaling-table", "--config", cfg,
                     "--out", str(out)]) == EXIT_OK
        kappas = [float(line.split(",")[1])
                  for line in out.read_text().splitlines()[1:]]
        assert kappas == sorted(kappas)
