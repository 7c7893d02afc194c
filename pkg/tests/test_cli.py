"""Command-line interface tests: schemas, exit codes, reproducibility."""

import csv
import io
import json
import math

import numpy as np
import pytest

from netdim import analytic as an
from netdim import cli
from netdim.errors import QuadratureError
from netdim.params import SystemParams


def run_cli(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr().out
    return code, out


def parse_csv(text):
    lines = [ln for ln in text.splitlines() if not ln.startswith("#")]
    rows = list(csv.reader(io.StringIO("\n".join(lines))))
    header, data = rows[0], rows[1:]
    return header, data


def manifest_of(text):
    for ln in text.splitlines():
        if ln.startswith("# manifest: "):
            return json.loads(ln[len("# manifest: "):])
    raise AssertionError("no manifest line found")


class TestCcdfCommand:
    def test_noiseless_rayleigh_matches_closed_form(self, capsys):
        code, out = run_cli(
            capsys, "ccdf", "--alpha", "4", "--m", "1", "--lc-over-ls", "20",
            "--noiseless", "--beta-db-range=-10:20:5",
        )
        assert code == 0
        header, data = parse_csv(out)
        assert header == ["beta_db", "ccdf", "outage", "method"]
        p = SystemParams.from_ratio(20.0, alpha=4.0)
        for row in data:
            beta = 10.0 ** (float(row[0]) / 10.0)
            assert float(row[1]) == pytest.approx(an.sir_ccdf_rayleigh(p, beta), rel=1e-12)
            assert float(row[1]) + float(row[2]) == pytest.approx(1.0, abs=1e-12)
            assert row[3] == "closed-form/rayleigh-sir"

    def test_noisy_anchor_value(self, capsys):
        code, out = run_cli(
            capsys, "ccdf", "--alpha", "4", "--m", "1", "--lc-over-ls", "10",
            "--p-over-sigma2-db", "100", "--beta-db-range=0:0:1",
        )
        assert code == 0
        _, data = parse_csv(out)
        assert float(data[0][2]) == pytest.approx(0.23, abs=0.02)

    def test_alpha_ordering_at_nonnegative_thresholds(self, capsys):
        outages = {}
        for alpha in ("3", "5"):
            code, out = run_cli(
                capsys, "ccdf", "--alpha", alpha, "--noiseless", "--lc-over-ls", "10",
                "--beta-db-range=0:10:5",
            )
            assert code == 0
            _, data = parse_csv(out)
            outages[alpha] = [float(r[2]) for r in data]
        assert all(a >= b for a, b in zip(outages["3"], outages["5"]))

    def test_closed_form_method_rejected_when_inapplicable(self, capsys):
        code, _ = run_cli(
            capsys, "ccdf", "--alpha", "3", "--p-over-sigma2-db", "100",
            "--method", "closed_form",
        )
        assert code == 2

    def test_numerical_failure_exit_code(self, capsys, monkeypatch):
        def boom(*a, **k):
            raise QuadratureError("synthetic")

        monkeypatch.setattr(cli.analytic, "ccdf_curve", boom)
        code, _ = run_cli(capsys, "ccdf", "--noiseless")
        assert code == 3

    def test_json_mirror(self, capsys, tmp_path):
        jpath = tmp_path / "curve.json"
        code, _ = run_cli(
            capsys, "ccdf", "--noiseless", "--beta-db-range=0:2:1",
            "--json-out", str(jpath),
        )
        assert code == 0
        doc = json.loads(jpath.read_text())
        assert doc["columns"] == ["beta_db", "ccdf", "outage", "method"]
        assert len(doc["rows"]) == 3
        assert doc["manifest"]["subcommand"] == "ccdf"
        assert doc["manifest"]["tool_version"]


class TestParameterValidation:
    @pytest.mark.parametrize(
        "argv",
        [
            ("ccdf", "--alpha", "1.9", "--noiseless"),
            ("ccdf", "--m", "9", "--noiseless"),
            ("ccdf", "--rho", "1.5", "--noiseless"),
            ("ccdf", "--beta-db-range=10:0:1", "--noiseless"),
            ("design",),  # missing epsilon
            ("design", "--epsilon", "1.5", "--noiseless"),
            ("compare", "--outage-rayleigh", "0.1"),
        ],
    )
    def test_invalid_input_exits_2(self, capsys, argv):
        assert cli.main(list(argv)) == 2
        capsys.readouterr()

    def test_unknown_figure_exits_2(self, capsys):
        with pytest.raises(SystemExit) as exc:
            cli.main(["figure", "fig2"])
        assert exc.value.code == 2
        capsys.readouterr()


class TestConfigRoundTrip:
    def test_dump_then_reingest_is_identical(self, capsys, tmp_path):
        first = tmp_path / "a.json"
        second = tmp_path / "b.json"
        code, _ = run_cli(
            capsys, "simulate", "--lc-over-ls", "12.5", "--alpha", "3.5",
            "--ms", "2", "--mi", "3", "--p-over-sigma2-db", "95",
            "--trials", "10", "--seed", "123", "--beta-db-range=0:1:1",
            "--backend", "numpy", "--dump-config", str(first), "--out", str(tmp_path / "x.csv"),
        )
        assert code == 0
        code, _ = run_cli(
            capsys, "simulate", "--config", str(first),
            "--dump-config", str(second), "--backend", "numpy",
            "--out", str(tmp_path / "y.csv"),
        )
        assert code == 0
        assert json.loads(first.read_text()) == json.loads(second.read_text())

    def test_flags_override_config(self, capsys, tmp_path):
        cfg = tmp_path / "c.json"
        cfg.write_text(json.dumps({"alpha": 3.0, "lambda_c": 2e-6}))
        dumped = tmp_path / "d.json"
        code, _ = run_cli(
            capsys, "ccdf", "--config", str(cfg), "--alpha", "5",
            "--beta-db-range=0:0:1", "--dump-config", str(dumped),
        )
        assert code == 0
        resolved = json.loads(dumped.read_text())
        assert resolved["alpha"] == 5.0
        assert resolved["lambda_c"] == 2e-6


class TestSimulateCommand:
    def test_reproducible_data_rows(self, capsys):
        argv = (
            "simulate", "--lc-over-ls", "10", "--p-over-sigma2-db", "100",
            "--trials", "2000", "--seed", "5", "--beta-db-range=-2:2:2",
            "--backend", "numpy",
        )
        code1, out1 = run_cli(capsys, *argv)
        code2, out2 = run_cli(capsys, *argv)
        assert code1 == code2 == 0
        assert parse_csv(out1) == parse_csv(out2)
        header, data = parse_csv(out1)
        assert header == ["beta_db", "ccdf", "outage", "ci_halfwidth_95"]
        m = manifest_of(out1)
        assert m["seed"] == 5
        assert m["config_echo"]["trials"] == 2000
        assert m["config_echo"]["window_radius"] > 0

    def test_zero_interferer_run(self, capsys):
        # Only noise limits the SINR: outage is 0 below the SNR-only
        # threshold and 1 above it.
        code, out = run_cli(
            capsys, "simulate", "--rho", "0", "--lambda-c", "1e-5",
            "--p-over-sigma2-db", "200", "--trials", "500", "--seed", "3",
            "--beta-db-range=0:0:1", "--backend", "numpy",
        )
        assert code == 0
        _, data = parse_csv(out)
        assert float(data[0][2]) == 0.0

    def test_sample_dump(self, capsys, tmp_path):
        dump = tmp_path / "samples.txt"
        code, _ = run_cli(
            capsys, "simulate", "--trials", "50", "--seed", "9",
            "--p-over-sigma2-db", "100", "--beta-db-range=0:0:1",
            "--backend", "numpy", "--dump-samples", str(dump),
            "--out", str(tmp_path / "o.csv"),
        )
        assert code == 0
        lines = dump.read_text().splitlines()
        comments = [ln for ln in lines if ln.startswith("#")]
        values = [ln for ln in lines if not ln.startswith("#")]
        assert len(values) == 50
        assert any("manifest" in ln for ln in comments)
        float(values[0])  # parses as a number (dB)


class TestDesignCommand:
    def test_noiseless_reference(self, capsys):
        code, out = run_cli(
            capsys, "design", "--epsilon", "0.1", "--beta-db", "0",
            "--alpha", "4", "--noiseless",
        )
        assert code == 0
        doc = json.loads(out)
        req = doc["requirement"]
        assert req["lambda_c_min_over_lambda_s"] == pytest.approx(14.137, abs=1e-3)
        assert req["kind"] == "necessary_and_sufficient"

    def test_half_target(self, capsys):
        code, out = run_cli(capsys, "design", "--epsilon", "0.5", "--noiseless")
        assert code == 0
        req = json.loads(out)["requirement"]
        assert req["lambda_c_min_over_lambda_s"] == pytest.approx(math.pi / 2.0, rel=1e-9)

    def test_noisy_bound(self, capsys):
        code, out = run_cli(
            capsys, "design", "--epsilon", "0.1", "--p-over-sigma2-db", "100",
        )
        assert code == 0
        req = json.loads(out)["requirement"]
        assert req["kind"] == "sufficient"
        assert req["noise_figure_of_merit"] > 0

    def test_two_step_plan(self, capsys):
        code, out = run_cli(
            capsys, "design", "--epsilon", "0.1", "--with-power", "--c", "0.1",
            "--noise-dbm", "-110",
        )
        assert code == 0
        req = json.loads(out)["requirement"]
        assert req["tx_power_w"] == pytest.approx(8.21e-5, rel=1e-2)
        assert req["design_c"] == 0.1
        # The rule as stated achieves a figure of merit of 1/c.
        assert req["noise_figure_of_merit"] == pytest.approx(10.0, rel=1e-9)


class TestCompareCommand:
    def test_explicit_outages(self, capsys):
        code, out = run_cli(
            capsys, "compare", "--outage-rayleigh", "0.1", "--outage-other", "0.05",
        )
        assert code == 0
        assert json.loads(out)["comparison"]["density_ratio"] == pytest.approx(19.0 / 9.0)

    def test_channel_comparison(self, capsys):
        code, out = run_cli(capsys, "compare", "--m", "2", "--lc-over-ls", "10")
        assert code == 0
        doc = json.loads(out)["comparison"]
        assert doc["density_ratio"] > 1.0
        assert 0.0 < doc["outage_other"] < doc["outage_rayleigh"] < 1.0


class TestFigureCommand:
    def test_fig8_trends(self, capsys, tmp_path):
        code, _ = run_cli(capsys, "figure", "fig8", "--outdir", str(tmp_path))
        assert code == 0
        header, data = parse_csv((tmp_path / "fig8.csv").read_text())
        assert header == ["m", "alpha", "lc_over_ls", "outage"]
        table = {}
        for m, alpha, ratio, outage in data:
            table[(int(m), float(alpha), float(ratio))] = float(outage)
        ratios = sorted({k[2] for k in table})
        # Outage falls with fading order and with the path-loss exponent.
        for alpha in (3.0, 4.0, 5.0):
            for r in ratios:
                assert table[(1, alpha, r)] > table[(2, alpha, r)] > table[(3, alpha, r)]
        for m in (1, 2, 3):
            for r in ratios:
                assert table[(m, 3.0, r)] > table[(m, 4.0, r)] > table[(m, 5.0, r)]
        # And falls as collectors densify.
        seq = [table[(1, 4.0, r)] for r in ratios]
        assert all(a > b for a, b in zip(seq, seq[1:]))

    def test_fig9_trends(self, capsys, tmp_path):
        code, _ = run_cli(capsys, "figure", "fig9", "--outdir", str(tmp_path))
        assert code == 0
        header, data = parse_csv((tmp_path / "fig9.csv").read_text())
        assert header == ["m", "alpha", "lc_over_ls", "density_ratio"]
        table = {(int(m), float(a), float(r)): float(v) for m, a, r, v in data}
        assert all(v > 1.0 for v in table.values())
        for (m, a, r), v in table.items():
            if m == 2:
                assert table[(3, a, r)] >= v

    def test_fig4_bound_dominates(self, capsys, tmp_path):
        code, _ = run_cli(capsys, "figure", "fig4", "--outdir", str(tmp_path))
        assert code == 0
        _, data = parse_csv((tmp_path / "fig4.csv").read_text())
        exact, bound = {}, {}
        for kind, db, ratio, outage in data:
            if kind == "exact":
                exact[(db, ratio)] = float(outage)
            elif kind == "bound":
                bound[(db, ratio)] = float(outage)
        assert exact.keys() == bound.keys()
        for key, v in exact.items():
            assert bound[key] >= v - 1e-12
        # The bound tightens as the power-to-noise ratio grows.
        for (db, ratio), v in exact.items():
            if db == "100.0":
                gap_low = bound[(db, ratio)] - v
                gap_high = bound[("120.0", ratio)] - exact[("120.0", ratio)]
                assert gap_high <= gap_low + 1e-12

    def test_fig5_power_monotone(self, capsys, tmp_path):
        code, _ = run_cli(capsys, "figure", "fig5", "--outdir", str(tmp_path))
        assert code == 0
        _, data = parse_csv((tmp_path / "fig5.csv").read_text())
        curves, floors, points = {}, {}, []
        for kind, lam, dbm, outage, c in data:
            if kind == "curve":
                curves.setdefault(float(lam), []).append((float(dbm), float(outage)))
            elif kind == "noiseless_floor":
                floors[float(lam)] = float(outage)
            else:
                points.append((float(lam), float(dbm), float(outage), float(c)))
        for lam, pts in curves.items():
            seq = [o for _, o in sorted(pts)]
            assert all(a >= b - 1e-12 for a, b in zip(seq, seq[1:]))
            assert seq[-1] >= floors[lam] - 1e-12
        # Design markers sit on the outage surface between floor and 1.
        for lam, dbm, outage, c in points:
            assert floors[lam] < outage < 1.0

    def test_fig3_sim_tracks_analytic(self, capsys, tmp_path):
        code, _ = run_cli(
            capsys, "figure", "fig3", "--outdir", str(tmp_path),
            "--trials", "4000", "--seed", "1", "--backend", "numpy",
        )
        assert code == 0
        header, data = parse_csv((tmp_path / "fig3.csv").read_text())
        assert header[:4] == ["kind", "lc_over_ls", "p_over_sigma2_db", "beta_db"]
        series = {}
        for row in data:
            key = (row[0], row[1], row[2])
            series.setdefault(key, []).append(float(row[5]))
        for (kind, ratio, db), outages in series.items():
            if kind == "analytic":
                sim = series[("simulation", ratio, db)]
                gap = max(abs(a - b) for a, b in zip(outages, sim))
                assert gap < 0.03  # 4000 trials

    def test_figure_writes_manifest(self, capsys, tmp_path):
        code, _ = run_cli(capsys, "figure", "fig9", "--outdir", str(tmp_path))
        assert code == 0
        m = manifest_of((tmp_path / "fig9.csv").read_text())
        assert m["subcommand"] == "figure fig9"
        assert m["seed"] == 42
