import json
import math

import pytest

from hetverify.cli import (
    EXIT_OK,
    EXIT_REJECT,
    EXIT_USAGE,
    UsageError,
    emit_plot_data,
    format_angle,
    main,
    parse_angle,
    parse_config,
    run_and_report,
)


class TestAngleParsing:
    @pytest.mark.parametrize("text,expected", [
        ("pi/2", math.pi / 2),
        ("pi/3", math.pi / 3),
        ("pi", math.pi),
        ("2pi/3", 2 * math.pi / 3),
        ("-pi/2", -math.pi / 2),
        ("0", 0.0),
        ("1.5", 1.5),
    ])
    def test_parse(self, text, expected):
        assert parse_angle(text) == pytest.approx(expected)

    def test_parse_garbage(self):
        with pytest.raises(UsageError):
            parse_angle("three")

    def test_format_roundtrip(self):
        for text in ("pi/2", "pi/3", "-pi/2", "pi"):
            assert format_angle(parse_angle(text)) == text


class TestParseConfig:
    def test_protocol3_defaults(self):
        config = parse_config(["protocol3", "--zeta", "pi/2",
                               "--threshold", "0.6"])
        assert config.command == "protocol3"
        assert config.parameters["zeta"] == pytest.approx(math.pi / 2)
        assert config.parameters["threshold"] == 0.6
        assert config.parameters["shots"] == 8192
        assert config.parameters["seed"] == 0

    def test_qkd_single(self):
        config = parse_config(["qkd-single", "--initial", "1",
                               "--zeta", "pi/3"])
        assert config.parameters["initial"] == "1"
        assert config.parameters["zeta"] == pytest.approx(math.pi / 3)

    def test_zero_copies_rejected(self):
        with pytest.raises(UsageError, match="N >= 1"):
            parse_config(["protocol1", "--copies", "0", "5"])

    def test_unknown_command_rejected(self):
        with pytest.raises(UsageError):
            parse_config(["protocol9"])

    def test_bad_probability_rejected(self):
        with pytest.raises(UsageError, match="probability"):
            parse_config(["protocol1", "--noise-1q", "1.5"])

    def test_bad_threshold_rejected(self):
        with pytest.raises(UsageError, match="threshold"):
            parse_config(["protocol3", "--threshold", "2"])

    def test_exact_flag_clears_shots(self):
        config = parse_config(["protocol1", "--exact"])
        assert config.parameters["shots"] is None


class TestRunAndReport:
    def test_protocol1_noiseless_exact(self, tmp_path):
        config = parse_config(["protocol1", "--exact", "--initial", "1",
                               "--copies", "5", "5",
                               "--output-dir", str(tmp_path)])
        bundle = run_and_report(config)
        assert bundle.exit_code == EXIT_OK
        plot = (tmp_path / "fidelity_vs_copy.txt").read_text().splitlines()
        assert len(plot) == 10
        assert all(line.endswith("1.000000") for line in plot)
        report = json.loads((tmp_path / "protocol1_report.json").read_text())
        fidelities = report["result"]["groups"][0]["copy_fidelities"]
        assert fidelities == pytest.approx([1.0] * 5, abs=1e-9)

    def test_protocol3_accept_exit_zero(self, tmp_path):
        config = parse_config(["protocol3", "--exact",
                               "--output-dir", str(tmp_path)])
        bundle = run_and_report(config)
        assert bundle.exit_code == EXIT_OK
        report = json.loads((tmp_path / "protocol3_report.json").read_text())
        assert report["result"]["verdict"] == "accept"

    def test_protocol3_noisy_reject_exit_two(self, tmp_path):
        argv = ["protocol3", "--exact", "--noise-1q", "0.3",
                "--noise-2q", "0.3", "--output-dir", str(tmp_path)]
        assert main(argv) == EXIT_REJECT

    def test_qkd_bell_csv_values(self, tmp_path):
        config = parse_config(["qkd-bell", "--exact",
                               "--output-dir", str(tmp_path)])
        bundle = run_and_report(config)
        assert bundle.exit_code == EXIT_OK
        lines = (tmp_path / "qkd-bell_table.csv").read_text().strip().splitlines()
        rows = [line.split(",") for line in lines[1:]]
        assert len(rows) == 4
        balanced = [float(r[1]) for r in rows]
        assert balanced == pytest.approx([0.75, 0.433013, 0.433013, 0.25],
                                         abs=1e-5)

    def test_json_report_roundtrips(self, tmp_path):
        config = parse_config(["qkd-single", "--exact",
                               "--output-dir", str(tmp_path)])
        bundle = run_and_report(config)
        on_disk = json.loads(
            (tmp_path / "qkd_single_report.json").read_text())
        assert on_disk["result"] == bundle.payload["result"]

    def test_deterministic_report_content(self, tmp_path):
        for sub in ("a", "b"):
            argv = ["protocol2", "--shots", "1024", "--seed", "3",
                    "--output-dir", str(tmp_path / sub)]
            assert main(argv) == EXIT_OK
        load = lambda sub: json.loads(
            (tmp_path / sub / "protocol2_report.json").read_text())["result"]
        assert load("a") == load("b")

    def test_tomography_command(self, tmp_path):
        from hetverify.circuits import Circuit, u3

        path = tmp_path / "circuit.json"
        Circuit(2, [u3(0, math.pi / 2, 0, math.pi)]).save(path)
        config = parse_config(["tomography", str(path), "--exact",
                               "--output-dir", str(tmp_path)])
        bundle = run_and_report(config)
        ex = bundle.payload["result"]["expectations"]
        assert ex["XI"] == pytest.approx(1.0)


class TestMainExitCodes:
    def test_usage_error_exit_one(self, capsys):
        assert main(["protocol1", "--copies", "0", "5"]) == EXIT_USAGE
        assert "error" in capsys.readouterr().err

    def test_unknown_command_exit_one(self, capsys):
        assert main(["frobnicate"]) == EXIT_USAGE

    def test_success_exit_zero(self, tmp_path):
        assert main(["protocol1", "--exact", "--copies", "1", "1",
                     "--output-dir", str(tmp_path)]) == EXIT_OK


class TestPlotData:
    def test_rows_and_precision(self, tmp_path):
        path = tmp_path / "series.txt"
        emit_plot_data([(1, 1.0), (2, 0.98765432)], path)
        assert path.read_text() == "1 1.000000\n2 0.987654\n"

    def test_empty_series_rejected(self, tmp_path):
        with pytest.raises(ValueError, match="empty"):
            emit_plot_data([], tmp_path / "series.txt")
