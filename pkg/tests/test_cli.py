"""Command-line contract: output shapes, determinism, exit codes, batch."""

from __future__ import annotations

import json
from fractions import Fraction

import pytest

from bivalued_auctions import analysis
from bivalued_auctions.cli import main
from bivalued_auctions.reports import CSV_COLUMNS

HEADER = ",".join(CSV_COLUMNS)


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestSweepCommand:
    def test_csv_shape(self, capsys):
        code, out, err = run_cli(capsys, "sweep", "--n", "8", "--h", "2", "--auction", "derand")
        assert code == 0 and err == ""
        lines = out.splitlines()
        assert lines[0] == HEADER
        assert lines[1] == "sweep,8,2,derand,5,10,6,4,1.000000000,,,,,,"

    def test_json_carries_witness_and_map(self, capsys):
        code, out, _ = run_cli(
            capsys, "sweep", "--n", "6", "--h", "2", "--auction", "derand", "--format", "json"
        )
        assert code == 0
        doc = json.loads(out)
        assert doc["columns"] == list(CSV_COLUMNS)
        row = doc["rows"][0]
        assert row["witness"] == "LHHHLH"  # least worst-loss vector, lows-first order
        assert row["loss"] == 4
        assert set(row["per_nh_worst"]) == {str(k) for k in range(7)}

    def test_random_auction_loss_is_exact_object(self, capsys):
        code, out, _ = run_cli(
            capsys, "sweep", "--n", "5", "--h", "3", "--auction", "random", "--format", "json"
        )
        assert code == 0
        row = json.loads(out)["rows"][0]
        assert set(row["loss"]) == {"terms", "decimal"}

    def test_limit_flag(self, capsys):
        code, out, err = run_cli(
            capsys, "sweep", "--n", "6", "--h", "2", "--auction", "derand", "--limit", "5"
        )
        assert code == 1
        assert "exceeds enumeration limit" in err


class TestOtherCommands:
    def test_demo_dop(self, capsys):
        code, out, _ = run_cli(capsys, "demo-dop", "--h", "10", "--format", "json")
        assert code == 0
        row = json.loads(out)["rows"][0]
        assert row["ratio"] == {"num": "10", "den": "1", "decimal": "10.000000000"}
        assert row["n"] == 100 and row["revenue"] == 10

    def test_dist_d_identities(self, capsys):
        code, out, _ = run_cli(capsys, "dist-d", "--n", "100", "--h", "10", "--format", "json")
        assert code == 0
        row = json.loads(out)["rows"][0]
        assert row["exact_e_dop"]["num"] == "100"
        assert row["exact_e_dop"]["den"] == "1"
        gap = Fraction(int(row["gap_exact_num"]), int(row["gap_exact_den"]))
        assert gap == analysis.lower_bound_gap(100, 10)
        assert row["loss"]["decimal"].startswith("11.8678")

    def test_expectation_table(self, capsys):
        code, out, _ = run_cli(capsys, "expectation", "--n", "4", "--h", "2")
        assert code == 0
        lines = out.splitlines()
        assert len(lines) == 6  # header + k = 0..4
        assert lines[1].startswith("expectation,4,2,random,0,4,4.000000000,0.000000000")

    def test_expectation_single_vector(self, capsys):
        code, out, _ = run_cli(
            capsys, "expectation", "--n", "4", "--h", "2", "--bids", "HHHH", "--format", "json"
        )
        assert code == 0
        rows = json.loads(out)["rows"]
        assert len(rows) == 1
        assert rows[0]["n_h"] == 4
        assert rows[0]["bids"] == "HHHH"

    def test_expectation_rejects_bad_bids(self, capsys):
        code, _, err = run_cli(capsys, "expectation", "--n", "4", "--h", "2", "--bids", "HHXH")
        assert code == 1 and "error" in err

    def test_block_check(self, capsys):
        code, out, _ = run_cli(capsys, "block-check", "--n", "8", "--h", "2")
        assert code == 0
        assert out.splitlines()[1] == "block-check,8,2,derand,,,,,,,256,,,,"

    def test_mc_rows(self, capsys):
        code, out, _ = run_cli(
            capsys, "mc", "--n", "12", "--h", "2", "--auction", "derand",
            "--samples", "2000", "--seed", "3", "--format", "json",
        )
        assert code == 0
        rows = json.loads(out)["rows"]
        assert [r["auction"] for r in rows] == ["derand", "opt"]
        assert rows[0]["samples"] == 2000 and rows[0]["seed"] == 3
        assert rows[0]["exact_e_dop"]["num"] == "12"


class TestDeterminism:
    def test_mc_byte_identical(self, capsys):
        args = ("mc", "--n", "40", "--h", "2", "--auction", "random",
                "--samples", "20000", "--seed", "7")
        _, first, _ = run_cli(capsys, *args)
        _, second, _ = run_cli(capsys, *args)
        assert first == second
        assert first.splitlines()[1].split(",")[11] != ""

    def test_sweep_byte_identical_across_thread_counts(self, capsys):
        base = ("sweep", "--n", "12", "--h", "3", "--auction", "derand")
        _, first, _ = run_cli(capsys, *base, "--threads", "1")
        _, second, _ = run_cli(capsys, *base, "--threads", "4")
        assert first == second


class TestExitCodes:
    def test_usage_error_is_one(self, capsys):
        with pytest.raises(SystemExit) as info:
            main(["sweep", "--n", "4", "--h", "2", "--auction", "nope"])
        assert info.value.code == 1
        with pytest.raises(SystemExit) as info:
            main(["unknown-command"])
        assert info.value.code == 1
        with pytest.raises(SystemExit) as info:
            main([])
        assert info.value.code == 1

    def test_invalid_values_are_one(self, capsys):
        assert main(["dist-d", "--n", "10", "--h", "3"]) == 1
        with pytest.raises(SystemExit) as info:
            main(["mc", "--n", "4", "--h", "2", "--auction", "derand",
                  "--samples", "0", "--seed", "1"])
        assert info.value.code == 1

    def test_perturbed_identity_is_two(self, capsys, monkeypatch):
        monkeypatch.setattr(analysis, "exact_e_dop_under_d", lambda n, h: Fraction(1))
        code, out, err = run_cli(capsys, "dist-d", "--n", "4", "--h", "2")
        assert code == 2
        assert "identity violated" in err
        assert out == ""

    def test_block_failure_is_two(self, capsys, monkeypatch):
        from bivalued_auctions.analysis import BlockViolation
        from bivalued_auctions import AuctionParams, BidVector

        def broken(params, limit):
            b = BidVector(params, 1)
            return 1, (b, BlockViolation("high", 0, (1,), 1, 0, False))

        monkeypatch.setattr(analysis, "block_structure_sweep", broken)
        code, out, err = run_cli(capsys, "block-check", "--n", "4", "--h", "2")
        assert code == 2
        assert "derand-block-structure" in err


class TestOutputFile:
    def test_writes_file(self, capsys, tmp_path):
        target = tmp_path / "report.csv"
        code, out, _ = run_cli(
            capsys, "demo-dop", "--h", "2", "--output", str(target)
        )
        assert code == 0
        assert out == ""
        assert target.read_text().splitlines()[0] == HEADER

    def test_unwritable_path_is_one(self, capsys, tmp_path):
        code, _, err = run_cli(
            capsys, "demo-dop", "--h", "2", "--output", str(tmp_path / "no" / "dir.csv")
        )
        assert code == 1 and "error" in err


class TestBatch:
    def write(self, tmp_path, payload):
        path = tmp_path / "config.json"
        path.write_text(json.dumps(payload))
        return str(path)

    def test_aggregates_rows(self, capsys, tmp_path):
        path = self.write(
            tmp_path,
            [
                {"command": "sweep", "n": 6, "h": 2, "auction": "derand"},
                {"command": "dist-d", "n": 8, "h": 2},
                {"command": "demo-dop", "h": 2},
            ],
        )
        code, out, _ = run_cli(capsys, "batch", path)
        assert code == 0
        lines = out.splitlines()
        assert len(lines) == 4
        assert lines[1].startswith("sweep,6,2,derand")
        assert lines[2].startswith("dist-d,8,2")
        assert lines[3].startswith("demo-dop,4,2")

    def test_empty_list(self, capsys, tmp_path):
        path = self.write(tmp_path, [])
        code, out, _ = run_cli(capsys, "batch", path)
        assert code == 0
        assert out == HEADER + "\n"

    def test_malformed_entry_fails_whole_batch(self, capsys, tmp_path):
        path = self.write(
            tmp_path,
            [
                {"command": "sweep", "n": 6, "h": 2, "auction": "derand"},
                {"command": "sweep", "h": 2, "auction": "derand"},
            ],
        )
        code, out, err = run_cli(capsys, "batch", path)
        assert code == 1
        assert out == ""  # fail fast, no partial output
        assert "entry 1" in err and "'n'" in err

    def test_unknown_field_named(self, capsys, tmp_path):
        path = self.write(tmp_path, [{"command": "dist-d", "n": 4, "h": 2, "sample": 5}])
        code, _, err = run_cli(capsys, "batch", path)
        assert code == 1
        assert "entry 0" in err and "sample" in err

    def test_unknown_command_named(self, capsys, tmp_path):
        path = self.write(tmp_path, [{"command": "swep", "n": 4, "h": 2}])
        code, _, err = run_cli(capsys, "batch", path)
        assert code == 1 and "entry 0" in err

    def test_parse_failure_names_line(self, capsys, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text('[{"command": "dist-d", "n": 4, "h": 2},]')
        code, _, err = run_cli(capsys, "batch", str(path))
        assert code == 1
        assert "parse failure at line" in err

    def test_missing_file_is_one(self, capsys, tmp_path):
        code, _, err = run_cli(capsys, "batch", str(tmp_path / "absent.json"))
        assert code == 1

    def test_divisibility_checked_upfront(self, capsys, tmp_path):
        path = self.write(tmp_path, [{"command": "dist-d", "n": 7, "h": 2}])
        code, _, err = run_cli(capsys, "batch", path)
        assert code == 1 and "divisible" in err

    def test_grid_losses_one_row_each(self, capsys, tmp_path):
        entries = [
            {"command": "sweep", "n": n, "h": h, "auction": "derand"}
            for n in (4, 5, 6)
            for h in (2, 3)
        ]
        path = self.write(tmp_path, entries)
        code, out, _ = run_cli(capsys, "batch", path)
        assert code == 0
        assert len(out.splitlines()) == 1 + len(entries)
