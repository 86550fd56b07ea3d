import json

import numpy as np
import pytest

from wcslab.cli import CSV_COLUMNS, main

SYMBOL_FILE = """
order = -1
dim = 1
grid = 32

[component degree=-1]
plus = 1
minus = 1
"""

CONFIG_FILE = """
[surface k3ish]
type = generic
sigma = -16
vol = 1.0
r_inf = 1.0
"""


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


class TestCatalog:
    def test_default_listing(self, capsys):
        code, out, _ = run(capsys, "catalog")
        rows = json.loads(out)
        assert code == 0
        assert [r["surface"] for r in rows] == ["t4", "cp2", "cp1xcp1", "generic"]
        assert all(r["schema_version"] == 1 for r in rows)

    def test_with_product_params(self, capsys):
        code, out, _ = run(capsys, "catalog", "--a", "2", "--b", "3")
        rows = json.loads(out)
        entry = next(r for r in rows if r["surface"] == "cp1xcp1")
        assert entry["params"] == {"a": 2, "b": 3}
        assert entry["volume"] == pytest.approx((8 * np.pi) * (12 * np.pi))


class TestDecide:
    def test_torus_sweep(self, capsys):
        code, out, _ = run(capsys, "decide", "--surface", "t4", "--k-range", "-3..3")
        rows = json.loads(out)
        assert code == 0
        verdicts = {r["k"]: r["verdict"] for r in rows}
        assert verdicts[0] == "INCONCLUSIVE"
        assert all(v == "INFINITE_ORDER" for k, v in verdicts.items() if k != 0)

    def test_cp2_sweep(self, capsys):
        code, out, _ = run(capsys, "decide", "--surface", "cp2", "--k-range", "-2..2")
        verdicts = {r["k"]: r["verdict"] for r in json.loads(out)}
        assert verdicts == {
            -2: "INFINITE_ORDER",
            -1: "INCONCLUSIVE",
            0: "INCONCLUSIVE",
            1: "INCONCLUSIVE",
            2: "INFINITE_ORDER",
        }

    def test_rows_sorted_by_k(self, capsys):
        code, out, _ = run(capsys, "decide", "--surface", "t4", "--k-range", "-2..2")
        ks = [r["k"] for r in json.loads(out)]
        assert ks == sorted(ks)

    def test_generic_bounds_small_k(self, capsys):
        code, out, _ = run(
            capsys, "decide", "--surface", "generic", "--sigma", "-16",
            "--vol", "1", "--r-inf", "1", "--k", "1",
        )
        row = json.loads(out)[0]
        assert code == 0
        assert row["verdict"] == "INCONCLUSIVE"
        assert row["integral"] is None


class TestErrors:
    def test_unknown_surface_is_usage_error(self, capsys):
        code, _, err = run(capsys, "decide", "--surface", "nope", "--k", "1")
        assert code == 2 and "unknown surface" in err

    def test_product_without_params(self, capsys):
        code, _, err = run(capsys, "decide", "--surface", "cp1xcp1", "--k", "1")
        assert code == 2 and "--a and --b" in err

    def test_generic_without_params(self, capsys):
        code, _, err = run(capsys, "decide", "--surface", "generic", "--k", "1")
        assert code == 2

    def test_missing_k(self, capsys):
        code, _, _ = run(capsys, "decide", "--surface", "t4")
        assert code == 2

    def test_both_k_and_range_rejected(self, capsys):
        with pytest.raises(SystemExit) as exc:
            run(capsys, "decide", "--surface", "t4", "--k", "1", "--k-range", "1..2")
        assert exc.value.code == 2

    def test_bad_k_range(self, capsys):
        code, _, err = run(capsys, "decide", "--surface", "t4", "--k-range", "3..1")
        assert code == 2

    def test_density_on_bounds_only_is_computation_error(self, capsys):
        code, _, err = run(
            capsys, "density", "--surface", "generic", "--sigma", "-16",
            "--vol", "1", "--r-inf", "1", "--k", "1",
        )
        assert code == 3 and "bounds-only" in err

    def test_missing_files(self, capsys, tmp_path):
        code, _, _ = run(capsys, "psdo", "--symbol-file", str(tmp_path / "nope.txt"))
        assert code == 2
        code, _, _ = run(
            capsys, "decide", "--surface", "t4", "--k", "1",
            "--config", str(tmp_path / "nope.cfg"),
        )
        assert code == 2


class TestOutputFormats:
    def test_csv_header(self, capsys):
        code, out, _ = run(
            capsys, "density", "--surface", "t4", "--k", "1", "--format", "csv"
        )
        lines = out.strip().splitlines()
        assert lines[0] == ",".join(CSV_COLUMNS)
        assert lines[1].startswith("t4,1,")

    def test_density_values(self, capsys):
        code, out, _ = run(capsys, "density", "--surface", "t4", "--k", "2")
        row = json.loads(out)[0]
        assert row["density_closed"] == pytest.approx(6.4 * 64)
        assert row["route_agreement"] <= 1e-8

    def test_deterministic_json(self, capsys, tmp_path):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        run(capsys, "integral", "--surface", "cp2", "--k-range", "-2..2", "--out", str(a))
        run(capsys, "integral", "--surface", "cp2", "--k-range", "-2..2", "--out", str(b))
        assert a.read_bytes() == b.read_bytes()

    def test_config_file_surface(self, capsys, tmp_path):
        cfg = tmp_path / "surfaces.cfg"
        cfg.write_text(CONFIG_FILE)
        code, out, _ = run(
            capsys, "decide", "--surface", "k3ish", "--k", "5", "--config", str(cfg)
        )
        row = json.loads(out)[0]
        assert code == 0
        assert row["verdict"] == "INFINITE_ORDER"


class TestPsdoCommand:
    def test_report(self, capsys, tmp_path):
        path = tmp_path / "sym.txt"
        path.write_text(SYMBOL_FILE)
        code, out, _ = run(
            capsys, "psdo", "--symbol-file", str(path), "--trials", "3"
        )
        report = json.loads(out)[0]
        assert code == 0
        assert report["residue"][0] == pytest.approx(2.0, abs=1e-10)
        assert report["commutator_max_violation"] <= 1e-8
        assert all(v <= 1e-10 for v in report["parametrix_defect_sup"].values())

    def test_parse_error_exit_code(self, capsys, tmp_path):
        path = tmp_path / "bad.txt"
        path.write_text("order = 0\n")
        code, _, err = run(capsys, "psdo", "--symbol-file", str(path))
        assert code == 2


class TestVerifyProp22:
    def test_unit_charge(self, capsys):
        code, out, _ = run(capsys, "verify-prop22", "--charge", "1", "--grid", "32")
        report = json.loads(out)[0]
        assert code == 0
        assert report["family_pairing"] == pytest.approx(2.0 * np.pi, rel=1e-6)
        assert report["pass"] is True

    def test_zero_charge(self, capsys):
        code, out, _ = run(capsys, "verify-prop22", "--charge", "0", "--grid", "32")
        assert code == 0
        assert json.loads(out)[0]["relative_error"] == 0.0

    def test_small_grid_usage_error(self, capsys):
        code, _, _ = run(capsys, "verify-prop22", "--charge", "1", "--grid", "8")
        assert code == 2
