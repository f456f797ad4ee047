import csv
import io
import json
import math
import subprocess
import sys
from pathlib import Path

import pytest

from casimir_lab import asymptotics, cli
from casimir_lab.errors import ConvergenceError

from reference_data import TABLE_PLATES, TABLE_SPHERE

GOLDEN = Path(__file__).parent / "golden"


def run(*args):
    return cli.run(list(args))


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def num(v):
    return None if v == "" else float(v)


def test_auto_method_picks_low_temperature_formula():
    code, out, _ = run("force", "--separation", "1")
    assert code == 0
    (row,) = rows(out)
    assert row["method"] == "lowT"
    assert list(row) == cli.CSV_COLUMNS


def test_sphere_without_radius_is_usage_error():
    code, out, err = run("force", "--geometry", "sphere", "--separation", "1")
    assert code == 2 and out == "" and "radius" in err


@pytest.mark.parametrize("argv", [
    ["force"],
    ["force", "--separation", "x"],
    ["force", "--sweep", "1:2"],
    ["force", "--sweep", "1:2:0"],
    ["force", "--separation", "1", "--material", "dielectric"],
    ["force", "--separation", "1", "--order", "3"],
    ["table", "3"],
    ["bogus"],
])
def test_usage_errors(argv):
    assert run(*argv)[0] == 2


def test_drude_refused():
    code, out, err = run("force", "--separation", "1", "--material", "drude", "--gamma-ev", "0.05")
    assert code == 3 and out == ""
    assert "zero-frequency" in err and "indeterminate" in err


def test_touching_surfaces_refused():
    code, _, err = run("roughness", "--separation", "1", "--profile", "two-point:1000")
    assert code == 3 and "touch" in err


def test_convergence_failure_exit_code(monkeypatch):
    def fail(*args, **kwargs):
        raise ConvergenceError("no", achieved=1e-3, requested=1e-9, terms=10)

    monkeypatch.setattr(asymptotics, "total_force", fail)
    assert run("force", "--separation", "1")[0] == 4


@pytest.mark.parametrize("geometry", ["plates", "sphere"])
def test_numeric_and_exact_agree_within_printed_tolerance(geometry):
    extra = ["--geometry", geometry, "--radius-um", "1000"]
    seps = "0.5,1,3,6,10"
    exact = rows(run("force", "--separation", seps, "--method", "exact", *extra)[1])
    numeric = rows(run("force", "--separation", seps, "--method", "numeric", *extra)[1])
    for e, n in zip(exact, numeric):
        diff = abs(float(e["dF_par"]) + float(e["dF_perp"]) - float(n["dF_par"]) - float(n["dF_perp"]))
        # plus the rounding to 6 significant digits of the printed values
        rounding = 2e-6 * (abs(float(e["dF_par"])) + abs(float(e["dF_perp"])))
        assert diff <= float(e["tol_est"]) + float(n["tol_est"]) + rounding, e["a_um"]


def test_asymptotic_tolerance_covers_distance_to_numeric():
    for sep in ("2", "4", "8"):
        method = "lowT" if sep == "2" else "highT"
        a = rows(run("force", "--separation", sep, "--method", method)[1])[0]
        n = rows(run("force", "--separation", sep, "--method", "numeric")[1])[0]
        diff = abs(float(a["F_total"]) - float(n["F_total"]))
        assert diff <= float(a["tol_est"]) + 1e-5 * abs(float(n["F_total"]))


def test_order_flag():
    (row,) = rows(run("force", "--separation", "3", "--method", "exact", "--order", "1")[1])
    assert float(row["dF_order2"]) == 0.0
    (full,) = rows(run("force", "--separation", "3", "--method", "exact")[1])
    assert float(full["dF_order2"]) != 0.0


@pytest.mark.parametrize("which,a_um,expected", [
    (1, 0.9, ("1.42e-03", "1.42e-03", "")),
    (2, 7.0, ("2.215", "", "2.214")),
    (1, 5.0, ("0.5630", "", "0.5349")),
])
def test_table_rows(which, a_um, expected):
    code, out, _ = run("table", str(which))
    assert code == 0
    row = next(r for r in rows(out) if float(r["a_um"]) == a_um)
    assert (row["k_exact"], row["k_lowT"], row["k_highT"]) == expected


@pytest.mark.parametrize("which,table", [(1, TABLE_PLATES), (2, TABLE_SPHERE)])
def test_table_blanks_match_reference_layout(which, table):
    for row in rows(run("table", str(which))[1]):
        ref = table[float(row["a_um"])]
        for value, expected in zip((row["k_exact"], row["k_lowT"], row["k_highT"]), ref):
            assert (value == "") == (expected is None)


@pytest.mark.parametrize("name", sorted(p.name for p in GOLDEN.glob("*.csv")))
def test_golden_files(name):
    golden = rows((GOLDEN / name).read_text())
    commands = {
        "table1.csv": ["table", "1"],
        "table2.csv": ["table", "2"],
        "force_plates_exact.csv": ["force", "--separation", "0.3,1,3,5,8", "--method", "exact"],
        "force_sphere_auto.csv": ["force", "--geometry", "sphere", "--radius-um", "1000",
                                  "--separation", "0.5,2,4,6,10", "--method", "auto"],
        "force_dielectric_numeric.csv": ["force", "--material", "dielectric", "--eps0", "3",
                                         "--separation", "0.2,1,4", "--method", "numeric"],
    }
    code, out, _ = run(*commands[name])
    assert code == 0
    fresh = rows(out)
    assert len(fresh) == len(golden)
    for g, f in zip(golden, fresh):
        assert g.keys() == f.keys()
        for key in g:
            if key == "method":
                assert g[key] == f[key]
            elif key == "tol_est":
                # an error estimate; only its magnitude is meaningful
                assert (g[key] == "") == (f[key] == "")
            elif g[key] == "":
                assert f[key] == ""
            else:
                assert math.isclose(float(g[key]), float(f[key]), rel_tol=1e-5), (name, key)


def test_output_is_deterministic():
    argv = ["force", "--sweep", "0.5:6:4:log", "--method", "numeric"]
    assert run(*argv) == run(*argv)


def test_json_and_csv_carry_identical_values():
    argv = ["force", "--separation", "0.7,4", "--method", "exact"]
    as_csv = rows(run(*argv)[1])
    as_json = json.loads(run(*argv, "--output", "json")[1])
    for c, j in zip(as_csv, as_json):
        for key in cli.CSV_COLUMNS:
            if isinstance(j[key], str):
                assert c[key] == j[key]
            else:
                assert num(c[key]) == j[key]


def test_sweep_is_ordered_and_matches_serial_evaluation(monkeypatch):
    monkeypatch.setenv("CASIMIR_LAB_THREADS", "4")
    code, out, _ = run("sweep", "--sweep", "1:9:5", "--method", "exact")
    assert code == 0
    got = rows(out)
    assert [float(r["a_um"]) for r in got] == [1, 3, 5, 7, 9]
    serial = rows(run("force", "--separation", "1,3,5,7,9", "--method", "exact")[1])
    assert got == serial
    log = rows(run("sweep", "--sweep", "1:100:3:log", "--method", "highT")[1])
    assert [float(r["a_um"]) for r in log] == [1, 10, 100]


def test_sweep_requires_range():
    assert run("sweep", "--separation", "1")[0] == 2


def test_config_file_and_override(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# aluminium lens\ngeometry = sphere\nradius-um = 500\nseparation = 2\nmethod=exact\n")
    code, out, _ = run("force", "--config", str(cfg))
    assert code == 0
    (row,) = rows(out)
    assert row["method"] == "exact" and float(row["a_um"]) == 2
    (over,) = rows(run("force", "--config", str(cfg), "--separation", "3")[1])
    assert float(over["a_um"]) == 3
    cfg.write_text("colour = red\n")
    assert run("force", "--config", str(cfg))[0] == 2
    assert run("force", "--config", str(tmp_path / "missing.cfg"))[0] == 2


def test_limits_reports():
    code, out, _ = run("limits", "--material", "drude", "--gamma-ev", "0.05", "--separation", "1")
    assert code == 0 and "perp_limit: INDETERMINATE" in out
    assert "classification: DrudeIndeterminate" in out
    rep = json.loads(run("limits", "--material", "plasma", "--output", "json")[1])
    assert rep["classification"] == "PlasmaWellPosed" and rep["q0_equals_k0"] is False
    assert 0 < rep["perp_limit"] < rep["par_limit"]
    rep = json.loads(run("limits", "--material", "dielectric", "--eps0", "3", "--output", "json",
                         "--separation", "1", "--k-perp", "1e6")[1])
    assert rep["par_limit"] == pytest.approx(1 / (4 - math.exp(-2)))


def test_roughness_command():
    (flat,) = rows(run("roughness", "--separation", "2", "--profile", "flat")[1])
    assert float(flat["enhancement"]) == 1.0 and flat["formula_used"] == "lowT"
    (two,) = rows(run("roughness", "--separation", "1", "--profile", "two-point:100", "--material", "ideal",
                      "--temperature", "0", "--method", "exact")[1])
    assert float(two["enhancement"]) == pytest.approx(1.1036, abs=1e-4)
    (sine,) = rows(run("roughness", "--separation", "1", "--profile", "sine:50:5000", "--material", "ideal",
                       "--temperature", "0", "--method", "exact")[1])
    assert float(sine["enhancement"]) == pytest.approx(1.0125, abs=1e-4)
    assert run("roughness", "--separation", "1")[0] == 2


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "casimir_lab", "force", "--separation", "1",
                           "--material", "drude", "--gamma-ev", "0.05"], capture_output=True, text=True)
    assert proc.returncode == 3 and "zero-frequency" in proc.stderr
    proc = subprocess.run([sys.executable, "-m", "casimir_lab", "table", "2"], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.splitlines()[0] == "a_um,k_exact,k_lowT,k_highT"
