import json
import subprocess
import sys


def run_cli(*args):
    proc = subprocess.run([sys.executable, "-m", "dyk3.cli", *args],
                          capture_output=True, text=True, timeout=600)
    return proc


def jsonl(stdout):
    return [json.loads(line) for line in stdout.strip().splitlines()]


def test_lattice_disc_group():
    p = run_cli("lattice", "--fixture", "lambda24", "--op", "disc-group")
    assert p.returncode == 0
    recs = jsonl(p.stdout)
    assert recs[-1]["disc_group"] == "2,2,6"
    assert "fixture_provenance" in recs[-1]
    assert recs[-1]["version"]


def test_weil_report_ends_with_bound():
    p = run_cli("weil", "--surface", "drell-yan", "--primes", "31,71")
    assert p.returncode == 0
    recs = jsonl(p.stdout)
    assert recs[-1]["picard_bound"] == 19
    assert recs[0]["rho"] == 20
    assert recs[0]["square_class"] == 3
    assert recs[1]["square_class"] == 35


def test_count_matches_prediction():
    p = run_cli("count", "--surface", "drell-yan", "-p", "31", "-n", "1")
    assert p.returncode == 0
    rec = jsonl(p.stdout)[0]
    assert rec["count_smooth"] == 1536
    assert rec["agree"] is True


def test_si_verify_prime():
    p = run_cli("si-verify", "--prime", "31", "--ext", "1", "2")
    assert p.returncode == 0
    recs = jsonl(p.stdout)
    assert all(r["verdict"] for r in recs)
    assert recs[0]["prediction"] == 1536
    assert recs[1]["prediction"] == 942936


def test_si_verify_system():
    p = run_cli("si-verify", "--system")
    assert p.returncode == 0
    assert jsonl(p.stdout)[0]["ok"] is True


def test_tate_table():
    p = run_cli("tate", "--model", "e2")
    assert p.returncode == 0
    recs = jsonl(p.stdout)
    assert recs[-1]["total_vdelta"] == 24
    kinds = sorted(r["kodaira"] for r in recs[:-1])
    assert "I10" in kinds and kinds.count("I2") == 3


def test_height_report():
    p = run_cli("height", "--model", "e2")
    assert p.returncode == 0
    rec = jsonl(p.stdout)[0]
    assert rec["height_P3"] == "3/20"
    assert rec["disc_NS"] == "24"
    assert rec["torsion_two_divisible"] is False


def test_ss_scan_csv():
    p = run_cli("--format", "csv", "ss-scan", "--from", "7", "--to", "400")
    assert p.returncode == 0
    lines = p.stdout.strip().splitlines()
    assert lines[0] == "prime,supersingular,witness_root"
    primes = [int(l.split(",")[0]) for l in lines[1:]]
    assert primes == [13, 29, 41, 113, 337]


def test_kodaira_partial():
    p = run_cli("kodaira", "--fixture", "lemma_partial", "--max-n", "10")
    assert p.returncode == 0
    rec = jsonl(p.stdout)[0]
    assert rec["by_type"]["I10"] >= 1
    assert rec["by_type"]["E8"] >= 2


def test_unknown_fixture_exit_code():
    p = run_cli("lattice", "--fixture", "nonexistent", "--op", "rank-det")
    assert p.returncode == 3


def test_unknown_subcommand_exit_code():
    p = run_cli("frobnicate")
    assert p.returncode == 2


def test_determinism():
    a = run_cli("count", "-p", "11", "-n", "1", "2").stdout
    b = run_cli("count", "-p", "11", "-n", "1", "2").stdout
    assert a == b


def test_out_file(tmp_path):
    dest = tmp_path / "report.jsonl"
    p = run_cli("--out", str(dest), "height", "--model", "e2")
    assert p.returncode == 0
    assert json.loads(dest.read_text().splitlines()[0])["height_P3"] == "3/20"
