import json
import shutil
import subprocess

import pytest

from conftest import DATA
from epaffine.cli import RunConfig, main, run


def call(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out.splitlines()


def test_wedge_dim(capsys):
    assert call(capsys, "wedge-dim", "--r", "7", "--exponents", "0,0,0,0,0,1,2,4", "--m", "3") == (0, ["11"])


def test_spin_dim(capsys):
    assert call(capsys, "spin-dim", "--kind", "Deven", "--r", "5", "--t", "0,0,1,1,1,2,2,2") == (0, ["24"])


def test_direct(capsys):
    code, out = call(capsys, "direct", "--group", str(DATA / "gl3_natural.grp"))
    assert code == 0 and out[0].startswith("EP\t")
    code, out = call(capsys, "direct", "--group", str(DATA / "c15_natural.grp"))
    assert code == 0 and out[0].startswith("notEP\t")
    code, out = call(capsys, "direct", "--group", str(DATA / "gl3_natural.grp"), "--tag", "wedge2")
    assert code == 0 and out[0].startswith("EP\t")


def test_fvalue(capsys):
    code, out = call(capsys, "fvalue", "--dataset", str(DATA / "l7_wedge3.mxl"))
    assert code == 0
    assert "f = 11811" in out and out[-1].startswith("notEP")
    assert [ln for ln in out if ln.startswith("P3\t")] == ["P3\tsize=11811\tfix_dim=1\tcontribution=11811"]


def test_bounds(capsys):
    code, out = call(capsys, "bound", "--alpha", "612624", "--d", "40")
    assert code == 0 and out[0].startswith("notEP\tlhs=" + str((2 ** 20 - 1) * 612624))
    code, out = call(capsys, "refined-bound", "--d", "64", "--part", "10:240862567876011",
                     "--part", "16:166862538433514")
    assert code == 0 and out[0].startswith("notEP\tsum=11181738863177499243")
    code, out = call(capsys, "bound", "--alpha", str(2 ** 40), "--d", "40")
    assert code == 0 and out[0].startswith("inconclusive")


def test_max_wedge(capsys):
    code, out = call(capsys, "max-wedge", "--k", "8", "--r", "7")
    assert code == 0 and out[0] == "11"
    assert "witness\t0,0,0,0,0,1,2,4" in out


def test_tiny_maximals(capsys):
    code, out = call(capsys, "tiny-maximals", "--group", str(DATA / "c15_natural.grp"))
    assert code == 0 and out[-1] == "total = 2"


def test_audit(capsys):
    code, out = call(capsys, "audit", "--registry", str(DATA / "table12.json"))
    # the k = 9 wedge-cube row does not meet its uniform cap; see README
    assert code == 2
    assert out[-1] == "# 31 cases, 1 discrepancies, 7 data-required"
    assert sum(ln.split("\t")[1] == "notEP" for ln in out[:-1]) == 26


def test_audit_exit_codes(tmp_path, capsys):
    reg = json.loads((DATA / "table12.json").read_text())
    ok = [r for r in reg if r["id"] not in ("L9(2)-wedge3",)]
    p = tmp_path / "reg.json"
    p.write_text(json.dumps(ok))
    assert call(capsys, "audit", "--registry", str(p))[0] == 0
    assert call(capsys, "audit", "--registry", str(p), "--require-data")[0] == 3
    # the L7 row needs its dataset next to the registry
    p.write_text(json.dumps([r for r in ok if r["route"] != "fvalue"]))
    assert call(capsys, "audit", "--registry", str(p), "--require-data")[0] == 0
    p.write_text(json.dumps([{"id": "x", "d": 8, "socle": "s", "module": "m", "route": "fvalue"}]))
    assert call(capsys, "audit", "--registry", str(p))[0] == 3


@pytest.mark.parametrize("argv", [
    ["wedge-dim", "--r", "7", "--exponents", "0,x", "--m", "3"],
    ["wedge-dim", "--r", "8", "--exponents", "0,1,2", "--m", "3"],
    ["refined-bound", "--d", "8", "--part", "3"],
    ["direct", "--group", "no/such/file.grp"],
    ["direct", "--group", str(DATA / "parabolic4_natural.grp")],
    ["audit", "--registry", str(DATA / "l7_wedge3.mxl")],
    ["wedge-dim", "--r", "7", "--exponents", "1,2,4", "--cap-dim", "0"],
])
def test_bad_input_exits_1(argv, capsys):
    assert main(argv) == 1


def test_argparse_errors_exit_1():
    for argv in (["nosuch"], ["bound", "--alpha", "ten", "--d", "4"], []):
        with pytest.raises(SystemExit) as exc:
            main(argv)
        assert exc.value.code == 1


def test_cap_exceeded_exits_4(capsys):
    code, out = call(capsys, "direct", "--group", str(DATA / "gl4_natural.grp"), "--cap-dim", "3")
    assert code == 4 and out[0].startswith("error")
    code, _ = call(capsys, "tiny-maximals", "--group", str(DATA / "gl4_natural.grp"), "--cap-order", "100")
    assert code == 4


def test_integrity_error_exits_2(tmp_path, capsys):
    obj = json.loads((DATA / "l7_wedge3.mxl").read_text())
    obj["classes"][2]["class_size"] = str(2 ** 40)  # P3, so f > 2^35 - 1
    p = tmp_path / "bad.mxl"
    p.write_text(json.dumps(obj))
    assert call(capsys, "fvalue", "--dataset", str(p))[0] == 2


def test_report_is_json_and_byte_identical(tmp_path, capsys):
    for argv in (["audit", "--registry", str(DATA / "table12.json")],
                 ["direct", "--group", str(DATA / "c15_natural.grp"), "--seed", "5"],
                 ["fvalue", "--dataset", str(DATA / "l7_wedge3.mxl")]):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        main(argv + ["--report", str(a)])
        main(argv + ["--report", str(b)])
        capsys.readouterr()
        assert a.read_bytes() == b.read_bytes()
        rep = json.loads(a.read_text())
        assert rep["subcommand"] == argv[0]


def test_run_config_validation():
    with pytest.raises(ValueError):
        RunConfig("direct", cap_dim=0)
    code, rep = run(RunConfig("wedge-dim", {"r": 7, "exponents": "0,0,1,2,3,4,5,6", "m": 3}), out=open("/dev/null", "w"))
    assert code == 0 and rep["fixed_dim"] == 8


@pytest.mark.skipif(shutil.which("ep") is None, reason="console script not installed")
def test_console_script():
    res = subprocess.run(["ep", "wedge-dim", "--r", "7", "--exponents", "0,0,0,0,0,3,5,6"],
                         capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout == "11\n"
