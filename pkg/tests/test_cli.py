from __future__ import annotations

import json
import os
import subprocess
import sys

import pytest

from svbounds import corpus
from svbounds.cache import CACHE_VERSION, Cache, cache_get, cache_key, cache_put
from svbounds.cli import InputError, RunConfig, main, run


def _run(argv, capsys):
    status = main(argv)
    out = capsys.readouterr().out
    return status, (json.loads(out) if out.strip() else None)


def test_bounds_certifies_torus_from_file(tmp_path, capsys):
    path = tmp_path / "torus.dcx"
    path.write_text(corpus.torus().dumps())
    status, rep = _run(["bounds", str(path)], capsys)
    assert status == 0
    assert rep["result"]["certificates"][0]["value"] == "2"
    assert rep["result"]["ledgers"]["isv"]["lower"] == "2"
    assert rep["schema_version"] and rep["tool_version"]


def test_stable_command(capsys):
    status, rep = _run(["stable", "@torus", "--depth", "2"], capsys)
    assert status == 0
    assert [s["ratio"] for s in rep["result"]["stable"]] == ["2", "1", "1/2"]
    assert rep["result"]["ledgers"]["stisv"]["upper"] == "1/2"


def test_hyp_command(capsys):
    status, rep = _run(["hyp", "--n", "4"], capsys)
    assert status == 0
    assert rep["result"]["k_n"] == 5
    assert rep["result"]["alpha_n"].startswith("1.230959")


def test_genus2_with_known_volume(capsys):
    status, rep = _run(["bounds", "@genus2", "--sv", "4"], capsys)
    isv = rep["result"]["ledgers"]["isv"]
    assert (isv["lower"], isv["upper"]) == ("4", "6")
    assert {"sv_sandwich", "betti"} <= {e["provenance"] for e in isv["entries"]}


@pytest.mark.parametrize("cmd", ["validate", "homology", "pi1", "subgroups", "cover", "simplify"])
def test_other_commands_run(cmd, capsys):
    status, rep = _run([cmd, "@genus2"], capsys)
    assert status == 0 and "result" in rep


def test_growth_command(capsys):
    status, rep = _run(["growth", "@genus2", "--depth", "1"], capsys)
    assert status == 0 and rep["result"]["growth"]["violations"] == 0


def test_pinned_chain(capsys):
    status, rep = _run(["stable", "@torus", "--depth", "1", "--pins", "3:0"], capsys)
    assert [s["d"] for s in rep["result"]["stable"]] == [1, 3]


def test_exit_codes(tmp_path, capsys):
    with pytest.raises(SystemExit) as exc:
        main(["nonsense"])
    assert exc.value.code == 2
    assert main(["bounds", str(tmp_path / "missing.dcx")]) == 1
    bad = tmp_path / "bad.dcx"
    bad.write_text("{not json")
    assert main(["homology", str(bad)]) == 1
    assert main(["bounds", "@projective_plane"]) == 1
    assert main(["homology", "@torus", "--primes", "2,4"]) == 1
    assert run(RunConfig("frobnicate"))[0] == 2


def test_run_config_limits():
    with pytest.raises(InputError):
        RunConfig("stable", depth=99)
    with pytest.raises(InputError):
        RunConfig("stable", max_index=0)


def test_reports_identical_with_and_without_cache(tmp_path, capsys):
    cache = str(tmp_path / "c")
    args = ["stable", "@torus", "--depth", "2", "--cache-dir", cache]
    _, first = _run(args, capsys)
    _, second = _run(args, capsys)
    _, fresh = _run(args[:-2] + ["--no-cache"], capsys)
    for rep in (first, second, fresh):
        rep.pop("generated_at")
    assert first == second == fresh
    assert any(os.scandir(cache))


def test_out_flag(tmp_path, capsys):
    out = tmp_path / "r.json"
    assert main(["homology", "@torus", "--out", str(out)]) == 0
    assert json.loads(out.read_text())["result"]["betti"] == [1, 2, 1]


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "svbounds", "hyp", "--n", "5", "--no-cache"],
                       capture_output=True, text=True, check=True)
    assert json.loads(r.stdout)["result"]["k_n"] == 4


# -- cache ------------------------------------------------------------------

def test_cache_round_trip(tmp_path):
    c = Cache(tmp_path / "new" / "dir")
    key = cache_key(corpus.torus(), "op", {"x": 1})
    assert cache_get(c, key) is None
    cache_put(c, key, b"payload \x00 bytes")
    assert cache_get(c, key) == b"payload \x00 bytes"


def test_cache_key_is_canonical():
    K = corpus.tetrahedron_boundary()
    from svbounds.dcomplex import from_facets
    L = from_facets([(3, 2, 1), (3, 2, 0), (3, 1, 0), (2, 1, 0)])
    assert cache_key(K, "op", {}) == cache_key(L, "op", {})
    assert cache_key(K, "op", {}) != cache_key(K, "op", {"seed": 1})


def test_cache_version_and_corruption(tmp_path):
    c = Cache(tmp_path)
    key = cache_key(None, "op", {})
    c.put(key, b"x")
    assert Cache(tmp_path, version=CACHE_VERSION + "-next").get(key) is None
    c._path(key).write_text("garbage")
    assert c.get(key) is None and c.warnings
