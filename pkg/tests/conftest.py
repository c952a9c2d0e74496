from __future__ import annotations

import sys

import pytest

from svbounds import corpus


@pytest.fixture
def torus():
    return corpus.torus()


@pytest.fixture
def genus2():
    return corpus.genus2()


@pytest.fixture
def sphere2():
    return corpus.tetrahedron_boundary()


@pytest.fixture(autouse=True)
def _isolated_cache(tmp_path, monkeypatch):
    monkeypatch.setenv("SVBOUNDS_CACHE_DIR", str(tmp_path / "cache"))


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[n])
