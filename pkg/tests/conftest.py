from __future__ import annotations

import random

import pytest

from nrldpc.basegraph import N_CORE_COLS, N_CORE_ROWS, N_INFO_COLS, N_ROWS, BaseGraph, BaseGraphEntry, load_bg1

_ACCEPTANCE: list[tuple[str, bool, str]] = []


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in _ACCEPTANCE:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}  {detail}")


@pytest.fixture
def record():
    def _record(name: str, ok: bool, detail: str = "") -> None:
        _ACCEPTANCE.append((name, bool(ok), detail))
        print(f"{'PASS' if ok else 'FAIL'}  {name}  {detail}")
    return _record


@pytest.fixture(scope="session")
def bg1():
    return load_bg1()


def extension_entries() -> list[BaseGraphEntry]:
    return [BaseGraphEntry(r, N_INFO_COLS + r, (0,)) for r in range(N_CORE_ROWS, N_ROWS)]


def synthetic_graph(seed: int, max_degree: int = 8, max_shift: int = 40, ext_degree: int = 3) -> BaseGraph:
    """Random core rows 0..3 over columns 0..25 plus random ties from extension rows to the core."""
    rng = random.Random(seed)
    entries = []
    for r in range(N_CORE_ROWS):
        cols = rng.sample(range(N_CORE_COLS), rng.randint(2, max_degree))
        entries += [BaseGraphEntry(r, c, (rng.randrange(max_shift),)) for c in sorted(cols)]
    for r in range(N_CORE_ROWS, N_ROWS):
        cols = rng.sample(range(N_CORE_COLS), rng.randint(1, ext_degree))
        entries += [BaseGraphEntry(r, c, (rng.randrange(max_shift),)) for c in sorted(cols)]
    entries += extension_entries()
    return BaseGraph(tuple(entries))


@pytest.fixture
def make_synthetic():
    return synthetic_graph
