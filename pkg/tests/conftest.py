from __future__ import annotations

from pathlib import Path

import pytest

from coarse_criteria.criteria import CriteriaSet, bit_cube
from coarse_criteria.relations import Domain, Relation

ROOT = Path(__file__).resolve().parents[1]
EXAMPLES = ROOT / "docs" / "examples"


def chain(domain: Domain, order: list[str]) -> Relation:
    """Strict total order with ``order[0]`` best."""
    return Relation.from_pairs(
        domain, [(order[a], order[b]) for a in range(len(order)) for b in range(a + 1, len(order))]
    )


@pytest.fixture
def cube() -> CriteriaSet:
    return bit_cube(3)


@pytest.fixture
def four_point() -> CriteriaSet:
    return bit_cube(3, keep=["001", "010", "100", "111"])


@pytest.fixture
def examples_dir() -> Path:
    return EXAMPLES


def pytest_terminal_summary(terminalreporter):
    from . import test_acceptance

    if not test_acceptance.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(test_acceptance.RESULTS):
        ok, detail = test_acceptance.RESULTS[number]
        terminalreporter.write_line(f"criterion {number}: {'PASS' if ok else 'FAIL'} - {detail}")
