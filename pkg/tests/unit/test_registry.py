"""Unit tests for the suite registry."""

import pytest

from thetabench.core.errors import UnknownSuite
from thetabench.core.types import SuiteSelection
from thetabench.runners.registry import SUITE_REGISTRY, get_suite, list_suites, select_suites

EXPECTED_IDS = [
    "eq-triv",
    "lemma-2.1",
    "lemma-2.2",
    "lemma-2.3",
    "disjointness",
    "combinatorics",
    "weil-model",
    "decomposition-integrality",
    "pan",
    "mvw-jacquet",
    "thm-uni",
    "thm-FO",
    "prop-howe",
    "prop-cons",
    "prop-pi-1",
    "thm-3.7",
    "thm-sptheta",
    "thm-spthetalift",
    "thm-amr2",
    "cor-4.3",
    "fun-classification",
]


class TestRegistry:
    """Tests for suite lookup and selection."""

    def test_all_suites_registered(self) -> None:
        """Every suite id is registered, in order."""
        assert list(SUITE_REGISTRY) == EXPECTED_IDS
        assert [s.id for s in list_suites()] == EXPECTED_IDS

    def test_descriptions(self) -> None:
        """Every suite has a one-line description."""
        for spec in list_suites():
            assert spec.description
            assert "\n" not in spec.description

    def test_unknown_suite(self) -> None:
        """Test that unknown ids raise UnknownSuite."""
        with pytest.raises(UnknownSuite):
            get_suite("lemma-9.9")

    def test_empty_include_selects_all(self) -> None:
        """An empty include list selects every suite."""
        assert len(select_suites(SuiteSelection())) == len(EXPECTED_IDS)

    def test_include_keeps_registry_order(self) -> None:
        """Selection follows registry order, not request order."""
        chosen = select_suites(SuiteSelection(include=["pan", "eq-triv"]))
        assert [s.id for s in chosen] == ["eq-triv", "pan"]

    def test_exclude(self) -> None:
        """Excluded suites are dropped."""
        chosen = select_suites(SuiteSelection(exclude=["pan"]))
        assert "pan" not in [s.id for s in chosen]
        assert len(chosen) == len(EXPECTED_IDS) - 1

    def test_unknown_in_selection(self) -> None:
        """Unknown ids in a selection are rejected."""
        with pytest.raises(UnknownSuite):
            select_suites(SuiteSelection(include=["nope"]))
        with pytest.raises(UnknownSuite):
            select_suites(SuiteSelection(exclude=["nope"]))
