"""Registry: maps suite ids to the functions that run them, applies suite selection."""

from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass

from thetabench.core.errors import UnknownSuite
from thetabench.core.types import SuiteSelection
from thetabench.runners.checks import Tally
from thetabench.runners.context import SuiteContext
from thetabench.runners.suites import dl_suites, theta_suites, weil_suites

SuiteFn = Callable[[SuiteContext, Tally], None]


@dataclass(frozen=True)
class SuiteSpec:
    """A registered suite."""

    id: str
    description: str
    run: SuiteFn


def _spec(suite_id: str, fn: SuiteFn) -> SuiteSpec:
    doc = (fn.__doc__ or "").strip().splitlines()
    return SuiteSpec(id=suite_id, description=doc[0] if doc else suite_id, run=fn)


# Registration order is report order.
SUITE_REGISTRY: dict[str, SuiteSpec] = {
    spec.id: spec
    for spec in (
        _spec("eq-triv", dl_suites.eq_triv),
        _spec("lemma-2.1", dl_suites.lemma_chi),
        _spec("lemma-2.2", dl_suites.lemma_chi_unipotent),
        _spec("lemma-2.3", dl_suites.lemma_chi_twist),
        _spec("disjointness", dl_suites.disjointness),
        _spec("combinatorics", dl_suites.combinatorics),
        _spec("weil-model", weil_suites.weil_model),
        _spec("decomposition-integrality", weil_suites.decomposition_integrality),
        _spec("pan", weil_suites.pan_decomposition),
        _spec("mvw-jacquet", weil_suites.mvw_jacquet),
        _spec("thm-uni", theta_suites.thm_uni),
        _spec("thm-FO", theta_suites.thm_fo),
        _spec("prop-howe", theta_suites.prop_howe),
        _spec("prop-cons", theta_suites.prop_cons),
        _spec("prop-pi-1", theta_suites.prop_pi_1),
        _spec("thm-3.7", theta_suites.thm_3_7),
        _spec("thm-sptheta", theta_suites.thm_sptheta),
        _spec("thm-spthetalift", theta_suites.thm_spthetalift),
        _spec("thm-amr2", theta_suites.thm_amr2),
        _spec("cor-4.3", theta_suites.cor_4_3),
        _spec("fun-classification", theta_suites.fun_classification),
    )
}


def get_suite(suite_id: str) -> SuiteSpec:
    """Look up a suite by id."""
    try:
        return SUITE_REGISTRY[suite_id]
    except KeyError:
        known = ", ".join(SUITE_REGISTRY)
        raise UnknownSuite(f"Unknown suite: {suite_id} (known: {known})") from None


def list_suites() -> list[SuiteSpec]:
    return list(SUITE_REGISTRY.values())


def select_suites(selection: SuiteSelection) -> list[SuiteSpec]:
    """Suites named by a selection, in registry order.

    Unknown ids in either list raise UnknownSuite rather than being ignored.
    """
    for suite_id in [*selection.include, *selection.exclude]:
        get_suite(suite_id)
    include = set(selection.include) or set(SUITE_REGISTRY)
    exclude = set(selection.exclude)
    return [spec for spec in list_suites() if spec.id in include and spec.id not in exclude]
