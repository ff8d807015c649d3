"""Bookkeeping of checked identities and the witnesses of failed ones."""

from __future__ import annotations

from collections.abc import Iterator
from contextlib import contextmanager
from typing import Any

from thetabench.algebra.cyclotomic import Cyclotomic
from thetabench.chartab.classfn import ClassFunction, ProductClassFunction
from thetabench.core.errors import BudgetExceeded, LevelBudgetExceeded, UnsupportedScale
from thetabench.core.types import SuiteResult, SuiteStatus

# prerequisites whose absence turns part of a suite, or a whole suite, into a skip
SKIP_ERRORS = (BudgetExceeded, LevelBudgetExceeded, UnsupportedScale)


def class_function_difference(lhs: ClassFunction, rhs: ClassFunction) -> list[dict[str, Any]]:
    """Classes where two class functions differ, with both exact values."""
    out = []
    for c, (a, b) in enumerate(zip(lhs.values, rhs.values)):
        if a != b:
            out.append({"class": c, "lhs": a.to_json(), "rhs": b.to_json()})
    return out


def product_difference(
    lhs: ProductClassFunction, rhs: ProductClassFunction
) -> list[dict[str, Any]]:
    out = []
    for i, (row_l, row_r) in enumerate(zip(lhs.values, rhs.values)):
        for j, (a, b) in enumerate(zip(row_l, row_r)):
            if a != b:
                out.append({"classes": [i, j], "lhs": a.to_json(), "rhs": b.to_json()})
    return out


class Tally:
    """Counts identities that hold and records a witness for each that does not."""

    def __init__(self) -> None:
        self.identities = 0
        self.witnesses: list[dict[str, Any]] = []
        self.params: dict[str, Any] = {}
        self.notes: dict[str, Any] = {}

    def check(self, ok: bool, check: str, **witness: Any) -> bool:
        if ok:
            self.identities += 1
        else:
            self.witnesses.append({"check": check, **witness})
        return ok

    def equal(self, lhs: ClassFunction, rhs: ClassFunction, check: str) -> bool:
        """Exact equality of two class functions on the same group."""
        if lhs == rhs:
            self.identities += 1
            return True
        self.witnesses.append(
            {
                "check": check,
                "group": lhs.group.name,
                "lhs": lhs.label,
                "rhs": rhs.label,
                "difference": class_function_difference(lhs, rhs),
            }
        )
        return False

    def equal_products(
        self, lhs: ProductClassFunction, rhs: ProductClassFunction, check: str
    ) -> bool:
        if lhs == rhs:
            self.identities += 1
            return True
        self.witnesses.append(
            {
                "check": check,
                "group": f"{lhs.left.name} x {lhs.right.name}",
                "lhs": lhs.label,
                "rhs": rhs.label,
                "difference": product_difference(lhs, rhs),
            }
        )
        return False

    def equal_values(self, lhs: Any, rhs: Any, check: str, **context: Any) -> bool:
        if lhs == rhs:
            self.identities += 1
            return True
        self.witnesses.append({"check": check, "lhs": _plain(lhs), "rhs": _plain(rhs), **context})
        return False

    def skip(self, missing: str) -> None:
        """Record a prerequisite that kept part of the suite from running."""
        self.notes.setdefault("missing", []).append(missing)

    def result(self, suite: str, duration_ms: int = 0) -> SuiteResult:
        missing = None
        if self.witnesses:
            status = SuiteStatus.REFUTED
        elif self.identities:
            status = SuiteStatus.VERIFIED
        else:
            # nothing was checkable at this scale
            status = SuiteStatus.SKIPPED
            missing = "; ".join(self.notes.get("missing", [])) or "no instance at this scale"
        return SuiteResult(
            suite=suite,
            params=self.params,
            status=status,
            identities=self.identities,
            witnesses=self.witnesses,
            missing=missing,
            notes=self.notes,
            duration_ms=duration_ms,
        )


def _plain(value: Any) -> Any:
    if isinstance(value, Cyclotomic):
        return value.to_json()
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    return value


@contextmanager
def optional(tally: Tally, what: str) -> Iterator[None]:
    """Run a part of a suite that may be out of budget; record it as missing if so."""
    try:
        yield
    except SKIP_ERRORS as e:
        print(f"  skipping {what}: {e}")
        tally.skip(f"{what}: {e}")
