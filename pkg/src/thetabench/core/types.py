"""Core types and Pydantic models for ThetaBench."""

from __future__ import annotations

from enum import Enum
from pathlib import Path
from typing import Any, Literal

import sympy
from pydantic import BaseModel, Field, field_validator, model_validator

SUPPORTED_CHARACTERISTICS = (3, 5, 7)


class Family(str, Enum):
    """Families of finite classical matrix groups."""

    SP = "Sp"
    O = "O"  # noqa: E741
    SO = "SO"
    GL = "GL"
    TORUS = "torus-product"

    def __str__(self) -> str:
        return self.value


class FormKind(str, Enum):
    """Kind of bilinear form carried by a formed space."""

    SYMPLECTIC = "symplectic"
    SYMMETRIC = "symmetric"
    NONE = "none"

    def __str__(self) -> str:
        return self.value


class TowerId(str, Enum):
    """Witt towers of the dual pairs."""

    SP = "Sp"
    O_PLUS_ODD = "O+odd"
    O_MINUS_ODD = "O-odd"
    O_PLUS_EVEN = "O+even"
    O_MINUS_EVEN = "O-even"

    def __str__(self) -> str:
        return self.value

    @property
    def sign(self) -> int:
        """Tower sign: +1 / -1 for orthogonal towers, 0 for the symplectic one."""
        if self in (TowerId.O_PLUS_ODD, TowerId.O_PLUS_EVEN):
            return 1
        if self in (TowerId.O_MINUS_ODD, TowerId.O_MINUS_EVEN):
            return -1
        return 0

    @classmethod
    def odd(cls, sign: int) -> TowerId:
        """The odd orthogonal tower of the given sign."""
        return cls.O_PLUS_ODD if sign > 0 else cls.O_MINUS_ODD


class SuiteStatus(str, Enum):
    """Outcome of a verification suite."""

    VERIFIED = "verified"
    REFUTED = "refuted-at-small-q"
    SKIPPED = "skipped-unsupported"

    def __str__(self) -> str:
        return self.value


def check_field_order(q: int) -> int:
    """Validate q as p^k with p in {3, 5, 7} and k in {1, 2}."""
    factors = sympy.factorint(q)
    if len(factors) != 1:
        raise ValueError(f"q = {q} is not a prime power")
    ((p, k),) = factors.items()
    if p not in SUPPORTED_CHARACTERISTICS or k > 2:
        raise ValueError(f"q = {q} is not supported (need p in {{3,5,7}}, k <= 2)")
    return q


class SuiteResult(BaseModel):
    """Result of one verification suite at one parameter set."""

    suite: str
    params: dict[str, Any] = Field(default_factory=dict)
    status: SuiteStatus
    identities: int = 0
    witnesses: list[dict[str, Any]] = Field(default_factory=list)
    missing: str | None = None
    notes: dict[str, Any] = Field(default_factory=dict)
    duration_ms: int = 0

    @model_validator(mode="after")
    def _check_status_payload(self) -> SuiteResult:
        if self.status == SuiteStatus.REFUTED and not self.witnesses:
            raise ValueError(f"{self.suite}: refuted result needs a witness")
        if self.status == SuiteStatus.VERIFIED and self.identities < 1:
            raise ValueError(f"{self.suite}: verified result needs an identity count")
        if self.status == SuiteStatus.SKIPPED and not self.missing:
            raise ValueError(f"{self.suite}: skipped result must name its missing prerequisite")
        return self


class RunConfig(BaseModel):
    """Run configuration."""

    run_id: str = "verify"
    q_values: list[int] = Field(default_factory=lambda: [3])
    psi_twist: Literal["1", "nonsquare"] = "1"
    seed: int = 1337
    output_dir: str = "data/runs"
    cache_dir: str | None = None
    include_timings: bool = False

    @field_validator("q_values")
    @classmethod
    def _check_q_values(cls, values: list[int]) -> list[int]:
        if not values:
            raise ValueError("q_values must not be empty")
        return [check_field_order(q) for q in values]


class BudgetConfig(BaseModel):
    """Enumeration and search budgets."""

    max_group_order: int = Field(default=10_000_000, gt=0)
    dense_oracle_dim: int = Field(default=1000, gt=0)
    tower_level_bound: int = Field(default=4, gt=0)
    weil_random_pairs: int = Field(default=200, gt=0)
    max_weil_rank: int = Field(default=12, gt=0)
    lift_prime_search: int = Field(default=100_000, gt=0)


class SuiteSelection(BaseModel):
    """Which suites to run. An empty include list selects every registered suite."""

    include: list[str] = Field(default_factory=list)
    exclude: list[str] = Field(default_factory=list)


class FullRunConfig(BaseModel):
    """Full verification configuration from YAML."""

    run: RunConfig = Field(default_factory=RunConfig)
    budgets: BudgetConfig = Field(default_factory=BudgetConfig)
    suites: SuiteSelection = Field(default_factory=SuiteSelection)


def load_config_file(path: Path) -> dict[str, Any]:
    """Load a YAML config file."""
    import yaml

    with open(path) as f:
        return yaml.safe_load(f) or {}


def load_run_config(path: Path) -> FullRunConfig:
    """Load and validate a verification config."""
    return FullRunConfig(**load_config_file(path))
