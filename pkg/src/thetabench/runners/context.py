"""Shared state of one verification run at one q: field, budgets, memoized tables."""

from __future__ import annotations

from functools import cached_property
from typing import Any

from thetabench.algebra.field import Field
from thetabench.chartab.classfn import CharacterTable
from thetabench.chartab.dixon import character_table
from thetabench.core.errors import BudgetExceeded, LevelBudgetExceeded
from thetabench.core.rng import SeededRNG
from thetabench.core.types import BudgetConfig, TowerId
from thetabench.dl.characters import special_subgroup
from thetabench.groups.dual_pair import DualPairEmbedding, dual_pair_embed
from thetabench.groups.table import (
    GroupDescriptor,
    GroupTable,
    build_group,
    orthogonal_descriptor,
    sp_descriptor,
)
from thetabench.storage.cache import TableCache
from thetabench.weil.theta import MultiplicityMatrix, decompose_dual_pair, tower_descriptor


class SuiteContext:
    """Builds and memoizes the groups, character tables and decompositions suites share.

    Tables go through the on-disk cache when one is given. Group orders above
    ``budgets.max_group_order`` raise BudgetExceeded, which the runner reports as
    a skipped suite.
    """

    def __init__(
        self,
        q: int,
        psi_twist: str = "1",
        budgets: BudgetConfig | None = None,
        seed: int = 1337,
        cache: TableCache | None = None,
    ) -> None:
        self.q = q
        self.psi_twist = psi_twist
        self.budgets = budgets or BudgetConfig()
        self.seed = seed
        self.cache = cache
        self._groups: dict[GroupDescriptor, GroupTable] = {}
        self._tables: dict[str, CharacterTable] = {}
        self._decompositions: dict[tuple[int, int, int], MultiplicityMatrix] = {}
        # results shared between suites (identified representations, theta chains)
        self.memo: dict[str, Any] = {}

    @cached_property
    def field(self) -> Field:
        return Field(self.q, self.psi_twist)

    def rng(self, stream: int = 0) -> SeededRNG:
        """A fresh RNG per caller so that suite order never changes the samples."""
        return SeededRNG(self.seed).fork(stream)

    def with_twist(self, psi_twist: str) -> SuiteContext:
        """A context over the same q with another additive character."""
        return SuiteContext(self.q, psi_twist, self.budgets, self.seed, self.cache)

    # groups

    def group(self, desc: GroupDescriptor) -> GroupTable:
        if desc not in self._groups:
            print(f"  building {desc.label()}")
            limit = self.budgets.max_group_order
            if self.cache is not None:
                self._groups[desc] = self.cache.get_group(desc, self.field, limit)
            else:
                self._groups[desc] = build_group(desc, self.field, limit)
        return self._groups[desc]

    def sp(self, n: int) -> GroupTable:
        """Sp_{2n}(q)."""
        return self.group(sp_descriptor(n, self.q))

    def o(self, n: int, eps: int) -> GroupTable:
        """O^eps_{2n+1}(q)."""
        return self.group(orthogonal_descriptor(2 * n + 1, self.q, eps))

    def so(self, n: int, eps: int) -> GroupTable:
        """SO^eps_{2n+1}(q) as a subgroup table of O^eps_{2n+1}(q)."""
        return special_subgroup(self.o(n, eps))

    def tower_group(self, tower: TowerId, level: int) -> GroupTable:
        if level > self.budgets.tower_level_bound:
            raise LevelBudgetExceeded(
                f"{tower} level {level} exceeds the bound {self.budgets.tower_level_bound}"
            )
        return self.group(tower_descriptor(tower, level, self.q))

    # characters and decompositions

    def table(self, group: GroupTable) -> CharacterTable:
        if group.name not in self._tables:
            print(f"  character table of {group.name}")
            limit = self.budgets.max_group_order
            search = self.budgets.lift_prime_search
            if self.cache is not None:
                self._tables[group.name] = self.cache.get_character_table(group, limit, search)
            else:
                self._tables[group.name] = character_table(group, limit, search)
        return self._tables[group.name]

    def pair(self, n: int, n_prime: int, eps: int) -> DualPairEmbedding:
        """(Sp_{2n}, O^eps_{2n'+1}) inside Sp_{2n(2n'+1)}."""
        return dual_pair_embed(self.sp(n).space, self.o(n_prime, eps).space)

    def decomposition(self, n: int, n_prime: int, eps: int) -> MultiplicityMatrix:
        """omega on Sp_{2n} x O^eps_{2n'+1}, decomposed into pairs of irreducibles."""
        key = (n, n_prime, eps)
        if key not in self._decompositions:
            pair = self.pair(n, n_prime, eps)
            if pair.weil_rank > self.budgets.max_weil_rank:
                raise BudgetExceeded(
                    f"omega on Sp_{2 * n} x O_{2 * n_prime + 1}", pair.weil_rank,
                    self.budgets.max_weil_rank,
                )
            left = self.table(self.sp(n))
            right = self.table(self.o(n_prime, eps))
            print(f"  decomposing omega on {left.group.name} x {right.group.name}")
            if self.cache is not None:
                mm = self.cache.get_decomposition(pair, left, right)
            else:
                mm = decompose_dual_pair(pair, left, right)
            self._decompositions[key] = mm
        return self._decompositions[key]
