"""Decomposition of omega on dual pairs, theta lifts and Witt towers.

The Weil character of (Sp(V), O(V')) is evaluated at pairs of class
representatives as tr(omega(g (x) 1) omega(1 (x) g')), so only one kernel per
class is built on each side. Multiplicities are inner products over G x G'.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

import numpy as np

from thetabench.algebra.cyclotomic import Cyclotomic
from thetabench.algebra.field import Field
from thetabench.chartab.classfn import (
    CharacterTable,
    ClassFunction,
    ProductClassFunction,
    inner_product,
    multiplicity,
)
from thetabench.core.errors import (
    BoundExhausted,
    GroupMismatch,
    LevelBudgetExceeded,
    NonIntegerMultiplicity,
)
from thetabench.core.types import FormKind, TowerId
from thetabench.groups.dual_pair import DualPairEmbedding, dual_pair_embed
from thetabench.groups.parabolic import ParabolicData
from thetabench.groups.spaces import (
    FormedSpace,
    even_orthogonal_space,
    odd_orthogonal_space,
    symplectic_space,
)
from thetabench.groups.table import (
    DEFAULT_MAX_ORDER,
    GroupDescriptor,
    GroupTable,
    build_group,
    orthogonal_descriptor,
    sp_descriptor,
)
from thetabench.weil.kernel import QuadGaussOp, compose
from thetabench.weil.operator import weil_operator

LEFT = "left"
RIGHT = "right"


def weil_character(pair: DualPairEmbedding, g: np.ndarray, gp: np.ndarray) -> Cyclotomic:
    """omega(g, g') = trace of the kernel of omega(g (x) g')."""
    return weil_operator(pair.field, pair.embed(g, gp)).trace()


def _side_ops(pair: DualPairEmbedding, group: GroupTable, side: str) -> list[QuadGaussOp]:
    reps = group.elements[group.class_reps]
    mats = pair.embed_left(reps) if side == LEFT else pair.embed_right(reps)
    return [weil_operator(pair.field, m) for m in mats]


def _check_side(pair: DualPairEmbedding, group: GroupTable, side: str) -> None:
    space = pair.left if side == LEFT else pair.right
    if group.dim != space.dim:
        raise GroupMismatch(f"{group.name} does not act on the {side} space {space.label()}")


def weil_restriction_character(
    pair: DualPairEmbedding, group: GroupTable, side: str = LEFT
) -> ClassFunction:
    """omega restricted to G x 1 (side="left") or 1 x G' (side="right")."""
    _check_side(pair, group, side)
    values = [op.trace() for op in _side_ops(pair, group, side)]
    return ClassFunction(group, values, f"omega|{group.name}")


def weil_pair_character(
    pair: DualPairEmbedding, left: GroupTable, right: GroupTable
) -> ProductClassFunction:
    """omega_{G,G'} on every pair of class representatives."""
    _check_side(pair, left, LEFT)
    _check_side(pair, right, RIGHT)
    left_ops = _side_ops(pair, left, LEFT)
    right_ops = _side_ops(pair, right, RIGHT)
    values = [[compose(a, b).trace() for b in right_ops] for a in left_ops]
    return ProductClassFunction(left, right, values, f"omega[{left.name} x {right.name}]")


@dataclass(eq=False)
class MultiplicityMatrix:
    """omega_{G,G'} = sum m[i, j] pi_i (x) pi'_j."""

    left: CharacterTable
    right: CharacterTable
    entries: np.ndarray
    weil_rank: int

    def __post_init__(self) -> None:
        self.entries = np.asarray(self.entries, dtype=np.int64)
        if self.entries.shape != (len(self.left), len(self.right)):
            raise ValueError("multiplicity matrix shape does not match the tables")

    @property
    def q(self) -> int:
        return self.left.group.field.q

    @property
    def expected_dimension(self) -> int:
        return self.q**self.weil_rank

    def total_dimension(self) -> int:
        dl = np.asarray(self.left.degrees, dtype=object)
        dr = np.asarray(self.right.degrees, dtype=object)
        return int(dl @ self.entries.astype(object) @ dr)

    def check_bookkeeping(self) -> None:
        """Nonnegative entries and sum m d d' = q^N; raises NonIntegerMultiplicity."""
        if (self.entries < 0).any():
            i, j = map(int, np.argwhere(self.entries < 0)[0])
            raise NonIntegerMultiplicity(
                f"negative multiplicity {self.entries[i, j]} at ({self.left[i].label}, "
                f"{self.right[j].label})"
            )
        total = self.total_dimension()
        if total != self.expected_dimension:
            raise NonIntegerMultiplicity(
                f"dimension bookkeeping gives {total}, expected q^N = {self.expected_dimension}"
            )

    def nonzero(self) -> list[tuple[int, int, int]]:
        return [(int(i), int(j), int(self.entries[i, j])) for i, j in np.argwhere(self.entries)]

    def partners_of_left(self, i: int) -> dict[int, int]:
        return {int(j): int(m) for j, m in enumerate(self.entries[i]) if m}

    def partners_of_right(self, j: int) -> dict[int, int]:
        return {int(i): int(m) for i, m in enumerate(self.entries[:, j]) if m}

    def label(self) -> str:
        return f"{self.left.group.name} x {self.right.group.name}"

    def to_json(self) -> dict[str, Any]:
        def side(table: CharacterTable) -> dict[str, Any]:
            g = table.group
            return {
                "group": g.descriptor.model_dump(mode="json") if g.descriptor else g.name,
                "irreducibles": [
                    {"label": c.label, "degree": d} for c, d in zip(table, table.degrees)
                ],
            }

        return {
            "pair": self.label(),
            "psi_twist": self.left.group.field.psi_twist,
            "weil_rank": self.weil_rank,
            "left": side(self.left),
            "right": side(self.right),
            "entries": [list(t) for t in self.nonzero()],
        }

    @classmethod
    def from_json(
        cls, left: CharacterTable, right: CharacterTable, data: dict[str, Any]
    ) -> MultiplicityMatrix:
        """Rebuild against loaded tables and re-verify the dimension bookkeeping."""
        for table, key in ((left, "left"), (right, "right")):
            degrees = [irr["degree"] for irr in data[key]["irreducibles"]]
            if degrees != table.degrees:
                raise ValueError(f"{key} table does not match the stored irreducibles")
        entries = np.zeros((len(left), len(right)), dtype=np.int64)
        for i, j, m in data["entries"]:
            entries[i, j] = m
        out = cls(left, right, entries, int(data["weil_rank"]))
        out.check_bookkeeping()
        return out


def decompose_dual_pair(
    pair: DualPairEmbedding,
    left: CharacterTable,
    right: CharacterTable,
    omega: ProductClassFunction | None = None,
) -> MultiplicityMatrix:
    """m[i, j] = (omega_{G,G'}, pi_i (x) pi'_j), exactly."""
    if omega is None:
        omega = weil_pair_character(pair, left.group, right.group)
    entries = np.zeros((len(left), len(right)), dtype=np.int64)
    for j, chi_r in enumerate(right):
        sliced = omega.slice_right(chi_r)
        for i, chi_l in enumerate(left):
            entries[i, j] = multiplicity(sliced, chi_l)
    out = MultiplicityMatrix(left, right, entries, pair.weil_rank)
    out.check_bookkeeping()
    return out


# Witt towers


def tower_space(field: Field, tower: TowerId, level: int) -> FormedSpace:
    """The space at ``level`` (its Witt index) of a tower."""
    if level < 0:
        raise ValueError(f"tower level must be nonnegative, got {level}")
    if tower == TowerId.SP:
        return symplectic_space(field, level)
    if tower in (TowerId.O_PLUS_ODD, TowerId.O_MINUS_ODD):
        return odd_orthogonal_space(field, level, tower.sign)
    if tower == TowerId.O_PLUS_EVEN:
        return even_orthogonal_space(field, level, 1)
    return even_orthogonal_space(field, level + 1, -1)


def tower_descriptor(tower: TowerId, level: int, q: int) -> GroupDescriptor:
    if tower == TowerId.SP:
        return sp_descriptor(level, q)
    if tower in (TowerId.O_PLUS_ODD, TowerId.O_MINUS_ODD):
        return orthogonal_descriptor(2 * level + 1, q, tower.sign)
    if tower == TowerId.O_PLUS_EVEN:
        return orthogonal_descriptor(2 * level, q, 1)
    return orthogonal_descriptor(2 * level + 2, q, -1)


@dataclass(frozen=True, eq=False)
class TowerPoint:
    tower: TowerId
    level: int
    group: GroupTable

    @property
    def space(self) -> FormedSpace:
        return self.group.space


def tower_point(
    field: Field,
    tower: TowerId,
    level: int,
    level_bound: int,
    max_order: int = DEFAULT_MAX_ORDER,
) -> TowerPoint:
    """Build the group at one tower level; levels above ``level_bound`` are refused."""
    if level > level_bound:
        raise LevelBudgetExceeded(f"{tower} level {level} exceeds the bound {level_bound}")
    group = build_group(tower_descriptor(tower, level, field.q), field, max_order)
    return TowerPoint(tower, level, group)


def _source_side(source: GroupTable) -> str:
    if source.space is None or source.space.kind == FormKind.NONE:
        raise GroupMismatch(f"{source.name} is not a member of a dual pair")
    return LEFT if source.space.kind == FormKind.SYMPLECTIC else RIGHT


def pair_with_level(source: GroupTable, target: FormedSpace) -> DualPairEmbedding:
    """Embedding of (source, isometry group of ``target``), in (Sp, O) order."""
    if _source_side(source) == LEFT:
        return dual_pair_embed(source.space, target)
    return dual_pair_embed(target, source.space)


def theta_lift(mm: MultiplicityMatrix, index: int, side: str = LEFT) -> ClassFunction:
    """Theta(pi) = sum_pi' m(pi, pi') pi' (zero when pi does not occur)."""
    if side == LEFT:
        partners, table = mm.partners_of_left(index), mm.right
    else:
        partners, table = mm.partners_of_right(index), mm.left
    out = ClassFunction.zero(table.group)
    for k, m in partners.items():
        out = out + table[k] * m
    source = mm.left if side == LEFT else mm.right
    return out.with_label(f"Theta({source[index].label})")


def theta_nonzero(source: CharacterTable, index: int, target: FormedSpace) -> bool:
    """[Theta(pi) != 0] from (omega restricted to G, pi)_G, without the target table."""
    group = source.group
    side = _source_side(group)
    pair = pair_with_level(group, target)
    restricted = weil_restriction_character(pair, group, side)
    return not inner_product(restricted, source[index]).is_zero


def first_occurrence(
    source: CharacterTable, index: int, tower: TowerId, level_bound: int
) -> int:
    """Smallest level n' with Theta(pi) != 0 at that level of ``tower``."""
    field = source.group.field
    for level in range(level_bound + 1):
        if theta_nonzero(source, index, tower_space(field, tower, level)):
            return level
    raise BoundExhausted(f"first occurrence of {source[index].label} in {tower}", level_bound)


def jacquet_of_weil(
    pair: DualPairEmbedding, left: GroupTable, parabolic: ParabolicData
) -> ProductClassFunction:
    """(g, l) -> |U'|^-1 sum_{u in U'} omega(g, l u) for a parabolic P' = L'U' of G'."""
    _check_side(pair, left, LEFT)
    _check_side(pair, parabolic.group, RIGHT)
    levi = parabolic.levi_table
    unipotent = parabolic.group.elements[parabolic.u_positions]
    f = pair.field
    left_ops = _side_ops(pair, left, LEFT)
    rows: list[list[Cyclotomic]] = [[] for _ in left_ops]
    for rep in levi.class_reps:
        products = f.matmul(levi.elements[int(rep)][None], unipotent)
        right_ops = [weil_operator(f, m) for m in pair.embed_right(products)]
        for i, a in enumerate(left_ops):
            total = Cyclotomic.zero()
            for b in right_ops:
                total = total + compose(a, b).trace()
            rows[i].append(total / len(right_ops))
    return ProductClassFunction(left, levi, rows, f"J(omega)[{left.name} x {levi.name}]")
