"""Standard parabolic subgroups P = L U of the enumerated classical groups.

For a Levi descriptor (n_1, ..., n_r; l) of a group of Witt index n = sum n_i + l,
the coordinates split into diagonal blocks n_1, ..., n_r, m, n_r, ..., n_1 with
m the dimension of the smaller classical group G_l. P is the block upper
triangular part of G (the stabilizer of the standard isotropic flag), L its
block diagonal part and U the elements of P with identity diagonal blocks.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np
from pydantic import BaseModel, ConfigDict

from thetabench.core.errors import DescriptorNotALevi
from thetabench.core.types import Family
from thetabench.groups.table import GroupDescriptor, GroupTable, subgroup_table


class LeviDescriptor(BaseModel):
    """GL block sizes of a standard Levi and the Witt index of its classical factor."""

    model_config = ConfigDict(frozen=True)

    gl_blocks: tuple[int, ...]
    classical_rank: int = 0

    def label(self, group: GroupTable) -> str:
        parts = [f"GL_{n}" for n in self.gl_blocks]
        desc = group.descriptor
        if desc is not None and desc.family != Family.GL:
            middle = middle_descriptor(desc, self)
            parts.append(middle.label().split("(")[0])
        return " x ".join(parts) if parts else group.name


def middle_descriptor(desc: GroupDescriptor, levi: LeviDescriptor) -> GroupDescriptor:
    """Descriptor of the classical factor G_l of the Levi."""
    m = desc.dim - 2 * sum(levi.gl_blocks)
    return GroupDescriptor(family=desc.family, dim=m, q=desc.q, eps=desc.eps)


def block_sizes(group: GroupTable, levi: LeviDescriptor) -> tuple[int, ...]:
    """Diagonal block sizes of the Levi; raises DescriptorNotALevi when they do not fit."""
    desc = group.descriptor
    if desc is None:
        raise DescriptorNotALevi(f"{group.name} has no classical descriptor")
    if any(n < 1 for n in levi.gl_blocks) or levi.classical_rank < 0:
        raise DescriptorNotALevi(f"block sizes must be positive: {levi}")
    if desc.family == Family.GL:
        if levi.classical_rank or sum(levi.gl_blocks) != desc.dim:
            raise DescriptorNotALevi(f"{levi} is not a composition of {desc.dim}")
        return levi.gl_blocks
    if desc.family == Family.TORUS:
        if levi.gl_blocks:
            raise DescriptorNotALevi(f"{group.name} has no proper parabolic subgroups")
        return (desc.dim,)
    if sum(levi.gl_blocks) + levi.classical_rank != desc.rank:
        raise DescriptorNotALevi(
            f"{levi} does not fit {group.name} of Witt index {desc.rank}"
        )
    m = desc.dim - 2 * sum(levi.gl_blocks)
    blocks = levi.gl_blocks + ((m,) if m else ()) + tuple(reversed(levi.gl_blocks))
    return blocks


def _block_index(blocks: tuple[int, ...]) -> np.ndarray:
    return np.repeat(np.arange(len(blocks)), blocks)


@dataclass
class ParabolicData:
    """A standard parabolic P = L U with member positions inside the ambient group."""

    group: GroupTable
    levi: LeviDescriptor
    blocks: tuple[int, ...]
    p_positions: np.ndarray
    l_positions: np.ndarray
    u_positions: np.ndarray
    projection: np.ndarray

    @property
    def index(self) -> int:
        """|G| / |P|, the number of flags of the parabolic's type."""
        return self.group.order // self.p_positions.size

    @cached_property
    def levi_table(self) -> GroupTable:
        return subgroup_table(
            self.group, self.l_positions, f"L[{self.levi.label(self.group)}]"
        )

    @cached_property
    def p_table(self) -> GroupTable:
        return subgroup_table(
            self.group, self.p_positions, f"P[{self.levi.label(self.group)}]"
        )

    @cached_property
    def middle(self) -> GroupDescriptor | None:
        desc = self.group.descriptor
        if desc is None or desc.family in (Family.GL, Family.TORUS):
            return None
        return middle_descriptor(desc, self.levi)

    def project(self, p_positions: np.ndarray) -> np.ndarray:
        """G-positions of the Levi components of the given P-elements (G-positions)."""
        idx = np.searchsorted(self.p_positions, p_positions)
        return self.projection[idx]

    def levi_components(self, g: np.ndarray) -> tuple[list[np.ndarray], np.ndarray]:
        """GL blocks (in flag order) and the middle classical block of a Levi element."""
        r = len(self.levi.gl_blocks)
        starts = np.concatenate([[0], np.cumsum(self.blocks)])
        gl = [g[starts[i] : starts[i + 1], starts[i] : starts[i + 1]] for i in range(r)]
        lo = starts[r]
        hi = self.group.dim - starts[r]
        return gl, g[lo:hi, lo:hi]


def parabolic(group: GroupTable, levi: LeviDescriptor) -> ParabolicData:
    """The standard parabolic with the given Levi."""
    blocks = block_sizes(group, levi)
    b = _block_index(blocks)
    lower = b[:, None] > b[None, :]
    upper = b[:, None] < b[None, :]
    diag = b[:, None] == b[None, :]
    elems = group.elements
    in_p = ~np.any(elems[:, lower], axis=1) if lower.any() else np.ones(group.order, bool)
    p_positions = np.flatnonzero(in_p)
    p_elems = elems[p_positions]
    if upper.any():
        in_l = ~np.any(p_elems[:, upper], axis=1)
    else:
        in_l = np.ones(p_positions.size, dtype=bool)
    l_positions = p_positions[in_l]
    ident = group.field.identity(group.dim)
    in_u = np.all(p_elems[:, diag] == ident[diag], axis=1)
    u_positions = p_positions[in_u]
    levi_parts = p_elems.copy()
    levi_parts[:, upper] = 0
    projection = group.index_of(levi_parts)
    if (projection < 0).any():
        raise DescriptorNotALevi(f"{levi} of {group.name}: Levi projection leaves the group")
    if p_positions.size != l_positions.size * u_positions.size:
        raise DescriptorNotALevi(f"{levi} of {group.name}: |P| != |L||U|")
    return ParabolicData(group, levi, blocks, p_positions, l_positions, u_positions, projection)


def maximal_levis(group: GroupTable) -> list[LeviDescriptor]:
    """Levis of the maximal proper standard parabolics."""
    desc = group.descriptor
    if desc is None or desc.family == Family.TORUS:
        return []
    if desc.family == Family.GL:
        return [LeviDescriptor(gl_blocks=(k, desc.dim - k)) for k in range(1, desc.dim)]
    n = desc.rank
    return [LeviDescriptor(gl_blocks=(k,), classical_rank=n - k) for k in range(1, n + 1)]


def borel_levi(group: GroupTable) -> LeviDescriptor:
    """Levi of the minimal standard parabolic (a maximally split torus times G_0)."""
    desc = group.descriptor
    if desc is None:
        raise DescriptorNotALevi(f"{group.name} has no classical descriptor")
    if desc.family == Family.GL:
        return LeviDescriptor(gl_blocks=(1,) * desc.dim)
    return LeviDescriptor(gl_blocks=(1,) * desc.rank, classical_rank=0)
