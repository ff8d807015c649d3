"""Spinor norm of special orthogonal matrices via the Wall form."""

from __future__ import annotations

import numpy as np

from thetabench.core.errors import NotSpecialOrthogonal
from thetabench.core.types import FormKind
from thetabench.groups.spaces import FormedSpace
from thetabench.groups.table import GroupTable


def spinor_norm(space: FormedSpace, g: np.ndarray) -> int:
    """chi(g) in {+1, -1}: the Legendre symbol of the Wall form's discriminant.

    For g in SO(V) the Wall form [ (1-g)x, (1-g)y ] = (x, (1-g)y) lives on the
    image of 1-g; on a product of two reflections r_a r_b its discriminant is
    Q(a) Q(b) modulo squares.
    """
    if space.kind != FormKind.SYMMETRIC:
        raise NotSpecialOrthogonal("spinor norm needs a symmetric form")
    f = space.field
    g = np.asarray(g, dtype=np.int64)
    if not space.preserves(g) or (space.dim and f.det(g) != 1):
        raise NotSpecialOrthogonal(f"matrix is not in SO of the {space.label()} form")
    one_minus = f.sub(f.identity(space.dim), g)
    _, pivots = f.rref(one_minus)
    if not pivots:
        return 1
    wall = f.matmul(space.gram[pivots, :], one_minus[:, pivots])
    return f.legendre(f.det(wall))


def spinor_norm_by_class(group: GroupTable) -> list[int]:
    """Spinor norm of each conjugacy class representative of an SO table."""
    if group.space is None:
        raise NotSpecialOrthogonal(f"{group.name} carries no orthogonal form")
    return [spinor_norm(group.space, group.elements[r]) for r in group.class_reps]


def spinor_kernel_positions(group: GroupTable) -> np.ndarray:
    """Positions of the kernel of the spinor norm."""
    values = np.array(spinor_norm_by_class(group), dtype=np.int64)
    return np.flatnonzero(values[group.class_of] == 1)
