"""Restriction, ordinary induction, Harish-Chandra induction and Jacquet restriction.

Everything is computed on characters: Harish-Chandra induction inflates a class
function of L to P through P -> L and induces from P; the Jacquet functor is
the U-average pi(l) -> 1/|U| sum_u pi(lu).
"""

from __future__ import annotations

from collections.abc import Callable, Sequence
from fractions import Fraction
from weakref import WeakKeyDictionary

import numpy as np

from thetabench.algebra.cyclotomic import Cyclotomic, dot
from thetabench.chartab.classfn import ClassFunction
from thetabench.core.errors import GroupMismatch, LeviMismatch, NotASubgroup
from thetabench.groups.parabolic import ParabolicData, maximal_levis, parabolic
from thetabench.groups.table import GroupTable


def restrict(f: ClassFunction, subgroup: GroupTable) -> ClassFunction:
    """Restriction to a subgroup table whose parent is f's group."""
    if subgroup.parent is not f.group:
        raise NotASubgroup(f"{subgroup.name} is not a subgroup table of {f.group.name}")
    pos = subgroup.parent_positions[subgroup.class_reps]
    return ClassFunction(subgroup, [f(int(p)) for p in pos], f.label)


def _induce_counts(
    group: GroupTable, sub_size: int, g_classes: np.ndarray, h_classes: np.ndarray,
    values: Sequence[Cyclotomic],
) -> ClassFunction:
    """Ind(c) = |G| / (|H| |c|) * sum over h in H with class c of f(h)."""
    k = group.num_classes
    buckets: list[dict[int, int]] = [dict() for _ in range(k)]
    pairs, counts = np.unique(np.stack([g_classes, h_classes]), axis=1, return_counts=True)
    for (gc, hc), n in zip(pairs.T, counts):
        buckets[int(gc)][int(hc)] = int(n)
    out = []
    for c in range(k):
        if not buckets[c]:
            out.append(Cyclotomic.zero())
            continue
        hcs = list(buckets[c])
        total = dot([buckets[c][h] for h in hcs], [values[h] for h in hcs], [1] * len(hcs))
        out.append(total * Fraction(group.order, sub_size * int(group.class_sizes[c])))
    return ClassFunction(group, out)


def induce_from_subgroup(chi: ClassFunction, group: GroupTable | None = None) -> ClassFunction:
    """Ordinary induction from a subgroup table (with a parent) to its parent."""
    sub = chi.group
    parent = sub.parent
    if parent is None or (group is not None and parent is not group):
        raise NotASubgroup(f"{sub.name} has no recorded embedding into the target group")
    g_classes = parent.class_of[sub.parent_positions]
    result = _induce_counts(parent, sub.order, g_classes, sub.class_of, chi.values)
    return result.with_label(f"Ind({chi.label})")


def _check_levi(P: ParabolicData, sigma: ClassFunction) -> None:
    if sigma.group is not P.levi_table:
        raise LeviMismatch(f"class function on {sigma.group.name}, expected {P.levi_table.name}")


def hc_induce(P: ParabolicData, sigma: ClassFunction) -> ClassFunction:
    """R^G_L(sigma): inflate through P -> L and induce from P to G."""
    _check_levi(P, sigma)
    group = P.group
    levi = P.levi_table
    l_classes = levi.class_of[levi.index_of(group.elements[P.projection])]
    g_classes = group.class_of[P.p_positions]
    result = _induce_counts(group, P.p_positions.size, g_classes, l_classes, sigma.values)
    return result.with_label(f"R({sigma.label})")


def jacquet(P: ParabolicData, pi: ClassFunction) -> ClassFunction:
    """*R^G_L(pi)(l) = 1/|U| sum_{u in U} pi(lu)."""
    group = P.group
    if pi.group is not group:
        raise LeviMismatch(f"class function on {pi.group.name}, expected {group.name}")
    levi = P.levi_table
    u_elems = group.elements[P.u_positions]
    out = []
    for rep in levi.class_reps:
        l_mat = levi.elements[int(rep)]
        prods = group.field.matmul(l_mat[None], u_elems)
        classes = group.class_of[group.index_of(prods)]
        hist = np.bincount(classes, minlength=group.num_classes)
        nz = np.flatnonzero(hist)
        total = dot([int(hist[c]) for c in nz], [pi.values[c] for c in nz], [1] * nz.size)
        out.append(total / P.u_positions.size)
    return ClassFunction(levi, out, f"J({pi.label})")


_PARABOLIC_CACHE: WeakKeyDictionary[GroupTable, list[ParabolicData]] = WeakKeyDictionary()


def maximal_parabolics(group: GroupTable) -> list[ParabolicData]:
    if group not in _PARABOLIC_CACHE:
        _PARABOLIC_CACHE[group] = [parabolic(group, levi) for levi in maximal_levis(group)]
    return _PARABOLIC_CACHE[group]


def is_cuspidal(pi: ClassFunction, parabolics: Sequence[ParabolicData] | None = None) -> bool:
    """True iff every proper Jacquet restriction of pi vanishes."""
    if parabolics is None:
        parabolics = maximal_parabolics(pi.group)
    return all(jacquet(P, pi).is_zero for P in parabolics)


def levi_character(
    P: ParabolicData,
    block_functions: Sequence[Callable[[np.ndarray], Cyclotomic | int]],
    middle: ClassFunction | None = None,
    label: str = "",
) -> ClassFunction:
    """The class function (a_1, ..., a_r, h) -> prod f_i(a_i) * middle(h) on L."""
    if len(block_functions) != len(P.levi.gl_blocks):
        raise LeviMismatch(
            f"{len(block_functions)} block functions for {len(P.levi.gl_blocks)} GL blocks"
        )
    levi = P.levi_table
    values = []
    for rep in levi.class_reps:
        blocks, mid = P.levi_components(levi.elements[int(rep)])
        value = Cyclotomic.one()
        for fn, a in zip(block_functions, blocks):
            value = value * Cyclotomic.coerce(fn(a))
        if middle is not None:
            if middle.group.dim != mid.shape[0]:
                raise GroupMismatch(
                    f"middle factor {middle.group.name} does not match a {mid.shape[0]}-block"
                )
            value = value * middle.at_matrix(mid)
        values.append(value)
    return ClassFunction(levi, values, label)
