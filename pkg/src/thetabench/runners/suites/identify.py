"""Identification of the named representations the theta suites talk about.

Series membership is decided with the Deligne-Lusztig characters available at
the supported scale. Where those do not reach (cuspidal representations of rank
two groups) the cuspidal unipotent of Sp_4 is picked out by its degree and
central character, and the cuspidal unipotent of SO_5 through the theta chain
starting at the cuspidal theta-representations of Sp_2. The Sp_4 pick can be
checked against the chain with ``sp4_partners_through_chain``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from weakref import WeakKeyDictionary

import numpy as np

from thetabench.algebra.cyclotomic import Cyclotomic
from thetabench.chartab.classfn import CharacterTable, ClassFunction, inner_product
from thetabench.chartab.induction import is_cuspidal, restrict
from thetabench.core.errors import UnsupportedScale
from thetabench.core.types import Family, TowerId
from thetabench.dl.characters import (
    SeriesWitness,
    chi_character,
    dl_character,
    special_subgroup,
)
from thetabench.dl.torus import theta_w, trivial_character
from thetabench.dl.weyl import weyl_classes
from thetabench.groups.table import GroupTable
from thetabench.runners.context import SuiteContext
from thetabench.weil.theta import theta_nonzero, tower_space

Membership = dict[str, bool | None]

_CUSPIDAL: WeakKeyDictionary[CharacterTable, list[int]] = WeakKeyDictionary()
_MEMBERSHIP: WeakKeyDictionary[CharacterTable, dict[int, Membership]] = WeakKeyDictionary()

UNIPOTENT_ONLY: Membership = {"unipotent": True, "theta": False}


def minus_identity(group: GroupTable) -> int:
    f = group.field
    return group.position(f.neg(f.identity(group.dim)))


def central_sign(chi: ClassFunction) -> Cyclotomic:
    """chi(-I) / chi(1)."""
    return chi(minus_identity(chi.group)) / chi.degree.to_fraction()


def sign_character(group: GroupTable) -> ClassFunction:
    """sgn = det on an orthogonal group."""
    f = group.field
    return ClassFunction.from_matrix_function(
        group, lambda g: 1 if f.det(g) == 1 else -1, "sgn"
    )


def cuspidal_indices(table: CharacterTable) -> list[int]:
    if table not in _CUSPIDAL:
        _CUSPIDAL[table] = [i for i, chi in enumerate(table) if is_cuspidal(chi)]
    return _CUSPIDAL[table]


def _connected_part(chi: ClassFunction) -> ClassFunction:
    desc = chi.group.descriptor
    if desc is not None and desc.family == Family.O and desc.dim % 2:
        return restrict(chi, special_subgroup(chi.group))
    return chi


def series_membership(
    table: CharacterTable, index: int, overrides: dict[int, Membership] | None = None
) -> Membership:
    """Whether table[index] is unipotent and whether it is a theta-representation.

    True / False when decided; None when a Deligne-Lusztig character needed for a
    negative answer is beyond the supported scale. Orthogonal groups of odd
    dimension are judged by the restriction to SO.
    """
    if overrides and index in overrides:
        return overrides[index]
    cache = _MEMBERSHIP.setdefault(table, {})
    if index in cache:
        return cache[index]
    pi = _connected_part(table[index])
    group = pi.group
    q = group.field.q
    out: Membership = {}
    for kind, character_for in (("unipotent", trivial_character), ("theta", theta_w)):
        found, complete = False, True
        for w in weyl_classes(group.descriptor.rank):
            try:
                chi = dl_character(group, w, character_for(w.torus(), q))
            except UnsupportedScale:
                complete = False
                continue
            if not inner_product(pi, chi).is_zero:
                found = True
                break
        out[kind] = True if found else (False if complete else None)
    cache[index] = out
    return out


# Sp_4


def lusztig_degree(q: int) -> int:
    """Degree q (q - 1)^2 / 2 of the cuspidal unipotent representation of Sp_4."""
    return q * (q - 1) ** 2 // 2


def cuspidal_unipotent_sp4(ctx: SuiteContext) -> int | None:
    """Index of the cuspidal unipotent of Sp_4(q), or None when it is not pinned down.

    Candidates are cuspidal, of the Lusztig degree and trivial on -I.
    """
    if "sp4-cuspidal-unipotent" not in ctx.memo:
        table = ctx.table(ctx.sp(2))
        degree = lusztig_degree(ctx.q)
        candidates = [
            i
            for i in cuspidal_indices(table)
            if table.degrees[i] == degree and central_sign(table[i]) == 1
        ]
        ctx.memo["sp4-cuspidal-unipotent"] = candidates[0] if len(candidates) == 1 else None
        ctx.memo["sp4-cuspidal-unipotent-candidates"] = candidates
    return ctx.memo["sp4-cuspidal-unipotent"]


def sp4_overrides(ctx: SuiteContext) -> dict[int, Membership]:
    idx = cuspidal_unipotent_sp4(ctx)
    return {} if idx is None else {idx: UNIPOTENT_ONLY}


def sp4_chain_witnesses(ctx: SuiteContext) -> dict[int, SeriesWitness]:
    idx = cuspidal_unipotent_sp4(ctx)
    if idx is None:
        return {}
    witness = SeriesWitness(
        label="unipotent", witness=f"cuspidal of degree {lusztig_degree(ctx.q)}, -I trivial"
    )
    return {idx: witness}


# the theta chain from Sp_2


def _value_key(value: Cyclotomic) -> str:
    return json.dumps(value.to_json(), sort_keys=True)


def cuspidal_theta_sp2(ctx: SuiteContext) -> list[int]:
    table = ctx.table(ctx.sp(1))
    return [i for i in cuspidal_indices(table) if series_membership(table, i)["theta"]]


@dataclass
class ThetaChain:
    """lambda_{1,alpha}, lambda_{1,beta} of Sp_2 and where they go in the odd towers.

    The names alpha and beta are fixed before psi enters: alpha is the one whose
    value at [[1, 1], [0, 1]] has the larger canonical key. First occurrence then
    defines ``eps0``: alpha occurs at level 0 of the O^eps0 tower, and beta at
    level 0 of the other one. So alpha is exactly the lift that occurs first in
    the eps0 tower, and a nonsquare twist of psi swaps the towers, not the names.
    ``eps0`` is None unless each of the two occurs at level 0 of exactly one
    tower and the towers differ.

    ``level2[eps]`` are the partners in O^eps_5 of the representation that first
    occurs at level 2 of that tower.
    """

    alpha: int
    beta: int
    eps0: int | None
    level2: dict[int, dict[int, int]] = field(default_factory=dict)

    def source_at_level2(self, eps: int) -> int:
        return self.alpha if eps == -self.eps0 else self.beta


def order_alpha_beta(ctx: SuiteContext, pair: list[int]) -> tuple[int, int]:
    """(alpha, beta) by the canonical key of the value at the unipotent [[1, 1], [0, 1]].

    The character table does not depend on psi, so neither does this order.
    """
    table = ctx.table(ctx.sp(1))
    u = ctx.sp(1).position(np.array([[1, 1], [0, 1]], dtype=np.int64))
    first, second = sorted(pair, key=lambda i: _value_key(table[i](u)), reverse=True)
    return first, second


def epsilon_zero(ctx: SuiteContext, index: int) -> int | None:
    """The sign of the only odd tower where Sp_2 irreducible ``index`` occurs at level 0."""
    table = ctx.table(ctx.sp(1))
    occurs = [
        eps
        for eps in (1, -1)
        if theta_nonzero(table, index, tower_space(ctx.field, TowerId.odd(eps), 0))
    ]
    return occurs[0] if len(occurs) == 1 else None


def theta_chain(ctx: SuiteContext, with_level2: bool = True) -> ThetaChain | None:
    """The chain, or None when Sp_2 does not have exactly two cuspidal theta-representations."""
    key = "theta-chain" if with_level2 else "theta-chain-short"
    if key in ctx.memo:
        return ctx.memo[key]
    pair = cuspidal_theta_sp2(ctx)
    chain = None
    if len(pair) == 2:
        alpha, beta = order_alpha_beta(ctx, pair)
        eps0 = epsilon_zero(ctx, alpha)
        if eps0 is not None and epsilon_zero(ctx, beta) != -eps0:
            eps0 = None
        chain = ThetaChain(alpha, beta, eps0)
        if with_level2 and chain.eps0 is not None:
            for eps in (1, -1):
                mm = ctx.decomposition(1, 2, eps)
                chain.level2[eps] = mm.partners_of_left(chain.source_at_level2(eps))
    ctx.memo[key] = chain
    return chain


def cuspidal_unipotent_so5(ctx: SuiteContext, eps: int) -> ClassFunction | None:
    """lambda'_1 on SO^eps_5: the SO restriction of the level-2 lift in the chain."""
    chain = theta_chain(ctx)
    if chain is None or chain.eps0 is None:
        return None
    partners = chain.level2.get(eps, {})
    if len(partners) != 1:
        return None
    (j,) = partners
    o_table = ctx.table(ctx.o(2, eps))
    return restrict(o_table[j], ctx.so(2, eps)).with_label("lambda'_1")


def sp4_partners_through_chain(ctx: SuiteContext, eps: int) -> list[int] | None:
    """Sp_4 irreducibles paired at Sp_4 x O^eps_5 with an extension of chi lambda'_1.

    This reaches the cuspidal unipotent of Sp_4 from the level-2 lift of the
    chain instead of from its degree, so the two picks can be compared.
    """
    reference = cuspidal_unipotent_so5(ctx, eps)
    if reference is None:
        return None
    so = ctx.so(2, eps)
    target = chi_character(so) * reference
    o_table = ctx.table(ctx.o(2, eps))
    extensions = [j for j in range(len(o_table)) if restrict(o_table[j], so) == target]
    mm = ctx.decomposition(2, 2, eps)
    return sorted({i for j in extensions for i in mm.partners_of_right(j)})
