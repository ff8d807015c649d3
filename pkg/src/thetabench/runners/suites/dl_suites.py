"""Suites on Deligne-Lusztig characters alone: averages, chi, disjointness, counting."""

from __future__ import annotations

from itertools import combinations

from thetabench.chartab.classfn import ClassFunction, inner_product
from thetabench.dl.characters import (
    chi_character,
    chi_character_dl,
    dl_character,
    split_series_character,
    unipotent_average,
)
from thetabench.dl.torus import (
    all_characters,
    rank_one_geometric_class,
    split_torus,
    theta_w,
    trivial_character,
)
from thetabench.dl.weyl import bipartition_count, bipartitions, weyl_classes, weyl_order
from thetabench.groups.table import GroupTable
from thetabench.runners.checks import Tally, optional
from thetabench.runners.context import SuiteContext
from thetabench.runners.suites.identify import series_membership

EPSILONS = (1, -1)


def _is_p_power(order: int, p: int) -> bool:
    while order % p == 0:
        order //= p
    return order == 1


def eq_triv(ctx: SuiteContext, tally: Tally) -> None:
    """The W-average of R_{T_w,1} is the trivial character."""
    groups = [ctx.sp(1)] + [ctx.so(1, eps) for eps in EPSILONS]
    for group in groups:
        tally.equal(unipotent_average(group), ClassFunction.trivial(group), f"avg on {group.name}")


def lemma_chi(ctx: SuiteContext, tally: Tally) -> None:
    """chi is the W-average of R_{T_w,theta_w}; it has order two and is trivial on SO_1."""
    for eps in EPSILONS:
        so3 = ctx.so(1, eps)
        chi = chi_character(so3)
        tally.equal(chi_character_dl(so3), chi, f"chi = avg R(theta_w) on {so3.name}")
        tally.equal(chi * chi, ClassFunction.trivial(so3), f"chi^2 = 1 on {so3.name}")
        so1 = ctx.so(0, eps)
        tally.equal(chi_character(so1), ClassFunction.trivial(so1), f"chi = 1 on {so1.name}")


def _check_unipotent_classes(tally: Tally, group: GroupTable, chi: ClassFunction) -> None:
    p = group.field.p
    bad = [
        c
        for c, order in enumerate(group.class_orders)
        if _is_p_power(int(order), p) and chi.values[c] != 1
    ]
    tally.check(not bad, f"{chi.label} = 1 on unipotent classes of {group.name}", classes=bad)


def lemma_chi_unipotent(ctx: SuiteContext, tally: Tally) -> None:
    """chi(u) = 1 for unipotent u."""
    for eps in EPSILONS:
        so3 = ctx.so(1, eps)
        _check_unipotent_classes(tally, so3, chi_character(so3))
        _check_unipotent_classes(tally, so3, chi_character_dl(so3))
        with optional(tally, f"SO^{eps}_5"):
            so5 = ctx.so(2, eps)
            _check_unipotent_classes(tally, so5, chi_character(so5))


def lemma_chi_twist(ctx: SuiteContext, tally: Tally) -> None:
    """chi R_{w,1} = R_{w,theta_w}, and twisting by chi swaps unipotent and theta series."""
    q = ctx.q
    for eps in EPSILONS:
        so3 = ctx.so(1, eps)
        chi = chi_character(so3)
        table = ctx.table(so3)
        for w in weyl_classes(1):
            unipotent = dl_character(so3, w, trivial_character(w.torus(), q))
            theta = dl_character(so3, w, theta_w(w.torus(), q))
            tally.equal(chi * unipotent, theta, f"chi R_(T_{w.label()},1) on {so3.name}")
            for i in table.constituents(theta):
                j = table.index_of(chi * table[i])
                tally.check(
                    series_membership(table, j)["unipotent"] is True,
                    "chi pi unipotent for pi in a theta_w series",
                    group=so3.name,
                    irreducible=table[i].label,
                )
        for i, pi in enumerate(table):
            j = table.index_of(chi * pi)
            unipotent = series_membership(table, i)["unipotent"]
            twisted = series_membership(table, j)["theta"]
            tally.check(
                unipotent == twisted,
                "pi unipotent iff chi pi in a theta_w series",
                group=so3.name,
                irreducible=pi.label,
                unipotent=unipotent,
                twisted_theta=twisted,
            )


def disjointness(ctx: SuiteContext, tally: Tally) -> None:
    """R_{T,theta} and R_{T',theta'} are orthogonal unless geometrically conjugate."""
    q = ctx.q
    for group in [ctx.sp(1)] + [ctx.so(1, eps) for eps in EPSILONS]:
        pairs = [
            (w, theta) for w in weyl_classes(1) for theta in all_characters(w.torus(), q)
        ]
        for (w1, t1), (w2, t2) in combinations(pairs, 2):
            if rank_one_geometric_class(t1) == rank_one_geometric_class(t2):
                continue
            value = inner_product(dl_character(group, w1, t1), dl_character(group, w2, t2))
            tally.check(
                value.is_zero,
                "orthogonality across geometric classes",
                group=group.name,
                first=f"T_{w1.label()},{t1.label()}",
                second=f"T_{w2.label()},{t2.label()}",
                inner_product=value.to_json(),
            )


def _count_constituents(
    tally: Tally, group: GroupTable, ctx: SuiteContext, theta_name: str, expected: int
) -> None:
    rank = group.descriptor.rank
    torus = split_torus(rank)
    theta = trivial_character(torus, ctx.q) if theta_name == "1" else theta_w(torus, ctx.q)
    series = split_series_character(group, theta)
    count = len(ctx.table(group).constituents(series))
    tally.equal_values(
        count, expected, f"|Irr({group.name})_{theta_name}|", series=series.label
    )


def combinatorics(ctx: SuiteContext, tally: Tally) -> None:
    """Classes of W_n against bipartitions, and sizes of the split principal series."""
    for n in range(7):
        classes = weyl_classes(n)
        tally.equal_values(len(classes), bipartition_count(n), "|W_n classes| = bipartitions", n=n)
        tally.equal_values(len(bipartitions(n)), bipartition_count(n), "bipartition list", n=n)
        tally.equal_values(
            sum(w.class_size() for w in classes), weyl_order(n), "class equation of W_n", n=n
        )
    _count_constituents(tally, ctx.sp(1), ctx, "1", 2)
    for eps in EPSILONS:
        _count_constituents(tally, ctx.so(1, eps), ctx, "1", 2)
        _count_constituents(tally, ctx.so(1, eps), ctx, "theta", 2)
    with optional(tally, "Sp_4 principal series"):
        _count_constituents(tally, ctx.sp(2), ctx, "1", 5)
    with optional(tally, "SO_5 principal series"):
        _count_constituents(tally, ctx.so(2, 1), ctx, "1", 5)
