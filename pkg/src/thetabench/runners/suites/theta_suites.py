"""Suites on the theta correspondence: series, first occurrence, conservation, the lift diagram."""

from __future__ import annotations

from collections.abc import Callable, Iterator
from functools import partial

from thetabench.chartab.classfn import CharacterTable, ClassFunction, inner_product
from thetabench.chartab.induction import restrict
from thetabench.core.errors import BoundExhausted, UnsupportedScale
from thetabench.core.types import TowerId
from thetabench.dl.characters import (
    SeriesWitness,
    chi_character,
    classify_series,
    dl_character_product,
    split_series_character,
)
from thetabench.dl.torus import (
    TorusCharacter,
    TorusDescriptor,
    split_torus,
    theta_kl,
    theta_kl_prime,
    theta_w,
    trivial_character,
)
from thetabench.dl.weyl import weyl_classes
from thetabench.groups.table import GroupTable
from thetabench.runners.checks import Tally, optional
from thetabench.runners.context import SuiteContext
from thetabench.runners.suites.identify import (
    Membership,
    central_sign,
    cuspidal_indices,
    cuspidal_theta_sp2,
    cuspidal_unipotent_so5,
    cuspidal_unipotent_sp4,
    lusztig_degree,
    series_membership,
    sign_character,
    sp4_chain_witnesses,
    sp4_overrides,
    sp4_partners_through_chain,
    theta_chain,
)
from thetabench.weil.theta import (
    LEFT,
    RIGHT,
    MultiplicityMatrix,
    first_occurrence,
    theta_nonzero,
    tower_space,
)

EPSILONS = (1, -1)
SEARCH_LEVELS = 2

CharacterFor = Callable[[TorusDescriptor, int], TorusCharacter]


def _overrides(ctx: SuiteContext, n: int) -> dict[int, Membership]:
    return sp4_overrides(ctx) if n == 2 else {}


def _occurs_in_products(
    pi: ClassFunction, first_rank: int, second_rank: int, first: CharacterFor, second: CharacterFor
) -> bool | None:
    """Whether pi meets some R_{T_v x T_w, first(T_v) (x) second(T_w)}; None if undecided."""
    group = pi.group
    q = group.field.q
    complete = True
    for v in weyl_classes(first_rank):
        for w in weyl_classes(second_rank):
            try:
                chi = dl_character_product(
                    group, v, first(v.torus(), q), w, second(w.torus(), q)
                )
            except UnsupportedScale:
                complete = False
                continue
            if not inner_product(pi, chi).is_zero:
                return True
    return False if complete else None


# thm-uni


def _series_labels(
    table: CharacterTable, indices: set[int], chain: dict[int, SeriesWitness] | None = None
) -> dict[str, str]:
    out = {}
    for i in sorted(indices):
        sw = classify_series(table, i, chain)
        out[table[i].label] = f"{sw.label} ({sw.witness})" if sw.witness else sw.label
    return out


def _check_uni(
    ctx: SuiteContext,
    tally: Tally,
    n: int,
    n_prime: int,
    eps: int,
    inconclusive: list[str],
    series: dict[str, dict[str, dict[str, str]]],
) -> None:
    mm = ctx.decomposition(n, n_prime, eps)
    so = ctx.so(n_prime, eps)
    overrides = _overrides(ctx, n)
    occurring = mm.nonzero()
    chain = sp4_chain_witnesses(ctx) if n == 2 else None
    series[mm.label()] = {
        mm.left.group.name: _series_labels(mm.left, {i for i, _, _ in occurring}, chain),
        mm.right.group.name: _series_labels(mm.right, {j for _, j, _ in occurring}),
    }
    for i, j, _ in occurring:
        pi, pi_prime = mm.left[i], mm.right[j]
        where = f"{pi.label} x {pi_prime.label} in {mm.label()}"
        sp_side = series_membership(mm.left, i, overrides)
        o_side = series_membership(mm.right, j)
        if sp_side["unipotent"]:
            if n_prime < n:
                tally.check(False, "unipotent pi forces n' >= n", pair=where)
            else:
                found = _occurs_in_products(
                    restrict(pi_prime, so), n, n_prime - n, theta_w, trivial_character
                )
                if found is None:
                    inconclusive.append(f"(i) {where}")
                else:
                    tally.check(found, "partner of a unipotent lies in R(theta_v x 1)", pair=where)
        if o_side["theta"]:
            if n < n_prime:
                tally.check(False, "theta-representation pi' forces n >= n'", pair=where)
            else:
                found = _occurs_in_products(pi, n_prime, n - n_prime, trivial_character, theta_w)
                if found is None:
                    inconclusive.append(f"(ii) {where}")
                else:
                    tally.check(found, "partner of a theta-rep lies in R(1 x theta_w)", pair=where)
        if sp_side["theta"] is None or o_side["unipotent"] is None:
            inconclusive.append(f"(iii) {where}")
        else:
            tally.check(
                sp_side["theta"] == o_side["unipotent"],
                "pi theta-representation iff pi' unipotent",
                pair=where,
                theta=sp_side["theta"],
                unipotent=o_side["unipotent"],
            )


def thm_uni(ctx: SuiteContext, tally: Tally) -> None:
    """Series of the two members of every pair occurring in omega."""
    inconclusive: list[str] = []
    series: dict[str, dict[str, dict[str, str]]] = {}
    for n, n_prime in ((1, 0), (1, 1), (2, 2)):
        for eps in EPSILONS:
            with optional(tally, f"Sp_{2 * n} x O^{eps}_{2 * n_prime + 1}"):
                _check_uni(ctx, tally, n, n_prime, eps, inconclusive, series)
    tally.notes["inconclusive"] = inconclusive
    tally.notes["series"] = series


# first occurrence


def _sp_sources(ctx: SuiteContext) -> Iterator[tuple[int, int]]:
    """(n, index) of the cuspidal irreducibles of Sp_0 and Sp_2."""
    for n in (0, 1):
        for i in cuspidal_indices(ctx.table(ctx.sp(n))):
            yield n, i


def _o_sources(ctx: SuiteContext, eps: int) -> Iterator[tuple[int, int]]:
    for n_prime in (0, 1):
        for j in cuspidal_indices(ctx.table(ctx.o(n_prime, eps))):
            yield n_prime, j


def _check_first_occurrence(
    tally: Tally,
    source: str,
    lookup: Callable[[int], MultiplicityMatrix],
    index: int,
    side: str,
) -> int | None:
    """Walk a tower: the first lift is one cuspidal irreducible, later ones have no cuspidals."""
    first = None
    for level in range(SEARCH_LEVELS + 1):
        mm = lookup(level)
        if side == LEFT:
            partners, target = mm.partners_of_left(index), mm.right
        else:
            partners, target = mm.partners_of_right(index), mm.left
        if not partners:
            continue
        cuspidal = set(cuspidal_indices(target))
        where = f"{source} -> {target.group.name}"
        if first is None:
            first = level
            tally.check(
                len(partners) == 1
                and next(iter(partners.values())) == 1
                and set(partners) <= cuspidal,
                "first occurrence is irreducible cuspidal",
                source=where,
                partners={target[k].label: m for k, m in partners.items()},
            )
        else:
            stray = sorted(set(partners) & cuspidal)
            tally.check(
                not stray,
                "later occurrences have no cuspidal constituents",
                source=where,
                cuspidal=[target[k].label for k in stray],
            )
    return first


def thm_fo(ctx: SuiteContext, tally: Tally) -> None:
    """First occurrence of cuspidal irreducibles in the odd orthogonal and symplectic towers."""
    levels: dict[str, int | None] = {}
    for eps in EPSILONS:
        for n, i in _sp_sources(ctx):
            label = f"{ctx.table(ctx.sp(n))[i].label} of Sp_{2 * n}"
            with optional(tally, f"{label} in the O^{eps} tower"):
                lookup = partial(_sp_level, ctx, n, eps)
                levels[f"{label}, O^{eps}"] = _check_first_occurrence(
                    tally, label, lookup, i, LEFT
                )
        for n_prime, j in _o_sources(ctx, eps):
            label = f"{ctx.table(ctx.o(n_prime, eps))[j].label} of O^{eps}_{2 * n_prime + 1}"
            with optional(tally, f"{label} in the Sp tower"):
                lookup = partial(_o_level, ctx, n_prime, eps)
                levels[label] = _check_first_occurrence(tally, label, lookup, j, RIGHT)
    tally.notes["first_occurrence"] = levels


def _sp_level(ctx: SuiteContext, n: int, eps: int, level: int) -> MultiplicityMatrix:
    return ctx.decomposition(n, level, eps)


def _o_level(ctx: SuiteContext, n_prime: int, eps: int, level: int) -> MultiplicityMatrix:
    return ctx.decomposition(level, n_prime, eps)


def prop_howe(ctx: SuiteContext, tally: Tally) -> None:
    """Every irreducible of Sp_{2n} occurs in omega^+_{n,n} + omega^-_{n,n}."""
    for n in (1, 2):
        with optional(tally, f"irreducibles of Sp_{2 * n}"):
            table = ctx.table(ctx.sp(n))
            spaces = [tower_space(ctx.field, TowerId.odd(eps), n) for eps in EPSILONS]
            for i, pi in enumerate(table):
                tally.check(
                    any(theta_nonzero(table, i, space) for space in spaces),
                    f"occurs at level {n} of an odd orthogonal tower",
                    irreducible=pi.label,
                    group=table.group.name,
                )


def _first_level(table: CharacterTable, index: int, tower: TowerId, bound: int) -> int | None:
    try:
        return first_occurrence(table, index, tower, bound)
    except BoundExhausted:
        return None


def prop_cons(ctx: SuiteContext, tally: Tally) -> None:
    """Conservation: n'^+ + n'^- = 2n for Sp, n(pi') + n(pi' sgn) = 2n' + 1 for O."""
    bound = ctx.budgets.tower_level_bound
    levels: dict[str, list[int | None]] = {}
    for n in (0, 1):
        table = ctx.table(ctx.sp(n))
        for i in cuspidal_indices(table):
            found = [_first_level(table, i, TowerId.odd(eps), bound) for eps in EPSILONS]
            name = f"{table[i].label} of {table.group.name}"
            levels[name] = found
            if None in found:
                tally.skip(f"first occurrence of {name} beyond level {bound}")
                continue
            tally.equal_values(sum(found), 2 * n, "n'+ + n'- = 2n", source=name, levels=found)
    for eps in EPSILONS:
        for n_prime in (0, 1):
            group = ctx.o(n_prime, eps)
            table = ctx.table(group)
            sgn = sign_character(group)
            for j in cuspidal_indices(table):
                twisted = table.index_of(table[j] * sgn)
                found = [_first_level(table, k, TowerId.SP, bound) for k in (j, twisted)]
                name = f"{table[j].label} of {group.name}"
                levels[name] = found
                if None in found:
                    tally.skip(f"first occurrence of {name} beyond level {bound}")
                    continue
                tally.equal_values(
                    sum(found), 2 * n_prime + 1, "n(pi') + n(pi' sgn) = 2n' + 1",
                    source=name, levels=found,
                )
    tally.notes["first_occurrence"] = levels


def prop_pi_1(ctx: SuiteContext, tally: Tally) -> None:
    """-I acts trivially in unipotent irreducibles of Sp and in their O partners."""
    for n in (1, 2):
        with optional(tally, f"unipotents of Sp_{2 * n}"):
            table = ctx.table(ctx.sp(n))
            overrides = _overrides(ctx, n)
            for i, pi in enumerate(table):
                if series_membership(table, i, overrides)["unipotent"]:
                    tally.equal_values(
                        central_sign(pi), 1, "pi(-I) = pi(1)", irreducible=pi.label
                    )
    for n, n_prime in ((1, 0), (1, 1), (2, 2)):
        for eps in EPSILONS:
            with optional(tally, f"partners in Sp_{2 * n} x O^{eps}_{2 * n_prime + 1}"):
                mm = ctx.decomposition(n, n_prime, eps)
                overrides = _overrides(ctx, n)
                for i, j, _ in mm.nonzero():
                    if series_membership(mm.left, i, overrides)["unipotent"]:
                        tally.equal_values(
                            central_sign(mm.right[j]), 1, "pi'(-I) = pi'(1)",
                            pair=f"{mm.left[i].label} x {mm.right[j].label}",
                        )


# the cuspidal unipotent of Sp_4


def _lift_of_sp4_cuspidal(ctx: SuiteContext, tally: Tally, index: int, eps: int) -> None:
    table = ctx.table(ctx.sp(2))
    level = _first_level(table, index, TowerId.odd(eps), SEARCH_LEVELS)
    tally.equal_values(level, 2, "first occurrence of the cuspidal unipotent", eps=eps)
    mm = ctx.decomposition(2, 2, eps)
    partners = mm.partners_of_left(index)
    if not tally.check(
        len(partners) == 1 and set(partners.values()) == {1},
        "lift is one irreducible with multiplicity one",
        pair=mm.label(),
        partners={mm.right[k].label: m for k, m in partners.items()},
    ):
        return
    (j,) = partners
    lift = mm.right[j]
    tally.check(j in cuspidal_indices(mm.right), "lift is cuspidal", lift=lift.label)
    tally.equal_values(central_sign(lift), 1, "lift is trivial on -I", lift=lift.label)
    reference = cuspidal_unipotent_so5(ctx, eps)
    if reference is None:
        tally.skip(f"cuspidal unipotent of SO^{eps}_5 not identified through the theta chain")
        return
    so = ctx.so(2, eps)
    tally.equal(
        restrict(lift, so).with_label(f"Theta({table[index].label})|SO"),
        (chi_character(so) * reference).with_label("chi lambda'_1"),
        "lift restricted to SO is chi times the cuspidal unipotent",
    )
    _record_chain_pick(ctx, tally, index, eps)


def _record_chain_pick(ctx: SuiteContext, tally: Tally, index: int, eps: int) -> None:
    # the degree pick against the Sp_4 partners of chi lambda'_1 from the chain
    partners = sp4_partners_through_chain(ctx, eps) or []
    candidates = ctx.memo.get("sp4-cuspidal-unipotent-candidates", [])
    narrowed = [i for i in partners if i in candidates]
    table = ctx.table(ctx.sp(2))
    tally.notes.setdefault("sp4_pick_vs_chain", {})[str(eps)] = {
        "degree_pick": table[index].label,
        "chain_partners": [table[i].label for i in partners],
        "agree": narrowed == [index],
    }


def thm_3_7(ctx: SuiteContext, tally: Tally) -> None:
    """The cuspidal unipotent of Sp_4 first occurs at O^eps_5 and lifts to chi lambda'_1 (x) 1."""
    with optional(tally, "Sp_4 character table"):
        index = cuspidal_unipotent_sp4(ctx)
        if index is None:
            candidates = ctx.memo.get("sp4-cuspidal-unipotent-candidates", [])
            tally.skip(f"{len(candidates)} candidates for the cuspidal unipotent of Sp_4")
            return
        for eps in EPSILONS:
            with optional(tally, f"Sp_4 x O^{eps}_5"):
                _lift_of_sp4_cuspidal(ctx, tally, index, eps)


# cuspidal theta-representations of Sp_2


def thm_sptheta(ctx: SuiteContext, tally: Tally) -> None:
    """Sp_2 has two cuspidal theta-representations, each with central sign -1."""
    table = ctx.table(ctx.sp(1))
    found = cuspidal_theta_sp2(ctx)
    tally.equal_values(len(found), 2, "number of cuspidal theta-representations of Sp_2")
    values = {}
    for i in found:
        sign = central_sign(table[i])
        values[table[i].label] = sign.to_json()
        tally.equal_values(sign, -1, "lambda_{1,i}(-I) = -deg", irreducible=table[i].label)
    tally.notes["central_signs"] = values


def _single_lift(
    tally: Tally, mm: MultiplicityMatrix, index: int, expected: int, check: str
) -> None:
    partners = mm.partners_of_left(index)
    tally.equal_values(
        partners, {expected: 1}, check, pair=mm.label(), source=mm.left[index].label
    )


def thm_spthetalift(ctx: SuiteContext, tally: Tally) -> None:
    """The theta lift diagram for Sp_0 and Sp_2, with the measured eps0."""
    chain = theta_chain(ctx)
    if chain is None:
        tally.skip("Sp_2 does not have exactly two cuspidal theta-representations")
        return
    if not tally.check(chain.eps0 is not None, "lambda_{1,alpha} occurs at level 0 of one tower"):
        return
    eps0 = chain.eps0
    tally.notes["eps0"] = eps0
    sp2 = ctx.table(ctx.sp(1))

    for eps in EPSILONS:
        mm = ctx.decomposition(0, 0, eps)
        _single_lift(tally, mm, 0, mm.right.trivial_index(), "lambda_0 -> 1")

    for source, eps in ((chain.alpha, eps0), (chain.beta, -eps0)):
        mm = ctx.decomposition(1, 0, eps)
        sgn = mm.right.index_of(sign_character(ctx.o(0, eps)))
        _single_lift(tally, mm, source, sgn, "lambda_{1,i} -> sgn at level 0")

    first = {}
    for source, eps, name in ((chain.alpha, -eps0, "alpha"), (chain.beta, eps0, "beta")):
        level = _first_level(sp2, source, TowerId.odd(eps), SEARCH_LEVELS)
        first[name] = level
        tally.equal_values(level, 2, "first occurrence in the other tower", source=name, eps=eps)
        partners = chain.level2.get(eps, {})
        o5 = ctx.table(ctx.o(2, eps))
        if not tally.check(
            len(partners) == 1 and set(partners.values()) == {1},
            "level 2 lift is one irreducible",
            source=name,
            partners={o5[k].label: m for k, m in partners.items()},
        ):
            continue
        (j,) = partners
        tally.check(j in cuspidal_indices(o5), "level 2 lift is cuspidal", lift=o5[j].label)
        tally.equal_values(central_sign(o5[j]), -1, "level 2 lift has -I = -deg")
        tally.equal_values(o5.degrees[j], lusztig_degree(ctx.q), "level 2 lift degree")
    tally.notes["first_occurrence"] = first

    other = "nonsquare" if ctx.psi_twist == "1" else "1"
    twisted = theta_chain(ctx.with_twist(other), with_level2=False)
    tally.check(
        twisted is not None and twisted.eps0 == -eps0,
        "eps0 flips with a nonsquare twist of psi",
        twisted_eps0=None if twisted is None else twisted.eps0,
    )


# Harish-Chandra series


def _series(
    group: GroupTable,
    table: CharacterTable,
    theta: TorusCharacter,
    middle: ClassFunction | None = None,
) -> set[int]:
    return set(table.constituents(split_series_character(group, theta, middle)))


class _SeriesAtPair:
    """The Harish-Chandra series on both sides of Sp_2m x O^eps_{2m'+1}."""

    def __init__(self, ctx: SuiteContext, m: int, m_prime: int, eps: int) -> None:
        q = ctx.q
        self.m, self.m_prime = m, m_prime
        self.mm = ctx.decomposition(m, m_prime, eps)
        sp, o = ctx.sp(m), ctx.o(m_prime, eps)
        sp_t, o_t = self.mm.left, self.mm.right
        middle = ClassFunction.trivial(ctx.o(0, eps)).with_label("lambda'")
        self.sp_unipotent = _series(sp, sp_t, trivial_character(split_torus(m), q))
        self.sp_theta = _series(sp, sp_t, theta_w(split_torus(m), q))
        self.sp_twisted = _series(sp, sp_t, theta_kl(m_prime, m, q))
        self.o_unipotent = _series(o, o_t, trivial_character(split_torus(m_prime), q), middle)
        self.o_theta = _series(o, o_t, theta_w(split_torus(m_prime), q), middle)
        self.o_twisted = _series(o, o_t, theta_kl_prime(m, m_prime, q), middle)

    def check_lifts(
        self, tally: Tally, side: str, sources: set[int], allowed: set[int], check: str
    ) -> None:
        """Every partner of every source lies in ``allowed``."""
        mm = self.mm
        source_table, target = (mm.left, mm.right) if side == LEFT else (mm.right, mm.left)
        for k in sorted(sources):
            found = mm.partners_of_left(k) if side == LEFT else mm.partners_of_right(k)
            stray = sorted(set(found) - allowed)
            tally.check(
                not stray,
                check,
                source=source_table[k].label,
                pair=mm.label(),
                outside=[target[x].label for x in stray],
            )


def _each_series_pair(
    ctx: SuiteContext, tally: Tally, check_pair: Callable[[_SeriesAtPair], None]
) -> None:
    for m in (0, 1, 2):
        for m_prime in (0, 1, 2):
            for eps in EPSILONS:
                with optional(tally, f"Sp_{2 * m} x O^{eps}_{2 * m_prime + 1}"):
                    check_pair(_SeriesAtPair(ctx, m, m_prime, eps))


def thm_amr2(ctx: SuiteContext, tally: Tally) -> None:
    """Theta maps the Harish-Chandra series over (1_{Sp_0}, 1_{O_1}) as predicted."""

    def check_pair(s: _SeriesAtPair) -> None:
        s.check_lifts(tally, LEFT, s.sp_theta, s.o_unipotent, "theta series -> lambda' series")
        s.check_lifts(tally, RIGHT, s.o_unipotent, s.sp_theta, "lambda' series -> theta series")
        s.check_lifts(
            tally, LEFT, s.sp_unipotent, s.o_twisted, "lambda series -> theta'_{m,m'} series"
        )
        s.check_lifts(
            tally, RIGHT, s.o_theta, s.sp_twisted, "lambda',theta series -> theta_{m',m} series"
        )

    _each_series_pair(ctx, tally, check_pair)


def cor_4_3(ctx: SuiteContext, tally: Tally) -> None:
    """Lifts of the two series vanish below the diagonal and land in the twisted series above."""

    def check_pair(s: _SeriesAtPair) -> None:
        sp_allowed = set() if s.m_prime < s.m else s.o_twisted
        s.check_lifts(tally, LEFT, s.sp_unipotent, sp_allowed, "lambda series lifts")
        o_allowed = set() if s.m < s.m_prime else s.sp_twisted
        s.check_lifts(tally, RIGHT, s.o_theta, o_allowed, "lambda',theta series lifts")

    _each_series_pair(ctx, tally, check_pair)


def fun_classification(ctx: SuiteContext, tally: Tally) -> None:
    """Which small groups have cuspidal unipotent or cuspidal theta-representations."""
    sp2 = ctx.table(ctx.sp(1))
    for i in cuspidal_indices(sp2):
        tally.check(
            series_membership(sp2, i)["unipotent"] is False,
            "Sp_2 has no cuspidal unipotent",
            irreducible=sp2[i].label,
        )
    with optional(tally, "Sp_4 character table"):
        cuspidal_unipotent_sp4(ctx)
        candidates = ctx.memo["sp4-cuspidal-unipotent-candidates"]
        tally.notes["sp4_cuspidal_unipotent_candidates"] = len(candidates)
        tally.equal_values(len(candidates), 1, "Sp_4 has one cuspidal unipotent")
    for eps in EPSILONS:
        o3 = ctx.table(ctx.o(1, eps))
        for j in cuspidal_indices(o3):
            membership = series_membership(o3, j)
            tally.check(
                membership["unipotent"] is False and membership["theta"] is False,
                "O_3 cuspidals are neither unipotent nor theta-representations",
                irreducible=o3[j].label,
                group=o3.group.name,
                membership=membership,
            )
