"""Suites on the Weil representation itself and on its decomposition over dual pairs."""

from __future__ import annotations

import numpy as np

from thetabench.algebra.cyclotomic import Cyclotomic
from thetabench.chartab.classfn import ClassFunction, ProductClassFunction
from thetabench.dl.characters import (
    chi_character,
    split_series_character,
    uniform_basis,
    uniform_project_pair,
)
from thetabench.dl.pan import pan_rhs
from thetabench.dl.torus import TorusCharacter, split_torus
from thetabench.groups.parabolic import LeviDescriptor, parabolic
from thetabench.runners.checks import Tally, optional
from thetabench.runners.context import SuiteContext
from thetabench.weil.dense import dense_weil, densify
from thetabench.weil.kernel import compose
from thetabench.weil.operator import weil_operator, weil_trace
from thetabench.weil.theta import jacquet_of_weil, weil_character, weil_pair_character

EPSILONS = (1, -1)


# weil-model


def _check_product(
    tally: Tally, ctx: SuiteContext, g: np.ndarray, h: np.ndarray, gh: np.ndarray, what: str
) -> None:
    f = ctx.field
    budget = ctx.budgets.dense_oracle_dim
    op = compose(weil_operator(f, g), weil_operator(f, h))
    if f.q ** (g.shape[0] // 2) <= budget:
        ok = densify(op, budget) == dense_weil(f, gh, budget)
        tally.check(ok, f"omega(g) omega(h) = omega(gh) {what}", g=g.tolist(), h=h.tolist())
    else:
        tally.equal_values(op.trace(), weil_trace(f, gh), f"tr omega(g) omega(h) {what}")


def _check_embedded(
    tally: Tally, ctx: SuiteContext, n_prime: int, eps: int, samples: int
) -> None:
    f = ctx.field
    pair = ctx.pair(1, n_prime, eps)
    left, right = ctx.sp(1), ctx.o(n_prime, eps)
    rng = ctx.rng(100 + 2 * n_prime + eps)
    what = f"on {left.name} x {right.name}"
    for (i, j), (k, m) in zip(left.random_pairs(rng, samples), right.random_pairs(rng, samples)):
        g = pair.embed(left.elements[i], right.elements[k])
        h = pair.embed(left.elements[j], right.elements[m])
        tally.check(pair.preserves_standard_form(g), f"g (x) g' is symplectic {what}")
        _check_product(tally, ctx, g, h, f.matmul(g, h), what)


def check_weil_model(ctx: SuiteContext, n: int, samples: int, tally: Tally) -> None:
    """The kernel model of omega on Sp_{2n}(q) against the dense oracle.

    Traces agree with the dense model, |tr omega(g)|^2 = q^{dim ker(g - 1)} and
    ``samples`` random products are multiplicative. Sp_2 is checked element by
    element, larger groups on class representatives.
    """
    f = ctx.field
    group = ctx.sp(n)
    budget = ctx.budgets.dense_oracle_dim
    dense = f.q**n <= budget
    positions = range(group.order) if n == 1 else [int(r) for r in group.class_reps]
    for pos in positions:
        g = group.elements[pos]
        tr = weil_trace(f, g)
        fixed = 2 * n - f.rank(f.sub(g, f.identity(2 * n)))
        tally.equal_values(
            tr.abs2(), Cyclotomic.rational(f.q**fixed), "|tr omega(g)|^2", element=g.tolist()
        )
        if dense:
            tally.equal_values(
                tr, dense_weil(f, g, budget).trace(), "kernel trace = dense trace",
                element=g.tolist(),
            )
    for i, j in group.random_pairs(ctx.rng(n), samples):
        g, h = group.elements[i], group.elements[j]
        _check_product(tally, ctx, g, h, f.matmul(g, h), f"on {group.name}")


def weil_model(ctx: SuiteContext, tally: Tally) -> None:
    """Kernel calculus of omega against the dense model, and multiplicativity."""
    samples = ctx.budgets.weil_random_pairs
    check_weil_model(ctx, 1, samples, tally)
    with optional(tally, "omega on Sp_4"):
        check_weil_model(ctx, 2, samples, tally)
    for eps in EPSILONS:
        for n_prime in (0, 1):
            with optional(tally, f"omega on Sp_2 x O^{eps}_{2 * n_prime + 1}"):
                _check_embedded(tally, ctx, n_prime, eps, samples // 4)


# decompositions


def decomposition_integrality(ctx: SuiteContext, tally: Tally) -> None:
    """sum m(pi, pi') deg(pi) deg(pi') = q^N with nonnegative integer m."""
    largest: dict[str, int] = {}
    for n in (1, 2):
        for n_prime in (0, 1, 2):
            for eps in EPSILONS:
                with optional(tally, f"Sp_{2 * n} x O^{eps}_{2 * n_prime + 1}"):
                    mm = ctx.decomposition(n, n_prime, eps)
                    tally.equal_values(
                        mm.total_dimension(), mm.expected_dimension, "dimension bookkeeping",
                        pair=mm.label(),
                    )
                    largest[mm.label()] = int(mm.entries.max(initial=0))
    tally.notes["max_multiplicity"] = largest


def pan_decomposition(ctx: SuiteContext, tally: Tally) -> None:
    """Uniform projection of omega, twisted by 1 (x) chi, against the DL sum."""
    for n_prime in (0, 1):
        for eps in EPSILONS:
            sp = ctx.sp(1)
            so = ctx.so(n_prime, eps)
            omega = weil_pair_character(ctx.pair(1, n_prime, eps), sp, so)
            projected = uniform_project_pair(omega, uniform_basis(sp), uniform_basis(so))
            twist = ProductClassFunction.outer(ClassFunction.trivial(sp), chi_character(so))
            lhs = projected * twist
            lhs.label = f"omega#(1 x chi)[{sp.name} x {so.name}]"
            tally.equal_products(lhs, pan_rhs(sp, so), "uniform projection of omega")


def _jacquet_rhs(
    ctx: SuiteContext, eps: int, levi: list[tuple[int, np.ndarray]]
) -> list[list[Cyclotomic]]:
    """omega_{1,0}(g, m) + sum_sigma sigma^-1(a) Ind_B(sigma chi)(g) on Sp_2 x (GL_1 x O_1).

    chi is the quadratic character; the GL_1 factor carries no twist on the first term.
    """
    f = ctx.field
    q = ctx.q
    sp = ctx.sp(1)
    small = ctx.pair(1, 0, eps)
    half = (q - 1) // 2
    series = [
        split_series_character(
            sp, TorusCharacter(torus=split_torus(1), q=q, exponents=((r + half) % (q - 1),))
        )
        for r in range(q - 1)
    ]
    rows = []
    for i, rep in enumerate(sp.class_reps):
        g = sp.elements[int(rep)]
        row = []
        for a, mid in levi:
            value = weil_character(small, g, mid)
            for r, chi in enumerate(series):
                value = value + chi.values[i] * Cyclotomic.zeta(q - 1, -r * int(f.log_table[a]))
            row.append(value)
        rows.append(row)
    return rows


def mvw_jacquet(ctx: SuiteContext, tally: Tally) -> None:
    """Jacquet module of omega along the Siegel parabolic of O_3, against the MVW decomposition."""
    sp = ctx.sp(1)
    for eps in EPSILONS:
        o3 = ctx.o(1, eps)
        P = parabolic(o3, LeviDescriptor(gl_blocks=(1,), classical_rank=0))
        J = jacquet_of_weil(ctx.pair(1, 1, eps), sp, P)
        levi_table = P.levi_table
        levi = []
        for rep in levi_table.class_reps:
            blocks, mid = P.levi_components(levi_table.elements[int(rep)])
            levi.append((int(blocks[0][0, 0]), mid))
        rhs = ProductClassFunction(sp, levi_table, _jacquet_rhs(ctx, eps, levi), "MVW")
        tally.equal_products(J, rhs, f"Jacquet module on {o3.name}")
