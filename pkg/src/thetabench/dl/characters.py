"""Deligne-Lusztig characters at the supported scale, uniform projection and series labels.

Supported evaluations:

* split tori T_w = GL_1(q)^n in Sp_{2n}, SO_{2n+1} and GL_n, where R_{T,theta} is
  Harish-Chandra induction of theta from the Borel subgroup;
* every torus of a group of semisimple rank one (Sp_2, SO_3), through the character
  formula with Jordan decomposition g = su: at central s the value is
  theta(s) Q_T(u), and at noncentral s (then u = 1 and C(s)^0 = T) it is
  |C_G(s)| / |T| times the sum of theta over T meeting the class of s;
* torus groups T themselves, where R_{T,theta} = theta.

Everything else raises UnsupportedScale naming the Green functions it would need.
"""

from __future__ import annotations

from collections.abc import Callable, Mapping, Sequence
from dataclasses import dataclass
from fractions import Fraction
from typing import Literal
from weakref import WeakKeyDictionary

import numpy as np
import sympy
from pydantic import BaseModel, ConfigDict
from sympy.ntheory.modular import crt

from thetabench.algebra.cyclotomic import Cyclotomic, dot, total
from thetabench.chartab.classfn import (
    CharacterTable,
    ClassFunction,
    ProductClassFunction,
    inner_product,
)
from thetabench.chartab.induction import hc_induce, levi_character, restrict
from thetabench.core.errors import BasisDegenerate, NotSpecialOrthogonal, UnsupportedScale
from thetabench.core.types import Family
from thetabench.dl.torus import (
    TorusCharacter,
    all_characters,
    theta_w,
    trivial_character,
)
from thetabench.dl.weyl import SignedCycleType, weyl_classes, weyl_order
from thetabench.groups.parabolic import ParabolicData, borel_levi, parabolic
from thetabench.groups.spinor import spinor_norm_by_class
from thetabench.groups.table import (
    GroupTable,
    orthogonal_descriptor,
    subgroup_table,
    torus_factor_generator,
)

_DL_CACHE: WeakKeyDictionary[GroupTable, dict[tuple, ClassFunction]] = WeakKeyDictionary()
_BOREL_CACHE: WeakKeyDictionary[GroupTable, ParabolicData] = WeakKeyDictionary()
_SO_CACHE: WeakKeyDictionary[GroupTable, GroupTable] = WeakKeyDictionary()


def borel(group: GroupTable) -> ParabolicData:
    if group not in _BOREL_CACHE:
        _BOREL_CACHE[group] = parabolic(group, borel_levi(group))
    return _BOREL_CACHE[group]


# rank-one tori


@dataclass(frozen=True)
class RankOneTorus:
    """A cyclic maximal torus <t0> of Sp_2 or SO_3; powers[k] is the position of t0^k.

    For the split torus t0 has eigenvalue the primitive element of F_q; for the
    elliptic one t0 has eigenvalue eta, a fixed generator of U_1(q) cut out by its
    trace, so both groups read torus coordinates the same way.
    """

    sign: int
    powers: np.ndarray

    @property
    def order(self) -> int:
        return int(self.powers.size)


def _check_rank_one(group: GroupTable) -> None:
    desc = group.descriptor
    ok = desc is not None and (
        (desc.family == Family.SP and desc.dim == 2) or (desc.family == Family.SO and desc.dim == 3)
    )
    if not ok:
        raise UnsupportedScale(f"{group.name} is not Sp_2 or SO_3")


def elliptic_trace(group: GroupTable) -> int:
    """Smallest tau with x^2 - tau x + 1 irreducible and its roots of order q + 1."""
    f = group.field
    q = f.q
    one = f.identity(2)
    for tau in range(q):
        disc = f.sub(f.mul_table[tau, tau], f.elem(4))
        if f.legendre(int(disc)) != -1:
            continue
        comp = np.array([[0, f.neg_table[1]], [1, tau]], dtype=np.int64)
        cur, order = comp, 1
        while not np.array_equal(cur, one):
            cur = f.matmul(cur, comp)
            order += 1
        if order == q + 1:
            return tau
    raise UnsupportedScale(f"no generator of U_1({q}) found")


def _powers(group: GroupTable, t0: np.ndarray, order: int) -> np.ndarray:
    f = group.field
    out = np.empty(order, dtype=np.int64)
    cur = f.identity(group.dim)
    for k in range(order):
        out[k] = group.position(cur)
        cur = f.matmul(cur, t0)
    if not np.array_equal(cur, f.identity(group.dim)):
        raise UnsupportedScale(f"torus generator of {group.name} has the wrong order")
    return out


def rank_one_torus(group: GroupTable, sign: int) -> RankOneTorus:
    """The split (sign +1) or elliptic (sign -1) torus of Sp_2 or SO_3."""
    _check_rank_one(group)
    f = group.field
    q = f.q
    if sign > 0:
        P = borel(group)
        levi = P.levi_table
        for g in levi.elements:
            blocks, _ = P.levi_components(g)
            if blocks[0][0, 0] == f.primitive:
                return RankOneTorus(1, _powers(group, g, q - 1))
        raise UnsupportedScale(f"no split torus generator in {levi.name}")
    tau = elliptic_trace(group)
    # SO_3 elements of the elliptic torus have eigenvalues 1, eta, eta^-1
    target = tau if group.descriptor.family == Family.SP else int(f.add_table[tau, 1])
    for c, rep in enumerate(group.class_reps):
        g = group.elements[rep]
        tr = 0
        for i in range(group.dim):
            tr = int(f.add_table[tr, g[i, i]])
        if tr == target and int(group.class_orders[c]) == q + 1:
            return RankOneTorus(-1, _powers(group, g, q + 1))
    raise UnsupportedScale(f"no elliptic torus generator in {group.name}")


def _jordan_exponents(order: int, p: int) -> tuple[int, int]:
    """(e_s, e_u) with g^e_s semisimple and g^e_u unipotent for g of the given order."""
    pa = 1
    while order % (pa * p) == 0:
        pa *= p
    m = order // pa
    if pa == 1:
        return 1, 0
    if m == 1:
        return 0, 1
    e_s, _ = crt([m, pa], [1, 0])
    e_u, _ = crt([m, pa], [0, 1])
    return int(e_s), int(e_u)


def rank_one_dl_character(
    group: GroupTable, torus: RankOneTorus, theta: TorusCharacter
) -> ClassFunction:
    """R_{T,theta} on Sp_2 or SO_3 from the character formula."""
    f = group.field
    n_t = torus.order
    theta_vals = [theta.value((k,)) for k in range(n_t)]
    t_classes = group.class_of[torus.powers]
    p_part = 1
    while group.order % (p_part * f.p) == 0:
        p_part *= f.p
    green_one = torus.sign * (group.order // p_part) // n_t
    unit_class = int(group.class_of[group.identity])

    values: list[Cyclotomic] = []
    for c in range(group.num_classes):
        e_s, e_u = _jordan_exponents(int(group.class_orders[c]), f.p)
        s_class = group.power_class(c, e_s)
        unipotent_part_trivial = group.power_class(c, e_u) == unit_class
        if group.class_sizes[s_class] == 1:
            s_pos = int(group.class_reps[s_class])
            hits = np.flatnonzero(torus.powers == s_pos)
            if hits.size == 0:
                raise UnsupportedScale(f"central element of {group.name} outside the torus")
            green = green_one if unipotent_part_trivial else 1
            values.append(theta_vals[int(hits[0])] * green)
            continue
        if not unipotent_part_trivial:
            raise UnsupportedScale(
                f"Green function of C(s)^0 at a nontrivial unipotent of {group.name}"
            )
        hits = np.flatnonzero(t_classes == s_class)
        weight = Fraction(int(group.centralizer_orders[s_class]), n_t)
        values.append(total(theta_vals[int(k)] for k in hits) * weight)
    kind = "split" if torus.sign > 0 else "ell"
    return ClassFunction(group, values, f"R(T_{kind},{theta.label()})")


# the other supported routes


def split_series_character(
    group: GroupTable, theta: TorusCharacter, middle: ClassFunction | None = None
) -> ClassFunction:
    """R^G_{G_0 x T_n}(middle (x) theta) from the Borel, theta on the split torus T_n.

    ``middle`` is a class function of the anisotropic kernel G_0 (O_1 for odd
    orthogonal groups); None stands for its trivial character.
    """
    if not theta.torus.is_split or len(theta.torus.factors) != group.descriptor.rank:
        raise ValueError(f"{theta.torus.label()} is not the split torus of {group.name}")
    if group.descriptor.rank == 0:
        if middle is None:
            return ClassFunction.trivial(group)
        return ClassFunction.from_matrix_function(group, middle.at_matrix, middle.label)
    P = borel(group)
    f = group.field
    q = f.q

    def block_fn(e: int) -> Callable[[np.ndarray], Cyclotomic]:
        return lambda a: Cyclotomic.zeta(q - 1, e * int(f.log_table[a[0, 0]]))

    sigma = levi_character(
        P, [block_fn(e) for e in theta.exponents], middle, label=f"theta[{theta.label()}]"
    )
    tag = f"{middle.label}," if middle is not None else ""
    return hc_induce(P, sigma).with_label(f"R({tag}{theta.label()})")


def _split_dl_character(group: GroupTable, theta: TorusCharacter) -> ClassFunction:
    return split_series_character(group, theta).with_label(f"R(T_split,{theta.label()})")


def _torus_group_character(group: GroupTable, theta: TorusCharacter) -> ClassFunction:
    desc = group.descriptor
    if desc.torus != theta.torus.factors:
        raise ValueError(f"{theta.torus.label()} is not the torus {group.name}")
    f = group.field
    logs: list[dict[bytes, int]] = []
    for a, s in desc.torus:
        gen = torus_factor_generator(f, a, s)
        cur = f.identity(gen.shape[0])
        table: dict[bytes, int] = {}
        for k in range(f.q**a - s):
            table[cur.tobytes()] = k
            cur = f.matmul(cur, gen)
        logs.append(table)
    values = []
    for rep in group.class_reps:
        g = group.elements[rep]
        coords, offset = [], 0
        for (a, s), table in zip(desc.torus, logs):
            size = a if s > 0 else 2 * a
            block = np.ascontiguousarray(g[offset : offset + size, offset : offset + size])
            coords.append(table[block.tobytes()])
            offset += size
        values.append(theta.value(coords))
    return ClassFunction(group, values, theta.label())


def dl_character(group: GroupTable, w: SignedCycleType, theta: TorusCharacter) -> ClassFunction:
    """R^G_{T_w, theta}; raises UnsupportedScale outside the supported scale."""
    if theta.torus.sorted_factors() != w.cycles:
        raise ValueError(f"character of {theta.torus.label()} does not live on T_{w.label()}")
    desc = group.descriptor
    if desc is None:
        raise UnsupportedScale(f"{group.name} carries no classical descriptor")
    if theta.q != desc.q:
        raise ValueError(f"character over F_{theta.q} for a group over F_{desc.q}")
    cache = _DL_CACHE.setdefault(group, {})
    key = (w, theta)
    if key in cache:
        return cache[key]

    if desc.family == Family.TORUS:
        result = _torus_group_character(group, theta)
    elif desc.family in (Family.SP, Family.SO, Family.GL):
        if desc.rank != w.n:
            raise ValueError(f"T_{w.label()} is not a maximal torus of {group.name}")
        if w.n == 0:
            result = ClassFunction.trivial(group)
        elif w.is_split and (desc.family != Family.SO or desc.dim % 2):
            result = _split_dl_character(group, theta)
        elif w.n == 1 and desc.family in (Family.SP, Family.SO):
            result = rank_one_dl_character(group, rank_one_torus(group, w.eps), theta)
        else:
            raise UnsupportedScale(
                f"R_(T_{w.label()}) on {group.name} needs the Green functions "
                f"Q^(C(s)^0)_T of the torus {w.torus().label()}"
            )
    else:
        raise UnsupportedScale(f"{group.name} is disconnected; use its SO subgroup")
    cache[key] = result
    return result


def dl_character_product(
    group: GroupTable,
    v: SignedCycleType,
    theta: TorusCharacter,
    w: SignedCycleType,
    phi: TorusCharacter,
) -> ClassFunction:
    """R^G_{T_v x T_w, theta (x) phi}."""
    combined = SignedCycleType(cycles=v.cycles + w.cycles)
    return dl_character(group, combined, theta.tensor(phi))


def weyl_average(
    group: GroupTable, character_for: Callable[[SignedCycleType], TorusCharacter]
) -> ClassFunction:
    """1/|W| sum over w in W of R_{T_w, character_for(w)}."""
    desc = group.descriptor
    n = desc.rank
    out = ClassFunction.zero(group)
    for w in weyl_classes(n):
        out = out + dl_character(group, w, character_for(w)) * Fraction(
            w.class_size(), weyl_order(n)
        )
    return out


def unipotent_average(group: GroupTable) -> ClassFunction:
    """The W-average of R_{T_w,1}: the trivial character."""
    q = group.field.q
    return weyl_average(group, lambda w: trivial_character(w.torus(), q)).with_label("avg R(1)")


def chi_character(group: GroupTable) -> ClassFunction:
    """The spinor-norm character chi of SO_{2n+1}, evaluated class by class."""
    desc = group.descriptor
    if desc is None or desc.family != Family.SO:
        raise NotSpecialOrthogonal(f"{group.name} is not a special orthogonal group")
    return ClassFunction(group, spinor_norm_by_class(group), "chi")


def chi_character_dl(group: GroupTable) -> ClassFunction:
    """chi as the W-average of R_{T_w, theta_w}."""
    q = group.field.q
    return weyl_average(group, lambda w: theta_w(w.torus(), q)).with_label("avg R(theta_w)")


def special_subgroup(o_group: GroupTable) -> GroupTable:
    """SO inside an orthogonal group table, as a subgroup table carrying its descriptor."""
    desc = o_group.descriptor
    if desc is None or desc.family != Family.O:
        raise NotSpecialOrthogonal(f"{o_group.name} is not a full orthogonal group")
    if o_group not in _SO_CACHE:
        f = o_group.field
        dets = np.array([f.det(o_group.elements[r]) for r in o_group.class_reps])
        positions = np.flatnonzero(dets[o_group.class_of] == 1)
        so_desc = orthogonal_descriptor(desc.dim, desc.q, desc.eps, special=True)
        _SO_CACHE[o_group] = subgroup_table(o_group, positions, so_desc.label(), so_desc)
    return _SO_CACHE[o_group]


# uniform projection


def uniform_basis(group: GroupTable) -> list[ClassFunction]:
    """Distinct nonzero R_{T_w,theta} available at the supported scale."""
    q = group.field.q
    out: list[ClassFunction] = []
    for w in weyl_classes(group.descriptor.rank):
        for theta in all_characters(w.torus(), q):
            try:
                chi = dl_character(group, w, theta)
            except UnsupportedScale:
                break
            if not chi.is_zero and all(chi != b for b in out):
                out.append(chi)
    return out


def _gram_inverse(basis: Sequence[ClassFunction]) -> sympy.Matrix:
    size = len(basis)
    gram = sympy.zeros(size, size)
    for i in range(size):
        for j in range(size):
            value = inner_product(basis[j], basis[i])
            if not value.is_rational:
                raise ValueError(f"Gram entry ({i}, {j}) = {value} is not rational")
            frac = value.to_fraction()
            gram[i, j] = sympy.Rational(frac.numerator, frac.denominator)
    if size and gram.det() == 0:
        raise BasisDegenerate(f"the {size} basis functions are linearly dependent")
    return gram.inv() if size else gram


def _fractions(row) -> list[Fraction]:
    return [Fraction(int(x.p), int(x.q)) for x in row]


def uniform_project(f: ClassFunction, basis: Sequence[ClassFunction]) -> ClassFunction:
    """Orthogonal projection of f onto the span of the basis."""
    inv = _gram_inverse(basis)
    rhs = [inner_product(f, b) for b in basis]
    out = ClassFunction.zero(f.group)
    for j, b in enumerate(basis):
        coeff = dot(_fractions(inv.row(j)), rhs, [1] * len(rhs))
        if not coeff.is_zero:
            out = out + b * coeff
    return out.with_label(f"{f.label}#")


def uniform_project_pair(
    F: ProductClassFunction,
    left_basis: Sequence[ClassFunction],
    right_basis: Sequence[ClassFunction],
) -> ProductClassFunction:
    """Projection of F onto the span of the products b (x) b'."""
    inv_l = _gram_inverse(left_basis)
    inv_r = _gram_inverse(right_basis)
    rhs = [[F.pair_with(b, bp) for bp in right_basis] for b in left_basis]
    nl, nr = len(left_basis), len(right_basis)
    # c = inv_l * rhs * inv_r (both Gram matrices are symmetric)
    half = [
        [dot(_fractions(inv_l.row(i)), [rhs[a][j] for a in range(nl)], [1] * nl) for j in range(nr)]
        for i in range(nl)
    ]
    out = ProductClassFunction(
        F.left, F.right, [[0] * F.right.num_classes for _ in range(F.left.num_classes)]
    )
    for j, bp in enumerate(right_basis):
        weights = _fractions(inv_r.col(j))
        left_part = ClassFunction.zero(F.left)
        for i, b in enumerate(left_basis):
            coeff = dot(weights, [half[i][k] for k in range(nr)], [1] * nr)
            if not coeff.is_zero:
                left_part = left_part + b * coeff
        if not left_part.is_zero:
            out = out + ProductClassFunction.outer(left_part, bp)
    out.label = f"{F.label}#"
    return out


# series identification


class SeriesWitness(BaseModel):
    """Series label of an irreducible with the virtual character that exhibits it."""

    model_config = ConfigDict(frozen=True)

    label: Literal["unipotent", "theta", "other"]
    witness: str = ""
    multiplicity: int = 0


def _series_candidates(group: GroupTable) -> list[tuple[str, ClassFunction]]:
    q = group.field.q
    out = []
    for w in weyl_classes(group.descriptor.rank):
        try:
            out.append(("unipotent", dl_character(group, w, trivial_character(w.torus(), q))))
        except UnsupportedScale:
            continue
    for w in weyl_classes(group.descriptor.rank):
        try:
            out.append(("theta", dl_character(group, w, theta_w(w.torus(), q))))
        except UnsupportedScale:
            continue
    return out


def classify_series(
    table: CharacterTable,
    index: int,
    chain_witnesses: Mapping[int, SeriesWitness] | None = None,
) -> SeriesWitness:
    """Unipotent / theta / other for table[index], first witness wins.

    Full orthogonal groups are classified through the restriction to SO. "other"
    means no witness at the supported scale, not a proof of absence.
    """
    if chain_witnesses and index in chain_witnesses:
        return chain_witnesses[index]
    pi = table[index]
    group = table.group
    desc = group.descriptor
    if desc is not None and desc.family == Family.O and desc.dim % 2:
        so = special_subgroup(group)
        pi = restrict(pi, so)
        group = so
    for label, chi in _series_candidates(group):
        m = inner_product(pi, chi)
        if not m.is_zero:
            return SeriesWitness(label=label, witness=chi.label, multiplicity=int(m.to_fraction()))
    return SeriesWitness(label="other")
