"""Complete character tables by the class-algebra (Dixon) method.

The class-multiplication matrices M_j[l, m] = #{x in C_j : x^-1 z_m in C_l} act on
the central characters omega_chi(C_m) = |C_m| chi(g_m) / chi(1) by M_j omega =
omega_j omega. Reducing modulo a prime l = 1 (mod exponent) splits every M_j
over GF(l); common eigenvectors give omega mod l, from which degrees and the
eigenvalue multiplicities of each chi(g) are recovered and lifted to exact
cyclotomic values.
"""

from __future__ import annotations

import math

import galois
import numpy as np
import sympy

from thetabench.algebra.cyclotomic import Cyclotomic
from thetabench.chartab.classfn import CharacterTable, ClassFunction
from thetabench.core.errors import BudgetExceeded, NoSuitableLiftPrime
from thetabench.groups.table import DEFAULT_MAX_ORDER, GroupTable

DEFAULT_PRIME_SEARCH = 100_000
_CHUNK = 2048


def lift_prime(group: GroupTable, search: int = DEFAULT_PRIME_SEARCH) -> int:
    """Smallest prime l = 1 (mod exponent) with l > 2 sqrt|G|."""
    e = group.exponent
    floor = 2 * math.isqrt(group.order) + 2
    k = max(1, floor // e)
    for _ in range(search):
        ell = 1 + k * e
        if ell > floor and sympy.isprime(ell):
            return ell
        k += 1
    raise NoSuitableLiftPrime(f"{group.name}: no prime 1 mod {e} within {search} candidates")


def class_matrices(group: GroupTable) -> np.ndarray:
    """A[j, l, m] = #{x in C_j : x^-1 z_m in C_l}, z_m the class representatives."""
    k = group.num_classes
    f = group.field
    reps = group.elements[group.class_reps]
    out = np.zeros((k, k, k), dtype=np.int64)
    for j in range(k):
        members = group.members(j)
        for start in range(0, members.size, _CHUNK):
            chunk = members[start : start + _CHUNK]
            inv = group.elements[group.inverse_positions[chunk]]
            prods = f.matmul(inv[:, None], reps[None]).reshape(-1, group.dim, group.dim)
            classes = group.class_of[group.index_of(prods)].reshape(chunk.size, k)
            for m in range(k):
                out[j, :, m] += np.bincount(classes[:, m], minlength=k)
    return out


def _null_space(gf: type[galois.FieldArray], a: galois.FieldArray) -> galois.FieldArray:
    rows, cols = a.shape
    reduced = a.row_reduce()
    pivots = []
    for row in reduced:
        nz = np.flatnonzero(row)
        if nz.size == 0:
            break
        pivots.append(int(nz[0]))
    free = [j for j in range(cols) if j not in pivots]
    basis = gf.Zeros((cols, len(free)))
    for idx, j in enumerate(free):
        basis[j, idx] = 1
        for r, pc in enumerate(pivots):
            basis[pc, idx] = -reduced[r, j]
    return basis


def _pivot_rows(basis: galois.FieldArray) -> list[int]:
    reduced = basis.T.row_reduce()
    rows = []
    for row in reduced:
        nz = np.flatnonzero(row)
        if nz.size == 0:
            break
        rows.append(int(nz[0]))
    return rows


def common_eigenvectors(gf: type[galois.FieldArray], mats: galois.FieldArray) -> list:
    """Split GF(l)^k into common 1-dimensional eigenspaces of the commuting matrices."""
    k = mats.shape[1]
    spaces = [gf.Identity(k)]
    for a in mats:
        if all(s.shape[1] == 1 for s in spaces):
            break
        refined = []
        for basis in spaces:
            dim = basis.shape[1]
            if dim == 1:
                refined.append(basis)
                continue
            rows = _pivot_rows(basis)
            image = a @ basis
            restricted = np.linalg.inv(basis[rows, :]) @ image[rows, :]
            roots = restricted.characteristic_poly().roots()
            for lam in roots:
                eig = _null_space(gf, restricted - lam * gf.Identity(dim))
                refined.append(basis @ eig)
        spaces = refined
    if any(s.shape[1] != 1 for s in spaces):
        raise ValueError("class matrices do not split into one-dimensional eigenspaces")
    return [s[:, 0] for s in spaces]


def character_table(
    group: GroupTable,
    max_order: int = DEFAULT_MAX_ORDER,
    prime_search: int = DEFAULT_PRIME_SEARCH,
) -> CharacterTable:
    """All irreducible characters of the group, with exact cyclotomic values."""
    if group.order > max_order:
        raise BudgetExceeded(group.name, group.order, max_order)
    k = group.num_classes
    if k == 1:
        return CharacterTable(group, [ClassFunction.trivial(group)])
    ell = lift_prime(group, prime_search)
    gf = galois.GF(ell)
    mats = gf(class_matrices(group) % ell)
    vectors = common_eigenvectors(gf, mats)

    e = group.exponent
    z_e = gf(sympy.primitive_root(ell)) ** ((ell - 1) // e)
    sizes = gf(group.class_sizes % ell)
    inv_class = [group.inverse_class(m) for m in range(k)]
    ident = int(group.class_of[group.identity])
    orders = [int(o) for o in group.class_orders]
    powers = {
        m: [group.power_class(m, t) for t in range(orders[m])] for m in range(k)
    }

    characters = []
    for v in vectors:
        omega = v / v[ident]
        denom = np.sum(omega * omega[inv_class] / sizes)
        d2 = gf(group.order % ell) / denom
        roots = sympy.sqrt_mod(int(d2), ell, all_roots=True)
        if not roots:
            raise ValueError(f"{group.name}: degree square is not a square mod {ell}")
        d = min(int(roots[0]), ell - int(roots[0]))
        chi_mod = gf(d) * omega / sizes
        values = []
        for m in range(k):
            o = orders[m]
            z_o = z_e ** (e // o)
            series = chi_mod[powers[m]]
            inv_o = gf(o) ** -1
            counts = []
            for j in range(o):
                mu = inv_o * np.sum(series * z_o ** ((-j * np.arange(o)) % o))
                mu = int(mu)
                if mu > d:
                    raise ValueError(f"{group.name}: eigenvalue multiplicity {mu} > degree {d}")
                counts.append(mu)
            values.append(Cyclotomic.from_exponent_counts(o, counts))
        characters.append(ClassFunction(group, values))

    characters.sort(
        key=lambda c: (
            int(c.degree.to_fraction()),
            [(v.conductor, v.coeffs, v.denom) for v in c.values],
        )
    )
    table = CharacterTable(group, characters)
    if sum(d * d for d in table.degrees) != group.order:
        raise ValueError(f"{group.name}: degrees do not satisfy sum d^2 = |G|")
    return table
