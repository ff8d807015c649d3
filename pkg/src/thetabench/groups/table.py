"""Fully enumerated finite matrix groups with conjugacy-class data.

A GroupTable stores every element as an int64 matrix, sorted by its canonical
key (row-major base-q digits, or the raw residue bytes when the key does not fit
in 63 bits). Positions in that sorted order are the element ids used across
the package. Classes are the orbits of conjugation by the generators, found as
connected components of the generator-conjugation graph.
"""

from __future__ import annotations

import math
from collections.abc import Iterable, Iterator
from dataclasses import dataclass
from functools import cached_property, reduce

import galois
import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from thetabench.algebra.field import Field
from thetabench.core.errors import (
    BudgetExceeded,
    ElementNotInGroup,
    NotASubgroup,
    UnsupportedFamily,
)
from thetabench.core.rng import SeededRNG
from thetabench.core.types import Family, FormKind
from thetabench.groups.spaces import (
    FormedSpace,
    linear_space,
    orthogonal_space,
    symplectic_space,
)

DEFAULT_MAX_ORDER = 10_000_000


class GroupDescriptor(BaseModel):
    """Family, matrix dimension, form sign and field order of a classical group.

    ``dim`` is the size of the matrices (Sp_{2n} has dim 2n). Torus products
    list their factors as (degree a, sign): +1 for GL_1(q^a), -1 for U_1(q^a).
    """

    model_config = ConfigDict(frozen=True)

    family: Family
    dim: int
    q: int
    eps: int = 0
    torus: tuple[tuple[int, int], ...] = ()

    @model_validator(mode="after")
    def _check(self) -> GroupDescriptor:
        if self.dim < 0:
            raise ValueError("dimension must be nonnegative")
        if self.family == Family.SP and self.dim % 2:
            raise ValueError("symplectic groups need even dimension")
        if self.family in (Family.O, Family.SO):
            if self.eps not in (1, -1):
                raise ValueError("orthogonal groups need eps = +1 or -1")
        elif self.eps:
            raise ValueError(f"{self.family} groups take no eps")
        if self.family == Family.TORUS:
            if not self.torus or any(a < 1 or s not in (1, -1) for a, s in self.torus):
                raise ValueError("torus factors must be (degree >= 1, sign +-1)")
            if self.dim != sum(a if s > 0 else 2 * a for a, s in self.torus):
                raise ValueError("torus dimension does not match its factors")
        return self

    @property
    def rank(self) -> int:
        """Witt index of the form (GL_n: n, torus: 0)."""
        if self.family == Family.SP:
            return self.dim // 2
        if self.family in (Family.O, Family.SO):
            if self.dim % 2 == 0 and self.eps < 0:
                return self.dim // 2 - 1
            return self.dim // 2
        if self.family == Family.GL:
            return self.dim
        return 0

    def label(self) -> str:
        fam = self.family
        if fam == Family.SP:
            return f"Sp_{self.dim}({self.q})"
        if fam in (Family.O, Family.SO):
            sign = "+" if self.eps > 0 else "-"
            return f"{fam.value}{sign}_{self.dim}({self.q})"
        if fam == Family.GL:
            return f"GL_{self.dim}({self.q})"
        parts = [f"{'GL' if s > 0 else 'U'}_1({self.q}^{a})" for a, s in self.torus]
        return " x ".join(parts)


def sp_descriptor(n: int, q: int) -> GroupDescriptor:
    """Sp_{2n}(q)."""
    return GroupDescriptor(family=Family.SP, dim=2 * n, q=q)


def orthogonal_descriptor(
    dim: int, q: int, eps: int, special: bool = False
) -> GroupDescriptor:
    return GroupDescriptor(family=Family.SO if special else Family.O, dim=dim, q=q, eps=eps)


def gl_descriptor(n: int, q: int) -> GroupDescriptor:
    return GroupDescriptor(family=Family.GL, dim=n, q=q)


def torus_descriptor(factors: Iterable[tuple[int, int]], q: int) -> GroupDescriptor:
    factors = tuple((int(a), int(s)) for a, s in factors)
    dim = sum(a if s > 0 else 2 * a for a, s in factors)
    return GroupDescriptor(family=Family.TORUS, dim=dim, q=q, torus=factors)


def order_formula(desc: GroupDescriptor) -> int:
    """Classical order formula for the descriptor's family."""
    q = desc.q
    fam = desc.family
    if fam == Family.SP:
        n = desc.dim // 2
        return q ** (n * n) * math.prod(q ** (2 * i) - 1 for i in range(1, n + 1))
    if fam in (Family.O, Family.SO):
        if desc.dim == 0:
            return 1
        if desc.dim % 2:
            n = desc.dim // 2
            full = 2 * q ** (n * n) * math.prod(q ** (2 * i) - 1 for i in range(1, n + 1))
        else:
            n = desc.dim // 2
            full = (
                2
                * q ** (n * (n - 1))
                * (q**n - desc.eps)
                * math.prod(q ** (2 * i) - 1 for i in range(1, n))
            )
        return full if fam == Family.O else full // 2
    if fam == Family.GL:
        n = desc.dim
        return math.prod(q**n - q**i for i in range(n))
    return math.prod(q**a - s for a, s in desc.torus)


def space_for(desc: GroupDescriptor, field: Field) -> FormedSpace:
    if desc.family == Family.SP:
        return symplectic_space(field, desc.dim // 2)
    if desc.family in (Family.O, Family.SO):
        if desc.dim == 0:
            return orthogonal_space(field, 0, 1)
        return orthogonal_space(field, desc.dim, desc.eps)
    return linear_space(field, desc.dim)


def element_keys(field: Field, mats: np.ndarray) -> np.ndarray:
    """Canonical keys of a batch of matrices: int64 when packable, else bytes."""
    dim = mats.shape[-1]
    if field.packable(dim):
        return field.pack(mats)
    raw = mats.astype(np.uint8).reshape(mats.shape[0], -1)
    return np.array([row.tobytes() for row in raw], dtype=object)


def _matrix_power(field: Field, g: np.ndarray, e: int) -> np.ndarray:
    result = field.identity(g.shape[-1])
    base = g
    while e:
        if e & 1:
            result = field.matmul(result, base)
        base = field.matmul(base, base)
        e >>= 1
    return result


def closure(field: Field, generators: list[np.ndarray], dim: int, limit: int) -> np.ndarray:
    """All products of the generators, by breadth-first search from the identity."""
    ident = field.identity(dim)[None]
    if not generators:
        return ident
    gens = np.stack(generators)
    known = element_keys(field, ident)
    found = [ident]
    frontier = ident
    total = 1
    while frontier.shape[0]:
        prods = field.matmul(frontier[:, None], gens[None]).reshape(-1, dim, dim)
        keys = element_keys(field, prods)
        keys, first = np.unique(keys, return_index=True)
        fresh = ~np.isin(keys, known)
        frontier = prods[first[fresh]]
        total += frontier.shape[0]
        if total > limit:
            raise BudgetExceeded("generated subgroup", total, limit)
        known = np.union1d(known, keys[fresh])
        found.append(frontier)
    return np.concatenate(found)


class GroupTable:
    """A finite matrix group with its element index and conjugacy classes."""

    def __init__(
        self,
        name: str,
        field: Field,
        elements: np.ndarray,
        generators: list[np.ndarray],
        descriptor: GroupDescriptor | None = None,
        space: FormedSpace | None = None,
        class_of: np.ndarray | None = None,
        parent: GroupTable | None = None,
    ) -> None:
        self.name = name
        self.field = field
        self.descriptor = descriptor
        self.space = space
        self.dim = int(elements.shape[-1])
        self.generators = [np.asarray(g, dtype=np.int64) for g in generators]
        keys = element_keys(field, elements)
        order = np.argsort(keys, kind="stable")
        self.keys = keys[order]
        self.elements = np.ascontiguousarray(elements[order])
        self.elements.setflags(write=False)
        self._packed = self.keys.dtype != object
        self.identity = self.position(field.identity(self.dim))
        self.parent = parent
        self.parent_positions = (
            parent.index_of(self.elements) if parent is not None else None
        )
        self._power_cache: dict[tuple[int, int], int] = {}
        if class_of is None:
            self._compute_classes()
        else:
            self._set_classes(np.asarray(class_of, dtype=np.int64))

    def __repr__(self) -> str:
        return f"GroupTable({self.name}, order={self.order}, classes={self.num_classes})"

    # elements

    @property
    def order(self) -> int:
        return int(self.elements.shape[0])

    def index_of(self, mats: np.ndarray) -> np.ndarray:
        """Positions of a batch of matrices; -1 for matrices outside the group."""
        mats = np.asarray(mats, dtype=np.int64).reshape(-1, self.dim, self.dim)
        keys = element_keys(self.field, mats)
        pos = np.searchsorted(self.keys, keys)
        pos = np.minimum(pos, self.order - 1)
        hit = self.keys[pos] == keys
        return np.where(hit, pos, -1).astype(np.int64)

    def position(self, g: np.ndarray) -> int:
        pos = int(self.index_of(g)[0])
        if pos < 0:
            raise ElementNotInGroup(f"matrix is not an element of {self.name}")
        return pos

    def contains(self, g: np.ndarray) -> bool:
        return int(self.index_of(g)[0]) >= 0

    def multiply(self, i: np.ndarray | int, j: np.ndarray | int) -> np.ndarray:
        """Positions of elements[i] @ elements[j] (vectorized)."""
        prods = self.field.matmul(self.elements[i], self.elements[j])
        return self.index_of(prods)

    def inverse_matrices(self, mats: np.ndarray) -> np.ndarray:
        """Inverses of a batch of group elements."""
        f = self.field
        if self.space is not None and self.space.gram is not None and self.dim:
            gram = self.space.gram
            gram_inv = f.inv(gram)
            return f.matmul(f.matmul(gram_inv, f.transpose(mats)), gram)
        return np.stack([f.inv(m) for m in mats]) if len(mats) else mats

    @cached_property
    def inverse_positions(self) -> np.ndarray:
        return self.index_of(self.inverse_matrices(self.elements))

    def conjugation_permutation(self, s: np.ndarray) -> np.ndarray:
        """perm[i] = position of s^-1 g_i s."""
        f = self.field
        s_inv = self.inverse_matrices(s[None])[0]
        return self.index_of(f.matmul(f.matmul(s_inv, self.elements), s))

    def random_pairs(self, rng: SeededRNG, count: int) -> list[tuple[int, int]]:
        return rng.pairs(self.order, count)

    def positions_of_subgroup(self, other: GroupTable) -> np.ndarray:
        """Positions of another table's elements inside this group."""
        pos = self.index_of(other.elements)
        if (pos < 0).any():
            raise NotASubgroup(f"{other.name} is not contained in {self.name}")
        return pos

    # classes

    def _compute_classes(self) -> None:
        n = self.order
        if not self.generators or n == 1:
            labels = np.arange(n)
        else:
            perms = [self.conjugation_permutation(s) for s in self.generators]
            if any((p < 0).any() for p in perms):
                raise NotASubgroup(f"generators of {self.name} do not normalize it")
            rows = np.concatenate([np.arange(n)] * len(perms))
            cols = np.concatenate(perms)
            graph = coo_matrix((np.ones(rows.size, dtype=np.int8), (rows, cols)), shape=(n, n))
            _, labels = connected_components(graph, directed=True, connection="weak")
        reps = np.full(labels.max() + 1, n, dtype=np.int64)
        np.minimum.at(reps, labels, np.arange(n))
        sizes = np.bincount(labels)
        orders = self._element_orders(reps)
        ranking = sorted(range(len(reps)), key=lambda c: (orders[c], sizes[c], reps[c]))
        relabel = np.empty(len(reps), dtype=np.int64)
        relabel[ranking] = np.arange(len(reps))
        self._set_classes(relabel[labels])

    def _set_classes(self, class_of: np.ndarray) -> None:
        self.class_of = class_of
        self.class_of.setflags(write=False)
        k = int(class_of.max()) + 1
        reps = np.full(k, self.order, dtype=np.int64)
        np.minimum.at(reps, class_of, np.arange(self.order))
        self.class_reps = reps
        self.class_sizes = np.bincount(class_of, minlength=k).astype(np.int64)
        self.class_orders = self._element_orders(reps)

    def _element_orders(self, positions: np.ndarray) -> np.ndarray:
        f = self.field
        base = self.elements[positions]
        ident = f.identity(self.dim)
        orders = np.zeros(len(positions), dtype=np.int64)
        current = base.copy()
        step = 1
        pending = np.arange(len(positions))
        while pending.size:
            done = np.all(current[pending] == ident, axis=(1, 2))
            orders[pending[done]] = step
            pending = pending[~done]
            if step > self.order:
                raise ValueError(f"element order exceeds |{self.name}|")
            current[pending] = f.matmul(current[pending], base[pending])
            step += 1
        return orders

    @property
    def num_classes(self) -> int:
        return int(self.class_reps.shape[0])

    def members(self, c: int) -> np.ndarray:
        return np.flatnonzero(self.class_of == c)

    @cached_property
    def exponent(self) -> int:
        return reduce(math.lcm, (int(o) for o in self.class_orders), 1)

    @cached_property
    def center(self) -> np.ndarray:
        """Positions of central elements."""
        central = np.flatnonzero(self.class_sizes == 1)
        return self.class_reps[central]

    @cached_property
    def centralizer_orders(self) -> np.ndarray:
        return self.order // self.class_sizes

    def power_class(self, c: int, k: int) -> int:
        """Class of g^k for g in class c (k may be negative)."""
        key = (c, k)
        if key not in self._power_cache:
            e = k % int(self.class_orders[c])
            g = self.elements[self.class_reps[c]]
            pos = self.position(_matrix_power(self.field, g, e))
            self._power_cache[key] = int(self.class_of[pos])
        return self._power_cache[key]

    def inverse_class(self, c: int) -> int:
        return self.power_class(c, -1)

    def class_of_matrix(self, g: np.ndarray) -> int:
        return int(self.class_of[self.position(g)])


def conjugacy_class_of(group: GroupTable, g: np.ndarray) -> int:
    """Class id of the matrix g; raises ElementNotInGroup if g is not in the group."""
    return group.class_of_matrix(np.asarray(g, dtype=np.int64))


# generators


def _projective_vectors(field: Field, dim: int) -> Iterator[np.ndarray]:
    """Nonzero vectors of F_q^dim whose first nonzero entry is 1, lexicographically."""
    for idx in range(1, field.q**dim):
        digits = np.array(
            [(idx // field.q**k) % field.q for k in range(dim - 1, -1, -1)], dtype=np.int64
        )
        lead = digits[np.flatnonzero(digits)[0]]
        if lead == 1:
            yield digits


def _transvections(space: FormedSpace) -> Iterator[np.ndarray]:
    f = space.field
    gram_t = space.gram.T
    for v in _projective_vectors(f, space.dim):
        row = f.matmul(v[None], gram_t)  # v^T J^T
        outer = f.matmul(v[:, None], row)
        for a in (1, f.nonsquare()):
            yield f.add(f.identity(space.dim), f.scale(a, outer))


def _reflection(space: FormedSpace, v: np.ndarray) -> np.ndarray | None:
    f = space.field
    qv = space.pairing(v, v)
    if qv == 0:
        return None
    c = int(f.mul_table[2, f.inv_table[qv]])
    outer = f.matmul(v[:, None], f.matmul(v[None], space.gram))
    return f.sub(f.identity(space.dim), f.scale(c, outer))


def _reflections(space: FormedSpace) -> Iterator[np.ndarray]:
    for v in _projective_vectors(space.field, space.dim):
        r = _reflection(space, v)
        if r is not None:
            yield r


def _rotations(space: FormedSpace) -> Iterator[np.ndarray]:
    f = space.field
    refl = _reflections(space)
    first = next(refl)
    for r in refl:
        yield f.matmul(first, r)


def _elementary(field: Field, n: int) -> Iterator[np.ndarray]:
    d = field.identity(n)
    d[0, 0] = field.primitive
    yield d
    for i in range(n):
        for j in range(n):
            if i != j:
                e = field.identity(n)
                e[i, j] = 1
                yield e


def _companion(field: Field, degree: int) -> np.ndarray:
    """Companion matrix of the primitive polynomial of the given degree over F_q."""
    if degree == 1:
        return np.array([[field.primitive]], dtype=np.int64)
    poly = galois.primitive_poly(field.q, degree)
    coeffs = Field._ints(poly.coeffs)[::-1]  # c_0 .. c_degree (monic)
    comp = np.zeros((degree, degree), dtype=np.int64)
    comp[1:, :-1] = np.eye(degree - 1, dtype=np.int64)
    comp[:, -1] = field.neg_table[coeffs[:degree]]
    return comp


def torus_factor_generator(field: Field, degree: int, sign: int) -> np.ndarray:
    """Generator of GL_1(q^a) (sign +1) or of the norm-one group U_1(q^a) (sign -1)."""
    if sign > 0:
        return _companion(field, degree)
    comp = _companion(field, 2 * degree)
    return _matrix_power(field, comp, field.q**degree - 1)


def _torus_generators(field: Field, desc: GroupDescriptor) -> Iterator[np.ndarray]:
    offset = 0
    for a, s in desc.torus:
        block = torus_factor_generator(field, a, s)
        size = block.shape[0]
        g = field.identity(desc.dim)
        g[offset : offset + size, offset : offset + size] = block
        offset += size
        yield g


def _candidates(desc: GroupDescriptor, field: Field, space: FormedSpace) -> Iterator[np.ndarray]:
    if desc.family == Family.SP:
        return _transvections(space)
    if desc.family == Family.O:
        return _reflections(space)
    if desc.family == Family.SO:
        return _rotations(space)
    if desc.family == Family.GL:
        return _elementary(field, desc.dim)
    if desc.family == Family.TORUS:
        return _torus_generators(field, desc)
    raise UnsupportedFamily(f"Unknown group family: {desc.family}")


def greedy_generators(
    field: Field, candidates: Iterable[np.ndarray], dim: int, target: int, what: str
) -> tuple[list[np.ndarray], np.ndarray]:
    """Add candidates not yet generated until the closure has ``target`` elements."""
    gens: list[np.ndarray] = []
    elements = closure(field, gens, dim, target)
    keys = np.sort(element_keys(field, elements))
    for cand in candidates:
        if elements.shape[0] == target:
            break
        if np.isin(element_keys(field, cand[None]), keys)[0]:
            continue
        gens.append(cand)
        elements = closure(field, gens, dim, target)
        keys = np.sort(element_keys(field, elements))
    if elements.shape[0] != target:
        raise UnsupportedFamily(
            f"{what}: candidate generators exhausted at {elements.shape[0]} of {target} elements"
        )
    return gens, elements


def build_group(
    desc: GroupDescriptor, field: Field, max_order: int = DEFAULT_MAX_ORDER
) -> GroupTable:
    """Enumerate the group named by the descriptor over ``field``."""
    if desc.q != field.q:
        raise ValueError(f"descriptor is over F_{desc.q}, field is F_{field.q}")
    target = order_formula(desc)
    if target > max_order:
        raise BudgetExceeded(desc.label(), target, max_order)
    space = space_for(desc, field) if desc.family != Family.TORUS else None
    if desc.dim == 0 or target == 1:
        elements = field.identity(desc.dim)[None]
        return GroupTable(desc.label(), field, elements, [], desc, space)
    gens, elements = greedy_generators(
        field, _candidates(desc, field, space), desc.dim, target, desc.label()
    )
    if space is not None and space.kind != FormKind.NONE:
        for g in gens:
            if not space.preserves(g):
                raise ValueError(f"generator of {desc.label()} does not preserve the form")
    return GroupTable(desc.label(), field, elements, gens, desc, space)


def subgroup_table(
    group: GroupTable,
    positions: np.ndarray,
    name: str,
    descriptor: GroupDescriptor | None = None,
) -> GroupTable:
    """Standalone table of the subgroup formed by the given member positions."""
    positions = np.unique(np.asarray(positions, dtype=np.int64))
    members = group.elements[positions]
    target = positions.size
    try:
        gens, elements = greedy_generators(
            group.field, iter(members), group.dim, target, name
        )
    except (BudgetExceeded, UnsupportedFamily) as e:
        raise NotASubgroup(f"{name}: positions are not closed under multiplication") from e
    if not np.array_equal(
        np.sort(element_keys(group.field, elements)), group.keys[positions]
    ):
        raise NotASubgroup(f"{name}: positions are not closed under multiplication")
    return GroupTable(name, group.field, elements, gens, descriptor, group.space, parent=group)


@dataclass(frozen=True)
class DirectProductSplit:
    """O_{2n+1} = SO_{2n+1} x {+-I}: each position factors as sign * (SO part)."""

    so_positions: np.ndarray
    minus_identity: int
    so_part: np.ndarray
    sign: np.ndarray


def orthogonal_direct_product_split(
    o_group: GroupTable, so_group: GroupTable
) -> DirectProductSplit:
    """Exhibit O_{2n+1} as SO_{2n+1} x {+-I}; raises NotASubgroup if it fails."""
    if o_group.dim % 2 == 0:
        raise NotASubgroup("the direct-product split needs odd dimension")
    if o_group.order != 2 * so_group.order:
        raise NotASubgroup(f"|{o_group.name}| != 2 |{so_group.name}|")
    f = o_group.field
    so_positions = o_group.positions_of_subgroup(so_group)
    minus = o_group.position(f.neg(f.identity(o_group.dim)))
    if o_group.class_sizes[o_group.class_of[minus]] != 1:
        raise NotASubgroup("-I is not central")
    in_so = np.zeros(o_group.order, dtype=bool)
    in_so[so_positions] = True
    if in_so[minus]:
        raise NotASubgroup("-I lies in SO")
    flipped = o_group.index_of(f.neg(o_group.elements))
    so_part = np.where(in_so, np.arange(o_group.order), flipped)
    if not in_so[so_part].all():
        raise NotASubgroup("an element is neither in SO nor in -SO")
    sign = np.where(in_so, 1, -1)
    return DirectProductSplit(so_positions, minus, so_part, sign)
