"""Dense reference model of the Weil representation, used only to cross-check kernels.

A DenseOp is a q^N x q^N matrix over Z[zeta_p] / denom, stored in group-ring
form: ``coeffs[j]`` is the integer matrix multiplying zeta_p^j. The
representative is made canonical by subtracting the last coefficient matrix,
which is legal because 1 + zeta + ... + zeta^(p-1) = 0.
"""

from __future__ import annotations

import itertools
import math
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from thetabench.algebra.cyclotomic import Cyclotomic
from thetabench.algebra.field import Field
from thetabench.core.errors import BudgetExceeded, DimensionMismatch
from thetabench.weil.kernel import QuadGaussOp
from thetabench.weil.operator import BruhatFactor, bruhat_factor


@dataclass(eq=False)
class DenseOp:
    p: int
    coeffs: np.ndarray
    denom: int = 1

    def __post_init__(self) -> None:
        self.coeffs = np.asarray(self.coeffs, dtype=np.int64)
        self.coeffs = self.coeffs - self.coeffs[-1][None]
        g = math.gcd(int(np.gcd.reduce(self.coeffs, axis=None)), self.denom)
        if g > 1:
            self.coeffs //= g
            self.denom //= g

    @property
    def size(self) -> int:
        return int(self.coeffs.shape[1])

    def __matmul__(self, other: DenseOp) -> DenseOp:
        if self.p != other.p or self.size != other.size:
            raise DimensionMismatch("dense operators of different shapes")
        out = np.zeros_like(self.coeffs)
        for i in range(self.p):
            if not self.coeffs[i].any():
                continue
            for j in range(other.p):
                if other.coeffs[j].any():
                    out[(i + j) % self.p] += self.coeffs[i] @ other.coeffs[j]
        return DenseOp(self.p, out, self.denom * other.denom)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DenseOp):
            return NotImplemented
        return (
            self.p == other.p
            and self.denom == other.denom
            and np.array_equal(self.coeffs, other.coeffs)
        )

    def trace(self) -> Cyclotomic:
        counts = [int(np.trace(c)) for c in self.coeffs]
        return Cyclotomic.from_exponent_counts(self.p, counts, self.denom)

    def entry(self, row: int, col: int) -> Cyclotomic:
        column = self.coeffs[:, row, col].tolist()
        return Cyclotomic.from_exponent_counts(self.p, column, self.denom)


def all_vectors(field: Field, n: int) -> np.ndarray:
    """F_q^n in base-q index order (row i is the vector with index i)."""
    if n == 0:
        return np.zeros((1, 0), dtype=np.int64)
    return np.array(list(itertools.product(range(field.q), repeat=n)), dtype=np.int64)


def vector_index(field: Field, vecs: np.ndarray) -> np.ndarray:
    n = vecs.shape[-1]
    weights = field.q ** np.arange(n - 1, -1, -1, dtype=np.int64)
    return vecs @ weights


def _check_budget(field: Field, n: int, budget: int) -> int:
    size = field.q**n
    if size > budget:
        raise BudgetExceeded("dense Weil model", size, budget)
    return size


def _empty(field: Field, size: int) -> np.ndarray:
    return np.zeros((field.p, size, size), dtype=np.int64)


def dense_levi(field: Field, a: np.ndarray, budget: int = 1000) -> DenseOp:
    n = a.shape[0]
    size = _check_budget(field, n, budget)
    xs = all_vectors(field, n)
    targets = vector_index(field, field.matmul(xs, field.inv(a).T))
    coeffs = _empty(field, size)
    coeffs[0, np.arange(size), targets] = field.legendre(field.det(a))
    return DenseOp(field.p, coeffs)


def dense_unipotent(field: Field, c: np.ndarray, budget: int = 1000) -> DenseOp:
    n = c.shape[0]
    size = _check_budget(field, n, budget)
    xs = all_vectors(field, n)
    form = field.scale(field.neg_table[field.half], c)
    values = _quadratic_values(field, xs, form)
    coeffs = _empty(field, size)
    coeffs[field.psi_table[values], np.arange(size), np.arange(size)] = 1
    return DenseOp(field.p, coeffs)


def _quadratic_values(field: Field, xs: np.ndarray, form: np.ndarray) -> np.ndarray:
    """x^T form x for each row x."""
    left = field.matmul(xs, form)
    out = np.zeros(len(xs), dtype=np.int64)
    for k in range(xs.shape[1]):
        out = field.add_table[out, field.mul_table[left[:, k], xs[:, k]]]
    return out


def _gauss_vector(field: Field, power: int) -> np.ndarray:
    """Group-ring vector of G(1)^power."""
    base = np.zeros(field.p, dtype=np.int64)
    for x in range(field.q):
        base[field.psi_exponent(int(field.mul_table[x, x]))] += 1
    out = np.zeros(field.p, dtype=np.int64)
    out[0] = 1
    for _ in range(power):
        nxt = np.zeros_like(out)
        for j in range(field.p):
            nxt += out[j] * np.roll(base, j)
        out = nxt
    return out


def dense_weyl(field: Field, n: int, subset: Sequence[int], budget: int = 1000) -> DenseOp:
    subset = list(subset)
    rest = [i for i in range(n) if i not in subset]
    size = _check_budget(field, n, budget)
    s = len(subset)
    xs = all_vectors(field, n)
    gvec = _gauss_vector(field, s) * field.legendre(2 % field.p) ** s
    coeffs = _empty(field, size)
    if s:
        pairing = field.matmul(xs[:, subset], xs[:, subset].T)
    else:
        pairing = np.zeros((size, size), dtype=np.int64)
    same_rest = np.all(xs[:, None, rest] == xs[None, :, rest], axis=2)
    rows, cols = np.nonzero(same_rest)
    shift = field.psi_table[pairing[rows, cols]]
    for j in range(field.p):
        if gvec[j]:
            coeffs[(j + shift) % field.p, rows, cols] += gvec[j]
    return DenseOp(field.p, coeffs, field.q**s)


def dense_factor(field: Field, n: int, factor: BruhatFactor, budget: int = 1000) -> DenseOp:
    if factor.kind == "m":
        return dense_levi(field, factor.data, budget)
    if factor.kind == "n":
        return dense_unipotent(field, factor.data, budget)
    return dense_weyl(field, n, factor.data.tolist(), budget)


def dense_identity(field: Field, n: int, budget: int = 1000) -> DenseOp:
    size = _check_budget(field, n, budget)
    coeffs = _empty(field, size)
    coeffs[0] = np.eye(size, dtype=np.int64)
    return DenseOp(field.p, coeffs)


def dense_weil(field: Field, g: np.ndarray, budget: int = 1000) -> DenseOp:
    """omega(g) as a dense matrix, multiplying dense generator matrices."""
    n = g.shape[0] // 2
    out = dense_identity(field, n, budget)
    for factor in bruhat_factor(field, g):
        out = out @ dense_factor(field, n, factor, budget)
    return out


def dense_heisenberg(field: Field, u: np.ndarray, v: np.ndarray, budget: int = 1000) -> DenseOp:
    """rho(u, v) f(x) = psi(v.x + u.v / 2) f(x + u)."""
    n = len(u)
    size = _check_budget(field, n, budget)
    xs = all_vectors(field, n)
    shifted = vector_index(field, field.add_table[xs, np.asarray(u)[None, :]])
    uv = 0
    for k in range(n):
        uv = int(field.add_table[uv, field.mul_table[u[k], v[k]]])
    phase = field.mul_table[field.half, uv]
    vx = np.zeros(size, dtype=np.int64)
    for k in range(n):
        vx = field.add_table[vx, field.mul_table[v[k], xs[:, k]]]
    exps = field.psi_table[field.add_table[vx, phase]]
    coeffs = _empty(field, size)
    coeffs[exps, np.arange(size), shifted] = 1
    return DenseOp(field.p, coeffs)


def densify(op: QuadGaussOp, budget: int = 1000) -> DenseOp:
    """Expand a kernel operator into the dense model."""
    f = op.field
    size = _check_budget(f, op.n, budget)
    coeffs = _empty(f, size)
    p = f.p
    scalar = op.scalar.lifted_coeffs(p)
    gvec = np.zeros(p, dtype=np.int64)
    gvec[: len(scalar)] = scalar
    if op.dim == 0:
        if op.n == 0:
            coeffs[:, 0, 0] = gvec
        return DenseOp(p, coeffs, op.scalar.denom)
    params = all_vectors(f, op.dim)
    points = f.matmul(params, op.support.T)
    rows = vector_index(f, points[:, : op.n])
    cols = vector_index(f, points[:, op.n :])
    shifts = f.psi_table[_quadratic_values(f, params, op.form)]
    for j in range(p):
        if gvec[j]:
            np.add.at(coeffs, ((j + shifts) % p, rows, cols), gvec[j])
    return DenseOp(p, coeffs, op.scalar.denom)
