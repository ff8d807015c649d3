"""Quadratic and alternating forms over F_q: diagonalization, Gauss sums, symplectic bases."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from thetabench.algebra.cyclotomic import Cyclotomic
from thetabench.algebra.field import Field
from thetabench.core.errors import DegenerateSum, NotSymplectic


@dataclass(frozen=True, eq=False)
class QuadraticForm:
    """A symmetric bilinear form x^T M y on F_q^d."""

    field: Field
    matrix: np.ndarray

    def __post_init__(self) -> None:
        m = np.asarray(self.matrix, dtype=np.int64)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"form matrix must be square, got shape {m.shape}")
        if not np.array_equal(m, m.T):
            raise ValueError("form matrix is not symmetric")
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def value(self, x: np.ndarray) -> int:
        """Q(x) = x^T M x."""
        f = self.field
        mx = f.matmul(self.matrix, x.reshape(-1, 1))
        return int(f.matmul(x.reshape(1, -1), mx)[0, 0])

    def radical_dim(self) -> int:
        return self.dim - self.field.rank(self.matrix)

    def discriminant_class(self) -> int:
        """Legendre symbol of the product of the nonzero diagonal entries."""
        _, diag = diagonalize_form(self)
        sign = 1
        for d in diag:
            if d:
                sign *= self.field.legendre(d)
        return sign


def diagonalize_form(form: QuadraticForm) -> tuple[np.ndarray, list[int]]:
    """Return (P, diag) with P^T M P = diag(diag); zeros of diag span the radical."""
    f = form.field
    gf = f.gf
    m = gf(form.matrix.copy())
    n = form.dim
    basis = gf(np.eye(n, dtype=np.int64))
    for i in range(n):
        pivot = next((j for j in range(i, n) if m[j, j] != 0), None)
        if pivot is None:
            pair = next(
                ((j, k) for j in range(i, n) for k in range(j + 1, n) if m[j, k] != 0), None
            )
            if pair is None:
                break
            j, k = pair
            # e_j <- e_j + e_k makes the diagonal entry 2 m[j, k] != 0
            m[j, :] += m[k, :]
            m[:, j] += m[:, k]
            basis[:, j] += basis[:, k]
            pivot = j
        if pivot != i:
            m[[i, pivot], :] = m[[pivot, i], :]
            m[:, [i, pivot]] = m[:, [pivot, i]]
            basis[:, [i, pivot]] = basis[:, [pivot, i]]
        for r in range(i + 1, n):
            if m[r, i] == 0:
                continue
            c = m[r, i] / m[i, i]
            m[r, :] -= c * m[i, :]
            m[:, r] -= c * m[:, i]
            basis[:, r] -= c * basis[:, i]
    diag = [int(m[i, i]) for i in range(n)]
    return Field._ints(basis), diag


@lru_cache(maxsize=None)
def _gauss_sum(field: Field, a: int) -> Cyclotomic:
    counts = [0] * field.p
    for x in range(field.q):
        counts[field.psi_exponent(int(field.mul_table[a, field.mul_table[x, x]]))] += 1
    return Cyclotomic.from_exponent_counts(field.p, counts)


def quadratic_gauss_sum(a: int, field: Field) -> Cyclotomic:
    """sum_{x in F_q} psi(a x^2) for the field's additive character."""
    if a == 0:
        raise DegenerateSum("quadratic Gauss sum with a = 0; use the count q instead")
    return _gauss_sum(field, int(a))


def gauss_sum_of_diagonal(diag: list[int], field: Field) -> tuple[Cyclotomic, int]:
    """sum over F_q^r of psi(sum d_i x_i^2), returned as (value, radical dimension)."""
    g1 = quadratic_gauss_sum(1, field)
    sign = 1
    nonzero = 0
    for d in diag:
        if d:
            sign *= field.legendre(d)
            nonzero += 1
    return g1**nonzero * sign, len(diag) - nonzero


def standard_symplectic_gram(field: Field, n: int) -> np.ndarray:
    """J0 = [[0, I_n], [-I_n, 0]]."""
    j0 = np.zeros((2 * n, 2 * n), dtype=np.int64)
    j0[:n, n:] = np.eye(n, dtype=np.int64)
    j0[n:, :n] = field.array(-np.eye(n, dtype=np.int64))
    return j0


def symplectic_basis(field: Field, gram: np.ndarray) -> np.ndarray:
    """T with T^T gram T = J0, by symplectic Gram-Schmidt.

    Columns of T are e_1..e_n followed by f_1..f_n with <e_i, f_i> = 1.
    """
    gf = field.gf
    omega = gf(gram)
    dim = gram.shape[0]
    if not np.array_equal(gram, field.neg(gram.T)) or np.any(np.diag(gram)):
        raise NotSymplectic("gram matrix is not alternating")
    if dim % 2 or field.rank(gram) != dim:
        raise NotSymplectic("alternating form is degenerate")
    work = [gf(np.eye(dim, dtype=np.int64)[:, i]) for i in range(dim)]
    es: list[np.ndarray] = []
    fs: list[np.ndarray] = []
    while work:
        e = work.pop(0)
        partner = next((k for k, v in enumerate(work) if (e @ omega @ v) != 0), None)
        if partner is None:
            if np.any(e):
                raise NotSymplectic("alternating form is degenerate")
            continue
        v = work.pop(partner)
        f = v / (e @ omega @ v)
        es.append(e)
        fs.append(f)
        work = [x - (x @ omega @ f) * e + (x @ omega @ e) * f for x in work]
        work = [x for x in work if np.any(x)]
    basis = np.stack([Field._ints(v) for v in es + fs], axis=1)
    return basis
