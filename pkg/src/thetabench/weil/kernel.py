"""Quadratic-Gaussian kernel operators on functions F_q^N -> C.

An operator is stored as (L, Q, gamma): its kernel is
K(x, y) = gamma * psi(s^T Q s) when (x, y) = L s, and 0 off the subspace L.
Products and traces are computed from these data by Gaussian sums, so no
q^N-dimensional matrix is ever formed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from thetabench.algebra.cyclotomic import Cyclotomic
from thetabench.algebra.field import Field
from thetabench.algebra.forms import QuadraticForm, diagonalize_form, gauss_sum_of_diagonal
from thetabench.core.errors import DimensionMismatch


@dataclass(frozen=True, eq=False)
class QuadGaussOp:
    """Kernel operator with support basis ``support`` (2N x d), form (d x d) and scalar."""

    field: Field
    n: int
    support: np.ndarray
    form: np.ndarray
    scalar: Cyclotomic

    @property
    def dim(self) -> int:
        """Dimension of the support subspace."""
        return int(self.support.shape[1])

    @property
    def x_part(self) -> np.ndarray:
        return self.support[: self.n]

    @property
    def y_part(self) -> np.ndarray:
        return self.support[self.n :]

    def trace(self) -> Cyclotomic:
        return trace(self)

    def __matmul__(self, other: QuadGaussOp) -> QuadGaussOp:
        return compose(self, other)


def identity_op(field: Field, n: int) -> QuadGaussOp:
    eye = field.identity(n)
    return QuadGaussOp(
        field, n, np.concatenate([eye, eye]), np.zeros((n, n), dtype=np.int64), Cyclotomic.one()
    )


def _t(a: np.ndarray) -> np.ndarray:
    return a.T


def _quad(field: Field, basis: np.ndarray, form: np.ndarray) -> np.ndarray:
    """basis^T form basis."""
    return field.matmul(field.matmul(_t(basis), form), basis)


def _gauss(field: Field, form: np.ndarray) -> tuple[Cyclotomic, int]:
    """(sum over F_q^r of psi(v^T form v) without the radical, radical dimension)."""
    if form.shape[0] == 0:
        return Cyclotomic.one(), 0
    _, diag = diagonalize_form(QuadraticForm(field, form))
    return gauss_sum_of_diagonal(diag, field)


def trace(op: QuadGaussOp) -> Cyclotomic:
    """sum_x K(x, x) = gamma * sum over {s : X s = Y s} of psi(s^T Q s)."""
    f = op.field
    if op.dim == 0:
        return op.scalar if op.n == 0 else Cyclotomic.zero()
    diagonal = f.null_space(f.sub(op.x_part, op.y_part))
    gauss, rad = _gauss(f, _quad(f, diagonal, op.form))
    return op.scalar * gauss * f.q**rad


def compose(a: QuadGaussOp, b: QuadGaussOp) -> QuadGaussOp:
    """Kernel of the product a b: (ab)(x, z) = sum_y a(x, y) b(y, z)."""
    if a.n != b.n or a.field != b.field:
        raise DimensionMismatch(f"cannot compose operators on F_q^{a.n} and F_q^{b.n}")
    f = a.field
    n = a.n
    if n == 0:
        return QuadGaussOp(f, 0, a.support, a.form, a.scalar * b.scalar)
    da, db = a.dim, b.dim

    # pairs (s, t) with y_A(s) = x_B(t)
    contact = np.concatenate([a.y_part, f.neg(b.x_part)], axis=1)
    pairs = f.null_space(contact)
    block = np.zeros((da + db, da + db), dtype=np.int64)
    block[:da, :da] = a.form
    block[da:, da:] = b.form
    m = _quad(f, pairs, block)
    phi = np.concatenate(
        [f.matmul(a.x_part, pairs[:da]), f.matmul(b.y_part, pairs[da:])], axis=0
    )
    e = pairs.shape[1]

    # fiber F = ker(phi), split into its radical F0 and a nondegenerate part F1
    fiber = f.null_space(phi)
    fiber_gram = _quad(f, fiber, m)
    rad = f.null_space(fiber_gram)
    nondeg = f.complement(rad, f.identity(fiber.shape[1]))
    f0 = f.matmul(fiber, rad)
    f1 = f.matmul(fiber, nondeg)
    m1 = _quad(f, f1, m)
    gauss, _ = _gauss(f, m1)

    # support: u with u^T M F0 = 0, modulo the fiber
    if f0.shape[1]:
        allowed = f.null_space(_t(f.matmul(m, f0)))
    else:
        allowed = f.identity(e)
    section = f.complement(fiber, allowed)

    if f1.shape[1]:
        mf1 = f.matmul(m, f1)
        correction = f.matmul(f.matmul(mf1, f.inv(m1)), _t(mf1))
        reduced = f.sub(m, correction)
    else:
        reduced = m
    support = f.matmul(phi, section)
    form = _quad(f, section, reduced)
    scalar = a.scalar * b.scalar * gauss * f.q ** f0.shape[1]
    return QuadGaussOp(f, n, support, form, scalar)
