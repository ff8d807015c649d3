"""omega(g) for g in Sp_2N(F_q) through a Bruhat factorization.

Every g factors as m(a) n(c) m(a') w_S n(c') m(a'') with
m(a) = diag(a, a^-T), n(c) = [[I, 0], [c, I]] (c symmetric) and w_S the partial
Weyl element swapping the coordinates in S. Each factor has a closed-form
kernel, and the kernels are multiplied with ``compose``.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from thetabench.algebra.cyclotomic import Cyclotomic
from thetabench.algebra.field import Field
from thetabench.algebra.forms import quadratic_gauss_sum, standard_symplectic_gram
from thetabench.core.errors import NotSymplectic
from thetabench.weil.kernel import QuadGaussOp, compose, identity_op


@dataclass(frozen=True, eq=False)
class BruhatFactor:
    """One factor: kind is "m" (Levi), "n" (lower unipotent) or "w" (partial Weyl)."""

    kind: str
    data: np.ndarray

    def is_identity(self) -> bool:
        if self.kind == "m":
            return bool(np.array_equal(self.data, np.eye(len(self.data), dtype=np.int64)))
        return not self.data.any() if self.kind == "n" else len(self.data) == 0


def levi_matrix(field: Field, a: np.ndarray) -> np.ndarray:
    n = a.shape[0]
    out = np.zeros((2 * n, 2 * n), dtype=np.int64)
    out[:n, :n] = a
    out[n:, n:] = field.inv(a).T
    return out


def lower_unipotent_matrix(field: Field, c: np.ndarray) -> np.ndarray:
    n = c.shape[0]
    out = np.eye(2 * n, dtype=np.int64)
    out[n:, :n] = c
    return out


def weyl_matrix(field: Field, n: int, subset: Sequence[int]) -> np.ndarray:
    """w_S : (u, v) -> (u', v') with (u'_S, v'_S) = (v_S, -u_S), identity off S."""
    out = np.eye(2 * n, dtype=np.int64)
    for i in subset:
        out[i, i] = 0
        out[n + i, n + i] = 0
        out[i, n + i] = 1
        out[n + i, i] = field.neg_table[1]
    return out


def _weyl_inverse(field: Field, n: int, subset: Sequence[int]) -> np.ndarray:
    return field.inv(weyl_matrix(field, n, subset))


def is_symplectic(field: Field, g: np.ndarray) -> bool:
    n2 = g.shape[0]
    if g.shape != (n2, n2) or n2 % 2:
        return False
    j0 = standard_symplectic_gram(field, n2 // 2)
    return bool(np.array_equal(field.matmul(field.matmul(g.T, j0), g), j0))


def _reduction(field: Field, b: np.ndarray) -> tuple[np.ndarray, np.ndarray, int]:
    """Invertible P, Q with P b Q = diag(I_r, 0)."""
    n = b.shape[0]
    eye = field.identity(n)
    reduced, pivots = field.rref(np.concatenate([b, eye], axis=1), ncols=n)
    p1 = reduced[:, n:]
    r_rows = reduced[:, :n]
    reduced2, _ = field.rref(np.concatenate([r_rows.T, eye], axis=1), ncols=n)
    q = reduced2[:, n:].T
    return p1, q, len(pivots)


def bruhat_factor(field: Field, g: np.ndarray) -> list[BruhatFactor]:
    """Factors of g in left-to-right product order, trivial ones dropped."""
    if not is_symplectic(field, g):
        raise NotSymplectic("matrix does not preserve [[0, I], [-I, 0]]")
    n = g.shape[0] // 2
    if n == 0:
        return []
    f = field
    p, q, r = _reduction(f, g[:n, n:])
    q_inv_t = f.inv(q).T
    g1 = f.matmul(f.matmul(levi_matrix(f, p), g), levi_matrix(f, q_inv_t))
    if not np.array_equal(g1[:n, n:][:r, :r], f.identity(r)) or g1[:n, n:][r:].any():
        raise AssertionError("rank normal form of the B block failed")

    a1 = g1[:n, :n]
    y = np.zeros((n, n), dtype=np.int64)
    y[:r, :r] = a1[:r, :r]
    y[:r, r:] = a1[:r, r:]
    y[r:, :r] = a1[:r, r:].T
    subset = list(range(r))
    p3 = f.matmul(
        f.matmul(g1, lower_unipotent_matrix(f, f.neg(y))), _weyl_inverse(f, n, subset)
    )
    if p3[:n, n:].any():
        raise AssertionError("Bruhat remainder is not block lower triangular")
    a3 = p3[:n, :n]
    x = f.matmul(p3[n:, :n], f.inv(a3))

    factors = [
        BruhatFactor("m", f.inv(p)),
        BruhatFactor("n", x),
        BruhatFactor("m", a3),
        BruhatFactor("w", np.asarray(subset, dtype=np.int64)),
        BruhatFactor("n", y),
        BruhatFactor("m", q.T.copy()),
    ]
    return [fac for fac in factors if not fac.is_identity()]


def factor_matrix(field: Field, n: int, factor: BruhatFactor) -> np.ndarray:
    if factor.kind == "m":
        return levi_matrix(field, factor.data)
    if factor.kind == "n":
        return lower_unipotent_matrix(field, factor.data)
    return weyl_matrix(field, n, factor.data.tolist())


# kernels of the generators


def weyl_constant(field: Field) -> Cyclotomic:
    """kappa = legendre(2) G(1) / q, the normalization of a one-coordinate Fourier transform."""
    g1 = quadratic_gauss_sum(1, field)
    return g1 * field.legendre(2 % field.p) / field.q


def levi_kernel(field: Field, a: np.ndarray) -> QuadGaussOp:
    """omega(m(a)) f(x) = legendre(det a) f(a^-1 x)."""
    n = a.shape[0]
    support = np.concatenate([a, field.identity(n)], axis=0)
    return QuadGaussOp(
        field,
        n,
        support,
        np.zeros((n, n), dtype=np.int64),
        Cyclotomic.rational(field.legendre(field.det(a))),
    )


def unipotent_kernel(field: Field, c: np.ndarray) -> QuadGaussOp:
    """omega(n(c)) f(x) = psi(-x^T c x / 2) f(x)."""
    n = c.shape[0]
    eye = field.identity(n)
    form = field.scale(field.neg_table[field.half], c)
    return QuadGaussOp(field, n, np.concatenate([eye, eye]), form, Cyclotomic.one())


def weyl_kernel(field: Field, n: int, subset: Sequence[int]) -> QuadGaussOp:
    """Partial Fourier transform in the coordinates of S."""
    subset = list(subset)
    rest = [i for i in range(n) if i not in subset]
    s = len(subset)
    d = n + s
    support = np.zeros((2 * n, d), dtype=np.int64)
    for col, i in enumerate(subset):
        support[i, col] = 1
        support[n + i, s + col] = 1
    for col, i in enumerate(rest):
        support[i, 2 * s + col] = 1
        support[n + i, 2 * s + col] = 1
    form = np.zeros((d, d), dtype=np.int64)
    for col in range(s):
        form[col, s + col] = field.half
        form[s + col, col] = field.half
    return QuadGaussOp(field, n, support, form, weyl_constant(field) ** s)


def factor_kernel(field: Field, n: int, factor: BruhatFactor) -> QuadGaussOp:
    if factor.kind == "m":
        return levi_kernel(field, factor.data)
    if factor.kind == "n":
        return unipotent_kernel(field, factor.data)
    return weyl_kernel(field, n, factor.data.tolist())


def weil_operator(field: Field, g: np.ndarray) -> QuadGaussOp:
    """Kernel of omega(g) on functions F_q^N -> C."""
    n = g.shape[0] // 2
    factors = bruhat_factor(field, g)
    if not factors:
        return identity_op(field, n)
    op = factor_kernel(field, n, factors[0])
    for factor in factors[1:]:
        op = compose(op, factor_kernel(field, n, factor))
    return op


def weil_trace(field: Field, g: np.ndarray) -> Cyclotomic:
    return weil_operator(field, g).trace()
