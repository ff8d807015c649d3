"""Formed spaces: F_q-vector spaces with a symplectic or symmetric Gram matrix.

All Gram matrices are in "antidiagonal" standard form, so that the standard
isotropic flag is spanned by the leading basis vectors and every standard Levi
subgroup is block diagonal. Removing the outer hyperbolic pairs of a space
gives the standard space of the same kind one Witt level down.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from thetabench.algebra.field import Field
from thetabench.core.types import FormKind


@dataclass(frozen=True, eq=False)
class FormedSpace:
    """A vector space with a nondegenerate form (or none, for GL)."""

    field: Field
    kind: FormKind
    dim: int
    gram: np.ndarray | None
    eps: int = 0
    witt_index: int = 0

    def __post_init__(self) -> None:
        if self.kind == FormKind.NONE:
            return
        g = self.gram
        if g is None or g.shape != (self.dim, self.dim):
            raise ValueError(f"gram matrix must be {self.dim}x{self.dim}")
        if self.dim and self.field.rank(g) != self.dim:
            raise ValueError("gram matrix is degenerate")
        if self.kind == FormKind.SYMPLECTIC:
            if self.dim % 2 or not np.array_equal(g, self.field.neg(g.T)):
                raise ValueError("symplectic gram must be alternating of even dimension")
        elif not np.array_equal(g, g.T):
            raise ValueError("symmetric gram must be symmetric")

    @property
    def anisotropic_dim(self) -> int:
        return self.dim - 2 * self.witt_index

    def pairing(self, x: np.ndarray, y: np.ndarray) -> int:
        f = self.field
        return int(f.matmul(f.matmul(x.reshape(1, -1), self.gram), y.reshape(-1, 1))[0, 0])

    def preserves(self, g: np.ndarray) -> bool:
        """Whether the matrix g is an isometry of the form."""
        if self.kind == FormKind.NONE:
            return self.field.det(g) != 0
        f = self.field
        return bool(np.array_equal(f.matmul(f.matmul(g.T, self.gram), g), self.gram))

    def label(self) -> str:
        if self.kind == FormKind.SYMPLECTIC:
            return f"Sp_{self.dim}({self.field.q})"
        if self.kind == FormKind.SYMMETRIC:
            sign = "+" if self.eps > 0 else "-"
            return f"O{sign}_{self.dim}({self.field.q})"
        return f"GL_{self.dim}({self.field.q})"


def _antidiagonal(n: int) -> np.ndarray:
    return np.fliplr(np.eye(n, dtype=np.int64))


def symplectic_space(field: Field, n: int) -> FormedSpace:
    """Sp_{2n} Gram [[0, A], [-A, 0]] with A the n x n antidiagonal identity."""
    a = _antidiagonal(n)
    gram = np.zeros((2 * n, 2 * n), dtype=np.int64)
    gram[:n, n:] = a
    gram[n:, :n] = field.array(-a)
    return FormedSpace(field, FormKind.SYMPLECTIC, 2 * n, gram, 0, n)


def odd_orthogonal_space(field: Field, n: int, eps: int) -> FormedSpace:
    """O^eps_{2n+1}: antidiagonal ones around a center entry c.

    The antidiagonal part has discriminant (-1)^n, so the sign convention
    eps = legendre(disc * (-1)^n) reduces to eps = legendre(c): c = 1 for eps = +
    and c = the smallest nonsquare for eps = -.
    """
    if eps not in (1, -1):
        raise ValueError(f"eps must be +1 or -1, got {eps}")
    dim = 2 * n + 1
    gram = _antidiagonal(dim)
    gram[n, n] = 1 if eps > 0 else field.nonsquare()
    return FormedSpace(field, FormKind.SYMMETRIC, dim, gram, eps, n)


def even_orthogonal_space(field: Field, n: int, eps: int) -> FormedSpace:
    """O^eps_{2n}: split (Witt index n) for eps = +, Witt index n-1 for eps = -."""
    if eps not in (1, -1):
        raise ValueError(f"eps must be +1 or -1, got {eps}")
    dim = 2 * n
    if eps > 0:
        return FormedSpace(field, FormKind.SYMMETRIC, dim, _antidiagonal(dim), 1, n)
    if n < 1:
        raise ValueError("O^-_0 does not exist")
    gram = _antidiagonal(dim)
    # anisotropic plane x^2 - nu*y^2 in the middle
    gram[n - 1 : n + 1, n - 1 : n + 1] = np.array(
        [[1, 0], [0, int(field.neg_table[field.nonsquare()])]], dtype=np.int64
    )
    return FormedSpace(field, FormKind.SYMMETRIC, dim, gram, -1, n - 1)


def orthogonal_space(field: Field, dim: int, eps: int) -> FormedSpace:
    if dim % 2:
        return odd_orthogonal_space(field, dim // 2, eps)
    return even_orthogonal_space(field, dim // 2, eps)


def linear_space(field: Field, n: int) -> FormedSpace:
    return FormedSpace(field, FormKind.NONE, n, None)


def discriminant_sign(field: Field, gram: np.ndarray) -> int:
    """legendre(det(gram) * (-1)^n) for a symmetric Gram of dimension 2n+1 or 2n."""
    n = gram.shape[0] // 2
    det = field.det(gram)
    if n % 2:
        det = int(field.neg_table[det])
    return field.legendre(det)
