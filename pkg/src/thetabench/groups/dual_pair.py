"""Dual pair embeddings into Sp(W) in the standard polarization.

Case (1): (Sp(V), O(V')) acting on W = V (x) V' with <v1 (x) v1', v2 (x) v2'> =
<v1, v2>(v1', v2')'. The tensor form kron(J_V, S_V') is moved to the standard
form J0 = [[0, I], [-I, 0]] by a symplectic basis T, so embed(g, g') is
T^-1 (g (x) g') T. The unitary and type II pairs only provide the embedding.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from thetabench.algebra.field import Field
from thetabench.algebra.forms import standard_symplectic_gram, symplectic_basis
from thetabench.core.errors import IncompatibleKinds
from thetabench.core.types import FormKind
from thetabench.groups.spaces import FormedSpace


def kron(field: Field, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product over F_q, batched over leading axes of a and b."""
    da, db = a.shape[-1], b.shape[-1]
    prod = field.mul_table[a[..., :, None, :, None], b[..., None, :, None, :]]
    return prod.reshape(prod.shape[:-4] + (da * db, da * db))


@dataclass(frozen=True, eq=False)
class DualPairEmbedding:
    """(G, G') = (Sp(V), O(V')) inside Sp(V (x) V')."""

    left: FormedSpace
    right: FormedSpace
    gram: np.ndarray
    basis: np.ndarray
    basis_inv: np.ndarray

    @property
    def field(self) -> Field:
        return self.left.field

    @property
    def weil_rank(self) -> int:
        """N with dim W = 2N; the Weil representation has dimension q^N."""
        return self.gram.shape[0] // 2

    def embed(self, g: np.ndarray, gp: np.ndarray) -> np.ndarray:
        """Matrix of g (x) g' in the standard symplectic basis of W (batched)."""
        f = self.field
        if self.weil_rank == 0:
            shape = np.broadcast_shapes(g.shape[:-2], gp.shape[:-2])
            return np.zeros(shape + (0, 0), dtype=np.int64)
        tensor = kron(f, g, gp)
        return f.matmul(f.matmul(self.basis_inv, tensor), self.basis)

    def embed_left(self, g: np.ndarray) -> np.ndarray:
        ident = self.field.identity(self.right.dim)
        return self.embed(g, np.broadcast_to(ident, g.shape[:-2] + ident.shape))

    def embed_right(self, gp: np.ndarray) -> np.ndarray:
        ident = self.field.identity(self.left.dim)
        return self.embed(np.broadcast_to(ident, gp.shape[:-2] + ident.shape), gp)

    def preserves_standard_form(self, h: np.ndarray) -> bool:
        f = self.field
        j0 = standard_symplectic_gram(f, self.weil_rank)
        return bool(np.array_equal(f.matmul(f.matmul(f.transpose(h), j0), h), j0))


def _symplectic_frame(field: Field, gram: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    if gram.shape[0] == 0:
        empty = np.zeros((0, 0), dtype=np.int64)
        return empty, empty
    basis = symplectic_basis(field, gram)
    return basis, field.inv(basis)


def dual_pair_embed(left: FormedSpace, right: FormedSpace) -> DualPairEmbedding:
    """Embedding of (Sp(V), O(V')) for V symplectic and V' symmetric."""
    if left.field != right.field:
        raise IncompatibleKinds("the two spaces live over different fields")
    if left.kind != FormKind.SYMPLECTIC or right.kind != FormKind.SYMMETRIC:
        raise IncompatibleKinds(
            f"need (symplectic, symmetric) spaces, got ({left.kind}, {right.kind})"
        )
    f = left.field
    if left.dim and right.dim:
        gram = kron(f, left.gram, right.gram)
    else:
        gram = np.zeros((0, 0), dtype=np.int64)
    basis, basis_inv = _symplectic_frame(f, gram)
    return DualPairEmbedding(left, right, gram, basis, basis_inv)


@dataclass(frozen=True, eq=False)
class TypeIIEmbedding:
    """(GL(X), GL(X')) acting on W = (X (x) X') + (X (x) X')^* with the dual pairing."""

    field: Field
    dim_x: int
    dim_xp: int

    @property
    def weil_rank(self) -> int:
        return self.dim_x * self.dim_xp

    def embed(self, g: np.ndarray, gp: np.ndarray) -> np.ndarray:
        """diag(g (x) g', (g (x) g')^-T), already in the standard polarization."""
        f = self.field
        n = self.weil_rank
        a = kron(f, g, gp)
        out = np.zeros((2 * n, 2 * n), dtype=np.int64)
        out[:n, :n] = a
        out[n:, n:] = f.inv(a).T
        return out


def type_ii_embed(field: Field, dim_x: int, dim_xp: int) -> TypeIIEmbedding:
    if dim_x < 1 or dim_xp < 1:
        raise IncompatibleKinds("type II pairs need nonzero spaces")
    return TypeIIEmbedding(field, dim_x, dim_xp)


@dataclass(frozen=True, eq=False)
class UnitaryPairEmbedding:
    """(U(V), U(V')) over F_{q^2}, V hermitian and V' skew-hermitian.

    W = V (x) V' is viewed as an F_q-space of dimension 2 dim V dim V' through the
    basis (1, beta) of F_{q^2}, with the alternating form Tr(x^* S y).
    """

    base: Field
    ext: Field
    hermitian: np.ndarray
    skew_hermitian: np.ndarray

    @cached_property
    def beta(self) -> int:
        return self.ext.primitive

    def conj(self, a: np.ndarray) -> np.ndarray:
        f = self.ext
        out = np.zeros_like(a)
        nz = a != 0
        out[nz] = f.exp_table[(f.log_table[a[nz]] * f.p) % (f.q - 1)]
        return out

    def _coords(self, z: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """F_q coordinates (c0, c1) with z = c0 + c1 beta."""
        f = self.ext
        diff = f.sub(np.array(self.beta), self.conj(np.array(self.beta)))
        c1 = f.mul_table[f.sub(z, self.conj(z)), f.inv_table[diff]]
        c0 = f.sub(z, f.mul_table[c1, self.beta])
        return c0, c1

    def restrict(self, a: np.ndarray) -> np.ndarray:
        """The F_q-linear map of an F_{q^2}-matrix in the basis (1, beta) per coordinate."""
        f = self.ext
        m, n = a.shape
        out = np.zeros((2 * m, 2 * n), dtype=np.int64)
        for t, b in enumerate((1, self.beta)):
            c0, c1 = self._coords(f.mul_table[a, b])
            out[0::2, t::2] = c0
            out[1::2, t::2] = c1
        return out

    @cached_property
    def form(self) -> np.ndarray:
        """Alternating F_q Gram of W."""
        f = self.ext
        s = kron(f, self.hermitian, self.skew_hermitian)
        n = s.shape[0]
        basis = (1, self.beta)
        gram = np.zeros((2 * n, 2 * n), dtype=np.int64)
        for sidx, bs in enumerate(basis):
            for tidx, bt in enumerate(basis):
                val = f.mul_table[f.mul_table[self.conj(np.array(bs)), s], bt]
                gram[sidx::2, tidx::2] = f.trace_table[val]
        return gram

    @cached_property
    def frame(self) -> tuple[np.ndarray, np.ndarray]:
        return _symplectic_frame(self.base, self.form)

    @property
    def weil_rank(self) -> int:
        return self.form.shape[0] // 2

    def embed(self, g: np.ndarray, gp: np.ndarray) -> np.ndarray:
        f = self.base
        basis, basis_inv = self.frame
        r = self.restrict(kron(self.ext, g, gp))
        return f.matmul(f.matmul(basis_inv, r), basis)


def unitary_pair_embed(base: Field, dim_v: int, dim_vp: int) -> UnitaryPairEmbedding:
    """Unitary pair over F_{q^2} for prime q with antidiagonal hermitian forms."""
    if base.k != 1:
        raise IncompatibleKinds("unitary pairs are implemented over prime fields only")
    if dim_v < 1 or dim_vp < 1:
        raise IncompatibleKinds("unitary pairs need nonzero spaces")
    ext = Field(base.q**2, base.psi_twist)
    herm = np.fliplr(np.eye(dim_v, dtype=np.int64))
    delta = ext.power(ext.primitive, (base.q + 1) // 2)  # delta^q = -delta
    skew = np.fliplr(np.eye(dim_vp, dtype=np.int64)) * delta
    return UnitaryPairEmbedding(base, ext, herm, skew)
