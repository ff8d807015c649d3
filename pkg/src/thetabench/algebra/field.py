"""Finite fields F_q (q = p^k, p odd, k <= 2) with table-driven matrix arithmetic.

Field elements are plain integers 0..q-1 in the integer representation used by
``galois`` (the prime subfield is 0..p-1). All hot paths work on int64 numpy
arrays through precomputed addition and multiplication tables; linear algebra
(determinant, inverse, rank, row reduction) goes through ``galois`` arrays.
"""

from __future__ import annotations

from collections.abc import Sequence
from functools import cached_property

import galois
import numpy as np
import sympy

from thetabench.algebra.cyclotomic import Cyclotomic
from thetabench.core.types import check_field_order

PSI_TWISTS = ("1", "nonsquare")


class Field:
    """The field with q elements and a fixed nontrivial additive character.

    The additive character is psi_t(x) = zeta_p^Tr(t*x), where t = 1 or the
    smallest nonsquare depending on ``psi_twist``.
    """

    def __init__(self, q: int, psi_twist: str = "1") -> None:
        check_field_order(q)
        if psi_twist not in PSI_TWISTS:
            raise ValueError(f"Unknown psi twist: {psi_twist}")
        ((p, k),) = sympy.factorint(q).items()
        self.q = q
        self.p = int(p)
        self.k = int(k)
        self.psi_twist = psi_twist
        # default (Conway) modulus, shared with galois.primitive_poly(q, ...)
        self.gf = galois.GF(q)

        elems = self.gf(np.arange(q))
        self.add_table = self._ints(elems[:, None] + elems[None, :])
        self.mul_table = self._ints(elems[:, None] * elems[None, :])
        self.neg_table = self._ints(-elems)
        self.inv_table = np.zeros(q, dtype=np.int64)
        self.inv_table[1:] = self._ints(elems[1:] ** -1)

        self.primitive = int(self.gf.primitive_element)
        self.exp_table = np.ones(q - 1, dtype=np.int64)
        for i in range(1, q - 1):
            self.exp_table[i] = self.mul_table[self.exp_table[i - 1], self.primitive]
        self.log_table = np.full(q, -1, dtype=np.int64)
        self.log_table[self.exp_table] = np.arange(q - 1)
        if (self.log_table[1:] < 0).any():
            raise ValueError(f"primitive element {self.primitive} does not generate F_{q}^x")

        self.legendre_table = np.zeros(q, dtype=np.int64)
        self.legendre_table[1:] = np.where(self.log_table[1:] % 2 == 0, 1, -1)
        self.trace_table = self._ints(elems.field_trace())
        self.twist = 1 if psi_twist == "1" else self.nonsquare()
        self.psi_table = self.trace_table[self.mul_table[self.twist]]
        self.half = int(self.inv_table[2])

    def __repr__(self) -> str:
        return f"Field(q={self.q}, psi_twist={self.psi_twist!r})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Field):
            return NotImplemented
        return (self.q, self.psi_twist) == (other.q, other.psi_twist)

    def __hash__(self) -> int:
        return hash((self.q, self.psi_twist))

    @staticmethod
    def _ints(arr: galois.FieldArray) -> np.ndarray:
        return arr.view(np.ndarray).astype(np.int64)

    # scalars

    def elem(self, n: int) -> int:
        """The image of the integer n in the prime subfield."""
        return int(n) % self.p

    def legendre(self, a: int) -> int:
        """Quadratic character: +1 on nonzero squares, -1 on nonsquares, 0 at 0."""
        return int(self.legendre_table[a])

    def nonsquare(self) -> int:
        """The smallest nonsquare in the integer representation."""
        return int(np.flatnonzero(self.legendre_table == -1)[0])

    def psi_exponent(self, x: int) -> int:
        """e with psi(x) = zeta_p^e."""
        return int(self.psi_table[x])

    def psi(self, x: int) -> Cyclotomic:
        return Cyclotomic.zeta(self.p, self.psi_exponent(x))

    def power(self, a: int, e: int) -> int:
        if a == 0:
            return 0 if e else 1
        return int(self.exp_table[(self.log_table[a] * e) % (self.q - 1)])

    def frobenius(self, a: int) -> int:
        return self.power(a, self.p)

    @cached_property
    def squares(self) -> np.ndarray:
        return np.flatnonzero(self.legendre_table == 1)

    # matrices as int64 arrays

    def array(self, values: Sequence | np.ndarray) -> np.ndarray:
        """Coerce integers (possibly negative) into field elements of the prime subfield."""
        arr = np.asarray(values, dtype=np.int64)
        if self.k == 1:
            return arr % self.p
        if (arr < 0).any():
            neg = arr < 0
            out = arr.copy()
            out[neg] = self.neg_table[(-arr[neg]) % self.p]
            return out
        return arr

    def identity(self, n: int) -> np.ndarray:
        return np.eye(n, dtype=np.int64)

    def add(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return self.add_table[a, b]

    def neg(self, a: np.ndarray) -> np.ndarray:
        return self.neg_table[a]

    def sub(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return self.add_table[a, self.neg_table[b]]

    def scale(self, c: int, a: np.ndarray) -> np.ndarray:
        return self.mul_table[c, a]

    def matmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Batched matrix product over F_q (broadcasts like ``np.matmul``)."""
        if self.k == 1:
            return np.matmul(a, b) % self.p
        inner = a.shape[-1]
        out = None
        for kk in range(inner):
            term = self.mul_table[a[..., :, kk, None], b[..., None, kk, :]]
            out = term if out is None else self.add_table[out, term]
        if out is None:
            shape = np.broadcast_shapes(a.shape[:-1], b.shape[:-2] + (1,))
            return np.zeros(shape[:-1] + (a.shape[-2], b.shape[-1]), dtype=np.int64)
        return out

    def transpose(self, a: np.ndarray) -> np.ndarray:
        return np.swapaxes(a, -1, -2)

    # linear algebra through galois

    def to_gf(self, a: np.ndarray) -> galois.FieldArray:
        return self.gf(np.asarray(a, dtype=np.int64))

    def det(self, a: np.ndarray) -> int:
        if a.shape[0] == 0:
            return 1
        return int(np.linalg.det(self.to_gf(a)))

    def inv(self, a: np.ndarray) -> np.ndarray:
        if a.shape[0] == 0:
            return a.copy()
        return self._ints(np.linalg.inv(self.to_gf(a)))

    def rank(self, a: np.ndarray) -> int:
        if a.size == 0:
            return 0
        return int(np.linalg.matrix_rank(self.to_gf(a)))

    def rref(self, a: np.ndarray, ncols: int | None = None) -> tuple[np.ndarray, list[int]]:
        """Reduced row echelon form and its pivot columns (among the first ``ncols``)."""
        if a.size == 0:
            return a.copy(), []
        reduced = self._ints(self.to_gf(a).row_reduce(ncols=ncols))
        limit = a.shape[1] if ncols is None else ncols
        pivots = []
        for row in reduced:
            nz = np.flatnonzero(row[:limit])
            if nz.size == 0:
                break
            pivots.append(int(nz[0]))
        return reduced, pivots

    def null_space(self, a: np.ndarray) -> np.ndarray:
        """Basis of {x : a x = 0}, as the columns of an (ncols, nullity) matrix."""
        rows, cols = a.shape
        if rows == 0:
            return self.identity(cols)
        reduced, pivots = self.rref(a)
        free = [j for j in range(cols) if j not in pivots]
        basis = np.zeros((cols, len(free)), dtype=np.int64)
        for idx, j in enumerate(free):
            basis[j, idx] = 1
            for r, pc in enumerate(pivots):
                basis[pc, idx] = self.neg_table[reduced[r, j]]
        return basis

    def complement(self, sub: np.ndarray, ambient: np.ndarray) -> np.ndarray:
        """Columns of ``ambient`` extending the column span of ``sub`` to span(ambient)."""
        chosen = sub
        picked = []
        rank = self.rank(chosen) if chosen.size else 0
        for j in range(ambient.shape[1]):
            trial = np.concatenate([chosen, ambient[:, j : j + 1]], axis=1)
            r = self.rank(trial)
            if r > rank:
                chosen, rank = trial, r
                picked.append(j)
        return ambient[:, picked]

    def solve_left(self, basis: np.ndarray, vectors: np.ndarray) -> np.ndarray:
        """Coordinates c with basis @ c = vectors (basis has independent columns)."""
        n, d = basis.shape
        aug = np.concatenate([basis, vectors], axis=1)
        reduced, pivots = self.rref(aug, ncols=d)
        if pivots != list(range(d)):
            raise ValueError("basis columns are not independent")
        if reduced[d:, d:].any():
            raise ValueError("vectors are not in the column span")
        return reduced[:d, d:]

    # keys

    def pack(self, mats: np.ndarray) -> np.ndarray:
        """Row-major base-q integer key of each matrix in a batch (int64)."""
        flat = mats.reshape(mats.shape[0], -1)
        weights = self.q ** np.arange(flat.shape[1] - 1, -1, -1, dtype=np.int64)
        return flat @ weights

    def packable(self, dim: int) -> bool:
        return self.q ** (dim * dim) < (1 << 63)
