"""Signed cycle types of the hyperoctahedral group W_n and bipartitions.

W_n = (Z/2)^n x S_n is the Weyl group of Sp_{2n} and of SO_{2n+1}. Its classes
are the signed cycle types: a multiset of cycles (a, sign) with sum a = n, where
a positive cycle of length a contributes GL_1(q^a) to the torus T_w and a
negative one contributes U_1(q^a).
"""

from __future__ import annotations

import math
from collections import Counter

from pydantic import BaseModel, ConfigDict, field_validator
from sympy.functions.combinatorial.numbers import partition as partition_count
from sympy.utilities.iterables import partitions

from thetabench.dl.torus import TorusDescriptor


def weyl_order(n: int) -> int:
    """|W_n| = 2^n n!."""
    if n < 0:
        raise ValueError(f"rank must be nonnegative, got {n}")
    return 2**n * math.factorial(n)


class SignedCycleType(BaseModel):
    """A class of W_n, stored as cycles (length, sign) sorted by length then sign."""

    model_config = ConfigDict(frozen=True)

    cycles: tuple[tuple[int, int], ...] = ()

    @field_validator("cycles")
    @classmethod
    def _normalize(cls, cycles: tuple[tuple[int, int], ...]) -> tuple[tuple[int, int], ...]:
        for a, s in cycles:
            if a < 1 or s not in (1, -1):
                raise ValueError(f"bad cycle ({a}, {s})")
        return tuple(sorted(((int(a), int(s)) for a, s in cycles), key=lambda c: (-c[0], -c[1])))

    @property
    def n(self) -> int:
        return sum(a for a, _ in self.cycles)

    @property
    def eps(self) -> int:
        """epsilon_w: product of the cycle signs."""
        return math.prod(s for _, s in self.cycles)

    @property
    def is_split(self) -> bool:
        return all(c == (1, 1) for c in self.cycles)

    def torus(self) -> TorusDescriptor:
        return TorusDescriptor(factors=self.cycles)

    def centralizer_order(self) -> int:
        """prod over distinct (a, sign) with multiplicity m of (2a)^m m!."""
        return math.prod(
            (2 * a) ** m * math.factorial(m) for (a, _), m in Counter(self.cycles).items()
        )

    def class_size(self) -> int:
        return weyl_order(self.n) // self.centralizer_order()

    def label(self) -> str:
        if not self.cycles:
            return "()"
        return "".join(f"({a}{'+' if s > 0 else '-'})" for a, s in self.cycles)


def partitions_of(n: int) -> list[tuple[int, ...]]:
    """Partitions of n as weakly decreasing tuples, in sympy's enumeration order."""
    if n < 0:
        raise ValueError(f"cannot partition {n}")
    if n == 0:
        return [()]
    out = []
    for p in partitions(n):
        out.append(tuple(sorted((k for k, m in p.items() for _ in range(m)), reverse=True)))
    return out


def weyl_classes(n: int) -> list[SignedCycleType]:
    """All classes of W_n, split tori first."""
    if n < 0:
        raise ValueError(f"rank must be nonnegative, got {n}")
    out = []
    for j in range(n, -1, -1):
        for plus in partitions_of(j):
            for minus in partitions_of(n - j):
                cycles = tuple((a, 1) for a in plus) + tuple((a, -1) for a in minus)
                out.append(SignedCycleType(cycles=cycles))
    return out


class Bipartition(BaseModel):
    """An ordered pair of partitions (lam | mu)."""

    model_config = ConfigDict(frozen=True)

    lam: tuple[int, ...] = ()
    mu: tuple[int, ...] = ()

    @field_validator("lam", "mu")
    @classmethod
    def _weakly_decreasing(cls, parts: tuple[int, ...]) -> tuple[int, ...]:
        if any(p < 1 for p in parts) or list(parts) != sorted(parts, reverse=True):
            raise ValueError(f"not a partition: {parts}")
        return parts

    @property
    def size(self) -> int:
        return sum(self.lam) + sum(self.mu)

    def label(self) -> str:
        def fmt(p: tuple[int, ...]) -> str:
            return ",".join(map(str, p)) or "-"

        return f"({fmt(self.lam)} | {fmt(self.mu)})"


def bipartitions(n: int) -> list[Bipartition]:
    """All bipartitions of n."""
    if n < 0:
        raise ValueError(f"cannot split {n}")
    return [
        Bipartition(lam=lam, mu=mu)
        for j in range(n, -1, -1)
        for lam in partitions_of(j)
        for mu in partitions_of(n - j)
    ]


def bipartition_count(n: int) -> int:
    """sum_j p(j) p(n - j)."""
    return sum(int(partition_count(j)) * int(partition_count(n - j)) for j in range(n + 1))
