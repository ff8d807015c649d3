"""Exact elements of cyclotomic fields Q(zeta_E).

A value is stored in the power basis 1, z, ..., z^(phi(E)-1) of Q(zeta_E)
(reduction modulo the E-th cyclotomic polynomial) as integer numerators over a
single positive denominator. Values of different conductors are compared and
combined in the field of the least common conductor.
"""

from __future__ import annotations

import cmath
import math
from collections.abc import Iterable, Mapping, Sequence
from fractions import Fraction
from functools import lru_cache, reduce
from typing import Any

import numpy as np
import sympy

_INT64_SAFE = 1 << 62


@lru_cache(maxsize=None)
def totient(conductor: int) -> int:
    """Euler's totient, the dimension of Q(zeta_E)."""
    return int(sympy.totient(conductor))


@lru_cache(maxsize=None)
def reduction_table(conductor: int) -> np.ndarray:
    """Row j holds the power-basis coordinates of zeta^j, for 0 <= j < E."""
    phi = totient(conductor)
    x = sympy.Symbol("x")
    poly = sympy.Poly(sympy.cyclotomic_poly(conductor, x), x)
    # monic: x^phi = -sum_{i<phi} c_i x^i
    low = [int(c) for c in reversed(poly.all_coeffs())][:phi]
    table = np.zeros((conductor, phi), dtype=np.int64)
    for j in range(min(phi, conductor)):
        table[j, j] = 1
    for j in range(phi, conductor):
        prev = table[j - 1]
        row = np.zeros(phi, dtype=np.int64)
        row[1:] = prev[:-1]
        top = prev[-1]
        if top:
            row -= top * np.asarray(low, dtype=np.int64)
        table[j] = row
    table.setflags(write=False)
    return table


@lru_cache(maxsize=None)
def product_tensor(conductor: int) -> np.ndarray:
    """T[i, j] = coordinates of zeta^(i+j), for power-basis indices i, j."""
    phi = totient(conductor)
    table = reduction_table(conductor)
    idx = (np.arange(phi)[:, None] + np.arange(phi)[None, :]) % conductor
    tensor = table[idx]
    tensor.setflags(write=False)
    return tensor


def _reduce_group_ring(conductor: int, vector: Sequence[int] | np.ndarray) -> list[int]:
    """Map sum_j v_j zeta^j (j mod E) to power-basis coordinates."""
    arr = np.asarray(vector, dtype=object)
    if arr.shape[0] != conductor:
        folded = np.zeros(conductor, dtype=object)
        for j, v in enumerate(arr):
            folded[j % conductor] += v
        arr = folded
    table = reduction_table(conductor).astype(object)
    return [int(v) for v in arr.dot(table)]


class Cyclotomic:
    """An exact element of Q(zeta_E)."""

    __slots__ = ("conductor", "coeffs", "denom", "_lifts")

    def __init__(self, conductor: int, coeffs: Iterable[int], denom: int = 1) -> None:
        coeffs = tuple(int(c) for c in coeffs)
        if conductor < 1:
            raise ValueError(f"conductor must be positive, got {conductor}")
        if len(coeffs) != totient(conductor):
            raise ValueError(
                f"expected {totient(conductor)} coefficients for conductor {conductor}, "
                f"got {len(coeffs)}"
            )
        if denom == 0:
            raise ZeroDivisionError("cyclotomic denominator is zero")
        if denom < 0:
            coeffs = tuple(-c for c in coeffs)
            denom = -denom
        g = reduce(math.gcd, coeffs, denom)
        if g > 1:
            coeffs = tuple(c // g for c in coeffs)
            denom //= g
        if not any(coeffs):
            denom = 1
        self.conductor = conductor
        self.coeffs = coeffs
        self.denom = denom
        self._lifts: dict[int, tuple[int, ...]] = {}

    # constructors

    @classmethod
    def rational(cls, value: int | Fraction) -> Cyclotomic:
        """Embed a rational number (conductor 1)."""
        value = Fraction(value)
        return cls(1, (value.numerator,), value.denominator)

    @classmethod
    def zero(cls) -> Cyclotomic:
        return cls(1, (0,))

    @classmethod
    def one(cls) -> Cyclotomic:
        return cls(1, (1,))

    @classmethod
    def zeta(cls, conductor: int, power: int = 1) -> Cyclotomic:
        """The root of unity zeta_E^power."""
        return cls(conductor, reduction_table(conductor)[power % conductor].tolist())

    @classmethod
    def from_exponent_counts(
        cls,
        conductor: int,
        counts: Mapping[int, int] | Sequence[int],
        denom: int = 1,
    ) -> Cyclotomic:
        """Build sum_j counts[j] * zeta_E^j (exponents taken mod E)."""
        vector = [0] * conductor
        items = counts.items() if isinstance(counts, Mapping) else enumerate(counts)
        for j, c in items:
            vector[int(j) % conductor] += int(c)
        return cls(conductor, _reduce_group_ring(conductor, vector), denom)

    @staticmethod
    def coerce(value: Any) -> Cyclotomic:
        if isinstance(value, Cyclotomic):
            return value
        if isinstance(value, (int, np.integer, Fraction)):
            return Cyclotomic.rational(int(value) if isinstance(value, np.integer) else value)
        raise TypeError(f"cannot coerce {type(value).__name__} to Cyclotomic")

    # structure

    @property
    def phi(self) -> int:
        return len(self.coeffs)

    @property
    def is_zero(self) -> bool:
        return not any(self.coeffs)

    @property
    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    @property
    def is_integer(self) -> bool:
        return self.is_rational and self.denom == 1

    def to_fraction(self) -> Fraction:
        """The rational value; raises ValueError when the value is irrational."""
        if not self.is_rational:
            raise ValueError(f"{self!r} is not rational")
        return Fraction(self.coeffs[0], self.denom)

    def lifted_coeffs(self, conductor: int) -> tuple[int, ...]:
        """Numerators of this value in the power basis of Q(zeta_conductor)."""
        if conductor == self.conductor:
            return self.coeffs
        if conductor % self.conductor:
            raise ValueError(f"conductor {self.conductor} does not divide {conductor}")
        cached = self._lifts.get(conductor)
        if cached is None:
            step = conductor // self.conductor
            vector = [0] * conductor
            for i, c in enumerate(self.coeffs):
                vector[i * step] += c
            cached = tuple(_reduce_group_ring(conductor, vector))
            self._lifts[conductor] = cached
        return cached

    def lift(self, conductor: int) -> Cyclotomic:
        """The same value viewed in Q(zeta_conductor)."""
        return Cyclotomic(conductor, self.lifted_coeffs(conductor), self.denom)

    def galois(self, power: int) -> Cyclotomic:
        """Apply the automorphism zeta_E -> zeta_E^power (power coprime to E)."""
        if math.gcd(power, self.conductor) != 1:
            raise ValueError(f"{power} is not a unit modulo {self.conductor}")
        vector = [0] * self.conductor
        for i, c in enumerate(self.coeffs):
            vector[(i * power) % self.conductor] += c
        return Cyclotomic(self.conductor, _reduce_group_ring(self.conductor, vector), self.denom)

    def conj(self) -> Cyclotomic:
        """Complex conjugation zeta -> zeta^-1."""
        return self.galois(-1)

    def abs2(self) -> Cyclotomic:
        return self * self.conj()

    # arithmetic

    def _common(self, other: Cyclotomic) -> tuple[int, tuple[int, ...], tuple[int, ...]]:
        conductor = math.lcm(self.conductor, other.conductor)
        return conductor, self.lifted_coeffs(conductor), other.lifted_coeffs(conductor)

    def __add__(self, other: Any) -> Cyclotomic:
        try:
            other = Cyclotomic.coerce(other)
        except TypeError:
            return NotImplemented
        conductor, a, b = self._common(other)
        denom = math.lcm(self.denom, other.denom)
        sa, sb = denom // self.denom, denom // other.denom
        return Cyclotomic(conductor, (x * sa + y * sb for x, y in zip(a, b)), denom)

    __radd__ = __add__

    def __neg__(self) -> Cyclotomic:
        return Cyclotomic(self.conductor, (-c for c in self.coeffs), self.denom)

    def __sub__(self, other: Any) -> Cyclotomic:
        try:
            other = Cyclotomic.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: Any) -> Cyclotomic:
        return Cyclotomic.coerce(other) - self

    def __mul__(self, other: Any) -> Cyclotomic:
        if isinstance(other, (int, np.integer, Fraction)):
            value = Fraction(int(other) if isinstance(other, np.integer) else other)
            return Cyclotomic(
                self.conductor,
                (c * value.numerator for c in self.coeffs),
                self.denom * value.denominator,
            )
        if not isinstance(other, Cyclotomic):
            return NotImplemented
        if other.conductor == 1:
            return self * Fraction(other.coeffs[0], other.denom)
        if self.conductor == 1:
            return other * Fraction(self.coeffs[0], self.denom)
        conductor, a, b = self._common(other)
        conv = np.convolve(np.asarray(a, dtype=object), np.asarray(b, dtype=object))
        return Cyclotomic(
            conductor, _reduce_group_ring(conductor, conv), self.denom * other.denom
        )

    __rmul__ = __mul__

    def __truediv__(self, other: Any) -> Cyclotomic:
        if isinstance(other, (int, np.integer, Fraction)):
            value = Fraction(int(other) if isinstance(other, np.integer) else other)
            return self * (1 / value)
        if isinstance(other, Cyclotomic) and other.is_rational:
            return self * (1 / other.to_fraction())
        return NotImplemented

    def __pow__(self, exponent: int) -> Cyclotomic:
        if exponent < 0:
            raise ValueError("negative powers are not supported")
        result = Cyclotomic.one()
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def __eq__(self, other: object) -> bool:
        try:
            other = Cyclotomic.coerce(other)
        except TypeError:
            return NotImplemented
        if self.denom != other.denom:
            return False
        _, a, b = self._common(other)
        return a == b

    __hash__ = None  # type: ignore[assignment]

    def __complex__(self) -> complex:
        z = cmath.exp(2j * cmath.pi / self.conductor)
        return sum(c * z**i for i, c in enumerate(self.coeffs)) / self.denom

    def __repr__(self) -> str:
        if self.is_rational:
            return f"Cyclotomic({self.to_fraction()})"
        terms = [f"{c}*z{self.conductor}^{i}" for i, c in enumerate(self.coeffs) if c]
        body = " + ".join(terms)
        return f"Cyclotomic(({body})/{self.denom})" if self.denom != 1 else f"Cyclotomic({body})"

    # serialization

    def to_json(self) -> dict[str, Any]:
        return {"conductor": self.conductor, "coeffs": list(self.coeffs), "denom": self.denom}

    @classmethod
    def from_json(cls, data: Mapping[str, Any]) -> Cyclotomic:
        return cls(int(data["conductor"]), data["coeffs"], int(data.get("denom", 1)))


def common_conductor(values: Iterable[Cyclotomic]) -> int:
    """Least common conductor of a collection of values."""
    return reduce(math.lcm, (v.conductor for v in values), 1)


def stack(values: Sequence[Cyclotomic], conductor: int) -> tuple[np.ndarray, int]:
    """Numerator matrix (n, phi) over a common denominator, lifted to ``conductor``."""
    denom = reduce(math.lcm, (v.denom for v in values), 1)
    rows = [[c * (denom // v.denom) for c in v.lifted_coeffs(conductor)] for v in values]
    matrix = np.array(rows, dtype=object).reshape(len(values), totient(conductor))
    return matrix, denom


def _max_abs(matrix: np.ndarray) -> int:
    return max((abs(int(v)) for v in matrix.flat), default=0)


def dot(
    weights: Sequence[int | Fraction],
    xs: Sequence[Cyclotomic | int],
    ys: Sequence[Cyclotomic | int],
) -> Cyclotomic:
    """Exact sum_i weights[i] * xs[i] * ys[i]."""
    if not (len(weights) == len(xs) == len(ys)):
        raise ValueError("dot: length mismatch")
    xs = [Cyclotomic.coerce(x) for x in xs]
    ys = [Cyclotomic.coerce(y) for y in ys]
    if not xs:
        return Cyclotomic.zero()
    fw = [Fraction(w) for w in weights]
    wden = reduce(math.lcm, (w.denominator for w in fw), 1)
    wnum = np.array([int(w * wden) for w in fw], dtype=object)
    conductor = math.lcm(common_conductor(xs), common_conductor(ys))
    xm, xd = stack(xs, conductor)
    ym, yd = stack(ys, conductor)
    tensor = product_tensor(conductor)
    bound = (
        _max_abs(wnum) * _max_abs(xm) * _max_abs(ym) * len(xs) * int(np.abs(tensor).max())
        * tensor.shape[0] ** 2
    )
    if bound < _INT64_SAFE:
        gram = (xm.astype(np.int64) * wnum.astype(np.int64)[:, None]).T @ ym.astype(np.int64)
        coeffs = np.tensordot(gram, tensor, axes=([0, 1], [0, 1]))
    else:
        gram = (xm * wnum[:, None]).T.dot(ym)
        coeffs = np.tensordot(gram, tensor.astype(object), axes=([0, 1], [0, 1]))
    return Cyclotomic(conductor, (int(c) for c in coeffs), xd * yd * wden)


def total(values: Iterable[Cyclotomic | int]) -> Cyclotomic:
    """Exact sum of a collection of values."""
    values = [Cyclotomic.coerce(v) for v in values]
    if not values:
        return Cyclotomic.zero()
    conductor = common_conductor(values)
    matrix, denom = stack(values, conductor)
    return Cyclotomic(conductor, (int(c) for c in matrix.sum(axis=0)), denom)
