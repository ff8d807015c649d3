"""Maximal tori T_w as products of GL_1(q^a) and U_1(q^a), and their characters.

Each factor is cyclic: GL_1(q^a) of order q^a - 1 and U_1(q^a) of order q^a + 1.
A TorusCharacter stores one exponent e_i per factor; on an element with factor
coordinates (k_1, ..., k_r) (discrete logs with respect to fixed generators) it
takes the value prod zeta_{|T_i|}^{e_i k_i}.
"""

from __future__ import annotations

import itertools
import math
from collections.abc import Iterator, Sequence

from pydantic import BaseModel, ConfigDict, ValidationInfo, field_validator

from thetabench.algebra.cyclotomic import Cyclotomic


class TorusDescriptor(BaseModel):
    """Factor list (degree a, sign): +1 for GL_1(q^a), -1 for U_1(q^a), in a fixed order."""

    model_config = ConfigDict(frozen=True)

    factors: tuple[tuple[int, int], ...] = ()

    @field_validator("factors")
    @classmethod
    def _check_factors(cls, factors: tuple[tuple[int, int], ...]) -> tuple[tuple[int, int], ...]:
        for a, s in factors:
            if a < 1 or s not in (1, -1):
                raise ValueError(f"bad torus factor ({a}, {s})")
        return tuple((int(a), int(s)) for a, s in factors)

    @property
    def n(self) -> int:
        return sum(a for a, _ in self.factors)

    @property
    def eps(self) -> int:
        return math.prod(s for _, s in self.factors)

    @property
    def is_split(self) -> bool:
        return all(f == (1, 1) for f in self.factors)

    def factor_orders(self, q: int) -> tuple[int, ...]:
        return tuple(q**a - s for a, s in self.factors)

    def order(self, q: int) -> int:
        return math.prod(self.factor_orders(q))

    def sorted_factors(self) -> tuple[tuple[int, int], ...]:
        return tuple(sorted(self.factors, key=lambda c: (-c[0], -c[1])))

    def __mul__(self, other: TorusDescriptor) -> TorusDescriptor:
        return TorusDescriptor(factors=self.factors + other.factors)

    def label(self) -> str:
        if not self.factors:
            return "1"
        return " x ".join(f"{'GL' if s > 0 else 'U'}_1(q^{a})" for a, s in self.factors)


class TorusCharacter(BaseModel):
    """A character of T(F_q), one exponent per factor (reduced modulo the factor order)."""

    model_config = ConfigDict(frozen=True)

    torus: TorusDescriptor
    q: int
    exponents: tuple[int, ...]

    @field_validator("exponents")
    @classmethod
    def _reduce(cls, exponents: tuple[int, ...], info: ValidationInfo) -> tuple[int, ...]:
        if "torus" not in info.data or "q" not in info.data:
            return exponents
        orders = info.data["torus"].factor_orders(info.data["q"])
        if len(exponents) != len(orders):
            raise ValueError(f"{len(exponents)} exponents for a torus with {len(orders)} factors")
        return tuple(int(e) % o for e, o in zip(exponents, orders))

    @property
    def is_trivial(self) -> bool:
        return not any(self.exponents)

    def order(self) -> int:
        orders = self.torus.factor_orders(self.q)
        return math.lcm(1, *(o // math.gcd(o, e) for e, o in zip(self.exponents, orders)))

    def value(self, coords: Sequence[int]) -> Cyclotomic:
        """theta(t) for the element with factor coordinates ``coords``."""
        orders = self.torus.factor_orders(self.q)
        out = Cyclotomic.one()
        for e, o, k in zip(self.exponents, orders, coords):
            if e:
                out = out * Cyclotomic.zeta(o, e * int(k))
        return out

    def __mul__(self, other: TorusCharacter) -> TorusCharacter:
        """Pointwise product on the same torus."""
        if other.torus != self.torus or other.q != self.q:
            raise ValueError("characters of different tori")
        exps = tuple(a + b for a, b in zip(self.exponents, other.exponents))
        return TorusCharacter(torus=self.torus, q=self.q, exponents=exps)

    def tensor(self, other: TorusCharacter) -> TorusCharacter:
        """theta (x) theta' on the product torus T x T'."""
        if other.q != self.q:
            raise ValueError("characters over different fields")
        return TorusCharacter(
            torus=self.torus * other.torus, q=self.q, exponents=self.exponents + other.exponents
        )

    def inverse(self) -> TorusCharacter:
        return TorusCharacter(
            torus=self.torus, q=self.q, exponents=tuple(-e for e in self.exponents)
        )

    def label(self) -> str:
        if self.is_trivial:
            return "1"
        return "theta[" + ",".join(map(str, self.exponents)) + "]"


def trivial_character(torus: TorusDescriptor, q: int) -> TorusCharacter:
    return TorusCharacter(torus=torus, q=q, exponents=(0,) * len(torus.factors))


def theta_w(torus: TorusDescriptor, q: int) -> TorusCharacter:
    """The order-2 character theta_T: exponent (q^a -+ 1)/2 on each factor."""
    exps = tuple(o // 2 for o in torus.factor_orders(q))
    return TorusCharacter(torus=torus, q=q, exponents=exps)


def all_characters(torus: TorusDescriptor, q: int) -> Iterator[TorusCharacter]:
    """Irr(T) in lexicographic exponent order."""
    for exps in itertools.product(*(range(o) for o in torus.factor_orders(q))):
        yield TorusCharacter(torus=torus, q=q, exponents=exps)


def split_torus(n: int) -> TorusDescriptor:
    """T_n = GL_1(q)^n."""
    return TorusDescriptor(factors=((1, 1),) * n)


def theta_kl(k: int, l: int, q: int) -> TorusCharacter:  # noqa: E741
    """theta_{k,l} on T_l: 1_k (x) theta_{l-k} if k <= l, else trivial."""
    if k < 0 or l < 0:
        raise ValueError(f"indices must be nonnegative, got ({k}, {l})")
    torus = split_torus(l)
    if k > l:
        return trivial_character(torus, q)
    return trivial_character(split_torus(k), q).tensor(theta_w(split_torus(l - k), q))


def theta_kl_prime(k: int, l: int, q: int) -> TorusCharacter:  # noqa: E741
    """theta'_{k,l} = theta_{k,l} theta_l."""
    return theta_kl(k, l, q) * theta_w(split_torus(l), q)


def rank_one_geometric_class(theta: TorusCharacter) -> int:
    """Geometric conjugacy class of (T, theta) for a rank-one torus.

    Both tori become split over F_{q^2}; pulling theta back along the norm map
    gives a character of F_{q^2}^x with exponent e (q + 1) for GL_1(q) and
    -e (q - 1) for U_1(q). Two pairs are geometrically conjugate iff these
    exponents agree up to the Weyl inversion, so the class is min(E, -E) mod q^2 - 1.
    """
    if len(theta.torus.factors) != 1 or theta.torus.factors[0][0] != 1:
        raise ValueError(f"{theta.torus.label()} is not a rank-one torus")
    q = theta.q
    (e,) = theta.exponents
    sign = theta.torus.factors[0][1]
    modulus = q * q - 1
    exp = (e * (q + 1)) % modulus if sign > 0 else (-e * (q - 1)) % modulus
    return min(exp, (-exp) % modulus)
