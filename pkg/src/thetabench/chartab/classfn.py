"""Class functions with exact cyclotomic values, and character tables."""

from __future__ import annotations

from collections.abc import Callable, Iterable, Sequence
from fractions import Fraction
from typing import Any

import numpy as np

from thetabench.algebra.cyclotomic import Cyclotomic, dot
from thetabench.core.errors import GroupMismatch, NonIntegerMultiplicity
from thetabench.groups.table import GroupTable

Scalar = Cyclotomic | int | Fraction


class ClassFunction:
    """A function on the conjugacy classes of a GroupTable (one value per class)."""

    __slots__ = ("group", "values", "label")

    def __init__(
        self, group: GroupTable, values: Iterable[Scalar], label: str = ""
    ) -> None:
        vals = tuple(Cyclotomic.coerce(v) for v in values)
        if len(vals) != group.num_classes:
            raise ValueError(
                f"{group.name} has {group.num_classes} classes, got {len(vals)} values"
            )
        self.group = group
        self.values = vals
        self.label = label

    @classmethod
    def trivial(cls, group: GroupTable) -> ClassFunction:
        return cls(group, [1] * group.num_classes, "1")

    @classmethod
    def zero(cls, group: GroupTable) -> ClassFunction:
        return cls(group, [0] * group.num_classes, "0")

    @classmethod
    def regular(cls, group: GroupTable) -> ClassFunction:
        values = [0] * group.num_classes
        values[int(group.class_of[group.identity])] = group.order
        return cls(group, values, "reg")

    @classmethod
    def from_matrix_function(
        cls, group: GroupTable, fn: Callable[[np.ndarray], Scalar], label: str = ""
    ) -> ClassFunction:
        """Evaluate fn on each class representative."""
        return cls(group, [fn(group.elements[r]) for r in group.class_reps], label)

    def _check(self, other: ClassFunction) -> None:
        if other.group is not self.group:
            raise GroupMismatch(f"{self.group.name} vs {other.group.name}")

    @property
    def degree(self) -> Cyclotomic:
        return self.values[int(self.group.class_of[self.group.identity])]

    def __call__(self, position: int) -> Cyclotomic:
        """Value at the element with the given position."""
        return self.values[int(self.group.class_of[position])]

    def at_matrix(self, g: np.ndarray) -> Cyclotomic:
        return self.values[self.group.class_of_matrix(g)]

    @property
    def is_zero(self) -> bool:
        return all(v.is_zero for v in self.values)

    def __add__(self, other: ClassFunction) -> ClassFunction:
        self._check(other)
        return ClassFunction(self.group, [a + b for a, b in zip(self.values, other.values)])

    def __sub__(self, other: ClassFunction) -> ClassFunction:
        self._check(other)
        return ClassFunction(self.group, [a - b for a, b in zip(self.values, other.values)])

    def __neg__(self) -> ClassFunction:
        return ClassFunction(self.group, [-a for a in self.values], self.label)

    def __mul__(self, other: ClassFunction | Scalar) -> ClassFunction:
        if isinstance(other, ClassFunction):
            self._check(other)
            return ClassFunction(self.group, [a * b for a, b in zip(self.values, other.values)])
        return ClassFunction(self.group, [a * other for a in self.values])

    __rmul__ = __mul__

    def __truediv__(self, other: int | Fraction) -> ClassFunction:
        return ClassFunction(self.group, [a / other for a in self.values])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ClassFunction):
            return NotImplemented
        return other.group is self.group and all(
            a == b for a, b in zip(self.values, other.values)
        )

    __hash__ = None  # type: ignore[assignment]

    def conj(self) -> ClassFunction:
        return ClassFunction(self.group, [a.conj() for a in self.values], self.label)

    def galois(self, power: int) -> ClassFunction:
        return ClassFunction(self.group, [a.galois(power) for a in self.values])

    def norm2(self) -> Cyclotomic:
        return inner_product(self, self)

    def with_label(self, label: str) -> ClassFunction:
        return ClassFunction(self.group, self.values, label)

    def __repr__(self) -> str:
        return f"ClassFunction({self.group.name}, {self.label or '?'}, deg={self.degree})"

    def to_json(self) -> dict[str, Any]:
        return {"label": self.label, "values": [v.to_json() for v in self.values]}


def inner_product(f1: ClassFunction, f2: ClassFunction) -> Cyclotomic:
    """(f1, f2)_G = 1/|G| sum_g f1(g) conj(f2(g))."""
    f1._check(f2)
    group = f1.group
    total = dot(
        [int(s) for s in group.class_sizes], list(f1.values), [v.conj() for v in f2.values]
    )
    return total / group.order


def multiplicity(f: ClassFunction, chi: ClassFunction) -> int:
    """(f, chi) as an integer; raises NonIntegerMultiplicity otherwise."""
    value = inner_product(f, chi)
    if not value.is_integer:
        raise NonIntegerMultiplicity(f"({f.label}, {chi.label}) = {value} is not an integer")
    return int(value.to_fraction())


class CharacterTable:
    """The irreducible characters of a group, ordered by degree."""

    def __init__(self, group: GroupTable, characters: Sequence[ClassFunction]) -> None:
        self.group = group
        self.characters = [
            c if c.label else c.with_label(f"chi{i}") for i, c in enumerate(characters)
        ]

    def __len__(self) -> int:
        return len(self.characters)

    def __getitem__(self, i: int) -> ClassFunction:
        return self.characters[i]

    def __iter__(self):
        return iter(self.characters)

    @property
    def degrees(self) -> list[int]:
        return [int(c.degree.to_fraction()) for c in self.characters]

    def trivial_index(self) -> int:
        return self.index_of(ClassFunction.trivial(self.group))

    def index_of(self, chi: ClassFunction) -> int:
        for i, c in enumerate(self.characters):
            if c == chi:
                return i
        name = chi.label or "class function"
        raise ValueError(f"{name} is not an irreducible of {self.group.name}")

    def decompose(self, f: ClassFunction, strict: bool = True) -> list[int | Fraction]:
        """Multiplicities (f, chi_i); integers unless ``strict`` is off."""
        if not strict:
            return [inner_product(f, c).to_fraction() for c in self.characters]
        return [multiplicity(f, c) for c in self.characters]

    def constituents(self, f: ClassFunction) -> dict[int, int]:
        return {i: m for i, m in enumerate(self.decompose(f)) if m}

    def is_character(self, f: ClassFunction) -> bool:
        try:
            return all(m >= 0 for m in self.decompose(f))
        except NonIntegerMultiplicity:
            return False

    def linear_characters(self) -> list[int]:
        return [i for i, d in enumerate(self.degrees) if d == 1]

    def central_values(self, i: int) -> dict[int, Cyclotomic]:
        """chi_i(z) / chi_i(1) for every central position z."""
        chi = self.characters[i]
        return {int(z): chi(int(z)) / chi.degree.to_fraction() for z in self.group.center}

    def to_json(self) -> dict[str, Any]:
        g = self.group
        return {
            "group": g.descriptor.model_dump(mode="json") if g.descriptor else g.name,
            "name": g.name,
            "order": g.order,
            "classes": [
                {
                    "representative": g.elements[int(r)].ravel().tolist(),
                    "size": int(s),
                    "order": int(o),
                }
                for r, s, o in zip(g.class_reps, g.class_sizes, g.class_orders)
            ],
            "characters": [c.to_json() for c in self.characters],
        }

    @classmethod
    def from_json(cls, group: GroupTable, data: dict[str, Any]) -> CharacterTable:
        chars = [
            ClassFunction(group, [Cyclotomic.from_json(v) for v in c["values"]], c["label"])
            for c in data["characters"]
        ]
        return cls(group, chars)


class ProductClassFunction:
    """A class function on G x G', stored as a matrix over pairs of classes."""

    __slots__ = ("left", "right", "values", "label")

    def __init__(
        self,
        left: GroupTable,
        right: GroupTable,
        values: Sequence[Sequence[Scalar]],
        label: str = "",
    ) -> None:
        rows = [tuple(Cyclotomic.coerce(v) for v in row) for row in values]
        if len(rows) != left.num_classes or any(len(r) != right.num_classes for r in rows):
            raise ValueError("value matrix shape does not match the class counts")
        self.left = left
        self.right = right
        self.values = rows
        self.label = label

    @classmethod
    def outer(cls, f: ClassFunction, g: ClassFunction) -> ProductClassFunction:
        """(x, y) -> f(x) g(y)."""
        return cls(
            f.group, g.group, [[a * b for b in g.values] for a in f.values], f"{f.label}x{g.label}"
        )

    def _check(self, other: ProductClassFunction) -> None:
        if other.left is not self.left or other.right is not self.right:
            raise GroupMismatch("class functions on different product groups")

    def __add__(self, other: ProductClassFunction) -> ProductClassFunction:
        self._check(other)
        return ProductClassFunction(
            self.left,
            self.right,
            [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.values, other.values)],
        )

    def __sub__(self, other: ProductClassFunction) -> ProductClassFunction:
        return self + other * -1

    def __mul__(self, other: Scalar | ProductClassFunction) -> ProductClassFunction:
        if isinstance(other, ProductClassFunction):
            self._check(other)
            return ProductClassFunction(
                self.left,
                self.right,
                [[a * b for a, b in zip(r1, r2)] for r1, r2 in zip(self.values, other.values)],
            )
        return ProductClassFunction(
            self.left, self.right, [[a * other for a in row] for row in self.values]
        )

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ProductClassFunction):
            return NotImplemented
        return (
            other.left is self.left
            and other.right is self.right
            and all(a == b for r1, r2 in zip(self.values, other.values) for a, b in zip(r1, r2))
        )

    __hash__ = None  # type: ignore[assignment]

    def inner_product(self, other: ProductClassFunction) -> Cyclotomic:
        self._check(other)
        weights, xs, ys = [], [], []
        for i, (r1, r2) in enumerate(zip(self.values, other.values)):
            for j, (a, b) in enumerate(zip(r1, r2)):
                weights.append(int(self.left.class_sizes[i]) * int(self.right.class_sizes[j]))
                xs.append(a)
                ys.append(b.conj())
        return dot(weights, xs, ys) / (self.left.order * self.right.order)

    def pair_with(self, f: ClassFunction, g: ClassFunction) -> Cyclotomic:
        """(F, f (x) g)_{G x G'} without forming the outer product."""
        if f.group is not self.left or g.group is not self.right:
            raise GroupMismatch("factor class functions live on other groups")
        lw = [int(s) for s in self.left.class_sizes]
        rw = [int(s) for s in self.right.class_sizes]
        gconj = [v.conj() for v in g.values]
        partial = [dot(rw, list(row), gconj) for row in self.values]
        return dot(lw, partial, [v.conj() for v in f.values]) / (
            self.left.order * self.right.order
        )

    def slice_right(self, g: ClassFunction) -> ClassFunction:
        """x -> (F(x, .), g)_{G'}: the left class function paired against g."""
        if g.group is not self.right:
            raise GroupMismatch("class function lives on another group")
        rw = [int(s) for s in self.right.class_sizes]
        gconj = [v.conj() for v in g.values]
        return ClassFunction(
            self.left, [dot(rw, list(row), gconj) / self.right.order for row in self.values]
        )

    def slice_left(self, f: ClassFunction) -> ClassFunction:
        """y -> (F(., y), f)_G."""
        if f.group is not self.left:
            raise GroupMismatch("class function lives on another group")
        lw = [int(s) for s in self.left.class_sizes]
        fconj = [v.conj() for v in f.values]
        cols = list(zip(*self.values))
        return ClassFunction(
            self.right, [dot(lw, list(col), fconj) / self.left.order for col in cols]
        )

    def restrict_left(self) -> ClassFunction:
        """x -> F(x, 1)."""
        j = int(self.right.class_of[self.right.identity])
        return ClassFunction(self.left, [row[j] for row in self.values])

    def restrict_right(self) -> ClassFunction:
        """y -> F(1, y)."""
        i = int(self.left.class_of[self.left.identity])
        return ClassFunction(self.right, self.values[i])

    def to_json(self) -> dict[str, Any]:
        return {
            "label": self.label,
            "values": [[v.to_json() for v in row] for row in self.values],
        }
