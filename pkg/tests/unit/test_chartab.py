"""Unit tests for character tables and induction."""

from fractions import Fraction

import pytest

from thetabench.algebra.field import Field
from thetabench.chartab.classfn import (
    CharacterTable,
    ClassFunction,
    ProductClassFunction,
    inner_product,
    multiplicity,
)
from thetabench.chartab.dixon import character_table, lift_prime
from thetabench.chartab.induction import (
    hc_induce,
    induce_from_subgroup,
    is_cuspidal,
    jacquet,
    restrict,
)
from thetabench.core.errors import (
    BudgetExceeded,
    GroupMismatch,
    LeviMismatch,
    NonIntegerMultiplicity,
)
from thetabench.groups.parabolic import borel_levi, parabolic
from thetabench.groups.table import (
    build_group,
    orthogonal_descriptor,
    sp_descriptor,
    subgroup_table,
)


@pytest.fixture(scope="module")
def f3() -> Field:
    return Field(3)


@pytest.fixture(scope="module")
def sp2(f3):
    return build_group(sp_descriptor(1, 3), f3)


@pytest.fixture(scope="module")
def sp2_table(sp2) -> CharacterTable:
    return character_table(sp2)


@pytest.fixture(scope="module")
def o3(f3):
    return build_group(orthogonal_descriptor(3, 3, 1), f3)


@pytest.fixture(scope="module")
def so3_in_o3(o3, f3):
    so3 = build_group(orthogonal_descriptor(3, 3, 1, special=True), f3)
    return subgroup_table(o3, o3.positions_of_subgroup(so3), "SO+_3(3)", so3.descriptor)


class TestCharacterTable:
    """Tests for character_table."""

    def test_sp2_degrees(self, sp2_table: CharacterTable) -> None:
        """SL_2(3) has degrees 1, 1, 1, 2, 2, 2, 3."""
        assert sp2_table.degrees == [1, 1, 1, 2, 2, 2, 3]

    def test_so3_degrees(self, so3_in_o3) -> None:
        """SO_3(3) is S_4."""
        assert character_table(so3_in_o3).degrees == [1, 1, 2, 3, 3]

    def test_o3_size(self, o3) -> None:
        """O_3(3) = S_4 x C_2 has 10 irreducibles."""
        table = character_table(o3)
        assert len(table) == 10
        assert sum(d * d for d in table.degrees) == 48

    def test_orthonormal(self, sp2_table: CharacterTable) -> None:
        """Irreducible characters are orthonormal."""
        for i, a in enumerate(sp2_table):
            for j, b in enumerate(sp2_table):
                assert inner_product(a, b) == (1 if i == j else 0)

    def test_trivial_first(self, sp2_table: CharacterTable) -> None:
        """The trivial character has index 0."""
        assert sp2_table.trivial_index() == 0

    def test_regular_decomposition(self, sp2, sp2_table: CharacterTable) -> None:
        """The regular character contains each irreducible d times."""
        parts = sp2_table.constituents(ClassFunction.regular(sp2))
        assert parts == dict(enumerate(sp2_table.degrees))

    def test_linear_characters(self, sp2_table: CharacterTable) -> None:
        """SL_2(3) has abelianization Z/3."""
        assert len(sp2_table.linear_characters()) == 3

    def test_central_values(self, sp2, sp2_table: CharacterTable) -> None:
        """Central characters take values +-1 at -I."""
        for i in range(len(sp2_table)):
            values = sp2_table.central_values(i)
            assert set(values) == {int(z) for z in sp2.center}
            assert all(v == 1 or v == -1 for v in values.values())

    def test_json(self, sp2, sp2_table: CharacterTable) -> None:
        """Test to_json and from_json."""
        loaded = CharacterTable.from_json(sp2, sp2_table.to_json())
        assert [c == d for c, d in zip(loaded, sp2_table)] == [True] * len(sp2_table)

    def test_budget(self, sp2) -> None:
        """Test that a group over budget is refused."""
        with pytest.raises(BudgetExceeded):
            character_table(sp2, max_order=10)

    def test_lift_prime(self, sp2) -> None:
        """The lifting prime is 1 mod the exponent."""
        assert (lift_prime(sp2) - 1) % sp2.exponent == 0


class TestClassFunction:
    """Tests for ClassFunction arithmetic."""

    def test_non_integer_multiplicity(self, sp2) -> None:
        """Half the trivial character is not a character."""
        half = ClassFunction.trivial(sp2) / Fraction(2)
        with pytest.raises(NonIntegerMultiplicity):
            multiplicity(half, ClassFunction.trivial(sp2))

    def test_group_mismatch(self, sp2, o3) -> None:
        """Test that class functions on different groups do not mix."""
        with pytest.raises(GroupMismatch):
            ClassFunction.trivial(sp2) + ClassFunction.trivial(o3)

    def test_is_character(self, sp2, sp2_table: CharacterTable) -> None:
        """Differences of characters are not characters."""
        triv = ClassFunction.trivial(sp2)
        assert sp2_table.is_character(triv * 2)
        assert not sp2_table.is_character(triv - sp2_table[1])

    def test_outer_product_norm(self, sp2_table: CharacterTable, o3) -> None:
        """An outer product of irreducibles has norm one."""
        f = ProductClassFunction.outer(sp2_table[3], ClassFunction.trivial(o3))
        assert f.inner_product(f) == 1
        assert f.pair_with(sp2_table[3], ClassFunction.trivial(o3)) == 1
        assert f.restrict_left() == sp2_table[3]


class TestInduction:
    """Tests for restriction, induction and Harish-Chandra functors."""

    def test_induce_trivial(self, o3, so3_in_o3) -> None:
        """Ind_SO^O(1) = 1 + det."""
        ind = induce_from_subgroup(ClassFunction.trivial(so3_in_o3), o3)
        assert ind.degree == 2
        table = character_table(o3)
        parts = table.constituents(ind)
        assert sorted(parts.values()) == [1, 1]
        assert table.trivial_index() in parts

    def test_frobenius_reciprocity(self, o3, so3_in_o3) -> None:
        """(Ind f, g) = (f, Res g)."""
        sub_table = character_table(so3_in_o3)
        table = character_table(o3)
        for f in sub_table:
            for g in table:
                lhs = inner_product(induce_from_subgroup(f), g)
                rhs = inner_product(f, restrict(g, so3_in_o3))
                assert lhs == rhs

    def test_hc_induce_trivial(self, sp2, sp2_table: CharacterTable) -> None:
        """R_T^G(1) = 1 + St for SL_2."""
        P = parabolic(sp2, borel_levi(sp2))
        ps = hc_induce(P, ClassFunction.trivial(P.levi_table))
        assert ps.degree == 4
        parts = sp2_table.constituents(ps)
        assert parts == {0: 1, len(sp2_table) - 1: 1}

    def test_jacquet_adjoint(self, sp2, sp2_table: CharacterTable) -> None:
        """Jacquet restriction is adjoint to Harish-Chandra induction."""
        P = parabolic(sp2, borel_levi(sp2))
        sigma = ClassFunction.trivial(P.levi_table)
        for pi in sp2_table:
            assert inner_product(hc_induce(P, sigma), pi) == inner_product(sigma, jacquet(P, pi))

    def test_cuspidals(self, sp2_table: CharacterTable) -> None:
        """SL_2(3) has cuspidal irreducibles of degrees 1, 1, 2."""
        degrees = [d for chi, d in zip(sp2_table, sp2_table.degrees) if is_cuspidal(chi)]
        assert degrees == [1, 1, 2]

    def test_levi_mismatch(self, sp2) -> None:
        """Test that a class function on G is not a Levi character."""
        P = parabolic(sp2, borel_levi(sp2))
        with pytest.raises(LeviMismatch):
            hc_induce(P, ClassFunction.trivial(sp2))
