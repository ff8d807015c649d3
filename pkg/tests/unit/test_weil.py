"""Unit tests for the kernel model of the Weil representation and theta decompositions."""

import numpy as np
import pytest

from thetabench.algebra.field import Field
from thetabench.chartab.dixon import character_table
from thetabench.core.errors import (
    BoundExhausted,
    BudgetExceeded,
    DimensionMismatch,
    LevelBudgetExceeded,
    NonIntegerMultiplicity,
)
from thetabench.core.rng import SeededRNG
from thetabench.core.types import TowerId
from thetabench.groups.dual_pair import dual_pair_embed
from thetabench.groups.table import build_group, orthogonal_descriptor, sp_descriptor
from thetabench.weil.dense import all_vectors, dense_heisenberg, dense_weil, densify
from thetabench.weil.kernel import compose, identity_op
from thetabench.weil.operator import (
    bruhat_factor,
    factor_matrix,
    is_symplectic,
    levi_matrix,
    lower_unipotent_matrix,
    weil_operator,
    weil_trace,
    weyl_matrix,
)
from thetabench.weil.theta import (
    LEFT,
    RIGHT,
    MultiplicityMatrix,
    decompose_dual_pair,
    first_occurrence,
    theta_lift,
    theta_nonzero,
    tower_descriptor,
    tower_point,
    tower_space,
    weil_restriction_character,
)


@pytest.fixture(scope="module")
def f3() -> Field:
    return Field(3)


@pytest.fixture(scope="module")
def sp2(f3):
    return build_group(sp_descriptor(1, 3), f3)


@pytest.fixture(scope="module")
def sp2_table(sp2):
    return character_table(sp2)


@pytest.fixture(scope="module")
def o1_table(f3):
    return character_table(build_group(orthogonal_descriptor(1, 3, 1), f3))


@pytest.fixture(scope="module")
def o3(f3):
    return build_group(orthogonal_descriptor(3, 3, 1), f3)


@pytest.fixture(scope="module")
def mm_sp2_o1(sp2_table, o1_table) -> MultiplicityMatrix:
    pair = dual_pair_embed(sp2_table.group.space, o1_table.group.space)
    return decompose_dual_pair(pair, sp2_table, o1_table)


def _fixed_dim(field: Field, g: np.ndarray) -> int:
    return g.shape[0] - field.rank(field.sub(g, field.identity(g.shape[0])))


class TestKernelModel:
    """Tests for weil_operator and the kernel calculus."""

    def test_identity_trace(self, f3: Field) -> None:
        """tr omega(1) = q^N."""
        assert weil_trace(f3, f3.identity(2)) == 3
        assert identity_op(f3, 2).trace() == 9

    def test_trace_absolute_value(self, sp2) -> None:
        """|tr omega(g)|^2 = q^dim ker(g - 1)."""
        f = sp2.field
        for g in sp2.elements:
            assert weil_trace(f, g).abs2() == f.q ** _fixed_dim(f, g)

    def test_trace_absolute_value_q5(self) -> None:
        """Same identity on words in Levi, unipotent and Weyl generators of Sp_4(5)."""
        f = Field(5)
        rng = SeededRNG(11)
        a = np.array([[1, 2], [0, 3]], dtype=np.int64)
        c = np.array([[1, 2], [2, 4]], dtype=np.int64)
        gens = [
            levi_matrix(f, a),
            lower_unipotent_matrix(f, c),
            weyl_matrix(f, 2, [0]),
            weyl_matrix(f, 2, [0, 1]),
        ]
        g = f.identity(4)
        for _ in range(12):
            g = f.matmul(g, rng.choice(gens))
            assert is_symplectic(f, g)
            assert weil_trace(f, g).abs2() == f.q ** _fixed_dim(f, g)

    def test_multiplicative(self, sp2) -> None:
        """tr omega(g) omega(h) = tr omega(gh)."""
        f = sp2.field
        for i, j in sp2.random_pairs(SeededRNG(5), 40):
            g, h = sp2.elements[i], sp2.elements[j]
            composed = compose(weil_operator(f, g), weil_operator(f, h)).trace()
            assert composed == weil_trace(f, f.matmul(g, h))

    def test_multiplicative_operators(self, sp2) -> None:
        """omega(g) omega(h) = omega(gh) as operators, not only in trace."""
        f = sp2.field
        for i, j in sp2.random_pairs(SeededRNG(6), 40):
            g, h = sp2.elements[i], sp2.elements[j]
            gh = f.matmul(g, h)
            composed = densify(compose(weil_operator(f, g), weil_operator(f, h)))
            assert composed == densify(weil_operator(f, gh))
            assert dense_weil(f, g) @ dense_weil(f, h) == dense_weil(f, gh)

    def test_multiplicative_on_dual_pair(self, sp2, o3) -> None:
        """omega restricted to Sp_2 x O_3 inside Sp_6 is multiplicative."""
        f = sp2.field
        pair = dual_pair_embed(sp2.space, o3.space)
        rng = SeededRNG(8)
        for _ in range(6):
            g1, g2 = (sp2.elements[rng.randrange(sp2.order)] for _ in range(2))
            h1, h2 = (o3.elements[rng.randrange(o3.order)] for _ in range(2))
            x1, x2 = pair.embed(g1, h1), pair.embed(g2, h2)
            x12 = pair.embed(f.matmul(g1, g2), f.matmul(h1, h2))
            assert np.array_equal(f.matmul(x1, x2), x12)
            composed = densify(compose(weil_operator(f, x1), weil_operator(f, x2)))
            assert composed == densify(weil_operator(f, x12))

    def test_bruhat_factorization(self, sp2) -> None:
        """The product of the factor matrices is g."""
        f = sp2.field
        for g in sp2.elements:
            out = f.identity(2)
            for factor in bruhat_factor(f, g):
                out = f.matmul(out, factor_matrix(f, 1, factor))
            assert np.array_equal(out, g)

    def test_compose_dimension_mismatch(self, f3: Field) -> None:
        """Operators on different spaces do not compose."""
        with pytest.raises(DimensionMismatch):
            compose(identity_op(f3, 1), identity_op(f3, 2))

    def test_is_symplectic(self, f3: Field) -> None:
        """Test the symplectic membership check."""
        assert is_symplectic(f3, np.array([[1, 1], [0, 1]]))
        assert not is_symplectic(f3, np.array([[1, 1], [0, 2]]))


class TestDenseModel:
    """Tests for the dense oracle."""

    def test_kernel_matches_dense(self, sp2) -> None:
        """densify(kernel) equals the dense product of generators on all of Sp_2(3)."""
        f = sp2.field
        for g in sp2.elements:
            assert densify(weil_operator(f, g)) == dense_weil(f, g)

    def test_heisenberg_covariance(self, sp2) -> None:
        """omega(g) rho(w) = rho(g w) omega(g) on all of Sp_2(3) and F_3^2."""
        f = sp2.field
        for g in sp2.elements:
            og = dense_weil(f, g)
            for w in all_vectors(f, 2):
                gw = f.matmul(g, w)
                assert og @ dense_heisenberg(f, w[:1], w[1:]) == (
                    dense_heisenberg(f, gw[:1], gw[1:]) @ og
                )

    def test_heisenberg_covariance_sp4(self) -> None:
        """The same covariance on words in the generators of Sp_4(3)."""
        f = Field(3)
        gens = [
            levi_matrix(f, np.array([[1, 1], [0, 2]], dtype=np.int64)),
            lower_unipotent_matrix(f, np.array([[1, 2], [2, 0]], dtype=np.int64)),
            weyl_matrix(f, 2, [1]),
        ]
        rng = SeededRNG(13)
        g = f.identity(4)
        for _ in range(5):
            g = f.matmul(g, rng.choice(gens))
            og = dense_weil(f, g)
            for _ in range(4):
                w = all_vectors(f, 4)[rng.randrange(81)]
                gw = f.matmul(g, w)
                assert og @ dense_heisenberg(f, w[:2], w[2:]) == (
                    dense_heisenberg(f, gw[:2], gw[2:]) @ og
                )

    def test_dense_trace(self, sp2) -> None:
        """Dense and kernel traces agree."""
        f = sp2.field
        for g in sp2.elements[:8]:
            assert dense_weil(f, g).trace() == weil_trace(f, g)

    def test_dense_budget(self, f3: Field) -> None:
        """Test that the dense model refuses large spaces."""
        with pytest.raises(BudgetExceeded):
            dense_weil(f3, f3.identity(6), budget=10)


class TestDecomposition:
    """Tests for decompose_dual_pair on (Sp_2, O_1)."""

    def test_bookkeeping(self, mm_sp2_o1: MultiplicityMatrix) -> None:
        """sum m d d' = q."""
        assert mm_sp2_o1.weil_rank == 1
        assert mm_sp2_o1.total_dimension() == 3
        mm_sp2_o1.check_bookkeeping()

    def test_even_and_odd_parts(self, mm_sp2_o1: MultiplicityMatrix) -> None:
        """omega = even part (degree 2) + odd part (degree 1), each once."""
        nonzero = mm_sp2_o1.nonzero()
        assert len(nonzero) == 2
        assert all(m == 1 for _, _, m in nonzero)
        degrees = sorted(mm_sp2_o1.left.degrees[i] for i, _, _ in nonzero)
        assert degrees == [1, 2]
        assert len({j for _, j, _ in nonzero}) == 2

    def test_restriction_character(self, sp2, o1_table) -> None:
        """omega restricted to Sp_2 has degree q."""
        pair = dual_pair_embed(sp2.space, o1_table.group.space)
        omega = weil_restriction_character(pair, sp2, LEFT)
        assert omega.degree == 3

    def test_theta_lift(self, mm_sp2_o1: MultiplicityMatrix) -> None:
        """Theta of each occurring irreducible is irreducible; others lift to 0."""
        occurring = {i for i, _, _ in mm_sp2_o1.nonzero()}
        for i in range(len(mm_sp2_o1.left)):
            lift = theta_lift(mm_sp2_o1, i, LEFT)
            if i in occurring:
                assert lift.degree == 1
            else:
                assert lift.is_zero
        back = theta_lift(mm_sp2_o1, 0, RIGHT)
        assert back.group is mm_sp2_o1.left.group

    def test_json(self, mm_sp2_o1: MultiplicityMatrix) -> None:
        """Test to_json and from_json against the same tables."""
        loaded = MultiplicityMatrix.from_json(
            mm_sp2_o1.left, mm_sp2_o1.right, mm_sp2_o1.to_json()
        )
        assert np.array_equal(loaded.entries, mm_sp2_o1.entries)

    def test_negative_entry_rejected(self, mm_sp2_o1: MultiplicityMatrix) -> None:
        """Negative multiplicities fail the bookkeeping."""
        entries = mm_sp2_o1.entries.copy()
        entries[0, 0] = -1
        bad = MultiplicityMatrix(mm_sp2_o1.left, mm_sp2_o1.right, entries, 1)
        with pytest.raises(NonIntegerMultiplicity):
            bad.check_bookkeeping()


class TestTowers:
    """Tests for Witt towers and first occurrence."""

    def test_tower_descriptors(self) -> None:
        """Levels are Witt indices."""
        assert tower_descriptor(TowerId.SP, 2, 3).label() == "Sp_4(3)"
        assert tower_descriptor(TowerId.O_MINUS_ODD, 1, 3).label() == "O-_3(3)"
        assert tower_descriptor(TowerId.O_MINUS_EVEN, 0, 3).label() == "O-_2(3)"

    def test_tower_space_witt_index(self, f3: Field) -> None:
        """The space at level k has Witt index k."""
        for tower in TowerId:
            for level in range(3):
                assert tower_space(f3, tower, level).witt_index == level

    def test_level_bound(self, f3: Field) -> None:
        """Levels above the bound are refused."""
        with pytest.raises(LevelBudgetExceeded):
            tower_point(f3, TowerId.SP, 3, level_bound=2)
        assert tower_point(f3, TowerId.SP, 1, level_bound=2).group.order == 24

    def test_trivial_first_occurrence(self, sp2_table) -> None:
        """The trivial of Sp_2 first occurs at level 1 of the odd orthogonal tower."""
        triv = sp2_table.trivial_index()
        level0 = tower_space(sp2_table.group.field, TowerId.O_PLUS_ODD, 0)
        assert not theta_nonzero(sp2_table, triv, level0)
        assert first_occurrence(sp2_table, triv, TowerId.O_PLUS_ODD, 2) == 1
        with pytest.raises(BoundExhausted):
            first_occurrence(sp2_table, triv, TowerId.O_PLUS_ODD, 0)
