"""Unit tests for Weyl group combinatorics, tori and Deligne-Lusztig characters."""

import pytest

from thetabench.algebra.field import Field
from thetabench.chartab.classfn import ClassFunction, inner_product
from thetabench.chartab.dixon import character_table
from thetabench.core.errors import NotSpecialOrthogonal, UnsupportedScale
from thetabench.dl.characters import (
    chi_character,
    chi_character_dl,
    classify_series,
    dl_character,
    special_subgroup,
    uniform_basis,
    uniform_project,
    unipotent_average,
)
from thetabench.dl.pan import pan_rhs
from thetabench.dl.torus import (
    TorusCharacter,
    TorusDescriptor,
    all_characters,
    rank_one_geometric_class,
    split_torus,
    theta_kl,
    theta_kl_prime,
    theta_w,
    trivial_character,
)
from thetabench.dl.weyl import (
    SignedCycleType,
    bipartition_count,
    bipartitions,
    weyl_classes,
    weyl_order,
)
from thetabench.groups.table import (
    build_group,
    gl_descriptor,
    orthogonal_descriptor,
    sp_descriptor,
)

SPLIT = SignedCycleType(cycles=((1, 1),))
ELLIPTIC = SignedCycleType(cycles=((1, -1),))
NONSPLIT = TorusDescriptor(factors=((1, -1),))


@pytest.fixture(scope="module")
def f3() -> Field:
    return Field(3)


@pytest.fixture(scope="module")
def sp2(f3):
    return build_group(sp_descriptor(1, 3), f3)


@pytest.fixture(scope="module")
def o3(f3):
    return build_group(orthogonal_descriptor(3, 3, 1), f3)


@pytest.fixture(scope="module")
def so3(o3):
    return special_subgroup(o3)


class TestWeyl:
    """Tests for signed cycle types and bipartitions."""

    def test_class_counts(self) -> None:
        """Classes of W_n are counted by bipartitions of n."""
        expected = [1, 2, 5, 10, 20, 36, 65]
        for n, count in enumerate(expected):
            assert len(weyl_classes(n)) == count
            assert bipartition_count(n) == count
            assert len(bipartitions(n)) == count

    def test_class_sizes(self) -> None:
        """Class sizes add up to 2^n n!."""
        for n in range(5):
            assert sum(w.class_size() for w in weyl_classes(n)) == weyl_order(n)

    def test_split_first(self) -> None:
        """The split torus comes first."""
        assert weyl_classes(3)[0].is_split
        assert weyl_classes(1)[1] == ELLIPTIC

    def test_signs(self) -> None:
        """epsilon_w is the product of cycle signs."""
        w = SignedCycleType(cycles=((2, -1), (1, -1)))
        assert w.eps == 1
        assert w.label() == "(2-)(1-)"
        assert w.torus().order(3) == 10 * 4

    def test_negative_rank(self) -> None:
        """Test that negative ranks are refused."""
        with pytest.raises(ValueError):
            weyl_order(-1)


class TestTorus:
    """Tests for torus characters."""

    def test_theta_w_has_order_two(self) -> None:
        """theta_w squares to the trivial character."""
        for factors in (((1, 1),), ((1, -1),), ((2, 1), (1, -1))):
            theta = theta_w(TorusDescriptor(factors=factors), 5)
            assert not theta.is_trivial
            assert (theta * theta).is_trivial

    def test_character_count(self) -> None:
        """|Irr(T)| = |T|."""
        assert len(list(all_characters(NONSPLIT, 3))) == 4

    def test_exponent_count_checked(self) -> None:
        """Test that exponents must match the factors."""
        with pytest.raises(ValueError):
            TorusCharacter(torus=NONSPLIT, q=3, exponents=(1, 1))

    def test_theta_kl(self) -> None:
        """theta_{k,l} is trivial on the first k factors and theta on the rest."""
        assert theta_kl(0, 1, 3) == theta_w(split_torus(1), 3)
        assert theta_kl(1, 1, 3).is_trivial
        assert theta_kl(2, 1, 3).is_trivial
        assert theta_kl(1, 2, 5).exponents == (0, 2)

    def test_theta_kl_prime(self) -> None:
        """theta'_{k,l} = theta_{k,l} theta_l."""
        assert theta_kl_prime(1, 1, 3) == theta_w(split_torus(1), 3)
        assert theta_kl_prime(0, 1, 3).is_trivial

    def test_geometric_classes(self) -> None:
        """The trivial and the order-two characters of both rank-one tori pair up."""
        q = 3
        split_triv = trivial_character(split_torus(1), q)
        ell_triv = trivial_character(NONSPLIT, q)
        assert rank_one_geometric_class(split_triv) == rank_one_geometric_class(ell_triv)
        split_theta = theta_w(split_torus(1), q)
        ell_theta = theta_w(NONSPLIT, q)
        assert rank_one_geometric_class(split_theta) == rank_one_geometric_class(ell_theta)
        assert rank_one_geometric_class(split_theta) != rank_one_geometric_class(split_triv)


class TestDLCharacters:
    """Tests for dl_character on rank-one groups."""

    def test_degrees(self, sp2) -> None:
        """R_T(1)(1) = +-|G|_p' / |T|."""
        split = dl_character(sp2, SPLIT, trivial_character(split_torus(1), 3))
        ell = dl_character(sp2, ELLIPTIC, trivial_character(NONSPLIT, 3))
        assert split.degree == 4
        assert ell.degree == -2

    def test_norms(self, sp2) -> None:
        """(R_T(1), R_T(1)) = 2 for both tori."""
        for w, torus in ((SPLIT, split_torus(1)), (ELLIPTIC, NONSPLIT)):
            chi = dl_character(sp2, w, trivial_character(torus, 3))
            assert inner_product(chi, chi) == 2

    def test_disjointness(self, sp2) -> None:
        """Characters in different geometric classes are orthogonal."""
        a = dl_character(sp2, SPLIT, theta_w(split_torus(1), 3))
        b = dl_character(sp2, ELLIPTIC, trivial_character(NONSPLIT, 3))
        assert inner_product(a, b) == 0

    def test_unipotent_average_is_trivial(self, sp2, so3) -> None:
        """The W-average of R_{T_w,1} is the trivial character."""
        assert unipotent_average(sp2) == ClassFunction.trivial(sp2)
        assert unipotent_average(so3) == ClassFunction.trivial(so3)

    def test_chi_as_average(self, so3) -> None:
        """The spinor-norm character is the W-average of R_{T_w,theta_w}."""
        chi = chi_character(so3)
        assert chi == chi_character_dl(so3)
        assert inner_product(chi, chi) == 1

    def test_chi_needs_so(self, sp2) -> None:
        """chi is defined on SO only."""
        with pytest.raises(NotSpecialOrthogonal):
            chi_character(sp2)

    def test_disconnected_unsupported(self, o3) -> None:
        """Full orthogonal groups are refused."""
        with pytest.raises(UnsupportedScale):
            dl_character(o3, SPLIT, trivial_character(split_torus(1), 3))

    def test_coxeter_torus_of_gl2_unsupported(self, f3: Field) -> None:
        """Non-split tori beyond rank one need Green functions."""
        gl2 = build_group(gl_descriptor(2, 3), f3)
        w = SignedCycleType(cycles=((2, 1),))
        with pytest.raises(UnsupportedScale):
            dl_character(gl2, w, trivial_character(w.torus(), 3))

    def test_wrong_torus(self, sp2) -> None:
        """A character must live on T_w."""
        with pytest.raises(ValueError):
            dl_character(sp2, SPLIT, trivial_character(NONSPLIT, 3))


class TestUniformProjection:
    """Tests for uniform_basis and uniform_project."""

    def test_projection_fixes_basis(self, sp2) -> None:
        """Uniform functions are their own projection."""
        basis = uniform_basis(sp2)
        assert basis
        for b in basis[:3]:
            assert uniform_project(b, basis) == b

    def test_projection_is_idempotent(self, sp2) -> None:
        """Projecting twice changes nothing."""
        basis = uniform_basis(sp2)
        pi = character_table(sp2)[3]
        once = uniform_project(pi, basis)
        assert uniform_project(once, basis) == once

    def test_pan_rhs_shape(self, sp2, so3) -> None:
        """pan_rhs lives on Sp_2 x SO_3."""
        rhs = pan_rhs(sp2, so3)
        assert rhs.left is sp2
        assert rhs.right is so3


class TestSeries:
    """Tests for classify_series."""

    def test_trivial_is_unipotent(self, sp2) -> None:
        """The trivial character lies in the unipotent series."""
        table = character_table(sp2)
        witness = classify_series(table, table.trivial_index())
        assert witness.label == "unipotent"
        assert witness.multiplicity != 0

    def test_orthogonal_goes_through_so(self, o3) -> None:
        """Irreducibles of O_3 are classified through SO_3."""
        table = character_table(o3)
        assert classify_series(table, table.trivial_index()).label == "unipotent"
