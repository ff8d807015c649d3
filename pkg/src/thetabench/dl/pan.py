"""Right-hand side of Pan's decomposition of the uniform projection of omega.

For (Sp_{2n}, SO_{2n'+1}) the uniform part of omega, twisted by 1 (x) chi, is

    sum_k 1/(|W_k| |W_{n-k}| |W_{n'-k}|) sum_{v in W_k} sum_{theta in Irr(T_v)}
        sum_{w in W_{n-k}} sum_{w' in W_{n'-k}} eps_w
        R^{Sp}_{T_v x T_w, theta (x) theta_w} (x) R^{SO}_{T_v x T_w', theta (x) theta_w'}.

Sums over W run over classes weighted by class size. The k loop is outermost so
the memoized dl_character values are shared by the inner sums.
"""

from __future__ import annotations

from fractions import Fraction

from thetabench.chartab.classfn import ClassFunction, ProductClassFunction
from thetabench.core.errors import UnsupportedScale
from thetabench.core.types import Family
from thetabench.dl.characters import dl_character_product
from thetabench.dl.torus import TorusCharacter, all_characters, theta_w
from thetabench.dl.weyl import SignedCycleType, weyl_classes, weyl_order
from thetabench.groups.table import GroupTable


def _product_factor(
    group: GroupTable, v: SignedCycleType, theta: TorusCharacter, w: SignedCycleType
) -> ClassFunction:
    """R^G_{T_v x T_w, theta (x) theta_w}."""
    return dl_character_product(group, v, theta, w, theta_w(w.torus(), group.field.q))


def _weighted(n: int) -> list[tuple[SignedCycleType, Fraction]]:
    order = weyl_order(n)
    return [(w, Fraction(w.class_size(), order)) for w in weyl_classes(n)]


def pan_rhs(sp_group: GroupTable, so_group: GroupTable) -> ProductClassFunction:
    """Pan's right-hand side as a class function on Sp_{2n} x SO_{2n'+1}."""
    for group, family in ((sp_group, Family.SP), (so_group, Family.SO)):
        if group.descriptor is None or group.descriptor.family != family:
            raise ValueError(f"{group.name} is not a {family} group table")
    n = sp_group.descriptor.rank
    n_prime = so_group.descriptor.rank
    if n < 1:
        raise ValueError("Pan's formula needs n >= 1")
    if n > 1 or n_prime > 1:
        raise UnsupportedScale(
            f"Pan's formula on Sp_{2 * n} x SO_{2 * n_prime + 1} needs DL characters of "
            "non-split tori beyond rank one"
        )
    q = sp_group.field.q

    out = ProductClassFunction(
        sp_group, so_group, [[0] * so_group.num_classes for _ in range(sp_group.num_classes)]
    )
    for k in range(min(n, n_prime) + 1):
        for v, v_weight in _weighted(k):
            for theta in all_characters(v.torus(), q):
                for w, w_weight in _weighted(n - k):
                    left = _product_factor(sp_group, v, theta, w)
                    for wp, wp_weight in _weighted(n_prime - k):
                        right = _product_factor(so_group, v, theta, wp)
                        coeff = v_weight * w_weight * wp_weight * w.eps
                        out = out + ProductClassFunction.outer(left, right) * coeff
    out.label = f"pan({n},{n_prime})"
    return out
