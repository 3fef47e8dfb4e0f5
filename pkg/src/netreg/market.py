"""Demand system, profit, consumer surplus, and welfare ratios.

Model: consumer in market ``i`` has linear-quadratic utility with
cross-market spillovers of intensity ``delta`` along the network, so
interior consumption at price ``p`` is ``x = H (a - p)`` with
``H = (I - delta*G)^-1``.  Profit is ``(p - c)' H (a - p)`` and aggregate
consumer surplus ``V = 0.5 ||x||^2``.  The unrestricted profit maximiser is
``(a + c) / 2`` regardless of the network.

Welfare comparisons use ratios against the unrestricted benchmark:
``R_V = V(p)/V(p_ur)`` and ``R_Pi = 1 - ||p - p_ur||_H^2 / ||(a-c)/2||_H^2``.
In the large-spillover limit both ratios collapse to functions of a single
scalar, the eigencentrality-weighted average price deviation
``A(p) = <w1, p - p_ur> / <w1, (a-c)/2>``: profit tends to ``1 - A^2``,
surplus to ``(1 - A)^2``.

Quadratic forms ``z' H z`` are evaluated as ``<z, solve(I - delta*G, z)>``
rather than via an explicit inverse, which stays accurate near the spectral
bound.
"""

from dataclasses import dataclass

import numpy as np

from . import network as netmod
from .errors import (
    DimensionMismatchError,
    OutOfRangeError,
    SpectralBoundError,
    ValidationError,
)
from .network import Network, eigencentrality, h_apply


@dataclass(frozen=True, eq=False)
class MarketPrimitives:
    """Intrinsic values, marginal costs, and spillover intensity on a network.

    Requires ``a_i > c_i`` everywhere and ``0 <= delta`` with
    ``delta * lambda_1 < 1``.
    """

    net: Network
    a: np.ndarray
    c: np.ndarray
    delta: float

    def __post_init__(self):
        a = np.asarray(self.a, dtype=float).copy()
        c = np.asarray(self.c, dtype=float).copy()
        if a.shape != (self.net.n,) or c.shape != (self.net.n,):
            raise DimensionMismatchError(
                f"a {a.shape} and c {c.shape} must have shape ({self.net.n},)"
            )
        if not np.all(a > c):
            i = int(np.argmin(a - c))
            raise ValidationError(f"need a > c everywhere; a[{i}]={a[i]} <= c[{i}]={c[i]}")
        netmod.check_spillover(self.net, self.delta)
        a.setflags(write=False)
        c.setflags(write=False)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "delta", float(self.delta))

    @property
    def n(self):
        return self.net.n


@dataclass(frozen=True, eq=False)
class WelfareOutcome:
    """Full welfare evaluation at one price vector."""

    price: np.ndarray
    quantity: np.ndarray
    profit: float
    surplus: float
    r_v: float
    r_pi: float
    a_stat: float


def _check_price(prim: MarketPrimitives, p) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    if p.shape != (prim.n,):
        raise DimensionMismatchError(f"price shape {p.shape} vs n={prim.n}")
    return p


def _h(prim, v):
    return h_apply(prim.net, prim.delta, v)


def quad_form_h(prim: MarketPrimitives, z) -> float:
    """z' H z via one linear solve (H is symmetric positive definite)."""
    z = np.asarray(z, dtype=float)
    return float(z @ _h(prim, z))


def quad_form_h2(prim: MarketPrimitives, z) -> float:
    """z' H^2 z = ||H z||^2."""
    hz = _h(prim, np.asarray(z, dtype=float))
    return float(hz @ hz)


def demand(prim: MarketPrimitives, p) -> np.ndarray:
    """Equilibrium consumption ``x = H (a - p)``; entries may be negative."""
    p = _check_price(prim, p)
    return _h(prim, prim.a - p)


def profit(prim: MarketPrimitives, p) -> float:
    p = _check_price(prim, p)
    return float((p - prim.c) @ _h(prim, prim.a - p))


def consumer_surplus(prim: MarketPrimitives, p) -> float:
    """Aggregate surplus across the n market-level consumers: 0.5 ||x||^2."""
    x = demand(prim, p)
    return 0.5 * float(x @ x)


def consumer_surplus_av(prim: MarketPrimitives, p) -> float:
    """Surplus of a single representative consumer: 0.5 (a-p)' H (a-p)."""
    p = _check_price(prim, p)
    return 0.5 * quad_form_h(prim, prim.a - p)


def unrestricted_price(prim: MarketPrimitives) -> np.ndarray:
    """Profit-maximising price with no regulation: (a + c) / 2."""
    return 0.5 * (prim.a + prim.c)


def half_gap(prim: MarketPrimitives) -> np.ndarray:
    """(a - c) / 2, the markup of the unrestricted price over cost."""
    return 0.5 * (prim.a - prim.c)


def ratios(prim: MarketPrimitives, p) -> tuple[float, float]:
    """(R_V, R_Pi) at price p, normalised by the unrestricted benchmark."""
    p = _check_price(prim, p)
    d = half_gap(prim)
    r_v = consumer_surplus(prim, p) / (0.5 * quad_form_h2(prim, d))
    loss = quad_form_h(prim, p - unrestricted_price(prim))
    r_pi = 1.0 - loss / quad_form_h(prim, d)
    return float(r_v), float(r_pi)


def a_statistic(prim: MarketPrimitives, p) -> float:
    """Eigencentrality-weighted average price deviation, normalised.

    ``A(p) = <w1, p - p_ur> / <w1, (a-c)/2>``; the denominator is positive
    because ``w1 > 0`` and ``a > c``.
    """
    p = _check_price(prim, p)
    w1 = eigencentrality(prim.net)
    denom = float(w1 @ half_gap(prim))
    assert denom > 0.0
    return float(w1 @ (p - unrestricted_price(prim))) / denom


def limit_ratios(a_stat: float, allow_out_of_range: bool = False) -> tuple[float, float]:
    """Large-spillover limits (R_V, R_Pi) = ((1-A)^2, 1-A^2) for a fixed price.

    ``|A| > 1`` means negative limiting profit; rejected unless the caller
    asks for the raw formula.
    """
    if abs(a_stat) > 1.0 and not allow_out_of_range:
        raise OutOfRangeError(f"|a_stat|={abs(a_stat)!r} > 1 (negative limiting profit)")
    return (1.0 - a_stat) ** 2, 1.0 - a_stat**2


def welfare_outcome(prim: MarketPrimitives, p) -> WelfareOutcome:
    p = _check_price(prim, p)
    x = demand(prim, p)
    r_v, r_pi = ratios(prim, p)
    out_p = p.copy()
    out_p.setflags(write=False)
    x = x.copy()
    x.setflags(write=False)
    return WelfareOutcome(
        price=out_p,
        quantity=x,
        profit=profit(prim, p),
        surplus=0.5 * float(x @ x),
        r_v=r_v,
        r_pi=r_pi,
        a_stat=a_statistic(prim, p),
    )


def delta_near_bound(net: Network, epsilon: float) -> float:
    """The spillover value ``(1 - epsilon) / lambda_1``.

    Convenience for limit sweeps; raises if the graph has ``lambda_1 = 0``
    (single node) or if epsilon is not in (0, 1].
    """
    if not 0.0 < epsilon <= 1.0:
        raise OutOfRangeError(f"epsilon={epsilon!r} must lie in (0, 1]")
    lam1 = net.lambda1
    if lam1 <= 0.0:
        raise SpectralBoundError("lambda_1 = 0: any nonnegative delta is admissible")
    return (1.0 - epsilon) / lam1
