"""Convex price regulations and the firm's constrained pricing problem.

The firm's profit loss from deviating off the unrestricted price is the
squared H-norm of the deviation (``H = (I - delta*G)^-1``), so its optimal
regulated price is the H-norm projection of the unrestricted price onto
the feasible set.  Supported set kinds:

* ``Unrestricted``          -- all of R^n
* ``Box(lower, upper)``     -- floors and ceilings, +-inf admitted
* ``PriceDifference(D)``    -- |p_i - p_j| <= D_ij
* ``AveragePrice(theta, M)``-- <theta, p> <= M with theta in the simplex
* ``Uniform``               -- one common price level
* ``Halfspaces([...])``     -- explicit list of (normal, offset) pairs

Projection dispatch: Unrestricted and Uniform have closed forms (the
uniform level is ``<1, H p_ur> / <1, H 1>``); AveragePrice is a single
halfspace, projected exactly; everything else is decomposed into interval
constraints ``lo <= <v, p> <= hi`` (opposing halfspace pairs grouped into
one slab each) and run through Dykstra's alternating projection in the H
inner product.  The per-slab projection is exact,

    proj(q) = q - ((t - clamp(t, lo, hi)) / (v' Hinv v)) * Hinv v,
    t = <v, q>,

with ``Hinv = I - delta*G`` explicit, so every sub-projection is cheap and
the only iteration is the outer Dykstra cycle, finished by an exact
active-set polish once the duality gap is small.

Efficiency analysis: an equilibrium sits on the Pareto frontier iff the
feasible set contains a frontier-family price and stays inside the
supporting halfspace at that price, whose normal is the positive weight
vector ``iota(eta) = H [I - 2*delta/(2-eta) G]^-1 (a - c)``.  For the named
kinds this reduces to knife-edge conditions checked by
``pareto_certificate``.  In the large-spillover limit everything collapses
onto the interval of the average-deviation statistic over the set
(``a_interval``), whose signed position decides the trichotomy
inefficient / neutral / efficient (``classify_limit``).
"""

import enum
import itertools
from dataclasses import dataclass

import numpy as np

from . import pareto as paretomod
from .errors import (
    DimensionMismatchError,
    EtaOutOfRangeError,
    InfeasibleError,
    NoConvergenceError,
    OutOfRangeError,
    UnsupportedRegulationError,
    ValidationError,
)
from .market import (
    MarketPrimitives,
    WelfareOutcome,
    a_statistic,
    half_gap,
    quad_form_h,
    ratios,
    unrestricted_price,
    welfare_outcome,
)
from .network import corr, eigencentrality, h_apply

DYKSTRA_TOL = 1e-10
DYKSTRA_MAX_CYCLES = 100_000
DIVERGENCE_FACTOR = 1e8
MEMBERSHIP_TOL = 1e-9
PROPORTIONALITY_TOL = 1e-10


class RegulationSet:
    """Base tag for feasible price sets; concrete kinds are dataclasses."""

    kind = "abstract"


@dataclass(frozen=True)
class Unrestricted(RegulationSet):
    kind = "unrestricted"


@dataclass(frozen=True)
class Uniform(RegulationSet):
    kind = "uniform"


@dataclass(frozen=True, eq=False)
class Box(RegulationSet):
    """Price floors and ceilings; -inf / +inf entries disable a side."""

    kind = "box"
    lower: np.ndarray = None
    upper: np.ndarray = None

    def __post_init__(self):
        lower = np.asarray(self.lower, dtype=float).copy()
        upper = np.asarray(self.upper, dtype=float).copy()
        if lower.ndim != 1 or lower.shape != upper.shape:
            raise ValidationError("box bounds must be equal-length vectors")
        if np.any(lower > upper):
            i = int(np.argmax(lower - upper))
            raise ValidationError(f"box is empty: lower[{i}]={lower[i]} > upper[{i}]={upper[i]}")
        lower.setflags(write=False)
        upper.setflags(write=False)
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)


@dataclass(frozen=True, eq=False)
class PriceDifference(RegulationSet):
    """|p_i - p_j| <= delta_matrix[i, j]; the matrix is symmetric, >= 0."""

    kind = "price_difference"
    delta_matrix: np.ndarray = None

    def __post_init__(self):
        d = np.asarray(self.delta_matrix, dtype=float).copy()
        if d.ndim != 2 or d.shape[0] != d.shape[1]:
            raise ValidationError("difference-cap matrix must be square")
        if np.any(np.abs(d - d.T) > 1e-12 * np.maximum(1.0, np.abs(d))):
            raise ValidationError("difference-cap matrix must be symmetric")
        d = 0.5 * (d + d.T)
        if np.any(d < 0.0):
            raise ValidationError("difference caps must be nonnegative")
        if np.any(np.diag(d) != 0.0):
            raise ValidationError("difference-cap diagonal must be zero")
        d.setflags(write=False)
        object.__setattr__(self, "delta_matrix", d)


@dataclass(frozen=True, eq=False)
class AveragePrice(RegulationSet):
    """<theta, p> <= cap with theta nonnegative and summing to one."""

    kind = "average_price"
    theta: np.ndarray = None
    cap: float = None

    def __post_init__(self):
        theta = np.asarray(self.theta, dtype=float).copy()
        if theta.ndim != 1:
            raise ValidationError("average-price weights must be a vector")
        if np.any(theta < 0.0):
            raise ValidationError("average-price weights must be nonnegative")
        total = float(theta.sum())
        if abs(total - 1.0) > 1e-9:
            raise ValidationError(f"average-price weights must sum to 1, got {total!r}")
        theta = theta / total
        theta.setflags(write=False)
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "cap", float(self.cap))


@dataclass(frozen=True, eq=False)
class Halfspaces(RegulationSet):
    """Intersection of explicit halfspaces <normal, p> <= offset."""

    kind = "halfspaces"
    constraints: tuple = None

    def __post_init__(self):
        cleaned = []
        for normal, offset in self.constraints:
            v = np.asarray(normal, dtype=float).copy()
            if v.ndim != 1 or not np.any(v != 0.0):
                raise ValidationError("halfspace normal must be a nonzero vector")
            v.setflags(write=False)
            cleaned.append((v, float(offset)))
        if not cleaned:
            raise ValidationError("halfspace list must be nonempty")
        object.__setattr__(self, "constraints", tuple(cleaned))


def halfspace_list(k: RegulationSet, n: int) -> list[tuple[np.ndarray, float]]:
    """Decompose a set into halfspaces (infinite box bounds are skipped)."""
    if isinstance(k, Box):
        _check_dim(k.lower.shape[0], n)
        out = []
        for i in range(n):
            if np.isfinite(k.upper[i]):
                v = np.zeros(n)
                v[i] = 1.0
                out.append((v, float(k.upper[i])))
            if np.isfinite(k.lower[i]):
                v = np.zeros(n)
                v[i] = -1.0
                out.append((v, -float(k.lower[i])))
        return out
    if isinstance(k, PriceDifference):
        _check_dim(k.delta_matrix.shape[0], n)
        out = []
        for i, j in itertools.permutations(range(n), 2):
            v = np.zeros(n)
            v[i], v[j] = 1.0, -1.0
            out.append((v, float(k.delta_matrix[i, j])))
        return out
    if isinstance(k, AveragePrice):
        _check_dim(k.theta.shape[0], n)
        return [(k.theta.copy(), k.cap)]
    if isinstance(k, Halfspaces):
        for v, _ in k.constraints:
            _check_dim(v.shape[0], n)
        return [(v.copy(), m) for v, m in k.constraints]
    raise UnsupportedRegulationError(f"no halfspace form for kind {k.kind!r}")


def _check_dim(got, n):
    if got != n:
        raise DimensionMismatchError(f"regulation dimension {got} vs n={n}")


def contains(prim: MarketPrimitives, k: RegulationSet, p, tol: float = MEMBERSHIP_TOL) -> bool:
    """Membership test with a scale-relative slack."""
    p = np.asarray(p, dtype=float)
    scale = tol * (1.0 + float(np.abs(p).max()))
    if isinstance(k, Unrestricted):
        return True
    if isinstance(k, Uniform):
        return float(p.max() - p.min()) <= scale
    for v, m in halfspace_list(k, prim.n):
        if float(v @ p) > m + scale * (1.0 + float(np.abs(v).sum())):
            return False
    return True


def _slab_list(k: RegulationSet, n: int) -> list[tuple[np.ndarray, float, float]]:
    """Interval constraints (v, lo, hi) meaning lo <= <v, p> <= hi.

    Opposing halfspace pairs (box sides, the two orientations of a
    difference cap) are grouped into one slab each, so every
    sub-projection inside Dykstra lands exactly on the feasible interval
    instead of bouncing between two nearly parallel faces.
    """
    if isinstance(k, Box):
        _check_dim(k.lower.shape[0], n)
        out = []
        for i in range(n):
            if np.isfinite(k.lower[i]) or np.isfinite(k.upper[i]):
                v = np.zeros(n)
                v[i] = 1.0
                out.append((v, float(k.lower[i]), float(k.upper[i])))
        return out
    if isinstance(k, PriceDifference):
        _check_dim(k.delta_matrix.shape[0], n)
        out = []
        for i, j in itertools.combinations(range(n), 2):
            v = np.zeros(n)
            v[i], v[j] = 1.0, -1.0
            cap = float(k.delta_matrix[i, j])
            out.append((v, -cap, cap))
        return out
    if isinstance(k, AveragePrice):
        _check_dim(k.theta.shape[0], n)
        return [(k.theta.copy(), -np.inf, k.cap)]
    if isinstance(k, Halfspaces):
        for v, _ in k.constraints:
            _check_dim(v.shape[0], n)
        return [(v.copy(), -np.inf, m) for v, m in k.constraints]
    raise UnsupportedRegulationError(f"no slab form for kind {k.kind!r}")


def _polish_active_set(q, hinv, slabs, coefs, vmat, los, his, feas_slack):
    """Exact solve on the active set Dykstra identified, or None.

    Every Dykstra correction is a scalar multiple of its slab direction, so
    the correction coefficients are (converging) KKT multipliers; their
    signs name the active faces.  Projecting onto those faces as equalities
    is one small linear solve; if the result is feasible and its
    multipliers carry the right signs it satisfies the KKT system exactly
    and is returned as the projection.
    """
    floor = 1e-12 * (1.0 + float(np.abs(coefs).max()))
    active = [k for k, c in enumerate(coefs) if abs(c) > floor]
    if not active:
        return q.copy() if _within(vmat @ q, los, his, feas_slack) else None
    v_a = vmat[active]
    b_a = np.array([his[k] if coefs[k] > 0 else los[k] for k in active])
    if not np.all(np.isfinite(b_a)):
        return None
    hinv_vt = hinv @ v_a.T
    gram = v_a @ hinv_vt
    rhs = v_a @ q - b_a
    try:
        mult = np.linalg.solve(gram, rhs)
    except np.linalg.LinAlgError:
        mult, *_ = np.linalg.lstsq(gram, rhs, rcond=None)
    x = q - hinv_vt @ mult
    if np.abs(v_a @ x - b_a).max() > feas_slack:
        return None  # inconsistent active set
    if not _within(vmat @ x, los, his, feas_slack):
        return None
    sign_tol = 1e-9 * (1.0 + float(np.abs(mult).max()))
    for k, mu in zip(active, mult):
        if coefs[k] > 0 and mu < -sign_tol:
            return None
        if coefs[k] < 0 and mu > sign_tol:
            return None
    return x


def _within(levels, los, his, slack):
    return bool(np.all(levels <= his + slack) and np.all(levels >= los - slack))


def _dykstra(prim: MarketPrimitives, slabs, q):
    """Dykstra's alternating projection in the H inner product.

    Corrections stay parallel to the fixed directions ``Hinv v_k``, so the
    iterate always satisfies ``H(q - x) = sum_k coef_k v_k`` exactly and
    only feasibility plus complementary slackness remain to converge.  A
    cycle whose iterate moves less than ``DYKSTRA_TOL * (1 + ||q||_H)`` in
    H-norm and whose slackness products are small triggers a terminal
    active-set polish that returns an exact KKT point; runaway iterates or
    correction coefficients trip the emptiness heuristic.
    """
    n = q.shape[0]
    hinv = np.eye(n) - prim.delta * prim.net.adjacency
    vmat = np.array([v for v, _, _ in slabs])
    dirs = (hinv @ vmat.T).T
    norms = np.einsum("kn,kn->k", vmat, dirs)
    los = np.array([lo for _, lo, _ in slabs])
    his = np.array([hi for _, _, hi in slabs])
    m = len(slabs)
    x = q.copy()
    coefs = np.zeros(m)
    move_scale = DYKSTRA_TOL * (1.0 + np.sqrt(quad_form_h(prim, q)))
    feas_slack = MEMBERSHIP_TOL * (1.0 + float(np.abs(q).max()))
    gap_scale = 1e-9 * (1.0 + float(np.abs(q).max())) ** 2
    escape = DIVERGENCE_FACTOR * max(1.0, float(np.linalg.norm(q)))
    coef_escape = 1e6 * (1.0 + float(np.linalg.norm(q)))
    for _ in range(DYKSTRA_MAX_CYCLES):
        x_prev = x
        for k in range(m):
            y = x + coefs[k] * dirs[k]
            t = float(vmat[k] @ y)
            target = min(max(t, los[k]), his[k])
            coefs[k] = (t - target) / norms[k]
            x = y - coefs[k] * dirs[k]
        move = x - x_prev
        if np.sqrt(max(quad_form_h(prim, move), 0.0)) <= move_scale:
            levels = vmat @ x
            if _within(levels, los, his, feas_slack):
                # duality gap: multipliers must pair with active faces
                # (a positive coefficient implies a finite upper face and
                # vice versa, so these products are always finite)
                pos, neg = coefs > 0.0, coefs < 0.0
                gap_total = float(
                    np.abs(coefs[pos] * norms[pos] * (his[pos] - levels[pos])).sum()
                    + np.abs(coefs[neg] * norms[neg] * (levels[neg] - los[neg])).sum()
                )
                if gap_total <= gap_scale:
                    polished = _polish_active_set(q, hinv, slabs, coefs, vmat, los, his, feas_slack)
                    if polished is not None:
                        return polished
                    return x
        if float(np.linalg.norm(x)) > escape or float(np.abs(coefs).max()) * float(
            np.abs(dirs).max()
        ) > coef_escape:
            raise InfeasibleError("projection diverged; feasible set looks empty")
    raise NoConvergenceError(
        f"projection not converged after {DYKSTRA_MAX_CYCLES} cycles "
        f"(ill-conditioned geometry or an empty feasible set)"
    )


def _uniform_level(prim: MarketPrimitives) -> float:
    ones = np.ones(prim.n)
    h_ones = h_apply(prim.net, prim.delta, ones)
    return float(h_ones @ unrestricted_price(prim)) / float(h_ones @ ones)


def project(prim: MarketPrimitives, k: RegulationSet) -> np.ndarray:
    """Firm's optimal regulated price: H-norm projection of p_ur onto K.

    Closed forms handle the unrestricted, uniform, average-price,
    zero-cap-difference (which is the uniform line), single-constraint,
    and fixed-price (point box) cases exactly; everything else runs
    Dykstra over the slab decomposition.
    """
    q = unrestricted_price(prim)
    if isinstance(k, Unrestricted):
        return q
    if isinstance(k, Uniform):
        return _uniform_level(prim) * np.ones(prim.n)
    if isinstance(k, PriceDifference) and not np.any(k.delta_matrix != 0.0):
        # all caps zero: the set is exactly the uniform-price line
        _check_dim(k.delta_matrix.shape[0], prim.n)
        return _uniform_level(prim) * np.ones(prim.n)
    if isinstance(k, Box) and np.array_equal(k.lower, k.upper):
        # fixed prices in every market: the set is a single point
        _check_dim(k.lower.shape[0], prim.n)
        return k.lower.copy()
    if isinstance(k, AveragePrice):
        _check_dim(k.theta.shape[0], prim.n)
        hinv_theta = k.theta - prim.delta * (prim.net.adjacency @ k.theta)
        slack = float(k.theta @ q) - k.cap
        if slack <= 0.0:
            return q
        return q - (slack / float(k.theta @ hinv_theta)) * hinv_theta
    slabs = _slab_list(k, prim.n)
    if not slabs:
        return q  # box with all bounds infinite
    return _dykstra(prim, slabs, q)


def equilibrium_outcome(prim: MarketPrimitives, k: RegulationSet) -> WelfareOutcome:
    """Welfare evaluation at the firm's optimal regulated price."""
    return welfare_outcome(prim, project(prim, k))


def iota(prim: MarketPrimitives, eta_plus: float) -> np.ndarray:
    """Positive normal of the frontier's supporting halfspace at p(eta_plus):
    ``H [I - 2*delta/(2-eta) G]^-1 (a - c)``."""
    if eta_plus < 0.0 or eta_plus >= paretomod.eta_max(prim):
        raise EtaOutOfRangeError(
            f"eta_plus={eta_plus!r} outside [0, {paretomod.eta_max(prim)!r})"
        )
    n = prim.n
    inner = np.eye(n) - (2.0 * prim.delta / (2.0 - eta_plus)) * prim.net.adjacency
    y = np.linalg.solve(inner, prim.a - prim.c)
    return h_apply(prim.net, prim.delta, y)


@dataclass(frozen=True)
class Certificate:
    """Outcome of the frontier-membership test for one regulation."""

    efficient: bool
    eta: float | None = None
    reason: str | None = None


def _box_certificate(prim, k):
    if np.any(~np.isfinite(k.upper)):
        return Certificate(False, reason="an infinite ceiling cannot equal a frontier price")
    w1 = eigencentrality(prim.net)
    d1 = float(w1 @ half_gap(prim))
    rho1 = float(w1 @ (unrestricted_price(prim) - k.upper)) / d1
    if rho1 < 0.0:
        return Certificate(False, reason="ceiling sits above the unrestricted price on average")
    emax = paretomod.eta_max(prim)
    eta = rho1 * emax / (1.0 + rho1)
    eta_cap = paretomod.eta_hat_plus(prim)
    if eta > eta_cap * (1.0 + 1e-9) + 1e-12:
        return Certificate(False, reason="matching the ceiling would push profit below zero")
    price = paretomod.pareto_price(prim, eta)
    scale = 1e-9 * (1.0 + float(np.abs(k.upper).max()))
    if float(np.abs(price - k.upper).max()) > scale:
        return Certificate(False, reason="ceiling is not a frontier-family price")
    return Certificate(True, eta=min(eta, eta_cap))


def _average_price_certificate(prim, k):
    eta_cap = paretomod.eta_hat_plus(prim)

    def avg(eta):
        return float(k.theta @ paretomod.pareto_price(prim, eta))

    if avg(eta_cap) > k.cap:
        return Certificate(False, reason="cap binds below the zero-profit frontier price")
    lo, hi = 0.0, eta_cap  # avg is strictly decreasing in eta
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if avg(mid) > k.cap:
            lo = mid
        else:
            hi = mid
    eta = 0.5 * (lo + hi)
    weight = iota(prim, eta)
    if corr(k.theta, weight) < 1.0 - PROPORTIONALITY_TOL:
        return Certificate(False, reason="weights are not proportional to the supporting normal")
    if abs(avg(eta) - k.cap) > 1e-9 * (1.0 + abs(k.cap)):
        return Certificate(False, reason="no frontier price meets the cap exactly")
    return Certificate(True, eta=eta)


def pareto_certificate(prim: MarketPrimitives, k: RegulationSet) -> Certificate:
    """Decide whether the equilibrium outcome lies on the Pareto frontier.

    A non-binding regulation (unrestricted price feasible) is efficient
    with ``eta = 0``, the top frontier corner.  Otherwise the named kinds
    reduce to knife-edge conditions: a box must have its ceiling equal to a
    frontier-family price; an average-price cap must have weights
    proportional to the supporting normal and bind exactly at the matching
    frontier price; difference caps and uniform pricing never qualify
    because the overall price level stays free.  Generic halfspace lists
    support falsification only.
    """
    if contains(prim, k, unrestricted_price(prim)):
        return Certificate(True, eta=0.0)
    if isinstance(k, (Uniform, PriceDifference)):
        return Certificate(
            False, reason="price level is unconstrained, so no supporting halfspace contains the set"
        )
    if isinstance(k, Box):
        return _box_certificate(prim, k)
    if isinstance(k, AveragePrice):
        return _average_price_certificate(prim, k)
    if isinstance(k, Halfspaces):
        # falsification only: exhibit a positive frontier gap if there is one
        g = gap(prim, k)
        if g > 1e-8:
            return Certificate(False, reason=f"equilibrium sits {g:.3g} below the frontier")
        raise UnsupportedRegulationError(
            "cannot certify efficiency for a generic halfspace set; gap is within tolerance"
        )
    raise UnsupportedRegulationError(f"no certificate rule for kind {k.kind!r}")


@dataclass(frozen=True)
class AStatInterval:
    """Closed interval of the average-deviation statistic over a set.

    ``exact`` is False when the bounds come from the limited per-halfspace
    analysis of a generic halfspace list rather than a closed form.
    """

    lower: float
    upper: float
    exact: bool = True

    def __contains__(self, z):
        return self.lower <= z <= self.upper


def a_interval(prim: MarketPrimitives, k: RegulationSet) -> AStatInterval:
    """Range of the average-deviation statistic over the feasible set."""
    w1 = eigencentrality(prim.net)
    d1 = float(w1 @ half_gap(prim))
    pur_avg = float(w1 @ unrestricted_price(prim))

    def stat_of_avg(avg):
        return (avg - pur_avg) / d1

    if isinstance(k, (Unrestricted, Uniform, PriceDifference)):
        # the whole price level is free along 1, and <w1, 1> > 0
        if isinstance(k, PriceDifference):
            _check_dim(k.delta_matrix.shape[0], prim.n)
        return AStatInterval(-np.inf, np.inf)
    if isinstance(k, Box):
        _check_dim(k.lower.shape[0], prim.n)
        lo = -np.inf if np.any(np.isneginf(k.lower)) else stat_of_avg(float(w1 @ k.lower))
        hi = np.inf if np.any(np.isposinf(k.upper)) else stat_of_avg(float(w1 @ k.upper))
        return AStatInterval(lo, hi)
    if isinstance(k, AveragePrice):
        _check_dim(k.theta.shape[0], prim.n)
        if corr(k.theta, w1) >= 1.0 - PROPORTIONALITY_TOL:
            # theta = w1 / <w1, 1>: the cap bounds the w1-average from above
            hi = stat_of_avg(k.cap * float(w1.sum()))
            return AStatInterval(-np.inf, hi)
        return AStatInterval(-np.inf, np.inf)
    if isinstance(k, Halfspaces):
        lo, hi, resolved = -np.inf, np.inf, True
        for v, m in k.constraints:
            _check_dim(v.shape[0], prim.n)
            norm = float(np.linalg.norm(v))
            align = float(v @ w1) / norm  # w1 is unit, so this is the cosine
            if align >= 1.0 - PROPORTIONALITY_TOL:
                hi = min(hi, stat_of_avg(m / norm))
            elif align <= -1.0 + PROPORTIONALITY_TOL:
                lo = max(lo, stat_of_avg(-m / norm))
            else:
                resolved = False  # this face may bind the statistic; bounds stay approximate
        return AStatInterval(lo, hi, exact=resolved)
    raise UnsupportedRegulationError(f"no interval rule for kind {k.kind!r}")


class Classification(enum.Enum):
    PARETO_INEFFICIENT = "pareto_inefficient"
    NEUTRAL = "neutral"
    PARETO_EFFICIENT = "pareto_efficient"


@dataclass(frozen=True)
class LimitClassification:
    label: Classification
    a_star: float
    interval: AStatInterval
    limit_r_v: float
    limit_r_pi: float


def classify_limit(prim: MarketPrimitives, k: RegulationSet) -> LimitClassification:
    """Large-spillover trichotomy of a regulation.

    The equilibrium statistic converges to the interval point closest to
    zero; its sign decides the label and the limit ratios follow the
    one-dimensional formulas.  Interval endpoints within 1e-12 of zero
    count as touching (the trichotomy is a sign pattern, not a band).
    """
    interval = a_interval(prim, k)
    if interval.lower > 1e-12:
        label, a_star = Classification.PARETO_INEFFICIENT, interval.lower
    elif interval.upper < -1e-12:
        label, a_star = Classification.PARETO_EFFICIENT, interval.upper
    else:
        label, a_star = Classification.NEUTRAL, 0.0
    assert np.isfinite(a_star), "a nonempty set cannot have an infinite minimiser"
    return LimitClassification(
        label=label,
        a_star=float(a_star),
        interval=interval,
        limit_r_v=(1.0 - a_star) ** 2,
        limit_r_pi=1.0 - a_star**2,
    )


def gap(prim: MarketPrimitives, k: RegulationSet) -> float:
    """Vertical distance from the equilibrium surplus ratio to the frontier.

    Evaluates the equilibrium profit ratio tau*, solves the frontier point
    at that tau*, and returns ``R_V_plus(tau*) - R_V(p*)`` (nonnegative up
    to root tolerance).
    """
    p_star = project(prim, k)
    r_v_star, tau_star = ratios(prim, p_star)
    if tau_star < -1e-9:
        raise OutOfRangeError(
            f"equilibrium profit ratio {tau_star!r} is negative; frontier undefined there"
        )
    tau_star = min(max(tau_star, 0.0), 1.0)
    _, r_v_plus = _rv_plus_only(prim, tau_star)
    return r_v_plus - r_v_star


def _rv_plus_only(prim, tau):
    eta = paretomod.solve_eta_for_tau(prim, tau, "plus")
    _, _, dhat, phi = paretomod._spectral_parts(prim)
    rho = paretomod._rho_plus(prim, eta)
    return eta, paretomod._r_v_of_rho(phi, dhat, rho)
