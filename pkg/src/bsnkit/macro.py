"""Macroscopic pipeline: trajectory-shape classification.

Each component series (posts or friends) gets a least-squares quadratic fit
plus a linear refit. The fits map to one of seven dynamics classes; the
pair of classes for (posts, friends) names the trajectory's macro cluster
out of 7x7 = 49 possibilities.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np
from numpy.polynomial import Polynomial
from sklearn.base import BaseEstimator, RegressorMixin

from .errors import (
    EmptyClusterError,
    NoPositivePostsError,
    RankDeficientError,
    TooFewPointsError,
)
from .trajectory import Archetype, Snapshot, Trajectory, interpolate

DEFAULT_LINEARITY_EPS = 0.0085
DEFAULT_R2_MIN = 0.7


class DynamicsClass(Enum):
    """Shape taxonomy of one component series."""

    ASC = "asc"
    FLAT = "flat"
    DESC = "desc"
    SUPER_ASC = "asc-super"
    SUB_ASC = "asc-sub"
    SUB_DESC = "desc-sub"
    SUPER_DESC = "desc-super"

    def __str__(self):
        return self.value

    @property
    def arrow(self) -> str:
        return _ARROWS[self]


_ARROWS = {
    DynamicsClass.ASC: "↑",
    DynamicsClass.FLAT: "↕",
    DynamicsClass.DESC: "↓",
    DynamicsClass.SUPER_ASC: "⇈",
    DynamicsClass.SUB_ASC: "↿",
    DynamicsClass.SUB_DESC: "⇂",
    DynamicsClass.SUPER_DESC: "⇊",
}

# Linear-or-superlinear growth marks a component as behaviorally active.
ACTIVE_CLASSES = frozenset({DynamicsClass.ASC, DynamicsClass.SUPER_ASC})
ASCENDING_CLASSES = frozenset({DynamicsClass.ASC, DynamicsClass.SUPER_ASC, DynamicsClass.SUB_ASC})
DESCENDING_CLASSES = frozenset({DynamicsClass.DESC, DynamicsClass.SUPER_DESC, DynamicsClass.SUB_DESC})


@dataclass(frozen=True)
class QuadFit:
    """Quadratic and linear least-squares fits of one component series.

    a0 + a1*t + a2*t^2 is the quadratic model, b0 + b1*t the linear refit;
    both R-squared values are against the mean-only baseline. The observed
    window [t_first, t_last] is kept for net-change evaluation.
    """

    a0: float
    a1: float
    a2: float
    r2_quadratic: float
    b0: float
    b1: float
    r2_linear: float
    t_first: float
    t_last: float

    def quad_at(self, t: float) -> float:
        return self.a0 + self.a1 * t + self.a2 * t * t


def _r_squared(y: np.ndarray, fitted: np.ndarray) -> float:
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    if ss_tot == 0.0:
        # Constant series: the constant model fits perfectly.
        return 1.0
    ss_res = float(np.sum((y - fitted) ** 2))
    return 1.0 - ss_res / ss_tot


def fit_component(t, g) -> QuadFit:
    """Ordinary least-squares degree-2 fit plus a degree-1 refit.

    With exactly two points only the linear fit is meaningful; the quadratic
    coefficients then mirror the line.
    """
    t = np.asarray(t, dtype=float)
    g = np.asarray(g, dtype=float)
    if len(t) < 2:
        raise TooFewPointsError(f"need >= 2 points, got {len(t)}")
    if np.all(t == t[0]):
        raise RankDeficientError("all sample days identical")
    if np.all(g == g[0]):
        # Exactly constant series: zero slopes, not solver fuzz.
        c = float(g[0])
        return QuadFit(
            a0=c, a1=0.0, a2=0.0, r2_quadratic=1.0,
            b0=c, b1=0.0, r2_linear=1.0,
            t_first=float(t[0]), t_last=float(t[-1]),
        )
    lin = Polynomial.fit(t, g, deg=1).convert()
    b0, b1 = (list(lin.coef) + [0.0, 0.0])[:2]
    r2_lin = _r_squared(g, lin(t))
    if len(t) >= 3:
        quad = Polynomial.fit(t, g, deg=2).convert()
        a0, a1, a2 = (list(quad.coef) + [0.0, 0.0, 0.0])[:3]
        r2_quad = _r_squared(g, quad(t))
    else:
        a0, a1, a2 = b0, b1, 0.0
        r2_quad = r2_lin
    return QuadFit(
        a0=float(a0), a1=float(a1), a2=float(a2), r2_quadratic=r2_quad,
        b0=float(b0), b1=float(b1), r2_linear=r2_lin,
        t_first=float(t[0]), t_last=float(t[-1]),
    )


def classify_dynamics(
    fit: QuadFit,
    linearity_eps: float = DEFAULT_LINEARITY_EPS,
    r2_min: float = DEFAULT_R2_MIN,
) -> DynamicsClass:
    """Map a fitted component to one of the seven dynamics classes.

    A series whose best linear approximation is unacceptably inaccurate
    (R-squared below ``r2_min``) counts as constant regardless of the other
    coefficients; that is what makes zero-net churn invisible at this level.
    Otherwise, when the quadratic term is negligible relative to the linear
    term (|a2/a1| below ``linearity_eps``, or a1 exactly zero) the linear
    slope sign decides ascending/constant/descending; a genuine quadratic
    takes its direction from the net change over the observed window and
    its bending from the sign of a2.
    """
    if fit.r2_linear < r2_min:
        return DynamicsClass.FLAT
    if fit.a1 == 0.0 or abs(fit.a2 / fit.a1) < linearity_eps:
        if fit.b1 > 0:
            return DynamicsClass.ASC
        if fit.b1 < 0:
            return DynamicsClass.DESC
        return DynamicsClass.FLAT
    net = fit.quad_at(fit.t_last) - fit.quad_at(fit.t_first)
    ascending = net > 0 or (net == 0 and fit.a2 > 0)
    if ascending:
        return DynamicsClass.SUPER_ASC if fit.a2 > 0 else DynamicsClass.SUB_ASC
    return DynamicsClass.SUB_DESC if fit.a2 > 0 else DynamicsClass.SUPER_DESC


class DynamicsClassifier(BaseEstimator):
    """Stateless classifier mapping trajectories to (posts, friends) classes.

    Thin estimator wrapper over fit_component/classify_dynamics so the
    thresholds are tunable parameters in pipelines and grid searches.
    """

    def __init__(self, linearity_eps: float = DEFAULT_LINEARITY_EPS, r2_min: float = DEFAULT_R2_MIN):
        self.linearity_eps = linearity_eps
        self.r2_min = r2_min

    def fit(self, X=None, y=None):
        return self

    def predict(self, X) -> list[tuple[DynamicsClass, DynamicsClass]]:
        return [classify_trajectory(traj, self.linearity_eps, self.r2_min) for traj in X]


def component_fits(traj: Trajectory) -> tuple[QuadFit, QuadFit]:
    """Quadratic fits of the posts and friends series of one trajectory."""
    t = traj.times()
    return fit_component(t, traj.posts()), fit_component(t, traj.friends())


def classify_trajectory(
    traj: Trajectory,
    linearity_eps: float = DEFAULT_LINEARITY_EPS,
    r2_min: float = DEFAULT_R2_MIN,
) -> tuple[DynamicsClass, DynamicsClass]:
    """Macro cluster key: independent dynamics classes for posts and friends."""
    p_fit, f_fit = component_fits(traj)
    return (
        classify_dynamics(p_fit, linearity_eps, r2_min),
        classify_dynamics(f_fit, linearity_eps, r2_min),
    )


def macro_archetype(key: tuple[DynamicsClass, DynamicsClass]) -> Archetype:
    """Archetype from a macro cluster key.

    A component is active when linear or superlinear ascending; both active
    means blogger-socializer, one means blogger or socializer depending on
    which, neither means reader.
    """
    p_active = key[0] in ACTIVE_CLASSES
    f_active = key[1] in ACTIVE_CLASSES
    if p_active and f_active:
        return Archetype.BLOGGER_SOCIALIZER
    if p_active:
        return Archetype.BLOGGER
    if f_active:
        return Archetype.SOCIALIZER
    return Archetype.READER


def anticorrelated_share(keys) -> float:
    """Fraction of keys whose components move in opposite net directions."""
    keys = list(keys)
    if not keys:
        raise EmptyClusterError("no macro keys supplied")
    opposite = sum(
        1
        for p, f in keys
        if (p in ASCENDING_CLASSES and f in DESCENDING_CLASSES)
        or (p in DESCENDING_CLASSES and f in ASCENDING_CLASSES)
    )
    return opposite / len(keys)


@dataclass
class MacroCluster:
    """All trajectories sharing one (posts, friends) dynamics pair."""

    p_class: DynamicsClass
    f_class: DynamicsClass
    members: list[str]
    mean_trajectory: Trajectory | None = None
    mean_fit_quality: float = float("nan")

    @property
    def key(self) -> tuple[DynamicsClass, DynamicsClass]:
        return (self.p_class, self.f_class)

    @property
    def size(self) -> int:
        return len(self.members)


def mean_trajectory(trajs, grid, user_id: str = "mean") -> Trajectory:
    """Pointwise mean of interpolated member trajectories on a day grid."""
    trajs = list(trajs)
    if not trajs:
        raise EmptyClusterError("cannot average an empty cluster")
    snaps = []
    for day in grid:
        points = [interpolate(traj, day) for traj in trajs]
        p = float(np.mean([pt[0] for pt in points]))
        f = float(np.mean([pt[1] for pt in points]))
        snaps.append(Snapshot(float(day), p, f))
    return Trajectory(user_id, tuple(snaps))


def fit_quality(traj: Trajectory) -> float:
    """Geometric mean of the two component R-squared values, floored at 0."""
    p_fit, f_fit = component_fits(traj)
    return float(np.sqrt(max(p_fit.r2_quadratic, 0.0) * max(f_fit.r2_quadratic, 0.0)))


def build_macro_clusters(
    trajs: dict[str, Trajectory],
    keys: dict[str, tuple[DynamicsClass, DynamicsClass]],
    grid=None,
) -> list[MacroCluster]:
    """Group trajectories by dynamics key and summarize each cluster.

    ``grid`` defaults to whole days over the span common to all members of
    each cluster. Clusters are sorted by decreasing size.
    """
    groups: dict[tuple[DynamicsClass, DynamicsClass], list[str]] = {}
    for user in sorted(keys):
        groups.setdefault(keys[user], []).append(user)
    clusters = []
    for key, members in groups.items():
        member_trajs = [trajs[u] for u in members]
        if grid is None:
            start = max(t.snapshots[0].t for t in member_trajs)
            stop = min(t.snapshots[-1].t for t in member_trajs)
            cluster_grid = np.arange(np.ceil(start), np.floor(stop) + 1.0)
        else:
            cluster_grid = np.asarray(grid, dtype=float)
        mean = mean_trajectory(member_trajs, cluster_grid, user_id=f"mean:{key[0]}|{key[1]}")
        quality = float(np.mean([fit_quality(t) for t in member_trajs]))
        clusters.append(
            MacroCluster(
                p_class=key[0], f_class=key[1], members=members,
                mean_trajectory=mean, mean_fit_quality=quality,
            )
        )
    clusters.sort(key=lambda c: (-c.size, c.members[0]))
    return clusters


@dataclass(frozen=True)
class SqrtLawFit:
    """Fitted coefficient and goodness of the friends ~ c*sqrt(posts) law."""

    c: float
    r2: float
    n_points: int


class SqrtLawModel(RegressorMixin, BaseEstimator):
    """Least-squares fit of friends = c * sqrt(posts).

    fit() accepts pooled post counts X and friend counts y; points with
    non-positive posts are excluded. The single coefficient has the closed
    form c = sum(y*sqrt(x)) / sum(x).

    Attributes
    ----------
    coef_ : float
    r_squared_ : float
        1 - SS_res/SS_tot over the retained points.
    n_points_ : int
    """

    def fit(self, X, y):
        x = np.asarray(X, dtype=float).ravel()
        y = np.asarray(y, dtype=float).ravel()
        mask = x > 0
        if not np.any(mask):
            raise NoPositivePostsError("no pooled points with positive post counts")
        x, y = x[mask], y[mask]
        root = np.sqrt(x)
        self.coef_ = float((y * root).sum() / x.sum())
        self.r_squared_ = _r_squared(y, self.coef_ * root)
        self.n_points_ = int(len(x))
        return self

    def predict(self, X):
        x = np.asarray(X, dtype=float).ravel()
        return self.coef_ * np.sqrt(np.clip(x, 0.0, None))


def sqrt_law_fit(means) -> SqrtLawFit:
    """Fit the square-root law over points pooled from mean trajectories."""
    posts, friends = [], []
    for traj in means:
        posts.extend(traj.posts())
        friends.extend(traj.friends())
    model = SqrtLawModel().fit(np.array(posts), np.array(friends))
    return SqrtLawFit(c=model.coef_, r2=model.r_squared_, n_points=model.n_points_)
