"""Population-level trajectory filtering.

Trajectories with unusually large consecutive steps or overall ranges in
either dimension are excluded before analysis. Thresholds are learned from
the population itself: the nearest-rank quantile of each of the four
per-trajectory statistics (max |step| and range, posts and friends), and a
trajectory is kept only if all four of its statistics pass.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from sklearn.base import BaseEstimator

from .errors import EmptyInputError
from .trajectory import Trajectory

STAT_NAMES = ("post_step", "friend_step", "post_range", "friend_range")


@dataclass
class FilterReport:
    """Outcome of a percentile filter pass: ids kept/dropped and thresholds."""

    kept: list[str]
    dropped: list[str]
    thresholds: dict[str, float] = field(default_factory=dict)


def trajectory_stats(traj: Trajectory) -> dict[str, float]:
    """The four roughness statistics of one trajectory."""
    p = traj.posts()
    f = traj.friends()
    return {
        "post_step": float(np.max(np.abs(np.diff(p)))),
        "friend_step": float(np.max(np.abs(np.diff(f)))),
        "post_range": float(np.max(p) - np.min(p)),
        "friend_range": float(np.max(f) - np.min(f)),
    }


def nearest_rank_quantile(values, pct: float) -> float:
    """Nearest-rank quantile: the ceil(pct*n)-th smallest value."""
    ordered = np.sort(np.asarray(values, dtype=float))
    n = len(ordered)
    rank = max(1, int(np.ceil(pct * n)))
    return float(ordered[min(rank, n) - 1])


class PercentileTrajectoryFilter(BaseEstimator):
    """Filter trajectories whose roughness exceeds population quantiles.

    fit() learns one nearest-rank quantile threshold per statistic from the
    supplied population; transform() keeps the trajectories whose four
    statistics are all within the learned thresholds.

    Parameters
    ----------
    pct : float, default=0.98
        Quantile level; pct=1.0 keeps every trajectory.

    Attributes
    ----------
    thresholds_ : dict
        Learned threshold per statistic name.
    report_ : FilterReport
        Kept/dropped ids for the population seen by fit.
    """

    def __init__(self, pct: float = 0.98):
        self.pct = pct

    def fit(self, X, y=None):
        trajs = list(X)
        if not trajs:
            raise EmptyInputError("percentile filter needs a non-empty population")
        stats = [trajectory_stats(t) for t in trajs]
        self.thresholds_ = {
            name: nearest_rank_quantile([s[name] for s in stats], self.pct)
            for name in STAT_NAMES
        }
        kept, dropped = [], []
        for traj, s in zip(trajs, stats):
            ok = all(s[name] <= self.thresholds_[name] for name in STAT_NAMES)
            (kept if ok else dropped).append(traj.user_id)
        self.report_ = FilterReport(kept=kept, dropped=dropped, thresholds=dict(self.thresholds_))
        return self

    def transform(self, X) -> list[Trajectory]:
        """Trajectories from X whose statistics pass the learned thresholds."""
        kept = []
        for traj in X:
            s = trajectory_stats(traj)
            if all(s[name] <= self.thresholds_[name] for name in STAT_NAMES):
                kept.append(traj)
        return kept

    def fit_transform(self, X, y=None):
        trajs = list(X)
        self.fit(trajs)
        keep = set(self.report_.kept)
        return [t for t in trajs if t.user_id in keep]


def percentile_filter(trajs, pct: float = 0.98) -> FilterReport:
    """One-shot filter: learn thresholds on ``trajs`` and report kept/dropped."""
    return PercentileTrajectoryFilter(pct=pct).fit(list(trajs)).report_
