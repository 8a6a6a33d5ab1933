"""Core domain types and per-trajectory preprocessing.

A trajectory is a user's timed sequence of cumulative (posts, friends)
snapshots. All analysis operates on validated trajectories: snapshots
sorted by observation day, duplicate days collapsed, at least two points.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import NonFiniteError, OutOfRangeError, TooShortError


class Archetype(Enum):
    """Behavioral role of a user, shared by the micro and macro pipelines."""

    READER = "reader"
    BLOGGER = "blogger"
    SOCIALIZER = "socializer"
    BLOGGER_SOCIALIZER = "blogger-socializer"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class Snapshot:
    """One observation: day since study start, cumulative posts, friend count.

    Raw observations carry non-negative counts; origin-translated snapshots
    may carry negative (signed) values.
    """

    t: float
    posts: int
    friends: int


@dataclass(frozen=True)
class RateSample:
    """Instantaneous activity rates at day ``t`` (posts/day, friends/day)."""

    t: float
    p: float
    f: float


@dataclass(frozen=True)
class Trajectory:
    """A user's path through time-posts-friends space."""

    user_id: str
    snapshots: tuple[Snapshot, ...]

    def __len__(self):
        return len(self.snapshots)

    def times(self) -> np.ndarray:
        return np.array([s.t for s in self.snapshots], dtype=float)

    def posts(self) -> np.ndarray:
        return np.array([s.posts for s in self.snapshots], dtype=float)

    def friends(self) -> np.ndarray:
        return np.array([s.friends for s in self.snapshots], dtype=float)

    @property
    def span_days(self) -> float:
        return self.snapshots[-1].t - self.snapshots[0].t

    @property
    def has_deletions(self) -> bool:
        """True if the post count ever drops (author deleted posts)."""
        p = self.posts()
        return bool(np.any(np.diff(p) < 0))


def validate(traj: Trajectory) -> Trajectory:
    """Return a trajectory with snapshots sorted and de-duplicated by day.

    When two snapshots share a day the later one in input order wins
    (a re-crawl supersedes an earlier same-day read).

    Raises
    ------
    NonFiniteError
        If any field is NaN or infinite.
    TooShortError
        If fewer than two snapshots remain after de-duplication.
    """
    for s in traj.snapshots:
        if not (math.isfinite(s.t) and math.isfinite(s.posts) and math.isfinite(s.friends)):
            raise NonFiniteError(f"non-finite snapshot {s!r} in trajectory {traj.user_id!r}")
    by_day: dict[float, Snapshot] = {}
    for s in traj.snapshots:
        by_day[s.t] = s
    snaps = tuple(sorted(by_day.values(), key=lambda s: s.t))
    if len(snaps) < 2:
        raise TooShortError(
            f"trajectory {traj.user_id!r} has {len(snaps)} usable snapshots, need >= 2"
        )
    return Trajectory(traj.user_id, snaps)


def translate_to_origin(traj: Trajectory) -> Trajectory:
    """Shift a trajectory so its first snapshot becomes (0, 0, 0).

    Idempotent; translated post/friend values are signed.
    """
    first = traj.snapshots[0]
    snaps = tuple(
        Snapshot(s.t - first.t, s.posts - first.posts, s.friends - first.friends)
        for s in traj.snapshots
    )
    return Trajectory(traj.user_id, snaps)


def interpolate(traj: Trajectory, t: float) -> tuple[float, float]:
    """Piecewise-linear (posts, friends) at day ``t``; exact at sample days.

    Raises OutOfRangeError for ``t`` outside [first, last] observation day.
    """
    days = traj.times()
    if t < days[0] or t > days[-1]:
        raise OutOfRangeError(
            f"t={t} outside observed span [{days[0]}, {days[-1]}] of {traj.user_id!r}"
        )
    p = float(np.interp(t, days, traj.posts()))
    f = float(np.interp(t, days, traj.friends()))
    return p, f


def activity_rates(traj: Trajectory) -> list[RateSample]:
    """Forward-difference publishing and social rates, one per snapshot pair.

    The sample for the interval [t_i, t_{i+1}) is stamped at t_i. Uses the
    actual day spacing, so gaps in the record are handled natively.
    """
    days = traj.times()
    p = traj.posts()
    f = traj.friends()
    dt = np.diff(days)
    return [
        RateSample(float(days[i]), float((p[i + 1] - p[i]) / dt[i]), float((f[i + 1] - f[i]) / dt[i]))
        for i in range(len(dt))
    ]


def pf_correlation(traj: Trajectory) -> float | None:
    """Pearson correlation of the cumulative posts and friends series.

    Returns None when either series is constant (zero variance); that is a
    value, not an error -- such users are simply left out of correlation
    histograms.
    """
    p = traj.posts()
    f = traj.friends()
    pc = p - p.mean()
    fc = f - f.mean()
    ssp = float(pc @ pc)
    ssf = float(fc @ fc)
    if ssp == 0.0 or ssf == 0.0:
        return None
    return float((pc @ fc) / math.sqrt(ssp * ssf))
