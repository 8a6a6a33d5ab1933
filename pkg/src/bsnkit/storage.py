"""Snapshot file persistence.

One comma-separated file holds a whole population: a version/start-date
header line, a column header, then one row per user-day sorted by
(user_id, day). The writer is canonical (fixed ordering, LF endings,
minimal number formatting) so byte-level diffs are meaningful and repeated
writes of the same data are identical.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import DuplicateRowError, SnapshotParseError
from .trajectory import Snapshot, Trajectory

FORMAT_VERSION = "1"
COLUMNS = "user_id,day,posts_total,friends_total"


@dataclass
class SnapshotFile:
    """Parsed snapshot file: analysis-ready trajectories plus bookkeeping.

    Users with a single row cannot form a trajectory; they are reported in
    ``abandoned`` rather than silently dropped, so the analyst decides.
    """

    trajectories: list[Trajectory]
    abandoned: list[str] = field(default_factory=list)
    version: str = FORMAT_VERSION
    start_date: str = "1970-01-01"


def _format_day(t: float) -> str:
    return str(int(t)) if float(t).is_integer() else repr(float(t))


def write_snapshots(trajs, path, start_date: str = "1970-01-01") -> None:
    """Write trajectories in canonical form.

    Counts must be non-negative integers (this is the raw observation
    format; origin-translated data is an in-memory analysis artifact and
    does not belong on disk).
    """
    rows = []
    for traj in trajs:
        for s in traj.snapshots:
            p, f = s.posts, s.friends
            if p != int(p) or f != int(f) or p < 0 or f < 0:
                raise ValueError(
                    f"snapshot counts must be non-negative integers, got {s!r} for {traj.user_id!r}"
                )
            rows.append((traj.user_id, float(s.t), int(p), int(f)))
    rows.sort(key=lambda r: (r[0], r[1]))
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"{FORMAT_VERSION},{start_date}\n")
        fh.write(COLUMNS + "\n")
        for user_id, day, posts, friends in rows:
            fh.write(f"{user_id},{_format_day(day)},{posts},{friends}\n")


def read_snapshots(path) -> SnapshotFile:
    """Parse a snapshot file into per-user trajectories.

    Raises SnapshotParseError (with the offending line number) on malformed
    rows and DuplicateRowError when a (user, day) pair repeats.
    """
    with open(path, "r", encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    if not lines:
        raise SnapshotParseError(1, "empty file, expected version header")
    header = lines[0].split(",")
    if len(header) != 2:
        raise SnapshotParseError(1, f"malformed version header {lines[0]!r}")
    version, start_date = header
    if len(lines) < 2 or lines[1] != COLUMNS:
        raise SnapshotParseError(2, f"expected column header {COLUMNS!r}")

    by_user: dict[str, dict[float, Snapshot]] = {}
    for line_no, line in enumerate(lines[2:], start=3):
        if not line:
            continue
        parts = line.split(",")
        if len(parts) != 4:
            raise SnapshotParseError(line_no, f"expected 4 fields, got {len(parts)}")
        user_id, day_s, posts_s, friends_s = parts
        try:
            day = float(day_s)
            posts = int(posts_s)
            friends = int(friends_s)
        except ValueError as exc:
            raise SnapshotParseError(line_no, str(exc)) from None
        if not (math.isfinite(day) and day >= 0):
            raise SnapshotParseError(line_no, f"invalid day {day_s!r}")
        if posts < 0 or friends < 0:
            raise SnapshotParseError(line_no, "negative counts are not valid observations")
        days = by_user.setdefault(user_id, {})
        if day in days:
            raise DuplicateRowError(line_no, f"duplicate row for user {user_id!r} day {day_s}")
        days[day] = Snapshot(day, posts, friends)

    trajectories = []
    abandoned = []
    for user_id in sorted(by_user):
        snaps = tuple(sorted(by_user[user_id].values(), key=lambda s: s.t))
        if len(snaps) < 2:
            abandoned.append(user_id)
        else:
            trajectories.append(Trajectory(user_id, snaps))
    return SnapshotFile(
        trajectories=trajectories, abandoned=abandoned, version=version, start_date=start_date
    )
