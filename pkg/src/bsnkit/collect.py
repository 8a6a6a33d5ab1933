"""Rate-limited snapshot collection against an abstract data source.

The collector never talks to a real service here; callers plug in a fetch
callable and a clock. The limiter paces admissions strictly (one request
per 1/rate seconds, starting cold), which keeps every sliding one-second
window at or under the cap with no burst exceptions to reason about. The
clock abstraction makes the pacing testable without wall-clock sleeps.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from .errors import SourceUnavailableError


class TransientFetchError(Exception):
    """Raised by a fetcher to signal a retryable failure."""


@dataclass(frozen=True)
class CollectorPolicy:
    """Request budget and retry schedule for a collection run."""

    max_requests_per_second: float = 5.0
    retry_backoff: tuple[float, ...] = (1.0, 5.0, 15.0)
    cadence_days: float = 1.0


class SimulatedClock:
    """Deterministic clock: sleep() just advances now()."""

    def __init__(self, start: float = 0.0):
        self._now = float(start)

    def now(self) -> float:
        return self._now

    def sleep(self, seconds: float) -> None:
        if seconds < 0:
            raise ValueError("cannot sleep a negative duration")
        self._now += seconds


class SystemClock:
    def now(self) -> float:
        return time.monotonic()

    def sleep(self, seconds: float) -> None:
        time.sleep(seconds)


class RateLimiter:
    """Paced admission: at most ``rate`` grants per second, no bursts.

    Starts cold (the first grant waits one full period), so n requests
    always span at least n/rate seconds and any one-second window holds at
    most ``rate`` grants. Grant times are recorded in ``log`` for auditing.
    """

    def __init__(self, rate: float, clock):
        if rate <= 0:
            raise ValueError("rate must be positive")
        self.interval = 1.0 / rate
        self.clock = clock
        self.log: list[float] = []
        self._next_free = clock.now() + self.interval

    def acquire(self) -> float:
        now = self.clock.now()
        if now < self._next_free:
            self.clock.sleep(self._next_free - now)
        grant = self.clock.now()
        self._next_free = grant + self.interval
        self.log.append(grant)
        return grant


@dataclass
class CollectionReport:
    """Rows fetched in one pass plus per-user failures."""

    rows: list[tuple[str, float, int, int]] = field(default_factory=list)
    failures: dict[str, str] = field(default_factory=dict)
    request_log: list[float] = field(default_factory=list)


def rate_limited_collect(
    source, users, policy: CollectorPolicy, clock, day: float = 0.0
) -> CollectionReport:
    """Fetch one observation row per user under the rate cap.

    ``source`` is a callable (user_id, day) -> (posts_total, friends_total)
    that may raise TransientFetchError. Transient failures are retried per
    the backoff schedule; when the schedule is exhausted the user-day is
    recorded as unavailable and left as a gap -- a missing row, never a
    fabricated value.
    """
    limiter = RateLimiter(policy.max_requests_per_second, clock)
    report = CollectionReport()
    for user_id in users:
        attempts = len(policy.retry_backoff) + 1
        row = None
        for attempt in range(attempts):
            limiter.acquire()
            try:
                posts, friends = source(user_id, day)
            except TransientFetchError as exc:
                if attempt < len(policy.retry_backoff):
                    clock.sleep(policy.retry_backoff[attempt])
                    continue
                report.failures[user_id] = str(
                    SourceUnavailableError(f"user {user_id!r} day {day}: {exc}")
                )
                break
            row = (user_id, float(day), int(posts), int(friends))
            break
        if row is not None:
            report.rows.append(row)
    report.request_log = list(limiter.log)
    return report
