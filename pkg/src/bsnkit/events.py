"""Event-sequence view of trajectories.

Each consecutive snapshot pair maps to at most one event from a four-symbol
alphabet: a post change alone, a friend gain alone, a friend loss alone, or
a simultaneous post-and-friend change (non-directional). Events are binary
occurrences; the recorded magnitude is diagnostic only.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import InsufficientEventsError
from .trajectory import Trajectory


class EventKind(Enum):
    POST = "P+"
    FRIEND_GAIN = "F+"
    FRIEND_LOSS = "F-"
    COMPOUND = "PF"

    def __str__(self):
        return self.value


# Canonical row/column order of signature and Markov matrices.
EVENT_KINDS = (EventKind.POST, EventKind.FRIEND_GAIN, EventKind.FRIEND_LOSS, EventKind.COMPOUND)
EVENT_INDEX = {kind: i for i, kind in enumerate(EVENT_KINDS)}

# Families used for inter-event delay statistics. A compound event changes
# both counters, so it belongs to both families.
PUBLISHING_KINDS = frozenset({EventKind.POST, EventKind.COMPOUND})
SOCIAL_KINDS = frozenset({EventKind.FRIEND_GAIN, EventKind.FRIEND_LOSS, EventKind.COMPOUND})
FAMILIES = {"publishing": PUBLISHING_KINDS, "social": SOCIAL_KINDS}


@dataclass(frozen=True)
class Event:
    t: float
    kind: EventKind
    magnitude: int = 0


@dataclass(frozen=True)
class EventSequence:
    """Ordered events of one user plus the observation span they came from.

    ``span_days`` is the length of the source observation window, which the
    per-day Markov frequencies are normalized by; an event-free user still
    contributes observed days.
    """

    user_id: str
    events: tuple[Event, ...]
    span_days: float

    def __len__(self):
        return len(self.events)

    def kinds(self) -> list[EventKind]:
        return [e.kind for e in self.events]


def classify_change(dp: int, df: int) -> EventKind | None:
    """Event kind for a (delta posts, delta friends) pair; None if no change.

    A post deletion (dp < 0) still registers as a post event: the alphabet
    encodes occurrence, the sign lives in the magnitude.
    """
    if dp != 0 and df == 0:
        return EventKind.POST
    if dp == 0 and df > 0:
        return EventKind.FRIEND_GAIN
    if dp == 0 and df < 0:
        return EventKind.FRIEND_LOSS
    if dp != 0 and df != 0:
        return EventKind.COMPOUND
    return None


def extract_events(traj: Trajectory) -> EventSequence:
    """Turn a validated trajectory into its timed event sequence.

    Each event is stamped at the start of the snapshot interval in which the
    change was observed. Magnitude records the post delta for post-touching
    events and the friend delta for friend-only events.
    """
    events = []
    snaps = traj.snapshots
    for a, b in zip(snaps, snaps[1:]):
        dp = b.posts - a.posts
        df = b.friends - a.friends
        kind = classify_change(dp, df)
        if kind is None:
            continue
        magnitude = df if kind in (EventKind.FRIEND_GAIN, EventKind.FRIEND_LOSS) else dp
        events.append(Event(t=a.t, kind=kind, magnitude=int(magnitude)))
    return EventSequence(traj.user_id, tuple(events), span_days=traj.span_days)


def signature(seq: EventSequence) -> np.ndarray:
    """4x4 matrix of conditional next-event probabilities.

    Entry [i, j] is the probability that an event of kind j immediately
    follows an event of kind i within this sequence. Rows whose kind never
    has a successor are all-zero, which keeps event-free users at the origin
    of signature space.
    """
    counts = np.zeros((4, 4), dtype=float)
    kinds = seq.kinds()
    for a, b in zip(kinds, kinds[1:]):
        counts[EVENT_INDEX[a], EVENT_INDEX[b]] += 1.0
    totals = counts.sum(axis=1, keepdims=True)
    return counts / np.where(totals > 0, totals, 1.0)


def signature_distance(a: np.ndarray, b: np.ndarray) -> float:
    """Euclidean distance between two signatures over all 16 entries."""
    return float(np.linalg.norm(np.asarray(a, dtype=float).ravel() - np.asarray(b, dtype=float).ravel()))


def family_delays(seq: EventSequence, family: str) -> np.ndarray:
    """Gaps between consecutive events of one family within a sequence."""
    kinds = FAMILIES[family]
    times = np.array([e.t for e in seq.events if e.kind in kinds], dtype=float)
    return np.diff(times)


def delay_rate(seqs, family: str) -> float:
    """Maximum-likelihood exponential rate of inter-event delays (per day).

    Pools consecutive same-family gaps within each sequence across the whole
    set; the estimator is (number of delays) / (sum of delays).

    Raises InsufficientEventsError when no within-sequence gap exists.
    """
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}; expected one of {sorted(FAMILIES)}")
    n = 0
    total = 0.0
    for seq in seqs:
        gaps = family_delays(seq, family)
        n += len(gaps)
        total += float(gaps.sum())
    if n == 0 or total <= 0.0:
        raise InsufficientEventsError(
            f"need at least two {family} events in one sequence to estimate a rate"
        )
    return n / total
