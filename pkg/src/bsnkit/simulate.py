"""Synthetic trajectory generator.

Users emit publishing and social events as homogeneous Poisson processes
(exponential inter-arrival delays). The exact event stream is converted to
daily cumulative snapshots, which is what a crawler would have observed;
the exact stream itself is also available as the oracle for rate and
labeling tests.

Friend-event signs follow a deterministic dither: a running accumulator
emits a removal whenever it crosses one, so a churn of 0.5 alternates adds
and removals and the net friend change stays near zero no matter how many
social events occur. That is precisely the churny-socializer pattern that
shape-level analysis cannot see.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidMixError
from .events import Event, EventKind, EventSequence
from .trajectory import Archetype, Snapshot, Trajectory

# Spread of the shared log-normal activity multiplier at coupling=1.
COUPLING_SIGMA = 0.75


@dataclass(frozen=True)
class ArchetypeSpec:
    """Generator knobs for one behavioral archetype.

    pub_rate and soc_rate are expected events per day; churn is the fraction
    of social events that remove a friend; compound_prob is the chance a
    publishing event also changes the friend count at the same instant;
    coupling in [0, 1] scales a latent per-user activity multiplier shared
    by both processes.
    """

    archetype: Archetype
    pub_rate: float = 0.0
    soc_rate: float = 0.0
    churn: float = 0.0
    compound_prob: float = 0.0
    coupling: float = 0.0

    def __post_init__(self):
        if self.pub_rate < 0 or self.soc_rate < 0:
            raise ValueError("rates must be non-negative")
        for name in ("churn", "compound_prob", "coupling"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {v}")


@dataclass(frozen=True)
class PopulationSpec:
    """A population: how many users, which archetype mix, how long observed.

    ``specs`` maps each archetype in the mix to its generator knobs;
    ``blackout`` optionally drops all snapshots in a (start, end) day window
    to mimic a crawler outage.
    """

    n_users: int
    mix: dict[Archetype, float]
    specs: dict[Archetype, ArchetypeSpec]
    duration: float = 140.0
    seed: int = 0
    blackout: tuple[float, float] | None = None


@dataclass
class PopulationSample:
    """A generated population plus its ground truth."""

    trajectories: list[Trajectory]
    events: dict[str, EventSequence]
    labels: dict[str, Archetype]


def _event_times(rng: np.random.Generator, rate: float, duration: float) -> list[float]:
    """Arrival times of a Poisson process on (0, duration]."""
    if rate <= 0:
        return []
    times = []
    t = rng.exponential(1.0 / rate)
    while t <= duration:
        times.append(t)
        t += rng.exponential(1.0 / rate)
    return times


def _simulate_events(spec: ArchetypeSpec, duration: float, rng: np.random.Generator):
    """Exact event stream: sorted list of (time, post_delta, friend_delta)."""
    factor = 1.0
    if spec.coupling > 0:
        s = spec.coupling * COUPLING_SIGMA
        factor = math.exp(s * rng.standard_normal() - 0.5 * s * s)
    pub_times = _event_times(rng, spec.pub_rate * factor, duration)
    soc_times = _event_times(rng, spec.soc_rate * factor, duration)
    compound = rng.random(len(pub_times)) < spec.compound_prob if pub_times else []

    changes = [[t, 1, 0] for t in pub_times]
    changes += [[t, 0, 1] for t in soc_times]  # friend sign assigned below
    for change, is_compound in zip(changes, compound):
        if is_compound:
            change[2] = 1
    changes.sort(key=lambda c: c[0])

    acc = 0.0
    friends = 0
    for change in changes:
        if change[2] == 0:
            continue
        acc += spec.churn
        if acc >= 1.0 - 1e-12 and friends > 0:
            acc -= 1.0
            change[2] = -1
        friends += change[2]
    return changes


def _to_snapshots(changes, duration: float) -> tuple[Snapshot, ...]:
    """Daily cumulative snapshots at integer days 0..duration."""
    days = int(duration)
    snaps = []
    posts = friends = 0
    idx = 0
    for day in range(days + 1):
        while idx < len(changes) and changes[idx][0] <= day:
            posts += changes[idx][1]
            friends += changes[idx][2]
            idx += 1
        snaps.append(Snapshot(float(day), posts, friends))
    return tuple(snaps)


def _to_event_sequence(user_id: str, changes, duration: float) -> EventSequence:
    events = []
    for t, dp, df in changes:
        if dp != 0 and df != 0:
            kind, magnitude = EventKind.COMPOUND, dp
        elif dp != 0:
            kind, magnitude = EventKind.POST, dp
        elif df > 0:
            kind, magnitude = EventKind.FRIEND_GAIN, df
        elif df < 0:
            kind, magnitude = EventKind.FRIEND_LOSS, df
        else:
            continue
        events.append(Event(t=t, kind=kind, magnitude=magnitude))
    return EventSequence(user_id, tuple(events), span_days=float(duration))


def generate_user(spec: ArchetypeSpec, duration: float = 140.0, seed=None) -> Trajectory:
    """One synthetic trajectory: daily snapshots over 0..duration days."""
    traj, _ = generate_user_with_events(spec, duration, seed, user_id="u0")
    return traj


def generate_user_with_events(
    spec: ArchetypeSpec, duration: float = 140.0, seed=None, user_id: str = "u0"
) -> tuple[Trajectory, EventSequence]:
    """A trajectory together with the exact event stream that produced it.

    The stream carries continuous event times, so it serves as the oracle
    for delay-rate estimation, which daily snapshots would discretize.
    """
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    changes = _simulate_events(spec, duration, rng)
    traj = Trajectory(user_id, _to_snapshots(changes, duration))
    return traj, _to_event_sequence(user_id, changes, duration)


def _check_mix(mix: dict[Archetype, float]):
    if not mix:
        raise InvalidMixError("mix is empty")
    if any(f < 0 for f in mix.values()):
        raise InvalidMixError("mix fractions must be non-negative")
    total = sum(mix.values())
    if abs(total - 1.0) > 1e-9:
        raise InvalidMixError(f"mix fractions sum to {total}, expected 1")


def sample_population(spec: PopulationSpec) -> PopulationSample:
    """Generate a full population with ground-truth labels and event streams.

    Users draw their archetype i.i.d. from the mix. Per-user seeds are
    spawned from the master seed, so the output is reproducible and
    independent of evaluation order.
    """
    _check_mix(spec.mix)
    for arch in spec.mix:
        if spec.mix[arch] > 0 and arch not in spec.specs:
            raise InvalidMixError(f"mix includes {arch} but no spec for it")
    master = np.random.SeedSequence(spec.seed)
    assign_rng = np.random.default_rng(master.spawn(1)[0])
    user_seeds = master.spawn(spec.n_users + 1)[1:]
    archetypes = sorted(spec.mix, key=lambda a: a.value)
    probs = np.array([spec.mix[a] for a in archetypes], dtype=float)
    probs = probs / probs.sum()
    picks = assign_rng.choice(len(archetypes), size=spec.n_users, p=probs)

    width = max(4, len(str(spec.n_users)))
    trajectories = []
    events = {}
    labels = {}
    for i in range(spec.n_users):
        user_id = f"u{i + 1:0{width}d}"
        arch = archetypes[int(picks[i])]
        rng = np.random.default_rng(user_seeds[i])
        traj, seq = generate_user_with_events(
            spec.specs[arch], spec.duration, rng, user_id=user_id
        )
        if spec.blackout is not None:
            lo, hi = spec.blackout
            snaps = tuple(s for s in traj.snapshots if not lo <= s.t <= hi)
            traj = Trajectory(user_id, snaps)
        trajectories.append(traj)
        events[user_id] = seq
        labels[user_id] = arch
    return PopulationSample(trajectories=trajectories, events=events, labels=labels)


def generate_population(spec: PopulationSpec) -> list[Trajectory]:
    """Trajectories only; see sample_population for the ground truth too."""
    return sample_population(spec).trajectories


REFERENCE_MIX = {
    Archetype.READER: 0.45,
    Archetype.BLOGGER_SOCIALIZER: 0.20,
    Archetype.SOCIALIZER: 0.20,
    Archetype.BLOGGER: 0.15,
}

# Archetype knobs at the reference per-family event rates (0.45 publishing,
# 0.2 social per day). Socializers here mostly add friends, so both the
# event-level and the shape-level pipeline can see them.
GROWTH_SPECS = {
    Archetype.READER: ArchetypeSpec(Archetype.READER),
    Archetype.BLOGGER: ArchetypeSpec(Archetype.BLOGGER, pub_rate=0.45),
    Archetype.SOCIALIZER: ArchetypeSpec(Archetype.SOCIALIZER, soc_rate=0.2, churn=0.1),
    Archetype.BLOGGER_SOCIALIZER: ArchetypeSpec(
        Archetype.BLOGGER_SOCIALIZER,
        pub_rate=0.45, soc_rate=0.2, churn=0.1, compound_prob=0.6, coupling=0.5,
    ),
}

# Churn-heavy variant: socializers and blogger-socializers cycle friend
# adds and removals with near-zero net change, which event-level analysis
# sees and shape-level analysis does not.
CHURN_SPECS = {
    Archetype.READER: ArchetypeSpec(Archetype.READER),
    Archetype.BLOGGER: ArchetypeSpec(Archetype.BLOGGER, pub_rate=0.45),
    Archetype.SOCIALIZER: ArchetypeSpec(Archetype.SOCIALIZER, soc_rate=0.5, churn=0.5),
    Archetype.BLOGGER_SOCIALIZER: ArchetypeSpec(
        Archetype.BLOGGER_SOCIALIZER,
        pub_rate=0.6, soc_rate=0.3, churn=0.5, compound_prob=0.9,
    ),
}

MIX_PRESETS = {
    "paper": (REFERENCE_MIX, GROWTH_SPECS),
    "paper-churn": (REFERENCE_MIX, CHURN_SPECS),
    "reader-only": ({Archetype.READER: 1.0}, GROWTH_SPECS),
}


def population_preset(
    name: str, n_users: int, duration: float = 140.0, seed: int = 0, blackout=None
) -> PopulationSpec:
    """PopulationSpec for a named mix preset (see MIX_PRESETS)."""
    if name not in MIX_PRESETS:
        raise InvalidMixError(f"unknown mix preset {name!r}; choose from {sorted(MIX_PRESETS)}")
    mix, specs = MIX_PRESETS[name]
    return PopulationSpec(
        n_users=n_users, mix=mix, specs=specs, duration=duration, seed=seed, blackout=blackout
    )


def generate_sqrt_coupled(
    n: int, c: float = 9.0, noise: float = 0.0, duration: float = 140.0, seed=None
) -> list[Trajectory]:
    """Population whose friend counts track c*sqrt(posts) by construction.

    Publishing is a Poisson counting process with per-user rates spread over
    a range so the pooled points cover a wide post span; friends are set to
    round(c*sqrt(posts)) with multiplicative noise, floored at zero. Used to
    validate the square-root law fit.
    """
    if c <= 0:
        raise ValueError("c must be positive")
    master = np.random.SeedSequence(seed)
    width = max(4, len(str(n)))
    trajectories = []
    for i, child in enumerate(master.spawn(n)):
        rng = np.random.default_rng(child)
        rate = rng.uniform(0.2, 1.5)
        times = _event_times(rng, rate, duration)
        changes = [[t, 1, 0] for t in times]
        snaps = []
        posts = 0
        idx = 0
        for day in range(int(duration) + 1):
            while idx < len(changes) and changes[idx][0] <= day:
                posts += 1
                idx += 1
            wobble = 1.0 + noise * rng.standard_normal() if noise > 0 else 1.0
            friends = max(0, round(c * math.sqrt(posts) * wobble))
            snaps.append(Snapshot(float(day), posts, friends))
        trajectories.append(Trajectory(f"u{i + 1:0{width}d}", tuple(snaps)))
    return trajectories
