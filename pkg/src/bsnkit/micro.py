"""Microscopic pipeline: signature clustering, Markov chains, archetypes.

Users are points in the 16-dimensional signature space; k-medoids under the
Euclidean signature distance groups them into disjoint clusters. Each
cluster is then summarized as a Markov chain over the four event kinds and
labeled with a behavioral archetype from its dominant transitions.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from sklearn.base import BaseEstimator, ClusterMixin
from sklearn.metrics.pairwise import euclidean_distances

from .errors import EmptyClusterError, TooFewPointsError
from .events import EVENT_INDEX, EVENT_KINDS, EventKind, EventSequence
from .trajectory import Archetype


class SignatureKMedoids(ClusterMixin, BaseEstimator):
    """K-medoids clustering of signature vectors.

    Medoids are actual data points, so cluster representatives never leave
    the space of realizable signatures. Fitting alternates assignment to the
    nearest medoid with per-cluster medoid updates until the medoid set is
    stable. Deterministic for a fixed ``random_state``.

    Parameters
    ----------
    n_clusters : int, default=12
    max_iter : int, default=100
    random_state : int or numpy Generator, optional
        Seeds the distance-weighted medoid initialization.

    Attributes
    ----------
    labels_ : ndarray of shape (n_samples,)
    medoid_indices_ : ndarray of shape (n_clusters,)
    cluster_centers_ : ndarray of shape (n_clusters, n_features)
        The medoid vectors.
    inertia_ : float
        Sum of distances of samples to their medoid.
    """

    def __init__(self, n_clusters: int = 12, max_iter: int = 100, random_state=None):
        self.n_clusters = n_clusters
        self.max_iter = max_iter
        self.random_state = random_state

    def _init_medoids(self, dist: np.ndarray, rng: np.random.Generator) -> np.ndarray:
        """Distance-squared weighted seeding; falls back to unused indices
        when fewer distinct points than clusters remain."""
        n = dist.shape[0]
        medoids = [int(rng.integers(n))]
        for _ in range(self.n_clusters - 1):
            d2 = np.min(dist[:, medoids], axis=1) ** 2
            total = d2.sum()
            if total > 0:
                medoids.append(int(rng.choice(n, p=d2 / total)))
            else:
                unused = [i for i in range(n) if i not in set(medoids)]
                medoids.append(unused[0])
        return np.array(medoids, dtype=int)

    def _assign(self, dist: np.ndarray, medoids: np.ndarray) -> np.ndarray:
        labels = np.argmin(dist[:, medoids], axis=1)
        # A medoid always anchors its own cluster; this keeps every cluster
        # non-empty even when duplicate points tie at distance zero.
        labels[medoids] = np.arange(len(medoids))
        return labels

    def fit(self, X, y=None):
        X = np.asarray(X, dtype=float)
        if X.ndim != 2:
            X = X.reshape(len(X), -1)
        n = X.shape[0]
        if self.n_clusters > n:
            raise TooFewPointsError(f"{n} points cannot form {self.n_clusters} clusters")
        rng = (
            self.random_state
            if isinstance(self.random_state, np.random.Generator)
            else np.random.default_rng(self.random_state)
        )
        dist = euclidean_distances(X)
        medoids = self._init_medoids(dist, rng)
        labels = self._assign(dist, medoids)
        for _ in range(self.max_iter):
            new_medoids = medoids.copy()
            for c in range(self.n_clusters):
                members = np.flatnonzero(labels == c)
                within = dist[np.ix_(members, members)].sum(axis=1)
                new_medoids[c] = members[int(np.argmin(within))]
            new_labels = self._assign(dist, new_medoids)
            if np.array_equal(new_medoids, medoids) and np.array_equal(new_labels, labels):
                break
            medoids, labels = new_medoids, new_labels
        self.medoid_indices_ = medoids
        self.labels_ = labels
        self.cluster_centers_ = X[medoids].copy()
        self.inertia_ = float(dist[np.arange(n), medoids[labels]].sum())
        return self

    def predict(self, X):
        X = np.asarray(X, dtype=float)
        if X.ndim != 2:
            X = X.reshape(len(X), -1)
        return np.argmin(euclidean_distances(X, self.cluster_centers_), axis=1)


@dataclass
class MicroCluster:
    """A group of users with nearby signatures."""

    id: int
    members: list[str]
    mean_signature: np.ndarray

    @property
    def size(self) -> int:
        return len(self.members)


def cluster_micro(signatures: dict[str, np.ndarray], k: int = 12, seed=None) -> list[MicroCluster]:
    """Group users into k disjoint clusters by signature distance.

    Users are processed in sorted id order so the result depends only on the
    signature map and the seed, not on dict insertion order. Clusters are
    numbered 1..k by decreasing size.
    """
    users = sorted(signatures)
    X = np.stack([np.asarray(signatures[u], dtype=float).ravel() for u in users])
    model = SignatureKMedoids(n_clusters=k, random_state=seed).fit(X)
    groups: dict[int, list[str]] = {c: [] for c in range(k)}
    for user, label in zip(users, model.labels_):
        groups[int(label)].append(user)
    ordered = sorted(groups.values(), key=lambda m: (-len(m), m[0]))
    clusters = []
    for i, members in enumerate(ordered, start=1):
        mean_sig = np.mean([signatures[u] for u in members], axis=0).reshape(4, 4)
        clusters.append(MicroCluster(id=i, members=members, mean_signature=mean_sig))
    return clusters


@dataclass
class MarkovModel:
    """Pooled transition statistics of one cluster.

    ``freq`` holds transition frequencies in events per observed day;
    ``duration`` holds mean transition durations in days, NaN where the
    transition was never observed. Rows and columns follow EVENT_KINDS.
    """

    freq: np.ndarray
    duration: np.ndarray
    states: tuple = field(default=EVENT_KINDS)


def markov_model(cluster: MicroCluster, seqs: dict[str, EventSequence]) -> MarkovModel:
    """Model a cluster as a Markov chain over event kinds.

    Frequencies are transition counts divided by the total observed days of
    all members, so they are per-day rates rather than per-trajectory
    shares; durations are mean gaps between the paired events.
    """
    if not cluster.members:
        raise EmptyClusterError(f"cluster {cluster.id} has no members")
    counts = np.zeros((4, 4), dtype=float)
    gap_sums = np.zeros((4, 4), dtype=float)
    total_days = 0.0
    for user in cluster.members:
        seq = seqs[user]
        total_days += seq.span_days
        events = seq.events
        for a, b in zip(events, events[1:]):
            i, j = EVENT_INDEX[a.kind], EVENT_INDEX[b.kind]
            counts[i, j] += 1.0
            gap_sums[i, j] += b.t - a.t
    freq = counts / total_days if total_days > 0 else counts
    with np.errstate(invalid="ignore"):
        duration = np.where(counts > 0, gap_sums / np.where(counts > 0, counts, 1.0), np.nan)
    return MarkovModel(freq=freq, duration=duration)


def micro_archetype(
    model: MarkovModel, freq_threshold: float = 0.1
) -> tuple[Archetype, list[tuple[EventKind, EventKind]]]:
    """Label a cluster from its dominant transitions.

    Dominant transitions are those with frequency >= ``freq_threshold``
    (per day). No dominant transitions means a passive reader; dominant
    transitions confined to the post state mean a blogger; confined to the
    friend states, a socializer; anything mixed or touching the compound
    state, a blogger-socializer.
    """
    rows, cols = np.nonzero(model.freq >= freq_threshold)
    dominant = [(EVENT_KINDS[i], EVENT_KINDS[j]) for i, j in zip(rows, cols)]
    if not dominant:
        return Archetype.READER, dominant
    touched = {kind for pair in dominant for kind in pair}
    if EventKind.COMPOUND in touched:
        return Archetype.BLOGGER_SOCIALIZER, dominant
    if touched <= {EventKind.POST}:
        return Archetype.BLOGGER, dominant
    if touched <= {EventKind.FRIEND_GAIN, EventKind.FRIEND_LOSS}:
        return Archetype.SOCIALIZER, dominant
    return Archetype.BLOGGER_SOCIALIZER, dominant


def micro_archetype_distribution(labels: dict[str, Archetype]) -> dict[Archetype, float]:
    """Normalized archetype shares over a labeled user set."""
    if not labels:
        raise EmptyClusterError("no labeled users")
    n = len(labels)
    return {
        arch: sum(1 for a in labels.values() if a is arch) / n
        for arch in Archetype
    }
