"""Domain types: single-object densities, Bernoulli sequences and sequence sets.

A Bernoulli density is an existence probability paired with a single-object
density.  A ``BernoulliSequence`` is a start time plus a run of Bernoulli
densities at consecutive time steps; a ``SequenceSet`` collects such
sequences over a window ``1..K``.  Ground truth is the degenerate case:
existence one and Dirac densities.

All types are immutable after construction and safe to share across
concurrent evaluations.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence, Union

import numpy as np

from .errors import DomainError

__all__ = [
    "StateVector",
    "GaussianDensity",
    "DiracDensity",
    "Density",
    "BernoulliDensity",
    "BernoulliSequence",
    "SequenceSet",
    "MetricParams",
    "tau",
    "lift_ground_truth",
]

_SYM_TOL = 1e-12
_EIG_TOL = 1e-12


def _freeze(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float, copy=True)
    a.setflags(write=False)
    return a


def as_state_vector(coordinates: Union["StateVector", Sequence[float], np.ndarray]) -> np.ndarray:
    """Validate and return a read-only 1-D float array of dimension >= 1."""
    arr = np.atleast_1d(np.asarray(coordinates, dtype=float))
    if arr.ndim != 1 or arr.size < 1:
        raise DomainError(f"state vector must be 1-D with dimension >= 1, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise DomainError("state vector coordinates must be finite")
    return _freeze(arr)


# A state is just a finite real vector; no wrapper class needed.
StateVector = np.ndarray


@dataclass(frozen=True)
class GaussianDensity:
    """Gaussian single-object density with symmetric PSD covariance."""

    mean: np.ndarray
    covariance: np.ndarray

    def __post_init__(self) -> None:
        mean = as_state_vector(self.mean)
        cov = np.asarray(self.covariance, dtype=float)
        d = mean.size
        if cov.shape != (d, d):
            raise DomainError(f"covariance shape {cov.shape} does not match state dimension {d}")
        if not np.all(np.isfinite(cov)):
            raise DomainError("covariance entries must be finite")
        scale = max(1.0, float(np.abs(cov).max()))
        if float(np.abs(cov - cov.T).max()) > _SYM_TOL * scale:
            raise DomainError("covariance must be symmetric within 1e-12")
        cov = 0.5 * (cov + cov.T)
        eigs = np.linalg.eigvalsh(cov)
        if eigs.size and eigs.min() < -_EIG_TOL * max(1.0, float(eigs.max()), 0.0):
            raise DomainError(f"covariance must be positive semidefinite, min eigenvalue {eigs.min():g}")
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "covariance", _freeze(cov))

    @property
    def dim(self) -> int:
        return self.mean.size


@dataclass(frozen=True)
class DiracDensity:
    """Point-mass single-object density (zero-covariance limit)."""

    point: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "point", as_state_vector(self.point))

    @property
    def mean(self) -> np.ndarray:
        return self.point

    @property
    def dim(self) -> int:
        return self.point.size


Density = Union[GaussianDensity, DiracDensity]


@dataclass(frozen=True)
class BernoulliDensity:
    """Existence probability paired with a single-object density.

    Zero existence is rejected: a component that cannot exist carries no
    information and must be deleted by the caller instead.
    """

    existence: float
    density: Density

    def __post_init__(self) -> None:
        r = float(self.existence)
        if not np.isfinite(r) or not 0.0 < r <= 1.0:
            raise DomainError(f"existence probability must be in (0, 1], got {r!r}")
        if not isinstance(self.density, (GaussianDensity, DiracDensity)):
            raise DomainError("density must be a GaussianDensity or DiracDensity")
        object.__setattr__(self, "existence", r)

    @property
    def dim(self) -> int:
        return self.density.dim


@dataclass(frozen=True)
class BernoulliSequence:
    """A start time plus a run of Bernoulli densities at consecutive steps.

    Gaps are not representable; model them as separate sequences.
    """

    start_time: int
    densities: tuple[BernoulliDensity, ...]

    def __post_init__(self) -> None:
        t = int(self.start_time)
        if t < 1:
            raise DomainError(f"start time must be >= 1, got {t}")
        dens = tuple(self.densities)
        if len(dens) < 1:
            raise DomainError("a sequence must contain at least one Bernoulli density")
        dims = {b.dim for b in dens}
        if len(dims) != 1:
            raise DomainError(f"all densities in a sequence must share one state dimension, got {sorted(dims)}")
        object.__setattr__(self, "start_time", t)
        object.__setattr__(self, "densities", dens)

    @property
    def length(self) -> int:
        return len(self.densities)

    @property
    def end_time(self) -> int:
        """Last time step at which the sequence is alive (inclusive)."""
        return self.start_time + self.length - 1

    @property
    def dim(self) -> int:
        return self.densities[0].dim


@dataclass(frozen=True)
class SequenceSet:
    """A finite set of Bernoulli sequences over the window ``1..K``.

    The stored order is storage order only; every metric operation is
    invariant under permutation of it.
    """

    window_length: int
    sequences: tuple[BernoulliSequence, ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        K = int(self.window_length)
        if K < 1:
            raise DomainError(f"window length must be >= 1, got {K}")
        seqs = tuple(self.sequences)
        for idx, s in enumerate(seqs):
            if s.end_time > K:
                raise DomainError(
                    f"sequence {idx} ends at step {s.end_time}, beyond window length {K}"
                )
        dims = {s.dim for s in seqs}
        if len(dims) > 1:
            raise DomainError(f"all sequences must share one state dimension, got {sorted(dims)}")
        object.__setattr__(self, "window_length", K)
        object.__setattr__(self, "sequences", seqs)

    def __len__(self) -> int:
        return len(self.sequences)

    @property
    def dim(self) -> int | None:
        """State dimension, or None for an empty set."""
        return self.sequences[0].dim if self.sequences else None

    def densities_at(self, k: int) -> list[BernoulliDensity]:
        """All Bernoulli densities alive at step ``k`` (storage order)."""
        out = []
        for s in self.sequences:
            b = tau(s, k, self.window_length)
            if b is not None:
                out.append(b)
        return out


@dataclass(frozen=True)
class MetricParams:
    """Cut-off ``c > 0``, order ``p >= 1`` and switching cost ``gamma > 0``."""

    c: float = 10.0
    p: float = 2.0
    gamma: float = 2.0

    def __post_init__(self) -> None:
        c, p, gamma = float(self.c), float(self.p), float(self.gamma)
        if not np.isfinite(c) or c <= 0:
            raise DomainError(f"cut-off c must be > 0, got {c!r}")
        if not np.isfinite(p) or p < 1:
            raise DomainError(f"order p must be >= 1, got {p!r}")
        if not np.isfinite(gamma) or gamma <= 0:
            raise DomainError(f"switch cost gamma must be > 0, got {gamma!r}")
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "gamma", gamma)

    @property
    def miss_cost(self) -> float:
        """Unassignment cost c^p / 2 for a unit-existence component."""
        return 0.5 * self.c**self.p


def tau(sequence: BernoulliSequence, k: int, window_length: int | None = None) -> BernoulliDensity | None:
    """Bernoulli density of ``sequence`` at step ``k``, or None when not alive.

    ``window_length`` bounds the valid range of ``k``; when omitted, only
    ``k >= 1`` is enforced.
    """
    k = int(k)
    if k < 1 or (window_length is not None and k > int(window_length)):
        hi = window_length if window_length is not None else "K"
        raise DomainError(f"time step {k} outside window 1..{hi}")
    if sequence.start_time <= k <= sequence.end_time:
        return sequence.densities[k - sequence.start_time]
    return None


def lift_ground_truth(
    trajectories: Iterable[tuple[int, Sequence[Sequence[float]]]],
    window_length: int,
) -> SequenceSet:
    """Lift point trajectories to unit-existence Dirac Bernoulli sequences.

    Each trajectory is a ``(start_time, states)`` pair; input order is
    preserved in the resulting set.
    """
    seqs = []
    for start_time, states in trajectories:
        states = list(states)
        if not states:
            raise DomainError("trajectories must contain at least one state")
        seqs.append(
            BernoulliSequence(
                start_time=start_time,
                densities=tuple(BernoulliDensity(1.0, DiracDensity(s)) for s in states),
            )
        )
    return SequenceSet(window_length=window_length, sequences=tuple(seqs))
