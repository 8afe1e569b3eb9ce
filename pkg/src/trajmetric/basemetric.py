"""Base metrics between single-object densities.

Two kinds are provided: the 2-Wasserstein distance (closed form for
Gaussians, Diracs treated as zero-covariance Gaussians) and a Euclidean
distance between means that ignores covariances entirely.
"""

from __future__ import annotations

import enum

import numpy as np

from .errors import DomainError
from .types import Density, DiracDensity, GaussianDensity

__all__ = ["BaseMetricKind", "wasserstein2", "base_distance"]


class BaseMetricKind(enum.Enum):
    WASSERSTEIN2 = "wasserstein2"
    EUCLIDEAN_MEANS = "euclidean_means"

    @classmethod
    def from_string(cls, name: str) -> "BaseMetricKind":
        try:
            return cls(name)
        except ValueError:
            raise DomainError(
                f"unknown base metric {name!r}; expected one of {[k.value for k in cls]}"
            ) from None


def _psd_sqrt(cov: np.ndarray) -> np.ndarray:
    """Symmetric PSD square root; eigenvalues below 0 are clamped."""
    eigs, vecs = np.linalg.eigh(cov)
    eigs = np.clip(eigs, 0.0, None)
    return (vecs * np.sqrt(eigs)) @ vecs.T


def _mean_cov(density: Density) -> tuple[np.ndarray, np.ndarray | None]:
    if isinstance(density, DiracDensity):
        return density.point, None
    if isinstance(density, GaussianDensity):
        return density.mean, density.covariance
    raise DomainError(f"unsupported density type {type(density).__name__}")


def _order_key(density: Density) -> bytes:
    mean, cov = _mean_cov(density)
    tag = b"d" if cov is None else b"g"
    return tag + mean.tobytes() + (b"" if cov is None else cov.tobytes())


def _check_dims(a: Density, b: Density) -> None:
    if a.dim != b.dim:
        raise DomainError(f"state dimension mismatch: {a.dim} vs {b.dim}")


def wasserstein2(a: Density, b: Density) -> float:
    """2-Wasserstein distance between Gaussian or Dirac densities.

    W2(a, b)^2 = ||mu_a - mu_b||^2
                 + trace(S_a + S_b - 2 (S_b^{1/2} S_a S_b^{1/2})^{1/2}).

    Operands are evaluated in a canonical order so the result is exactly
    symmetric in floating point.
    """
    _check_dims(a, b)
    key_a, key_b = _order_key(a), _order_key(b)
    if key_a == key_b:
        # Exact identity; avoids sqrt-amplified float residue near zero.
        return 0.0
    if key_b < key_a:
        a, b = b, a
    mu_a, cov_a = _mean_cov(a)
    mu_b, cov_b = _mean_cov(b)
    sq = float(np.sum((mu_a - mu_b) ** 2))
    if cov_a is None and cov_b is None:
        return float(np.sqrt(sq))
    if cov_a is None:
        trace_term = float(np.trace(cov_b))
    elif cov_b is None:
        trace_term = float(np.trace(cov_a))
    else:
        root_b = _psd_sqrt(cov_b)
        inner = _psd_sqrt(root_b @ cov_a @ root_b)
        trace_term = float(np.trace(cov_a) + np.trace(cov_b) - 2.0 * np.trace(inner))
    # The trace term is >= 0 analytically; clamp the float residue.
    return float(np.sqrt(max(sq + max(trace_term, 0.0), 0.0)))


def euclidean_means(a: Density, b: Density) -> float:
    """Euclidean distance between the density means (covariances ignored)."""
    _check_dims(a, b)
    mu_a, _ = _mean_cov(a)
    mu_b, _ = _mean_cov(b)
    return float(np.linalg.norm(mu_a - mu_b))


def base_distance(kind: BaseMetricKind, a: Density, b: Density) -> float:
    """Dispatch on ``kind``; symmetric, and zero iff equal under the kind."""
    if kind is BaseMetricKind.WASSERSTEIN2:
        return wasserstein2(a, b)
    if kind is BaseMetricKind.EUCLIDEAN_MEANS:
        return euclidean_means(a, b)
    raise DomainError(f"unknown base metric kind {kind!r}")
