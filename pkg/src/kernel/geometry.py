"""
Contextual-Geometric Kernel.

An agent's soft classifier: an axis-aligned box in n-dimensional concept
space holding a set of anchors, plus per-dimension cumulative scale
factors (alpha) recording how far the box has grown to frame novel
stimuli.

Classification score:
    A_x = 0                       if the stimulus lies outside the box
    A_x = max(1 - d / D, eps_in)  otherwise
where d is the Euclidean distance to the nearest anchor and D is the
largest anchor-to-corner distance of the box.

Constraints:
    - Kernels are immutable; rescale returns a new kernel
    - Kernels never shrink
    - No file I/O, no logging

Usage:
    from src.kernel.geometry import build_kernel, classify, rescale
"""

from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np

from src.genome.representation import Genome


# =============================================================================
# GEOMETRIC CONSTANTS
# =============================================================================

MIN_EXTENT = 1e-3
"""Minimum box width per dimension (degenerate extent genes are widened)."""

MIN_INTERIOR_SCORE = 1e-9
"""Floor of A_x inside the box, so boundary stimuli still score > 0."""


# =============================================================================
# DOMAIN TYPES
# =============================================================================

@dataclass(frozen=True)
class Stimulus:
    """A point in concept space."""
    coords: Tuple[float, ...]

    def __post_init__(self) -> None:
        if not self.coords or not np.all(np.isfinite(self.coords)):
            raise ValueError(f"stimulus coordinates must be finite, got {self.coords}")

    @classmethod
    def of(cls, coords: Sequence[float]) -> "Stimulus":
        return cls(tuple(float(c) for c in coords))

    @property
    def n_dims(self) -> int:
        return len(self.coords)


@dataclass(frozen=True)
class Kernel:
    """
    Axis-aligned kernel with anchors and alpha history.

    Attributes:
        lo: Lower bound per dimension.
        hi: Upper bound per dimension.
        anchors: Anchor points inside [lo, hi].
        alpha: Current extent / original extent, per dimension (>= 1).
    """
    lo: Tuple[float, ...]
    hi: Tuple[float, ...]
    anchors: Tuple[Tuple[float, ...], ...]
    alpha: Tuple[float, ...]

    def __post_init__(self) -> None:
        n = len(self.lo)
        if len(self.hi) != n or len(self.alpha) != n:
            raise ValueError("lo, hi and alpha must share one dimensionality")
        if not self.anchors:
            raise ValueError("kernel needs at least one anchor")
        if any(lo >= hi for lo, hi in zip(self.lo, self.hi)):
            raise ValueError(f"kernel bounds must satisfy lo < hi, got {self.lo} / {self.hi}")
        for anchor in self.anchors:
            if len(anchor) != n:
                raise ValueError(f"anchor {anchor} does not match {n} dimensions")
            if any(not lo <= a <= hi for a, lo, hi in zip(anchor, self.lo, self.hi)):
                raise ValueError(f"anchor {anchor} lies outside the kernel bounds")

    @property
    def n_dims(self) -> int:
        return len(self.lo)

    @property
    def extent(self) -> np.ndarray:
        return np.asarray(self.hi) - np.asarray(self.lo)

    @property
    def anchor_centroid(self) -> np.ndarray:
        return np.asarray(self.anchors).mean(axis=0)


# =============================================================================
# INTERNAL HELPERS
# =============================================================================

def _check_dims(k: Kernel, s: Stimulus) -> None:
    if k.n_dims != s.n_dims:
        raise ValueError(
            f"stimulus has {s.n_dims} dimensions, kernel has {k.n_dims}"
        )


def _max_anchor_corner_distance(k: Kernel) -> float:
    """Largest distance from any anchor to any corner of the box."""
    anchors = np.asarray(k.anchors)
    lo = np.asarray(k.lo)
    hi = np.asarray(k.hi)
    # The farthest corner from an anchor takes the farther bound in every dimension.
    reach = np.maximum(anchors - lo, hi - anchors)
    return float(np.sqrt((reach ** 2).sum(axis=1)).max())


def contains(k: Kernel, s: Stimulus) -> bool:
    """Closed-box membership."""
    _check_dims(k, s)
    point = np.asarray(s.coords)
    return bool(np.all(point >= np.asarray(k.lo)) and np.all(point <= np.asarray(k.hi)))


# =============================================================================
# PUBLIC API
# =============================================================================

def build_kernel(g: Genome) -> Kernel:
    """
    Derive a kernel from the genome's structural genes.

    Bounds are centered on the anchor centroid: lo = c - e/2, hi = c + e/2,
    with extents below MIN_EXTENT widened to MIN_EXTENT. Anchors are
    clamped into the bounds and alpha starts at 1.
    """
    extents = np.maximum(np.asarray(g.extents, dtype=float), MIN_EXTENT)
    anchors = np.asarray(g.anchors, dtype=float)
    centroid = anchors.mean(axis=0)

    lo = centroid - extents / 2.0
    hi = centroid + extents / 2.0
    anchors = np.clip(anchors, lo, hi)

    return Kernel(
        lo=tuple(float(x) for x in lo),
        hi=tuple(float(x) for x in hi),
        anchors=tuple(tuple(float(x) for x in a) for a in anchors),
        alpha=tuple(1.0 for _ in range(g.n_dims)),
    )


def classify(k: Kernel, s: Stimulus) -> float:
    """
    Soft classification score A_x in [0, 1].

    Raises:
        ValueError: On dimension mismatch.
    """
    if not contains(k, s):
        return 0.0

    point = np.asarray(s.coords)
    nearest = float(np.sqrt(((np.asarray(k.anchors) - point) ** 2).sum(axis=1)).min())
    reach = _max_anchor_corner_distance(k)

    return max(1.0 - nearest / reach, MIN_INTERIOR_SCORE)


def rescale(k: Kernel, s: Stimulus, flexibility: float) -> Kernel:
    """
    Grow the kernel so that a novel stimulus is framed inside it.

    For every dimension where the stimulus overshoots a bound, that bound
    moves to the stimulus plus a margin of flexibility * overshoot in the
    overshoot direction. Other dimensions are untouched and the kernel
    never shrinks. Alpha is updated to the new extent ratio.

    Args:
        k: Kernel to rescale.
        s: Encountered stimulus.
        flexibility: Flexibility gene in [0, 1].

    Returns:
        New Kernel (the same kernel when the stimulus is already inside).
    """
    _check_dims(k, s)
    if not 0.0 <= flexibility <= 1.0:
        raise ValueError(f"flexibility must lie in [0, 1], got {flexibility}")

    point = np.asarray(s.coords)
    lo = np.asarray(k.lo)
    hi = np.asarray(k.hi)

    over_hi = point > hi
    under_lo = point < lo
    if not (over_hi.any() or under_lo.any()):
        return k

    original_extent = (hi - lo) / np.asarray(k.alpha)

    new_hi = np.where(over_hi, point + flexibility * (point - hi), hi)
    new_lo = np.where(under_lo, point - flexibility * (lo - point), lo)
    new_alpha = np.where(
        over_hi | under_lo,
        (new_hi - new_lo) / original_extent,
        np.asarray(k.alpha),
    )

    return Kernel(
        lo=tuple(float(x) for x in new_lo),
        hi=tuple(float(x) for x in new_hi),
        anchors=k.anchors,
        alpha=tuple(float(x) for x in new_alpha),
    )


def alpha_distance(k1: Kernel, k2: Kernel) -> float:
    """Max per-dimension difference between two kernels' alpha factors."""
    if k1.n_dims != k2.n_dims:
        raise ValueError(
            f"kernels differ in dimensionality: {k1.n_dims} vs {k2.n_dims}"
        )
    return float(np.abs(np.asarray(k1.alpha) - np.asarray(k2.alpha)).max())


def with_anchors(k: Kernel, anchors: Sequence[Sequence[float]]) -> Kernel:
    """Replace the anchor set, clamping the new anchors into the current bounds."""
    clamped = np.clip(np.asarray(anchors, dtype=float), np.asarray(k.lo), np.asarray(k.hi))
    return Kernel(
        lo=k.lo,
        hi=k.hi,
        anchors=tuple(tuple(float(x) for x in a) for a in clamped),
        alpha=k.alpha,
    )
