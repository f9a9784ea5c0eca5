"""256-bin intensity histogram shared by the median filter, HE and CLAHE."""
from __future__ import annotations

import numpy as np

from .kernels import active as _k


class Histogram256:
    """Occurrence counts for 8-bit intensities with cumulative-rank queries."""

    __slots__ = ("counts",)

    def __init__(self, counts=None):
        if counts is None:
            counts = np.zeros(256, np.int64)
        counts = np.array(counts, dtype=np.int64)
        if counts.shape != (256,):
            raise ValueError(f"expected 256 bins, got shape {counts.shape}")
        if (counts < 0).any():
            raise ValueError("histogram counts must be non-negative")
        self.counts = counts

    @classmethod
    def from_pixels(cls, pixels) -> "Histogram256":
        return cls(np.bincount(np.asarray(pixels, np.uint8).ravel(), minlength=256))

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    def add(self, value: int, n: int = 1) -> None:
        self.counts[value] += n

    def remove(self, value: int, n: int = 1) -> None:
        if self.counts[value] < n:
            raise ValueError(f"bin {value} holds {self.counts[value]} < {n}")
        self.counts[value] -= n

    def cumulative(self) -> np.ndarray:
        return np.cumsum(self.counts)

    def rank_value(self, rank: int) -> int:
        """Smallest intensity whose cumulative count reaches ``rank`` (1-based)."""
        if not 1 <= rank <= self.total:
            raise ValueError(f"rank {rank} outside 1..{self.total}")
        return int(np.searchsorted(self.cumulative(), rank))

    def __eq__(self, other):
        if not isinstance(other, Histogram256):
            return NotImplemented
        return bool(np.array_equal(self.counts, other.counts))

    __hash__ = None

    def __repr__(self):
        nz = np.flatnonzero(self.counts)
        body = ", ".join(f"{v}:{self.counts[v]}" for v in nz[:8])
        more = ", ..." if nz.size > 8 else ""
        return f"Histogram256({{{body}{more}}}, total={self.total})"


def hist_median(h: Histogram256) -> int:
    """Lower median: rank ``(total + 1) // 2``."""
    total = h.total
    if total < 1:
        raise ValueError("median of an empty histogram")
    return int(_k.hist_median(h.counts, total))


def clip_histogram(h: Histogram256, clip_count: int) -> Histogram256:
    """Truncate bins at ``clip_count`` and spread the excess over all bins.

    The excess is redistributed once: ``excess // 256`` to every bin and the
    remainder one count each to the lowest bins. Totals are preserved.
    """
    if clip_count < 1:
        raise ValueError("clip_count must be >= 1")
    return Histogram256(_k.clip_counts(h.counts, int(clip_count)))
