"""Per-step bookkeeping of an on-line prediction run.

For every significance level the ledger tracks, per step: the error
indicator of the reported region, the error indicator of the raw
(un-hulled) region, the cumulative error count, the reported region's
width, and the running median of the widths seen so far.

Median convention: the element of rank ``floor(n/2) + 1`` of the sorted
widths (ties broken by position), with infinite widths sorting last.  For
odd n this is the usual middle element; for even n it is the upper of the
two middle elements, so the median stays infinite until strictly more
than half of the widths are finite.
"""

from __future__ import annotations

import math
from bisect import insort
from dataclasses import dataclass, field
from typing import Sequence


def running_median(values: Sequence[float]) -> float:
    """Median of ``values`` under the ledger's upper-median convention."""
    n = len(values)
    if n == 0:
        raise ValueError("median of an empty sequence")
    return sorted(values)[n // 2]


@dataclass
class _LevelTrack:
    err: list[int] = field(default_factory=list)
    err_raw: list[int] = field(default_factory=list)
    cum_err: list[int] = field(default_factory=list)
    width: list[float] = field(default_factory=list)
    median: list[float] = field(default_factory=list)
    sorted_widths: list[float] = field(default_factory=list)


class OnlineLedger:
    """Error and accuracy bookkeeping keyed by significance level."""

    def __init__(self, levels: Sequence[float]):
        levels = tuple(float(e) for e in levels)
        if len(set(levels)) != len(levels):
            raise ValueError("significance levels must be distinct")
        self.levels = levels
        self._tracks = {eps: _LevelTrack() for eps in levels}
        self.steps = 0

    def record_step(
        self,
        errors: dict[float, int],
        raw_errors: dict[float, int],
        widths: dict[float, float],
    ) -> None:
        """Append one step's indicators and widths (one entry per level)."""
        for eps in self.levels:
            track = self._tracks[eps]
            err = int(errors[eps])
            track.err.append(err)
            track.err_raw.append(int(raw_errors[eps]))
            track.cum_err.append((track.cum_err[-1] if track.cum_err else 0) + err)
            width = float(widths[eps])
            if math.isnan(width) or width < 0.0:
                raise ValueError(f"invalid region width {width}")
            track.width.append(width)
            insort(track.sorted_widths, width)
            track.median.append(track.sorted_widths[len(track.sorted_widths) // 2])
        self.steps += 1

    def errors(self, eps: float) -> list[int]:
        return list(self._tracks[eps].err)

    def raw_errors(self, eps: float) -> list[int]:
        return list(self._tracks[eps].err_raw)

    def cumulative_errors(self, eps: float) -> list[int]:
        return list(self._tracks[eps].cum_err)

    def widths(self, eps: float) -> list[float]:
        return list(self._tracks[eps].width)

    def medians(self, eps: float) -> list[float]:
        return list(self._tracks[eps].median)

    def first_bounded_step(self, eps: float) -> int | None:
        """First step whose reported region had finite width; None if never."""
        for i, w in enumerate(self._tracks[eps].width):
            if math.isfinite(w):
                return i + 1
        return None

    def first_finite_median_step(self, eps: float) -> int | None:
        """First step whose running width-median was finite; None if never."""
        for i, m in enumerate(self._tracks[eps].median):
            if math.isfinite(m):
                return i + 1
        return None
