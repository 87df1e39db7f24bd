"""SwitchingSchedule model - piecewise-constant, right-continuous topology over time"""

import math
from dataclasses import dataclass
from typing import Optional, Union

from concord.domain.models.graph import WeightedDigraph
from concord.domain.models.protocol import ExponentProfile

REPEAT_FOREVER = "infinite"

# Relative slack when deciding that a segment boundary coincides with t_max
_TIME_EPS = 1e-12


@dataclass(frozen=True)
class Segment:
    """One constant piece of a schedule"""

    duration: float
    graph: WeightedDigraph
    exponents: Optional[ExponentProfile] = None  # None: use the protocol's profile

    def __post_init__(self):
        """Validate segment data"""
        if not math.isfinite(self.duration) or self.duration <= 0:
            raise ValueError(f"Segment duration must be positive and finite, got {self.duration}")
        if self.exponents is not None and self.exponents.n != self.graph.n:
            raise ValueError(
                f"Segment exponents cover {self.exponents.n} agents, graph has {self.graph.n}"
            )


@dataclass(frozen=True)
class ActiveInterval:
    """A segment placed on the time axis, active on [start, end)"""

    start: float
    end: float
    index: int  # position of the segment in the schedule
    segment: Segment


@dataclass(frozen=True)
class SwitchingSchedule:
    """Ordered segments, optionally repeated.

    With ``repeat=None`` the last segment stays active once the list is exhausted; an integer
    repeats the whole list that many times before the last segment takes over; ``"infinite"``
    cycles until the horizon.
    """

    segments: tuple[Segment, ...]
    repeat: Optional[Union[int, str]] = None

    def __post_init__(self):
        """Validate schedule data"""
        segments = tuple(self.segments)
        if not segments:
            raise ValueError("Schedule needs at least one segment")
        sizes = {s.graph.n for s in segments}
        if len(sizes) != 1:
            raise ValueError(f"All segments must have the same agent count, got {sorted(sizes)}")
        if self.repeat is not None and self.repeat != REPEAT_FOREVER:
            if isinstance(self.repeat, bool) or not isinstance(self.repeat, int) or self.repeat < 1:
                raise ValueError(f"repeat must be a positive integer or '{REPEAT_FOREVER}'")
        object.__setattr__(self, "segments", segments)

    @classmethod
    def fixed(
        cls,
        graph: WeightedDigraph,
        exponents: Optional[ExponentProfile] = None,
        duration: float = 1.0,
    ) -> "SwitchingSchedule":
        """Single-topology schedule; the segment extends to any horizon"""
        return cls((Segment(duration, graph, exponents),))

    @property
    def n(self) -> int:
        return self.segments[0].graph.n

    @property
    def is_switching(self) -> bool:
        return len(self.segments) > 1

    @property
    def period(self) -> float:
        return sum(s.duration for s in self.segments)

    @property
    def graphs(self) -> tuple[WeightedDigraph, ...]:
        return tuple(s.graph for s in self.segments)

    def intervals(self, t_max: float) -> list[ActiveInterval]:
        """Lay the schedule over [0, t_max].

        Consecutive intervals share their boundary, the first starts at 0 and the last ends
        exactly at ``t_max``.
        """
        if t_max <= 0:
            raise ValueError("t_max must be positive")
        out: list[ActiveInterval] = []
        last = len(self.segments) - 1
        start = 0.0
        cycle = 0
        while start < t_max:
            for index, segment in enumerate(self.segments):
                end = start + segment.duration
                final_cycle = self.repeat is None or (
                    self.repeat != REPEAT_FOREVER and cycle >= self.repeat - 1
                )
                if (final_cycle and index == last) or end >= t_max - _TIME_EPS * t_max:
                    end = t_max
                out.append(ActiveInterval(start, end, index, segment))
                start = end
                if start >= t_max:
                    break
            cycle += 1
        return out

    def segment_at(self, t: float) -> Segment:
        """Segment active at time t (right-continuous: a switch time belongs to the new one)"""
        if t < 0:
            raise ValueError("Time must be nonnegative")
        horizon = t + self.period + 1.0
        for interval in self.intervals(horizon):
            if interval.start <= t < interval.end:
                return interval.segment
        return self.segments[-1]

    def switch_times(self, t_max: float) -> list[float]:
        """Interior boundaries in (0, t_max)"""
        return [iv.end for iv in self.intervals(t_max)[:-1]]
