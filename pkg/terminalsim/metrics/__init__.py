from .bottleneck import (
    BottleneckConfig,
    BottleneckResult,
    bottleneck_room,
    bottleneck_sweep,
    measure_bottleneck,
    steady_flow,
    write_bottleneck,
)
from .cycle import LANDING_INTERVAL_S, CycleSummary, landing_cycle_report, write_cycle_report
from .density import DensityProbe, density_map
from .stats import (
    DEFAULT_SEGMENT,
    Segment,
    StatsRow,
    load_segments,
    nearest_rank,
    segment_durations,
    summarize,
    travel_time_stats,
    write_stats,
)

__all__ = [
    "DEFAULT_SEGMENT",
    "LANDING_INTERVAL_S",
    "BottleneckConfig",
    "BottleneckResult",
    "CycleSummary",
    "DensityProbe",
    "Segment",
    "StatsRow",
    "bottleneck_room",
    "bottleneck_sweep",
    "density_map",
    "landing_cycle_report",
    "load_segments",
    "measure_bottleneck",
    "nearest_rank",
    "segment_durations",
    "steady_flow",
    "summarize",
    "travel_time_stats",
    "write_bottleneck",
    "write_cycle_report",
    "write_stats",
]
