"""Event-driven Monte Carlo simulation of Poisson-deployed mobile sensors."""

from .estimators import (
    DetectionSample,
    Estimate,
    default_detection_horizon,
    detection_reach,
    estimate_area_coverage,
    estimate_interval_coverage,
    fleet_detection_time,
    sample_detection_time,
    sample_point_timeline,
)
from .geometry import (
    CoverageTimeline,
    Fleet,
    coverage_timeline,
    first_hit_time,
    merge_intervals,
    union_intervals,
)
from .replication import ReplicationSet, child_rng, run_replications
from .sampling import (
    SimulationWindow,
    sample_configuration,
    break_times,
    radial_chunks,
    sample_disk_fleet,
    sample_disk_fleet_direct,
    sample_fleet,
)

__all__ = [
    "CoverageTimeline",
    "DetectionSample",
    "Estimate",
    "Fleet",
    "ReplicationSet",
    "SimulationWindow",
    "child_rng",
    "coverage_timeline",
    "default_detection_horizon",
    "detection_reach",
    "estimate_area_coverage",
    "estimate_interval_coverage",
    "first_hit_time",
    "fleet_detection_time",
    "break_times",
    "radial_chunks",
    "merge_intervals",
    "run_replications",
    "sample_configuration",
    "sample_detection_time",
    "sample_disk_fleet",
    "sample_disk_fleet_direct",
    "sample_fleet",
    "sample_point_timeline",
    "union_intervals",
]
