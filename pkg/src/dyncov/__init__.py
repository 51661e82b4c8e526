"""Dynamic coverage of mobile sensor networks: closed-form predictions,
an event-driven Monte Carlo simulator to check them, and the sensor-versus-
intruder mobility game."""

from .analytic import (
    NeverDetected,
    QuadratureError,
    area_coverage,
    coverage_summary,
    duration_summary,
    effective_speed,
    interval_coverage_straight,
    mean_detection_time,
    mobile_detection_law,
    optimal_speed,
    required_speed,
    sensing_time_law,
    static_detection_law,
    time_coverage,
)
from .model import (
    DiscreteSpeed,
    FixedSpeed,
    IntruderSpec,
    Mixture,
    NetworkConfig,
    PointMass,
    SensorTrack,
    UniformDirection,
    UniformSpeed,
    VonMises,
)

__version__ = "0.1.0"
