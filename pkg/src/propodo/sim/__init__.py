"""6-DOF underwater vehicle simulator: dynamics, sensors, excitation policies."""

from .dynamics import battery_step, step_dynamics, thruster_force
from .params import (
    GRAVITY_W,
    BatteryConfig,
    ImuNoiseParams,
    SimRates,
    VehicleParams,
    default_allocation,
)
from .policies import (
    POLICY_CLASSES,
    AttitudeHoldPolicy,
    ExcitationPolicy,
    PiecewiseConstantPolicy,
    SmoothExcitationPolicy,
    StationKeepingPolicy,
    WaypointSquarePolicy,
    commands_for_wrench,
    make_policy,
)
from .sensors import ImuBiasState, ImuSample, sample_barometer_depth, sample_imu
from .trajectory import (
    ActuatorSeries,
    BarometerSeries,
    BiasSeries,
    GroundTruthSeries,
    ImuSeries,
    RigidBodyState,
    TrajectoryRecord,
    generate_trajectory,
)

__all__ = [
    "GRAVITY_W",
    "AttitudeHoldPolicy",
    "ActuatorSeries",
    "BarometerSeries",
    "BatteryConfig",
    "BiasSeries",
    "ExcitationPolicy",
    "GroundTruthSeries",
    "ImuBiasState",
    "ImuNoiseParams",
    "ImuSample",
    "ImuSeries",
    "PiecewiseConstantPolicy",
    "POLICY_CLASSES",
    "RigidBodyState",
    "SimRates",
    "SmoothExcitationPolicy",
    "StationKeepingPolicy",
    "TrajectoryRecord",
    "VehicleParams",
    "WaypointSquarePolicy",
    "battery_step",
    "commands_for_wrench",
    "default_allocation",
    "generate_trajectory",
    "make_policy",
    "sample_barometer_depth",
    "sample_imu",
    "step_dynamics",
    "thruster_force",
]
