"""Vehicle, sensor-noise and battery parameters for the 6-DOF simulator.

The default vehicle is an 8-thruster, vectored-frame ROV: four horizontal
thrusters mounted in an X pattern (surge/sway/yaw authority) and four
vertical ones (heave/roll/pitch). Drag is tuned so the attainable speed
stays below ``v_max`` in every command direction; the limit comes from the
drag balance, commands are never clipped against it.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

GRAVITY_W = np.array([0.0, 0.0, -9.81])  # world frame, Z up


def default_allocation(J: int = 8) -> np.ndarray:
    """Body-wrench allocation matrix (6 x J) for the default thruster layout.

    Columns map per-thruster force (N) to body wrench [Fx Fy Fz Mx My Mz].
    Only J = 8 has a built-in layout; other thruster counts need an explicit
    matrix.
    """
    if J != 8:
        raise ValueError(f"no built-in allocation for J={J}; supply allocation_matrix")
    c = np.sqrt(0.5)
    lx, ly = 0.156, 0.111  # horizontal thruster lever arms, m
    vx, vy = 0.120, 0.218  # vertical thruster lever arms, m
    cols = []
    # horizontal X layout: (position, direction) pairs
    horizontal = [
        ((lx, ly, 0.0), (c, -c, 0.0)),
        ((lx, -ly, 0.0), (c, c, 0.0)),
        ((-lx, ly, 0.0), (c, c, 0.0)),
        ((-lx, -ly, 0.0), (c, -c, 0.0)),
    ]
    vertical = [
        ((vx, vy, 0.0), (0.0, 0.0, 1.0)),
        ((vx, -vy, 0.0), (0.0, 0.0, 1.0)),
        ((-vx, vy, 0.0), (0.0, 0.0, 1.0)),
        ((-vx, -vy, 0.0), (0.0, 0.0, 1.0)),
    ]
    for pos, direction in horizontal + vertical:
        p = np.array(pos)
        d = np.array(direction)
        cols.append(np.concatenate([d, np.cross(p, d)]))
    return np.column_stack(cols)


@dataclass
class VehicleParams:
    """Rigid-body, hydrodynamic and actuation parameters.

    Drag is diagonal per axis with the quadratic part coupled through the
    block speed: F_i = -(linear_i + quadratic_i * ||v||) * v_i, and likewise
    for the angular block with ||omega||.
    """

    mass: float = 11.5  # kg
    inertia_diag: np.ndarray = field(
        default_factory=lambda: np.array([0.26, 0.25, 0.37])
    )  # kg m^2, body axes
    added_mass_diag: np.ndarray = field(
        default_factory=lambda: np.array([5.5, 12.7, 14.6, 0.12, 0.12, 0.12])
    )
    linear_drag_diag: np.ndarray = field(
        default_factory=lambda: np.array([5.0, 5.5, 6.5, 0.15, 0.15, 0.30])
    )
    quadratic_drag_diag: np.ndarray = field(
        default_factory=lambda: np.array([30.0, 33.0, 36.0, 1.2, 1.2, 1.6])
    )
    thruster_count: int = 8
    allocation_matrix: np.ndarray = field(default_factory=default_allocation)
    thrust_coefficient: float = 4.5  # N per unit command at nominal voltage
    nominal_voltage: float = 16.0  # V
    buoyancy_offset: np.ndarray = field(
        default_factory=lambda: np.array([0.0, 0.0, 0.025])
    )  # center of buoyancy relative to center of mass, m
    buoyancy_ratio: float = 1.0  # buoyancy force / weight; 1.0 is neutral
    v_max: float = 0.8  # m/s, drag-enforced speed envelope

    def __post_init__(self):
        self.inertia_diag = np.asarray(self.inertia_diag, dtype=float)
        self.added_mass_diag = np.asarray(self.added_mass_diag, dtype=float)
        self.linear_drag_diag = np.asarray(self.linear_drag_diag, dtype=float)
        self.quadratic_drag_diag = np.asarray(self.quadratic_drag_diag, dtype=float)
        self.allocation_matrix = np.asarray(self.allocation_matrix, dtype=float)
        self.buoyancy_offset = np.asarray(self.buoyancy_offset, dtype=float)
        if self.thruster_count < 1:
            raise ValueError("thruster_count must be >= 1")
        if self.mass <= 0:
            raise ValueError("mass must be positive")
        if np.any(self.linear_drag_diag < 0) or np.any(self.quadratic_drag_diag < 0):
            raise ValueError("drag diagonals must be non-negative")
        if self.allocation_matrix.shape != (6, self.thruster_count):
            raise ValueError(
                f"allocation_matrix must be 6x{self.thruster_count}, "
                f"got {self.allocation_matrix.shape}"
            )
        if np.linalg.matrix_rank(self.allocation_matrix) < 4:
            raise ValueError("allocation matrix rank < 4: surge/sway/heave/yaw not controllable")

    @property
    def J(self) -> int:
        return self.thruster_count

    def effective_mass_diag(self) -> np.ndarray:
        """6-vector of rigid-body plus added inertia per axis."""
        rb = np.concatenate([np.full(3, self.mass), self.inertia_diag])
        return rb + self.added_mass_diag


@dataclass
class ImuNoiseParams:
    """Accelerometer/gyro noise model: white noise per sample plus bias
    random walks. Walk densities are continuous (per sqrt(s)); per-step
    increments are scaled by sqrt(dt)."""

    accel_noise_std: np.ndarray = field(default_factory=lambda: np.full(3, 0.03))  # m/s^2
    gyro_noise_std: np.ndarray = field(default_factory=lambda: np.full(3, 0.003))  # rad/s
    accel_bias_walk_std: np.ndarray = field(default_factory=lambda: np.full(3, 8e-4))
    gyro_bias_walk_std: np.ndarray = field(default_factory=lambda: np.full(3, 8e-5))
    accel_bias_init_std: np.ndarray = field(default_factory=lambda: np.full(3, 0.03))
    gyro_bias_init_std: np.ndarray = field(default_factory=lambda: np.full(3, 0.002))
    gravity_w: np.ndarray = field(default_factory=lambda: GRAVITY_W.copy())

    def __post_init__(self):
        for name in (
            "accel_noise_std",
            "gyro_noise_std",
            "accel_bias_walk_std",
            "gyro_bias_walk_std",
            "accel_bias_init_std",
            "gyro_bias_init_std",
            "gravity_w",
        ):
            setattr(self, name, np.asarray(getattr(self, name), dtype=float))
        stds = np.concatenate(
            [
                self.accel_noise_std,
                self.gyro_noise_std,
                self.accel_bias_walk_std,
                self.gyro_bias_walk_std,
                self.accel_bias_init_std,
                self.gyro_bias_init_std,
            ]
        )
        if np.any(stds < 0):
            raise ValueError("noise stds must be non-negative")
        g = float(np.linalg.norm(self.gravity_w))
        if not 9.7 <= g <= 9.9:
            raise ValueError(f"gravity magnitude {g:.3f} outside [9.7, 9.9] m/s^2")

    def zero_noise(self) -> "ImuNoiseParams":
        """Copy with every stochastic term disabled (dead-reckoning oracle)."""
        z = np.zeros(3)
        return ImuNoiseParams(z, z, z, z, z, z, self.gravity_w.copy())


@dataclass
class BatteryConfig:
    """First-order battery: monotone open-circuit discharge proportional to
    consumed energy, plus a load-sag drop proportional to instantaneous
    power at the terminal."""

    initial_voltage: float = 16.8  # V, full 4S pack
    max_voltage: float = 16.8
    cutoff_voltage: float = 13.2
    discharge_slope: float = 1.2e-5  # V per Joule
    sag_coeff: float = 2.5e-3  # V per Watt
    hotel_power: float = 25.0  # W, constant electronics draw
    thruster_power_max: float = 45.0  # W per thruster at |u| = 1

    def power_draw(self, commands: np.ndarray) -> float:
        """Instantaneous electrical power for a command vector."""
        u = np.abs(np.asarray(commands, dtype=float))
        return float(self.hotel_power + self.thruster_power_max * np.sum(u**3))


@dataclass
class SimRates:
    imu_rate_hz: float = 200.0
    tick_rate_hz: float = 20.0  # actuator / barometer / ground-truth rate

    @property
    def imu_dt(self) -> float:
        return 1.0 / self.imu_rate_hz

    @property
    def tick_dt(self) -> float:
        return 1.0 / self.tick_rate_hz

    @property
    def substeps(self) -> int:
        n = self.imu_rate_hz / self.tick_rate_hz
        if abs(n - round(n)) > 1e-9:
            raise ValueError("imu_rate_hz must be an integer multiple of tick_rate_hz")
        return int(round(n))
