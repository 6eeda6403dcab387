import numpy as np
import pytest

from propodo.sim import (
    BatteryConfig,
    ImuNoiseParams,
    RigidBodyState,
    VehicleParams,
    battery_step,
    generate_trajectory,
    make_policy,
    step_dynamics,
    thruster_force,
)


@pytest.fixture(scope="module")
def params():
    return VehicleParams()


def test_equilibrium_state_unchanged(params):
    state = RigidBodyState()
    out, accel = step_dynamics(state, np.zeros(params.J), params, 16.0, 0.005)
    np.testing.assert_allclose(out.position, 0.0, atol=1e-15)
    np.testing.assert_allclose(out.linear_velocity_body, 0.0, atol=1e-15)
    np.testing.assert_allclose(out.angular_velocity_body, 0.0, atol=1e-15)
    np.testing.assert_allclose(accel, 0.0, atol=1e-15)
    assert abs(np.linalg.norm(out.orientation) - 1.0) < 1e-12


def test_surge_drag_balance_terminal_speed(params):
    # all four horizontal thrusters at c -> pure surge thrust
    c = 0.8
    u = np.array([c, c, c, c, 0, 0, 0, 0.0])
    voltage = params.nominal_voltage
    thrust = 4 * np.sqrt(0.5) * thruster_force(c, voltage, params)
    lin = params.linear_drag_diag[0]
    quad = params.quadratic_drag_diag[0]
    v_expected = (-lin + np.sqrt(lin**2 + 4 * quad * thrust)) / (2 * quad)

    state = RigidBodyState()
    for _ in range(2000):  # 10 s at 200 Hz
        state, _ = step_dynamics(state, u, params, voltage, 0.005)
    v_term = state.linear_velocity_body[0]
    assert abs(v_term - v_expected) / v_expected < 0.02
    # no lateral or angular motion excited by a symmetric surge push
    assert np.linalg.norm(state.linear_velocity_body[1:]) < 1e-6
    assert np.linalg.norm(state.angular_velocity_body) < 1e-6


def test_kinetic_energy_conserved_without_drag():
    params = VehicleParams(
        linear_drag_diag=np.zeros(6),
        quadratic_drag_diag=np.zeros(6),
        buoyancy_offset=np.zeros(3),
        buoyancy_ratio=1.0,
    )
    m_eff = params.effective_mass_diag()
    state = RigidBodyState(
        linear_velocity_body=np.array([0.4, 0.2, -0.15]),
        angular_velocity_body=np.array([0.5, -0.3, 0.8]),
    )

    def kinetic(s):
        nu = np.concatenate([s.linear_velocity_body, s.angular_velocity_body])
        return 0.5 * float(nu @ (m_eff * nu))

    e0 = kinetic(state)
    for _ in range(12000):  # 60 s
        state, _ = step_dynamics(state, np.zeros(8), params, 16.0, 0.005)
    assert abs(kinetic(state) - e0) / e0 < 1e-6


def test_step_rejects_nonfinite_state(params):
    state = RigidBodyState(position=np.array([0.0, np.nan, 0.0]))
    with pytest.raises(ValueError, match="position"):
        step_dynamics(state, np.zeros(params.J), params, 16.0, 0.005)


def test_step_rejects_bad_dt(params):
    with pytest.raises(ValueError, match="dt"):
        step_dynamics(RigidBodyState(), np.zeros(params.J), params, 16.0, 0.02)


def test_thruster_force_zero_command(params):
    assert thruster_force(0.0, 16.0, params) == 0.0


def test_thruster_force_full_command_nominal_voltage(params):
    assert thruster_force(1.0, params.nominal_voltage, params) == params.thrust_coefficient


def test_thruster_force_linear_in_voltage(params):
    f_low = thruster_force(0.5, 0.9 * params.nominal_voltage, params)
    f_nom = thruster_force(0.5, params.nominal_voltage, params)
    assert abs(f_low / f_nom - 0.9) < 1e-12


def test_thruster_force_signed_quadratic(params):
    assert thruster_force(-0.5, 16.0, params) == -thruster_force(0.5, 16.0, params)


def test_thruster_force_rejects_nonpositive_voltage(params):
    with pytest.raises(ValueError):
        thruster_force(0.5, 0.0, params)


def test_battery_zero_power_unchanged():
    cfg = BatteryConfig()
    assert battery_step(16.5, 0.0, 0.05, cfg) == 16.5


def test_battery_constant_power_droop():
    cfg = BatteryConfig()
    v = cfg.initial_voltage
    power, total_t, dt = 80.0, 120.0, 0.05
    for _ in range(int(total_t / dt)):
        v = battery_step(v, power, dt, cfg)
    droop = cfg.initial_voltage - v
    assert abs(droop - power * total_t * cfg.discharge_slope) < 1e-9


def test_battery_voltage_never_rises():
    cfg = BatteryConfig()
    rng = np.random.default_rng(3)
    v = cfg.initial_voltage
    for _ in range(500):
        v_new = battery_step(v, rng.uniform(0, 300), 0.05, cfg)
        assert v_new <= v
        v = v_new


def test_battery_cutoff_truncates_trajectory():
    params = VehicleParams()
    battery = BatteryConfig(initial_voltage=13.25, max_voltage=13.25, discharge_slope=5e-4)
    rec = generate_trajectory(
        make_policy("piecewise", params), 60.0, 7, params, ImuNoiseParams(), battery=battery
    )
    assert rec.meta["truncated"]
    assert rec.duration < 60.0


def test_allocation_rank_validation():
    bad = np.zeros((6, 8))
    bad[0, :] = 1.0
    with pytest.raises(ValueError, match="rank"):
        VehicleParams(allocation_matrix=bad)
