"""propodo: proprioceptive odometry for underwater vehicles.

Learns robot-centric velocity (with uncertainty) from IMU, thruster-command
and battery-voltage streams with a recurrent network ensemble, and fuses the
predictions into an error-state EKF with relative barometric depth updates.
Ships with a 6-DOF vehicle simulator used as the training/evaluation oracle.
"""

__version__ = "0.1.0"
