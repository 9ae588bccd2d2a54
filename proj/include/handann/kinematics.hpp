#pragma once

#include <array>
#include <cstdint>

#include "handann/hand_model.hpp"
#include "handann/sampling.hpp"

namespace handann {

inline constexpr int kNumSensors = 6;
inline constexpr int kPalmSensor = 6;  // S6; S1..S5 sit on the nails thumb..little

// Orientation columns decode to (V1, V2, V3): V1 along the distal bone toward
// the tip, V2 from the nail surface toward the bone axis, V3 = V1 x V2.
// With this V2 sign, T = L + l1 V1 + r V2 and D = L - l2 V1 + r V2 hold exactly.
struct SensorReading {
  int sensor_id = 0;  // 1..6
  Vec3 position = Vec3::Zero();
  Quat orientation = Quat::Identity();

  Vec3 v1() const { return orientation * Vec3::UnitX(); }
  Vec3 v2() const { return orientation * Vec3::UnitY(); }
  Vec3 v3() const { return orientation * Vec3::UnitZ(); }
  RigidTransform pose() const { return {orientation, position}; }
};

struct SensorFrame {
  std::int64_t timestamp_us = 0;
  std::array<SensorReading, kNumSensors> readings;  // slot i holds sensor i+1

  const SensorReading& sensor(int id) const { return readings[static_cast<std::size_t>(id - 1)]; }
  SensorReading& sensor(int id) { return readings[static_cast<std::size_t>(id - 1)]; }
};

// Throws MalformedFrame unless each id 1..6 occupies its slot once with a unit
// quaternion, and the timestamp is non-negative.
void check_frame(const SensorFrame& frame);

// Local coordinate frames of each finger segment, palm-local or world
// depending on the caller; column 0 = bone axis, 1 = lateral, 2 = dorsal.
struct FingerFrames {
  Mat3 proximal;
  Mat3 middle;
  Mat3 distal;
};

// MCP rotation order: abduction about the dorsal normal, then flexion about the
// lateral axis, then twist about the bone axis. PIP and DIP flex about the
// lateral axis, so each chain stays in its finger plane.
FingerFrames finger_frames(const HandShape& shape, int finger, const FingerPose& fp);

Skeleton forward_kinematics(const HandShape& shape, const HandPose& pose,
                            const JointLimits& limits = JointLimits::defaults());

// Sensor readings for a consistent skeleton. Nail sensors take their frames
// from the finger chain recovered from the skeleton; S6 is the fitted palm
// transform composed with shape.s6_offset.
SensorFrame simulate_sensors(const HandShape& shape, const Skeleton& skeleton, std::int64_t timestamp_us);

// Same, skipping the skeleton round trip: frames come straight from the pose.
// Differs from simulate_sensors only in the roll about V1 of a fully straight finger.
SensorFrame simulate_sensors_from_pose(const HandShape& shape, const HandPose& pose, std::int64_t timestamp_us);

// Test utility: Gaussian position noise (sigma per axis, mm) and rotation noise
// (rotation vector with sigma per axis, degrees) applied to every reading.
SensorFrame add_sensor_noise(const SensorFrame& frame, double sigma_pos_mm, double sigma_rot_deg, Rng& rng);

}  // namespace handann

namespace handann {

// Palm-local -> frame-of-skeleton transform, least-squares fit of the six
// palm joints onto shape.palm_points.
RigidTransform fit_palm(const Skeleton& skeleton, const HandShape& shape);

// Inverse of the finger chain: angles from M, P, D, T given in palm-local
// coordinates. Abduction and twist are reported in (-90, 90] deg; a straight
// finger has no defined plane and gets twist 0.
FingerPose finger_angles_from_chain(const HandShape& shape, int finger, const Vec3& m, const Vec3& p,
                                    const Vec3& d, const Vec3& t);

}  // namespace handann
