#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "handann/geometry.hpp"

namespace handann {

inline constexpr int kNumFingers = 5;
inline constexpr int kNumJoints = 21;

// Fixed serialization order: W, then per finger (thumb..little) M, P, D, T.
enum class JointId : int {
  W = 0,
  M1, P1, D1, T1,
  M2, P2, D2, T2,
  M3, P3, D3, T3,
  M4, P4, D4, T4,
  M5, P5, D5, T5,
};

enum class Landmark : int { M = 0, P = 1, D = 2, T = 3 };

// finger in 0..4 (thumb..little).
constexpr JointId joint(int finger, Landmark lm) {
  return static_cast<JointId>(1 + 4 * finger + static_cast<int>(lm));
}
constexpr int index(JointId id) { return static_cast<int>(id); }

std::string_view joint_name(JointId id);
std::optional<JointId> parse_joint(std::string_view name);

enum class Frame { Tracker, Camera, PalmLocal };
std::string_view frame_name(Frame f);

struct FingerShape {
  double proximal = 0.0;   // |M - P|
  double middle = 0.0;     // |P - D|
  double distal = 0.0;     // |D - T|, the nail segment
  double half_thickness = 0.0;
  double nail_fraction = 0.5;  // sensor sits nail_fraction * distal back from T

  double tip_offset() const { return nail_fraction * distal; }            // sensor -> T
  double dip_offset() const { return (1.0 - nail_fraction) * distal; }    // sensor -> D
};

// Per-subject geometry. Palm points are in the palm-local frame: origin at W,
// x toward M3, z along the back-of-hand normal.
struct HandShape {
  std::array<Vec3, 6> palm_points;  // W, M1..M5
  std::array<FingerShape, kNumFingers> fingers;
  RigidTransform s6_offset;  // S6 sensor frame -> palm-local frame

  const Vec3& wrist() const { return palm_points[0]; }
  const Vec3& mcp(int finger) const { return palm_points[1 + finger]; }

  static HandShape default_shape();
};

// Angles in radians.
struct FingerPose {
  double mcp_twist = 0.0;
  double mcp_flexion = 0.0;
  double mcp_abduction = 0.0;
  double pip_flexion = 0.0;
  double dip_flexion = 0.0;
};

struct HandPose {
  RigidTransform global;  // palm-local -> tracker
  std::array<FingerPose, kNumFingers> fingers{};

  static HandPose rest() { return {}; }
};

struct AngleRange {
  double lo = 0.0;
  double hi = 0.0;
  bool contains(double a, double slack = 1e-12) const { return a >= lo - slack && a <= hi + slack; }
  double mid() const { return 0.5 * (lo + hi); }
};

struct JointLimits {
  AngleRange mcp_twist;
  AngleRange mcp_flexion;
  AngleRange mcp_abduction;
  AngleRange pip_flexion;
  AngleRange dip_flexion;

  static JointLimits defaults();
};

struct Skeleton {
  std::array<Vec3, kNumJoints> positions;
  Frame frame = Frame::Tracker;

  const Vec3& operator[](JointId id) const { return positions[static_cast<std::size_t>(index(id))]; }
  Vec3& operator[](JointId id) { return positions[static_cast<std::size_t>(index(id))]; }
  const Vec3& at(int finger, Landmark lm) const { return (*this)[joint(finger, lm)]; }
  Vec3& at(int finger, Landmark lm) { return (*this)[joint(finger, lm)]; }

  // Joints the annotator could not produce are stored as NaN.
  bool has(JointId id) const;
};

struct ValidationReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
  explicit operator bool() const { return ok(); }
};

ValidationReport validate_shape(const HandShape& shape);
ValidationReport validate_pose(const HandPose& pose, const JointLimits& limits = JointLimits::defaults());
ValidationReport skeleton_consistency(const Skeleton& skel, const HandShape& shape,
                                      double tau_plane, double tau_len);

// Rest-pose frame of a finger in palm-local coordinates: columns are the bone
// axis, the lateral (flexion) axis and the dorsal normal.
Mat3 finger_base_frame(const HandShape& shape, int finger);

}  // namespace handann
